class H56_C0:
    pass

class H56_C1:
    pass

class H56_C2(H56_C1):
    pass

class H56_C3(H56_C2, H56_C0):
    pass

class H56_C4(H56_C2, H56_C0):
    pass
