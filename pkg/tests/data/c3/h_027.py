class H27_C0:
    pass

class H27_C1(H27_C0):
    pass

class H27_C2(H27_C0):
    pass

class H27_C3(H27_C1, H27_C0, H27_C2):
    pass

class H27_C4(H27_C2):
    pass

class H27_C5(H27_C1):
    pass

class H27_C6(H27_C4, H27_C1):
    pass
