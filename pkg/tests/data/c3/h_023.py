class H23_C0:
    pass

class H23_C1:
    pass

class H23_C2:
    pass

class H23_C3:
    pass
