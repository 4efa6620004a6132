class H40_C0:
    pass

class H40_C1:
    pass

class H40_C2:
    pass

class H40_C3:
    pass
