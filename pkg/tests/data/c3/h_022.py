class H22_C0:
    pass

class H22_C1:
    pass

class H22_C2:
    pass
