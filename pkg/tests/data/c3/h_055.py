class H55_C0:
    pass

class H55_C1:
    pass

class H55_C2:
    pass
