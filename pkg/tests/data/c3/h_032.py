class H32_C0:
    pass

class H32_C1:
    pass

class H32_C2:
    pass
