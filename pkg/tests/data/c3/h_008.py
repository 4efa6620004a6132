class H8_C0:
    pass

class H8_C1:
    pass

class H8_C2(H8_C0):
    pass
