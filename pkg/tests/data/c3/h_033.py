class H33_C0:
    pass

class H33_C1:
    pass
