class H43_C0:
    pass

class H43_C1:
    pass
