class H57_C0:
    pass

class H57_C1(H57_C0):
    pass

class H57_C2(H57_C0):
    pass

class H57_C3(H57_C0):
    pass

class H57_C4(H57_C0, H57_C2, H57_C1):
    pass

class H57_C5(H57_C1, H57_C3, H57_C2):
    pass

class H57_C6(H57_C0, H57_C1, H57_C2):
    pass

class H57_C7(H57_C3, H57_C2, H57_C1):
    pass
