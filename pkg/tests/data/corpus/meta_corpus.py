MyList = type('MyList', (list, ), {'pretty_string': lambda self: "test"})

foo = MyList([1, 2, 3])
bar = [MyList]
