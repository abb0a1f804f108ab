"""Small integer arithmetic routines used by the demo suite."""


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    if b == 0:
        return 0
    total = 0
    for _ in range(abs(b)):
        total = add(total, a)
    if b < 0:
        total = -total
    return total


def div(a, b):
    quotient = 0
    remainder = a
    while remainder >= b:
        remainder = sub(remainder, b)
        quotient = quotient + 1
    return quotient
