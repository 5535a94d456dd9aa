"""Independent reference computations used to derive and freeze expected values.

Nothing here imports the package: intervals are plain Fraction pairs and
digit expansions come from long division.
"""
from fractions import Fraction


def lean(n, m):
    """Interval of the lean dyadic dot (n, m)."""
    return Fraction(n, 2**m), Fraction(n + 2, 2**m)


def nary(b, n, m):
    return Fraction(n, b**m), Fraction(n + 1, b**m)


def apart(i, j):
    return i[1] < j[0] or j[1] < i[0]


def inside(i, j):
    """Interval i is contained in interval j."""
    return j[0] <= i[0] and i[1] <= j[1]


def canonical_lean(q, k):
    """Depth-k dot of the floor-hull schedule for a rational q, by integer division."""
    q = Fraction(q)
    return (q.numerator * 2**k) // q.denominator, k


def digits(x, base, count):
    """First ``count`` base-``base`` digits of x in [0,1), by long division."""
    x = Fraction(x)
    out = []
    num, den = x.numerator, x.denominator
    for _ in range(count):
        num *= base
        out.append(num // den)
        num %= den
    return out


def cantor_function(x):
    """Exact value of the devil's staircase at a rational x in [0,1].

    Reads ternary digits by long division; stops at the first digit 1, or
    detects the repeating block and sums the periodic binary expansion.
    """
    x = Fraction(x)
    if x == 1:
        return Fraction(1)
    num, den = x.numerator, x.denominator
    bits, seen = [], {}
    while num not in seen:
        seen[num] = len(bits)
        num *= 3
        d, num = divmod(num, den)
        if d == 1:
            return sum(Fraction(b, 2 ** (i + 1)) for i, b in enumerate(bits)) + Fraction(1, 2 ** (len(bits) + 1))
        bits.append(d // 2)
    start = seen[num]
    head, cycle = bits[:start], bits[start:]
    value = sum(Fraction(b, 2 ** (i + 1)) for i, b in enumerate(head))
    block = sum(Fraction(b, 2 ** (i + 1)) for i, b in enumerate(cycle))
    return value + block / 2**start * Fraction(2 ** len(cycle), 2 ** len(cycle) - 1)


def product_interval(i, j):
    ends = [a * b for a in i for b in j]
    return min(ends), max(ends)
