"""
Finite binary strings as numbers
================================

Every nonzero value is a 2n-bit string with a binal point after bit n,
scaled by 2^(2n e).  This walks through the n = 1 and n = 2 sets.
"""

from fractions import Fraction

from rnspace import Rounding, StringNumber, parse, round_to, successor, value_of

# the whole positive part of R_1 for e = -1, 0, 1
for e in (-1, 0, 1):
    row = [StringNumber(1, 1, m, e) for m in (1, 2, 3)]
    print(f"e={e:>2}:", "  ".join(f"{x} = {value_of(x)}" for x in row))

# within a scale section the grid is uniform; between sections it jumps by 4^n
x = parse("0.1x2^0")
chain = [x]
for _ in range(6):
    chain.append(successor(chain[-1]))
print(" -> ".join(str(value_of(v)) for v in chain))

# arithmetic rounds the exact result back into the set
a, b = parse("10.10x2^4"), parse("11.10x2^4")
print(f"{a} + {b} = {a + b}   (exact {value_of(a) + value_of(b)})")
a, b = parse("00.11x2^4"), parse("10.01x2^-8")
print(f"{a} * {b} = {a * b}   (exact {value_of(a) * value_of(b)})")

# 7 sits halfway between 6 and 8 at n = 1
for mode in Rounding:
    print(f"round 7 at n=1, {mode.value:>14}: {round_to(Fraction(7), 1, mode)}")
