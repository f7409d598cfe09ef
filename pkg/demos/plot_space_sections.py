"""
Scale sections in three dimensions
==================================

A point carries an R_n radius and integer angle indices (angle = index / 2^n).
Iterating the successor on the radius pushes points outward, shell by shell,
then section by section.
"""

from collections import Counter

from rnspace.numbers import StringNumber, value_of
from rnspace.space import (
    ScaleSection,
    SpacePoint,
    classify_singularity,
    distance,
    enumerate_section,
    section_point_count,
    transform_out,
)

for n in (1, 2, 3, 4):
    s = ScaleSection(n, 0)
    print(f"n={n}: {s.shell_count:>3} shells, {section_point_count(s):>9,d} points per section")

# which points sit on the coordinate singularities
kinds = Counter(classify_singularity(p).value for p in enumerate_section(ScaleSection(1, 0)))
print(dict(kinds))

p = SpacePoint(StringNumber(2, 1, 1, 0), theta_index=6, phi_index=3)
q = SpacePoint(StringNumber(2, 1, 9, 0), theta_index=10, phi_index=11)
for j in range(0, 20, 4):
    print(f"j={j:>2}  |p|={value_of(p.r)!s:>5}  |q|={value_of(q.r)!s:>5}  D={value_of(distance(p, q))}")
    for _ in range(4):
        p, q = transform_out(p), transform_out(q)
