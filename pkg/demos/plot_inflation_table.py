"""
Inflation from constant-rate iteration
======================================

Sections far from the origin recede by one grid step per tick, and grid steps
grow by 4^n0 per section, so outer sections eventually outrun light.
"""

from rnspace.inflation import (
    WORKED_ROWS,
    InflationConfig,
    averaged_velocity,
    cycle_length,
    generate_table,
    indistinguishability_bound,
    run_trace,
    table_text,
)
from rnspace.numbers import StringNumber
from rnspace.space import SpacePoint

# one full cycle multiplies every distance from the origin by 4^n0
cfg = InflationConfig(0, 2)
L = cycle_length(2)
trace = run_trace(SpacePoint(StringNumber(2, 1, 1, 0)), SpacePoint.origin(2), 3 * L, cfg)
for m in range(3):
    print(f"cycle {m}: A = {trace[(m + 1) * L].A}, <V> = {averaged_velocity(trace, m):.4g} cm/s")

# beta = 1e6 ticks/s and d = c / (beta 2^20)
print()
print(table_text(generate_table(WORKED_ROWS)))

n = indistinguishability_bound()
print(f"2^(2n) covers 1e28 cm / 1e-33 cm from n = {n}")
