"""Constant-rate iteration of F_< and the inflation parameters it implies.

Lengths are in units of the distance parameter ``d`` unless a name ends in
``_cm``; one iteration step lasts ``1/beta`` seconds.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, TextIO

from rnspace.numbers import StringNumber, _floor_log2, value_of
from rnspace.space import SpacePoint, distance, section_point_count, transform_out

C_CM_S = 2.9979e10
DEFAULT_BETA = 1e6
DEFAULT_LOG2_RATIO = 20

# (e0, n0) of the worked examples
WORKED_ROWS: tuple[tuple[int, int], ...] = (
    (-3, 20), (-2, 20), (-10, 10), (-5, 10), (-10, 5), (-5, 5),
    (-2, 5), (0, 5), (-10, 3), (-5, 3), (-2, 3),
)


def cycle_length(n: int) -> int:
    """Successor steps that carry (m=1, e) to (m=1, e+1)."""
    return (1 << (2 * n)) - 1


@dataclass(frozen=True)
class InflationConfig:
    """Initial conditions of an inflation run.

    Give either ``d`` or ``log2_ratio`` (= log2(c / (beta d))); the other is
    derived.  With neither, ``log2_ratio`` defaults to 20.
    """

    e0: int
    n0: int
    beta: float = DEFAULT_BETA
    d: float | None = None
    c: float = C_CM_S
    log2_ratio: float | None = None

    def __post_init__(self):
        if not isinstance(self.n0, int) or self.n0 < 1:
            raise ValueError(f"n0 must be a positive integer, got {self.n0!r}")
        if not isinstance(self.e0, int) or self.e0 > 0:
            raise ValueError(f"e0 must be an integer <= 0, got {self.e0!r}")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.d is None:
            ratio = DEFAULT_LOG2_RATIO if self.log2_ratio is None else self.log2_ratio
            object.__setattr__(self, "log2_ratio", ratio)
            object.__setattr__(self, "d", self.c / (self.beta * 2.0 ** ratio))
        else:
            if not self.d > 0:
                raise ValueError("d must be positive")
            derived = math.log2(self.c / (self.beta * self.d))
            if self.log2_ratio is None:
                object.__setattr__(self, "log2_ratio", derived)
            elif abs(derived - self.log2_ratio) > 1e-9 * max(1.0, abs(self.log2_ratio)):
                raise ValueError(
                    f"log2_ratio={self.log2_ratio} inconsistent with beta, d, c (gives {derived})"
                )

    @property
    def delta_exact(self) -> Fraction:
        """Most efficient band width, ``-e0 + log2_ratio/(2 n0) + 1/2``."""
        return -self.e0 + Fraction(self.log2_ratio) / (2 * self.n0) + Fraction(1, 2)


@dataclass(frozen=True)
class InflationReport:
    e0: int
    n0: int
    delta_exact: Fraction
    delta: int
    mI: int
    jI: int
    tauI: float
    nI: int
    nI_closed_form: int
    NDelta: int
    log2_R_IO: int
    log2_R_FO: int
    log2_R_II: int
    log2_R_FI: int

    @property
    def R_IO(self) -> Fraction:
        return _pow2(self.log2_R_IO)

    @property
    def R_FO(self) -> Fraction:
        return _pow2(self.log2_R_FO)

    @property
    def R_II(self) -> Fraction:
        return _pow2(self.log2_R_II)

    @property
    def R_FI(self) -> Fraction:
        return _pow2(self.log2_R_FI)

    @property
    def inflation_factor(self) -> Fraction:
        return self.R_FO / self.R_IO


def _pow2(k: int) -> Fraction:
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)


def _round_half_down(x: Fraction) -> int:
    return math.ceil(x - Fraction(1, 2))


def solve_parameters(cfg: InflationConfig) -> InflationReport:
    n0, e0 = cfg.n0, cfg.e0
    dx = cfg.delta_exact
    mI = math.ceil(2 * dx)
    delta = _round_half_down(dx)
    jI = mI * cycle_length(n0)
    log2_R_FO = n0 * (2 * (e0 + mI) + 1)
    nI_closed_form = math.ceil(2 * n0 * dx + Fraction(cfg.log2_ratio) + 2 * n0)
    # smallest n whose zero section reaches R_FO; equals the closed form
    # whenever 2 * delta_exact is an integer, else exceeds it
    nI = max(log2_R_FO, nI_closed_form)
    return InflationReport(
        e0=e0,
        n0=n0,
        delta_exact=dx,
        delta=delta,
        mI=mI,
        jI=jI,
        tauI=jI / cfg.beta,
        nI=nI,
        nI_closed_form=nI_closed_form,
        NDelta=delta * section_point_count(n0),
        log2_R_IO=n0 * (2 * e0 + 1),
        log2_R_FO=log2_R_FO,
        log2_R_II=n0 * (2 * (e0 - delta) + 1),
        log2_R_FI=n0 * (2 * (e0 - delta + mI) + 1),
    )


def superluminal_check(cfg: InflationConfig, m: int, e: int | None = None) -> bool:
    """True once the innermost shell of the band topped by section ``e``
    moves faster than c after ``m`` section advances.

    A point of section k recedes from the origin by one grid step
    ``2^(n0(2k-1))`` per iteration.  The innermost band shell sits at
    section ``e - delta_exact + m`` after m advances, so the test is
    ``beta d 2^(n0(2(e - delta + m) - 1)) >= c``, evaluated on exact log2
    exponents.
    """
    e = cfg.e0 if e is None else e
    exponent = cfg.n0 * (2 * (e - cfg.delta_exact + m) - 1)
    return exponent >= Fraction(cfg.log2_ratio)


def band_contained(report: InflationReport, nI: int | None = None) -> bool:
    """Whether the band at t_I lies inside ``[2^-nI, 2^nI]``, the extent of
    the zero section at precision nI."""
    nI = report.nI if nI is None else nI
    return report.log2_R_FO <= nI and report.log2_R_FI >= -nI


def expansion_coefficient(n: int) -> Fraction:
    """H_n = 2n / (4^n - 1)."""
    return Fraction(2 * n, cycle_length(n))


def exponential_approximation(n: int, j: int) -> Fraction | float:
    """``2^(H_n j)``; exact (a Fraction) whenever the exponent is an integer,
    which includes every whole number of cycles."""
    if j < 0:
        raise ValueError("step count must be >= 0")
    exponent = expansion_coefficient(n) * j
    if exponent.denominator == 1:
        return _pow2(int(exponent))
    return 2.0 ** float(exponent)


def stop_velocity(nI: int, cfg: InflationConfig) -> float:
    """Expansion speed (cm/s) right after the precision jump: ``beta d 2^-nI``."""
    return math.ldexp(cfg.beta * cfg.d, -nI)


def indistinguishability_bound(universe_radius_cm=1e28, planck_length_cm=1e-33) -> int:
    """Smallest n with ``4^n >= universe radius / Planck length``."""
    ratio = _exact(universe_radius_cm) / _exact(planck_length_cm)
    if ratio <= 0:
        raise ValueError("lengths must be positive")
    n = max(1, (_floor_log2(ratio.numerator, ratio.denominator) + 1) // 2)
    while Fraction(1 << (2 * n)) < ratio:
        n += 1
    while n > 1 and Fraction(1 << (2 * (n - 1))) >= ratio:
        n -= 1
    return n


def _exact(x) -> Fraction:
    # decimal literal semantics for floats: 1.6e-33 means 16/10^34
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


# --- iteration traces ------------------------------------------------------


@dataclass(frozen=True)
class TraceRecord:
    j: int
    D: StringNumber
    a: Fraction | None
    A: Fraction | None
    V: float | None


@dataclass
class ExpansionTrace:
    n0: int
    beta: float
    d: float
    records: list[TraceRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, j):
        return self.records[j]

    def distances(self) -> list[Fraction]:
        return [value_of(r.D) for r in self.records]

    def write_csv(self, out: TextIO) -> None:
        write_trace_csv(self.records, out)

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def iterate_trace(p2: SpacePoint, p1: SpacePoint, steps: int, cfg: InflationConfig) -> Iterator[TraceRecord]:
    """Stream ``steps + 1`` records: distances at j = 0..steps with the
    one-step factor a(j+1, j), cumulative A(j) = D_j / D_0 and velocity.

    The final record carries no a or V (there is no step after it).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if p2.is_origin():
        raise ValueError("p2 must not be the origin")
    if p2.n != cfg.n0 or p1.n != cfg.n0:
        raise ValueError(f"points must be at precision n0={cfg.n0}")
    speed = cfg.beta * cfg.d

    def advance(p):
        return p if p.is_origin() else transform_out(p)

    D = distance(p2, p1)
    D0 = value_of(D)
    A = Fraction(1) if D0 else None
    for j in range(steps + 1):
        if j == steps:
            yield TraceRecord(j, D, None, A, None)
            return
        p2, p1 = advance(p2), advance(p1)
        D_next = distance(p2, p1)
        Dj = value_of(D)
        a = value_of(D_next) / Dj if Dj else None
        V = float((a - 1) * Dj) * speed if a is not None else None
        yield TraceRecord(j, D, a, A, V)
        if A is not None:
            A = a * A
        D = D_next


def run_trace(p2: SpacePoint, p1: SpacePoint, steps: int, cfg: InflationConfig) -> ExpansionTrace:
    trace = ExpansionTrace(cfg.n0, cfg.beta, cfg.d)
    trace.records.extend(iterate_trace(p2, p1, steps, cfg))
    return trace


def cycle_factor(trace: ExpansionTrace, m: int) -> Fraction:
    """A over cycle m: ``D(j_m + L) / D(j_m)`` with ``L = 4^n0 - 1``."""
    L = cycle_length(trace.n0)
    jm = m * L
    if m < 0 or jm + L >= len(trace.records):
        raise ValueError(f"trace of {len(trace.records) - 1} steps does not cover cycle {m}")
    start = value_of(trace.records[jm].D)
    if not start:
        raise ValueError("zero distance at cycle start")
    return value_of(trace.records[jm + L].D) / start


def averaged_velocity(trace: ExpansionTrace, m: int) -> float:
    """Cycle-averaged expansion velocity (cm/s),
    ``(A_cycle - 1) / L * D(j_m) * beta d``."""
    L = cycle_length(trace.n0)
    A = cycle_factor(trace, m)
    mean = (A - 1) / L * value_of(trace.records[m * L].D)
    return float(mean) * trace.beta * trace.d


TRACE_COLUMNS = ("j", "D_num", "D_den", "e_of_D", "a_num", "a_den", "A_num", "A_den", "V_cm_s")


def write_trace_csv(records: Iterable[TraceRecord], out: TextIO) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    count = 0
    for r in records:
        D = value_of(r.D)
        writer.writerow((
            r.j, D.numerator, D.denominator, r.D.scale,
            "" if r.a is None else r.a.numerator,
            "" if r.a is None else r.a.denominator,
            "" if r.A is None else r.A.numerator,
            "" if r.A is None else r.A.denominator,
            "" if r.V is None else repr(r.V),
        ))
        count += 1
    return count


# --- table of examples -----------------------------------------------------


def generate_table(rows: Sequence[tuple[int, int]], **cfg_kwargs) -> list[InflationReport]:
    return [solve_parameters(InflationConfig(e0, n0, **cfg_kwargs)) for e0, n0 in rows]


def format_pow2(k: int, digits: int = 3) -> str:
    """Scientific notation for 2^k without going through a float."""
    with localcontext() as ctx:
        ctx.prec = digits + 10
        return format(Decimal(2) ** k, f".{digits}e")


TABLE_COLUMNS = ("e0", "n0", "mI", "delta", "R_IO", "N_delta", "nI", "R_FO", "tau_I_sec")


def _table_row(r: InflationReport) -> tuple:
    return (r.e0, r.n0, r.mI, r.delta, format_pow2(r.log2_R_IO), r.NDelta, r.nI,
            format_pow2(r.log2_R_FO), f"{r.tauI:.6g}")


def write_table_csv(reports: Iterable[InflationReport], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for r in reports:
        writer.writerow(_table_row(r))


def table_csv(reports: Iterable[InflationReport]) -> str:
    buf = io.StringIO()
    write_table_csv(reports, buf)
    return buf.getvalue()


def _human_duration(seconds: float) -> str:
    if seconds >= 86400:
        return f"{seconds / 86400:.1f} days"
    return f"{seconds:.3g} sec"


def table_text(reports: Iterable[InflationReport]) -> str:
    header = ("e0", "n0", "mI", "Delta", "R_IO", "N_Delta", "nI", "R_FO", "tau_I")
    body = [
        (str(r.e0), str(r.n0), str(r.mI), str(r.delta), format_pow2(r.log2_R_IO, 1),
         format(Decimal(r.NDelta), ".1e"), str(r.nI), format_pow2(r.log2_R_FO, 1),
         _human_duration(r.tauI))
        for r in reports
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in [header, *body]]
    return "\n".join(lines) + "\n"
