"""Points of three dimensional R_n space in spherical coordinates.

The radial coordinate is an R_n number.  Angles are the multiples
``k * 2^-n`` of the angular step, stored as integer indices; the count of
polar / azimuthal angles per sphere is ``floor(2^n pi)`` and
``floor(2^(n+1) pi)``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, TextIO

import mpmath

from rnspace.numbers import (
    DEFAULT_ROUNDING,
    PrecisionMismatch,
    Rounding,
    StringNumber,
    predecessor,
    round_to,
    successor,
    value_of,
)

DEFAULT_ENUMERATION_CAP = 5


@lru_cache(maxsize=None)
def floor_pi_multiple(k: int) -> int:
    """``floor(2^k * pi)`` computed exactly."""
    with mpmath.workprec(abs(k) + 80):
        return int(mpmath.floor(mpmath.ldexp(mpmath.pi, k)))


def polar_angle_count(n: int) -> int:
    return floor_pi_multiple(n)


def azimuthal_angle_count(n: int) -> int:
    return floor_pi_multiple(n + 1)


class SingularityClass(enum.Enum):
    ORIGIN_3D = "origin-3d"
    Z_AXIS_2D = "z-axis-2d"
    PHI0_PLANE_1D = "phi0-plane-1d"
    NONE = "none"


@dataclass(frozen=True)
class SpacePoint:
    r: StringNumber
    theta_index: int = 0
    phi_index: int = 0

    def __post_init__(self):
        if self.r.sign < 0:
            raise ValueError("radial coordinate must be >= 0")
        if not 0 <= self.theta_index <= polar_angle_count(self.n):
            raise ValueError(f"polar index {self.theta_index} outside [0, pi]")
        if not 0 <= self.phi_index <= azimuthal_angle_count(self.n):
            raise ValueError(f"azimuthal index {self.phi_index} outside [0, 2 pi)")

    @classmethod
    def origin(cls, n: int) -> SpacePoint:
        return cls(StringNumber.zero(n))

    @property
    def n(self) -> int:
        return self.r.n

    @property
    def theta(self) -> Fraction:
        return Fraction(self.theta_index, 1 << self.n)

    @property
    def phi(self) -> Fraction:
        return Fraction(self.phi_index, 1 << self.n)

    def is_origin(self) -> bool:
        return self.r.is_zero()

    def with_r(self, r: StringNumber) -> SpacePoint:
        return SpacePoint(r, self.theta_index, self.phi_index)


@dataclass(frozen=True)
class ScaleSection:
    """All points whose radial coordinate has scale factor ``e``."""

    n: int
    e: int

    @property
    def shell_count(self) -> int:
        return (1 << (2 * self.n)) - 1

    @property
    def point_count(self) -> int:
        return section_point_count(self)

    @property
    def inner_radius(self) -> Fraction:
        return value_of(StringNumber(self.n, 1, 1, self.e))

    @property
    def outer_radius(self) -> Fraction:
        return value_of(StringNumber(self.n, 1, self.shell_count, self.e))


def transform_out(p: SpacePoint) -> SpacePoint:
    """F_<: move the point one radial step away from the origin."""
    if p.is_origin():
        raise ValueError("the origin has no image under F_<")
    return p.with_r(successor(p.r))


def transform_in(p: SpacePoint) -> SpacePoint:
    """F_>: move the point one radial step toward the origin."""
    if p.is_origin():
        raise ValueError("the origin has no image under F_>")
    return p.with_r(predecessor(p.r))


def _same_ray(p2: SpacePoint, p1: SpacePoint) -> bool:
    if p2.theta_index == 0 and p1.theta_index == 0:
        return True
    return p2.theta_index == p1.theta_index and p2.phi_index == p1.phi_index


def _cos_separation(p2: SpacePoint, p1: SpacePoint) -> Fraction:
    # relative error far below one ulp of R_n; see distance()
    with mpmath.workprec(4 * p2.n + 64):
        t1, t2 = mpmath.mpf(p1.theta_index), mpmath.mpf(p2.theta_index)
        f1, f2 = mpmath.mpf(p1.phi_index), mpmath.mpf(p2.phi_index)
        scale = mpmath.ldexp(1, -p2.n)
        t1, t2, f1, f2 = t1 * scale, t2 * scale, f1 * scale, f2 * scale
        c = mpmath.sin(t1) * mpmath.sin(t2) * mpmath.cos(f2 - f1) + mpmath.cos(t1) * mpmath.cos(t2)
        sign, mantissa, exponent, _ = c._mpf_
    # man_exp drops the sign, so read the raw tuple
    value = Fraction(int(mantissa)) * (Fraction(2) ** int(exponent))
    return -value if sign else value


def round_sqrt(q: Fraction, n: int, rounding: Rounding = DEFAULT_ROUNDING) -> StringNumber:
    """Nearest R_n value to ``sqrt(q)``, decided with exact comparisons."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return StringNumber.zero(n)
    num, den = q.numerator, q.denominator
    k = max(0, (den.bit_length() - num.bit_length()) // 2 + 2 * n + 8)
    approx = Fraction(math.isqrt((num << (2 * k)) // den), 1 << k)
    lo = round_to(approx if approx else Fraction(1, 1 << k), n)
    while value_of(lo) ** 2 > q:
        lo = predecessor(lo)
    while value_of(successor(lo)) ** 2 <= q:
        lo = successor(lo)
    low = value_of(lo)
    if low * low == q:
        return lo
    hi = successor(lo)
    mid = (low + value_of(hi)) / 2
    if q < mid * mid:
        return lo
    if q > mid * mid:
        return hi
    if rounding is Rounding.TOWARD_ZERO:
        return lo
    if rounding is Rounding.AWAY_FROM_ZERO:
        return hi
    # ties to even on the position along the uniform grid of the lower section
    return lo if lo.mantissa % 2 == 0 else hi


def distance(p2: SpacePoint, p1: SpacePoint, rounding: Rounding = DEFAULT_ROUNDING) -> StringNumber:
    """Distance between two points as an R_n number.

    Points on one ray (including pairs with the origin) use the exact radial
    difference.  Other pairs use the law of cosines with trig evaluated to
    ``4n + 64`` bits, then the square root is rounded exactly into R_n.
    """
    if p2.n != p1.n:
        raise PrecisionMismatch(f"precision mismatch: n={p2.n} vs n={p1.n}")
    n = p2.n
    if p1.is_origin():
        return p2.r
    if p2.is_origin():
        return p1.r
    r2, r1 = value_of(p2.r), value_of(p1.r)
    if _same_ray(p2, p1):
        return round_to(abs(r2 - r1), n, rounding)
    squared = r1 * r1 + r2 * r2 - 2 * r1 * r2 * _cos_separation(p2, p1)
    return round_sqrt(max(squared, Fraction(0)), n, rounding)


def section_point_count(section: ScaleSection | int) -> int:
    """Lattice points in one scale section: ``(4^n - 1) floor(2^n pi) floor(2^(n+1) pi)``."""
    n = section.n if isinstance(section, ScaleSection) else section
    return ((1 << (2 * n)) - 1) * polar_angle_count(n) * azimuthal_angle_count(n)


def classify_singularity(p: SpacePoint) -> SingularityClass:
    if p.is_origin():
        return SingularityClass.ORIGIN_3D
    # theta = pi is never a multiple of 2^-n, so the z axis is theta index 0
    if p.theta_index == 0:
        return SingularityClass.Z_AXIS_2D
    if p.phi_index == 0:
        return SingularityClass.PHI0_PLANE_1D
    return SingularityClass.NONE


def enumerate_section(section: ScaleSection, max_n: int = DEFAULT_ENUMERATION_CAP) -> Iterator[SpacePoint]:
    """Yield every lattice point of ``section`` once, radius-major."""
    if section.n > max_n:
        raise ValueError(
            f"refusing to enumerate n={section.n} (> cap {max_n}); "
            f"{section.point_count} points"
        )
    n, e = section.n, section.e
    n_theta, n_phi = polar_angle_count(n), azimuthal_angle_count(n)
    for m in range(1, section.shell_count + 1):
        r = StringNumber(n, 1, m, e)
        for i in range(n_theta):
            for j in range(n_phi):
                yield SpacePoint(r, i, j)


CSV_COLUMNS = ("r_exact_num", "r_exact_den", "e", "theta_index", "phi_index", "singularity")


def write_section_csv(section: ScaleSection, out: TextIO, max_n: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Write the enumerated section as CSV; returns the number of rows."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    rows = 0
    for p in enumerate_section(section, max_n):
        r = value_of(p.r)
        writer.writerow(
            (r.numerator, r.denominator, p.r.scale, p.theta_index, p.phi_index,
             classify_singularity(p).value)
        )
        rows += 1
    return rows


def section_csv(section: ScaleSection, max_n: int = DEFAULT_ENUMERATION_CAP) -> str:
    buf = io.StringIO()
    write_section_csv(section, buf, max_n)
    return buf.getvalue()
