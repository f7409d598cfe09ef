"""Length-2n binary string numbers.

A nonzero number of R_n is ``±s x 2^(2n*e)`` where ``s`` is a 2n-bit string
with the binal point after bit n and ``e`` is any integer.  We keep the
string as an integer mantissa ``m`` (bit string read as a binary integer),
so the value is ``±m * 2^(-n) * 2^(2n*e)``.  With ``1 <= m <= 4^n - 1`` every
nonzero value has exactly one (m, e) pair; zero is a single distinguished
value at e = 0.

Positive values are ordered section by section: within scale e the values
``m * 2^(n(2e-1))`` are evenly spaced, and the successor of the largest one
is the smallest value of section e + 1.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational


class Rounding(enum.Enum):
    """How exact ties between two representable neighbours are broken."""

    TOWARD_ZERO = "toward_zero"
    AWAY_FROM_ZERO = "away_from_zero"
    EVEN = "even"


DEFAULT_ROUNDING = Rounding.TOWARD_ZERO


class PrecisionMismatch(ValueError):
    pass


def _check_precision(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"precision n must be a positive integer, got {n!r}")
    return n


@total_ordering
@dataclass(frozen=True)
class StringNumber:
    """A value of R_n in normalized form.

    ``sign`` is -1, 0 or +1.  Zero is the only value with ``sign == 0`` and is
    stored as ``mantissa == 0, scale == 0``.
    """

    n: int
    sign: int
    mantissa: int
    scale: int

    def __post_init__(self):
        _check_precision(self.n)
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign == 0:
            if self.mantissa != 0 or self.scale != 0:
                raise ValueError("zero is only representable as mantissa 0 at scale 0")
        elif not 1 <= self.mantissa < 1 << (2 * self.n):
            raise ValueError(
                f"mantissa {self.mantissa} outside 1..{(1 << 2 * self.n) - 1} for n={self.n}"
            )

    @classmethod
    def zero(cls, n: int) -> StringNumber:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_bits(cls, bits: str, e: int = 0, negative: bool = False) -> StringNumber:
        """Build from the binal string ``"bb.bb"`` and scale ``e``."""
        head, dot, tail = bits.partition(".")
        if not dot or len(head) != len(tail) or not head:
            raise ValueError(f"expected 2n bits split evenly by a binal point, got {bits!r}")
        if set(head + tail) - {"0", "1"}:
            raise ValueError(f"not a binary string: {bits!r}")
        n = len(head)
        m = int(head + tail, 2)
        if m == 0:
            if e != 0:
                raise ValueError("the zero string is only admissible at e = 0")
            return cls.zero(n)
        return cls(n, -1 if negative else 1, m, e)

    @property
    def max_mantissa(self) -> int:
        return (1 << (2 * self.n)) - 1

    @property
    def bits(self) -> str:
        s = format(self.mantissa, f"0{2 * self.n}b")
        return f"{s[: self.n]}.{s[self.n :]}"

    @property
    def value(self) -> Fraction:
        return value_of(self)

    def is_zero(self) -> bool:
        return self.sign == 0

    def __str__(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}{self.bits}x2^{2 * self.n * self.scale}"

    def __neg__(self) -> StringNumber:
        return StringNumber(self.n, -self.sign, self.mantissa, self.scale)

    def __abs__(self) -> StringNumber:
        return StringNumber(self.n, abs(self.sign), self.mantissa, self.scale)

    def __add__(self, other):
        if not isinstance(other, StringNumber):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, StringNumber):
            return NotImplemented
        return add(self, -other)

    def __mul__(self, other):
        if not isinstance(other, StringNumber):
            return NotImplemented
        return mul(self, other)

    def __lt__(self, other):
        if not isinstance(other, StringNumber):
            return NotImplemented
        return compare(self, other) < 0

    def __float__(self) -> float:
        return float(self.value)


def value_of(x: StringNumber) -> Fraction:
    """Exact rational value ``sign * m * 2^(n(2e-1))`` of ``x``."""
    if x.sign == 0:
        return Fraction(0)
    return x.sign * x.mantissa * _pow2(x.n * (2 * x.scale - 1))


def spacing(e: int, n: int) -> Fraction:
    """Gap between adjacent values of scale section ``e`` at precision ``n``."""
    _check_precision(n)
    return _pow2(n * (2 * e - 1))


def _pow2(k: int) -> Fraction:
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)


def _floor_log2(num: int, den: int) -> int:
    t = num.bit_length() - den.bit_length()
    if t >= 0:
        if num < den << t:
            t -= 1
    elif num << -t < den:
        t -= 1
    return t


def round_to(value, n: int, rounding: Rounding = DEFAULT_ROUNDING) -> StringNumber:
    """Nearest value of R_n to the rational ``value``.

    Positive values in ``[s_e, 4^n s_e]`` (``s_e`` the section-e spacing)
    form a uniform grid of step ``s_e`` whose top point is the first value of
    section e + 1, so rounding reduces to rounding ``value / s_e`` to an
    integer.
    """
    _check_precision(n)
    v = value if isinstance(value, Fraction) else Fraction(value)
    if v == 0:
        return StringNumber.zero(n)
    sign = 1 if v > 0 else -1
    num, den = abs(v.numerator), v.denominator

    e = _floor_log2(num << n, den) // (2 * n)
    p = n * (2 * e - 1)
    if p >= 0:
        den <<= p
    else:
        num <<= -p
    k, r = divmod(num, den)
    if r:
        twice = 2 * r
        if twice > den:
            k += 1
        elif twice == den:
            if rounding is Rounding.AWAY_FROM_ZERO or (rounding is Rounding.EVEN and k % 2):
                k += 1
    if k == 1 << (2 * n):
        k, e = 1, e + 1
    return StringNumber(n, sign, k, e)


def _same_precision(x: StringNumber, y: StringNumber) -> int:
    if x.n != y.n:
        raise PrecisionMismatch(f"precision mismatch: n={x.n} vs n={y.n}")
    return x.n


def add(x: StringNumber, y: StringNumber, rounding: Rounding = DEFAULT_ROUNDING) -> StringNumber:
    n = _same_precision(x, y)
    return round_to(value_of(x) + value_of(y), n, rounding)


def mul(x: StringNumber, y: StringNumber, rounding: Rounding = DEFAULT_ROUNDING) -> StringNumber:
    n = _same_precision(x, y)
    return round_to(value_of(x) * value_of(y), n, rounding)


def compare(x: StringNumber, y: StringNumber) -> int:
    """Return -1, 0 or 1 as ``x`` is less than, equal to or greater than ``y``."""
    _same_precision(x, y)
    if x.sign != y.sign:
        return -1 if x.sign < y.sign else 1
    if x.sign == 0:
        return 0
    key_x, key_y = (x.scale, x.mantissa), (y.scale, y.mantissa)
    if key_x == key_y:
        return 0
    less = key_x < key_y
    if x.sign < 0:
        less = not less
    return -1 if less else 1


def successor(x: StringNumber) -> StringNumber:
    """The next larger value of R_n (f_<).  Zero has no successor."""
    if x.sign == 0:
        raise ValueError("zero is outside the domain of the successor map")
    top = x.max_mantissa
    if x.sign > 0:
        if x.mantissa < top:
            return StringNumber(x.n, 1, x.mantissa + 1, x.scale)
        return StringNumber(x.n, 1, 1, x.scale + 1)
    if x.mantissa > 1:
        return StringNumber(x.n, -1, x.mantissa - 1, x.scale)
    return StringNumber(x.n, -1, top, x.scale - 1)


def predecessor(x: StringNumber) -> StringNumber:
    """The next smaller value of R_n (f_>, inverse of :func:`successor`)."""
    if x.sign == 0:
        raise ValueError("zero is outside the domain of the predecessor map")
    top = x.max_mantissa
    if x.sign > 0:
        if x.mantissa > 1:
            return StringNumber(x.n, 1, x.mantissa - 1, x.scale)
        return StringNumber(x.n, 1, top, x.scale - 1)
    if x.mantissa < top:
        return StringNumber(x.n, -1, x.mantissa + 1, x.scale)
    return StringNumber(x.n, -1, 1, x.scale + 1)


_TEXT = re.compile(
    r"""^\s*(?P<sign>[+-]?)\s*(?P<bits>[01]+\.[01]+)\s*
        (?:x|\*|×)\s*2\s*\^\s*\(?\s*(?P<exp>[+-]?\d+)\s*\)?\s*$""",
    re.VERBOSE,
)


def parse(text: str, n: int | None = None) -> StringNumber:
    """Parse ``[-]bb.bbx2^E`` where ``E = 2n*e``, e.g. ``"10.10x2^4"``."""
    match = _TEXT.match(text)
    if match is None:
        raise ValueError(f"cannot parse {text!r}; expected e.g. '10.10x2^4'")
    bits = match["bits"]
    width = len(bits.partition(".")[0])
    if n is not None and width != n:
        raise PrecisionMismatch(f"{text!r} has {2 * width} bits, expected {2 * n}")
    exponent = int(match["exp"])
    if exponent % (2 * width):
        raise ValueError(f"exponent {exponent} is not a multiple of 2n = {2 * width}")
    return StringNumber.from_bits(bits, exponent // (2 * width), negative=match["sign"] == "-")


def from_value(value: Rational | int, n: int) -> StringNumber:
    """Exact conversion; raises if ``value`` is not representable in R_n."""
    x = round_to(value, n)
    if value_of(x) != value:
        raise ValueError(f"{value} is not representable at n={n}")
    return x
