"""Post-inflation expansion driven by slow unit increases of n.

Each unit increase of n stretches distances by ``e^epsilon``; n grows by one
every ``1/gamma`` years, so the Hubble constant is ``gamma * epsilon`` and
recession velocity is a staircase in distance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

from rnspace.inflation import C_CM_S
from rnspace.numbers import StringNumber, spacing
from rnspace.space import section_point_count

SECONDS_PER_YEAR = 31_557_600.0  # Julian year
CM_PER_MPC = 3.0857e24
KM_PER_MPC = CM_PER_MPC / 1e5
REFERENCE_H0 = 71.0  # km/s/Mpc
DEFAULT_SCATTER = 0.10
DEFAULT_SEED = 20060401


def hubble_per_year(h_km_s_mpc: float) -> float:
    return h_km_s_mpc / KM_PER_MPC * SECONDS_PER_YEAR


def hubble_km_s_mpc(h_per_year: float) -> float:
    return h_per_year / SECONDS_PER_YEAR * KM_PER_MPC


@dataclass(frozen=True)
class HubbleModel:
    gamma: float  # unit increases of n per year
    epsilon: float
    tI: float = 0.0  # seconds
    nI: int = 0
    c: float = C_CM_S
    extend_before_inflation: bool = False

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")

    @classmethod
    def from_hubble(cls, h_km_s_mpc: float = REFERENCE_H0, *, epsilon: float | None = None,
                    period_myr: float | None = None, **kwargs) -> HubbleModel:
        """Fix gamma * epsilon to the given Hubble constant and one of the two
        factors; the other follows."""
        h = hubble_per_year(h_km_s_mpc)
        if (epsilon is None) == (period_myr is None):
            raise ValueError("give exactly one of epsilon, period_myr")
        if period_myr is not None:
            gamma = 1.0 / (period_myr * 1e6)
            return cls(gamma, h / gamma, **kwargs)
        if epsilon <= 0:
            raise ValueError("epsilon must be positive to fix gamma from H")
        return cls(h / epsilon, epsilon, **kwargs)

    @property
    def period_myr(self) -> float:
        return 1e-6 / self.gamma

    @property
    def c_km_s(self) -> float:
        return self.c / 1e5

    @property
    def step_height_km_s(self) -> float:
        return self.c_km_s * self.epsilon

    @property
    def step_spacing_mpc(self) -> float:
        """Distance between risers, ``c / gamma``."""
        return self.c * SECONDS_PER_YEAR / self.gamma / CM_PER_MPC


def n_of_t(t: float, model: HubbleModel) -> int:
    """Precision at time ``t`` (seconds): ``floor(gamma (t - tI)) + nI``."""
    if t < model.tI:
        raise ValueError("n(t) is only modelled for t >= tI")
    return math.floor(model.gamma * (t - model.tI) / SECONDS_PER_YEAR) + model.nI


def b_factor(a, delta_n: int, model: HubbleModel) -> float:
    if delta_n < 0:
        raise ValueError("n never decreases")
    return float(a) * math.exp(model.epsilon * delta_n)


def cumulative_b(A, n_later: int, n_earlier: int, model: HubbleModel) -> float:
    """B(j', j) = A(j', j) e^(epsilon (n(j') - n(j)))."""
    return b_factor(A, n_later - n_earlier, model)


def inflation_jump_factor(model: HubbleModel, n0: int) -> float:
    """Extra stretch from the n0 -> nI jump, applied only when the model
    extends the e^(epsilon dn) factor back through inflation."""
    if not model.extend_before_inflation:
        return 1.0
    return math.exp(model.epsilon * (model.nI - n0))


def hubble_constant(model: HubbleModel) -> float:
    """gamma * epsilon, per year."""
    return model.gamma * model.epsilon


def recession_velocity(distance_mpc, model: HubbleModel):
    """``c epsilon floor(D gamma / c)`` in km/s; accepts scalars or arrays."""
    D = np.asarray(distance_mpc, dtype=float)
    if np.any(D <= 0):
        raise ValueError("distances must be positive")
    steps = np.floor(D / model.step_spacing_mpc)
    v = model.step_height_km_s * steps
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class VelocityDistanceSample:
    distance: float  # Mpc
    velocity: float  # km/s
    sigma: float = 0.0  # km/s

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError(f"distance must be positive, got {self.distance}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class ObservabilityReport:
    H_fit: float  # km/s/Mpc, least squares through the origin
    rms_linear: float
    rms_step: float
    step_height_km_s: float
    step_spacing_mpc: float
    verdict: str
    epsilon_upper_limit: float

    @property
    def observable(self) -> bool:
        return self.verdict == "observable"

    def as_dict(self) -> dict:
        return {
            "H_fit": self.H_fit,
            "step_height_km_s": self.step_height_km_s,
            "step_spacing_mpc": self.step_spacing_mpc,
            "verdict": self.verdict,
            "epsilon_upper_limit": self.epsilon_upper_limit,
            "rms_linear_km_s": self.rms_linear,
            "rms_step_km_s": self.rms_step,
        }


def step_observability(samples: Sequence[VelocityDistanceSample], model: HubbleModel) -> ObservabilityReport:
    """Would the model's velocity steps stand out of the data's scatter?

    Steps count as observable when their height ``c epsilon`` exceeds twice
    the RMS residual of the best straight line through the origin.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    D = np.array([s.distance for s in samples])
    v = np.array([s.velocity for s in samples])
    h_fit = float(D @ v / (D @ D))
    rms_linear = float(np.sqrt(np.mean((v - h_fit * D) ** 2)))
    rms_step = float(np.sqrt(np.mean((v - recession_velocity(D, model)) ** 2)))
    height = model.step_height_km_s
    return ObservabilityReport(
        H_fit=h_fit,
        rms_linear=rms_linear,
        rms_step=rms_step,
        step_height_km_s=height,
        step_spacing_mpc=model.step_spacing_mpc,
        verdict="observable" if height > 2 * rms_linear else "hidden",
        epsilon_upper_limit=2 * rms_linear / model.c_km_s,
    )


def synthetic_samples(model: HubbleModel, count: int = 200, d_min: float = 1.0,
                      d_max: float = 100.0, scatter: float = DEFAULT_SCATTER,
                      seed: int = DEFAULT_SEED, noise_h: float = REFERENCE_H0) -> list[VelocityDistanceSample]:
    """Galaxies uniform in distance whose velocities follow the step law plus
    Gaussian noise of ``scatter * noise_h * D``."""
    rng = np.random.default_rng(seed)
    D = np.sort(rng.uniform(d_min, d_max, count))
    sigma = scatter * noise_h * D
    v = recession_velocity(D, model) + rng.normal(0.0, 1.0, count) * sigma
    return [VelocityDistanceSample(float(a), float(b), float(s)) for a, b, s in zip(D, v, sigma)]


@dataclass(frozen=True)
class EpsilonScan:
    epsilons: tuple[float, ...]
    verdicts: tuple[str, ...]

    @property
    def epsilon_upper_limit(self) -> float | None:
        """Largest scanned epsilon whose steps stay hidden."""
        limit = None
        for eps, verdict in zip(self.epsilons, self.verdicts):
            if verdict == "hidden":
                limit = eps
        return limit


def scan_epsilon(epsilons: Iterable[float], h_km_s_mpc: float = REFERENCE_H0,
                 samples: Sequence[VelocityDistanceSample] | None = None, **synthetic_kwargs) -> EpsilonScan:
    """Verdict for each epsilon at fixed ``gamma * epsilon = H``.

    Without ``samples`` each epsilon gets its own synthetic dataset drawn
    from its step model (same seed, so the noise realisation is shared).
    """
    eps_sorted = tuple(sorted(float(e) for e in epsilons))
    verdicts = []
    for eps in eps_sorted:
        model = HubbleModel.from_hubble(h_km_s_mpc, epsilon=eps)
        data = samples if samples is not None else synthetic_samples(
            model, noise_h=h_km_s_mpc, **synthetic_kwargs)
        verdicts.append(step_observability(data, model).verdict)
    return EpsilonScan(eps_sorted, tuple(verdicts))


SAMPLE_COLUMNS = ("distance_mpc", "velocity_km_s", "sigma_km_s")


class SampleFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def read_samples_csv(f: TextIO) -> list[VelocityDistanceSample]:
    reader = csv.reader(f)
    try:
        header = next(reader)
    except StopIteration:
        raise SampleFileError("empty file, header required", 1) from None
    if tuple(h.strip() for h in header) != SAMPLE_COLUMNS:
        raise SampleFileError(f"header must be {','.join(SAMPLE_COLUMNS)}", 1)
    samples = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise SampleFileError(f"expected 3 fields, got {len(row)}", line)
        try:
            samples.append(VelocityDistanceSample(*(float(cell) for cell in row)))
        except ValueError as exc:
            raise SampleFileError(str(exc), line) from None
    return samples


def write_samples_csv(samples: Iterable[VelocityDistanceSample], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SAMPLE_COLUMNS)
    for s in samples:
        writer.writerow((repr(s.distance), repr(s.velocity), repr(s.sigma)))


# --- n -> n + 1 ------------------------------------------------------------


def precision_remap(x: StringNumber) -> StringNumber:
    """Carry a scale-0 value from R_n to R_(n+1) by padding its string with
    one leading and one trailing zero; the value is unchanged."""
    if x.scale != 0:
        raise ValueError("only scale-0 values are remapped")
    if x.is_zero():
        return StringNumber.zero(x.n + 1)
    return StringNumber(x.n + 1, x.sign, 2 * x.mantissa, 0)


def remap_point_growth(n: int) -> Fraction:
    """Ratio of scale-0 section point counts, precision n+1 over n."""
    return Fraction(section_point_count(n + 1), section_point_count(n))


def radial_gap_ratio(n: int, epsilon: float) -> float:
    """Adjacent radial gap at n+1 over the gap at n, including the
    ``e^epsilon`` stretch of the unit n step."""
    return math.exp(epsilon) * float(spacing(0, n + 1) / spacing(0, n))


def relative_radial_gap_ratio(n: int) -> Fraction:
    """Same ratio with each gap measured against its section's radial extent
    (2^n at precision n)."""
    return (spacing(0, n + 1) / (1 << (n + 1))) / (spacing(0, n) / (1 << n))
