import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rnspace.inflation import (
    C_CM_S,
    WORKED_ROWS,
    TABLE_COLUMNS,
    TRACE_COLUMNS,
    InflationConfig,
    averaged_velocity,
    band_contained,
    cycle_factor,
    cycle_length,
    expansion_coefficient,
    exponential_approximation,
    format_pow2,
    generate_table,
    indistinguishability_bound,
    iterate_trace,
    run_trace,
    solve_parameters,
    stop_velocity,
    superluminal_check,
    table_csv,
    table_text,
)
from rnspace.numbers import StringNumber, parse, value_of
from rnspace.space import SpacePoint


def start_point(n, e=0, m=1, theta=0, phi=0):
    return SpacePoint(StringNumber(n, 1, m, e), theta, phi)


# --- config ----------------------------------------------------------------


def test_config_defaults():
    cfg = InflationConfig(-3, 20)
    assert cfg.log2_ratio == 20
    assert cfg.d == pytest.approx(C_CM_S / (1e6 * 2**20))
    assert cfg.d == pytest.approx(0.0286, rel=1e-3)


def test_config_from_d_derives_ratio():
    cfg = InflationConfig(-3, 20, d=C_CM_S / (1e6 * 2**20))
    assert cfg.log2_ratio == pytest.approx(20, abs=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(e0=1, n0=3),
        dict(e0=0, n0=0),
        dict(e0=0, n0=3, beta=0),
        dict(e0=0, n0=3, d=-1.0),
        dict(e0=0, n0=3, d=0.03, log2_ratio=20),
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        InflationConfig(**kwargs)


# --- traces ----------------------------------------------------------------


def test_trace_example_n1():
    cfg = InflationConfig(0, 1)
    trace = run_trace(SpacePoint(parse("0.1x2^0")), SpacePoint.origin(1), 3, cfg)
    assert trace.distances() == [Fraction(1, 2), 1, Fraction(3, 2), 2]
    assert [r.a for r in trace.records[:3]] == [2, Fraction(3, 2), Fraction(4, 3)]
    assert trace.records[-1].a is None and trace.records[-1].V is None
    assert trace.records[-1].A == 4


def test_trace_rejects_bad_input():
    cfg = InflationConfig(0, 2)
    with pytest.raises(ValueError):
        run_trace(SpacePoint.origin(2), start_point(2), 3, cfg)
    with pytest.raises(ValueError):
        run_trace(start_point(2), SpacePoint.origin(2), 0, cfg)
    with pytest.raises(ValueError):
        run_trace(start_point(1), SpacePoint.origin(1), 3, cfg)


def test_trace_is_lazy():
    cfg = InflationConfig(0, 3)
    it = iterate_trace(start_point(3), SpacePoint.origin(3), 10**9, cfg)
    first = next(it)
    assert first.j == 0 and first.A == 1


@pytest.mark.parametrize("n0", [1, 2, 3])
def test_cycle_factor_is_four_to_the_n(n0):
    cfg = InflationConfig(0, n0)
    L = cycle_length(n0)
    trace = run_trace(start_point(n0, e=-1), SpacePoint.origin(n0), 3 * L, cfg)
    for m in range(3):
        assert cycle_factor(trace, m) == 1 << (2 * n0)
    with pytest.raises(ValueError):
        cycle_factor(trace, 3)


@pytest.mark.parametrize("n0", [1, 2])
def test_cycle_factor_for_off_origin_pairs(n0):
    """Two points that start at the bottom of sections and move together."""
    cfg = InflationConfig(0, n0)
    L = cycle_length(n0)
    p2 = start_point(n0, e=1)
    p1 = start_point(n0, e=0)
    trace = run_trace(p2, p1, 2 * L, cfg)
    for m in range(2):
        assert cycle_factor(trace, m) == 1 << (2 * n0)


@pytest.mark.parametrize("n0", [1, 2])
def test_averaged_velocity_grows_geometrically(n0):
    cfg = InflationConfig(0, n0)
    L = cycle_length(n0)
    p2 = start_point(n0, e=-2)
    trace = run_trace(p2, SpacePoint.origin(n0), 3 * L, cfg)
    v = [averaged_velocity(trace, m) for m in range(3)]
    assert v[0] == pytest.approx(float(value_of(p2.r)) * cfg.beta * cfg.d)
    for m in (1, 2):
        assert v[m] / v[m - 1] == pytest.approx(1 << (2 * n0), rel=1e-12)


def test_averaged_velocity_matches_mean_step_velocity():
    cfg = InflationConfig(0, 2)
    L = cycle_length(2)
    trace = run_trace(start_point(2), SpacePoint.origin(2), 2 * L, cfg)
    for m in range(2):
        mean = sum(r.V for r in trace.records[m * L:(m + 1) * L]) / L
        assert averaged_velocity(trace, m) == pytest.approx(mean, rel=1e-12)


def test_same_ray_same_section_velocity_is_zero():
    # both points step by the same grid spacing until one of them jumps
    cfg = InflationConfig(0, 2)
    p2 = start_point(2, m=9, theta=3, phi=4)
    p1 = start_point(2, m=2, theta=3, phi=4)
    trace = run_trace(p2, p1, 8, cfg)
    # the hop from m=15 to the next section is still one old grid step
    assert all(r.V == 0 for r in trace.records[:7])
    assert trace.records[7].V > 0


@settings(max_examples=40, deadline=None)
@given(
    n0=st.integers(1, 3),
    m2=st.integers(1, 63),
    e2=st.integers(-2, 1),
    m1=st.integers(0, 63),
    e1=st.integers(-2, 1),
    theta=st.integers(0, 5),
    steps=st.integers(1, 40),
    data=st.data(),
)
def test_telescoping(n0, m2, e2, m1, e1, theta, steps, data):
    top = (1 << (2 * n0)) - 1
    p2 = SpacePoint(StringNumber(n0, 1, min(m2, top), e2), theta, 1)
    p1 = SpacePoint.origin(n0) if m1 == 0 else SpacePoint(StringNumber(n0, 1, min(m1, top), e1))
    trace = run_trace(p2, p1, steps, InflationConfig(0, n0))
    recs = trace.records
    if recs[0].A is None:
        return
    lo = data.draw(st.integers(0, steps - 1))
    hi = data.draw(st.integers(lo + 1, steps))
    product = Fraction(1)
    for r in recs[lo:hi]:
        if r.a is None:
            return
        product *= r.a
    assert product == recs[hi].A / recs[lo].A
    assert recs[hi].A == value_of(recs[hi].D) / value_of(recs[0].D)


def test_trace_csv_columns():
    cfg = InflationConfig(0, 1)
    trace = run_trace(start_point(1), SpacePoint.origin(1), 3, cfg)
    rows = list(csv.reader(io.StringIO(trace.to_csv())))
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert rows[1][:3] == ["0", "1", "2"]
    assert rows[-1][4:6] == ["", ""]
    assert len(rows) == 5


def test_exact_cycle_trace_at_n3():
    cfg = InflationConfig(0, 3)
    trace = run_trace(start_point(3, e=-1), SpacePoint.origin(3), 63, cfg)
    assert trace[63].A == 64
    assert value_of(trace[63].D) == 64 * value_of(trace[0].D)


# --- parameter solver --------------------------------------------------------


EXPECTED = {
    # (e0, n0): (mI, delta, nI)
    (-3, 20): (8, 4, 220),
    (-2, 20): (6, 3, 180),
    (-10, 10): (23, 11, 270),
    (-5, 10): (13, 6, 170),
    (-10, 5): (25, 12, 155),
    (-5, 5): (15, 7, 105),
    (-2, 5): (9, 4, 75),
    (0, 5): (5, 2, 55),
    (-10, 3): (28, 14, 111),
    (-5, 3): (18, 9, 81),
    (-2, 3): (12, 6, 63),
}


@pytest.mark.parametrize("row", WORKED_ROWS)
def test_solve_parameters_rows(row):
    r = solve_parameters(InflationConfig(*row))
    assert (r.mI, r.delta, r.nI) == EXPECTED[row]
    assert r.jI == r.mI * cycle_length(r.n0)
    assert r.tauI == pytest.approx(r.jI / 1e6)
    assert r.R_IO < r.R_FO and r.R_II < r.R_FI
    assert r.inflation_factor == 2 ** (2 * r.n0 * r.mI)


def test_solve_parameters_row_examples():
    r = solve_parameters(InflationConfig(-3, 20))
    assert (r.delta, r.mI, r.nI) == (4, 8, 220)
    assert r.log2_R_IO == -100 and r.log2_R_FO == 220
    r = solve_parameters(InflationConfig(-10, 10))
    assert (r.mI, r.delta) == (23, 11)
    assert r.NDelta == pytest.approx(2e14, rel=0.25)
    assert r.tauI == pytest.approx(23, rel=0.1)
    r = solve_parameters(InflationConfig(0, 5))
    assert (r.mI, r.delta, r.R_IO) == (5, 2, 32)


def test_nI_closed_form_agrees_when_band_is_whole():
    for row in WORKED_ROWS:
        r = solve_parameters(InflationConfig(*row))
        if (2 * r.delta_exact).denominator == 1:
            assert r.nI == r.nI_closed_form
        else:
            assert r.nI > r.nI_closed_form


def test_huge_radii_are_exact():
    r = solve_parameters(InflationConfig(-3, 20))
    assert r.R_FO == 2**220
    assert format_pow2(220, 2) == "1.68e+66"
    assert format_pow2(-100, 2) == "7.89e-31"


@pytest.mark.parametrize("row", WORKED_ROWS)
def test_superluminal_flips_at_mI(row):
    cfg = InflationConfig(*row)
    r = solve_parameters(cfg)
    assert not superluminal_check(cfg, r.mI - 1)
    assert superluminal_check(cfg, r.mI)
    assert not superluminal_check(cfg, 0)


@settings(max_examples=60, deadline=None)
@given(e0=st.integers(-30, 0), n0=st.integers(1, 25), ratio=st.integers(1, 40))
def test_superluminal_monotone_and_minimal(e0, n0, ratio):
    cfg = InflationConfig(e0, n0, log2_ratio=ratio)
    r = solve_parameters(cfg)
    flags = [superluminal_check(cfg, m) for m in range(r.mI + 3)]
    assert flags.index(True) == r.mI
    assert all(flags[r.mI:])
    assert band_contained(r)
    assert not band_contained(r, r.nI - 2 * n0)


@pytest.mark.parametrize("row", WORKED_ROWS)
def test_band_contained(row):
    r = solve_parameters(InflationConfig(*row))
    assert band_contained(r)
    assert not band_contained(r, r.nI - 2 * r.n0)


# --- closed forms -----------------------------------------------------------


def test_expansion_coefficient():
    assert expansion_coefficient(1) == Fraction(2, 3)
    assert expansion_coefficient(2) == Fraction(4, 15)


def test_exponential_approximation():
    assert exponential_approximation(1, 3) == 4
    assert exponential_approximation(1, 0) == 1
    assert exponential_approximation(1, 1) == pytest.approx(2 ** (2 / 3))
    with pytest.raises(ValueError):
        exponential_approximation(1, -1)
    for n in (1, 2, 3):
        for m in range(1, 5):
            assert exponential_approximation(n, m * cycle_length(n)) == 2 ** (2 * n * m)


def test_exponential_approximation_matches_trace_on_cycles():
    cfg = InflationConfig(0, 2)
    trace = run_trace(start_point(2), SpacePoint.origin(2), 45, cfg)
    for j in (15, 30, 45):
        assert trace[j].A == exponential_approximation(2, j)


def test_stop_velocity():
    cfg = InflationConfig(-3, 20)
    assert stop_velocity(220, cfg) == pytest.approx(1.7e-62, rel=0.05)
    assert stop_velocity(221, cfg) < stop_velocity(220, cfg)
    for row in WORKED_ROWS:
        cfg = InflationConfig(*row)
        assert stop_velocity(solve_parameters(cfg).nI, cfg) < cfg.c


def test_indistinguishability_bound():
    n = indistinguishability_bound()
    assert n == 102
    ratio = Fraction(10**28) * 10**33
    assert 2 ** (2 * 101) < ratio <= 2 ** (2 * 102)
    assert indistinguishability_bound(1e30) >= n
    assert indistinguishability_bound(1e26) <= n


def test_indistinguishability_with_refined_planck_length():
    # 2^202 ~ 6.43e60 already covers 1e28 / 1.6e-33 = 6.25e60
    assert indistinguishability_bound(1e28, 1.6e-33) == 101


# --- table output -------------------------------------------------------------


def test_generate_table_empty():
    assert generate_table([]) == []
    assert table_csv([]) == ",".join(TABLE_COLUMNS) + "\n"


def test_table_is_idempotent():
    a = table_csv(generate_table([(-3, 20)]))
    b = table_csv(generate_table([(-3, 20)]))
    assert a == b
    row = next(csv.DictReader(io.StringIO(a)))
    assert row["mI"] == "8" and row["nI"] == "220"


def test_table_text_lists_every_row():
    text = table_text(generate_table(WORKED_ROWS))
    lines = text.splitlines()
    assert len(lines) == 12
    assert "days" in lines[1] and "sec" in lines[-1]
    assert len({len(line) for line in lines}) == 1
