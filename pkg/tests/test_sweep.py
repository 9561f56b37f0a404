import math
import time

import numpy as np
import pytest

from analysis import estimate_fidelity_mc, evaluate_point, fidelity_direct, sweep
from models import SWEEP_COLUMNS, CodeParams, SweepSpec
from phase_space import coherent


@pytest.fixture
def gamma_spec():
    """
    Small gamma sweep at strong squeezing.

    Returns:
        SweepSpec: Four gamma values, xbar2 = 5, r = 10, 400 runs per point.
    """
    return SweepSpec(
        param="gamma",
        values=[0.05, 0.35, 0.65, 0.95],
        base=CodeParams(r=10.0, xbar2=5.0, gamma=0.1),
        runs=400,
        seed=42,
    )


def test_rows_follow_the_grid(gamma_spec):
    """
    Test sweep rows.

    Test Cases:
    1. One row per grid value, in grid order.
    2. The varied parameter is substituted, the others come from the base.
    3. Every value is finite and the columns are complete.
    """
    rows = sweep(gamma_spec)
    assert [row.param_value for row in rows] == gamma_spec.values
    assert [row.gamma for row in rows] == gamma_spec.values
    assert all(row.r == 10.0 and row.xbar2 == 5.0 for row in rows)
    for row in rows:
        assert tuple(row.model_dump()) == SWEEP_COLUMNS
        assert all(math.isfinite(v) for v in row.model_dump().values() if isinstance(v, float))


def test_encoding_beats_direct_in_gamma_sweep(gamma_spec):
    """
    Test the encoding advantage over the whole gamma range.

    Test Cases:
    1. The Monte Carlo encoded fidelity exceeds the direct fidelity at every point.
    """
    for row in sweep(gamma_spec):
        assert row.f_mc_mean > row.f_direct
        assert row.f_direct == pytest.approx(fidelity_direct(row.gamma, 5.0))


def test_single_point_sweep_equals_direct_estimate():
    """
    Test consistency with the single estimate.

    Test Cases:
    1. A one-point sweep reports exactly the estimate of point index 0.
    """
    base = CodeParams(r=0.5, xbar2=1.0, gamma=0.2)
    spec = SweepSpec(param="r", values=[0.5], base=base, signal_x=0.3, runs=30, seed=6)
    row = sweep(spec)[0]
    est = estimate_fidelity_mc(base, n_runs=30, seed=6, signal=coherent(0.3, 0.0), point_index=0)
    assert (row.f_mc_mean, row.f_mc_stderr, row.n_runs, row.seed) == (est.mean, est.stderr, 30, 6)


def test_point_does_not_depend_on_other_points():
    """
    Test per-point streams.

    Test Cases:
    1. Point 1 of a two-point sweep equals point 1 evaluated on its own.
    """
    spec = SweepSpec(param="xbar2", values=[1.0, 2.0], base=CodeParams(r=0.5, xbar2=1.0, gamma=0.2), runs=20, seed=3)
    assert sweep(spec)[1] == evaluate_point(spec, 1)


def test_process_pool_gives_identical_rows():
    """
    Test parallel evaluation.

    Test Cases:
    1. Two workers produce the same rows, in the same order, as one.
    """
    base = CodeParams(r=0.5, xbar2=1.0, gamma=0.2)
    serial = SweepSpec(param="gamma", values=[0.1, 0.2, 0.3], base=base, runs=10, seed=8)
    parallel = serial.model_copy(update={"workers": 2})
    assert sweep(parallel) == sweep(serial)


@pytest.mark.slow
def test_fidelity_grows_with_squeezing_for_small_displacements():
    """
    Test the resolvability trend.

    Steps:
    1. Sweep r over 0, 0.5, ..., 3 at xbar2 = 0.2, gamma = 0.3 with 20000 runs per point.
    2. Verify the estimate never drops by more than two combined standard errors.
    3. Verify the last point is clearly above the first.
    """
    spec = SweepSpec(
        param="r",
        values=[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
        base=CodeParams(r=0.0, xbar2=0.2, gamma=0.3),
        runs=20_000,
        seed=11,
    )
    rows = sweep(spec)
    for a, b in zip(rows, rows[1:]):
        assert b.f_mc_mean >= a.f_mc_mean - 2 * np.hypot(a.f_mc_stderr, b.f_mc_stderr)
    assert rows[-1].f_mc_mean > rows[0].f_mc_mean


@pytest.mark.slow
def test_encoding_beats_direct_on_the_full_gamma_grid():
    """
    Test the encoding advantage on the full gamma grid.

    Steps:
    1. Sweep gamma over 0.05, 0.10, ..., 0.95 at xbar2 = 5, r = 10 with 10^4 runs per point.
    2. Verify the encoded estimate exceeds the direct fidelity at every point.
    3. Verify the whole sweep took less than two minutes.
    """
    spec = SweepSpec(
        param="gamma",
        values=[round(0.05 * k, 2) for k in range(1, 20)],
        base=CodeParams(r=10.0, xbar2=5.0, gamma=0.1),
        runs=10_000,
        seed=42,
    )
    start = time.perf_counter()
    rows = sweep(spec)
    elapsed = time.perf_counter() - start
    assert len(rows) == 19
    for row in rows:
        assert row.f_mc_mean > row.f_direct
    assert elapsed < 120.0
