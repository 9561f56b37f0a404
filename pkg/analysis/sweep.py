from joblib import Parallel, delayed
from loguru import logger

from analysis.fidelity import fidelity_direct, fidelity_encoded_ideal, fidelity_encoded_semianalytic
from analysis.monte_carlo import estimate_fidelity_mc
from models import SweepRow, SweepSpec
from phase_space import coherent


def evaluate_point(spec: SweepSpec, index: int) -> SweepRow:
    """
    Closed-form baselines and the Monte Carlo estimate for grid point `index`.

    The point's runs use the seed sequence spawned from (spec.seed, index), so the row
    is identical whether it is computed alone, in a loop or on a worker process.
    """
    params = spec.points()[index]
    estimate = estimate_fidelity_mc(
        params,
        spec.policy,
        n_runs=spec.runs,
        seed=spec.seed,
        signal=coherent(spec.signal_x, spec.signal_p),
        point_index=index,
    )
    return SweepRow(
        param_name=spec.param,
        param_value=spec.values[index],
        gamma=params.gamma,
        r=params.r,
        xbar2=params.xbar2,
        f_direct=fidelity_direct(params.gamma, params.xbar2),
        f_ideal=fidelity_encoded_ideal(params.gamma, params.xbar2),
        f_semianalytic=fidelity_encoded_semianalytic(params.gamma, params.r, params.xbar2),
        f_mc_mean=estimate.mean,
        f_mc_stderr=estimate.stderr,
        n_runs=estimate.n_runs,
        seed=spec.seed,
    )


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """
    Evaluate every point of a one-parameter sweep.

    With `spec.workers` > 1 the points are spread over joblib worker processes; rows
    always come back in grid order.

    Args:
        spec (SweepSpec): The validated sweep description.

    Returns:
        list[SweepRow]: One row per grid value.

    Example:
        >>> from models import CodeParams
        >>> spec = SweepSpec(param="gamma", values=[0.0], base=CodeParams(r=1, xbar2=5, gamma=0.1),
        ...                  runs=5, seed=1)
        >>> sweep(spec)[0].f_direct
        1.0
    """
    indices = range(len(spec.values))
    logger.info(f"Sweeping {spec.param} over {len(spec.values)} points with {spec.runs} runs each")
    if spec.workers == 1:
        return [evaluate_point(spec, i) for i in indices]
    return Parallel(n_jobs=spec.workers)(delayed(evaluate_point)(spec, i) for i in indices)
