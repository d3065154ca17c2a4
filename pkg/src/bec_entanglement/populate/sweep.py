import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from itertools import product

import datajoint as dj

from bec_entanglement import SWEEP_N_JOBS
from bec_entanglement.pipeline.dynamics import CondensateDrive, propagate
from bec_entanglement.pipeline.optics import make_beam_splitter
from bec_entanglement.pipeline.projection import (
    ProbeField,
    ZeroCoincidenceError,
    coincidence_weight,
    conditional_state,
)
from bec_entanglement.pipeline.witness import witness_report
from bec_entanglement.utils.config import CONFIG_FIELDS, RunConfig, parse_grid

logger = dj.logger

__all__ = [
    "SweepRow",
    "SWEEP_COLUMNS",
    "FIGURES",
    "evaluate_point",
    "run_figure_sweep",
    "parse_grid_assignments",
]

FIG2_PHOTON_NUMBERS = (10.0, 20.0)
PHASE_DIFFERENCES = (0.0, math.pi / 2)
FIG5_TAU = 5.0
FIG5_ETA_GRID = "1:12:0.5"
GRID_ALIASES = ("eta", "theta_ab", "tau")


@dataclass(frozen=True)
class SweepRow:
    tau: float
    eta_a: float
    eta_b: float
    n_p: float
    theta_ab: float
    min_pt_eig: float
    lhs: float
    rhs: float
    lhs_minus_rhs: float
    violated: bool
    xi_xp: float
    coincidence_weight: float
    n2: float
    n_tot: float
    m_term: float
    cross_abs: float
    status: str = "ok"


SWEEP_COLUMNS = [field.name for field in fields(SweepRow)]


def evaluate_point(config: RunConfig, tau: float) -> SweepRow:
    """propagate -> conditional_state -> witness for one grid point."""
    coeffs_a = propagate(CondensateDrive(config.eta_a, config.delta_a), tau)
    coeffs_b = propagate(CondensateDrive(config.eta_b, config.delta_b), tau)
    probe_a = ProbeField.from_photon_number(config.n_p, config.theta_alpha)
    probe_b = ProbeField.from_photon_number(config.n_p, config.theta_beta)
    bs = make_beam_splitter(config.bs_t_mag, config.phi, config.phi_prime)

    point = dict(
        tau=float(tau),
        eta_a=config.eta_a,
        eta_b=config.eta_b,
        n_p=config.n_p,
        theta_ab=config.theta_ab,
    )
    try:
        state = conditional_state(
            coeffs_a, coeffs_b, probe_a, probe_b, bs, n_max=config.n_max
        )
    except ZeroCoincidenceError as err:
        logger.warning(f"Zero coincidence at {point}: {err}")
        nan = float("nan")
        return SweepRow(
            **point,
            min_pt_eig=nan,
            lhs=nan,
            rhs=nan,
            lhs_minus_rhs=nan,
            violated=False,
            xi_xp=nan,
            coincidence_weight=0.0,
            n2=nan,
            n_tot=nan,
            m_term=nan,
            cross_abs=nan,
            status="zero_coincidence",
        )

    report = witness_report(state)
    return SweepRow(
        **point,
        min_pt_eig=report.min_pt_eig,
        lhs=report.lhs,
        rhs=report.rhs,
        lhs_minus_rhs=report.lhs_minus_rhs,
        violated=report.violated,
        xi_xp=report.xi_xp,
        coincidence_weight=coincidence_weight(state),
        n2=report.n2,
        n_tot=report.n_tot,
        m_term=report.m_term,
        cross_abs=abs(report.cross),
    )


def _with_phase_difference(config: RunConfig, theta_ab: float) -> RunConfig:
    return config.updated(theta_alpha=config.theta_beta + theta_ab)


def _tau_series(config: RunConfig) -> list[tuple[RunConfig, float]]:
    return [(config, float(tau)) for tau in config.tau_grid()]


# -------- Figure point sets --------


def _fig2_points(config: RunConfig, grid) -> list[tuple[RunConfig, float]]:
    """Minimum PT eigenvalue vs τ for n_p = 10 and 20."""
    points = []
    for n_p in FIG2_PHOTON_NUMBERS:
        points += _tau_series(config.updated(n_p=n_p))
    return points


def _fig3_points(config: RunConfig, grid) -> list[tuple[RunConfig, float]]:
    # same series as fig2, read through lhs_minus_rhs
    return _fig2_points(config, grid)


def _fig4_points(config: RunConfig, grid) -> list[tuple[RunConfig, float]]:
    """θ_αβ = 0 and π/2 at the configured n_p (|00⟩ removed by the latter)."""
    points = []
    for theta_ab in PHASE_DIFFERENCES:
        points += _tau_series(_with_phase_difference(config, theta_ab))
    return points


def _fig5_points(config: RunConfig, grid) -> list[tuple[RunConfig, float]]:
    """Coupling sweep η_A = η_B = η at τ = 5."""
    etas = (grid or {}).get("eta") or parse_grid(FIG5_ETA_GRID)
    points = []
    for theta_ab in PHASE_DIFFERENCES:
        phased = _with_phase_difference(config, theta_ab)
        points += [(phased.updated(eta_a=eta, eta_b=eta), FIG5_TAU) for eta in etas]
    return points


def _generic_points(config: RunConfig, grid) -> list[tuple[RunConfig, float]]:
    """Cross product of the user grids in the order given; τ varies fastest."""
    grid = dict(grid or {})
    taus = grid.pop("tau", None)
    taus = [float(tau) for tau in config.tau_grid()] if taus is None else taus

    names = list(grid)
    points = []
    for values in product(*(grid[name] for name in names)):
        changes = dict(zip(names, values))
        theta_ab = changes.pop("theta_ab", None)
        if "eta" in changes:
            eta = changes.pop("eta")
            changes.update(eta_a=eta, eta_b=eta)
        updated = config.updated(**changes)
        if theta_ab is not None:
            # θ_α follows θ_β, including a θ_β swept alongside
            updated = _with_phase_difference(updated, theta_ab)
        points += [(updated, tau) for tau in taus]
    return points


FIGURES = {
    "fig2": _fig2_points,
    "fig3": _fig3_points,
    "fig4": _fig4_points,
    "fig5": _fig5_points,
    "generic": _generic_points,
}


def parse_grid_assignments(
    items: list[str] | None, figure: str
) -> dict[str, list[float]]:
    """`--grid` values: `name=values` pairs, or a bare η grid for fig5."""
    grid = {}
    for item in items or []:
        name, sep, values = item.partition("=")
        if not sep:
            if figure != "fig5":
                raise ValueError(
                    f"Grid {item!r} needs the form name=values for {figure}"
                )
            name, values = "eta", item
        name = name.strip()
        allowed = ("eta",) if figure == "fig5" else CONFIG_FIELDS + GRID_ALIASES
        if name not in allowed:
            raise ValueError(f"Cannot sweep {name!r} in {figure}")
        grid[name] = parse_grid(values)
    if grid and figure not in ("fig5", "generic"):
        raise ValueError(
            f"{figure} has a fixed grid; --grid applies to fig5 and sweep only"
        )
    return grid


def run_figure_sweep(
    config: RunConfig,
    figure: str,
    grid: dict[str, list[float]] | None = None,
    n_jobs: int | None = None,
) -> list[SweepRow]:
    """Evaluate the points of one figure (or a generic grid) in grid order.

    Args:
        config (RunConfig): base configuration.
        figure (str): one of fig2, fig3, fig4, fig5, generic.
        grid (dict, optional): value lists keyed by config field or alias.
        n_jobs (int, optional): worker processes; defaults to `sweep_n_jobs`.

    Returns:
        list[SweepRow]: one row per point.
    """
    if figure not in FIGURES:
        raise ValueError(
            f"Unknown figure {figure!r}; expected one of {', '.join(FIGURES)}"
        )
    n_jobs = SWEEP_N_JOBS if n_jobs is None else n_jobs

    points = FIGURES[figure](config, grid)
    logger.info(f"{figure}: evaluating {len(points)} points with {n_jobs} job(s)")

    configs = [cfg for cfg, _ in points]
    taus = [tau for _, tau in points]
    if n_jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as executor:
            rows = list(
                executor.map(
                    evaluate_point,
                    configs,
                    taus,
                    chunksize=max(1, len(points) // (4 * n_jobs)),
                )
            )
    else:
        rows = [evaluate_point(cfg, tau) for cfg, tau in points]

    flagged = sum(row.status != "ok" for row in rows)
    if flagged:
        logger.warning(f"{figure}: {flagged} point(s) flagged with zero coincidence")
    return rows
