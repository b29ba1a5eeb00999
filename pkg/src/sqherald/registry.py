"""Named-quantity registry and figure table builders.

The CLI and the sweep machinery dispatch through this table, so every
published number has exactly one producing code path.  Quantity names use
suffixes _cat_minus / _cat_plus for the odd / even superposition sources,
_squeezed for plain squeezed vacuum, and _tmss for the two-mode squeezed
benchmark.
"""
from __future__ import annotations

import dataclasses
import math
from typing import Callable, Mapping

import numpy as np

from . import analysis, detect, fockspace, kerr, optics, sources
from .fockspace import Truncation, default_truncation
from .detect import DetectorModel
from .kerr import KerrSchedule


@dataclasses.dataclass(frozen=True)
class Quantity:
    """A named scalar computation fn(trunc, **params) -> float."""

    name: str
    doc: str
    fn: Callable[..., float]
    variables: tuple[str, ...]
    defaults: Mapping[str, float]
    uses_truncation: bool = True
    series: bool = False

    def __post_init__(self):
        object.__setattr__(self, "defaults", dict(self.defaults))

    def trunc_for(self, params: Mapping[str, float], tail_tol: float | None = None) -> Truncation:
        """Default cutoff for one evaluation; label-series quantities get
        the deeper series cutoff, matrix quantities the 64/160 default."""
        r = abs(float(params.get("r", 0.0)))
        if self.series:
            base = kerr.series_truncation(r)
            if tail_tol is None:
                return base
            return Truncation(base.dim, tail_tol)
        if tail_tol is None:
            return default_truncation(r)
        return default_truncation(r, tail_tol)


def _cat_joint(r: float, sign: int, trunc: Truncation) -> optics.JointDistribution:
    # r -> 0 limit of the odd superposition is the bare two-photon level,
    # so swept columns extend continuously to r = 0
    if sign < 0 and r == 0.0:
        cat = fockspace.fock_state(2, trunc)
    else:
        cat = sources.squeezed_cat(r, sign, trunc)
    return optics.joint_probability(optics.split(cat))


def _squeezed_joint(r: float, trunc: Truncation) -> optics.JointDistribution:
    sq = sources.squeezed_vacuum(r, trunc)
    return optics.joint_probability(optics.split(sq))


def _q_p11_cat_minus(trunc, r):
    return float(_cat_joint(r, -1, trunc).p[1, 1])


def _q_p11_cat_plus(trunc, r):
    return float(_cat_joint(r, +1, trunc).p[1, 1])


def _q_p11_squeezed(trunc, r):
    return float(_squeezed_joint(r, trunc).p[1, 1])


def _q_p11_tmss(trunc, r):
    return float(optics.tmss_joint_probability(r, trunc).p[1, 1])


def _q_pc_cat_minus(trunc, r):
    return optics.conditional_single_photon(_cat_joint(r, -1, trunc))


def _q_pc_squeezed(trunc, r):
    return optics.conditional_single_photon(_squeezed_joint(r, trunc))


def _q_herald_prob_cat_minus(trunc, r):
    return sources.herald_probability(r, -1)


def _q_herald_yield_cat_minus(trunc, r):
    # continuous extension: the odd branch carries no weight at r = 0
    if r == 0.0:
        return 0.0
    return sources.herald_probability(r, -1) * _q_p11_cat_minus(trunc, r)


def _q_p0_cat_minus(trunc, tau_tilde, r, alpha):
    return kerr.p0_generation(KerrSchedule(tau_tilde, alpha), r, trunc)


def _q_p1_cat_minus(trunc, tau_tilde, r, alpha):
    return kerr.p1_heralded(KerrSchedule(tau_tilde, alpha), r, trunc)


def _q_phase_ratio(trunc, sigma, r, alpha):
    dim = None if trunc is None else trunc.dim
    return kerr.gaussian_averaged_ratio(r, alpha, sigma, dim=dim)


def _q_pclick_cat_minus(trunc, r, eta):
    return detect.heralded_cat_statistics(r, DetectorModel(eta), trunc).p_click


def _q_pclick1_cat_minus(trunc, r, eta):
    return detect.heralded_cat_statistics(r, DetectorModel(eta), trunc).p_click_1


def _q_pclickc_cat_minus(trunc, r, eta):
    return detect.heralded_cat_statistics(r, DetectorModel(eta), trunc).p_click_c


def _q_pclick1_yield_cat_minus(trunc, r, eta):
    stats = detect.heralded_cat_statistics(r, DetectorModel(eta), trunc)
    return sources.herald_probability(r, -1) * stats.p_click_1


def _q_pclick_tmss(trunc, r, eta):
    return detect.tmss_click_statistics(r, DetectorModel(eta)).p_click


def _q_pclick1_tmss(trunc, r, eta):
    return detect.tmss_click_statistics(r, DetectorModel(eta)).p_click_1


def _q_pclickc_tmss(trunc, r, eta):
    return detect.tmss_click_statistics(r, DetectorModel(eta)).p_click_c


def _q_g2_cat_minus(trunc, r, eta):
    return detect.g2_heralded_cat(r, DetectorModel(eta), trunc)


def _q_g2_tmss(trunc, r, eta):
    return detect.g2_tmss(r, DetectorModel(eta))


def _quantities() -> dict[str, Quantity]:
    items = [
        Quantity("p11_cat_minus", "P(1,1) after splitting the odd superposition",
                 _q_p11_cat_minus, ("r",), {}),
        Quantity("p11_cat_plus", "P(1,1) after splitting the even superposition",
                 _q_p11_cat_plus, ("r",), {}),
        Quantity("p11_squeezed", "P(1,1) after splitting plain squeezed vacuum",
                 _q_p11_squeezed, ("r",), {}),
        Quantity("p11_tmss", "P(1,1) of the two-mode squeezed benchmark",
                 _q_p11_tmss, ("r",), {}),
        Quantity("pc_cat_minus", "P(n_b=1 | n_a=1) for the split odd superposition",
                 _q_pc_cat_minus, ("r",), {}),
        Quantity("pc_squeezed", "P(n_b=1 | n_a=1) for split squeezed vacuum",
                 _q_pc_squeezed, ("r",), {}),
        Quantity("herald_prob_cat_minus", "odd-branch weight N_-(r)/4",
                 _q_herald_prob_cat_minus, ("r",), {}, uses_truncation=False),
        Quantity("herald_yield_cat_minus", "pair yield N_-(r)/4 * P(1,1)",
                 _q_herald_yield_cat_minus, ("r",), {}),
        Quantity("p0_cat_minus", "odd-branch projection probability after the Kerr step",
                 _q_p0_cat_minus, ("tau_tilde", "r"), {"tau_tilde": math.pi, "alpha": 10.0},
                 series=True),
        Quantity("p1_cat_minus", "heralded pair probability after the Kerr step",
                 _q_p1_cat_minus, ("tau_tilde", "r"), {"tau_tilde": math.pi, "alpha": 10.0},
                 series=True),
        Quantity("phase_ratio", "Gaussian-averaged phase-noise ratio R(r, alpha, sigma)",
                 _q_phase_ratio, ("sigma", "r"), {"r": 0.725, "alpha": 10.0},
                 series=True),
        Quantity("pclick_cat_minus", "herald click probability, odd superposition",
                 _q_pclick_cat_minus, ("r", "eta"), {"eta": 0.9}),
        Quantity("pclick1_cat_minus", "single-photon click probability, odd superposition",
                 _q_pclick1_cat_minus, ("r", "eta"), {"eta": 0.9}),
        Quantity("pclickc_cat_minus", "single-photon fraction of clicks, odd superposition",
                 _q_pclickc_cat_minus, ("r", "eta"), {"eta": 0.9}),
        Quantity("pclick1_yield_cat_minus", "branch weight times single-photon click probability",
                 _q_pclick1_yield_cat_minus, ("r", "eta"), {"eta": 0.9}),
        Quantity("pclick_tmss", "herald click probability, two-mode squeezed benchmark",
                 _q_pclick_tmss, ("r", "eta"), {"eta": 0.9}, uses_truncation=False),
        Quantity("pclick1_tmss", "single-photon click probability, benchmark",
                 _q_pclick1_tmss, ("r", "eta"), {"eta": 0.9}, uses_truncation=False),
        Quantity("pclickc_tmss", "single-photon fraction of clicks, benchmark",
                 _q_pclickc_tmss, ("r", "eta"), {"eta": 0.9}, uses_truncation=False),
        Quantity("g2_cat_minus", "heralded zero-delay g2, odd superposition",
                 _q_g2_cat_minus, ("r", "eta"), {"eta": 0.9}),
        Quantity("g2_tmss", "heralded zero-delay g2, benchmark (closed form)",
                 _q_g2_tmss, ("r", "eta"), {"eta": 0.9}, uses_truncation=False),
    ]
    return {q.name: q for q in items}


QUANTITIES: dict[str, Quantity] = _quantities()


def resolve(name: str) -> Quantity:
    try:
        return QUANTITIES[name]
    except KeyError:
        known = ", ".join(sorted(QUANTITIES))
        raise KeyError(f"unknown quantity {name!r}; registered: {known}") from None


@dataclasses.dataclass(frozen=True)
class Table:
    """Column-labelled numeric table plus provenance metadata."""

    columns: tuple[str, ...]
    rows: np.ndarray
    metadata: dict

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)


@dataclasses.dataclass(frozen=True)
class Figure:
    """A named data set: grid columns plus one column per plotted quantity."""

    name: str
    description: str
    builder: Callable[..., Table]

    def build(self, dim=None, tail_tol=None, eta=None, alpha=None, seed=None) -> Table:
        return self.builder(dim=dim, tail_tol=tail_tol, eta=eta, alpha=alpha, seed=seed)


def _override_trunc(dim, tail_tol) -> Truncation | None:
    if dim is None:
        return None
    if tail_tol is None:
        return Truncation(dim)
    return Truncation(dim, tail_tol)


def _joined_sweeps(
    spec: analysis.SweepSpec,
    names: list[str],
    second: analysis.SweepSpec | None,
    dim,
    tail_tol,
) -> Table:
    """Sweep several quantities over the same grid and join the value
    columns."""
    trunc = _override_trunc(dim, tail_tol)
    results = [
        analysis.sweep(spec, name, second=second, trunc=trunc, tail_tol=tail_tol)
        for name in names
    ]
    grid_cols = results[0].columns[:-1]
    n_grid = len(grid_cols)
    rows = results[0].rows[:, :n_grid]
    values = [res.rows[:, n_grid:] for res in results]
    table_rows = np.hstack([rows] + values)
    dims: set[int] = set()
    fixed: dict = {}
    for res in results:
        if res.metadata["dims"] != "analytic":
            dims.update(res.metadata["dims"])
        fixed.update(res.metadata["fixed"])
    metadata = {
        "dims": sorted(dims) if dims else "analytic",
        "convergence_tol": analysis.CONVERGENCE_TOL,
        "fixed": fixed,
    }
    return Table(tuple(grid_cols) + tuple(names), table_rows, metadata)


R_GRID = (0.01, 2.0, 201)
R_GRID_WITH_ZERO = (0.0, 2.0, 201)
R_GRID_SURFACE = (0.05, 2.0, 40)
ETA_GRID = (0.7, 1.0, 31)
TAU_GRID = (0.0, 2.0 * math.pi, 81)
SIGMA_GRID = (0.0, 0.004, 41)
FIG2_LEVELS = 12
FIG2_R = 0.725


def _fig2(dim=None, tail_tol=None, eta=None, alpha=None, seed=None) -> Table:
    """Photon-number content of the herald row: P(1, n) for each source."""
    trunc = _override_trunc(dim, tail_tol) or default_truncation(FIG2_R, tail_tol or 1e-3)
    squeezed = _squeezed_joint(FIG2_R, trunc)
    minus = _cat_joint(FIG2_R, -1, trunc)
    plus = _cat_joint(FIG2_R, +1, trunc)
    levels = min(FIG2_LEVELS, trunc.dim)
    rows = [
        (float(n), float(squeezed.p[1, n]), float(minus.p[1, n]), float(plus.p[1, n]))
        for n in range(levels)
    ]
    metadata = {
        "dims": [trunc.dim],
        "convergence_tol": analysis.CONVERGENCE_TOL,
        "fixed": {"r": FIG2_R},
    }
    return Table(("n", "p1n_squeezed", "p1n_cat_minus", "p1n_cat_plus"),
                 np.array(rows), metadata)


def _line(var, grid, names, fixed=None):
    def build(dim=None, tail_tol=None, eta=None, alpha=None, seed=None):
        extra = dict(fixed or {})
        if eta is not None:
            extra["eta"] = eta
        if alpha is not None:
            extra["alpha"] = alpha
        spec = analysis.SweepSpec(var, grid[0], grid[1], grid[2], extra)
        return _joined_sweeps(spec, names, None, dim, tail_tol)

    return build


def _surface(var1, grid1, var2, grid2, names, fixed=None):
    def build(dim=None, tail_tol=None, eta=None, alpha=None, seed=None):
        extra = dict(fixed or {})
        if eta is not None:
            extra["eta"] = eta
        if alpha is not None:
            extra["alpha"] = alpha
        spec = analysis.SweepSpec(var1, grid1[0], grid1[1], grid1[2], extra)
        second = analysis.SweepSpec(var2, grid2[0], grid2[1], grid2[2])
        return _joined_sweeps(spec, names, second, dim, tail_tol)

    return build


def _fig5a(dim=None, tail_tol=None, eta=None, alpha=None, seed=None) -> Table:
    """Averaged ratio against sigma at r = 0.725 for three pump strengths."""
    trunc = _override_trunc(dim, tail_tol)
    tables = []
    alphas = (9.0, 10.0, 11.0)
    for a in alphas:
        spec = analysis.SweepSpec("sigma", *SIGMA_GRID, {"r": 0.725, "alpha": a})
        tables.append(analysis.sweep(spec, "phase_ratio", trunc=trunc, tail_tol=tail_tol))
    rows = np.hstack(
        [tables[0].rows[:, :1]] + [t.rows[:, 1:] for t in tables]
    )
    metadata = {
        "dims": sorted({d for t in tables for d in t.metadata["dims"]}),
        "convergence_tol": analysis.CONVERGENCE_TOL,
        "fixed": {"r": 0.725, "alphas": list(alphas)},
    }
    return Table(("sigma", "ratio_alpha9", "ratio_alpha10", "ratio_alpha11"),
                 rows, metadata)


FIGURES: dict[str, Figure] = {
    "fig2": Figure("fig2", "herald-row photon distributions P(1, n) at r = 0.725", _fig2),
    "fig3a": Figure("fig3a", "pair yield N_-/4 * P(1,1) against r",
                    _line("r", R_GRID_WITH_ZERO, ["herald_yield_cat_minus"])),
    "fig3b": Figure("fig3b", "P(1,1) for the three split sources against r",
                    _line("r", R_GRID, ["p11_cat_minus", "p11_cat_plus", "p11_squeezed"])),
    "fig4a": Figure("fig4a", "odd-branch projection probability over (tau_tilde, r)",
                    _surface("tau_tilde", TAU_GRID, "r", R_GRID_SURFACE, ["p0_cat_minus"])),
    "fig4b": Figure("fig4b", "heralded pair probability over (tau_tilde, r)",
                    _surface("tau_tilde", TAU_GRID, "r", R_GRID_SURFACE, ["p1_cat_minus"])),
    "fig5a": Figure("fig5a", "averaged phase-noise ratio against sigma at r = 0.725", _fig5a),
    "fig5b": Figure("fig5b", "averaged phase-noise ratio over (r, sigma) at alpha = 10",
                    _surface("r", R_GRID_SURFACE, "sigma", SIGMA_GRID, ["phase_ratio"])),
    "fig6a": Figure("fig6a", "click statistics of the split odd superposition against r",
                    _line("r", R_GRID,
                          ["pclick_cat_minus", "pclick1_cat_minus", "pclickc_cat_minus"])),
    "fig6b": Figure("fig6b", "click statistics of the benchmark against r",
                    _line("r", R_GRID, ["pclick_tmss", "pclick1_tmss", "pclickc_tmss"])),
    "fig7a": Figure("fig7a", "single-photon click probabilities over (r, eta)",
                    _surface("r", R_GRID_SURFACE, "eta", ETA_GRID,
                             ["pclick1_cat_minus", "pclick1_tmss"])),
    "fig7b": Figure("fig7b", "single-photon click fractions over (r, eta)",
                    _surface("r", R_GRID_SURFACE, "eta", ETA_GRID,
                             ["pclickc_cat_minus", "pclickc_tmss"])),
    "fig8": Figure("fig8", "small-r pair yields of source and benchmark",
                   _line("r", (0.004, 2.0, 201),
                         ["p11_cat_minus", "herald_yield_cat_minus", "p11_tmss"])),
    "fig9a": Figure("fig9a", "heralded g2 of source and benchmark against r",
                    _line("r", R_GRID, ["g2_cat_minus", "g2_tmss"])),
    "fig9b": Figure("fig9b", "heralded g2 of source and benchmark over (r, eta)",
                    _surface("r", R_GRID_SURFACE, "eta", ETA_GRID,
                             ["g2_cat_minus", "g2_tmss"])),
}


def figure(selector: str) -> Figure:
    try:
        return FIGURES[selector]
    except KeyError:
        known = ", ".join(FIGURES)
        raise KeyError(f"unknown figure {selector!r}; available: {known}") from None
