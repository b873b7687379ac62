"""Normal-ordered quadrature variances of the atomic dipole and squeezing scans.

With sigma_x = (sigma_p + sigma_m)/sqrt(2) and sigma_y = i(sigma_m -
sigma_p)/sqrt(2), the normal-ordered variances at steady state reduce to

    <: (d sigma_x)^2 :> = (1 + <sigma_z>)/2 - 2 <sigma_p>_ss^2
    <: (d sigma_y)^2 :> = (1 + <sigma_z>)/2

so only the x quadrature can dip below zero (the squeezing criterion).  The
default path uses the corrected steady state; ``formula_path="paper"``
recomputes from the as-published inversion and dipole expressions (gamma=1
convention) so both variants of the squeezing scan can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import SystemParams
from .dynamics import paper_dipole_moment, paper_inversion, steady_state

FORMULA_PATHS = ("corrected", "paper")


def _steady_pair(params: SystemParams, formula_path: str) -> tuple[float, float]:
    """(<sigma_z>, <sigma_p>) at steady state on the requested formula path."""
    if formula_path == "corrected":
        ss = steady_state(params)
        return ss.inversion_w, float(ss.bloch.sp.real)
    if formula_path == "paper":
        return paper_inversion(params), paper_dipole_moment(params)
    raise ValueError(f"unknown formula_path {formula_path!r}")


@dataclass(frozen=True)
class QuadratureReport:
    """Normal-ordered quadrature variances and the squeezing verdict."""

    var_x_normal: float
    var_y_normal: float
    squeezed: bool


def quadrature_variances(
    params: SystemParams, formula_path: str = "corrected"
) -> QuadratureReport:
    """Normal-ordered variances of the two dipole quadratures at steady state."""
    sz, dip = _steady_pair(params, formula_path)
    var_y = 0.5 * (1.0 + sz)
    var_x = var_y - 2.0 * dip**2
    return QuadratureReport(
        var_x_normal=var_x, var_y_normal=var_y, squeezed=var_x < 0.0
    )


def _var_x(omega: float, gamma: float, nbar: float, formula_path: str) -> float:
    return quadrature_variances(
        SystemParams(omega=omega, gamma=gamma, nbar=nbar), formula_path
    ).var_x_normal


def squeezing_scan(
    nbar: float,
    omega_range: tuple[float, float] = (0.0, 1.5),
    resolution: int = 4001,
    gamma: float = 1.0,
    formula_path: str = "corrected",
) -> list[tuple[float, float]]:
    """Drive-amplitude intervals where the x quadrature is squeezed (var_x < 0).

    Samples var_x on `resolution` grid points over omega_range, brackets the
    sign changes and refines each interval endpoint by root bracketing to well
    below 1e-8.  An empty list is a valid result (no squeezing at this nbar).
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    lo, hi = float(omega_range[0]), float(omega_range[1])
    if not (0.0 <= lo < hi):
        raise ValueError("omega_range must be ordered and non-negative")
    grid = np.linspace(lo, hi, resolution)
    vals = np.array([_var_x(w, gamma, nbar, formula_path) for w in grid])

    def refine(a: float, b: float) -> float:
        return float(
            brentq(lambda w: _var_x(w, gamma, nbar, formula_path), a, b, xtol=1e-10)
        )

    pockets: list[tuple[float, float]] = []
    inside = vals[0] < 0.0
    start = grid[0] if inside else None
    for i in range(1, resolution):
        negative = vals[i] < 0.0
        if negative and not inside:
            # an exact zero at the previous node is itself the pocket edge
            if vals[i - 1] == 0.0:
                start = float(grid[i - 1])
            else:
                start = refine(grid[i - 1], grid[i])
            inside = True
        elif not negative and inside:
            end = float(grid[i]) if vals[i] == 0.0 else refine(grid[i - 1], grid[i])
            pockets.append((float(start), end))
            inside = False
    if inside:
        pockets.append((float(start), float(grid[-1])))
    return pockets


@dataclass(frozen=True)
class UncertaintyRecord:
    """Full (symmetrically ordered) variances against the commutator bound."""

    var_x_full: float
    var_y_full: float
    commutator_bound: float
    product: float
    ok: bool


def uncertainty_check(params: SystemParams) -> UncertaintyRecord:
    """Confirm the steady state satisfies the quadrature uncertainty relation.

    The sigma_x, sigma_y commutator gives the vacuum-limit constant
    C = |<sigma_z>|/2; the full variances are the normal-ordered ones plus C,
    and their product must be at least C^2.  A violation raises: it signals an
    implementation bug, not physics.
    """
    report = quadrature_variances(params)
    sz = steady_state(params).inversion_w
    bound = 0.5 * abs(sz)
    var_x = report.var_x_normal + bound
    var_y = report.var_y_normal + bound
    product = var_x * var_y
    ok = var_x >= -1e-12 and var_y >= -1e-12 and product >= bound**2 - 1e-12
    if not ok:
        raise RuntimeError(
            f"uncertainty relation violated at {params}: "
            f"var_x={var_x}, var_y={var_y}, bound={bound}"
        )
    return UncertaintyRecord(
        var_x_full=var_x,
        var_y_full=var_y,
        commutator_bound=bound,
        product=product,
        ok=ok,
    )
