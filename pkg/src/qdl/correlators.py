"""Closed-form two-time correlators and photon statistics.

All correlators come out of the exact affine regression solution: a two-time
average <sigma_p(t) A_i(t+tau) ...> obeys the same Bloch generator in tau as
the one-time expectations, with the constant drive multiplied by the
expectation of the sandwiching operators.  The dipole correlator feeds the
emission spectrum; the sandwiched-inversion correlator gives g2(tau).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ExponentialSum, SystemParams, eigentriple
from .dynamics import BlochSums, affine_bloch_sums, steady_state


@dataclass(frozen=True)
class RegressionProblem:
    """Initial 3-vector (sm, sp, sz slots) and the factor multiplying the
    constant drive; encodes operator identities like sigma_p sigma_z = -sigma_p."""

    initial: np.ndarray
    sandwich_scale: complex

    def __post_init__(self):
        arr = np.asarray(self.initial, dtype=complex)
        if arr.shape != (3,) or not np.all(np.isfinite(arr)):
            raise ValueError("initial must be a finite complex 3-vector")
        object.__setattr__(self, "initial", arr)


@dataclass(frozen=True)
class G2Curve:
    """Normalized intensity correlation sampled on an ascending tau grid."""

    tau_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau_grid, dtype=float)
        val = np.asarray(self.values, dtype=float)
        if tau.ndim != 1 or val.shape != tau.shape:
            raise ValueError("tau_grid and values must be matching 1-d arrays")
        if np.any(np.diff(tau) <= 0):
            raise ValueError("tau_grid must be strictly ascending")
        if np.min(val) < -1e-12:
            raise ValueError("g2 values must be non-negative")
        object.__setattr__(self, "tau_grid", tau)
        object.__setattr__(self, "values", val)


def regression_solve(params: SystemParams, problem: RegressionProblem) -> BlochSums:
    """Exact regression solution u(tau) = exp(M tau)(u0 - u_ss) + u_ss with
    u_ss = -M^-1 b * sandwich_scale, as three ExponentialSums."""
    return affine_bloch_sums(params, problem.initial, problem.sandwich_scale)


def dipole_problem(params: SystemParams) -> RegressionProblem:
    """Initial data for <sigma_p(t) sigma_m(t+tau)>: (<sigma_p sigma_m>, 0,
    -<sigma_p>) at steady state, drive scaled by <sigma_p>."""
    ss = steady_state(params)
    dip = complex(ss.bloch.sp)
    return RegressionProblem(
        initial=np.array([ss.rho_aa, 0.0, -dip], dtype=complex),
        sandwich_scale=dip,
    )


def dipole_correlator(params: SystemParams) -> ExponentialSum:
    """Steady-state dipole correlator <sigma_p(t) sigma_m(t+tau)>.

    The constant part equals <sigma_p>_ss^2 (the elastic component); the decay
    rates are {gamma*(2nbar+1)/2, alpha, beta}.
    """
    return regression_solve(params, dipole_problem(params))[0]


def paper_dipole_correlator(params: SystemParams) -> ExponentialSum:
    """As-published closed form of the dipole correlator, transcribed verbatim
    for discrepancy reporting only.

    Its leading term carries a spurious factor 2 (the tau=0 value comes out as
    2*rho_aa instead of rho_aa) and its sideband coefficients do not reduce to
    the strong-drive limit; the regression route is the operative one.
    Assumes the gamma=1 unit convention of the published expressions.
    """
    ss = steady_state(params)
    pop = ss.rho_aa
    dip = float(ss.bloch.sp.real)
    g, om, nb = params.gamma, params.omega, params.nbar
    trip = eigentriple(params)
    alpha, beta = trip.alpha, trip.beta
    if trip.degenerate:
        raise ValueError("published correlator form is singular at alpha == beta")
    gd = 0.5 * g * (1.0 + 2.0 * nb)
    if om == 0.0:
        # the dipole-proportional terms are 0/0 here but carry a zero
        # prefactor <sigma_p>_ss; only the leading term survives
        return ExponentialSum.build(0.0, [(gd, 2.0 * pop, 0)])
    q = om**2 / (2.0 * (gd - beta) * (beta - alpha))
    r_beta = (-om / (2.0 * (gd - beta))) * (
        g / (beta - alpha)
        - g**2 * (1.0 + 2.0 * nb) / (2.0 * beta * (beta - alpha))
        + (alpha - g * (2.0 * nb + 1.0)) / (beta - alpha)
    )
    r_alpha = (-om / (2.0 * (gd - alpha))) * (
        g**2 * (1.0 + 2.0 * nb) / (2.0 * alpha * (beta - alpha))
        - g / (beta - alpha)
        + (g * (2.0 * nb + 1.0) - beta) / (beta - alpha)
    )
    elastic = om * g**2 / (2.0 * beta * alpha)
    return ExponentialSum.build(
        dip * elastic,
        [
            (gd, 2.0 * pop - dip * elastic, 0),
            (beta, -pop * q + dip * r_beta, 0),
            (alpha, pop * q + dip * r_alpha, 0),
        ],
    )


def g2_problem(params: SystemParams) -> RegressionProblem:
    """Initial data for <sigma_p(t) A(t+tau) sigma_m(t)>: (0, 0, -<sigma_p
    sigma_m>), drive scaled by <sigma_p sigma_m>."""
    pop = steady_state(params).rho_aa
    return RegressionProblem(
        initial=np.array([0.0, 0.0, -pop], dtype=complex),
        sandwich_scale=complex(pop),
    )


def g2(params: SystemParams, tau_grid) -> G2Curve:
    """Normalized intensity correlation g2(tau) = (P + u_z(tau)) / (2 P^2)
    with P = <sigma_p sigma_m>_ss and u_z the sandwiched-inversion solution.

    g2(0) = 0 exactly (no simultaneous photon pairs from one atom) and
    g2 -> 1 as tau -> infinity.
    """
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size < 2 or tau[0] != 0.0 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau_grid must be ascending from 0")
    pop = steady_state(params).rho_aa
    if pop <= 0.0:
        raise ValueError("no emission: g2 undefined for the undriven vacuum steady state")
    u_z = regression_solve(params, g2_problem(params))[2]
    values = (pop + u_z.value(tau).real) / (2.0 * pop**2)
    if np.min(values) >= -1e-12:
        values = np.maximum(values, 0.0)  # clamp rounding residue only
    return G2Curve(tau_grid=tau, values=values)


def g2_strong(params: SystemParams, tau) -> np.ndarray | float:
    """Strong-drive limit 1 - cos(omega*tau) * exp(-(gamma/4)(6nbar+3) tau);
    accurate for omega >> gamma, caller decides applicability."""
    t = np.asarray(tau, dtype=float)
    out = 1.0 - np.cos(params.omega * t) * np.exp(
        -(params.gamma / 4.0) * (6.0 * params.nbar + 3.0) * t
    )
    if np.isscalar(tau):
        return float(out[()])
    return out


def paper_g2(params: SystemParams, tau) -> np.ndarray | float:
    """As-published closed form of g2(tau), transcribed verbatim.

    Unlike the published dipole-correlator form this one is algebraically
    consistent with the regression solution; it is kept as an independent
    cross-check.  Singular at the degeneracy alpha == beta.
    """
    trip = eigentriple(params)
    if trip.degenerate:
        raise ValueError("published g2 form is singular at alpha == beta")
    alpha, beta = trip.alpha, trip.beta
    g, nb = params.gamma, params.nbar
    c = 1.0 + 2.0 * nb
    pop = steady_state(params).rho_aa
    t = np.asarray(tau, dtype=float)
    ab2 = 2.0 * alpha * beta
    bracket = (
        (ab2 - g**2 * c) / ab2
        + (ab2 - g**2 * c - 4.0 * beta * g * nb)
        / (2.0 * beta * (beta - alpha))
        * np.exp(-beta * t)
        + (g**2 * c - ab2 + 4.0 * alpha * g * nb)
        / (2.0 * alpha * (beta - alpha))
        * np.exp(-alpha * t)
    )
    out = bracket.real / (2.0 * pop)
    if np.isscalar(tau):
        return float(out[()])
    return out


@dataclass(frozen=True)
class StatisticsReport:
    """Antibunching verdict plus the sub/super/poissonian partition of the grid."""

    antibunched: bool
    regions: tuple[tuple[float, float, str], ...]


def classify_statistics(curve: G2Curve, tol: float = 1e-9) -> StatisticsReport:
    """Classify photon statistics along a g2 curve.

    Antibunched means g2 is increasing at tau=0+ and stays at or above g2(0)
    over the initial interval up to the first local maximum.  Regions partition
    the grid by comparison of g2 with 1 at tolerance `tol`.
    """
    tau, val = curve.tau_grid, curve.values
    increasing = val[1] - val[0] > 1e-12
    first_peak = val.size - 1
    for i in range(1, val.size - 1):
        if val[i] >= val[i - 1] and val[i] > val[i + 1]:
            first_peak = i
            break
    above_start = bool(np.all(val[: first_peak + 1] >= val[0] - 1e-12))

    labels = np.where(val < 1.0 - tol, "sub", np.where(val > 1.0 + tol, "super", "poissonian"))
    regions: list[tuple[float, float, str]] = []
    start = 0
    for i in range(1, val.size + 1):
        if i == val.size or labels[i] != labels[start]:
            regions.append((float(tau[start]), float(tau[i - 1]), str(labels[start])))
            start = i
    return StatisticsReport(
        antibunched=bool(increasing and above_start), regions=tuple(regions)
    )
