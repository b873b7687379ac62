"""Independent numerical ground truth for the driven-atom master equation.

Everything here works directly on the 2x2 density matrix (or its vectorized
4-component form) with fixed-step RK4 and plain linear algebra, never on the
closed-form eigendecomposition, so it can arbitrate the analytic modules.

The drive term of the master equation is implemented as the commutator
(omega/2)[sigma_p - sigma_m, rho]; the as-published variant with a flipped
sign on rho*sigma_m is retained behind ``drive_form="paper"`` for discrepancy
reporting (it does not conserve the trace).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .core import DensityMatrix, SystemParams
from .dynamics import bloch_generator

SIGMA_P = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_M = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# RK4 accuracy/stability guard: refuse steps with h * rate_scale above this.
_MAX_STEP_FRACTION = 0.25
_DEFAULT_STEP_FRACTION = 0.005


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 configuration; times in units of 1/gamma."""

    step: float
    t_max: float
    tolerance: float = 1e-9

    @classmethod
    def for_params(cls, params: SystemParams, t_max: float) -> "IntegratorConfig":
        """Default step resolving the fastest rate: 0.005/max(gamma*(2nbar+1), omega)."""
        return cls(step=_DEFAULT_STEP_FRACTION / params.rate_scale, t_max=t_max)


def _drive_term(params: SystemParams, rho: np.ndarray, drive_form: str) -> np.ndarray:
    om = params.omega
    if drive_form == "commutator":
        x = SIGMA_P - SIGMA_M
        return 0.5 * om * (x @ rho - rho @ x)
    if drive_form == "paper":
        # verbatim published form; note the sign of rho @ SIGMA_M differs from
        # the commutator and breaks trace conservation
        return 0.5 * om * (
            SIGMA_P @ rho - rho @ SIGMA_P - SIGMA_M @ rho - rho @ SIGMA_M
        )
    raise ValueError(f"unknown drive_form {drive_form!r}")


def _rhs_matrix(params: SystemParams, rho: np.ndarray, drive_form: str) -> np.ndarray:
    """Master-equation right-hand side on an arbitrary 2x2 matrix."""
    g, nb = params.gamma, params.nbar
    down = SIGMA_M @ rho @ SIGMA_P
    up = SIGMA_P @ rho @ SIGMA_M
    n_up = SIGMA_P @ SIGMA_M  # |upper><upper|
    n_dn = SIGMA_M @ SIGMA_P  # |lower><lower|
    out = _drive_term(params, rho, drive_form)
    out = out + 0.5 * g * (nb + 1.0) * (2.0 * down - n_up @ rho - rho @ n_up)
    out = out + 0.5 * g * nb * (2.0 * up - n_dn @ rho - rho @ n_dn)
    return out


def lindblad_rhs(
    params: SystemParams, rho: DensityMatrix, drive_form: str = "commutator"
) -> np.ndarray:
    """Time derivative of the density matrix as a 2x2 array.

    With the default commutator drive the result is traceless and Hermitian.
    """
    return _rhs_matrix(params, rho.matrix(), drive_form)


def liouvillian_matrix(params: SystemParams, drive_form: str = "commutator") -> np.ndarray:
    """4x4 generator L acting on the row-major vectorized density matrix."""
    lmat = np.empty((4, 4), dtype=complex)
    for j in range(4):
        basis = np.zeros(4, dtype=complex)
        basis[j] = 1.0
        lmat[:, j] = _rhs_matrix(params, basis.reshape(2, 2), drive_form).reshape(4)
    return lmat


def _rk4_propagator(lmat: np.ndarray, h: float) -> np.ndarray:
    """One fixed RK4 step for dv/dt = L v is multiplication by
    I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24."""
    hl = h * lmat
    out = np.eye(lmat.shape[0], dtype=complex)
    term = np.eye(lmat.shape[0], dtype=complex)
    for k in range(1, 5):
        term = term @ hl / k
        out = out + term
    return out


def _density_from_vec(vec: np.ndarray) -> DensityMatrix:
    return DensityMatrix(
        rho_aa=vec[0].real, rho_bb=vec[3].real, rho_ab=complex(vec[1])
    )


def evolve(
    params: SystemParams,
    rho0: DensityMatrix,
    cfg: IntegratorConfig,
    drive_form: str = "commutator",
) -> tuple[np.ndarray, list[DensityMatrix]]:
    """Integrate the master equation with fixed-step RK4.

    Returns the sample times and the density matrix at every step (each sample
    is validated as physical).  Refuses steps too large for the fastest rate.
    The step is refined by halving until the Richardson estimate of the
    accumulated one-step defect over t_max is below cfg.tolerance.
    """
    if cfg.step <= 0 or cfg.t_max < 0:
        raise ValueError("step must be positive and t_max non-negative")
    if cfg.step * params.rate_scale > _MAX_STEP_FRACTION:
        raise ValueError(
            f"step {cfg.step} too large for rate scale {params.rate_scale}; "
            f"need step <= {_MAX_STEP_FRACTION / params.rate_scale:.3g}"
        )
    n_steps = max(1, math.ceil(cfg.t_max / cfg.step)) if cfg.t_max > 0 else 0
    lmat = liouvillian_matrix(params, drive_form)
    prop = None
    if n_steps:
        for _ in range(20):
            h = cfg.t_max / n_steps
            prop = _rk4_propagator(lmat, h)
            half = _rk4_propagator(lmat, 0.5 * h)
            defect = np.linalg.norm(prop - half @ half, 2) * (16.0 / 15.0)
            if defect * n_steps <= cfg.tolerance:
                break
            n_steps *= 2
    vec = rho0.matrix().reshape(4)
    times = np.linspace(0.0, cfg.t_max, n_steps + 1)
    states = [rho0]
    for _ in range(n_steps):
        vec = prop @ vec
        states.append(_density_from_vec(vec))
    return times, states


def steady_numeric(
    params: SystemParams, drive_form: str = "commutator"
) -> DensityMatrix:
    """Stationary state from the null space of the 4x4 generator, trace-normalized."""
    lmat = liouvillian_matrix(params, drive_form)
    a = np.vstack([lmat, np.array([[1.0, 0.0, 0.0, 1.0]], dtype=complex)])
    rhs = np.array([0.0, 0.0, 0.0, 0.0, 1.0], dtype=complex)
    vec, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    return _density_from_vec(vec)


def correlator_numeric(
    params: SystemParams, kind: str, tau_grid
) -> np.ndarray:
    """Two-time correlators via the regression theorem, integrated with RK4.

    kind="dipole" returns <sigma_p(t) sigma_m(t+tau)> at steady state;
    kind="intensity" returns <sigma_p(t) sigma_z(t+tau) sigma_m(t)>, the
    sandwiched-inversion series from which g2 is assembled.  Initial data and
    the inhomogeneity scale come from the numeric stationary state, so this
    path is independent of the closed-form steady state.
    """
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size < 1 or tau[0] != 0.0 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau_grid must be ascending from 0")
    rho_ss = steady_numeric(params)
    pop = rho_ss.rho_aa
    dip_p = np.conj(rho_ss.rho_ab)  # <sigma_p> = rho_ba
    if kind == "dipole":
        u0 = np.array([pop, 0.0, -dip_p], dtype=complex)
        scale = dip_p
        component = 0
    elif kind == "intensity":
        u0 = np.array([0.0, 0.0, -pop], dtype=complex)
        scale = complex(pop)
        component = 2
    else:
        raise ValueError(f"unknown correlator kind {kind!r}")

    gen = bloch_generator(params)
    aug = np.zeros((4, 4), dtype=complex)
    aug[:3, :3] = gen.matrix
    aug[:3, 3] = gen.drive * scale
    h_target = _DEFAULT_STEP_FRACTION / params.rate_scale

    out = np.empty(tau.size, dtype=complex)
    vec = np.append(u0, 1.0)
    out[0] = vec[component]
    props: dict[float, np.ndarray] = {}
    for i in range(1, tau.size):
        dt = tau[i] - tau[i - 1]
        n_sub = max(1, math.ceil(dt / h_target))
        h = dt / n_sub
        prop = props.get(h)
        if prop is None:
            prop = props[h] = _rk4_propagator(aug, h)
        for _ in range(n_sub):
            vec = prop @ vec
        out[i] = vec[component]
    return out


def fourier_numeric(
    series, tau_grid, omega_grid, tail_rate: float
) -> np.ndarray:
    """2*Re integral_0^inf C(tau) e^{i omega tau} dtau by composite Simpson
    quadrature on the sampled window plus an analytic exponential tail.

    The series must already have its tau->infinity constant removed; the tail
    beyond tau_max is modeled as C(tau_max) * exp(-tail_rate*(tau-tau_max)).
    """
    c = np.asarray(series, dtype=complex)
    tau = np.asarray(tau_grid, dtype=float)
    omega = np.asarray(omega_grid, dtype=float)
    if c.shape != tau.shape:
        raise ValueError("series and tau_grid must have the same shape")
    if tail_rate <= 0:
        raise ValueError("tail_rate must be positive")
    peak = np.max(np.abs(c))
    if peak > 0 and abs(c[-1]) > 1e-6 * peak:
        raise ValueError(
            "coherent part present: series does not decay over the window; "
            "remove the tau->infinity constant first"
        )
    out = np.empty(omega.shape, dtype=float)
    chunk = max(1, int(4e6 // max(tau.size, 1)))
    for start in range(0, omega.size, chunk):
        om = omega[start : start + chunk]
        integrand = c[None, :] * np.exp(1j * om[:, None] * tau[None, :])
        window = simpson(integrand, x=tau, axis=1)
        tail = c[-1] * np.exp(1j * om * tau[-1]) / (tail_rate - 1j * om)
        out[start : start + chunk] = 2.0 * (window + tail).real
    return out
