"""Bloch equations of the driven atom: generator, exact transients, steady states.

The equations of motion for v = (<sigma_m>, <sigma_p>, <sigma_z>) are
dv/dt = M v + b with the drift M and constant drive b built below.  The
antisymmetric dipole combination sm - sp decouples and decays at the dipole
rate; the symmetric combination couples to sigma_z in a 2x2 block whose
eigenvalues are -alpha and -beta from :func:`qdl.core.eigentriple`.  All
transients and (via the regression theorem) all two-time correlators are exact
affine solutions v(t) = exp(Mt) (v0 - v_ss) + v_ss expressed as
:class:`~qdl.core.ExponentialSum` objects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BlochVector,
    ExponentialSum,
    SystemParams,
    eigentriple,
)

BlochSums = tuple[ExponentialSum, ExponentialSum, ExponentialSum]


@dataclass(frozen=True)
class BlochGenerator:
    """Drift matrix M and constant drive b = (0, 0, -gamma)."""

    matrix: np.ndarray
    drive: np.ndarray


@dataclass(frozen=True)
class SteadyState:
    """Stationary Bloch vector with the derived population and inversion."""

    bloch: BlochVector
    rho_aa: float
    inversion_w: float


def bloch_generator(params: SystemParams) -> BlochGenerator:
    """Assemble M and b for dv/dt = M v + b."""
    g = params.dipole_rate
    om = params.omega
    matrix = np.array(
        [
            [-g, 0.0, -0.5 * om],
            [0.0, -g, -0.5 * om],
            [om, om, -2.0 * g],
        ],
        dtype=complex,
    )
    drive = np.array([0.0, 0.0, -params.gamma], dtype=complex)
    return BlochGenerator(matrix=matrix, drive=drive)


def steady_state(params: SystemParams) -> SteadyState:
    """Unique stationary solution of M v + b = 0, in closed form.

    rho_aa = (omega^2 + gamma^2 nbar (2 nbar + 1)) / (2 omega^2 + gamma^2 (2 nbar + 1)^2)
    and <sigma_p> = <sigma_m> = omega gamma / (2 omega^2 + gamma^2 (2 nbar + 1)^2).
    """
    c = 2.0 * params.nbar + 1.0
    denom = params.gamma**2 * c**2 + 2.0 * params.omega**2
    dipole = params.omega * params.gamma / denom
    sz = -params.gamma**2 * c / denom
    bloch = BlochVector(sm=complex(dipole), sp=complex(dipole), sz=sz)
    gen = bloch_generator(params)
    residual = gen.matrix @ bloch.as_array() + gen.drive
    assert np.max(np.abs(residual)) < 1e-10 * max(1.0, params.rate_scale), (
        "steady-state solve is singular"
    )
    return SteadyState(bloch=bloch, rho_aa=0.5 * (1.0 + sz), inversion_w=sz)


def paper_inversion(params: SystemParams) -> float:
    """As-published steady-state inversion, kept verbatim for discrepancy
    reporting: -1 / ((1+2*nbar) * (2*omega^2/gamma^2 + 1)).

    Disagrees with :func:`steady_state` whenever nbar > 0 (the drive term is
    missing a (2*nbar+1)^2 factor); the two coincide at nbar = 0.
    """
    return -1.0 / (
        (1.0 + 2.0 * params.nbar) * (2.0 * params.omega**2 / params.gamma**2 + 1.0)
    )


def paper_dipole_moment(params: SystemParams) -> float:
    """As-published steady-state dipole expectation omega*gamma^2/(2*alpha*beta).

    Carries one power of gamma too many (dimensionally consistent only for
    gamma=1, where it equals the corrected value); kept verbatim for
    discrepancy reporting.
    """
    trip = eigentriple(params)
    return (params.omega * params.gamma**2 / (2.0 * trip.alpha * trip.beta)).real


def affine_bloch_sums(
    params: SystemParams,
    initial,
    drive_scale: complex = 1.0,
) -> BlochSums:
    """Exact solution of du/dtau = M u + b*drive_scale as three ExponentialSums.

    `initial` is any complex 3-vector in (sm, sp, sz) ordering; it need not be
    a physical Bloch vector (regression initial data is not).  The returned
    components carry decay rates {dipole_rate, alpha, beta}; at the degenerate
    point alpha = beta the block solution switches to the confluent form
    (w + tau * B w) * exp(-rate*tau) instead of dividing by beta - alpha.
    """
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (3,):
        raise ValueError("initial must be a complex 3-vector (sm, sp, sz)")
    scale = complex(drive_scale)
    ss = steady_state(params).bloch.as_array() * scale
    g = params.dipole_rate
    om = params.omega
    trip = eigentriple(params)

    d0 = initial[0] - initial[1]
    # symmetric dipole + inversion block, centered on its fixed point
    w = np.array(
        [initial[0] + initial[1] - (ss[0] + ss[1]), initial[2] - ss[2]], dtype=complex
    )
    block = np.array([[-g, -om], [om, -2.0 * g]], dtype=complex)
    mid = 1.5 * g  # (gamma/4)*(6*nbar+3), the mean of alpha and beta

    s_modes: list[tuple[complex, complex, int]] = []
    z_modes: list[tuple[complex, complex, int]] = []
    if trip.degenerate:
        bw = (block + mid * np.eye(2)) @ w
        s_modes += [(mid, w[0], 0), (mid, bw[0], 1)]
        z_modes += [(mid, w[1], 0), (mid, bw[1], 1)]
    else:
        proj_a = (block @ w + trip.beta * w) / (trip.beta - trip.alpha)
        proj_b = (block @ w + trip.alpha * w) / (trip.alpha - trip.beta)
        s_modes += [(trip.alpha, proj_a[0], 0), (trip.beta, proj_b[0], 0)]
        z_modes += [(trip.alpha, proj_a[1], 0), (trip.beta, proj_b[1], 0)]

    sm = ExponentialSum.build(
        ss[0], [(g, 0.5 * d0, 0)] + [(r, 0.5 * c, p) for r, c, p in s_modes]
    )
    sp = ExponentialSum.build(
        ss[1], [(g, -0.5 * d0, 0)] + [(r, 0.5 * c, p) for r, c, p in s_modes]
    )
    sz = ExponentialSum.build(ss[2], z_modes)
    return sm, sp, sz


def transient(params: SystemParams, init: BlochVector, t: float) -> BlochVector:
    """Bloch vector at time t >= 0 starting from a physical state `init`."""
    if t < 0:
        raise ValueError("time must be non-negative")
    sm, sp, sz = affine_bloch_sums(params, init.as_array(), 1.0)
    sm_t = sm.value(t)
    sz_t = sz.value(t)
    return BlochVector(sm=sm_t, sp=sm_t.conjugate(), sz=sz_t.real)
