"""Shared domain types for a resonantly driven two-level atom in a thermal bath.

Unit convention: all frequencies are quoted in units of the atomic damping
rate gamma and all times in units of 1/gamma, so gamma=1 is the canonical
choice; every formula nevertheless carries gamma symbolically unless its
docstring says otherwise.

Operator convention: sigma_p = |upper><lower|, sigma_m = |lower><upper|,
sigma_z = |upper><upper| - |lower><lower|, and <sigma_m> = rho_ab (the
upper-lower coherence), <sigma_z> = rho_aa - rho_bb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

# |xi| below XI_DEGENERACY_FACTOR * gamma counts as the degenerate point where
# the two dressed decay rates coincide and closed forms need a confluent limit.
XI_DEGENERACY_FACTOR = 1e-9


def validate(omega: float, gamma: float, nbar: float) -> None:
    """Reject unphysical parameter combinations with a descriptive error."""
    for name, value in (("omega", omega), ("gamma", gamma), ("nbar", nbar)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite parameter {name}={value!r}")
    if omega < 0:
        raise ValueError(f"negative drive amplitude omega={omega}")
    if gamma <= 0:
        raise ValueError(f"non-positive damping rate gamma={gamma}")
    if nbar < 0:
        raise ValueError(f"negative thermal occupation nbar={nbar}")


@dataclass(frozen=True)
class SystemParams:
    """Drive amplitude omega, damping rate gamma and reservoir occupation nbar."""

    omega: float
    gamma: float = 1.0
    nbar: float = 0.0

    def __post_init__(self):
        validate(self.omega, self.gamma, self.nbar)

    @property
    def dipole_rate(self) -> float:
        """Transverse decay rate gamma*(2*nbar+1)/2 of the dipole components."""
        return 0.5 * self.gamma * (2.0 * self.nbar + 1.0)

    @property
    def inversion_rate(self) -> float:
        """Longitudinal decay rate gamma*(2*nbar+1) of the inversion."""
        return self.gamma * (2.0 * self.nbar + 1.0)

    @property
    def rate_scale(self) -> float:
        """Fastest frequency scale in the problem; sets integrator steps."""
        return max(self.inversion_rate, self.omega)


@dataclass(frozen=True)
class BlochVector:
    """Expectation triple (<sigma_m>, <sigma_p>, <sigma_z>) of a physical state."""

    sm: complex
    sp: complex
    sz: float

    _ATOL = 1e-9

    def __post_init__(self):
        if abs(self.sp - self.sm.conjugate()) > self._ATOL:
            raise ValueError("sp must be the complex conjugate of sm")
        if 4.0 * abs(self.sm) ** 2 + self.sz**2 > 1.0 + self._ATOL:
            raise ValueError("Bloch-ball violation")

    def as_array(self) -> np.ndarray:
        return np.array([self.sm, self.sp, self.sz], dtype=complex)


@dataclass(frozen=True)
class DensityMatrix:
    """Two-level density matrix: populations rho_aa (upper), rho_bb (lower) and
    coherence rho_ab = <upper|rho|lower>."""

    rho_aa: float
    rho_bb: float
    rho_ab: complex

    _ATOL = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.rho_aa) and math.isfinite(self.rho_bb)):
            raise ValueError("non-finite population")
        if abs(self.rho_aa + self.rho_bb - 1.0) > self._ATOL:
            raise ValueError("trace must be 1")
        if self.rho_aa < -self._ATOL or self.rho_bb < -self._ATOL:
            raise ValueError("negative population")
        if abs(self.rho_ab) ** 2 > self.rho_aa * self.rho_bb + self._ATOL:
            raise ValueError("positivity violation: |rho_ab|^2 > rho_aa*rho_bb")

    def matrix(self) -> np.ndarray:
        """Dense 2x2 matrix in the (upper, lower) basis."""
        return np.array(
            [[self.rho_aa, self.rho_ab], [np.conj(self.rho_ab), self.rho_bb]],
            dtype=complex,
        )


def bloch_from_density(rho: DensityMatrix) -> BlochVector:
    """Map a density matrix to (<sigma_m>, <sigma_p>, <sigma_z>)."""
    return BlochVector(
        sm=rho.rho_ab,
        sp=np.conj(rho.rho_ab),
        sz=rho.rho_aa - rho.rho_bb,
    )


def density_from_bloch(bloch: BlochVector) -> DensityMatrix:
    """Inverse of :func:`bloch_from_density`; round trip is the identity."""
    return DensityMatrix(
        rho_aa=0.5 * (1.0 + bloch.sz),
        rho_bb=0.5 * (1.0 - bloch.sz),
        rho_ab=complex(bloch.sm),
    )


@dataclass(frozen=True)
class EigenTriple:
    """Splitting parameter xi and the two dressed decay rates alpha, beta.

    alpha + beta = (gamma/2)*(6*nbar+3) and beta - alpha = 2*xi hold exactly;
    both rates have positive real part for any valid parameter set.
    """

    xi: complex
    alpha: complex
    beta: complex
    degenerate: bool


def eigentriple(params: SystemParams) -> EigenTriple:
    """Eigenstructure of the coupled dipole-inversion block.

    xi is the principal square root of (gamma^2/16)*(2*nbar+1)^2 - omega^2,
    taken with positive imaginary part when the radicand is negative so that
    beta - alpha = 2i*omega in the strong-drive limit.
    """
    radicand = (params.gamma**2 / 16.0) * (2.0 * params.nbar + 1.0) ** 2 - params.omega**2
    if radicand >= 0.0:
        xi = complex(math.sqrt(radicand), 0.0)
    else:
        xi = complex(0.0, math.sqrt(-radicand))
    mid = (params.gamma / 4.0) * (6.0 * params.nbar + 3.0)
    return EigenTriple(
        xi=xi,
        alpha=mid - xi,
        beta=mid + xi,
        degenerate=abs(xi) < XI_DEGENERACY_FACTOR * params.gamma,
    )


class Mode(NamedTuple):
    """One term weight * tau^power * exp(-rate*tau) of an ExponentialSum."""

    rate: complex
    weight: complex
    power: int = 0


@dataclass(frozen=True)
class ExponentialSum:
    """constant + sum_k weight_k * tau^power_k * exp(-rate_k * tau).

    The tau^power factors (power >= 1) only appear on the degenerate branch
    where two decay rates coincide; everywhere else all powers are zero and
    evaluation at tau=0 is constant + sum of weights.
    """

    constant: complex
    modes: tuple[Mode, ...]

    def __post_init__(self):
        for mode in self.modes:
            if mode.rate.real <= 0.0:
                raise ValueError(f"mode rate {mode.rate} must have positive real part")

    @classmethod
    def build(
        cls,
        constant: complex,
        raw_modes: Sequence[tuple[complex, complex, int]] | Sequence[Mode],
        merge_rtol: float = 1e-12,
        prune_rtol: float = 1e-14,
    ) -> "ExponentialSum":
        """Collect raw (rate, weight, power) terms: merge terms whose rates
        coincide to merge_rtol, drop terms negligible relative to the sum."""
        modes: list[Mode] = []
        for raw in raw_modes:
            rate, weight, power = complex(raw[0]), complex(raw[1]), int(raw[2])
            for i, have in enumerate(modes):
                if have.power == power and abs(have.rate - rate) <= merge_rtol * max(
                    1.0, abs(rate)
                ):
                    modes[i] = Mode(have.rate, have.weight + weight, power)
                    break
            else:
                modes.append(Mode(rate, weight, power))
        scale = max([abs(constant)] + [abs(m.weight) for m in modes], default=0.0)
        kept = tuple(m for m in modes if abs(m.weight) > prune_rtol * scale)
        return cls(complex(constant), kept)

    def value(self, tau):
        """Evaluate at scalar or array tau (tau >= 0)."""
        t = np.asarray(tau, dtype=float)
        out = np.full(t.shape, self.constant, dtype=complex)
        for rate, weight, power in self.modes:
            term = weight * np.exp(-rate * t)
            if power:
                term = term * t**power
            out = out + term
        if np.isscalar(tau) or getattr(tau, "shape", None) == ():
            return complex(out[()])
        return out

    def __call__(self, tau):
        return self.value(tau)

    @property
    def slowest_rate(self) -> float:
        """Smallest real part among the mode decay rates."""
        if not self.modes:
            return math.inf
        return min(m.rate.real for m in self.modes)
