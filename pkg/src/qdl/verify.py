"""Cross-validation suite: analytic results against the master-equation oracle.

`run_verify` executes every corrected-path check (transients vs RK4, steady
states, spectra vs quadrature, the g2 suite, squeezing) and appends the
documented discrepancies between the as-published closed forms and the
master-equation solution.  Checks must pass; discrepancy records are
informational and never fail the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .core import BlochVector, DensityMatrix, SystemParams, bloch_from_density, density_from_bloch
from .correlators import (
    dipole_correlator,
    g2,
    g2_strong,
    paper_dipole_correlator,
    paper_g2,
)
from .dynamics import (
    bloch_generator,
    paper_dipole_moment,
    paper_inversion,
    steady_state,
    transient,
)
from .oracle import (
    IntegratorConfig,
    correlator_numeric,
    evolve,
    fourier_numeric,
    lindblad_rhs,
    steady_numeric,
)
from .spectrum import decompose, evaluate, incoherent_power, mollow_strong, peaks
from .squeezing import quadrature_variances, squeezing_scan

FULL_OMEGAS = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
FULL_NBARS = (0.0, 0.25, 0.5, 0.75)
QUICK_OMEGAS = (0.0, 1.0, 5.0)
QUICK_NBARS = (0.0, 0.5)

# generic physical initial state exercising every Bloch component
_INIT = BlochVector(sm=0.1 + 0.05j, sp=0.1 - 0.05j, sz=0.4)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    kind: str  # "check" (must pass) or "discrepancy" (informational)
    passed: bool | None
    detail: str
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class VerifyReport:
    records: tuple[CheckRecord, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records if r.kind == "check")

    @property
    def discrepancies(self) -> tuple[CheckRecord, ...]:
        return tuple(r for r in self.records if r.kind == "discrepancy")

    def lines(self) -> list[str]:
        out = []
        for r in self.records:
            tag = "INFO" if r.kind == "discrepancy" else ("PASS" if r.passed else "FAIL")
            out.append(f"{tag} {r.name}: {r.detail}")
        out.append(
            f"{'OK' if self.passed else 'FAILED'}: "
            f"{sum(1 for r in self.records if r.kind == 'check' and r.passed)}/"
            f"{sum(1 for r in self.records if r.kind == 'check')} checks passed, "
            f"{len(self.discrepancies)} documented discrepancies"
        )
        return out


def _grid(quick: bool) -> list[SystemParams]:
    omegas = QUICK_OMEGAS if quick else FULL_OMEGAS
    nbars = QUICK_NBARS if quick else FULL_NBARS
    return [SystemParams(om, 1.0, nb) for om in omegas for nb in nbars]


def _check_transients(quick: bool) -> CheckRecord:
    worst = 0.0
    n_times = 32 if quick else 64
    rho0 = density_from_bloch(_INIT)
    for params in _grid(quick):
        cfg = IntegratorConfig.for_params(params, 10.0 / params.gamma)
        times, states = evolve(params, rho0, cfg)
        idx = np.linspace(0, times.size - 1, n_times).astype(int)
        for i in idx:
            exact = transient(params, _INIT, times[i])
            numeric = bloch_from_density(states[i])
            worst = max(
                worst,
                abs(exact.sm - numeric.sm),
                abs(exact.sz - numeric.sz),
            )
    return CheckRecord(
        name="transient-vs-rk4",
        kind="check",
        passed=worst <= 1e-8,
        detail=f"max |analytic - RK4| = {worst:.3e} over the parameter grid (tol 1e-8)",
        data={"max_error": worst},
    )


def _check_steady(quick: bool) -> CheckRecord:
    rng = np.random.default_rng(20260809)
    n_points = 25 if quick else 100
    worst_res, worst_pop = 0.0, 0.0
    for _ in range(n_points):
        params = SystemParams(
            omega=float(rng.uniform(0.0, 12.0)),
            gamma=float(rng.uniform(0.25, 4.0)),
            nbar=float(rng.uniform(0.0, 2.0)),
        )
        ss = steady_state(params)
        gen = bloch_generator(params)
        residual = np.max(np.abs(gen.matrix @ ss.bloch.as_array() + gen.drive))
        worst_res = max(worst_res, float(residual))
        c = 2.0 * params.nbar + 1.0
        ratio = params.omega**2 / params.gamma**2
        closed = (ratio + params.nbar * c) / (2.0 * ratio + c**2)
        worst_pop = max(worst_pop, abs(ss.rho_aa - closed))
        if not (4.0 * abs(ss.bloch.sm) ** 2 + ss.bloch.sz**2 <= 1.0 + 1e-12):
            worst_res = math.inf
    ok = worst_res <= 1e-12 and worst_pop <= 1e-14
    return CheckRecord(
        name="steady-state-identity",
        kind="check",
        passed=ok,
        detail=(
            f"max |Mv+b| = {worst_res:.3e} (tol 1e-12), max population mismatch "
            f"vs closed form = {worst_pop:.3e} at {n_points} random parameter points"
        ),
        data={"max_residual": worst_res, "max_population_error": worst_pop},
    )


def _check_strong_drive_population() -> CheckRecord:
    worst = 0.0
    for nb in FULL_NBARS:
        pop = steady_state(SystemParams(50.0, 1.0, nb)).rho_aa
        worst = max(worst, abs(pop - 0.5))
    return CheckRecord(
        name="strong-drive-population",
        kind="check",
        passed=worst <= 5e-4,
        detail=f"max |rho_aa(Omega=50 gamma) - 1/2| = {worst:.2e} (tol 5e-4)",
        data={"max_error": worst},
    )


def _spectrum_oracle_error(params: SystemParams, n_omega: int) -> float:
    decomp = decompose(params)
    window = 2.0 * params.omega + 10.0 * params.gamma
    omegas = np.linspace(-window, window, n_omega)
    lam_min = params.dipole_rate
    tau_max = 30.0 / lam_min
    h = min(2.0e-3, 0.02 / max(params.rate_scale, 1.0))
    tau = np.linspace(0.0, tau_max, int(math.ceil(tau_max / h)) + 1)
    series = correlator_numeric(params, "dipole", tau)
    rho_ss = steady_numeric(params)
    elastic = np.conj(rho_ss.rho_ab) ** 2
    numeric = fourier_numeric(series - elastic, tau, omegas, lam_min)
    return float(np.max(np.abs(evaluate(decomp, omegas) - numeric)))


def _check_spectrum_quadrature(quick: bool) -> CheckRecord:
    if quick:
        points = [SystemParams(1.0), SystemParams(10.0)]
        n_omega = 41
    else:
        points = [
            SystemParams(0.0, 1.0, 0.5),
            SystemParams(1.0),
            SystemParams(2.5, 1.0, 0.5),
            SystemParams(10.0),
            SystemParams(10.0, 1.0, 0.75),
        ]
        n_omega = 61
    worst = max(_spectrum_oracle_error(p, n_omega) for p in points)
    return CheckRecord(
        name="spectrum-vs-quadrature",
        kind="check",
        passed=worst <= 1e-6,
        detail=f"max |exact - Simpson(RK4 correlator)| = {worst:.3e} (tol 1e-6 absolute)",
        data={"max_error": worst},
    )


def _check_mollow_triplet(quick: bool) -> CheckRecord:
    # strong-drive triplet values agree at the exact peak centers on the nbar grid
    value_dev = 0.0
    nbars = QUICK_NBARS if quick else FULL_NBARS
    for nb in nbars:
        params = SystemParams(10.0, 1.0, nb)
        decomp = decompose(params)
        found = peaks(decomp, (-35.0, 35.0))
        centers = np.array([pk.center for pk in found])
        scale = float(mollow_strong(params, 0.0))
        value_dev = max(
            value_dev,
            float(
                np.max(
                    np.abs(evaluate(decomp, centers) - mollow_strong(params, centers))
                )
                / scale
            ),
        )
    # geometric tolerances hold at nbar = 0 where overlap corrections are smallest
    params = SystemParams(10.0, 1.0, 0.0)
    found = sorted(peaks(decompose(params), (-35.0, 35.0)), key=lambda p: p.center)
    ok_count = len(found) == 3
    center_dev = width_dev = math.inf
    if ok_count:
        center_dev = max(
            abs(found[0].center + 10.0) / 10.0,
            abs(found[1].center),
            abs(found[2].center - 10.0) / 10.0,
        )
        cw = 0.5 * (1.0 + 2.0 * params.nbar)
        sw = 0.25 * (6.0 * params.nbar + 3.0)
        width_dev = max(
            abs(0.5 * found[1].fwhm - cw) / cw,
            abs(0.5 * found[0].fwhm - sw) / sw,
            abs(0.5 * found[2].fwhm - sw) / sw,
        )
    ok = ok_count and value_dev <= 0.02 and center_dev <= 0.01 and width_dev <= 0.02
    return CheckRecord(
        name="mollow-triplet",
        kind="check",
        passed=ok,
        detail=(
            f"strong-drive form vs exact at peak centers: {value_dev * 100:.2f}% (tol 2%); "
            f"at nbar=0: centers off by {center_dev * 100:.2f}% (tol 1%), "
            f"half-widths off by {width_dev * 100:.2f}% (tol 2%)"
        ),
        data={
            "value_deviation": value_dev,
            "center_deviation": center_dev,
            "width_deviation": width_dev,
        },
    )


def _check_sum_rule(quick: bool) -> CheckRecord:
    worst = 0.0
    for params in _grid(quick):
        decomp = decompose(params)
        total = decomp.coherent_weight / (2.0 * math.pi) + incoherent_power(decomp)
        pop = steady_numeric(params).rho_aa
        if pop > 0:
            worst = max(worst, abs(total - pop) / pop)
    params = SystemParams(10.0, 1.0, 0.5)
    integral, _ = quad(
        lambda w: mollow_strong(params, w), -np.inf, np.inf, limit=400
    )
    pi_dev = abs(integral - math.pi) / math.pi
    ok = worst <= 1e-3 and pi_dev <= 1e-3
    return CheckRecord(
        name="spectrum-power-sum-rule",
        kind="check",
        passed=ok,
        detail=(
            f"max relative error of coherent/2pi + integral S_inc/2pi vs rho_aa: "
            f"{worst:.2e} (tol 0.1%); strong-drive spectrum integral vs pi: {pi_dev:.2e}"
        ),
        data={"max_relative_error": worst, "pi_deviation": pi_dev},
    )


def _check_g2(quick: bool) -> CheckRecord:
    tau_probe = np.linspace(0.0, 20.0, 129 if quick else 257)
    worst_zero = worst_one = worst_oracle = worst_strong = 0.0
    antibunched_all = True
    for params in _grid(quick):
        if params.omega == 0.0 and params.nbar == 0.0:
            continue  # no emission; error path covered in tests
        curve = g2(params, tau_probe)
        worst_zero = max(worst_zero, abs(curve.values[0]))
        numeric = correlator_numeric(params, "intensity", tau_probe)
        pop = steady_numeric(params).rho_aa
        g2_numeric = (pop + numeric.real) / (2.0 * pop**2)
        worst_oracle = max(worst_oracle, float(np.max(np.abs(curve.values - g2_numeric))))
        tail = g2(params, np.array([0.0, 50.0])).values[1]
        worst_one = max(worst_one, abs(tail - 1.0))
        if not (
            curve.values[1] >= curve.values[0] - 1e-12
            and curve.values[2] >= curve.values[1] - 1e-12
        ):
            antibunched_all = False
    # strong-drive form: pointwise-relative agreement once both curves are of
    # order one (for gamma*tau < 2 they differ at linear order near the zero
    # crossing, where a pointwise ratio is meaningless), plus the envelope
    # extrema tau_k = k pi / omega over the whole window
    settled = np.linspace(2.0, 20.0, 361)
    extrema = np.arange(1, int(20.0 * 10.0 / math.pi) + 1) * math.pi / 10.0
    for nb in FULL_NBARS:
        params = SystemParams(10.0, 1.0, nb)
        for probe in (settled, extrema):
            exact = g2(params, np.concatenate([[0.0], probe])).values[1:]
            limit = np.asarray(g2_strong(params, probe))
            worst_strong = max(
                worst_strong, float(np.max(np.abs(exact - limit) / np.abs(exact)))
            )
    ok = (
        worst_zero <= 1e-12
        and worst_one < 1e-6
        and worst_oracle <= 1e-7
        and worst_strong <= 0.02
        and antibunched_all
    )
    return CheckRecord(
        name="g2-suite",
        kind="check",
        passed=ok,
        detail=(
            f"g2(0) <= {worst_zero:.1e} (tol 1e-12); |g2(50/gamma)-1| <= {worst_one:.1e} "
            f"(tol 1e-6); closed form vs regression oracle <= {worst_oracle:.1e} (tol 1e-7); "
            f"strong-drive form within {worst_strong * 100:.2f}% at Omega=10 gamma (tol 2%); "
            f"antibunched at every grid point: {antibunched_all}"
        ),
        data={
            "max_g2_zero": worst_zero,
            "max_tail_error": worst_one,
            "max_oracle_error": worst_oracle,
            "max_strong_deviation": worst_strong,
            "antibunched": antibunched_all,
        },
    )


def _check_published_g2() -> CheckRecord:
    tau = np.linspace(0.0, 20.0, 201)
    worst = 0.0
    for params in [SystemParams(1.0), SystemParams(3.0, 1.0, 0.75), SystemParams(10.0, 1.0, 0.25)]:
        worst = max(
            worst,
            float(np.max(np.abs(paper_g2(params, tau) - g2(params, tau).values))),
        )
    return CheckRecord(
        name="published-g2-consistency",
        kind="check",
        passed=worst <= 1e-10,
        detail=(
            f"the as-published g2 closed form matches the regression solution to "
            f"{worst:.1e}; no correction needed on this one"
        ),
        data={"max_error": worst},
    )


def _check_squeezing(quick: bool) -> CheckRecord:
    vy_min = min(
        quadrature_variances(p).var_y_normal
        for p in _grid(quick)
    )
    # closed-form minimum at nbar=0 against a brute scan at 1e-4 resolution
    omegas = np.arange(0.0, 1.5 + 1e-12, 1e-4)
    vals = np.array(
        [quadrature_variances(SystemParams(om)).var_x_normal for om in omegas]
    )
    brute_min = float(vals.min())
    brute_arg = float(omegas[vals.argmin()])
    min_dev = abs(brute_min + 1.0 / 16.0)
    arg_dev = abs(brute_arg - 1.0 / math.sqrt(6.0))
    pockets0 = squeezing_scan(0.0, (0.0, 1.5), 3001)
    endpoint_dev = (
        abs(pockets0[0][1] - 1.0 / math.sqrt(2.0)) if pockets0 else math.inf
    )
    shrink = True
    previous = pockets0[0] if pockets0 else None
    for nb in (0.01, 0.02, 0.03, 0.04):
        pockets = squeezing_scan(nb, (0.0, 1.5), 3001)
        if len(pockets) != 1 or previous is None:
            shrink = False
            break
        lo, hi = pockets[0]
        if not (lo >= previous[0] - 1e-9 and hi <= previous[1] + 1e-9 and hi - lo < previous[1] - previous[0]):
            shrink = False
            break
        previous = pockets[0]
    ok = (
        vy_min >= 0.0
        and min_dev <= 1e-6
        and arg_dev <= 1e-4
        and endpoint_dev <= 1e-6
        and shrink
    )
    return CheckRecord(
        name="squeezing-suite",
        kind="check",
        passed=ok,
        detail=(
            f"min var_y on grid = {vy_min:.3e} (>= 0); brute-scan min var_x = "
            f"{brute_min:.8f} at Omega = {brute_arg:.5f} gamma (expect -1/16 at "
            f"1/sqrt(6), tols 1e-6 / 1e-4); pocket endpoint dev = {endpoint_dev:.2e} "
            f"from 1/sqrt(2) (tol 1e-6); pockets shrink with nbar: {shrink}"
        ),
        data={
            "var_y_min": vy_min,
            "brute_min": brute_min,
            "brute_argmin": brute_arg,
            "endpoint_deviation": endpoint_dev,
            "pockets_shrink": shrink,
        },
    )


def _discrepancy_drive_sign() -> CheckRecord:
    rho = DensityMatrix(rho_aa=0.5, rho_bb=0.5, rho_ab=0.25 + 0.1j)
    params = SystemParams(2.0, 1.0, 0.5)
    trace_paper = complex(np.trace(lindblad_rhs(params, rho, "paper")))
    trace_comm = complex(np.trace(lindblad_rhs(params, rho, "commutator")))
    return CheckRecord(
        name="drive-term-sign",
        kind="discrepancy",
        passed=None,
        detail=(
            "the published drive term flips the sign of rho*sigma_m relative to the "
            f"commutator of the drive Hamiltonian and does not conserve the trace "
            f"(d tr/dt = {trace_paper.real:+.3f} vs {trace_comm.real:+.1e} here, "
            f"= -Omega*<sigma_m>); the commutator form reproduces the operative "
            "expectation-value equations and is the default"
        ),
        data={
            "trace_rate_paper": trace_paper.real,
            "trace_rate_commutator": trace_comm.real,
        },
    )


def _discrepancy_inversion(strict_paper: bool) -> CheckRecord:
    params = SystemParams(1.0, 1.0, 0.5)
    published = paper_inversion(params)
    corrected = steady_state(params).inversion_w
    ratio = corrected / published
    data = {
        "published": published,
        "corrected": corrected,
        "ratio": ratio,
        "factor": "2*nbar+1",
    }
    if strict_paper:
        data["ratio_by_nbar"] = {
            f"{nb:g}": steady_state(SystemParams(1.0, 1.0, nb)).inversion_w
            / paper_inversion(SystemParams(1.0, 1.0, nb))
            for nb in FULL_NBARS
        }
    return CheckRecord(
        name="inversion-formula",
        kind="discrepancy",
        passed=None,
        detail=(
            f"published steady-state inversion at (Omega=gamma, nbar=0.5) gives "
            f"{published:+.6f} while the master equation gives {corrected:+.6f}; "
            f"ratio = {ratio:g} = 2*nbar+1 (the drive term is missing a "
            f"(2*nbar+1)^2 factor); both are reported, the corrected form is the default"
        ),
        data=data,
    )


def _discrepancy_correlator_factor() -> CheckRecord:
    params = SystemParams(0.0, 1.0, 0.5)
    published = paper_dipole_correlator(params).value(0.0).real
    exact = dipole_correlator(params).value(0.0).real
    return CheckRecord(
        name="correlator-leading-factor",
        kind="discrepancy",
        passed=None,
        detail=(
            f"the published dipole-correlator closed form starts at "
            f"{published:g} = 2*rho_aa at tau=0 instead of rho_aa = {exact:g} "
            f"(spurious leading factor {published / exact:g}); the regression route, "
            "which does reproduce the published strong- and weak-drive limits, is used"
        ),
        data={"published_tau0": published, "exact_tau0": exact, "factor": published / exact},
    )


def _discrepancy_dipole_dimension() -> CheckRecord:
    params = SystemParams(1.0, 2.0, 0.0)
    published = paper_dipole_moment(params)
    corrected = float(steady_state(params).bloch.sp.real)
    return CheckRecord(
        name="dipole-moment-dimension",
        kind="discrepancy",
        passed=None,
        detail=(
            f"the published steady-state dipole expression carries an extra factor "
            f"gamma (ratio {published / corrected:g} at gamma=2); it is dimensionally "
            "consistent only in gamma=1 units, where both forms coincide"
        ),
        data={"published": published, "corrected": corrected, "ratio": published / corrected},
    )


def _discrepancy_squeezing_pockets() -> CheckRecord:
    found = {
        f"{nb:g}": {
            path: squeezing_scan(nb, (0.0, 1.5), 2001, formula_path=path)
            for path in ("corrected", "paper")
        }
        for nb in (0.05, 0.1, 0.15)
    }
    any_pocket = any(p for by_path in found.values() for p in by_path.values())
    return CheckRecord(
        name="squeezing-pocket-range",
        kind="discrepancy",
        passed=None,
        detail=(
            "the claimed squeezing pockets at nbar = 0.05/0.1/0.15 are not "
            "reproducible from the quadrature-variance formulas on either the "
            "corrected or the as-published steady-state path (squeezing dies out "
            f"near nbar = 0.046 on the corrected path); pockets found: {any_pocket}"
        ),
        data={"pockets": {k: {p: list(map(list, v)) for p, v in d.items()} for k, d in found.items()}},
    )


def run_verify(quick: bool = False, strict_paper: bool = False) -> VerifyReport:
    """Run all corrected-path checks and the documented-discrepancy ledger."""
    records = [
        _check_transients(quick),
        _check_steady(quick),
        _check_strong_drive_population(),
        _check_spectrum_quadrature(quick),
        _check_mollow_triplet(quick),
        _check_sum_rule(quick),
        _check_g2(quick),
        _check_published_g2(),
        _check_squeezing(quick),
        _discrepancy_drive_sign(),
        _discrepancy_inversion(strict_paper),
        _discrepancy_correlator_factor(),
        _discrepancy_dipole_dimension(),
        _discrepancy_squeezing_pockets(),
    ]
    return VerifyReport(records=tuple(records))
