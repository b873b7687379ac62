import math

import numpy as np
import pytest

from qdl.core import DensityMatrix, SystemParams, bloch_from_density
from qdl.dynamics import steady_state
from qdl.oracle import (
    IntegratorConfig,
    correlator_numeric,
    evolve,
    fourier_numeric,
    lindblad_rhs,
    liouvillian_matrix,
    steady_numeric,
)

MIXED = DensityMatrix(0.5, 0.5, 0.0)
GROUND = DensityMatrix(0.0, 1.0, 0.0)
EXCITED = DensityMatrix(1.0, 0.0, 0.0)


def random_density(rng):
    sz = rng.uniform(-1, 1)
    r = 0.5 * math.sqrt(1 - sz**2) * rng.uniform(0, 1)
    phase = rng.uniform(0, 2 * np.pi)
    return DensityMatrix(0.5 * (1 + sz), 0.5 * (1 - sz), r * np.exp(1j * phase))


class TestRhs:
    def test_pure_decay_of_mixed_state(self):
        deriv = lindblad_rhs(SystemParams(0.0), MIXED)
        assert deriv[0, 0].real == pytest.approx(-0.5)

    def test_ground_is_vacuum_fixed_point(self):
        deriv = lindblad_rhs(SystemParams(0.0), GROUND)
        assert np.max(np.abs(deriv)) == 0.0

    def test_drive_builds_coherence_from_ground(self):
        deriv = lindblad_rhs(SystemParams(1.0), GROUND)
        assert abs(deriv[0, 1]) == pytest.approx(0.5)

    def test_trace_and_hermiticity_preserved(self):
        rng = np.random.default_rng(42)
        params = SystemParams(2.0, 1.0, 0.5)
        for _ in range(50):
            rho = random_density(rng)
            deriv = lindblad_rhs(params, rho)
            assert abs(np.trace(deriv)) < 1e-14
            assert np.max(np.abs(deriv - deriv.conj().T)) < 1e-14

    def test_paper_drive_breaks_trace(self):
        rho = DensityMatrix(0.5, 0.5, 0.25)
        params = SystemParams(2.0, 1.0, 0.5)
        trace_rate = np.trace(lindblad_rhs(params, rho, "paper"))
        # d tr/dt = -omega * <sigma_m> for the as-published drive term
        assert trace_rate.real == pytest.approx(-2.0 * 0.25)

    def test_unknown_drive_form(self):
        with pytest.raises(ValueError, match="drive_form"):
            lindblad_rhs(SystemParams(1.0), MIXED, "bogus")


class TestLiouvillian:
    def test_consistent_with_rhs(self):
        rng = np.random.default_rng(3)
        params = SystemParams(3.0, 1.0, 0.75)
        lmat = liouvillian_matrix(params)
        for _ in range(20):
            rho = random_density(rng)
            direct = lindblad_rhs(params, rho)
            via_matrix = (lmat @ rho.matrix().reshape(4)).reshape(2, 2)
            assert np.max(np.abs(direct - via_matrix)) < 1e-14

    def test_trace_row_in_left_null_space(self):
        lmat = liouvillian_matrix(SystemParams(5.0, 1.0, 0.5))
        assert np.max(np.abs(np.array([1, 0, 0, 1]) @ lmat)) < 1e-14


class TestEvolve:
    def test_known_decay_law(self):
        params = SystemParams(0.0)
        cfg = IntegratorConfig.for_params(params, 5.0)
        times, states = evolve(params, EXCITED, cfg)
        worst = max(
            abs(state.rho_aa - math.exp(-t)) for t, state in zip(times, states)
        )
        assert worst < 1e-9

    def test_long_time_matches_steady_state(self):
        params = SystemParams(2.0, 1.0, 0.5)
        cfg = IntegratorConfig.for_params(params, 40.0)
        _, states = evolve(params, EXCITED, cfg)
        ss = steady_state(params)
        final = bloch_from_density(states[-1])
        assert abs(final.sz - ss.bloch.sz) < 1e-8
        assert abs(final.sm - ss.bloch.sm) < 1e-8

    def test_physical_along_trajectory(self):
        params = SystemParams(5.0, 1.0, 0.75)
        cfg = IntegratorConfig.for_params(params, 10.0)
        _, states = evolve(params, DensityMatrix(0.7, 0.3, 0.2 + 0.1j), cfg)
        for state in states[:: len(states) // 50]:
            assert abs(state.rho_aa + state.rho_bb - 1.0) < 1e-12
            assert state.rho_aa >= -1e-9 and state.rho_bb >= -1e-9
            assert abs(state.rho_ab) ** 2 <= state.rho_aa * state.rho_bb + 1e-9

    def test_fourth_order_convergence(self):
        # step halving shrinks the error by ~16 (Richardson check); disable
        # the tolerance-driven refinement to probe the raw fixed-step map
        params = SystemParams(2.0, 1.0, 0.5)
        t_end = 2.0

        def final_state(step):
            cfg = IntegratorConfig(step, t_end, tolerance=math.inf)
            _, states = evolve(params, EXCITED, cfg)
            return states[-1].matrix()

        reference = final_state(0.8e-3)
        err1 = np.max(np.abs(final_state(0.04) - reference))
        err2 = np.max(np.abs(final_state(0.02) - reference))
        assert 13.0 < err1 / err2 < 19.0

    def test_refuses_unstable_step(self):
        params = SystemParams(10.0)
        with pytest.raises(ValueError, match="too large"):
            evolve(params, EXCITED, IntegratorConfig(step=0.1, t_max=1.0))

    def test_default_step_resolves_fastest_scale(self):
        params = SystemParams(10.0, 1.0, 0.75)
        cfg = IntegratorConfig.for_params(params, 1.0)
        assert cfg.step <= 0.01 / max(params.inversion_rate, params.omega)


class TestSteadyNumeric:
    def test_thermal_population(self):
        rho = steady_numeric(SystemParams(0.0, 1.0, 0.5))
        assert rho.rho_aa == pytest.approx(0.25, abs=1e-12)

    def test_driven_population(self):
        rho = steady_numeric(SystemParams(1.0))
        assert rho.rho_aa == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_vacuum_ground_state(self):
        rho = steady_numeric(SystemParams(0.0))
        assert rho.rho_bb == pytest.approx(1.0, abs=1e-12)

    def test_null_space_residual(self):
        for params in (SystemParams(1.0), SystemParams(5.0, 2.0, 0.75)):
            lmat = liouvillian_matrix(params)
            vec = steady_numeric(params).matrix().reshape(4)
            assert np.max(np.abs(lmat @ vec)) < 1e-12

    def test_matches_closed_form(self):
        for om in (0.0, 0.5, 2.0, 10.0):
            for nb in (0.0, 0.5):
                params = SystemParams(om, 1.0, nb)
                assert steady_numeric(params).rho_aa == pytest.approx(
                    steady_state(params).rho_aa, abs=1e-12
                )


class TestCorrelatorNumeric:
    def test_dipole_initial_value(self):
        params = SystemParams(2.0, 1.0, 0.5)
        series = correlator_numeric(params, "dipole", np.linspace(0, 5, 65))
        assert series[0].real == pytest.approx(steady_numeric(params).rho_aa, abs=1e-12)

    def test_dipole_factorizes_at_long_delay(self):
        params = SystemParams(1.0, 1.0, 0.25)
        tau = np.linspace(0.0, 60.0, 241)
        series = correlator_numeric(params, "dipole", tau)
        dip = np.conj(steady_numeric(params).rho_ab)
        assert abs(series[-1] - dip**2) < 1e-9

    def test_intensity_initial_value(self):
        params = SystemParams(2.0, 1.0, 0.5)
        series = correlator_numeric(params, "intensity", np.linspace(0, 5, 65))
        assert series[0].real == pytest.approx(-steady_numeric(params).rho_aa, abs=1e-12)

    def test_grid_validation(self):
        params = SystemParams(1.0)
        with pytest.raises(ValueError, match="ascending from 0"):
            correlator_numeric(params, "dipole", np.array([0.5, 1.0]))
        with pytest.raises(ValueError, match="kind"):
            correlator_numeric(params, "antibunch", np.array([0.0, 1.0]))


class TestFourierNumeric:
    def test_lorentzian_peak(self):
        tau = np.linspace(0, 40, 4001)
        series = np.exp(-tau)
        out = fourier_numeric(series, tau, np.array([0.0, 1.0]), tail_rate=1.0)
        assert out[0] == pytest.approx(2.0, abs=1e-9)
        assert out[1] == pytest.approx(1.0, abs=1e-9)

    def test_oscillating_series(self):
        tau = np.linspace(0, 40, 8001)
        series = np.exp(-tau) * np.cos(5 * tau)
        out = fourier_numeric(series, tau, np.array([5.0]), tail_rate=1.0)
        assert out[0] == pytest.approx(1.0 + 1.0 / 101.0, rel=1e-6)

    def test_rejects_non_decaying_series(self):
        tau = np.linspace(0, 40, 401)
        series = 0.2 + np.exp(-tau)
        with pytest.raises(ValueError, match="coherent part present"):
            fourier_numeric(series, tau, np.array([0.0]), tail_rate=1.0)

    def test_zero_series_passes(self):
        tau = np.linspace(0, 10, 101)
        out = fourier_numeric(np.zeros_like(tau), tau, np.array([0.0, 1.0]), 1.0)
        np.testing.assert_allclose(out, 0.0)

    def test_tolerance_refines_step(self):
        # a loose step with a tight tolerance gets halved until the Richardson
        # defect estimate over t_max is below the tolerance
        params = SystemParams(2.0, 1.0, 0.5)
        coarse = IntegratorConfig(step=0.05, t_max=2.0, tolerance=1e-10)
        times, states = evolve(params, EXCITED, coarse)
        assert times.size - 1 > 40  # refined beyond t_max/step = 40 steps
        fixed = IntegratorConfig(step=0.05, t_max=2.0, tolerance=math.inf)
        _, coarse_states = evolve(params, EXCITED, fixed)
        reference = evolve(params, EXCITED, IntegratorConfig(1e-4, 2.0, math.inf))[1][-1]
        refined_err = np.max(np.abs(states[-1].matrix() - reference.matrix()))
        coarse_err = np.max(np.abs(coarse_states[-1].matrix() - reference.matrix()))
        assert refined_err < coarse_err
        assert refined_err < 1e-10
