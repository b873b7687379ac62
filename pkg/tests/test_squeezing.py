import math

import numpy as np
import pytest

from qdl.core import SystemParams
from qdl.squeezing import (
    quadrature_variances,
    squeezing_scan,
    uncertainty_check,
)

GRID = [
    SystemParams(om, 1.0, nb)
    for om in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
    for nb in (0.0, 0.25, 0.5, 0.75)
]


class TestQuadratureVariances:
    def test_strong_drive_not_squeezed(self):
        report = quadrature_variances(SystemParams(50.0))
        assert report.var_x_normal == pytest.approx(0.5, abs=1e-3)
        assert not report.squeezed

    def test_optimal_drive_squeezed(self):
        # closed form: var_x = omega^2 (2 omega^2 - 1)/(1 + 2 omega^2)^2 at
        # nbar=0, minimized at omega = 1/sqrt(6) with value -1/16
        report = quadrature_variances(SystemParams(1.0 / math.sqrt(6.0)))
        assert report.var_x_normal == pytest.approx(-1.0 / 16.0, abs=1e-14)
        assert report.squeezed

    def test_ground_state_vanishing_moments(self):
        report = quadrature_variances(SystemParams(0.0))
        assert report.var_x_normal == 0.0
        assert report.var_y_normal == 0.0
        assert not report.squeezed

    def test_var_y_never_negative(self):
        for params in GRID:
            assert quadrature_variances(params).var_y_normal >= 0.0

    def test_var_x_bounds_and_limits(self):
        for params in GRID:
            assert quadrature_variances(params).var_x_normal >= -0.25
        assert quadrature_variances(SystemParams(500.0)).var_x_normal == pytest.approx(
            0.5, abs=1e-5
        )

    def test_closed_form_vs_brute_scan(self):
        omegas = np.arange(0.0, 1.5 + 1e-12, 1e-4)
        values = np.array(
            [quadrature_variances(SystemParams(om)).var_x_normal for om in omegas]
        )
        idx = values.argmin()
        assert values[idx] == pytest.approx(-1.0 / 16.0, abs=1e-6)
        assert omegas[idx] == pytest.approx(1.0 / math.sqrt(6.0), abs=1e-4)

    def test_paper_path_differs_for_thermal(self):
        params = SystemParams(0.4, 1.0, 0.1)
        corrected = quadrature_variances(params, "corrected")
        published = quadrature_variances(params, "paper")
        assert corrected.var_x_normal != pytest.approx(published.var_x_normal, abs=1e-6)
        with pytest.raises(ValueError, match="formula_path"):
            quadrature_variances(params, "wrong")


class TestSqueezingScan:
    def test_vacuum_pocket(self):
        pockets = squeezing_scan(0.0, (0.0, 1.5), 3001)
        assert len(pockets) == 1
        lo, hi = pockets[0]
        assert lo == pytest.approx(0.0, abs=1e-9)
        assert hi == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-6)

    def test_small_thermal_pocket(self):
        pockets = squeezing_scan(0.02, (0.0, 1.5), 3001)
        assert len(pockets) == 1
        lo, hi = pockets[0]
        assert lo < 1.0 / math.sqrt(6.0) < hi

    def test_strong_thermal_no_pocket(self):
        assert squeezing_scan(2.0, (0.0, 1.5), 2001) == []

    def test_pockets_shrink_with_nbar(self):
        previous = None
        for nb in (0.0, 0.01, 0.02, 0.03, 0.04):
            pockets = squeezing_scan(nb, (0.0, 1.5), 3001)
            assert len(pockets) == 1
            lo, hi = pockets[0]
            if previous is not None:
                assert lo >= previous[0] - 1e-9
                assert hi <= previous[1] + 1e-9
                assert hi - lo < previous[1] - previous[0]
            previous = (lo, hi)

    def test_claimed_thermal_pockets_absent_on_both_paths(self):
        for nb in (0.05, 0.1, 0.15):
            for path in ("corrected", "paper"):
                assert squeezing_scan(nb, (0.0, 1.5), 2001, formula_path=path) == []

    def test_resolution_validation(self):
        with pytest.raises(ValueError, match="resolution"):
            squeezing_scan(0.0, (0.0, 1.5), 1)
        with pytest.raises(ValueError, match="ordered"):
            squeezing_scan(0.0, (1.5, 0.0), 100)


class TestUncertainty:
    def test_ground_state_minimum_uncertainty(self):
        record = uncertainty_check(SystemParams(0.0))
        assert record.commutator_bound == pytest.approx(0.5)
        assert record.product == pytest.approx(record.commutator_bound**2, abs=1e-14)
        assert record.ok

    def test_squeezed_point_full_variance_positive(self):
        record = uncertainty_check(SystemParams(1.0 / math.sqrt(6.0)))
        # normal-ordered variance is -1/16 but the full variance stays positive
        assert record.var_x_full == pytest.approx(
            -1.0 / 16.0 + record.commutator_bound, abs=1e-14
        )
        assert record.var_x_full > 0.0
        assert record.ok

    def test_near_maximally_mixed(self):
        record = uncertainty_check(SystemParams(0.0, 1.0, 1e6))
        assert record.commutator_bound == pytest.approx(0.0, abs=1e-6)
        assert record.product >= record.commutator_bound**2

    def test_holds_on_grid(self):
        for params in GRID:
            record = uncertainty_check(params)
            assert record.product >= record.commutator_bound**2 - 1e-12
