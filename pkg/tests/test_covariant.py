import math

import numpy as np
import pytest

from covariant_lab import heisenberg as hg
from covariant_lab import su11 as su
from covariant_lab.covariant import (
    Kernel,
    check_left_intertwining,
    check_right_covariance,
    integrated_representation,
    right_integrated_on_image,
    wavelet_transform,
)
from covariant_lab.errors import CoverageError
from covariant_lab.numerics import RealGrid, inner_product
from covariant_lab.uncertainty import equivalence_report

KX = Kernel("delta_derivative_x")
KY = Kernel("delta_derivative_y")
KZ = Kernel("delta_derivative_z")


class TestGenericTransform:
    def test_base_point_gives_norm_squared(self, planck, state_grid, heis_handle):
        f = hg.vacuum_window(planck, state_grid)
        val = wavelet_transform(f, f, heis_handle, points=[(0.0, 0.0)])[0]
        assert val == pytest.approx(f.norm() ** 2, abs=1e-10)

    def test_matches_plane_fast_path(self, planck, state_grid, heis_handle):
        sub = RealGrid(-2.0, 2.0, 9)
        pts = [(float(x), float(y)) for x in sub.points for y in sub.points]
        vac = hg.vacuum_window(planck, state_grid)
        for v in hg.line_signal_battery(state_grid, count=3, seed=21):
            gen = wavelet_transform(v, vac, heis_handle, points=pts)
            fast = hg.fsb_transform(v, planck, sub, sub).values.reshape(-1)
            assert np.max(np.abs(gen - fast)) < 1e-10

    def test_matches_disk_fast_path(self, disk_handle):
        geom = su.default_disk_geometry(n_rho=8, n_theta=8)
        pts = list(geom.w_points().reshape(-1))
        for v in su.circle_signal_battery(4)[2:]:
            gen = wavelet_transform(v, su.f_plus(), disk_handle, points=pts)
            fast = su.hardy_transform(v, geom).values.reshape(-1)
            assert np.max(np.abs(gen - fast)) < 1e-10

    def test_orthogonal_pair_gives_zero(self, planck, state_grid, heis_handle):
        # center the signal far from every shifted window on the sampled set
        q = state_grid.points
        from covariant_lab.numerics import GridFunction1D

        v = GridFunction1D(state_grid, np.exp(-40.0 * (q - 5.0) ** 2))
        f = GridFunction1D(state_grid, np.exp(-40.0 * (q + 5.0) ** 2))
        pts = [(x, 0.0) for x in (-0.5, 0.0, 0.5)]
        vals = wavelet_transform(v, f, heis_handle, points=pts)
        assert np.max(np.abs(vals)) < 1e-12

    def test_linear_in_signal_conjugate_linear_in_mother(
        self, planck, state_grid, heis_handle, rng
    ):
        pts = [(0.3, -0.4), (0.0, 0.9), (-1.1, 0.2)]
        sigs = hg.line_signal_battery(state_grid, count=4, seed=13)
        v1, v2, f1, f2 = sigs
        a = complex(0.7, -1.2)
        b = complex(-0.3, 0.5)
        lhs = wavelet_transform(a * v1 + b * v2, f1, heis_handle, points=pts)
        rhs = a * wavelet_transform(v1, f1, heis_handle, points=pts) + b * wavelet_transform(
            v2, f1, heis_handle, points=pts
        )
        assert np.max(np.abs(lhs - rhs)) < 1e-10
        lhs = wavelet_transform(v1, a * f1 + b * f2, heis_handle, points=pts)
        rhs = np.conj(a) * wavelet_transform(v1, f1, heis_handle, points=pts) + np.conj(
            b
        ) * wavelet_transform(v1, f2, heis_handle, points=pts)
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_boundedness_on_group(self, planck, state_grid, heis_handle, rng):
        vac = hg.vacuum_window(planck, state_grid)
        v = hg.line_signal_battery(state_grid, count=4, seed=2)[3]
        bound = v.norm() * vac.norm()
        for _ in range(20):
            g = heis_handle.random_element(rng)
            assert abs(heis_handle.pair(v, g, vac)) <= bound * (1 + 1e-8)


class TestIntertwining:
    def test_identity_element(self, planck, state_grid, heis_handle):
        vac = hg.vacuum_window(planck, state_grid)
        v = hg.line_signal_battery(state_grid, count=3, seed=4)[2]
        assert check_left_intertwining(v, vac, hg.H_IDENTITY, heis_handle) < 1e-14
        assert check_right_covariance(v, vac, hg.H_IDENTITY, heis_handle) < 1e-14

    def test_plane_group_random(self, planck, state_grid, heis_handle, rng):
        vac = hg.vacuum_window(planck, state_grid)
        v = hg.line_signal_battery(state_grid, count=3, seed=4)[2]
        for _ in range(10):
            g = heis_handle.random_element(rng)
            assert check_left_intertwining(v, vac, g, heis_handle) < 1e-6
            assert check_right_covariance(v, vac, g, heis_handle) < 1e-6

    def test_disk_group(self, disk_handle, rng):
        v = su.circle_signal_battery(4)[3]
        fp = su.f_plus()
        g = su.exp_Z(0.3)
        assert check_left_intertwining(v, fp, g, disk_handle) < 1e-6
        for _ in range(5):
            g = disk_handle.random_element(rng)
            assert check_left_intertwining(v, fp, g, disk_handle) < 1e-6
            assert check_right_covariance(v, fp, g, disk_handle) < 1e-6

    def test_isotropy_character_pattern(self, planck, state_grid, heis_handle):
        # right shift by a central element scales the transform by conj(chi)
        vac = hg.vacuum_window(planck, state_grid)
        v = hg.line_signal_battery(state_grid, count=3, seed=4)[1]
        h = hg.HeisenbergElement(0.3, 0.0, 0.0)
        chi = np.exp(-2j * math.pi * planck.hbar * 0.3)
        for x in [(-1.0, 0.5), (0.3, -0.2)]:
            shifted = heis_handle.pair(v, hg.h_mul(heis_handle.section(x), h), vac)
            base = heis_handle.pair(v, heis_handle.section(x), vac)
            assert abs(shifted - np.conj(chi) * base) < 1e-12
            assert abs(abs(shifted - base) - abs(chi - 1.0) * abs(base)) < 1e-12

    def test_coverage_error(self, planck, state_grid, heis_handle):
        vac = hg.vacuum_window(planck, state_grid)
        v = hg.line_signal_battery(state_grid, count=3, seed=4)[0]
        # g itself acts fine, but g^{-1} * section(x) overflows at every
        # sampled point, so each one is dropped
        g = hg.HeisenbergElement(0.0, 0.0, -2.5)
        points = [(x, 2.0) for x in (-1.0, 0.0, 1.0, 2.0)]
        with pytest.raises(CoverageError) as err:
            check_left_intertwining(v, vac, g, heis_handle, points=points)
        assert err.value.dropped


class TestSectionChart:
    def test_projection_roundtrip(self, heis_handle, disk_handle):
        for pt in heis_handle.space_points[:5]:
            back = heis_handle.project(heis_handle.section(pt))
            assert back == pytest.approx(pt, abs=1e-15)
        for w in disk_handle.space_points[:5]:
            back = disk_handle.project(disk_handle.section(w))
            assert abs(back - w) < 1e-14

    def test_apply_is_unitary_on_test_states(self, heis_handle, disk_handle, planck, state_grid, rng):
        f = hg.line_signal_battery(state_grid, count=2, seed=6)[1]
        g = heis_handle.random_element(rng)
        assert abs(heis_handle.apply(g, f).norm() - f.norm()) < 1e-10 * f.norm()
        cf = su.circle_signal_battery(3)[2]
        gg = disk_handle.random_element(rng)
        assert abs(disk_handle.apply(gg, cf).norm() - cf.norm()) < 1e-8 * cf.norm()


class TestIntegratedRepresentation:
    def test_delta_kernels_match_slopes(self, planck, state_grid, heis_handle):
        vac = hg.vacuum_window(planck, state_grid)
        tau = 1e-5
        for kern, direction in ((KX, lambda t: (t, 0.0)), (KY, lambda t: (0.0, t))):
            op = integrated_representation(kern, vac, heis_handle)
            fd = (
                heis_handle.apply(heis_handle.section(direction(tau)), vac)
                - heis_handle.apply(heis_handle.section(direction(-tau)), vac)
            ) * (1.0 / (2.0 * tau))
            assert np.max(np.abs(op.values - fd.values)) < 1e-6

    def test_delta_x_is_scaled_coordinate_generator(self, planck, state_grid, heis_handle):
        vac = hg.vacuum_window(planck, state_grid)
        op = integrated_representation(KX, vac, heis_handle)
        expect = (2.0 * math.pi) * hg.op_M(vac)
        assert np.max(np.abs(op.values - expect.values)) < 1e-12

    def test_narrow_bump_approximates_delta(self, planck, state_grid, heis_handle):
        vac = hg.vacuum_window(planck, state_grid)
        width = 0.02
        ts = np.linspace(-5 * width, 5 * width, 21)
        kern = Kernel(
            "sampled",
            points=[(float(t), 0.0) for t in ts],
            values=np.exp(-(ts**2) / (2 * width**2)),
            weights=np.full(ts.size, ts[1] - ts[0]),
        )
        mass = float(np.sum(np.exp(-(ts**2) / (2 * width**2)) * (ts[1] - ts[0])))
        out = integrated_representation(kern, vac, heis_handle)
        dev = np.max(np.abs(out.values - mass * vac.values)) / np.max(np.abs(vac.values))
        assert dev < 1e-4

    def test_zero_kernel(self, planck, state_grid, heis_handle):
        kern = Kernel(
            "sampled", points=[(0.0, 0.0)], values=np.zeros(1), weights=np.ones(1)
        )
        out = integrated_representation(kern, hg.vacuum_window(planck, state_grid), heis_handle)
        assert np.max(np.abs(out.values)) == 0.0


class TestRightIntegrated:
    def test_plane_image_annihilated_at_equality_r(self, planck, state_grid, heis_handle):
        vac = hg.vacuum_window(planck, state_grid)
        v = hg.line_signal_battery(state_grid, count=3, seed=8)[2]
        image = heis_handle.transform(v, vac)
        r_star = 2.0 * math.pi / (planck.hbar * planck.c)
        out = right_integrated_on_image(KX, KY, r_star, image, heis_handle)
        assert heis_handle.field_scale_residual(out, image) < 1e-4

    def test_disk_image_annihilated(self, disk_handle):
        v = su.circle_signal_battery(4)[3]
        image = disk_handle.transform(v, su.f_plus())
        out = right_integrated_on_image(KX, KY, 1.0, image, disk_handle)
        assert disk_handle.field_scale_residual(out, image) < 1e-4

    def test_zero_image(self, disk_handle):
        geom = su.default_disk_geometry()
        zero = su.DiskField(geom, np.zeros((geom.rho.size, geom.theta.size)))
        out = right_integrated_on_image(KX, KY, 1.0, zero, disk_handle)
        assert np.max(np.abs(out.values)) == 0.0

    def test_disk_generators_match_group_slopes(self, disk_handle):
        # independent oracle: finite difference of the raw pairing along
        # right-multiplied one-parameter subgroups, reweighted conformally
        geom = su.default_disk_geometry()
        v = su.circle_signal_battery(4)[2]
        F = su.hardy_transform(v, geom)
        tau = 1e-5
        idx = [(5, 0), (20, 77), (40, 130)]
        for name, gen in (("A", su.exp_A), ("B", su.exp_B), ("Z", su.exp_Z)):
            ell_F = su.ell_apply(name, F)
            for i, j in idx:
                w = geom.rho[i] * np.exp(1j * geom.theta[j])
                sw = su.section_element(w)
                fd = (
                    su.circle_pair(v, su.su11_mul(sw, gen(tau)), su.f_plus())
                    - su.circle_pair(v, su.su11_mul(sw, gen(-tau)), su.f_plus())
                ) / (2.0 * tau)
                pred = ell_F.values[i, j] * (1.0 - abs(w) ** 2)
                assert abs(pred - fd) < 1e-6


class TestEquivalence:
    def test_gaussian_control(self, planck, state_grid, heis_handle):
        rec = equivalence_report(KX, KY, hg.vacuum_window(planck, state_grid), heis_handle)
        assert rec.report.gap < 1e-6
        assert rec.transform_residual < 1e-4
        assert rec.equality_holds and rec.annihilation_holds and rec.verdicts_agree
        assert rec.r_used == pytest.approx(
            2.0 * math.pi / (planck.hbar * planck.c), abs=1e-6
        )

    def test_hermite_control(self, planck, state_grid, heis_handle):
        rec = equivalence_report(KX, KY, hg.hermite1_window(planck, state_grid), heis_handle)
        assert rec.report.gap > 0.5
        assert rec.transform_residual > 0.1
        assert (not rec.equality_holds) and (not rec.annihilation_holds)
        assert rec.verdicts_agree

    def test_constant_state_control(self, disk_handle):
        rec = equivalence_report(KX, KY, su.f_plus(), disk_handle)
        assert rec.report.gap < 1e-6
        assert rec.transform_residual < 1e-4
        assert rec.r_used == pytest.approx(1.0, abs=1e-10)

    def test_disk_transform_requires_constant_mother(self, disk_handle):
        with pytest.raises(NotImplementedError):
            disk_handle.transform(su.circle_signal_battery(3)[2], su.circle_mode(1))

    def test_degenerate_equal_kernels(self, disk_handle):
        rec = equivalence_report(KZ, KZ, su.f_plus(), disk_handle)
        assert rec.report.bound < 1e-14
        assert rec.report.gap < 1e-12  # eigenstate: dispersion vanishes
        assert rec.transform_residual < 1e-10
        assert rec.report.r_star is None
