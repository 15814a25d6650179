import math

import numpy as np
import pytest

from covariant_lab import heisenberg as hg
from covariant_lab.errors import DomainOverflowError
from covariant_lab.numerics import GridFunction1D, RealGrid, inner_product

TWO_PI = 2.0 * math.pi


def random_element(rng, scale=0.5):
    s, x, y = rng.uniform(-scale, scale, 3)
    return hg.HeisenbergElement(s, x, y)


class TestGroupLaw:
    def test_identity(self):
        g = hg.HeisenbergElement(0.3, -1.2, 2.5)
        assert hg.h_mul(hg.H_IDENTITY, g) == g
        assert hg.h_mul(g, hg.H_IDENTITY) == g

    def test_twisted_product(self):
        a = hg.HeisenbergElement(0.0, 1.0, 0.0)
        b = hg.HeisenbergElement(0.0, 0.0, 1.0)
        assert hg.h_mul(a, b) == hg.HeisenbergElement(0.5, 1.0, 1.0)
        assert hg.h_mul(b, a) == hg.HeisenbergElement(-0.5, 1.0, 1.0)

    def test_inverse(self):
        assert hg.h_inv(hg.H_IDENTITY) == hg.H_IDENTITY
        assert hg.h_inv(hg.HeisenbergElement(1.0, 2.0, 3.0)) == hg.HeisenbergElement(
            -1.0, -2.0, -3.0
        )
        g = hg.HeisenbergElement(0.5, 1.0, 1.0)
        assert hg.h_mul(g, hg.h_inv(g)) == hg.H_IDENTITY

    def test_associativity_random(self, rng):
        for _ in range(1000):
            a, b, c = (random_element(rng, 2.0) for _ in range(3))
            left = hg.h_mul(hg.h_mul(a, b), c)
            right = hg.h_mul(a, hg.h_mul(b, c))
            assert abs(left.s - right.s) < 1e-12
            assert left.x == pytest.approx(right.x, abs=1e-12)
            assert left.y == pytest.approx(right.y, abs=1e-12)


class TestSchrodingerAction:
    def test_central_phase(self, planck, state_grid):
        f = hg.gaussian_state(1.0, state_grid)
        out = hg.schrodinger_apply(hg.HeisenbergElement(0.37, 0.0, 0.0), f, planck)
        expect = np.exp(-2j * math.pi * planck.hbar * 0.37) * f.values
        assert np.max(np.abs(out.values - expect)) < 1e-12

    def test_pure_shift(self, planck, state_grid):
        f = hg.gaussian_state(1.0, state_grid)
        y0 = 0.5
        out = hg.schrodinger_apply(hg.HeisenbergElement(0.0, 0.0, y0), f, planck)
        expect = np.exp(-((state_grid.points + planck.hbar * y0) ** 2))
        assert np.max(np.abs(out.values - expect)) < 1e-8

    def test_unitarity_random(self, planck, state_grid, rng):
        f = hg.line_signal_battery(state_grid)[7]
        for _ in range(100):
            g = random_element(rng)
            out = hg.schrodinger_apply(g, f, planck)
            assert abs(out.norm() - f.norm()) < 1e-10 * f.norm()

    def test_representation_property(self, planck, state_grid, rng):
        f = hg.line_signal_battery(state_grid)[8]
        for _ in range(30):
            g1, g2 = random_element(rng), random_element(rng)
            lhs = hg.schrodinger_apply(g1, hg.schrodinger_apply(g2, f, planck), planck)
            rhs = hg.schrodinger_apply(hg.h_mul(g1, g2), f, planck)
            assert np.max(np.abs(lhs.values - rhs.values)) < 1e-8

    def test_overflow_guard(self, planck, state_grid):
        f = hg.gaussian_state(1.0, state_grid)
        with pytest.raises(DomainOverflowError):
            hg.schrodinger_apply(hg.HeisenbergElement(0.0, 0.0, 5.0), f, planck)


class TestGenerators:
    def test_op_M_on_constant_window(self):
        grid = RealGrid(-1.0, 1.0, 64)
        f = GridFunction1D(grid, np.ones(64))
        out = hg.op_M(f)
        assert np.max(np.abs(out.values - (-1j * grid.points))) < 1e-15

    def test_op_M_pointwise(self, state_grid):
        f = hg.gaussian_state(1.0, state_grid)
        out = hg.op_M(f)
        expect = -1j * state_grid.points * f.values
        assert np.max(np.abs(out.values - expect)) == 0.0

    def test_op_M_linear(self, state_grid, rng):
        f = hg.gaussian_state(1.0, state_grid)
        g = hg.hermite1_state(1.0, state_grid)
        a, b = rng.standard_normal(2)
        lhs = hg.op_M(a * f + b * g)
        rhs = a * hg.op_M(f) + b * hg.op_M(g)
        assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12

    def test_op_D_gaussian(self, planck, state_grid):
        f = hg.gaussian_state(1.0, state_grid)
        out = hg.op_D(f, planck)
        expect = -2.0 * state_grid.points * np.exp(-state_grid.points**2)
        assert np.max(np.abs(out.values - expect)) < 1e-8

    def test_op_D_constant_window(self, planck):
        grid = RealGrid(-8.0, 8.0, 1024)
        f = GridFunction1D(grid, np.ones(grid.n))
        out = hg.op_D(f, planck)
        assert np.max(np.abs(out.values)) < 1e-12

    def test_commutator(self, planck, state_grid):
        for f in hg.line_signal_battery(state_grid)[:5]:
            comm = hg.op_M(hg.op_D(f, planck)) - hg.op_D(hg.op_M(f), planck)
            target = (1j * planck.hbar) * f
            assert (comm - target).norm() < 1e-7 * target.norm()


class TestFsbTransform:
    def test_vacuum_at_origin(self, planck, state_grid):
        xg, yg = hg.default_plane_grids()
        vac = hg.vacuum_window(planck, state_grid)
        F = hg.fsb_transform(vac, planck, xg, yg)
        i0 = xg.n // 2
        assert F.values[i0, i0] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-10)

    def test_zero_signal(self, planck, state_grid):
        xg, yg = hg.default_plane_grids(n=33)
        zero = GridFunction1D(state_grid, np.zeros(state_grid.n))
        F = hg.fsb_transform(zero, planck, xg, yg)
        assert np.max(np.abs(F.values)) == 0.0

    def test_cauchy_schwarz_bound(self, planck, state_grid, rng):
        xg, yg = hg.default_plane_grids(n=33)
        vac = hg.vacuum_window(planck, state_grid)
        bound_w = vac.norm()
        for sig in hg.line_signal_battery(state_grid, count=4, seed=5):
            F = hg.fsb_transform(sig, planck, xg, yg)
            assert np.max(np.abs(F.values)) <= sig.norm() * bound_w * (1 + 1e-8)

    def test_window_overflow_guard(self, planck, state_grid):
        vac = hg.vacuum_window(planck, state_grid)
        wide = RealGrid(-9.0, 9.0, 33)
        with pytest.raises(DomainOverflowError):
            hg.fsb_transform(vac, planck, wide, wide)

    def test_worker_count_invariance(self, planck, state_grid, monkeypatch):
        xg, yg = hg.default_plane_grids(n=65)
        sig = hg.line_signal_battery(state_grid)[9]
        serial = hg.fsb_transform(sig, planck, xg, yg, workers=1)
        threaded = hg.fsb_transform(sig, planck, xg, yg, workers=3)
        assert np.array_equal(serial.values, threaded.values)
        monkeypatch.setenv("COVARIANT_LAB_THREADS", "2")
        via_env = hg.fsb_transform(sig, planck, xg, yg)
        assert np.array_equal(serial.values, via_env.values)


class TestAnnihilation:
    def test_battery_is_annihilated(self, planck, state_grid):
        xg, yg = hg.default_plane_grids()
        for sig in hg.line_signal_battery(state_grid, count=5):
            F = hg.fsb_transform(sig, planck, xg, yg)
            assert hg.cr_residual(F, planck) < 1e-4

    def test_constant_field_zeroth_term(self, planck):
        g = RealGrid(-2.0, 2.0, 65)
        ones = np.ones((g.n, g.n), dtype=complex)
        from covariant_lab.numerics import PlaneField

        field = PlaneField(g, g, ones)
        out = hg.cr_operator(field, planck)
        X = g.points[:, None]
        Y = g.points[None, :]
        expect = 0.5 * planck.hbar * (TWO_PI * X + 1j * planck.hbar * planck.c * Y)
        m = 2
        assert np.max(np.abs(out.values - expect)[m:-m, m:-m]) < 1e-10
        assert np.max(np.abs(out.values)) > 1.0

    def test_vacuum_shaped_field_is_annihilated(self, planck):
        # exp(-pi |z|^2 / 2) sits in the kernel of the operator analytically
        g = RealGrid(-4.0, 4.0, 257)
        X = g.points[:, None]
        Y = g.points[None, :]
        from covariant_lab.numerics import PlaneField

        F = PlaneField(g, g, np.exp(-0.5 * math.pi * (X * X + Y * Y)))
        assert hg.cr_residual(F, planck) < 1e-4

    def test_hermite_window_control(self, planck, state_grid):
        xg, yg = hg.default_plane_grids()
        herm = lambda u: u * np.exp(-0.5 * planck.c * u * u)
        for sig in hg.line_signal_battery(state_grid, count=2):
            F = hg.fsb_transform(sig, planck, xg, yg, window_fn=herm)
            assert hg.cr_residual(F, planck) > 0.1


class TestWeightedImage:
    def test_zero_and_origin(self, planck):
        g = RealGrid(-2.0, 2.0, 33)
        from covariant_lab.numerics import PlaneField

        zero = PlaneField(g, g, np.zeros((g.n, g.n)))
        assert np.max(np.abs(hg.weighted_image(zero).values)) == 0.0
        vals = np.zeros((g.n, g.n), dtype=complex)
        vals[g.n // 2, g.n // 2] = 2.5 + 1j
        F = PlaneField(g, g, vals)
        V = hg.weighted_image(F)
        assert V.values[g.n // 2, g.n // 2] == pytest.approx(2.5 + 1j, abs=1e-14)

    def test_vacuum_image_is_holomorphic_after_weighting(self, planck, state_grid):
        # the weight grows like exp(pi r^2 / 2): restrict to the region where
        # it cannot lift float-level quadrature noise above the field
        wgrid = RealGrid(-2.0, 2.0, 257)
        vac = hg.vacuum_window(planck, state_grid)
        V = hg.weighted_image(hg.fsb_transform(vac, planck, wgrid, wgrid))
        assert hg.holomorphy_residual(V) < 1e-4
        center = V.values[wgrid.n // 2, wgrid.n // 2]
        assert np.max(np.abs(V.values - center)) < 1e-9  # constant image

    def test_battery_weighted_images(self, planck, state_grid):
        wgrid = RealGrid(-2.0, 2.0, 257)
        for sig in hg.line_signal_battery(state_grid, count=4):
            V = hg.weighted_image(hg.fsb_transform(sig, planck, wgrid, wgrid))
            assert hg.holomorphy_residual(V) < 1e-4

    def test_radius_guard(self, planck):
        g = RealGrid(-25.0, 25.0, 65)
        from covariant_lab.errors import PreconditionError
        from covariant_lab.numerics import PlaneField

        F = PlaneField(g, g, np.zeros((g.n, g.n)))
        with pytest.raises(PreconditionError):
            hg.weighted_image(F)
