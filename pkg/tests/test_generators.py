"""Generator catalog: spline values, transforms, flatness, Strang-Fix scans."""
import math

import numpy as np
import pytest

from dilsamp import (
    bspline,
    bspline3_2d,
    bspline4_1d,
    bspline_fourier,
    fourier_derivative,
    hat,
    named_families,
    named_generators,
    sinc_squared,
    sinc_squared_twoscale,
    strang_fix_order,
    strang_fix_table,
)
from dilsamp._quadrature import gauss_legendre

PI = math.pi


def _quad_transform(g, xi: float, radius: float, panel: float = 0.5) -> complex:
    """Fourier transform of ``g.spatial`` by piecewise Gauss-Legendre."""
    total = 0.0 + 0.0j
    edges = np.arange(-radius, radius + panel / 2, panel)
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre(20, float(a), float(b))
        vals = np.asarray(g.spatial(x.reshape(-1, 1)))
        total += np.sum(w * vals * np.exp(-2j * PI * xi * x))
    return total


class TestBsplineValues:
    def test_center_values(self):
        assert bspline(2, np.array([0.0]))[0] == pytest.approx(1.0)
        assert bspline(3, np.array([0.0]))[0] == pytest.approx(0.75)
        assert bspline(4, np.array([0.0]))[0] == pytest.approx(2.0 / 3.0)

    def test_half_integer_values(self):
        assert bspline(2, np.array([0.5]))[0] == pytest.approx(0.5)
        assert bspline(3, np.array([0.5]))[0] == pytest.approx(0.5)
        assert bspline(4, np.array([0.5]))[0] == pytest.approx(23.0 / 48.0)

    def test_support_edges(self):
        assert bspline(2, np.array([1.0]))[0] == pytest.approx(0.0, abs=1e-15)
        assert bspline(4, np.array([2.0]))[0] == pytest.approx(0.0, abs=1e-15)
        assert bspline(4, np.array([2.3]))[0] == 0.0

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_partition_of_unity(self, m):
        rng = np.random.default_rng(3)
        x = rng.uniform(0.0, 1.0, 7)
        shifts = np.arange(-4, 5)
        total = sum(bspline(m, x - k) for k in shifts)
        assert np.allclose(total, 1.0, atol=1e-13)

    def test_fourier_is_sinc_power(self):
        xi = np.array([0.5])
        assert bspline_fourier(2, xi)[0] == pytest.approx((2 / PI) ** 2)
        assert bspline_fourier(4, xi)[0] == pytest.approx((2 / PI) ** 4)
        assert bspline_fourier(3, np.array([0.0]))[0] == pytest.approx(1.0)


class TestTransformConsistency:
    def test_hat_fourier_matches_quadrature(self):
        g = hat(1)
        for xi in (0.3, 0.7, 1.4):
            assert g.fourier(np.array([[xi]]))[0] == pytest.approx(
                _quad_transform(g, xi, 1.0), abs=1e-12
            )

    def test_parametrized_quartic_matches_quadrature(self):
        g = bspline4_1d(0.1, 0.4, -0.2)
        for xi in (0.3, 0.7):
            assert complex(g.fourier(np.array([[xi]]))[0]) == pytest.approx(
                _quad_transform(g, xi, g.support_radius), abs=1e-10
            )

    def test_hat_tensorizes(self):
        assert hat(2).spatial(np.array([[0.25, 0.5]]))[0] == pytest.approx(0.375)
        xi = np.array([[0.5, 0.0]])
        assert sinc_squared(2).fourier(xi)[0] == pytest.approx(0.5)


class TestQuarticFamilyFlatness:
    # Taylor data of the parametrized quartic spectrum at the origin:
    #   phi_hat'(0)   = b1 pi
    #   phi_hat''(0)  = (2/3) pi^2 (3 b2 - 2)
    #   phi_hat'''(0) = pi^3 (6 b3 - 5 b1)
    #   phi_hat''''(0) = 24 pi^4 (1/5 - b2)
    def test_origin_derivatives(self):
        b1, b2, b3 = 0.1, 0.4, -0.2
        g = bspline4_1d(b1, b2, b3)
        want = {
            (1,): b1 * PI,
            (2,): (2.0 / 3.0) * PI**2 * (3 * b2 - 2),
            (3,): PI**3 * (6 * b3 - 5 * b1),
            (4,): 24 * PI**4 * (1.0 / 5.0 - b2),
        }
        for beta, val in want.items():
            got = fourier_derivative(g, beta, 0.0)
            assert got == pytest.approx(val, rel=1e-6)

    def test_flat_parameters_from_taylor_data(self):
        # zeroing the first three coefficients forces (b1, b2, b3) = (0, 2/3, 0)
        g = bspline4_1d(0.0, 2.0 / 3.0, 0.0)
        for beta in [(1,), (2,), (3,)]:
            assert abs(fourier_derivative(g, beta, 0.0)) < 1e-7
        # the quartic coefficient cannot also vanish there
        assert abs(fourier_derivative(g, (4,), 0.0)) > 100.0


class TestBicubicFamilyFlatness:
    def test_origin_derivatives(self):
        b1, b2 = 0.3, 0.8
        g = bspline3_2d(b1, b2)
        assert abs(fourier_derivative(g, (1, 0), (0.0, 0.0))) < 1e-9
        assert abs(fourier_derivative(g, (0, 1), (0.0, 0.0))) < 1e-9
        assert fourier_derivative(g, (2, 0), (0.0, 0.0)) == pytest.approx(
            PI**2 * (2 * b1 - 1), rel=1e-6
        )
        assert fourier_derivative(g, (0, 2), (0.0, 0.0)) == pytest.approx(
            PI**2 * (2 * b2 - 1), rel=1e-6
        )


class TestStrangFix:
    def test_catalog_orders(self):
        assert strang_fix_order(sinc_squared(1), 4) == 1
        assert strang_fix_order(hat(1), 4) == 2
        assert strang_fix_order(bspline3_2d(0.5, 0.5), 5) == 3
        assert strang_fix_order(bspline4_1d(0.0, 2.0 / 3.0, 0.0), 6) == 4

    def test_value_only_scan_for_kinked_spectra(self):
        # triangle spectra are not differentiable at lattice points, so the
        # scan stops after certifying vanishing values
        assert strang_fix_order(sinc_squared_twoscale(1), 4) == 1

    def test_hat_table_contents(self):
        order, rows = strang_fix_table(hat(1), 4)
        assert order == 2
        # derivative scan radius 3: k in {-3..3}\{0} for derivative orders 0..2
        assert len(rows) == 18
        assert all(len(r) == 3 for r in rows)
        passing = [r[2] for r in rows if sum(r[1]) < 2]
        assert max(passing) < 1e-7
        # second derivative of sinc^2 at integer k is 2/k^2
        k3 = [r[2] for r in rows if r[0] == (3,) and r[1] == (2,)]
        assert k3[0] == pytest.approx(2.0 / 9.0, rel=1e-6)


class TestFlatSpectrum:
    def test_spectrum_is_one_near_zero_and_zero_off_band(self):
        g = sinc_squared_twoscale(1)
        assert g.band_limited
        assert g.sf_order is None
        assert g.fourier(np.array([[0.1]]))[0] == pytest.approx(1.0)
        for xi in (0.6, 1.0, 2.0):
            assert abs(g.fourier(np.array([[xi]]))[0]) < 1e-15


def test_catalogs():
    assert set(named_generators) == {
        "bspline3_2d",
        "bspline4_1d",
        "hat",
        "sinc_squared",
        "sinc_squared_twoscale",
    }
    assert set(named_families) == {"bspline3_2d", "bspline4_1d"}
    fam = named_families["bspline4_1d"]
    assert fam.param_names == ("b1", "b2", "b3")
    g = fam.make({"b1": 0.0, "b2": 2.0 / 3.0, "b3": 0.0})
    assert g.params["b2"] == pytest.approx(2.0 / 3.0)
