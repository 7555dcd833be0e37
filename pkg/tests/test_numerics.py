import numpy as np
import pytest
from hypothesis import given, strategies as st

from sts_toa.errors import GridTooCoarse
from sts_toa.numerics import (EnergyGrid, TimeGrid, complex_sqrt_2m,
                              fourier_E_to_t, fourier_t_to_E, trapezoid_complex)


class TestGrids:
    def test_energy_grid_rejects_nonpositive_floor(self):
        with pytest.raises(ValueError):
            EnergyGrid(0.0, 1.0, 16)
        with pytest.raises(ValueError):
            EnergyGrid(-1.0, 1.0, 16)

    def test_energy_grid_uniform_ascending(self):
        g = EnergyGrid(0.5, 4.0, 257)
        assert np.all(np.diff(g.samples) > 0)
        assert np.allclose(np.diff(g.samples), g.spacing, rtol=1e-14)
        assert g.samples[0] == 0.5 and g.samples[-1] == 4.0

    def test_time_grid_uniform_ascending(self):
        g = TimeGrid(-3.0, 7.0, 101)
        assert np.all(np.diff(g.samples) > 0)
        assert np.allclose(np.diff(g.samples), g.spacing, rtol=1e-14)

    def test_time_grid_rejects_degenerate(self):
        with pytest.raises(ValueError):
            TimeGrid(1.0, 1.0, 16)
        with pytest.raises(ValueError):
            TimeGrid(0.0, 1.0, 1)


class TestComplexSqrt:
    def test_allowed_region_is_real(self):
        assert complex_sqrt_2m(2.0, 0.0, 1.0) == pytest.approx(2.0)

    def test_forbidden_region_upper_half_plane(self):
        val = complex_sqrt_2m(2.0, 4.5, 1.0)
        assert val == pytest.approx(1j * np.sqrt(5.0))

    def test_turning_point_is_zero(self):
        assert complex_sqrt_2m(3.0, 3.0, 1.7) == 0.0

    @given(st.floats(min_value=1e-6, max_value=1e6),
           st.floats(min_value=-1e6, max_value=1e6),
           st.floats(min_value=1e-3, max_value=1e3))
    def test_branch_never_in_lower_half_plane(self, e, v, m):
        val = complex_sqrt_2m(e, v, m)
        assert np.imag(val) >= 0.0
        if e >= v:
            assert np.imag(val) == 0.0 and np.real(val) >= 0.0
        else:
            assert np.real(val) == pytest.approx(0.0, abs=1e-12)


class TestTrapezoid:
    def test_constant(self):
        x = np.linspace(0.0, 1.0, 37)
        assert trapezoid_complex(np.ones(37), x[1] - x[0]) == pytest.approx(1.0)

    def test_linear_exact(self):
        x = np.linspace(0.0, 1.0, 11)
        assert trapezoid_complex(x, 0.1) == pytest.approx(0.5, abs=1e-15)

    def test_oscillatory(self):
        x = np.linspace(0.0, 2.0 * np.pi, 10_000)
        val = trapezoid_complex(np.exp(1j * x), x[1] - x[0])
        assert abs(val) < 1e-6

    @given(st.integers(min_value=2, max_value=200))
    def test_matches_numpy(self, n):
        rng = np.random.default_rng(n)
        y = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert trapezoid_complex(y, 0.3) == pytest.approx(np.trapezoid(y, dx=0.3))


class TestFourier:
    egrid = EnergyGrid(1.0, 3.0, 4096)
    tgrid = TimeGrid(-200.0, 200.0, 4096)

    def _gaussian_amps(self):
        e = self.egrid.samples
        return np.exp(-((e - 2.0) / 0.1) ** 2).astype(complex)

    def test_fft_matches_direct(self):
        rng = np.random.default_rng(3)
        e = self.egrid.samples
        a = (np.exp(-((e - 2.0) / 0.3) ** 2)
             * np.exp(1j * np.polyval(rng.normal(size=3), e)))
        fft = fourier_E_to_t(a, self.egrid, self.tgrid, method="fft")
        direct = fourier_E_to_t(a, self.egrid, self.tgrid, method="direct")
        assert np.max(np.abs(fft - direct)) < 1e-8

    def test_roundtrip(self):
        a = self._gaussian_amps()
        f = fourier_E_to_t(a, self.egrid, self.tgrid)
        back = fourier_t_to_E(f, self.tgrid, self.egrid)
        rel = np.linalg.norm(back - a) / np.linalg.norm(a)
        assert rel < 1e-10

    def test_shift_theorem_exact_on_grid(self):
        a = self._gaussian_amps()
        k = 37
        t0 = k * self.tgrid.spacing
        f = fourier_E_to_t(a, self.egrid, self.tgrid)
        f_shift = fourier_E_to_t(a * np.exp(1j * self.egrid.samples * t0),
                                 self.egrid, self.tgrid)
        scale = np.max(np.abs(f))
        assert np.max(np.abs(f_shift[k:] - f[:-k])) / scale < 1e-12

    def test_plancherel(self):
        a = self._gaussian_amps()
        f = fourier_E_to_t(a, self.egrid, self.tgrid)
        lhs = np.trapezoid(np.abs(a) ** 2, dx=self.egrid.spacing)
        rhs = np.trapezoid(np.abs(f) ** 2, dx=self.tgrid.spacing)
        assert rhs == pytest.approx(lhs, rel=1e-6)

    def test_envelope_centered_at_stationary_phase(self):
        # modulating by exp(+iE t0) moves the envelope peak to t0
        t0 = 40.0
        a = self._gaussian_amps() * np.exp(1j * self.egrid.samples * t0)
        f = fourier_E_to_t(a, self.egrid, self.tgrid)
        t_peak = self.tgrid.samples[np.argmax(np.abs(f))]
        assert abs(t_peak - t0) < 1.0

    def test_aliasing_guard(self):
        coarse = EnergyGrid(1.0, 3.0, 16)
        with pytest.raises(GridTooCoarse):
            fourier_E_to_t(np.ones(16, dtype=complex), coarse, self.tgrid)
