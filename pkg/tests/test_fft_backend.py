import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectralkit import fft_backend
from spectralkit.errors import ShapeError


def naive_forward_1d(u):
    """O(N^2) DFT with amplitude normalization, stored half."""
    n = u.size
    j = np.arange(n)
    k = np.arange(n // 2 + 1)
    return np.exp(-2j * np.pi * np.outer(k, j) / n) @ u / n


def naive_forward(u):
    """O(N^2) multidimensional DFT with amplitude normalization, stored half."""
    out = u.astype(complex)
    for axis, n in enumerate(u.shape):
        j = np.arange(n)
        mat = np.exp(-2j * np.pi * np.outer(j, j) / n)
        out = np.moveaxis(np.tensordot(mat, np.moveaxis(out, axis, 0), axes=1), 0, axis)
    out /= u.size
    return out[..., : u.shape[-1] // 2 + 1]


class TestPlan:
    def test_spect_shape(self):
        assert fft_backend.plan([64, 64]).spect_shape == (64, 33)
        assert fft_backend.plan([8]).spect_shape == (5,)
        assert fft_backend.plan([8, 6, 4]).spect_shape == (8, 6, 3)

    def test_normalization_tag(self):
        assert fft_backend.plan([8]).normalization == "amplitude"

    def test_cached(self):
        assert fft_backend.plan((16, 16)) is fft_backend.plan([16, 16])

    @pytest.mark.parametrize("shape", [[7], [2], [8, 9], [], [4, 4, 4, 4]])
    def test_bad_shapes(self, shape):
        with pytest.raises(ShapeError):
            fft_backend.plan(shape)

    def test_immutable(self):
        p = fft_backend.plan([8])
        with pytest.raises(AttributeError):
            p.phys_shape = (16,)


class TestForward:
    def test_cosine(self):
        p = fft_backend.plan([8])
        u = np.cos(2 * np.pi * np.arange(8) / 8)
        u_hat = p.forward(u)
        expected = np.zeros(5, complex)
        expected[1] = 0.5
        np.testing.assert_allclose(u_hat, expected, atol=1e-15)

    def test_constant(self):
        p = fft_backend.plan([8, 8])
        u_hat = p.forward(np.full((8, 8), 3.0))
        assert u_hat[0, 0] == pytest.approx(3.0, abs=1e-15)
        u_hat[0, 0] = 0
        assert np.abs(u_hat).max() < 1e-15

    @pytest.mark.parametrize("shape", [(16,), (8, 12), (6, 4, 8)])
    def test_matches_naive_dft(self, shape, rng):
        u = rng.standard_normal(shape)
        np.testing.assert_allclose(
            fft_backend.forward(fft_backend.plan(shape), u), naive_forward(u), atol=1e-13
        )

    def test_naive_1d_helper_agrees(self, rng):
        u = rng.standard_normal(10)
        np.testing.assert_allclose(naive_forward(u), naive_forward_1d(u), atol=1e-14)

    def test_shape_mismatch(self):
        p = fft_backend.plan([8, 8])
        with pytest.raises(ShapeError):
            p.forward(np.zeros((8, 6)))
        with pytest.raises(ShapeError):
            p.forward(np.zeros(8))

    def test_batched_leading_axes(self, rng):
        p = fft_backend.plan([8, 8])
        u = rng.standard_normal((3, 8, 8))
        batched = p.forward(u)
        for i in range(3):
            np.testing.assert_array_equal(batched[i], p.forward(u[i]))

    def test_linearity(self, rng):
        p = fft_backend.plan([16, 16])
        u, v = rng.standard_normal((2, 16, 16))
        a, b = 1.7, -0.3
        np.testing.assert_allclose(
            p.forward(a * u + b * v), a * p.forward(u) + b * p.forward(v), atol=1e-15
        )

    def test_input_not_clobbered(self, rng):
        p = fft_backend.plan([8, 8])
        u = rng.standard_normal((8, 8))
        u_copy = u.copy()
        u_hat = p.forward(u)
        np.testing.assert_array_equal(u, u_copy)
        u_hat_copy = u_hat.copy()
        p.inverse(u_hat)
        np.testing.assert_array_equal(u_hat, u_hat_copy)


class TestInverse:
    def test_mean_mode(self):
        p = fft_backend.plan([8])
        u_hat = np.zeros(5, complex)
        u_hat[0] = 1
        np.testing.assert_allclose(p.inverse(u_hat), np.ones(8), atol=1e-15)

    def test_half_amplitude_cosine(self):
        p = fft_backend.plan([8])
        u_hat = np.zeros(5, complex)
        u_hat[1] = 0.5
        np.testing.assert_allclose(
            p.inverse(u_hat), np.cos(2 * np.pi * np.arange(8) / 8), atol=1e-15
        )

    def test_forward_inverse_on_hermitian_spectrum(self, rng):
        p = fft_backend.plan([16, 16])
        u_hat = p.forward(rng.standard_normal((16, 16)))
        back = p.forward(p.inverse(u_hat))
        assert np.abs(back - u_hat).max() <= 1e-12 * np.abs(u_hat).max()

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            fft_backend.plan([8, 8]).inverse(np.zeros((8, 4), complex))


@pytest.mark.parametrize("shape", [(64,), (64, 64), (32, 32, 32), (128, 128, 128)])
def test_parseval(shape, rng):
    p = fft_backend.plan(shape)
    u = rng.standard_normal(shape)
    u_hat = p.forward(u)
    w = fft_backend.hermitian_weights(p)
    lhs = np.mean(u**2)
    rhs = np.sum(w * np.abs(u_hat) ** 2)
    assert abs(lhs - rhs) <= 1e-12 * lhs


def test_workers_capped_by_environment(monkeypatch):
    monkeypatch.setenv("SPECTRALKIT_NUM_THREADS", "2")
    assert fft_backend.set_num_workers(8) == 2
    assert fft_backend.get_num_workers() == 2
    monkeypatch.delenv("SPECTRALKIT_NUM_THREADS")
    assert fft_backend.set_num_workers(3) == 3


def test_workers_give_same_result(rng):
    p = fft_backend.plan([32, 32])
    u = rng.standard_normal((32, 32))
    fft_backend.set_num_workers(1)
    one = p.forward(u)
    fft_backend.set_num_workers(2)
    two = p.forward(u)
    np.testing.assert_allclose(one, two, atol=1e-15)


_extents = st.sampled_from([4, 6, 8, 10, 16])


@settings(max_examples=40, deadline=None)
@given(st.lists(_extents, min_size=1, max_size=3), st.integers(0, 2**32 - 1))
def test_round_trip_property(shape, seed):
    p = fft_backend.plan(shape)
    u = np.random.default_rng(seed).standard_normal(shape)
    back = p.inverse(p.forward(u))
    assert np.abs(back - u).max() <= 1e-12 * np.abs(u).max()
