import numpy as np
import pytest

from extrapbenchlib.errors import DimensionError, UnsupportedError
from extrapbenchlib.extrapolate import (
    extrapolate,
    first_differences,
    generalized_residual,
    mpe,
    rre,
    vea,
)
from extrapbenchlib.models import ExtrapMethod, SequenceWindow


def _window(*vectors):
    return SequenceWindow(tuple(np.atleast_1d(np.asarray(v, dtype=float)) for v in vectors))


def _rel(x, ref):
    return np.linalg.norm(x - ref) / np.linalg.norm(ref)


# ---------------------------------------------------------------------------
# first differences
# ---------------------------------------------------------------------------

def test_first_differences_scalar():
    np.testing.assert_allclose(first_differences(_window(1, 3, 6)), [[2.0, 3.0]])


def test_first_differences_vectors():
    d_u = first_differences(_window([0, 0], [1, 1], [1, 2]))
    np.testing.assert_allclose(d_u, [[1.0, 0.0], [1.0, 1.0]])


def test_first_differences_needs_two_vectors():
    with pytest.raises(DimensionError):
        first_differences(_window([1.0, 2.0]))


def test_window_rejects_ragged_vectors():
    with pytest.raises(DimensionError):
        _window([1.0, 2.0], [1.0])


# ---------------------------------------------------------------------------
# RRE / MPE
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("kernel", [rre, mpe])
def test_geometric_window_reaches_the_limit(sequences, kernel):
    w = sequences.geometric(0.5, [1.0, 2.0], 3)
    out = kernel(w)
    np.testing.assert_allclose(out.t, [0.0, 0.0], atol=1e-14)
    assert out.breakdown


@pytest.mark.parametrize("kernel", [rre, mpe])
def test_constant_window_returns_first_vector(kernel):
    w = _window([2.0, -1.0], [2.0, -1.0], [2.0, -1.0])
    out = kernel(w)
    np.testing.assert_array_equal(out.t, [2.0, -1.0])
    assert out.breakdown
    np.testing.assert_allclose(out.gamma, [1.0])


@pytest.mark.parametrize("kernel,symmetric,tol", [
    (rre, False, 1e-8),
    (mpe, False, 1e-8),
])
def test_q_equal_to_dimension_is_exact(sequences, rng, kernel, symmetric, tol):
    w, limit = sequences.linear(4, 6, rng, radius=0.9, symmetric=symmetric)
    assert _rel(kernel(w).t, limit) <= tol


_EXACT_CASES = [(dim, seed) for dim in range(4, 13) for seed in (0, 1)] + [(6, 2), (10, 2)]


@pytest.mark.parametrize("dim,seed", _EXACT_CASES)
@pytest.mark.parametrize("kernel", [rre, mpe])
def test_minimal_polynomial_windows_are_exact(sequences, kernel, dim, seed):
    rng = np.random.default_rng(1000 * seed + dim)
    w, limit = sequences.linear(dim, dim + 2, rng, radius=0.9)
    assert _rel(kernel(w).t, limit) <= 1e-7


@pytest.mark.parametrize("kernel", [rre, mpe])
def test_gamma_is_normalized_and_alpha_follows_gamma(kernel):
    rng = np.random.default_rng(7)
    for trial in range(200):
        q = 1 + trial % 3
        m = 0.5 * rng.standard_normal((8, 8)) / np.sqrt(8)
        b = rng.standard_normal(8)
        vecs = [rng.standard_normal(8)]
        for _ in range(q + 1):
            vecs.append(m @ vecs[-1] + b + 0.01 * rng.standard_normal(8))
        out = kernel(SequenceWindow(tuple(vecs)))

        assert abs(out.gamma.sum() - 1.0) <= 1e-12
        assert out.alpha[0] == 1.0 - out.gamma[0]
        for j in range(1, out.alpha.size):
            assert out.alpha[j] == out.alpha[j - 1] - out.gamma[j]


@pytest.mark.parametrize("kernel", [rre, mpe, vea])
def test_translation_equivariance(sequences, rng, kernel):
    w, _ = sequences.linear(6, 5, rng, radius=0.7)
    shift = rng.standard_normal(6)
    moved = SequenceWindow(tuple(v + shift for v in w.vectors))
    np.testing.assert_allclose(kernel(moved).t, kernel(w).t + shift, rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("kernel", [rre, mpe, vea])
def test_scaling_equivariance(sequences, rng, kernel):
    w, _ = sequences.linear(6, 5, rng, radius=0.7)
    scaled = SequenceWindow(tuple(3.5 * v for v in w.vectors))
    np.testing.assert_allclose(kernel(scaled).t, 3.5 * kernel(w).t, rtol=1e-9, atol=1e-9)


def test_rre_and_mpe_agree_on_parallel_differences(sequences):
    w = sequences.geometric(0.3, [1.0, -2.0, 0.5], 3)
    np.testing.assert_allclose(rre(w).t, mpe(w).t, atol=1e-15)


def test_rre_and_mpe_need_three_vectors():
    with pytest.raises(DimensionError):
        rre(_window([1.0], [0.5]))
    with pytest.raises(DimensionError):
        mpe(_window([1.0], [0.5]))


def test_no_breakdown_on_generic_window(sequences, rng):
    w, _ = sequences.linear(10, 4, rng)
    out = rre(w)
    assert not out.breakdown
    assert out.q == 2
    assert out.gamma.size == 3


# ---------------------------------------------------------------------------
# VEA
# ---------------------------------------------------------------------------

def test_vea_scalar_sequence():
    out = vea(_window(3.0, 2.0, 1.5))
    np.testing.assert_allclose(out.t, [1.0])
    assert not out.breakdown


def test_vea_nonsymmetric_q4_is_exact(sequences, rng):
    w, limit = sequences.linear(4, 9, rng, radius=0.9, symmetric=False)
    assert _rel(vea(w).t, limit) <= 1e-6


_VEA_EXACT_CASES = [(dim, seed) for dim in range(4, 13) for seed in (0, 1, 2)]


@pytest.mark.parametrize("symmetric", [True, False])
@pytest.mark.parametrize("dim,seed", _VEA_EXACT_CASES)
def test_vea_minimal_polynomial_windows_are_exact(sequences, dim, seed, symmetric):
    rng = np.random.default_rng(2000 + 100 * seed + dim)
    w, limit = sequences.linear(dim, 2 * dim + 1, rng, radius=0.9, symmetric=symmetric)
    assert _rel(vea(w).t, limit) <= 1e-7


@pytest.mark.parametrize("dim", [2, 3])
def test_vea_small_minimal_polynomial_windows_are_exact(sequences, dim):
    rng = np.random.default_rng(2000 + dim)
    w, limit = sequences.linear(dim, 2 * dim + 1, rng, radius=0.9)
    assert _rel(vea(w).t, limit) <= 1e-6


def test_vea_constant_window_breaks_down_to_last_vector():
    out = vea(_window([1.0, 1.0], [1.0, 1.0], [1.0, 1.0]))
    assert out.breakdown
    np.testing.assert_array_equal(out.t, [1.0, 1.0])


@pytest.mark.parametrize("size", [1, 2, 4, 6])
def test_vea_needs_odd_window(size):
    with pytest.raises(DimensionError):
        vea(SequenceWindow(tuple(np.ones(2) * k for k in range(size))))


# ---------------------------------------------------------------------------
# generalized residual and dispatch
# ---------------------------------------------------------------------------

def test_generalized_residual_vanishes_on_geometric_window(sequences):
    w = sequences.geometric(0.5, [1.0, 2.0], 3)
    out = rre(w)
    assert np.linalg.norm(generalized_residual(w, out)) <= 1e-14


@pytest.mark.parametrize("kernel", [rre, mpe])
def test_generalized_residual_small_for_minimal_polynomial(sequences, rng, kernel):
    w, _ = sequences.linear(5, 7, rng)
    out = kernel(w)
    scale = np.linalg.norm(first_differences(w))
    assert np.linalg.norm(generalized_residual(w, out)) <= 1e-8 * scale


def test_generalized_residual_rre_not_larger_than_mpe(sequences, rng):
    w, _ = sequences.linear(12, 5, rng)
    res_rre = np.linalg.norm(generalized_residual(w, rre(w)))
    res_mpe = np.linalg.norm(generalized_residual(w, mpe(w)))
    assert res_rre <= res_mpe * (1.0 + 1e-10)


def test_generalized_residual_undefined_for_vea():
    w = _window(3.0, 2.0, 1.5)
    with pytest.raises(UnsupportedError):
        generalized_residual(w, vea(w))


@pytest.mark.parametrize("method", [ExtrapMethod.RRE, ExtrapMethod.MPE, ExtrapMethod.VEA])
def test_extrapolate_dispatch(sequences, rng, method):
    w, _ = sequences.linear(5, 5, rng)
    direct = {ExtrapMethod.RRE: rre, ExtrapMethod.MPE: mpe, ExtrapMethod.VEA: vea}[method](w)
    out = extrapolate(w, method)
    assert out.method is method
    np.testing.assert_array_equal(out.t, direct.t)


def test_extrapolate_accepts_method_names(sequences):
    w = sequences.geometric(0.5, [1.0, 2.0], 3)
    assert extrapolate(w, "mpe").method is ExtrapMethod.MPE


@pytest.mark.parametrize("method", [ExtrapMethod.NONE, "bogus"])
def test_extrapolate_rejects_unknown_method(sequences, method):
    w = sequences.geometric(0.5, [1.0, 2.0], 3)
    with pytest.raises(UnsupportedError):
        extrapolate(w, method)
