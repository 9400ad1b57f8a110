import numpy as np
import pytest

from dtnn.errors import ShapeError
from dtnn.linalg import nuclear_norm
from dtnn.spectral import (
    Mode3Transform,
    block_circulant_unfold,
    conj_transpose,
    facewise_product,
    identity_tensor,
    multi_rank,
    tnn,
    tprod,
    transform_mode3,
    tsvd,
    tubal_rank,
)
from dtnn.tensor3 import mode3_product

from oracles import conj_transpose_by_index_rule, dft_matrix, tprod_by_convolution


def test_dft_of_constant_tube_is_dc_only():
    n3 = 4
    t = np.full((2, 2, n3), 1.5)
    f = transform_mode3(t, Mode3Transform("dft", n3))
    assert np.allclose(f[:, :, 0], n3 * 1.5)
    assert np.allclose(f[:, :, 1:], 0.0, atol=1e-12)


@pytest.mark.parametrize("kind", ["dft", "dct"])
def test_transform_roundtrip(kind):
    rng = np.random.default_rng(0)
    t = rng.standard_normal((2, 2, 4))
    tr = Mode3Transform(kind, 4)
    back = transform_mode3(transform_mode3(t, tr), tr, "inverse")
    assert np.allclose(back, t, atol=1e-10)


def test_dft_forward_matches_matrix_oracle():
    rng = np.random.default_rng(1)
    t = rng.standard_normal((3, 2, 5))
    got = transform_mode3(t, Mode3Transform("dft", 5))
    expect = mode3_product(t, dft_matrix(5))
    assert np.allclose(got, expect, atol=1e-10)


def test_dct_matrix_is_orthonormal_and_matches():
    rng = np.random.default_rng(2)
    tr = Mode3Transform("dct", 6)
    c = tr.matrix()
    assert np.allclose(c @ c.T, np.eye(6), atol=1e-12)
    t = rng.standard_normal((2, 3, 6))
    assert np.allclose(transform_mode3(t, tr), mode3_product(t, c), atol=1e-10)


def test_transform_size_mismatch():
    with pytest.raises(ShapeError):
        transform_mode3(np.zeros((2, 2, 3)), Mode3Transform("dft", 4))


def test_tprod_identity():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3, 4))
    assert np.allclose(tprod(a, identity_tensor(3, 4)), a, atol=1e-12)


def test_tprod_depth_one_is_matrix_product():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((3, 2, 1))
    b = rng.standard_normal((2, 4, 1))
    assert np.allclose(tprod(a, b)[:, :, 0], a[:, :, 0] @ b[:, :, 0], atol=1e-12)


def test_tprod_matches_direct_convolution():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((3, 2, 4))
    b = rng.standard_normal((2, 3, 4))
    assert np.allclose(tprod(a, b), tprod_by_convolution(a, b), atol=1e-10)


def test_tprod_shape_error():
    with pytest.raises(ShapeError):
        tprod(np.zeros((2, 2, 3)), np.zeros((3, 2, 3)))


def test_facewise_identity_and_depth_one():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((2, 3, 3))
    eyes = np.stack([np.eye(3)] * 3, axis=2)
    assert np.allclose(facewise_product(a, eyes), a)
    x = rng.standard_normal((2, 3, 1))
    y = rng.standard_normal((3, 2, 1))
    assert np.allclose(facewise_product(x, y)[:, :, 0], x[:, :, 0] @ y[:, :, 0])


def test_facewise_matches_slice_loop():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((2, 2, 3))
    b = rng.standard_normal((2, 2, 3))
    out = facewise_product(a, b)
    for i in range(3):
        assert np.allclose(out[:, :, i], a[:, :, i] @ b[:, :, i])


def test_tsvd_identity_tensor():
    u, s, v = tsvd(identity_tensor(3, 4))
    assert np.allclose(s, identity_tensor(3, 4), atol=1e-10)


def test_tsvd_depth_one_is_matrix_svd():
    rng = np.random.default_rng(8)
    a = rng.standard_normal((4, 3, 1))
    u, s, v = tsvd(a)
    sv = np.linalg.svd(a[:, :, 0], compute_uv=False)
    assert np.allclose(np.diag(s[:, :, 0])[:3], sv, atol=1e-10)


def test_tsvd_reconstruction_and_fdiag():
    rng = np.random.default_rng(9)
    for shape in [(3, 3, 2), (3, 4, 5), (4, 3, 4)]:
        a = rng.standard_normal(shape)
        u, s, v = tsvd(a)
        rec = tprod(tprod(u, s), conj_transpose(v))
        assert np.linalg.norm(rec - a) <= 1e-8 * np.linalg.norm(a)
        # S tubes carry the per-slice singular values of the transformed tensor
        sh = np.fft.fft(s, axis=2)
        ah = np.fft.fft(a, axis=2)
        for k in range(shape[2]):
            expect = np.linalg.svd(ah[:, :, k], compute_uv=False)
            got = np.diag(sh[:, :, k]).real[: len(expect)]
            assert np.allclose(got, expect, atol=1e-8)
            off = sh[:, :, k].copy()
            np.fill_diagonal(off, 0.0)
            assert np.max(np.abs(off)) < 1e-8


def test_tsvd_factors_orthogonal():
    rng = np.random.default_rng(10)
    a = rng.standard_normal((3, 4, 4))
    u, s, v = tsvd(a)
    assert np.allclose(tprod(conj_transpose(u), u), identity_tensor(3, 4), atol=1e-9)
    assert np.allclose(tprod(conj_transpose(v), v), identity_tensor(4, 4), atol=1e-9)


def test_tsvd_truncation_error_monotone():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((4, 4, 3))
    u, s, v = tsvd(a)
    errs = []
    for r in range(1, 5):
        rec = tprod(tprod(u[:, :r, :], s[:r, :r, :]), conj_transpose(v[:, :r, :]))
        errs.append(np.linalg.norm(rec - a))
    for e_next, e_prev in zip(errs[1:], errs[:-1]):
        assert e_next <= e_prev + 1e-10


def test_conj_transpose_rules():
    rng = np.random.default_rng(12)
    m = rng.standard_normal((3, 2, 1))
    assert np.allclose(conj_transpose(m)[:, :, 0], m[:, :, 0].T)
    a = rng.standard_normal((2, 3, 4))
    assert np.allclose(conj_transpose(conj_transpose(a)), a)
    assert np.allclose(conj_transpose(a), conj_transpose_by_index_rule(a))


def test_ranks():
    assert tubal_rank(np.zeros((3, 3, 4))) == 0
    assert np.array_equal(multi_rank(np.zeros((3, 3, 4))), np.zeros(4, dtype=int))
    assert tubal_rank(identity_tensor(3, 4)) == 3
    rng = np.random.default_rng(13)
    a = tprod(rng.standard_normal((4, 2, 3)), rng.standard_normal((2, 5, 3)))
    assert tubal_rank(a) <= 2


def test_rank_norm_relations():
    rng = np.random.default_rng(14)
    a = rng.standard_normal((3, 4, 5))
    m = multi_rank(a)
    assert tubal_rank(a) == m.max()
    assert tubal_rank(a) <= m.sum()


def test_tnn_trivial_cases():
    assert tnn(np.zeros((2, 3, 4))) == 0.0
    rng = np.random.default_rng(15)
    m = rng.standard_normal((3, 4, 1))
    assert abs(tnn(m) - nuclear_norm(m[:, :, 0])) < 1e-10


def test_tnn_matches_block_circulant():
    rng = np.random.default_rng(16)
    a = rng.standard_normal((3, 3, 3))
    expect = nuclear_norm(block_circulant_unfold(a))
    assert abs(tnn(a) - expect) <= 1e-7 * expect


def test_block_circulant_trivial():
    rng = np.random.default_rng(17)
    m = rng.standard_normal((3, 2, 1))
    assert np.array_equal(block_circulant_unfold(m), m[:, :, 0])
    assert np.allclose(block_circulant_unfold(identity_tensor(3, 4)), np.eye(12))


def test_bdiag_and_circulant_share_singular_values():
    rng = np.random.default_rng(18)
    a = rng.standard_normal((2, 3, 4))
    ah = np.fft.fft(a, axis=2)
    bd = np.zeros((2 * 4, 3 * 4), dtype=complex)
    for i in range(4):
        bd[2 * i : 2 * i + 2, 3 * i : 3 * i + 3] = ah[:, :, i]
    s1 = np.sort(np.linalg.svd(bd, compute_uv=False))
    s2 = np.sort(np.linalg.svd(block_circulant_unfold(a), compute_uv=False))
    assert np.allclose(s1, s2, atol=1e-8)


def test_tprod_transform_equals_convolution_small_sizes():
    rng = np.random.default_rng(19)
    for _ in range(25):
        n1, n2, n4 = rng.integers(1, 5, size=3)
        n3 = int(rng.integers(1, 6))
        a = rng.standard_normal((n1, n2, n3))
        b = rng.standard_normal((n2, n4, n3))
        assert np.max(np.abs(tprod(a, b) - tprod_by_convolution(a, b))) <= 1e-9
