import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from wsndct import transform as T
from wsndct.errors import InvalidArgument, InvalidData, UndefinedMetric

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def _brute_dct(x):
    # textbook DCT-II sum, evaluated term by term
    n = len(x)
    out = []
    for p in range(n):
        a = math.sqrt(1 / n) if p == 0 else math.sqrt(2 / n)
        out.append(a * sum(x[q] * math.cos(math.pi * (2 * q + 1) * p / (2 * n)) for q in range(n)))
    return np.array(out)


def test_dct_small_sizes():
    assert T.dct_matrix(1).tolist() == [[1.0]]
    np.testing.assert_allclose(T.dct_matrix(2), [[0.7071068, 0.7071068], [0.7071068, -0.7071068]], atol=1e-7)
    phi = T.dct_matrix(8)
    assert np.abs(phi @ phi.T - np.eye(8)).max() < 1e-12


def test_dct_matches_termwise_sum():
    x = np.random.default_rng(0).normal(size=13)
    np.testing.assert_allclose(T.dct_matrix(13) @ x, _brute_dct(x), atol=1e-12)


def test_dct_matches_scipy():
    fft = pytest.importorskip("scipy.fft")
    x = np.random.default_rng(1).normal(size=64)
    np.testing.assert_allclose(T.dct_matrix(64) @ x, fft.dct(x, type=2, norm="ortho"), atol=1e-12)


@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_dct_rejects_bad_size(bad):
    with pytest.raises(InvalidArgument):
        T.dct_matrix(bad)


def test_dct_matrix_is_read_only():
    with pytest.raises(ValueError):
        T.dct_matrix(4)[0, 0] = 2.0


def test_constant_vector_keeps_dc_only():
    for sort in T.SortMode:
        for sel in T.SelectionMode:
            p = T.compress_cluster([0, 1, 2, 3], [5.0] * 4, 1, sort, sel)
            assert p.kept == [(0, pytest.approx(10.0, abs=1e-12))]
            ids, est = T.reconstruct_cluster(p)
            assert ids.tolist() == [0, 1, 2, 3]
            np.testing.assert_allclose(est, 5.0, atol=1e-12)


def test_top_k_of_1234_matches_exhaustive_oracle():
    p = T.compress_cluster([0, 1, 2, 3], [1.0, 2.0, 3.0, 4.0], 2, T.SortMode.DESCENDING, T.SelectionMode.TOP_K_MAGNITUDE)
    s = _brute_dct([4.0, 3.0, 2.0, 1.0])
    best = max(((i, j) for i in range(4) for j in range(i + 1, 4)), key=lambda ij: (abs(s[ij[0]]) + abs(s[ij[1]]), -ij[0]))
    # magnitudes: s0 = 5, s1 ~ 2.23, s2 = 0, s3 ~ 0.16
    assert tuple(p.indices.tolist()) == best == (0, 1)
    np.testing.assert_allclose(p.values, s[[0, 1]], atol=1e-12)
    assert p.permutation.tolist() == [3, 2, 1, 0]


def test_top_k_ties_go_to_lower_index():
    s = np.array([1.0, -2.0, 2.0, 0.5])
    assert T.select_coefficients(s, 1, T.SelectionMode.TOP_K_MAGNITUDE).tolist() == [1]
    assert T.select_coefficients(s, 2, T.SelectionMode.TOP_K_MAGNITUDE).tolist() == [1, 2]
    assert T.select_coefficients(s, 2, T.SelectionMode.FIRST_K).tolist() == [0, 1]


def test_sort_ties_fall_back_to_node_id():
    order = T.sort_order(np.array([7, 3, 5]), np.array([1.0, 1.0, 2.0]), T.SortMode.DESCENDING)
    assert order.tolist() == [2, 1, 0]
    order = T.sort_order(np.array([7, 3, 5]), np.array([1.0, 1.0, 2.0]), T.SortMode.ASCENDING)
    assert order.tolist() == [1, 0, 2]
    assert T.sort_order(np.array([7, 3, 5]), np.zeros(3), T.SortMode.NONE).tolist() == [1, 2, 0]


@given(hnp.arrays(np.float64, st.integers(1, 64), elements=finite))
@settings(max_examples=100, deadline=None)
def test_full_budget_is_lossless_and_energy_preserving(x):
    ids = np.arange(x.size) * 3 + 1
    p = T.compress_cluster(ids, x, x.size)
    assert math.isclose(float((p.values**2).sum()), float((x**2).sum()), rel_tol=1e-9, abs_tol=1e-9)
    got_ids, est = T.reconstruct_cluster(p)
    assert np.array_equal(got_ids, ids)
    assert np.abs(est - x).max() < 1e-10 * max(1.0, np.abs(x).max())


@given(hnp.arrays(np.float64, st.integers(2, 48), elements=finite), st.data())
@settings(max_examples=100, deadline=None)
def test_truncation_error_equals_dropped_energy(x, data):
    k = data.draw(st.integers(1, x.size))
    sort = data.draw(st.sampled_from(list(T.SortMode)))
    sel = data.draw(st.sampled_from(list(T.SelectionMode)))
    p = T.compress_cluster(np.arange(x.size), x, k, sort, sel)
    _, est = T.reconstruct_cluster(p)
    order = T.sort_order(np.arange(x.size), x, sort)
    s = T.dct_matrix(x.size) @ x[order]
    dropped = np.delete(s, p.indices)
    assert math.isclose(float(((x - est) ** 2).sum()), float((dropped**2).sum()), rel_tol=1e-9, abs_tol=1e-6)


@given(hnp.arrays(np.float64, st.integers(2, 40), elements=finite))
@settings(max_examples=60, deadline=None)
def test_top_k_error_non_increasing_in_k(x):
    errs = []
    for k in range(1, x.size + 1):
        _, est = T.reconstruct_cluster(T.compress_cluster(np.arange(x.size), x, k))
        errs.append(float(((x - est) ** 2).sum()))
    scale = float((x**2).sum()) + 1.0
    assert all(b <= a + 1e-9 * scale for a, b in zip(errs, errs[1:]))


@given(hnp.arrays(np.float64, st.integers(2, 40), elements=finite), st.data())
@settings(max_examples=60, deadline=None)
def test_ascending_and_descending_give_the_same_error(x, data):
    k = data.draw(st.integers(1, x.size))
    # distinct values so both orders are exact reversals of each other
    x = x + np.arange(x.size) * 1e-3
    errs = []
    for mode in (T.SortMode.ASCENDING, T.SortMode.DESCENDING):
        _, est = T.reconstruct_cluster(T.compress_cluster(np.arange(x.size), x, k, mode))
        errs.append(float(((x - est) ** 2).sum()))
    assert math.isclose(errs[0], errs[1], rel_tol=1e-7, abs_tol=1e-6)


def test_zeroed_payload_reconstructs_zero():
    p = T.compress_cluster([4, 2, 9], [1.0, 5.0, -2.0], 2)
    z = T.CompressedPayload(p.n, p.indices, np.zeros(p.k), p.permutation)
    ids, est = T.reconstruct_cluster(z)
    assert ids.tolist() == [2, 4, 9]
    assert np.all(est == 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(indices=np.array([0, 0]), values=np.zeros(2)),
        dict(indices=np.array([5]), values=np.zeros(1)),
        dict(indices=np.array([0]), values=np.zeros(2)),
        dict(indices=np.array([0]), values=np.array([np.nan])),
        dict(indices=np.array([], dtype=np.int64), values=np.zeros(0)),
    ],
)
def test_malformed_payloads_are_rejected(kwargs):
    p = T.CompressedPayload(n=3, permutation=np.array([0, 1, 2]), **kwargs)
    with pytest.raises(InvalidData):
        T.reconstruct_cluster(p)


def test_bad_permutation_rejected():
    p = T.CompressedPayload(3, np.array([0]), np.array([1.0]), np.array([0, 0, 1]))
    with pytest.raises(InvalidData):
        T.reconstruct_cluster(p)


def test_compress_argument_errors():
    with pytest.raises(InvalidArgument):
        T.compress_cluster([0, 1], [1.0, 2.0], 0)
    with pytest.raises(InvalidArgument):
        T.compress_cluster([0, 1], [1.0, 2.0], 3)
    with pytest.raises(InvalidData):
        T.compress_cluster([0, 1], [1.0, np.inf], 1)


def test_normalized_error_examples():
    assert T.normalized_error([1, 2], [1, 2]) == 0.0
    assert T.normalized_error([1, 2], [0, 0]) == 1.0
    assert T.normalized_error([3, 4], [0, 4]) == pytest.approx(0.6)
    with pytest.raises(UndefinedMetric):
        T.normalized_error([0, 0], [1, 1])
    with pytest.raises(InvalidArgument):
        T.normalized_error([1], [1, 2])


sizes_st = st.lists(st.integers(1, 60), min_size=1, max_size=40)


@given(sizes_st, st.data())
@settings(max_examples=200, deadline=None)
def test_allocation_sums_and_stays_near_quota(sizes, data):
    total = sum(sizes)
    K = data.draw(st.integers(1, total))
    prio = data.draw(st.lists(st.floats(0, 1e4), min_size=len(sizes), max_size=len(sizes)))
    k = T.allocate_coefficients(sizes, K, priority=prio)
    assert int(k.sum()) == K
    assert np.all(k >= 0) and np.all(k <= np.array(sizes))
    quota = K * np.array(sizes) / total
    if K >= len(sizes):
        assert k.min() >= 1
        # the floor may push a cluster above its ceiling only by the repair step
        assert np.all(k <= np.maximum(np.ceil(quota), 1) + 1)
    else:
        assert np.all(np.abs(k - quota) < 1 + 1e-9)


def test_allocation_examples():
    assert T.allocate_coefficients([10, 10], 4).tolist() == [2, 2]
    assert T.allocate_coefficients([5, 5, 10], 20).tolist() == [5, 5, 10]
    assert T.allocate_coefficients([1] * 4, 4).tolist() == [1, 1, 1, 1]
    # K below the cluster count: some clusters send nothing
    k = T.allocate_coefficients([3, 3, 3], 1)
    assert k.sum() == 1 and sorted(k.tolist()) == [0, 0, 1]
    # cumulative rounding along the priority order
    assert T.allocate_coefficients([1, 1, 1, 1], 2, priority=[0, 1, 2, 3]).tolist() == [1, 0, 1, 0]


def test_allocation_errors():
    with pytest.raises(InvalidArgument):
        T.allocate_coefficients([3, 0], 2)
    with pytest.raises(InvalidArgument):
        T.allocate_coefficients([3, 3], 7)
    with pytest.raises(InvalidArgument):
        T.allocate_coefficients([], 1)


def test_payload_csv_round_trip():
    rng = np.random.default_rng(3)
    payloads = [(0, T.compress_cluster([5, 1, 9], rng.normal(size=3), 2)), (2, T.compress_cluster([0], [4.0], 1))]
    coef, perm = T.payloads_to_csv(payloads)
    assert coef.splitlines()[0] == "cluster_index,n,coeff_index,coeff_value"
    assert len(coef.splitlines()) == 1 + 3
    back = T.payloads_from_csv(coef, perm)
    assert [ci for ci, _ in back] == [0, 2]
    for (_, a), (_, b) in zip(payloads, back):
        assert np.array_equal(a.indices, b.indices)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.permutation, b.permutation)


def test_payload_csv_errors():
    with pytest.raises(InvalidData):
        T.payloads_from_csv("cluster_index,n,coeff_index,coeff_value\n0,2,0,x\n", "cluster_index,sorted_pos,node_id\n")
    with pytest.raises(InvalidData):
        T.payloads_from_csv("cluster_index,n,coeff_index,coeff_value\n0,1,0,1.0\n", "cluster_index,sorted_pos,node_id\n")
