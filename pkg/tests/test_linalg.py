from hypothesis import given
from hypothesis import strategies as st

from altkron.linalg import LinearMap, Subspace, kernel, kernel_subspace
from altkron.scalars import GF, QQ

from oracles import rank

N = 4
rows = st.lists(st.lists(st.integers(-3, 3), min_size=N, max_size=N), min_size=0, max_size=5)


def sp(rs, f=QQ):
    return Subspace(f, N, ({i: f(c) for i, c in enumerate(r) if f(c)} for r in rs))


@given(rows)
def test_rank_matches_oracle(rs):
    assert sp(rs).rank == rank(rs)


@given(rows)
def test_rank_matches_oracle_mod_p(rs):
    assert sp(rs, GF(3)).rank == rank(rs, 3)


@given(rows, st.lists(st.integers(-2, 2), min_size=5, max_size=5))
def test_combinations_are_contained_and_coords_recover_them(rs, lam):
    S = sp(rs)
    v: dict = {}
    for c, r in zip(lam, rs):
        for i, x in enumerate(r):
            v[i] = v.get(i, 0) + c * x
    v = {i: x for i, x in v.items() if x}
    assert S.contains(v)
    assert S.combine(S.coords(v)) == v


@given(rows, rows)
def test_dimension_formula(a, b):
    S, T = sp(a), sp(b)
    assert (S + T).rank + S.intersect(T).rank == S.rank + T.rank


@given(rows)
def test_kernel_vectors_annihilate(rs):
    imgs = [{i: c for i, c in enumerate(r) if c} for r in rs]
    ker = kernel(QQ, imgs)
    assert len(ker) == len(rs) - rank(rs)
    for lam in ker:
        acc = [0] * N
        for k, c in lam.items():
            for i, x in enumerate(rs[k]):
                acc[i] += c * x
        assert not any(acc)


def test_kernel_subspace_of_projection():
    # x -> (x0, 0, ...) has kernel spanned by e1, e2, e3
    imgs = [{0: 1}, {}, {}, {}]
    K = kernel_subspace(QQ, imgs, [{i: 1} for i in range(N)], N)
    assert K == Subspace(QQ, N, [{1: 1}, {2: 1}, {3: 1}])


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_composes_to_identity(m):
    L = LinearMap.from_matrix(QQ, m)
    if rank(m) < 3:
        assert not L.is_invertible()
        return
    assert L.compose(L.inverse()) == LinearMap.identity(QQ, 3)
    assert L.inverse().compose(L) == LinearMap.identity(QQ, 3)


def test_direct_sum_and_complement():
    S = Subspace(QQ, 3, [{0: 1, 1: 1}])
    T = Subspace(QQ, 3, [{1: 1}, {2: 1}])
    assert S.is_direct_sum(T)
    assert not S.is_direct_sum(Subspace(QQ, 3, [{1: 1}]))
    assert S.complement_indices() == [1, 2]
