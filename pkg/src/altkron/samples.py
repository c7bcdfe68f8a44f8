"""Small named algebras used as coefficient rings and fixtures."""

from __future__ import annotations

from .algebra import AlgebraTable, MatrixUnits, algebra_from_products
from .linalg import LinearMap
from .scalars import QQ, FieldSpec, SplitMix64


def ground(field: FieldSpec = QQ) -> AlgebraTable:
    return AlgebraTable(field, [[{0: 1}]], ["1"], {0: 1})


def matrix_algebra(n: int = 2, field: FieldSpec = QQ) -> AlgebraTable:
    """M_n(F) on the matrix units ``e_ij`` (row-major)."""
    names = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]

    def prod(a, b):
        i, j = divmod(a, n)
        k, l = divmod(b, n)
        return {i * n + l: 1} if j == k else {}

    return algebra_from_products(field, names, prod, {i * n + i: 1 for i in range(n)})


def m2(field: FieldSpec = QQ) -> AlgebraTable:
    return matrix_algebra(2, field)


def m2_units() -> MatrixUnits:
    return MatrixUnits({0: 1}, {1: 1}, {2: 1}, {3: 1})


def truncated_poly(k: int, field: FieldSpec = QQ, var: str = "t") -> AlgebraTable:
    """F[t]/(t^k) on the basis 1, t, ..., t^(k-1)."""
    names = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, k)]
    return algebra_from_products(field, names, lambda i, j: {i + j: 1} if i + j < k else {}, {0: 1})


def dual_numbers(field: FieldSpec = QQ, var: str = "t") -> AlgebraTable:
    return truncated_poly(2, field, var)


def product_algebra(k: int, field: FieldSpec = QQ) -> AlgebraTable:
    """F^k with componentwise product (orthogonal idempotents)."""
    names = [f"f{i + 1}" for i in range(k)]
    return algebra_from_products(field, names, lambda i, j: {i: 1} if i == j else {}, {i: 1 for i in range(k)})


def square_zero(k: int, field: FieldSpec = QQ) -> AlgebraTable:
    """F + F^k with all products of the generators zero, i.e. F[x_1..x_k]/(x)^2."""
    names = ["1"] + [f"x{i + 1}" for i in range(k)]

    def prod(i, j):
        if i == 0:
            return {j: 1}
        if j == 0:
            return {i: 1}
        return {}

    return algebra_from_products(field, names, prod, {0: 1})


def upper_triangular(field: FieldSpec = QQ) -> AlgebraTable:
    """Upper triangular 2x2 matrices on ``e11, e12, e22`` (non-commutative, dim 3)."""
    names = ["e11", "e12", "e22"]
    rc = [(0, 0), (0, 1), (1, 1)]
    idx = {v: k for k, v in enumerate(rc)}

    def prod(a, b):
        (i, j), (k, l) = rc[a], rc[b]
        return {idx[(i, l)]: 1} if j == k else {}

    return algebra_from_products(field, names, prod, {0: 1, 2: 1})


def grassmann2(field: FieldSpec = QQ) -> AlgebraTable:
    """The Grassmann algebra on two generators: basis ``1, e1, e2, e1e2``."""
    names = ["1", "e1", "e2", "e1e2"]
    # monomials as bitmasks: 0 -> 1, 1 -> e1, 2 -> e2, 3 -> e1e2
    mono = [0, 1, 2, 3]

    def prod(a, b):
        ma, mb = mono[a], mono[b]
        if ma & mb:
            return {}
        sign = -1 if (ma & 2 and mb & 1) else 1
        return {mono.index(ma | mb): sign}

    return algebra_from_products(field, names, prod, {0: 1})


def change_basis(A: AlgebraTable, rng: SplitMix64, attempts: int = 50) -> AlgebraTable:
    """``A`` rewritten in a random invertible basis with small integer entries."""
    f = A.field
    n = A.dim
    for _ in range(attempts):
        vecs = [{i: c for i in range(n) if (c := rng.scalar(f))} for _ in range(n)]
        if LinearMap(f, n, n, vecs).is_invertible():
            names = [f"z{i}" for i in range(n)]
            return A.rebase(vecs, names)
    return A


COMMUTATIVE_CATALOGUE = {
    1: [lambda f: ground(f)],
    2: [lambda f: dual_numbers(f), lambda f: product_algebra(2, f)],
    3: [
        lambda f: truncated_poly(3, f),
        lambda f: product_algebra(3, f),
        lambda f: square_zero(2, f),
    ],
}

NONCOMMUTATIVE_CATALOGUE = {3: [lambda f: upper_triangular(f)]}


def random_coefficient_ring(rng: SplitMix64, field: FieldSpec, max_dim: int = 3, allow_noncommutative: bool = True) -> AlgebraTable:
    """A small unital associative algebra in a scrambled basis."""
    choices = []
    for d in range(1, max_dim + 1):
        choices += COMMUTATIVE_CATALOGUE.get(d, [])
        if allow_noncommutative:
            choices += NONCOMMUTATIVE_CATALOGUE.get(d, [])
    A = rng.choice(choices)(field)
    return change_basis(A, rng) if rng.below(2) else A
