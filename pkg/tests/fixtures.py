"""Shared algebras for the test-suite."""

from altkron.algebra import AlgebraTable, algebra_from_products
from altkron.scalars import QQ

from oracles import classical_octonion_table


def oracle_octonions(field=QQ) -> AlgebraTable:
    T = classical_octonion_table()
    return algebra_from_products(
        field, [f"o{i}" for i in range(8)], lambda i, j: {k: c for k, c in enumerate(T[i][j]) if c}, {0: 1}
    )


def corrupted(A: AlgebraTable, i: int, j: int, delta: dict) -> AlgebraTable:
    """``A`` with the product of basis elements ``i`` and ``j`` shifted by ``delta``."""
    table = [[dict(c) for c in row] for row in A.table]
    for k, c in delta.items():
        v = A.field.norm(table[i][j].get(k, 0) + c)
        if v:
            table[i][j][k] = v
        else:
            table[i][j].pop(k, None)
    return AlgebraTable(A.field, table, A.names, A.unit)
