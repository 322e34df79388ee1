"""
Exact ranks over the coefficient field, for matrices held as lists of rows of
field elements. Thin wrappers around sympy's DomainMatrix that accept empty
shapes.
"""
from __future__ import annotations

from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

Rows = list[list]


def zeros(nrows: int, ncols: int, field: Domain) -> Rows:
    return [[field.zero] * ncols for _ in range(nrows)]


def rank(rows: Rows, ncols: int, field: Domain) -> int:
    if not rows or not ncols:
        return 0
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), field).rank()
