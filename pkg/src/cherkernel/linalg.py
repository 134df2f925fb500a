"""Exact sparse linear algebra over a cyclotomic field.

Vectors are dicts {coordinate index: CycloNumber}, zero entries absent.
Pivoting is deterministic: smallest coordinate index first.
"""

from __future__ import annotations

from .scalars import CycloNumber

Vector = dict[int, CycloNumber]


def vec_add(a: Vector, b: Vector, scale: CycloNumber | None = None) -> Vector:
    out = dict(a)
    for k, v in b.items():
        w = v if scale is None else scale * v
        if k in out:
            s = out[k] + w
            if s:
                out[k] = s
            else:
                del out[k]
        elif w:
            out[k] = w
    return out


def vec_scale(a: Vector, c: CycloNumber) -> Vector:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


class RowReducer:
    """Incremental echelon basis; supports rank queries and membership tests."""

    def __init__(self):
        self.pivots: dict[int, Vector] = {}  # pivot index -> row with that pivot = 1

    def reduce(self, vec: Vector) -> Vector:
        vec = dict(vec)
        while vec:
            lead = min(vec)
            row = self.pivots.get(lead)
            if row is None:
                return vec
            vec = vec_add(vec, row, -vec[lead])
        return vec

    def add(self, vec: Vector) -> bool:
        """Insert vec; returns True when it enlarged the span."""
        residual = self.reduce(vec)
        if not residual:
            return False
        lead = min(residual)
        inv = residual[lead].inverse()
        normalized = vec_scale(residual, inv)
        # keep rows fully reduced against each other
        for p, row in self.pivots.items():
            if lead in row:
                self.pivots[p] = vec_add(row, normalized, -row[lead])
        self.pivots[lead] = normalized
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def kernel_basis(rows: list[Vector], ncols: int, one: CycloNumber) -> list[Vector]:
    """Basis of {v : M v = 0} for M given by rows over coordinates 0..ncols-1.

    `one` supplies the field (its cyclotomic order).
    """
    # eliminate on columns: bring rows to reduced echelon form
    work = [dict(r) for r in rows if r]
    echelon: dict[int, Vector] = {}
    for r in work:
        r = dict(r)
        while r:
            lead = min(r)
            row = echelon.get(lead)
            if row is None:
                inv = r[lead].inverse()
                r = vec_scale(r, inv)
                for p, prow in echelon.items():
                    if lead in prow:
                        echelon[p] = vec_add(prow, r, -prow[lead])
                echelon[lead] = r
                break
            r = vec_add(r, row, -r[lead])
    pivot_cols = sorted(echelon)
    free_cols = [c for c in range(ncols) if c not in echelon]
    basis = []
    for f in free_cols:
        v: Vector = {f: one}
        for p in pivot_cols:
            coeff = echelon[p].get(f)
            if coeff:
                v[p] = -coeff
        basis.append(v)
    return basis
