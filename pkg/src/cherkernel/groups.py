"""Finite matrix groups acting on h, their reflections and parabolic classes.

Matrices are tuples of tuples of CycloNumber and act on column vectors of h;
the action on h* is contragredient.  Element 0 is always the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .config import DEFAULT, BudgetError, InputError
from .linalg import RowReducer, kernel_basis
from .scalars import CycloNumber, embed, make_root, parse_scalar

Matrix = tuple[tuple[CycloNumber, ...], ...]


def mat_identity(rank: int, order: int) -> Matrix:
    one, zero = CycloNumber.one(order), CycloNumber.zero(order)
    return tuple(tuple(one if i == j else zero for j in range(rank)) for i in range(rank))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(1, n)), a[i][0] * b[0][j]) for j in range(n))
        for i in range(n)
    )


def mat_transpose(a: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    order = a[0][0].order
    zero, one = CycloNumber.zero(order), CycloNumber.one(order)
    aug = [list(a[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise InputError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * v for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_embed(a: Matrix, order: int) -> Matrix:
    return tuple(tuple(embed(v, order) for v in row) for row in a)


def contragredient(a: Matrix) -> Matrix:
    return mat_transpose(mat_inverse(a))


def mat_apply(a: Matrix, v: tuple[CycloNumber, ...]) -> tuple[CycloNumber, ...]:
    n = len(a)
    return tuple(sum((a[i][k] * v[k] for k in range(1, n)), a[i][0] * v[0]) for i in range(n))


@dataclass(frozen=True)
class GroupSpec:
    cyclotomic_order: int
    rank: int
    generators: tuple[Matrix, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise InputError(f"rank must be >= 1, got {self.rank}")
        for g in self.generators:
            if len(g) != self.rank or any(len(row) != self.rank for row in g):
                raise InputError("generator matrices must be rank x rank")
            mat_inverse(g)  # raises when not invertible


@dataclass(frozen=True)
class ReflectionDatum:
    element_index: int
    alpha: tuple[CycloNumber, ...]  # covector in h*, first nonzero coordinate 1
    alpha_check: tuple[CycloNumber, ...]  # vector in h, <alpha, alpha_check> = 2
    eigenvalue: CycloNumber  # nontrivial eigenvalue on h*
    class_id: int


@dataclass(frozen=True)
class ParabolicClass:
    representative_subgroup: tuple[int, ...]
    class_size: int
    fixed_space_dim_h: int
    leaf_dim: int


class ReflectionGroup:
    """Closed matrix group with full multiplication and inverse tables."""

    def __init__(self, spec: GroupSpec, elements: list[Matrix]):
        self.spec = spec
        self.elements = elements
        self.order = len(elements)
        self.index = {e: i for i, e in enumerate(elements)}
        self.mult_table = [
            [self.index[mat_mul(a, b)] for b in elements] for a in elements
        ]
        self.inverse_table = [row.index(0) for row in self.mult_table]
        self._reflections: list[ReflectionDatum] | None = None

    @property
    def rank(self) -> int:
        return self.spec.rank

    def mul(self, i: int, j: int) -> int:
        return self.mult_table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse_table[i]

    def conjugate(self, g: int, s: int) -> int:
        return self.mul(self.mul(g, s), self.inv(g))


def close_group(spec: GroupSpec, cap: int | None = None) -> ReflectionGroup:
    """Enumerate the group generated by spec.generators; identity is index 0."""
    cap = cap or DEFAULT.closure_cap
    order = spec.cyclotomic_order
    ident = mat_identity(spec.rank, order)
    gens = [mat_embed(g, order) for g in spec.generators]
    elements = [ident]
    seen = {ident}
    i = 0
    while i < len(elements):
        for g in gens:
            prod = mat_mul(elements[i], g)
            if prod not in seen:
                if len(elements) >= cap:
                    raise BudgetError(f"group closure exceeded cap {cap}")
                seen.add(prod)
                elements.append(prod)
        i += 1
    return ReflectionGroup(spec, elements)


def _fixed_space_rank(m: Matrix) -> int:
    """dim ker(m - 1) on h."""
    n = len(m)
    order = m[0][0].order
    one = CycloNumber.one(order)
    rows = []
    for i in range(n):
        row = {j: (m[i][j] - one if i == j else m[i][j]) for j in range(n) if (m[i][j] - one if i == j else m[i][j])}
        if row:
            rows.append(row)
    rr = RowReducer()
    for row in rows:
        rr.add(row)
    return n - rr.rank


def _eigen_from_image(m: Matrix) -> tuple[tuple[CycloNumber, ...], CycloNumber]:
    """For m with rank(m-1) = 1: a spanning vector of im(m-1) and its eigenvalue."""
    n = len(m)
    order = m[0][0].order
    one = CycloNumber.one(order)
    for j in range(n):
        col = tuple(m[i][j] - (one if i == j else CycloNumber.zero(order)) for i in range(n))
        if any(col):
            image = mat_apply(m, col)
            k = next(i for i in range(n) if col[i])
            return col, image[k] / col[k]
    raise InputError("element is the identity")


def find_reflections(group: ReflectionGroup) -> list[ReflectionDatum]:
    """Elements fixing a hyperplane of h pointwise, with normalized eigendata."""
    if group._reflections is not None:
        return group._reflections
    r = group.rank
    order = group.spec.cyclotomic_order
    two = CycloNumber.from_rational(2, order)
    raw = []
    for idx in range(1, group.order):
        m = group.elements[idx]
        if _fixed_space_rank(m) != r - 1:
            continue
        dual = contragredient(m)
        alpha_raw, lam = _eigen_from_image(dual)
        check_raw, _ = _eigen_from_image(m)
        # scale alpha so its first nonzero coordinate is 1
        lead = next(v for v in alpha_raw if v)
        alpha = tuple(v / lead for v in alpha_raw)
        pairing = sum(
            (a * b for a, b in zip(alpha[1:], check_raw[1:])), alpha[0] * check_raw[0]
        )
        if not pairing:
            raise InputError("degenerate pairing between reflection eigenvectors")
        scale = two / pairing
        alpha_check = tuple(scale * v for v in check_raw)
        raw.append((idx, alpha, alpha_check, lam))
    # conjugacy classes among the reflections
    refl_indices = [t[0] for t in raw]
    refl_set = set(refl_indices)
    assigned: dict[int, int] = {}
    class_reps = []
    for idx in refl_indices:
        if idx in assigned:
            continue
        orbit = {group.conjugate(g, idx) for g in range(group.order)}
        assert orbit <= refl_set, "conjugate of a reflection must be a reflection"
        cid = len(class_reps)
        class_reps.append(min(orbit))
        for member in orbit:
            assigned[member] = cid
    data = [
        ReflectionDatum(idx, alpha, alpha_check, lam, assigned[idx])
        for idx, alpha, alpha_check, lam in raw
    ]
    group._reflections = data
    return data


def reflection_class_count(group: ReflectionGroup) -> int:
    data = find_reflections(group)
    return 1 + max((d.class_id for d in data), default=-1)


# -- parabolic subgroup classes ----------------------------------------------


def _echelon_subspace(vectors: list[tuple[CycloNumber, ...]], rank: int, order: int):
    """Canonical reduced-echelon form of a span; hashable key for dedup."""
    from .linalg import RowReducer

    rr = RowReducer()
    for v in vectors:
        rr.add({i: c for i, c in enumerate(v) if c})
    rows = []
    for p in sorted(rr.pivots):
        row = rr.pivots[p]
        rows.append(tuple(row.get(i, CycloNumber.zero(order)) for i in range(rank)))
    return tuple(rows)


def _fixed_space(group: ReflectionGroup, elems) -> tuple:
    """Echelon basis of the common fixed space of `elems` on h."""
    r = group.rank
    order = group.spec.cyclotomic_order
    one = CycloNumber.one(order)
    from .linalg import RowReducer, kernel_basis

    rows = []
    for e in elems:
        m = group.elements[e]
        for i in range(r):
            row = {}
            for j in range(r):
                v = m[i][j] - (one if i == j else CycloNumber.zero(order))
                if v:
                    row[j] = v
            if row:
                rows.append(row)
    basis = kernel_basis(rows, r, one)
    vecs = [tuple(v.get(i, CycloNumber.zero(order)) for i in range(r)) for v in basis]
    return _echelon_subspace(vecs, r, order)


def _pointwise_stabilizer(group: ReflectionGroup, subspace) -> frozenset[int]:
    """Elements fixing every vector of the subspace (echelon rows)."""
    members = []
    for e in range(group.order):
        m = group.elements[e]
        if all(mat_apply(m, v) == v for v in subspace):
            members.append(e)
    return frozenset(members)


def parabolic_classes(group: ReflectionGroup) -> list[ParabolicClass]:
    """Conjugacy classes of pointwise stabilizers of subsets of h."""
    stab_cache: dict[tuple, frozenset[int]] = {}

    def stab(subspace) -> frozenset[int]:
        if subspace not in stab_cache:
            stab_cache[subspace] = _pointwise_stabilizer(group, subspace)
        return stab_cache[subspace]

    # lattice of intersections of single-element fixed spaces; for lattice
    # members U = Fix(T) the identity U = Fix(stab(U)) makes intersections
    # computable as Fix(stab(a) | stab(b))
    singles = {_fixed_space(group, [e]) for e in range(group.order)}
    lattice = set(singles)
    frontier = set(singles)
    while frontier:
        new = set()
        for a in frontier:
            for b in singles:
                inter = _fixed_space(group, sorted(stab(a) | stab(b)))
                if inter not in lattice:
                    new.add(inter)
        lattice |= new
        frontier = new
    parabolics: dict[frozenset[int], int] = {}
    for subspace in lattice:
        st = stab(subspace)
        if _fixed_space(group, sorted(st)) == subspace:
            parabolics[st] = len(subspace)
    # conjugacy classes of the parabolic subgroups
    classes: list[ParabolicClass] = []
    seen: set[frozenset[int]] = set()
    for stab in sorted(parabolics, key=lambda s: (len(s), sorted(s))):
        if stab in seen:
            continue
        orbit = {frozenset(group.conjugate(g, e) for e in stab) for g in range(group.order)}
        seen |= orbit
        rep = min(orbit, key=lambda s: sorted(s))
        dim_fix = parabolics[stab]
        classes.append(
            ParabolicClass(
                representative_subgroup=tuple(sorted(rep)),
                class_size=len(orbit),
                fixed_space_dim_h=dim_fix,
                leaf_dim=2 * dim_fix,
            )
        )
    return classes


# -- built-in families and JSON specs -----------------------------------------


def _scalar_matrix(value: CycloNumber, rank: int) -> Matrix:
    order = value.order
    zero = CycloNumber.zero(order)
    return tuple(
        tuple(value if i == j else zero for j in range(rank)) for i in range(rank)
    )


def named_group_spec(name: str) -> GroupSpec:
    if name.startswith("cyclic:"):
        m = int(name.split(":", 1)[1])
        if m < 1:
            raise InputError(f"cyclic order must be >= 1, got {m}")
        order = 1 if m <= 2 else m
        value = CycloNumber.from_rational(-1 if m == 2 else 1) if m <= 2 else make_root(m, 1)
        return GroupSpec(order, 1, (_scalar_matrix(value, 1),))
    if name == "s3-reflection":
        f = lambda q: CycloNumber.from_rational(q)
        s1 = ((f(-1), f(1)), (f(0), f(1)))
        s2 = ((f(1), f(0)), (f(1), f(-1)))
        return GroupSpec(1, 2, (s1, s2))
    if name.startswith("minus-id:"):
        r = int(name.split(":", 1)[1])
        return GroupSpec(1, r, (_scalar_matrix(CycloNumber.from_rational(-1), r),))
    raise InputError(f"unknown group family {name!r}")


def group_spec_from_json(data: dict | str) -> GroupSpec:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        order = int(data["cyclotomic_order"])
        rank = int(data["rank"])
        gens_raw = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed group spec: {exc}") from exc
    gens = []
    for flat in gens_raw:
        if len(flat) != rank * rank:
            raise InputError(f"generator needs {rank * rank} entries, got {len(flat)}")
        entries = [parse_scalar(s, order) for s in flat]
        gens.append(tuple(tuple(entries[i * rank + j] for j in range(rank)) for i in range(rank)))
    return GroupSpec(order, rank, tuple(gens))


def build_group(name_or_spec, cap: int | None = None) -> ReflectionGroup:
    spec = named_group_spec(name_or_spec) if isinstance(name_or_spec, str) else name_or_spec
    return close_group(spec, cap)
