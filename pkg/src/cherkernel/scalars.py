"""Exact arithmetic in Q and the cyclotomic fields Q(zeta_N).

A CycloNumber of order N is a polynomial in zeta_N reduced modulo the N-th
cyclotomic polynomial, with Fraction coefficients.  The power basis modulo
Phi_N gives unique canonical forms, so equality of values is equality of
coefficient tuples.  Arithmetic never mixes orders implicitly: callers embed
into a common order first (see `embed`, `common_order`).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .config import DEFAULT, InputError

Rational = Fraction


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    """Quotient and remainder of dense coefficient lists (low degree first)."""
    num = list(num)
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, low degree first, monic."""
    if n < 1:
        raise InputError(f"cyclotomic order must be >= 1, got {n}")
    # x^n - 1 divided by the product of Phi_d over proper divisors d of n
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert r == [Fraction(0)], f"Phi_{d} does not divide x^{n}-1"
            poly = q
    return tuple(poly)


@lru_cache(maxsize=None)
def _phi_degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_reductions(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """zeta_n^e in the power basis, for e up to 2*deg-2 (enough for products)."""
    deg = _phi_degree(n)
    phi = cyclotomic_polynomial(n)
    rows = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(2 * deg - 1):
        rows.append(tuple(cur))
        # multiply by zeta and reduce: zeta^deg = -(phi minus leading term)
        lead = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if lead:
            for j in range(deg):
                cur[j] -= lead * phi[j]
    return tuple(rows)


class CycloNumber:
    """Element of Q(zeta_N), immutable, canonical."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 1 or order > DEFAULT.max_cyclotomic_order:
            raise InputError(
                f"cyclotomic order {order} outside supported range 1..{DEFAULT.max_cyclotomic_order}"
            )
        deg = _phi_degree(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != deg:
            raise InputError(f"order {order} needs {deg} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("CycloNumber is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, q, order: int = 1) -> "CycloNumber":
        deg = _phi_degree(order)
        return cls(order, (Fraction(q),) + (Fraction(0),) * (deg - 1))

    @classmethod
    def zero(cls, order: int = 1) -> "CycloNumber":
        return cls.from_rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CycloNumber":
        return cls.from_rational(1, order)

    # -- basic structure ---------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CycloNumber)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def _check(self, other: "CycloNumber"):
        if not isinstance(other, CycloNumber):
            raise TypeError(f"expected CycloNumber, got {type(other).__name__}")
        if self.order != other.order:
            raise InputError(
                f"mixed cyclotomic orders {self.order} and {other.order}; embed explicitly first"
            )

    # -- field operations --------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return CycloNumber(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CycloNumber(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycloNumber(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        deg = len(self.coeffs)
        if deg == 1:
            return CycloNumber(self.order, (self.coeffs[0] * other.coeffs[0],))
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        red = _power_reductions(self.order)
        out = [Fraction(0)] * deg
        for e, c in enumerate(prod):
            if c:
                row = red[e]
                for j in range(deg):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloNumber(self.order, out)

    def inverse(self) -> "CycloNumber":
        if not self:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        deg = len(self.coeffs)
        if deg == 1:
            return CycloNumber(self.order, (1 / self.coeffs[0],))
        # extended Euclid in Q[x]: s*self + t*Phi = 1
        phi = list(cyclotomic_polynomial(self.order))
        a = list(self.coeffs)
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod(r0, r1)
            # s_next = s0 - q*s1
            s_next = list(s0) + [Fraction(0)] * max(0, len(q) + len(s1) - 1 - len(s0))
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        if sj:
                            s_next[i + j] -= qi * sj
            while len(s_next) > 1 and s_next[-1] == 0:
                s_next.pop()
            r0, r1, s0, s1 = r1, r, s1, s_next
        unit = r0[0]  # gcd is a nonzero constant since Phi_N is irreducible
        inv = [c / unit for c in s0]
        inv = (inv + [Fraction(0)] * deg)[:deg]
        return CycloNumber(self.order, inv)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    # -- queries ------------------------------------------------------------

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction when it lies in Q, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def is_integer_multiple_of(self, m: int) -> int | None:
        """Return k with self == m*k when that holds over Z, else None."""
        q = self.as_rational()
        if q is None or q.denominator != 1 or q.numerator % m:
            return None
        return q.numerator // m

    def galois_conjugate(self, a: int) -> "CycloNumber":
        """Image under zeta |-> zeta^a, for gcd(a, order) == 1."""
        if gcd(a, self.order) != 1:
            raise InputError(f"{a} is not invertible modulo {self.order}")
        zeta_a = make_root(self.order, a)
        acc = CycloNumber.zero(self.order)
        power = CycloNumber.one(self.order)
        for c in self.coeffs:
            if c:
                acc = acc + power * CycloNumber.from_rational(c, self.order)
            power = power * zeta_a
        return acc

    def __repr__(self):
        return f"CycloNumber({self.order}, {format_scalar(self)!r})"


def make_root(order: int, k: int = 1) -> CycloNumber:
    """zeta_order^k in canonical form."""
    if order < 1:
        raise InputError(f"order must be >= 1, got {order}")
    deg = _phi_degree(order)
    k %= order
    red = _power_reductions(order)
    if k < len(red):
        return CycloNumber(order, red[k])
    acc = CycloNumber.one(order)
    z = make_root(order, 1)
    for _ in range(k):
        acc = acc * z
    return acc


def embed(a: CycloNumber, order: int) -> CycloNumber:
    """The same value inside Q(zeta_order); requires a.order | order."""
    if order % a.order:
        raise InputError(f"cannot embed order {a.order} into non-multiple order {order}")
    if order == a.order:
        return a
    step = make_root(order, order // a.order)
    acc = CycloNumber.zero(order)
    power = CycloNumber.one(order)
    for c in a.coeffs:
        if c:
            acc = acc + power * CycloNumber.from_rational(c, order)
        power = power * step
    return acc


def reduce_order(a: CycloNumber) -> CycloNumber:
    """The same value in the smallest cyclotomic subfield Q(zeta_d), d | order."""
    for d in sorted(k for k in range(1, a.order + 1) if a.order % k == 0):
        if d == a.order:
            return a
        # fixed by Gal(Q(zeta_N)/Q(zeta_d)) = {zeta -> zeta^a : a = 1 mod d}?
        fixed = all(
            a.galois_conjugate(t) == a
            for t in range(1, a.order)
            if gcd(t, a.order) == 1 and t % d == 1
        )
        if not fixed:
            continue
        # solve for coordinates in the zeta_d power basis
        basis = []
        power = CycloNumber.one(a.order)
        step = make_root(a.order, a.order // d)
        for _ in range(_phi_degree(d)):
            basis.append(power)
            power = power * step
        sol = _solve_in_span(basis, a)
        if sol is not None:
            return CycloNumber(d, sol)
    return a


def _solve_in_span(basis: list[CycloNumber], target: CycloNumber):
    """Rational coordinates of target in span(basis), or None."""
    ncols = len(basis)
    nrows = len(target.coeffs)
    rows = [[b.coeffs[i] for b in basis] + [target.coeffs[i]] for i in range(nrows)]
    piv = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pr is None:
            return None  # basis is independent, so every column must pivot
        rows[r], rows[pr] = rows[pr], rows[r]
        pivval = rows[r][c]
        rows[r] = [v / pivval for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    for i in range(r, nrows):
        if rows[i][-1]:
            return None
    return tuple(rows[i][-1] for i in range(ncols))


def common_order(*orders: int) -> int:
    n = 1
    for o in orders:
        n = n * o // gcd(n, o)
    if n > DEFAULT.max_cyclotomic_order:
        raise InputError(f"combined cyclotomic order {n} exceeds cap {DEFAULT.max_cyclotomic_order}")
    return n


# -- textual form -----------------------------------------------------------


def format_scalar(a: CycloNumber | Fraction | int) -> str:
    """Canonical text: `a/b` for rationals, sums of `q*zN^k` otherwise."""
    if isinstance(a, (int, Fraction)):
        return str(Fraction(a))
    q = a.as_rational()
    if q is not None:
        return str(q)
    parts = []
    for k, c in enumerate(a.coeffs):
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            z = f"z{a.order}" + (f"^{k}" if k > 1 else "")
            body = z if mag == 1 else f"{mag}*{z}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_scalar(text: str, order: int | None = None) -> CycloNumber:
    """Parse the scalar grammar: rationals, zN^k, combined with + - *.

    The result is embedded into `order` when given, else into the lcm of the
    root orders appearing in the text.
    """
    from .exprparse import parse_scalar_text  # local import to avoid a cycle

    return parse_scalar_text(text, order)
