"""Hand-rolled tokenizer and recursive-descent parser for the CLI grammars.

One grammar serves three inputs: scalar literals (`1/2 + 1/3*z3^2`), Laurent
twists (`2*x^-1 + x`), and algebra elements (`x1*y1 + (1/2)*g1`).  Precedence
is ^ over * over binary +/-.  Errors carry 1-based line and column.
"""

from __future__ import annotations

from fractions import Fraction

from .config import InputError
from .scalars import CycloNumber, common_order, embed, make_root


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_OPS = set("+-*^/()")


def tokenize(text: str):
    """Yield (kind, value, line, column); kinds: int, ident, op, end."""
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            tokens.append(("op", ch, line, start_col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(("end", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        if tok[0] != "end":
            self.pos += 1
        return tok

    def error(self, message, tok=None):
        kind, _, line, col = tok or self.peek()
        if kind == "end" and self.pos > 0:
            # blame the construct that ran off the end, not the void after it
            _, _, line, col = self.tokens[self.pos - 1]
        raise ParseError(message, line, col)

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == op:
            return self.next()
        self.error(f"expected {op!r}")

    # expr := term (('+'|'-') term)*
    def parse_expr(self):
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.parse_term()
                node = (tok[1], node, rhs)
            else:
                return node

    # term := factor ('*' factor)*
    def parse_term(self):
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.next()
                node = ("*", node, self.parse_factor())
            else:
                return node

    # factor := atom ('^' ['-'] INT)?
    def parse_factor(self):
        node = self.parse_atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.next()
            sign = 1
            tok2 = self.peek()
            if tok2[0] == "op" and tok2[1] == "-":
                self.next()
                sign = -1
            tok3 = self.next()
            if tok3[0] != "int":
                self.error("expected integer exponent", tok3)
            node = ("pow", node, sign * tok3[1], tok3[2], tok3[3])
        return node

    # atom := INT ('/' INT)? | IDENT | '(' expr ')' | '-' atom
    def parse_atom(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.next()
            return ("neg", self.parse_atom())
        if tok[0] == "int":
            self.next()
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.next()
                den = self.next()
                if den[0] != "int":
                    self.error("expected integer denominator", den)
                if den[1] == 0:
                    self.error("zero denominator", den)
                return ("rat", Fraction(tok[1], den[1]))
            return ("rat", Fraction(tok[1]))
        if tok[0] == "ident":
            self.next()
            return ("ident", tok[1], tok[2], tok[3])
        if tok[0] == "op" and tok[1] == "(":
            self.next()
            node = self.parse_expr()
            closing = self.peek()
            if closing[0] == "op" and closing[1] == ")":
                self.next()
                return node
            self.error("expected ')'")
        self.error("expected a number, identifier or '('")


def parse_ast(text: str):
    p = _Parser(text)
    node = p.parse_expr()
    tok = p.peek()
    if tok[0] != "end":
        p.error(f"unexpected trailing input {tok[1]!r}", tok)
    return node


def _root_orders(node, acc):
    kind = node[0]
    if kind == "ident":
        name = node[1]
        if name.startswith("z") and name[1:].isdigit():
            acc.append(int(name[1:]))
    elif kind in ("+", "-", "*"):
        _root_orders(node[1], acc)
        _root_orders(node[2], acc)
    elif kind in ("neg",):
        _root_orders(node[1], acc)
    elif kind == "pow":
        _root_orders(node[1], acc)
    return acc


def _ident_root(name, line, col, order):
    if name.startswith("z") and name[1:].isdigit():
        n = int(name[1:])
        if order % n:
            raise ParseError(f"root z{n} does not live in Q(zeta_{order})", line, col)
        return embed(make_root(n, 1), order)
    raise ParseError(f"unknown identifier {name!r} in scalar", line, col)


def _eval_scalar(node, order: int) -> CycloNumber:
    kind = node[0]
    if kind == "rat":
        return CycloNumber.from_rational(node[1], order)
    if kind == "ident":
        return _ident_root(node[1], node[2], node[3], order)
    if kind == "neg":
        return -_eval_scalar(node[1], order)
    if kind == "pow":
        base = _eval_scalar(node[1], order)
        k = node[2]
        if k < 0:
            return _pow(base.inverse(), -k, order)
        return _pow(base, k, order)
    a = _eval_scalar(node[1], order)
    b = _eval_scalar(node[2], order)
    if kind == "+":
        return a + b
    if kind == "-":
        return a - b
    if kind == "*":
        return a * b
    raise AssertionError(kind)


def _pow(base: CycloNumber, k: int, order: int) -> CycloNumber:
    acc = CycloNumber.one(order)
    for _ in range(k):
        acc = acc * base
    return acc


def parse_scalar_text(text: str, order: int | None = None) -> CycloNumber:
    node = parse_ast(text)
    needed = common_order(*(_root_orders(node, [1])))
    target = order if order is not None else needed
    if target % needed:
        raise InputError(f"scalar {text!r} needs order {needed}, not a divisor of {target}")
    return _eval_scalar(node, target)


def parse_twist_text(text: str, order: int) -> dict[int, CycloNumber]:
    """Laurent polynomial in x over Q(zeta_order): dict exponent -> coefficient."""
    node = parse_ast(text)

    def ev(n) -> dict[int, CycloNumber]:
        kind = n[0]
        if kind == "rat":
            c = CycloNumber.from_rational(n[1], order)
            return {0: c} if c else {}
        if kind == "ident":
            if n[1] == "x":
                return {1: CycloNumber.one(order)}
            return {0: _ident_root(n[1], n[2], n[3], order)}
        if kind == "neg":
            return {e: -c for e, c in ev(n[1]).items()}
        if kind == "pow":
            inner = ev(n[1])
            if len(inner) == 1 and list(inner.values())[0] == CycloNumber.one(order):
                (e,) = inner
                return {e * n[2]: CycloNumber.one(order)}
            if n[2] < 0:
                raise ParseError("negative power of a non-monomial", n[3], n[4])
            acc = {0: CycloNumber.one(order)}
            for _ in range(n[2]):
                acc = _laurent_mul(acc, inner)
            return acc
        a, b = ev(n[1]), ev(n[2])
        if kind == "+":
            return _laurent_add(a, b, 1)
        if kind == "-":
            return _laurent_add(a, b, -1)
        if kind == "*":
            return _laurent_mul(a, b)
        raise AssertionError(kind)

    return ev(node)


def _laurent_add(a, b, sign):
    out = dict(a)
    for e, c in b.items():
        cur = out.get(e)
        val = (cur + c) if (cur is not None and sign > 0) else None
        if cur is None:
            val = c if sign > 0 else -c
        elif sign < 0:
            val = cur - c
        if val:
            out[e] = val
        else:
            out.pop(e, None)
    return out


def _laurent_mul(a, b):
    out: dict[int, CycloNumber] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            v = c1 * c2
            if e in out:
                v = out[e] + v
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def parse_element_text(text: str, ctx):
    """Parse the algebra-element grammar into a PBWElement over ctx."""
    from .pbw import PBWElement  # runtime import: pbw depends on scalars only

    node = parse_ast(text)
    order = ctx.order
    rank = ctx.rank

    def ident_elem(name, line, col):
        if name == "s":
            if not ctx.reflections:
                raise ParseError("context has no reflections; 's' undefined", line, col)
            return ctx.group_element(ctx.reflections[0].element_index)
        if name.startswith(("x", "y")) and name[1:].isdigit():
            idx = int(name[1:])
            if not 1 <= idx <= rank:
                raise ParseError(f"{name!r} out of range for rank {rank}", line, col)
            return ctx.x_elem(idx - 1) if name[0] == "x" else ctx.y_elem(idx - 1)
        if name.startswith("g") and name[1:].isdigit():
            k = int(name[1:])
            if not 0 <= k < ctx.group.order:
                raise ParseError(f"group index {k} out of range 0..{ctx.group.order - 1}", line, col)
            return ctx.group_element(k)
        if name.startswith("z") and name[1:].isdigit():
            return ctx.scalar_elem(_ident_root(name, line, col, order))
        raise ParseError(f"unknown identifier {name!r}", line, col)

    def ev(n) -> "PBWElement":
        kind = n[0]
        if kind == "rat":
            return ctx.scalar_elem(CycloNumber.from_rational(n[1], order))
        if kind == "ident":
            return ident_elem(n[1], n[2], n[3])
        if kind == "neg":
            return -ev(n[1])
        if kind == "pow":
            if n[2] < 0:
                raise ParseError("negative powers are not algebra elements", n[3], n[4])
            base = ev(n[1])
            acc = ctx.one_elem()
            for _ in range(n[2]):
                acc = ctx.multiply(acc, base)
            return acc
        a, b = ev(n[1]), ev(n[2])
        if kind == "+":
            return a + b
        if kind == "-":
            return a - b
        if kind == "*":
            return ctx.multiply(a, b)
        raise AssertionError(kind)

    return ev(node)
