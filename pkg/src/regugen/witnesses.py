"""Explicit generation witnesses and the engine that replays their claims."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import lru_cache

from .chain import ChainBudgetExceeded, build_chain, element_order
from .formulas import order_of
from .galois import FieldScalar, field_of_size
from .genfile import parse_generators
from .groups import GroupSpec, default_form, is_member, parse_group, universe_of
from .matrices import (
    FormDescriptor,
    Matrix,
    elementary,
    irreducible_by_spinning,
    is_regular_unipotent,
    is_unipotent,
    jordan_block,
    jordan_type,
    split_symplectic_gram,
    t2r_conjugator,
)
from .perms import Perm
from .report import COMPUTED, DIRECT, FAIL, INCONCLUSIVE, PUBLISHED, Report, timed


class WitnessError(ValueError):
    pass


# ---------------------------------------------------------------------------
# words: products, integer powers, inverses, commutators [a,b] = a b a^-1 b^-1,
# conjugates a^b = b^-1 a b

_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_]\w*)|(.))")


def _tokens(text):
    out = []
    for num, name, sym in _TOKEN.findall(text):
        if num:
            out.append(("int", int(num)))
        elif name:
            out.append(("name", name))
        elif sym.strip():
            out.append(("sym", sym))
    return out


class _WordParser:
    def __init__(self, text, env):
        self.toks = _tokens(text)
        self.i = 0
        self.env = env
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise WitnessError(f"cannot parse word {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.i != len(self.toks):
            raise WitnessError(f"trailing input in word {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() == ("sym", "*"):
            self.take()
            v = v @ self.term()
        return v

    def term(self):
        v = self.atom()
        while self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.peek()
            if kind == "int":
                self.take()
                v = v ** val
            elif kind == "sym" and val == "-":
                self.take()
                v = v ** (-self.take("int")[1])
            else:
                b = self.atom()
                v = b.inverse() @ v @ b
        return v

    def atom(self):
        kind, val = self.peek()
        if kind == "name":
            self.take()
            if val not in self.env:
                raise WitnessError(f"word {self.text!r} uses undefined name {val!r}")
            return self.env[val]
        if (kind, val) == ("sym", "("):
            self.take()
            v = self.expr()
            self.take("sym", ")")
            return v
        if (kind, val) == ("sym", "["):
            self.take()
            a = self.expr()
            self.take("sym", ",")
            b = self.expr()
            self.take("sym", "]")
            return a @ b @ a.inverse() @ b.inverse()
        raise WitnessError(f"cannot parse word {self.text!r}")


def evaluate_word(text, env):
    return _WordParser(text, env).parse()


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class Assertion:
    kind: str  # order | equals | differs | jordan | member | regular | generates | subgroup-order | irreducible | t2r
    words: tuple = ()
    expected: object = None
    label: str = ""
    basis: str = PUBLISHED

    @property
    def name(self):
        if self.label:
            return self.label
        return f"{self.kind} {' , '.join(self.words)}".strip()


@dataclass
class WitnessSpec:
    id: str
    group: GroupSpec | None
    anchor: str
    elements: list  # (name, Matrix | Perm | word text)
    assertions: list
    members: tuple = ()  # names whose membership in the group is a prerequisite
    note: str = ""

    def environment(self):
        env = {}
        for name, defn in self.elements:
            env[name] = evaluate_word(defn, env) if isinstance(defn, str) else defn
        return env


def _build(name, group, anchor, elements, assertions, members=(), note=""):
    return WitnessSpec(name, group, anchor, list(elements), list(assertions), tuple(members), note)


def _gf9():
    return field_of_size(9)


def _sl2_9():
    F = _gf9()
    a = jordan_block(F, 2)
    b = Matrix.from_rows(F, [[1, 0], ["b", 1]])
    spec = parse_group("SL(2,9)")
    return _build(
        "sl2-9", spec, "SL2(9) from a = J2 and b lower unitriangular with b^2 = b+1",
        [("a", a), ("b", b)],
        [
            Assertion("order", ("a*b^2",), 8),
            Assertion("order", ("[a,b]",), 10, label="order [a,b] = a*b*a^-1*b^-1"),
            Assertion("order", ("a^-1*b^-1*a*b",), 10, label="order [a,b] reversed convention"),
            Assertion("generates", ("a", "b"), order_of("SL", 2, 9)),
        ],
        members=("a", "b"),
        note="both commutator conventions give order 10",
    )


def _perm(text, n=8):
    return Perm.from_cycles(text, n)


def _sl4_2():
    spec = GroupSpec("Perm", 8, None, None, None, "Alt(8)", 20160)
    return _build(
        "sl4-2", spec, "SL4(2) = Alt(8): g = (1,2,3,4)(5,6) and its conjugate under t",
        [("g", _perm("(1,2,3,4)(5,6)")), ("t", _perm("(2,5,8,4,6,3,7)")), ("h", "t^-1*g*t"),
         ("h_claim", _perm("(1,7,6,8)(2,4)")), ("w_claim", _perm("(1,7,6,8,3)"))],
        [
            Assertion("equals", ("h", "h_claim")),
            Assertion("equals", ("g^2*h", "w_claim")),
            Assertion("order", ("g^2*h",), 5),
            Assertion("generates", ("g", "h"), order_of("SL", 4, 2)),
        ],
    )


def _sp4_2():
    spec = GroupSpec("Perm", 6, None, None, None, "Sym(6)", 720)
    return _build(
        "sp4-2", spec, "Sp4(2) = Sym(6): g = (1,2,3,4) and its conjugate under t",
        [("g", _perm("(1,2,3,4)", 6)), ("t", _perm("(2,6,4,5,3)", 6)), ("h", "t^-1*g*t"),
         ("h_claim", _perm("(1,3,5,6)", 6)), ("w_claim", _perm("(3,6,5)", 6))],
        [
            Assertion("equals", ("h", "h_claim")),
            Assertion("equals", ("(g^2*h)^2", "w_claim")),
            Assertion("generates", ("g", "h"), order_of("Sp", 4, 2)),
        ],
    )


def _levi_pair(F, n):
    J = jordan_block(F, n)
    return Matrix.block_diag(J, J.T.inverse())


def _sp6_9():
    F = _gf9()
    a = split_symplectic_gram(F, 3)
    x = _levi_pair(F, 3)
    y = elementary(F, 6, 2, 5, FieldScalar(F, F.beta))
    spec = parse_group("Sp(6,9)")
    return _build(
        "sp6-9", spec, "Sp6(9) with Gram (0 I / -I 0): u = xy, v = h^-1 u h, h = (ax)^2 a",
        [("a", a), ("x", x), ("y", y), ("u", "x*y"), ("h", "(a*x)^2*a"), ("v", "h^-1*u*h")],
        [
            Assertion("regular", ("u",), [6]),
            Assertion("order", ("u*v",), 120),
            Assertion("order", ("u*v*u",), 164),
            Assertion("order", ("u*v*u^2",), 146),
            Assertion("order", ("u*v^2*u",), 728),
            Assertion("generates", ("u", "v"), order_of("Sp", 6, 9)),
        ],
        members=("x", "y", "u", "h", "v"),
    )


def _su4_3():
    F = _gf9()
    u = Matrix.from_rows(F, [[0, 1, 0, 0], [0, 0, 0, "b^2"], ["b^2", "b^6", 0, 0], [0, 0, 1, 1]])
    x = Matrix.diag(F, ["b^7", "b^5", "b", "b^3"])
    spec = parse_group("SU(4,3)")
    return _build(
        "su4-3", spec, "SU4(3) with antidiagonal Gram: u as printed, v = x^-1 u x",
        [("u", u), ("x", x), ("v", "x^-1*u*x")],
        [
            Assertion("member", ("u",), True),
            Assertion("regular", ("u",), [4]),
            Assertion("order", ("u*v^6",), 28),
            Assertion("order", ("u^2*v^6",), 36),
            Assertion("generates", ("u", "v"), order_of("SU", 4, 3)),
        ],
        members=("u", "x", "v"),
    )


def _su5_3():
    F = _gf9()
    u = Matrix.from_rows(F, [[1, 1, 0, 0, 0], [0, 1, 1, 1, 2], [0, 0, 1, 2, 1], [0, 0, 0, 1, 2], [0, 0, 0, 0, 1]])
    x = Matrix.from_rows(F, [[0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0], [0, 1, 0, "b^2", 0],
                             [1, 0, 0, 0, "b^2"]])
    spec = parse_group("SU(5,3)")
    return _build(
        "su5-3", spec, "SU5(3) with antidiagonal Gram: u as printed, v = x^-1 u x",
        [("u", u), ("x", x), ("v", "x^-1*u*x")],
        [
            Assertion("regular", ("u",), [5]),
            Assertion("order", ("u*v",), 80),
            Assertion("order", ("u*v^3",), 61),
            Assertion("order", ("u*v^5",), 28),
            Assertion("generates", ("u", "v"), order_of("SU", 5, 3)),
        ],
        members=("u", "x", "v"),
    )


def _cycle_matrix(F, cycle, n, orientation):
    """Permutation matrix of a cycle on basis vectors.

    ``orientation`` "maps" sends b_i to b_next (column i has its 1 in row next);
    "rows" is the transpose.
    """
    rows = [[0] * n for _ in range(n)]
    image = {i: i for i in range(n)}
    for k, c in enumerate(cycle):
        image[c] = cycle[(k + 1) % len(cycle)]
    for i, j in image.items():
        if orientation == "maps":
            rows[j][i] = 1
        else:
            rows[i][j] = 1
    return Matrix.from_rows(F, rows)


def _uu4_elements(q, orientation):
    F = field_of_size(q * q)
    a = FieldScalar(F, F.power(F.beta, q - 1))
    ai = a.value
    inv = lambda e: FieldScalar(F, F.power(ai, e % (q + 1)))  # noqa: E731
    h = Matrix.diag(F, [a, a, a, inv(-3)])
    d = Matrix.diag(F, [inv(-8), inv(4), 1, inv(4)])
    x = _cycle_matrix(F, [0, 1, 2, 3], 4, orientation)
    y = _cycle_matrix(F, [1, 2, 3], 4, orientation)
    scal = Matrix.diag(F, [a] * 4)
    return F, scal, h, d, x, y


@lru_cache(maxsize=None)
def uu4_orientation(q):
    """Orientation of the permutation matrices for which the printed identity holds."""
    for orientation in ("maps", "rows"):
        F, _, h, _, x, y = _uu4_elements(q, orientation)
        yh = y @ h
        x1 = yh @ x @ yh.inverse()
        if x @ x @ (x @ x1) ** 3 @ x.inverse() @ x.inverse() == h ** -4:
            return orientation
    return "maps"


def _su4_even(q):
    orientation = uu4_orientation(q)
    F, scal, h, d, x, y = _uu4_elements(q, orientation)
    spec = GroupSpec("SU", 4, q, FormDescriptor.hermitian(Matrix.identity(F, 4)), None, f"SU(4,{q})")
    I = Matrix.identity(F, 4)
    return _build(
        f"su4-even({q})", spec, f"SU4({q}) with identity Gram: x a 4-cycle, x1 = (yh) x (yh)^-1",
        [("a", scal), ("h", h), ("d", d), ("x", x), ("y", y), ("x1", "(y*h)*x*(y*h)^-1"), ("I", I)],
        [
            Assertion("order", ("a",), q + 1, label="order of a (as a scalar matrix)"),
            Assertion("equals", ("x^4", "I")),
            Assertion("differs", ("x^2", "I")),
            Assertion("regular", ("x",), [4]),
            Assertion("equals", ("x^2*(x*x1)^3*x^-2", "h^-4")),
            Assertion("equals", ("d*(x1*x)^2", "y")),
            Assertion("subgroup-order", ("x", "x1"), 24 * (q + 1) ** 3),
        ],
        members=("h", "d", "x", "y", "x1"),
        note=f"permutation matrices use the {orientation!r} orientation"
        + (" (b_i -> b_(i+1) as a map on column vectors)" if orientation == "maps" else " (transposed)"),
    )


def _pa2(n, q):
    F = field_of_size(q)
    x = _levi_pair(F, n)
    y = elementary(F, 2 * n, n - 1, 2 * n - 1, 1)
    spec = GroupSpec("Sp", 2 * n, q, label=f"Sp({2 * n},{q})")
    spec.form = default_form(spec)
    return _build(
        f"pa2({n},{q})", spec, f"Sp{2 * n}({q}) parabolic: u = diag(J, tJ^-1) (I + E_(n,2n))",
        [("x", x), ("y", y), ("u", "x*y")],
        [Assertion("member", ("u",), True), Assertion("jordan", ("u",), [2 * n])],
        members=("x", "y"),
    )


def _md8(n, q):
    F = field_of_size(q)
    J = jordan_block(F, n)
    spec = GroupSpec("SL", n, q, label=f"SL({n},{q})")
    return _build(
        f"md8({n},{q})", spec, "upper and lower Jordan blocks generate an irreducible group",
        [("g", J), ("h", J.T)],
        [Assertion("irreducible", ("g", "h"), True, basis=DIRECT)],
    )


def _t2r(n, q):
    spec = GroupSpec("SL", n, q, label=f"SL({n},{q})")
    return _build(
        f"t2r({n},{q})", spec, "transpose of J_n is SL-conjugate to J_n or J_n^-1",
        [], [Assertion("t2r", (), True, basis=DIRECT)],
    )


PA2_CASES = ((3, 2), (3, 3), (4, 2), (3, 9))
MD8_CASES = tuple((n, q) for n in range(2, 6) for q in (2, 3, 4, 5))
T2R_CASES = tuple((n, q) for n in range(2, 10) for q in (2, 3, 5, 9))

_FACTORIES = {
    "sl2-9": _sl2_9,
    "sl4-2": _sl4_2,
    "sp4-2": _sp4_2,
    "sp6-9": _sp6_9,
    "su4-3": _su4_3,
    "su5-3": _su5_3,
    "su4-even(4)": lambda: _su4_even(4),
    "su4-even(8)": lambda: _su4_even(8),
}
for _n, _q in PA2_CASES:
    _FACTORIES[f"pa2({_n},{_q})"] = (lambda n, q: lambda: _pa2(n, q))(_n, _q)
for _n, _q in MD8_CASES:
    _FACTORIES[f"md8({_n},{_q})"] = (lambda n, q: lambda: _md8(n, q))(_n, _q)
for _n, _q in T2R_CASES:
    _FACTORIES[f"t2r({_n},{_q})"] = (lambda n, q: lambda: _t2r(n, q))(_n, _q)

GENERATION_WITNESSES = ("sl2-9", "sl4-2", "sp4-2", "sp6-9", "su4-3", "su5-3", "su4-even(4)", "su4-even(8)")


def witness_ids():
    return list(_FACTORIES)


def get_witness(wid):
    try:
        return _FACTORIES[wid]()
    except KeyError:
        raise WitnessError(f"unknown witness {wid!r}") from None


def catalog():
    return [f() for f in _FACTORIES.values()]


# ---------------------------------------------------------------------------
# verification


def _membership(g, spec):
    if spec is None:
        return True
    if isinstance(g, Perm):
        if g.degree > spec.n:
            return False
        even = sum(len(c) - 1 for c in g.cycles()) % 2 == 0
        return even or not (spec.label or "").startswith("Alt")
    if spec.family not in ("SL", "SU", "Sp"):
        return True
    if spec.family == "SL":
        return g.det() == 1
    return is_member(g, spec)


def _group_order(w, gens, target, budget):
    U = universe_of(gens)
    chain = build_chain(gens, U, target=target, budget=budget)
    return chain.order()


def _check(w, env, a, budget):
    ev = lambda t: evaluate_word(t, env)  # noqa: E731
    k = a.kind
    if k == "order":
        return element_order(ev(a.words[0]))
    if k == "equals":
        return ev(a.words[0]) == ev(a.words[1])
    if k == "differs":
        return ev(a.words[0]) != ev(a.words[1])
    if k == "jordan":
        g = ev(a.words[0])
        return jordan_type(g) if is_unipotent(g) else "not unipotent"
    if k == "regular":
        g = ev(a.words[0])
        if not is_unipotent(g):
            return "not unipotent"
        jt = jordan_type(g)
        return jt if is_regular_unipotent(g, w.group) else f"{jt} (not regular)"
    if k == "member":
        return _membership(ev(a.words[0]), w.group)
    if k == "generates":
        gens = [ev(t) for t in a.words]
        # the expected order bounds the group from above when every generator is a member
        bound = a.expected if all(_membership(g, w.group) for g in gens) else None
        return _group_order(w, gens, bound, budget)
    if k == "subgroup-order":
        return _group_order(w, [ev(t) for t in a.words], None, budget)
    if k == "irreducible":
        res = irreducible_by_spinning([ev(t) for t in a.words])
        if res.irreducible is None:
            raise ChainBudgetExceeded(res.status)
        return res.irreducible
    if k == "t2r":
        rep = t2r_conjugator(w.group.n, w.group.q)
        return rep["ok"]
    raise WitnessError(f"unknown assertion kind {k!r}")


def _show(x):
    return str(x) if isinstance(x, (Matrix, Perm)) else x


def verify(w, budget=None):
    """Reports for the membership prerequisites and every assertion, in order."""
    from .chain import DEFAULT_BUDGET

    budget = budget or DEFAULT_BUDGET
    reports = []
    try:
        env = w.environment()
    except Exception as e:  # malformed entry
        return [Report(f"{w.id}/elements", FAIL, "well-formed elements", str(e))]
    for name in w.members:
        with timed() as t:
            ok = _membership(env[name], w.group)
        reports.append(Report.compare(f"{w.id}/member {name}", True, ok, DIRECT, runtime_ms=t["ms"]))
    for a in w.assertions:
        cid = f"{w.id}/{a.name}"
        expected = a.expected
        if a.kind in ("equals",):
            expected = True
        if a.kind == "differs":
            expected = True
        try:
            with timed() as t:
                actual = _check(w, env, a, budget)
        except ChainBudgetExceeded as e:
            reports.append(Report(cid, INCONCLUSIVE, expected, None, a.basis, detail=str(e)))
            continue
        basis = COMPUTED if a.kind == "subgroup-order" and a.basis == DIRECT else a.basis
        reports.append(Report.compare(cid, expected, actual, basis, runtime_ms=t["ms"]))
    return reports


# ---------------------------------------------------------------------------
# mutation and user files


def corrupt_entry(w, name, i, j, value):
    """Copy of ``w`` with one matrix entry replaced."""
    elements = []
    hit = False
    for nm, defn in w.elements:
        if nm == name and isinstance(defn, Matrix):
            rows = [list(r) for r in defn.a]
            rows[i][j] = value.value if isinstance(value, FieldScalar) else defn.field.parse(str(value))
            defn = Matrix(defn.field, rows)
            hit = True
        elements.append((nm, defn))
    if not hit:
        raise WitnessError(f"no matrix named {name!r} in {w.id}")
    return replace(w, id=w.id + "~mutant", elements=elements)


def beta_squared_mutant(w):
    """Replace the first entry equal to b by b^2."""
    for nm, defn in w.elements:
        if isinstance(defn, Matrix):
            F = defn.field
            for i in range(defn.n):
                for j in range(defn.n):
                    if int(defn.a[i, j]) == F.beta:
                        return corrupt_entry(w, nm, i, j, FieldScalar(F, F.power(F.beta, 2)))
    raise WitnessError(f"{w.id} has no entry equal to b")


_ASSERT = re.compile(r"^(\w[\w-]*)\s+(.*?)(?:\s*=\s*(.+))?$")


def load_witness(text, wid="user"):
    """Witness from a generator file with ``group``, ``word:`` and ``assert:`` lines.

    Assertion syntax: ``order W = n``, ``jordan W = 4,2``, ``regular W``,
    ``member W``, ``equals W1 = W2``, ``generates W1, W2 = N``,
    ``subgroup-order W1, W2 = N``, ``irreducible W1, W2``.
    """
    words, body = [], []
    for ln in text.splitlines():
        s = ln.strip()
        if s.startswith("word:"):
            name, _, defn = s[5:].partition("=")
            words.append((name.strip(), defn.strip()))
        else:
            body.append(ln)
    gf = parse_generators("\n".join(body))
    group = parse_group(gf.group) if gf.group else None
    elements = [(n, e) for n, e in gf.elements] + words
    if any(n is None for n, _ in elements):
        raise WitnessError("witness elements must be named")
    assertions = []
    for line in gf.asserts:
        m = _ASSERT.match(line)
        if not m:
            raise WitnessError(f"bad assertion {line!r}")
        kind, lhs, rhs = m.group(1), m.group(2).strip(), m.group(3)
        if kind == "order":
            assertions.append(Assertion("order", (lhs,), int(rhs), basis=DIRECT))
        elif kind in ("jordan", "regular"):
            exp = [int(x) for x in rhs.split(",")] if rhs else None
            if kind == "regular" and exp is None:
                from .matrices import regular_unipotent_type

                exp = regular_unipotent_type(group.family, group.n, group.q)
            assertions.append(Assertion(kind, (lhs,), exp, basis=DIRECT))
        elif kind == "member":
            assertions.append(Assertion("member", (lhs,), True, basis=DIRECT))
        elif kind in ("equals", "differs"):
            assertions.append(Assertion(kind, (lhs, rhs.strip()), True, basis=DIRECT))
        elif kind in ("generates", "subgroup-order"):
            ws = tuple(t.strip() for t in lhs.split(","))
            assertions.append(Assertion(kind, ws, int(rhs), basis=DIRECT))
        elif kind == "irreducible":
            assertions.append(Assertion("irreducible", tuple(t.strip() for t in lhs.split(",")), True,
                                        basis=DIRECT))
        else:
            raise WitnessError(f"unknown assertion kind {kind!r}")
    return _build(wid, group, "user supplied", elements, assertions)
