"""Group order formulas, closed-form structure constants and counting inequalities."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .exact import QuadraticSurd, surd_eval
from .galois import prime_power


class FormulaError(ValueError):
    pass


class DomainError(FormulaError):
    pass


# ---------------------------------------------------------------------------
# orders


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _odd_power(q, p):
    """m with q = p^(2m+1), or None."""
    pp = prime_power(q)
    if pp is None or pp[0] != p or pp[1] % 2 == 0:
        return None
    return (pp[1] - 1) // 2


def order_of(family, n=None, q=None):
    """Exact group order.

    For SU the parameter q is the base field size.  For Sz, 2G2 and 2F4 the
    parameter q is the defining field size 2^(2m+1) or 3^(2m+1).  E6 and 2E6
    give the simple groups; n is ignored for the exceptional families.
    """
    if q is None or q < 2 or prime_power(q) is None:
        raise FormulaError(f"q={q} is not a prime power")
    if family == "SL":
        return q ** (n * (n - 1) // 2) * _prod(q**i - 1 for i in range(2, n + 1))
    if family == "SU":
        return q ** (n * (n - 1) // 2) * _prod(q**i - (-1) ** i for i in range(2, n + 1))
    if family == "Sp":
        if n % 2:
            raise FormulaError("Sp needs even dimension")
        m = n // 2
        return q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if family == "OmegaOdd":
        if n % 2 == 0:
            raise FormulaError("OmegaOdd needs odd dimension")
        m = (n - 1) // 2
        return q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1)) // gcd(2, q - 1)
    if family in ("OmegaPlus", "OmegaMinus"):
        if n % 2:
            raise FormulaError(f"{family} needs even dimension")
        m = n // 2
        eps = 1 if family == "OmegaPlus" else -1
        base = q ** (m * (m - 1)) * (q**m - eps) * _prod(q ** (2 * i) - 1 for i in range(1, m))
        return base // gcd(2, q - 1)
    if family == "G2":
        return q**6 * (q**6 - 1) * (q**2 - 1)
    if family == "F4":
        return q**24 * (q**12 - 1) * (q**8 - 1) * (q**6 - 1) * (q**2 - 1)
    if family in ("E6", "2E6"):
        s = 1 if family == "E6" else -1
        full = q**36 * (q**12 - 1) * (q**9 - s) * (q**8 - 1) * (q**6 - 1) * (q**5 - s) * (q**2 - 1)
        return full // gcd(3, q - s)
    if family == "3D4":
        return q**12 * (q**8 + q**4 + 1) * (q**6 - 1) * (q**2 - 1)
    if family == "Sz":
        if _odd_power(q, 2) is None:
            raise FormulaError("Sz needs q = 2^(2m+1)")
        return q**2 * (q**2 + 1) * (q - 1)
    if family == "2G2":
        if _odd_power(q, 3) is None:
            raise FormulaError("2G2 needs q = 3^(2m+1)")
        return q**3 * (q**3 + 1) * (q - 1)
    if family == "2F4":
        if _odd_power(q, 2) is None:
            raise FormulaError("2F4 needs q = 2^(2m+1)")
        Q = q  # Q plays the role of q^2 in the usual notation
        return Q**12 * (Q - 1) * (Q**3 + 1) * (Q**4 - 1) * (Q**6 + 1)
    raise FormulaError(f"unsupported family {family!r}")


# ---------------------------------------------------------------------------
# polynomial helpers: polynomials are tuples of (exponent, coefficient)


def _peval(poly, x):
    return sum(Fraction(c) * x**e for e, c in poly)


def _surd_poly(poly):
    """(exponent, a, b) terms -> dict exponent -> a + b sqrt 2."""
    out = {}
    for e, a, b in poly:
        out[e] = out.get(e, QuadraticSurd(0)) + QuadraticSurd(a, b)
    return out


@dataclass(frozen=True)
class FormulaCase:
    label: str
    when: tuple  # (("q", modulus, residue), ("j", (7,)), ...)
    scale: str  # rational as text
    factors: tuple  # tuple of polynomials

    def matches(self, params):
        for cond in self.when:
            name = cond[0]
            if name not in params:
                raise FormulaError(f"missing parameter {name!r}")
            if len(cond) == 3:
                if params[name] % cond[1] != cond[2]:
                    return False
            elif params[name] not in cond[1]:
                return False
        return True


@dataclass(frozen=True)
class DeltaFormula:
    id: str
    anchor: str
    domain: str
    variable: str  # "q" | "m"
    kind: str  # "poly" | "power3" | "surd" | "qq3" | "ito"
    cases: tuple = ()
    extra: dict = field(default_factory=dict)

    def in_domain(self, params):
        return _DOMAINS[self.id](params)

    def evaluate(self, allow_outside=False, **params):
        if not allow_outside and not self.in_domain(params):
            raise DomainError(f"{self.id}: parameters {params} outside {self.domain}")
        value = _EVALUATORS[self.kind](self, params)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise FormulaError(f"{self.id}: non-integral value {value} at {params}")
            value = value.numerator
        if value < 0:
            raise FormulaError(f"{self.id}: negative value {value} at {params}")
        return value

    def to_json(self):
        return {
            "id": self.id,
            "anchor": self.anchor,
            "domain": self.domain,
            "coefficients": {
                "variable": self.variable,
                "kind": self.kind,
                "cases": [
                    {"label": c.label, "when": [list(w) if len(w) == 3 else [w[0], list(w[1])] for w in c.when],
                     "scale": c.scale, "factors": [[list(t) for t in f] for f in c.factors]}
                    for c in self.cases
                ],
                **{k: v for k, v in self.extra.items()},
            },
        }


def _select(f, params):
    hits = [c for c in f.cases if c.matches(params)]
    if len(hits) != 1:
        raise DomainError(f"{f.id}: no unique case for {params}")
    return hits[0]


def _eval_poly(f, params):
    c = _select(f, params)
    x = params[f.variable]
    val = Fraction(c.scale)
    for fac in c.factors:
        val *= _peval(fac, x)
    return val


def _eval_power3(f, params):
    # factors[0] holds (coefficient, a, b) for coefficient * 3^(a m + b)
    c = _select(f, params)
    m = params["m"]
    return Fraction(c.scale) * sum(k * 3 ** (a * m + b) for k, a, b in c.factors[0])


def _eval_surd(f, params):
    c = _select(f, params)
    m = params["m"]
    val = QuadraticSurd(1)
    for fac in c.factors:
        val = val * surd_eval(_surd_poly(fac), m)
    den = Fraction(c.scale).denominator
    num = Fraction(c.scale).numerator
    val = val * num
    if val.b:
        raise FormulaError(f"{f.id}: sqrt(2) component {val.b} at m={m}")
    return Fraction(val.a, den)


def _eval_qq3(f, params):
    q, delta = params["q"], params["delta"]
    d = gcd(q - delta, 3)
    return Fraction((q * q + delta * q + 1) * (q * q - d * delta * q - 1), d * d)


def _eval_ito(f, params):
    q, delta = params["q"], params["delta"]
    return (q * q + delta * q + 1) * (0 if params["i"] == params["j"] else 1)


_EVALUATORS = {"poly": _eval_poly, "power3": _eval_power3, "surd": _eval_surd,
               "qq3": _eval_qq3, "ito": _eval_ito}


def _is_pp(q):
    return isinstance(q, int) and q >= 2 and prime_power(q) is not None


def _qq3_domain(p):
    q, delta = p.get("q"), p.get("delta")
    if delta not in (1, -1) or not _is_pp(q):
        return False
    return q >= 7


_DOMAINS = {
    "qq3-general": _qq3_domain,
    "qq3-ito": lambda p: (p.get("delta") in (1, -1) and _is_pp(p.get("q")) and p["q"] % 3 == 0
                          and p.get("i") in (1, 2) and p.get("j") in (1, 2)),
    "sp4-odd": lambda p: _is_pp(p.get("q")) and p["q"] % 2 == 1,
    "g27": lambda p: _is_pp(p.get("q")) and p["q"] % 2 == 1 and p["q"] >= 7
    and (p["q"] % 3 != 0 or p.get("j") in (7, 8, 9)),
    "g2even-26": lambda p: _is_pp(p.get("q")) and p["q"] % 2 == 0 and p["q"] > 4,
    "g2even-27": lambda p: _is_pp(p.get("q")) and p["q"] % 2 == 0 and p["q"] > 4,
    "2g2-j5": lambda p: isinstance(p.get("m"), int) and p["m"] >= 1,
    "2g2-j67": lambda p: isinstance(p.get("m"), int) and p["m"] >= 1,
    "3d4-even": lambda p: _is_pp(p.get("q")) and p["q"] % 2 == 0,
    "3d4-odd": lambda p: _is_pp(p.get("q")) and p["q"] % 2 == 1,
    "ree-delta": lambda p: isinstance(p.get("m"), int) and p["m"] >= 1,
}

# torus orders and related factors for 2F4 with q = sqrt(2) 2^m, terms (e, a, b)
REE_T = ((4, 1, 0), (3, 0, 1), (2, 1, 0), (1, 0, 1), (0, 1, 0))
REE_T2 = ((4, 1, 0), (3, 0, -1), (2, 1, 0), (1, 0, -1), (0, 1, 0))
REE_B = (
    (23, 1, 0), (22, 0, -1), (19, 1, 0), (16, 0, -1), (15, -1, 0), (14, 0, 1), (13, 2, 0),
    (11, -2, 0), (10, 0, -2), (9, 2, 0), (8, 0, 3), (7, -1, 0), (6, 0, 6), (5, 14, 0),
    (4, 0, 18), (3, 33, 0), (2, 0, 16), (1, 14, 0), (0, 0, 8),
)

CATALOG = (
    DeltaFormula(
        "qq3-general",
        "SL3(q) (delta=+1) or SU3(q) (delta=-1): regular unipotent class twice against the "
        "class of elements of order q^2+delta q+1; (q^2+dq+1)(q^2-d*delta*q-1)/d^2, d=gcd(q-delta,3)",
        "q prime power >= 7, delta in {+1,-1}", "q", "qq3",
        extra={"expression": "(q^2+delta*q+1)*(q^2-d*delta*q-1)/d^2"},
    ),
    DeltaFormula(
        "qq3-ito",
        "A:3 subgroup of SL3/SU3 in characteristic 3: order-3 classes i, j against an element "
        "of order q^2+delta q+1; (q^2+delta q+1)(1-delta_ij)",
        "q power of 3, delta in {+1,-1}, i,j in {1,2}", "q", "ito",
        extra={"expression": "(q^2+delta*q+1)*(1-[i==j])"},
    ),
    DeltaFormula(
        "sp4-odd",
        "Sp4(q), q odd: regular unipotent class twice against a semisimple class of order q^2+1; "
        "(q^5-q)/4 (q+(-1)^((q-1)/2))",
        "q odd prime power", "q", "poly",
        (
            FormulaCase("q = 1 mod 4", (("q", 4, 1),), "1/4", (((5, 1), (1, -1)), ((1, 1), (0, 1)))),
            FormulaCase("q = 3 mod 4", (("q", 4, 3),), "1/4", (((5, 1), (1, -1)), ((1, 1), (0, -1)))),
        ),
    ),
    DeltaFormula(
        "g27",
        "G2(q), q >= 7 odd: regular unipotent class twice against the torus class of order q^2-q+1",
        "q odd prime power >= 7; j in {7,8,9} when q = 0 mod 3", "q", "poly",
        (
            FormulaCase("q = 0 mod 3, j = 7", (("q", 3, 0), ("j", (7,))), "1/9",
                        (((3, 1),), ((7, 1), (5, -1), (4, -2), (3, 8), (2, -10), (1, 6), (0, -1)))),
            FormulaCase("q = 0 mod 3, j = 8, 9", (("q", 3, 0), ("j", (8, 9))), "1/9",
                        (((3, 1),), ((7, 1), (5, -1), (4, -5), (3, 2), (2, -7), (0, -4)))),
            FormulaCase("q = 1 mod 3", (("q", 3, 1),), "1",
                        (((3, 1),), ((7, 1), (5, -1), (1, -2), (0, 1)))),
            FormulaCase("q = 2 mod 3", (("q", 3, 2),), "1",
                        (((5, 1),), ((5, 1), (3, -1), (2, 1), (0, -1)))),
        ),
    ),
    DeltaFormula(
        "g2even-26",
        "G2(q), q > 4 even: regular unipotent class twice against the torus class of order q^2+q+1",
        "q even prime power > 4", "q", "poly",
        (
            FormulaCase("q = 1 mod 3", (("q", 3, 1),), "1/4",
                        (((3, 1),), ((7, 1), (5, -1), (3, 5), (2, 7), (1, 5), (0, 1)))),
            FormulaCase("q = 2 mod 3", (("q", 3, 2),), "1/4",
                        (((4, 1),), ((6, 1), (4, -1), (3, 1), (2, 5), (1, 6), (0, 3)))),
        ),
    ),
    DeltaFormula(
        "g2even-27",
        "G2(q), q > 4 even: regular unipotent class twice against the torus class of order q^2-q+1",
        "q even prime power > 4", "q", "poly",
        (
            FormulaCase("q = 1 mod 3", (("q", 3, 1),), "1/4",
                        (((4, 1),), ((6, 1), (4, -1), (3, -1), (2, 5), (1, -6), (0, 3)))),
            FormulaCase("q = 2 mod 3", (("q", 3, 2),), "1/4",
                        (((3, 1),), ((7, 1), (5, -1), (3, 5), (2, -7), (1, 5), (0, -1)))),
        ),
    ),
    DeltaFormula(
        "2g2-j5",
        "2G2(3^(2m+1)): regular unipotent class j=5 twice against the torus class of order "
        "3^(2m+1)+3^(m+1)+1; terms k*3^(a m + b)",
        "m >= 1", "m", "power3",
        (FormulaCase("all m", (), "1",
                     (((1, 10, 3), (-1, 8, 2), (4, 6, 1), (2, 7, 2), (2, 5, 1), (2, 4, 1), (1, 3, 1)),)),),
    ),
    DeltaFormula(
        "2g2-j67",
        "2G2(3^(2m+1)): regular unipotent classes j=6,7 twice against the torus class of order "
        "3^(2m+1)+3^(m+1)+1; terms k*3^(a m + b)",
        "m >= 1", "m", "power3",
        (FormulaCase("all m", (), "1",
                     (((1, 10, 3), (-1, 8, 2), (-1, 7, 2), (-2, 6, 1), (-1, 5, 1)),)),),
    ),
    DeltaFormula(
        "3d4-even",
        "3D4(q), q even: regular unipotent class twice against the torus class of order q^4-q^2+1",
        "q even prime power", "q", "poly",
        (FormulaCase("q even", (), "1/4",
                     (((20, 1), (18, -1), (16, 1), (14, -2), (12, 4), (10, -4), (8, 2)),)),),
    ),
    DeltaFormula(
        "3d4-odd",
        "3D4(q), q odd: regular unipotent class twice against the torus class of order q^4-q^2+1",
        "q odd prime power", "q", "poly",
        (FormulaCase("q odd", (), "1",
                     (((20, 1), (18, -1), (16, 1), (14, -2), (12, 2), (10, -2)),)),),
    ),
    DeltaFormula(
        "ree-delta",
        "2F4(q^2), q^2 = 2^(2m+1), q = sqrt(2) 2^m: regular unipotent class twice against the torus "
        "class of order t; q^17 t b / 16, terms (exponent, integer part, sqrt2 part)",
        "m >= 1", "m", "surd",
        (FormulaCase("all m", (), "1/16", (((17, 1, 0),), REE_T, REE_B)),),
    ),
)

_BY_ID = {f.id: f for f in CATALOG}


def catalog_entry(fid):
    try:
        return _BY_ID[fid]
    except KeyError:
        raise FormulaError(f"unknown formula id {fid!r}") from None


def formula_eval(fid, allow_outside=False, **params):
    return catalog_entry(fid).evaluate(allow_outside=allow_outside, **params)


# ---------------------------------------------------------------------------
# stored constants


@dataclass(frozen=True)
class StoredConstant:
    id: str
    anchor: str
    value: int


CONSTANTS = (
    StoredConstant("su5-2-delta", "SU5(2): regular unipotent class 8a twice against 11a", 53416),
    StoredConstant("su4-2-delta", "SU4(2): regular unipotent class 4b twice against 9a", 486),
    StoredConstant("su4-2-theta", "SU4(2): lower bound for generating pairs, 4b,4b,9a", 405),
    StoredConstant("su4-2-sigma", "SU4(2): pairs inside 3^3:S4 for 4b,4b,9a", 81),
    StoredConstant("su3-2-delta", "SU3(2): classes 4a,4b,4c", 10),
    StoredConstant("su3-2-theta", "SU3(2): lower bound for generating pairs, 4a,4b,4c", 8),
    StoredConstant("g2-3-theta-9a", "G2(3): regular class 9a against 13a", 7293),
    StoredConstant("g2-3-theta-9bc", "G2(3): regular classes 9b, 9c against 13a", 7410),
    StoredConstant("g2-4-theta-8a", "G2(4): regular class 8a against 13a", 245440),
    StoredConstant("g2-4-theta-8b", "G2(4): regular class 8b against 13a", 241540),
    StoredConstant("g2-5-theta-25a", "G2(5): regular class 25a against 31a", 9373625),
    StoredConstant("f4-2-delta-16ab", "F4(2): classes 16a/16b twice against 13a", 808763850752),
    StoredConstant("f4-2-delta-16cd", "F4(2): classes 16c/16d twice against 13a", 808582807552),
    StoredConstant("f4-2-sigma-16cd", "F4(2): pairs inside 2F4(2) for 16c/16d and 13a", 519168),
    StoredConstant("f4-2-theta-16cd", "F4(2): lower bound for generating pairs, 16c/16d and 13a",
                   808582288384),
    StoredConstant("tits-theta", "2F4(2)': classes of order 16 twice against 13a", 64896),
)

_CONST_BY_ID = {c.id: c for c in CONSTANTS}


def stored_constant(cid):
    try:
        return _CONST_BY_ID[cid].value
    except KeyError:
        raise FormulaError(f"unknown constant {cid!r}") from None


QQ3_THETA = {
    # group: (regular classes, target class, theta)
    ("SL", 2): ("4a", "7a", 7),
    ("SL", 3): ("3b", "13a", 39),
    ("SU", 3): ("3b", "7a", 56),
    ("SL", 4): ("4a,4b,4c", "7a", 56),
    ("SU", 4): ("4a", "13a", 247),
    ("SL", 5): ("5b", "31a", 589),
    ("SU", 5): ("5b,5c,5d", "7a", 7),
}


def export_catalog():
    """JSON text of every formula and stored constant."""
    data = {
        "formulas": [f.to_json() for f in CATALOG],
        "constants": [{"id": c.id, "anchor": c.anchor, "value": c.value} for c in CONSTANTS],
    }
    return json.dumps(data, indent=1, sort_keys=True)


def import_constants(text):
    data = json.loads(text)
    return {c["id"]: int(c["value"]) for c in data["constants"]}


# ---------------------------------------------------------------------------
# counting inequalities


def _divisors(m):
    return [d for d in range(1, m + 1) if m % d == 0]


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def verify_union_bound(family, m):
    """Exact union bound plus the power-of-two sandwiches for q = 2^m."""
    if m < 1:
        raise FormulaError("m must be >= 1")
    q = 2**m
    rep = {"family": family, "m": m, "q": q}
    if family == "F4":
        lhs = Fraction(order_of("F4", q=q), q**4)
        terms = [Fraction(order_of("F4", q=2**d), 2 ** (4 * d)) for d in _divisors(m) if d != m]
        rhs = sum(terms, Fraction(0))
        size = order_of("F4", q=q)
        rep["sandwich"] = 2 ** (51 * m) < size < 2 ** (52 * m)
    elif family == "2E6":
        lhs = Fraction(order_of("2E6", q=q), q**6)
        terms = [Fraction(order_of("F4", q=q), q**4)]
        terms += [Fraction(order_of("2E6", q=2**d), 2 ** (6 * d))
                  for d in _divisors(m) if m // d != m and _is_prime(m // d) and (m // d) % 2 == 1]
        rhs = sum(terms, Fraction(0))
        size = order_of("2E6", q=q)
        rep["sandwich"] = 2 ** (77 * m) < size < 2 ** (78 * m)
        rep["f4_sandwich_upper"] = order_of("F4", q=q) < 2 ** (52 * m)
    else:
        raise FormulaError(f"unsupported family {family!r}")
    rep["orbit_count"] = lhs
    rep["union_sum"] = rhs
    rep["union_bound"] = lhs > rhs
    rep["margin"] = lhs - rhs
    rep["ok"] = rep["union_bound"] and rep["sandwich"]
    return rep


def ree_torus_orders(m):
    """(|T|, |G:T|) for 2F4(2^(2m+1)) as integers."""
    t = surd_eval(_surd_poly(REE_T), m)
    t2 = surd_eval(_surd_poly(REE_T2), m)
    Q = 2 ** (2 * m + 1)
    rest = t2 * (Q**4 - 1) * (Q**3 + 1) * (Q**2 + 1) * (Q - 1) * Q**12
    return t.to_int(), rest.to_int()


def torus_coprimality(m):
    """gcd(|T|, |G:T|) = 1 for 2F4(2^(2m+1)), cross-checked against the group order."""
    T, idx = ree_torus_orders(m)
    if T * idx != order_of("2F4", q=2 ** (2 * m + 1)):
        raise FormulaError(f"|T|*|G:T| does not match |2F4| at m={m}")
    return gcd(T, idx) == 1


def gt1_bound_check(n, q):
    if n < 4 or n % 2:
        raise FormulaError("n must be even and >= 4")
    if q < 2:
        raise FormulaError("q must be >= 2")
    return q ** ((n + 2) // 2) < q**n - 1
