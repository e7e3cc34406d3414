"""Exact character tables: validation, file format, structure constants from tables,
and a class-matrix builder for small groups."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .chain import batch_power
from .classes import CHUNK, ClassTable, enumerate_classes
from .exact import Cyclotomic, NonRationalError


class TableError(ValueError):
    pass


@dataclass(frozen=True)
class TableClass:
    label: str
    size: int
    order: int


class CharacterTable:
    def __init__(self, name, order, conductor, classes, irreducibles, validate=True):
        self.name = name
        self.order = int(order)
        self.conductor = int(conductor)
        self.classes = [c if isinstance(c, TableClass) else TableClass(*c) for c in classes]
        self.irreducibles = [[v.lift(self.conductor) if isinstance(v, Cyclotomic)
                              else Cyclotomic.rational(v, self.conductor) for v in row]
                             for row in irreducibles]
        if validate:
            self.validate()

    @property
    def degrees(self):
        return [int(row[0].rational_part()) for row in self.irreducibles]

    def _inverse_classes(self):
        """Class k* of inverses, read off from complex conjugate columns."""
        cols = [tuple(row[k] for row in self.irreducibles) for k in range(len(self.classes))]
        index = {}
        for k, col in enumerate(cols):
            index.setdefault(col, k)
        out = []
        for col in cols:
            key = tuple(v.conj() for v in col)
            if key not in index:
                raise TableError("conjugate column missing")
            out.append(index[key])
        return out

    def validate(self):
        r = len(self.classes)
        if len(self.irreducibles) != r or any(len(row) != r for row in self.irreducibles):
            raise TableError("table is not square")
        if sum(c.size for c in self.classes) != self.order:
            raise TableError("class sizes do not sum to the group order")
        if self.classes[0].size != 1 or self.classes[0].order != 1:
            raise TableError("first class must be the identity")
        for row in self.irreducibles:
            d = row[0]
            if not d.is_rational() or d.rational_part().denominator != 1 or d.rational_part() <= 0:
                raise TableError("degree is not a positive integer")
            if self.order % int(d.rational_part()):
                raise TableError("degree does not divide the group order")
        if sum(d * d for d in self.degrees) != self.order:
            raise TableError("sum of squared degrees differs from the group order")
        conj = [[v.conj() for v in row] for row in self.irreducibles]
        for i in range(r):
            for j in range(i, r):
                s = sum((self.irreducibles[i][k] * conj[j][k] * self.classes[k].size for k in range(r)),
                        Cyclotomic.rational(0, self.conductor))
                if s != (self.order if i == j else 0):
                    raise TableError(f"row orthogonality fails for characters {i}, {j}")
        for k in range(r):
            for l in range(k, r):
                s = sum((self.irreducibles[i][k] * conj[i][l] for i in range(r)),
                        Cyclotomic.rational(0, self.conductor))
                want = Fraction(self.order, self.classes[k].size) if k == l else 0
                if s != want:
                    raise TableError(f"column orthogonality fails for classes {k}, {l}")
        return True

    # file format
    def to_json(self):
        data = {
            "name": self.name,
            "order": self.order,
            "conductor": self.conductor,
            "classes": [{"label": c.label, "size": c.size, "elementOrder": c.order} for c in self.classes],
            "irreducibles": [[v.to_literal() for v in row] for row in self.irreducibles],
        }
        return json.dumps(data, separators=(",", ":"))

    @classmethod
    def from_json(cls, text, validate=True):
        data = json.loads(text)
        N = int(data["conductor"])
        classes = [TableClass(c["label"], int(c["size"]), int(c["elementOrder"])) for c in data["classes"]]
        rows = [[Cyclotomic.from_literal(N, lit) for lit in row] for row in data["irreducibles"]]
        return cls(data["name"], data["order"], N, classes, rows, validate=validate)


# ---------------------------------------------------------------------------
# structure constants from a table


def delta_from_table(t, c1, c2, c3):
    """(|c1||c2|/|G|) sum_i chi_i(g1) chi_i(g2) conj(chi_i(g3)) / chi_i(1), exactly."""
    total = Cyclotomic.rational(0, t.conductor)
    for row in t.irreducibles:
        d = row[0].rational_part()
        total = total + row[c1] * row[c2] * row[c3].conj() * (1 / d)
    total = total * Fraction(t.classes[c1].size * t.classes[c2].size, t.order)
    try:
        val = total.rational_part()
    except NonRationalError as e:
        raise TableError(f"invalid table: structure constant is not rational ({e})") from None
    if val.denominator != 1 or val < 0:
        raise TableError(f"invalid table: structure constant {val} is not a nonnegative integer")
    return int(val)


@dataclass(frozen=True)
class ThetaInput:
    delta: int
    corrections: tuple = ()  # (h, sigma) pairs

    def __post_init__(self):
        if self.delta < 0 or any(h < 0 or s < 0 for h, s in self.corrections):
            raise ValueError("theta inputs must be nonnegative")


@dataclass(frozen=True)
class ThetaResult:
    value: int
    negative: bool


def theta(inp):
    v = inp.delta - sum(h * s for h, s in inp.corrections)
    return ThetaResult(v, v < 0)


def h_from_formula(cg_x, centralizer_sizes, order_x, index_NH):
    """sum_i |C_G(x)| / |C_{N_G(H)}(x_i)| under gcd(|x|, |N_G(H):H|) = 1."""
    if gcd(order_x, index_NH) != 1:
        raise ValueError("gcd(|x|, |N_G(H):H|) must be 1")
    total = 0
    for c in centralizer_sizes:
        if c <= 0 or cg_x % c:
            raise ValueError(f"|C_G(x)| = {cg_x} is not divisible by {c}")
        total += cg_x // c
    return total


# ---------------------------------------------------------------------------
# class-matrix construction


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def choose_prime(exponent, order, bound=10**7):
    """Least prime l = 1 mod exponent with l > 2 sqrt(order)."""
    lo = 2 * isqrt(order) + 1
    l = lo + (1 - lo) % exponent
    while l < bound:
        if l > 2 * order**0.5 and _is_prime(l):
            return l
        l += exponent
    raise TableError(f"no prime = 1 mod {exponent} below {bound}")


def _primitive_root(p):
    fac, n, d = [], p - 1, 2
    while d * d <= n:
        if n % d == 0:
            fac.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fac.append(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fac):
            return g
    raise TableError("no primitive root")


def class_coefficients(ct):
    """a[i][j][k] = #{(x, y) in C_i x C_j : x y = g_k}."""
    r = len(ct)
    U = ct.U
    a = np.zeros((r, r, r), dtype=np.int64)
    inv = np.array(ct.inverse)
    for k, c in enumerate(ct.classes):
        g = U.unwrap(c.rep)
        # pairs (y^-1, y g) as y runs over G
        for start in range(0, ct.order, CHUNK):
            Y = U.decode(ct.codes[start:start + CHUNK])
            ci = inv[ct.class_of[start:start + CHUNK]]
            cj = ct.class_ids(U.mul(Y, g))
            np.add.at(a[:, :, k], (ci, cj), 1)
    return a


def _nullspace_mod(M, p):
    """Basis (list of vectors) of {v : M v = 0} over F_p."""
    M = [list(row) for row in M]
    rows, cols = len(M), len(M[0]) if M else 0
    pivots, rank = [], 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if M[i][c] % p), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(rows):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        pivots.append(c)
        rank += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -M[i][f] % p
        basis.append(v)
    return basis


def _charpoly_mod(A, p):
    """Characteristic polynomial (low degree first) via Hessenberg reduction."""
    n = len(A)
    H = [[x % p for x in row] for row in A]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if H[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            H[piv], H[j + 1] = H[j + 1], H[piv]
            for row in H:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = pow(H[j + 1][j], -1, p)
        for i in range(j + 2, n):
            u = H[i][j] * inv % p
            if u:
                H[i] = [(x - u * y) % p for x, y in zip(H[i], H[j + 1])]
                for row in H:
                    row[j + 1] = (row[j + 1] + u * row[i]) % p
    polys = [[1]]
    for m in range(n):
        # (x - h_mm) p_{m}
        prev = polys[-1]
        cur = [0] + prev
        for i, c in enumerate(prev):
            cur[i] = (cur[i] - H[m][m] * c) % p
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = prod * H[i + 1][i] % p
            coef = H[i][m] * prod % p
            if coef:
                for t, c in enumerate(polys[i]):
                    cur[t] = (cur[t] - coef * c) % p
        polys.append(cur)
    return polys[-1]


def _roots_mod(poly, p):
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _common_eigenvectors(mats, p, r, rng):
    """Split F_p^r into common eigenlines of the commuting matrices."""
    spaces = [[[int(i == j) for j in range(r)] for i in range(r)]]  # basis vectors as rows
    done = []
    for _ in range(200):
        if not spaces:
            return done
        coeffs = rng.integers(0, p, size=len(mats))
        M = sum(int(c) * m for c, m in zip(coeffs, mats)) % p
        nxt = []
        for B in spaces:
            d = len(B)
            Bt = np.array(B, dtype=object).T  # r x d
            MB = (np.array(M, dtype=object) @ Bt) % p
            # coordinates of MB in basis B: solve Bt X = MB
            X = _solve_mod(Bt, MB, p)
            for lam in _roots_mod(_charpoly_mod(X.tolist(), p), p):
                A = [[(X[i][j] - (lam if i == j else 0)) % p for j in range(d)] for i in range(d)]
                ns = _nullspace_mod(A, p)
                vecs = [[int(x) for x in (Bt @ np.array(v, dtype=object)) % p] for v in ns]
                (done if len(vecs) == 1 else nxt).append(vecs)
        spaces = nxt
    raise TableError("class matrices did not split into eigenlines")


def _solve_mod(A, B, p):
    """X with A X = B for A of full column rank."""
    rows, cols = A.shape
    M = [[int(A[i][j]) % p for j in range(cols)] + [int(B[i][j]) % p for j in range(B.shape[1])]
         for i in range(rows)]
    rank = 0
    piv_cols = []
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if M[i][c]), None)
        if piv is None:
            raise TableError("basis is rank deficient")
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(rows):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        piv_cols.append(c)
        rank += 1
    return np.array([row[cols:] for row in M[:cols]], dtype=object)


def _power_classes(ct, k, o):
    """Class ids of g_k^i for 0 <= i < o."""
    U = ct.U
    g = U.unwrap(ct.classes[k].rep)
    P = np.stack([batch_power(U, g[None], i)[0] for i in range(o)])
    return ct.class_ids(P)


def dixon_build(group, seed=0, max_order=10**5):
    """Exact character table from class multiplication coefficients."""
    ct = group if isinstance(group, ClassTable) else enumerate_classes(group)
    G, r = ct.order, len(ct)
    if G > max_order:
        raise TableError(f"group order {G} exceeds {max_order}")
    e = 1
    for c in ct.classes:
        e = e * c.order // gcd(e, c.order)
    p = choose_prime(e, G)
    z = pow(_primitive_root(p), (p - 1) // e, p)  # image of zeta_e
    a = class_coefficients(ct)
    # omega_i omega_j = sum_k a_ijk omega_k, so omega is an eigenvector of each (a_ijk)_{ik}
    mats = [a[:, j, :].astype(object) for j in range(r)]
    rng = np.random.default_rng(seed)
    lines = _common_eigenvectors(mats, p, r, rng)
    sizes = [c.size for c in ct.classes]
    inv = ct.inverse
    powers = {k: _power_classes(ct, k, c.order) for k, c in enumerate(ct.classes)}
    rows = []
    for (v,) in lines:
        if v[0] == 0:
            raise TableError("eigenvector vanishes at the identity")
        s = pow(v[0], -1, p)
        w = [x * s % p for x in v]
        S = sum(w[k] * w[inv[k]] * pow(sizes[k], -1, p) for k in range(r)) % p
        d2 = G * pow(S, -1, p) % p
        deg = next((d for d in range(1, isqrt(G) + 1) if d * d % p == d2 and G % d == 0), None)
        if deg is None:
            raise TableError("could not recover a character degree")
        chi_mod = [w[k] * deg * pow(sizes[k], -1, p) % p for k in range(r)]
        values = []
        for k, c in enumerate(ct.classes):
            o = c.order
            zo = pow(z, e // o, p)
            oinv = pow(o, -1, p)
            terms = []
            for j in range(o):
                m = sum(chi_mod[powers[k][i]] * pow(zo, (-i * j) % o, p) for i in range(o)) * oinv % p
                if m > deg:
                    raise TableError("eigenvalue multiplicity out of range")
                if m:
                    terms.append((j * (e // o), m))
            values.append(Cyclotomic.from_powers(e, terms))
        rows.append((deg, chi_mod, values))
    rows.sort(key=lambda t: (t[0], t[1]))
    chars = [vals for _, _, vals in rows]
    conductor = 1
    for row in chars:
        for v in row:
            n = v.reduced().N
            conductor = conductor * n // gcd(conductor, n)
    chars = [[v.reduced().lift(conductor) for v in row] for row in chars]
    classes = [TableClass(c.label, c.size, c.order) for c in ct.classes]
    return CharacterTable(ct.name, G, conductor, classes, chars)
