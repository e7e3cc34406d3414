"""Dense matrices over GF(q), classical forms and unipotent structure.

Single matrices are :class:`Matrix` values (immutable, hashable by their
packed bytes).  Batched products used by the group engine operate on raw
``numpy`` arrays of encoded field elements via :func:`mat_mul`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .galois import FieldError, FieldScalar, field_of_size


class MatrixError(ValueError):
    pass


class UnsupportedClassification(MatrixError):
    """Family/dimension pair outside the attested regular-unipotent table."""


# ---------------------------------------------------------------------------
# vectorised kernels


def _reduction(F):
    red = getattr(F, "_red", None)
    if red is None:
        from .galois import _polyrem

        rows = []
        for s in range(2 * F.k - 1):
            rows.append((_polyrem([0] * s + [1], list(F.poly), F.p) + [0] * F.k)[: F.k])
        red = np.array(rows, dtype=np.int64)
        F._red = red
    return red


def _fmatmul(A, B):
    # exact while every partial sum stays below 2^24
    return np.matmul(A.astype(np.float32), B.astype(np.float32)).astype(np.int64)


def mat_mul(F, A, B):
    """Broadcasting matrix product of encoded arrays over ``F``."""
    p, k = F.p, F.k
    exact32 = A.shape[-1] * k * (p - 1) ** 2 < (1 << 24)
    mm = _fmatmul if exact32 else (lambda X, Y: np.matmul(X.astype(np.int64), Y.astype(np.int64)))
    if k == 1:
        return (mm(A, B) % p).astype(F.dtype)
    Ad = F.digits[A]
    Bd = F.digits[B]
    n, l = A.shape[-2], B.shape[-1]
    # one product of stacked coefficient blocks: rows by t, columns by s
    Acat = np.concatenate([Ad[..., t] for t in range(k)], axis=-2)
    Bcat = np.concatenate([Bd[..., s] for s in range(k)], axis=-1)
    P = mm(Acat, Bcat)
    acc = np.zeros(P.shape[:-2] + (n, l, 2 * k - 1), dtype=np.int64)
    for t in range(k):
        for s in range(k):
            acc[..., t + s] += P[..., t * n:(t + 1) * n, s * l:(s + 1) * l]
    out = (acc % p) @ _reduction(F) % p
    return (out @ F.place).astype(F.dtype)


def mat_mul_chunked(F, A, B, chunk=1 << 15):
    """:func:`mat_mul` for a large batch ``A`` (leading axis) times one ``B``."""
    if A.shape[0] <= chunk:
        return mat_mul(F, A, B)
    parts = [mat_mul(F, A[i : i + chunk], B if B.ndim == 2 else B[i : i + chunk])
             for i in range(0, A.shape[0], chunk)]
    return np.concatenate(parts)


def encode_rows(F, V):
    """Integer codes (base q, first coordinate least significant) of rows of V."""
    n = V.shape[-1]
    w = np.array([F.q**i for i in range(n)], dtype=np.int64)
    return V.astype(np.int64) @ w


def decode_rows(F, codes, n):
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (n,), dtype=F.dtype)
    c = codes.copy()
    for i in range(n):
        out[..., i] = c % F.q
        c //= F.q
    return out


def frob_array(F, A, e):
    if e % F.k == 0:
        return A
    return F.frob_table(e)[A]


# ---------------------------------------------------------------------------
# small exact linear algebra on python lists of encoded ints


def _rref(F, rows, ncols):
    """Row-reduce in place; return (rows, pivot columns)."""
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        s = int(inv[rows[r][c]])
        rows[r] = [int(mul[s, x]) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = int(neg[rows[i][c]])
                rows[i] = [int(add[x, mul[f, y]]) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_of(F, rows):
    if not len(rows):
        return 0
    _, piv = _rref(F, rows, len(rows[0]))
    return len(piv)


def nullspace(F, rows, ncols):
    """Basis (list of vectors) of {x : rows . x = 0}."""
    red, piv = _rref(F, rows, ncols) if len(rows) else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, c in enumerate(piv):
            x[c] = int(F.neg[red[i][f]])
        basis.append(x)
    return basis


# ---------------------------------------------------------------------------


class Matrix:
    """Square matrix over a finite field; immutable value type."""

    __slots__ = ("field", "a", "_key")

    def __init__(self, field, entries):
        a = np.array(entries, dtype=field.dtype)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixError("matrix must be square")
        if a.size and int(a.max()) >= field.q:
            raise MatrixError("entry out of field range")
        a.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # constructors
    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=field.dtype))

    @classmethod
    def zero(cls, field, n):
        return cls(field, np.zeros((n, n), dtype=field.dtype))

    @classmethod
    def from_rows(cls, field, rows):
        """Rows of ints, FieldScalars or ``b``-expressions."""
        out = []
        for row in rows:
            out.append([_scalar(field, x) for x in row])
        return cls(field, out)

    @classmethod
    def diag(cls, field, entries):
        n = len(entries)
        a = np.zeros((n, n), dtype=field.dtype)
        for i, x in enumerate(entries):
            a[i, i] = _scalar(field, x)
        return cls(field, a)

    @classmethod
    def block_diag(cls, *blocks):
        field = blocks[0].field
        n = sum(b.n for b in blocks)
        a = np.zeros((n, n), dtype=field.dtype)
        i = 0
        for b in blocks:
            if b.field is not field:
                raise FieldError("cross-field block matrix")
            a[i : i + b.n, i : i + b.n] = b.a
            i += b.n
        return cls(field, a)

    @property
    def n(self):
        return self.a.shape[0]

    def key(self):
        """Packed canonical encoding (row-major bytes)."""
        k = self._key
        if k is None:
            k = self.a.tobytes()
            object.__setattr__(self, "_key", k)
        return k

    def __hash__(self):
        return hash((id(self.field), self.key()))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field is other.field and self.a.shape == other.a.shape and self.key() == other.key()

    def _check(self, other):
        if other.field is not self.field:
            raise FieldError("cross-field matrix arithmetic")
        if other.n != self.n:
            raise MatrixError("dimension mismatch")

    def __matmul__(self, other):
        self._check(other)
        return Matrix(self.field, mat_mul(self.field, self.a, other.a))

    __mul__ = __matmul__

    def __add__(self, other):
        self._check(other)
        return Matrix(self.field, self.field.add[self.a, other.a])

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.field, self.field.sub[self.a, other.a])

    def __neg__(self):
        return Matrix(self.field, self.field.neg[self.a])

    def scale(self, c):
        c = _scalar(self.field, c)
        return Matrix(self.field, self.field.mul[c, self.a])

    def __getitem__(self, ij):
        return FieldScalar(self.field, self.a[ij])

    def rows(self):
        return [[int(x) for x in r] for r in self.a]

    @property
    def T(self):
        return Matrix(self.field, self.a.T)

    def frob(self, e=1):
        return Matrix(self.field, frob_array(self.field, self.a, e))

    def is_identity(self):
        return bool(np.array_equal(self.a, np.eye(self.n, dtype=self.a.dtype)))

    def rank(self):
        return rank_of(self.field, self.rows())

    def det(self):
        F = self.field
        rows = self.rows()
        n = self.n
        d = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if rows[i][c]), None)
            if piv is None:
                return F.zero()
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                d = int(F.neg[d])
            d = int(F.mul[d, rows[c][c]])
            s = int(F.inv[rows[c][c]])
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = int(F.neg[F.mul[rows[i][c], s]])
                    rows[i] = [int(F.add[x, F.mul[f, y]]) for x, y in zip(rows[i], rows[c])]
        return FieldScalar(F, d)

    def inverse(self):
        F, n = self.field, self.n
        aug = [r + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows())]
        red, piv = _rref(F, aug, n)
        if piv[:n] != list(range(n)):
            raise MatrixError("matrix is singular")
        return Matrix(F, [r[n:] for r in red])

    def __pow__(self, e):
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        acc = Matrix.identity(self.field, self.n)
        while e:
            if e & 1:
                acc = acc @ base
            base = base @ base
            e >>= 1
        return acc

    def apply(self, v):
        """Image of the column vector v."""
        v = np.asarray(v, dtype=self.field.dtype)
        return mat_mul(self.field, self.a, v[:, None])[:, 0]

    def format_rows(self):
        return [",".join(self.field.format(x) for x in r) for r in self.a]

    def __repr__(self):
        return "[" + "; ".join(self.format_rows()) + "]"


def _scalar(field, x):
    if isinstance(x, FieldScalar):
        if x.field is not field:
            raise FieldError("cross-field entry")
        return x.value
    if isinstance(x, str):
        return field.parse(x)
    return field.from_int(int(x))


# ---------------------------------------------------------------------------
# named matrices


def jordan_block(field, n):
    """Upper triangular unipotent Jordan block J_n."""
    a = np.eye(n, dtype=field.dtype)
    for i in range(n - 1):
        a[i, i + 1] = 1
    return Matrix(field, a)


def antidiag(field, entries):
    n = len(entries)
    a = np.zeros((n, n), dtype=field.dtype)
    for i, x in enumerate(entries):
        a[i, n - 1 - i] = _scalar(field, x)
    return Matrix(field, a)


def elementary(field, n, i, j, t=1):
    """I + t E_{i,j} (0-based)."""
    a = np.eye(n, dtype=field.dtype)
    a[i, j] = field.add[a[i, j], _scalar(field, t)]
    return Matrix(field, a)


def split_symplectic_gram(field, m):
    """(0 I_m / -I_m 0)."""
    n = 2 * m
    a = np.zeros((n, n), dtype=field.dtype)
    for i in range(m):
        a[i, m + i] = 1
        a[m + i, i] = field.neg[1]
    return Matrix(field, a)


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class FormDescriptor:
    kind: str  # "symplectic" | "hermitian"
    gram: Matrix
    twist: int = 0

    def __post_init__(self):
        g = self.gram
        if self.kind == "symplectic":
            if self.twist != 0:
                raise MatrixError("symplectic forms carry no twist")
            if g.T != -g or any(g.a[i, i] for i in range(g.n)) or g.det() == 0:
                raise MatrixError("gram matrix is not an invertible alternating form")
        elif self.kind == "hermitian":
            if g.field.k % 2 or self.twist != g.field.k // 2:
                raise MatrixError("hermitian forms need GF(q^2) and twist k/2")
            if g.frob(self.twist).T != g or g.det() == 0:
                raise MatrixError("gram matrix is not an invertible hermitian form")
        else:
            raise MatrixError(f"unknown form kind {self.kind!r}")

    @classmethod
    def symplectic(cls, gram):
        return cls("symplectic", gram, 0)

    @classmethod
    def hermitian(cls, gram):
        return cls("hermitian", gram, gram.field.k // 2)


def preserves_form(g, form):
    """True iff g* . gram . g == gram (g* the twisted transpose)."""
    G = form.gram
    if g.n != G.n:
        raise MatrixError("dimension mismatch between element and form")
    if g.field is not G.field:
        raise FieldError("element and form over different fields")
    gstar = g.frob(form.twist).T
    return gstar @ G @ g == G


def preserves_form_batch(F, A, gram, twist):
    """Vectorised :func:`preserves_form` over a stack of matrices."""
    At = np.swapaxes(frob_array(F, A, twist), -1, -2)
    lhs = mat_mul(F, mat_mul(F, At, gram.a), A)
    return np.all(lhs == gram.a, axis=(-1, -2))


# ---------------------------------------------------------------------------
# unipotent structure


def jordan_type(u):
    """Jordan block sizes of a unipotent matrix, descending."""
    n = u.n
    I = Matrix.identity(u.field, n)
    N = u - I
    ranks = [n]
    P = I
    for _ in range(n):
        P = P @ N
        ranks.append(P.rank())
    if ranks[-1] != 0:
        raise MatrixError("matrix is not unipotent")
    # parts >= j: ranks[j-1] - ranks[j]
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, n + 1)]
    parts = []
    for j in range(n, 0, -1):
        exact = at_least[j - 1] - (at_least[j] if j < n else 0)
        parts.extend([j] * exact)
    return parts


def is_unipotent(u):
    N = u - Matrix.identity(u.field, u.n)
    P = N
    for _ in range(u.n - 1):
        P = P @ N
    return not P.a.any()


def regular_unipotent_type(family, n, q):
    """Jordan type of a regular unipotent element, from the attested table."""
    even = q % 2 == 0
    if family in ("SL", "SU"):
        return [n]
    if family == "Sp":
        if n % 2:
            raise UnsupportedClassification("Sp needs even dimension")
        return [n]
    if family == "OmegaOdd":
        if n % 2 == 0 or even or n < 3:
            raise UnsupportedClassification("OmegaOdd(2n+1) is attested for q odd only")
        return [n]
    if family == "OmegaMinus":
        if n % 2 or n < 4:
            raise UnsupportedClassification("OmegaMinus needs even dimension 2n+2")
        return [n - 2, 2] if even else [n - 1, 1]
    if family == "OmegaPlus":
        if n != 6:
            raise UnsupportedClassification("OmegaPlus regular type attested only in dimension 6")
        return [4, 2] if even else [5, 1]
    raise UnsupportedClassification(f"no regular unipotent classification for {family}")


def is_regular_unipotent(g, spec):
    """Regular-unipotence test by Jordan type for the group family of ``spec``."""
    expected = regular_unipotent_type(spec.family, spec.n, spec.q)
    if g.n != spec.n:
        raise MatrixError("element dimension does not match the group")
    if not is_unipotent(g):
        return False
    return jordan_type(g) == expected


# ---------------------------------------------------------------------------
# conjugacy of regular unipotents


def _conjugator_space(A, B):
    """Basis of {X : X A = B X} as matrices."""
    F, n = A.field, A.n
    # unknowns x_{ij} at index i*n + j; equation (XA - BX)_{rc} = 0
    rows = []
    for r in range(n):
        for c in range(n):
            row = [0] * (n * n)
            for k in range(n):
                a = int(A.a[k, c])
                if a:
                    idx = r * n + k
                    row[idx] = int(F.add[row[idx], a])
                b = int(B.a[r, k])
                if b:
                    idx = k * n + c
                    row[idx] = int(F.sub[row[idx], b])
            rows.append(row)
    return [Matrix(F, np.array(v, dtype=F.dtype).reshape(n, n)) for v in nullspace(F, rows, n * n)]


def sl_conjugate(A, B):
    """For regular unipotent A, B: an X in SL_n with X A X^-1 = B, or None.

    Solutions form C(B).X0 and C(B) consists of polynomials in B, whose
    determinants are c0^n; so SL-conjugacy is decided by an n-th root test.
    """
    F, n = A.field, A.n
    space = _conjugator_space(A, B)
    X0 = None
    # the invertible solutions are an open set; try basis combinations
    for X in space:
        if X.det() != 0:
            X0 = X
            break
    if X0 is None:
        acc = Matrix.zero(F, n)
        for X in space:
            acc = acc + X
            if acc.det() != 0:
                X0 = acc
                break
    if X0 is None:
        return None
    d = X0.det()
    for c in range(1, F.q):
        if F.mul[d.value, F.power(c, n)] == 1:
            return X0.scale(c)
    return None


def t2r_conjugator(n, q):
    """Transpose-of-Jordan-block conjugacy report for SL_n(q)."""
    if n < 2:
        raise MatrixError("n must be >= 2")
    F = field_of_size(q)
    J = jordan_block(F, n)
    Jt = J.T
    M = antidiag(F, [1] * n)
    M1 = antidiag(F, [1 if i % 2 == 0 else -1 for i in range(n)])
    I = Matrix.identity(F, n)
    N = I - (J - I)
    Jinv = J.inverse()
    detM = M.det()
    odd = q % 2 == 1
    if odd:
        det_claim = (detM == 1) == (n % 4 in (0, 1))
    else:
        det_claim = detM == 1
    X_direct = sl_conjugate(J, Jt)
    X_inverse = sl_conjugate(Jinv, Jt)
    # expected per case analysis on n mod 4 and -1 being a square
    minus_one_square = F.sqrt(F.neg[1]) is not None
    if not odd or n % 4 != 2 or minus_one_square:
        expected = "J"
    else:
        expected = "J^-1"
    found = "J" if X_direct is not None else ("J^-1" if X_inverse is not None else None)
    report = {
        "n": n,
        "q": q,
        "M_conjugates": M @ J @ M.inverse() == Jt,
        "det_M": int(detM.value) if detM.value <= 1 else -1,
        "det_M_claim": bool(det_claim),
        "M1_conjugates": M1 @ Jt @ M1.inverse() == N,
        "det_M1": M1.det() == 1,
        "conjugate_to": found,
        "expected": expected,
        "J_not_conjugate": X_direct is None,
    }
    report["ok"] = bool(
        report["M_conjugates"] and report["det_M_claim"] and report["M1_conjugates"]
        and report["det_M1"] and found == expected and (X_direct is None or X_direct @ J @ X_direct.inverse() == Jt)
    )
    return report


# ---------------------------------------------------------------------------
# irreducibility by spinning


@dataclass
class SpinResult:
    irreducible: Optional[bool]
    subspace: Optional[list] = None  # basis of a proper invariant subspace
    points_checked: int = 0

    @property
    def status(self):
        if self.irreducible is None:
            return "undetermined at this scale"
        return "irreducible" if self.irreducible else "reducible"


def _spin(F, gens, v):
    """Echelon basis of the smallest gens-invariant subspace containing v."""
    n = len(v)
    basis = []  # list of (pivot, vector) with pivot entry 1
    queue = [list(v)]
    while queue:
        w = queue.pop()
        for piv, b in basis:
            if w[piv]:
                f = int(F.neg[w[piv]])
                w = [int(F.add[x, F.mul[f, y]]) for x, y in zip(w, b)]
        piv = next((i for i, x in enumerate(w) if x), None)
        if piv is None:
            continue
        s = int(F.inv[w[piv]])
        w = [int(F.mul[s, x]) for x in w]
        basis.append((piv, w))
        if len(basis) == n:
            return basis
        for g in gens:
            queue.append([int(x) for x in g.apply(w)])
    return basis


def irreducible_by_spinning(gens, budget=10**6):
    """Decide irreducibility of <gens> on the natural module by spinning every line."""
    if not gens:
        raise MatrixError("need at least one generator")
    F, n = gens[0].field, gens[0].n
    points = (F.q**n - 1) // (F.q - 1)
    if points > budget:
        return SpinResult(None, None, 0)
    checked = 0
    for lead in range(n):
        # vectors with first nonzero coordinate 1 at position lead
        tail = n - lead - 1
        for t in range(F.q**tail):
            v = [0] * lead + [1] + [(t // F.q**i) % F.q for i in range(tail)]
            checked += 1
            basis = _spin(F, gens, v)
            if len(basis) < n:
                return SpinResult(False, [b for _, b in basis], checked)
    return SpinResult(True, None, checked)
