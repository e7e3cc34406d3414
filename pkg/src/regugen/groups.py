"""Group specifications, element universes and standard generating sets."""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial
from typing import Optional

import numpy as np

from .galois import FieldScalar, field_of_size
from .matrices import (
    FormDescriptor,
    Matrix,
    MatrixError,
    antidiag,
    decode_rows,
    elementary,
    encode_rows,
    mat_mul,
    preserves_form,
    preserves_form_batch,
    split_symplectic_gram,
)
from .perms import Perm

FAMILIES = ("SL", "SU", "Sp", "OmegaPlus", "OmegaMinus", "OmegaOdd", "Perm", "Explicit")
CLASSICAL = ("SL", "SU", "Sp")


class GroupSpecError(ValueError):
    pass


@dataclass
class GroupSpec:
    family: str
    n: int
    q: Optional[int] = None
    form: Optional[FormDescriptor] = None
    generators: Optional[list] = None
    label: Optional[str] = None
    order: Optional[int] = None  # known order for Perm/Explicit groups

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GroupSpecError(f"unknown family {self.family!r}")

    @property
    def name(self):
        if self.label:
            return self.label
        return f"{self.family}({self.n},{self.q})"

    @property
    def field(self):
        """Field carrying the matrices (GF(q^2) for SU)."""
        if self.family == "SU":
            return field_of_size(self.q * self.q)
        if self.family in ("Perm",):
            return None
        if self.q is None:
            return self.generators[0].field if self.generators else None
        return field_of_size(self.q)


# ---------------------------------------------------------------------------
# universes: batched representations of elements as numpy arrays


class MatrixUniverse:
    """GL_n(F) acting on nonzero column vectors, points encoded base q."""

    kind = "matrix"

    def __init__(self, field, n):
        self.field, self.n = field, n
        self.q = field.q
        self.dtype = field.dtype
        self.npoints = self.q**n - 1
        self.code_fits = n * n * np.log2(self.q) < 62.5
        self._w = np.array([self.q**i for i in range(n * n)], dtype=object if not self.code_fits else np.int64)

    def identity(self):
        return np.eye(self.n, dtype=self.dtype)

    def wrap(self, a):
        return Matrix(self.field, a)

    def unwrap(self, g):
        if not isinstance(g, Matrix) or g.field is not self.field or g.n != self.n:
            raise MatrixError("element is not in this matrix universe")
        return np.array(g.a)

    def mul(self, A, B):
        return mat_mul(self.field, A, B)

    def is_identity(self, A):
        return np.all(A == self.identity(), axis=(-1, -2))

    def base_points(self):
        return list(range(self.n))

    def base_code(self, b):
        return self.q**b

    def base_image(self, A, b):
        return encode_rows(self.field, A[..., :, b])

    def act(self, g, codes):
        F = self.field
        V = decode_rows(F, codes, self.n)
        if F.p == 2:
            # addition in characteristic 2 is xor of the encodings
            out = np.zeros(len(codes), dtype=np.int64)
            for i in range(self.n):
                col = encode_rows(F, F.mul[np.arange(F.q)[:, None], g[:, i][None, :]])
                out ^= col[V[:, i]]
            return out
        W = F.mul[V[:, 0][:, None], g[:, 0][None, :]]
        for i in range(1, self.n):
            W = F.add[W, F.mul[V[:, i][:, None], g[:, i][None, :]]]
        return encode_rows(F, W)

    def first_moved(self, g):
        for b in range(self.n):
            col = g[:, b]
            if col[b] != 1 or np.count_nonzero(col) != 1:
                return b
        return None

    def encode(self, A):
        if not self.code_fits:
            raise MatrixError("element codes do not fit in 64 bits for this universe")
        flat = A.reshape(A.shape[:-2] + (self.n * self.n,)).astype(np.int64)
        return flat @ self._w

    def decode(self, codes):
        return decode_rows(self.field, codes, self.n * self.n).reshape(np.shape(codes) + (self.n, self.n))


class PermUniverse:
    """Sym(n) acting on {0..n-1}."""

    kind = "perm"

    def __init__(self, n):
        self.n = n
        self.npoints = n
        self.dtype = np.int16
        self.code_fits = n * np.log2(max(n, 2)) < 62.5
        self._w = np.array([n**i for i in range(n)], dtype=np.int64)

    def identity(self):
        return np.arange(self.n, dtype=self.dtype)

    def wrap(self, a):
        return Perm(a)

    def unwrap(self, g):
        if not isinstance(g, Perm) or g.degree > self.n:
            raise GroupSpecError("element is not in this permutation universe")
        return np.array(g.padded(self.n).images, dtype=self.dtype)

    def mul(self, A, B):
        A, B = np.broadcast_arrays(A, B)
        return np.take_along_axis(A, B.astype(np.intp), axis=-1)

    def is_identity(self, A):
        return np.all(A == self.identity(), axis=-1)

    def base_points(self):
        return list(range(self.n))

    def base_code(self, b):
        return b

    def base_image(self, A, b):
        return A[..., b].astype(np.int64)

    def act(self, g, codes):
        return g[codes].astype(np.int64)

    def first_moved(self, g):
        moved = np.nonzero(g != self.identity())[0]
        return int(moved[0]) if len(moved) else None

    def encode(self, A):
        if not self.code_fits:
            raise GroupSpecError("element codes do not fit in 64 bits for this degree")
        return A.astype(np.int64) @ self._w

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty(codes.shape + (self.n,), dtype=self.dtype)
        c = codes.copy()
        for i in range(self.n):
            out[..., i] = c % self.n
            c //= self.n
        return out


def universe_of(spec_or_elements):
    if isinstance(spec_or_elements, GroupSpec):
        spec = spec_or_elements
        if spec.family == "Perm":
            return PermUniverse(spec.n)
        if spec.family == "Explicit":
            return universe_of(spec.generators)
        return MatrixUniverse(spec.field, spec.n)
    elems = list(spec_or_elements)
    if not elems:
        raise GroupSpecError("cannot infer a universe from no elements")
    if isinstance(elems[0], Perm):
        return PermUniverse(max(g.degree for g in elems))
    return MatrixUniverse(elems[0].field, elems[0].n)


# ---------------------------------------------------------------------------
# standard generators


def _additive_basis(F):
    return [FieldScalar(F, F.power(F.beta, i)) for i in range(F.k)]


def sl_generators(F, n):
    gens = []
    for t in _additive_basis(F):
        for i in range(n - 1):
            gens.append(elementary(F, n, i, i + 1, t))
            gens.append(elementary(F, n, i + 1, i, t))
    return gens


def sp_generators(F, m):
    n = 2 * m
    gens = []
    for A in sl_generators(F, m) if m > 1 else []:
        gens.append(Matrix.block_diag(A, A.T.inverse()))
    for t in _additive_basis(F):
        gens.append(elementary(F, n, m - 1, n - 1, t))
        gens.append(elementary(F, n, n - 1, m - 1, t))
    return gens


def su_generators(q, n):
    F = field_of_size(q * q)
    e = F.k // 2
    J = antidiag(F, [1] * n)
    m = n // 2
    gens = []
    if m >= 2:
        Jm = antidiag(F, [1] * m)
        for A in sl_generators(F, m):
            B = Jm @ A.frob(e).T.inverse() @ Jm
            blocks = [A, Matrix.identity(F, 1), B] if n % 2 else [A, B]
            gens.append(Matrix.block_diag(*blocks))
    # root group of the last simple root, found by exhaustive search
    q2 = F.q
    if n % 2 == 0:
        cand = np.repeat(np.eye(n, dtype=F.dtype)[None], q2, axis=0)
        cand[:, m - 1, m] = np.arange(q2)
    else:
        vals = np.arange(q2)
        b, c, d = np.meshgrid(vals, vals, vals, indexing="ij")
        cand = np.repeat(np.eye(n, dtype=F.dtype)[None], q2**3, axis=0)
        cand[:, m - 1, m] = b.ravel()
        cand[:, m, m + 1] = c.ravel()
        cand[:, m - 1, m + 1] = d.ravel()
    ok = preserves_form_batch(F, cand, J, e)
    valid = cand[ok]
    picked = []
    if n % 2 == 0:
        picked = [v for v in valid if v[m - 1, m]][: F.k]
    else:
        for t in _additive_basis(F):
            hit = [v for v in valid if v[m - 1, m] == t.value]
            if hit:
                picked.append(hit[0])
        picked += [v for v in valid if v[m - 1, m] == 0 and v[m - 1, m + 1]][: F.k]
    for v in picked:
        g = Matrix(F, v)
        gens.append(g)
        gens.append(J @ g @ J)
    return gens


def standard_generators(spec):
    if spec.generators:
        return list(spec.generators)
    F = spec.field
    if spec.family == "SL":
        return sl_generators(F, spec.n)
    if spec.family == "Sp":
        if spec.n % 2:
            raise GroupSpecError("Sp needs even dimension")
        return sp_generators(F, spec.n // 2)
    if spec.family == "SU":
        return su_generators(spec.q, spec.n)
    raise GroupSpecError(f"no standard generators for {spec.family}")


def default_form(spec):
    if spec.form is not None:
        return spec.form
    F = spec.field
    if spec.family == "Sp":
        return FormDescriptor.symplectic(split_symplectic_gram(F, spec.n // 2))
    if spec.family == "SU":
        return FormDescriptor.hermitian(antidiag(F, [1] * spec.n))
    return None


def is_member(g, spec):
    """Determinant one and form preservation for the classical families."""
    if spec.family not in CLASSICAL:
        raise GroupSpecError(f"membership test not available for {spec.family}")
    if not isinstance(g, Matrix) or g.field is not spec.field or g.n != spec.n:
        return False
    if g.det() != 1:
        return False
    form = default_form(spec)
    return form is None or preserves_form(g, form)


def expected_order(spec):
    """Order of the group named by spec, from closed formulas."""
    if spec.order is not None:
        return spec.order
    if spec.family in CLASSICAL:
        from .formulas import order_of

        return order_of(spec.family, spec.n, spec.q)
    return None


# ---------------------------------------------------------------------------
# text specs: SL(3,2), SU(4,2), Sp(4,3), Sym(4), Alt(8), Dihedral(10), Cyclic(3)

_SPEC = re.compile(r"^\s*([A-Za-z]+)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*$")


def permutation_group(name, n):
    if name == "Sym":
        gens = [Perm.from_cycles("(1,2)", n), Perm.from_cycles("(" + ",".join(map(str, range(1, n + 1))) + ")", n)]
        order = factorial(n)
    elif name == "Alt":
        if n < 3:
            raise GroupSpecError("Alt needs degree >= 3")
        gens = [Perm.from_cycles(f"({i},{i + 1},{i + 2})", n) for i in range(1, n - 1)]
        order = factorial(n) // 2
    elif name == "Dihedral":
        if n % 2 or n < 6:
            raise GroupSpecError("Dihedral(2m) needs m >= 3")
        m = n // 2
        refl = "".join(f"({i},{m + 2 - i})" for i in range(2, (m + 2) // 2 + 1) if i != m + 2 - i)
        gens = [Perm.from_cycles("(" + ",".join(map(str, range(1, m + 1))) + ")", m), Perm.from_cycles(refl, m)]
        n, order = m, 2 * m
    elif name == "Cyclic":
        gens = [Perm.from_cycles("(" + ",".join(map(str, range(1, n + 1))) + ")", n)] if n > 1 else [Perm.identity(1)]
        order = n
    else:
        raise GroupSpecError(f"unknown permutation group {name!r}")
    label = f"{name}({2 * n if name == 'Dihedral' else n})"
    return GroupSpec("Perm", n, None, None, gens, label, order)


def parse_group(text):
    m = _SPEC.match(text)
    if not m:
        raise GroupSpecError(f"cannot parse group spec {text!r}")
    name, a, b = m.group(1), int(m.group(2)), m.group(3)
    if name in ("Sym", "Alt", "Dihedral", "Cyclic"):
        if b is not None:
            raise GroupSpecError(f"{name} takes one parameter")
        return permutation_group(name, a)
    fam = {"SL": "SL", "SU": "SU", "Sp": "Sp", "SP": "Sp"}.get(name)
    if fam is None or b is None:
        raise GroupSpecError(f"cannot parse group spec {text!r}")
    spec = GroupSpec(fam, a, int(b), label=f"{fam}({a},{b})")
    spec.form = default_form(spec)
    return spec
