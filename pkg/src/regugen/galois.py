"""Exact arithmetic in small finite fields GF(p^k).

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{k-1} p^(k-1)``
where ``c_t`` is the coefficient of ``b^t`` and ``b`` is a root of the
field's defining polynomial.  All arithmetic goes through precomputed
``q x q`` tables, which also drive the vectorised matrix code in
:mod:`regugen.matrices`.
"""

from __future__ import annotations

import re
from functools import lru_cache

import numpy as np

# Conway polynomials, coefficients low -> high (monic).  GF(9) uses
# x^2 + 2x + 2, i.e. b^2 = b + 1.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (13, 1): (11, 1),
}

MAX_TABLE_Q = 1 << 12


class FieldError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q):
    """Return (p, k) with q = p^k, or None."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polyrem(a, m, p):
    """Remainder of a by m over GF(p); m need not be monic."""
    a, m = _trim(x % p for x in a), _trim(x % p for x in m)
    inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - dm
        for j in range(dm + 1):
            a[shift + j] = (a[shift + j] - c * m[j]) % p
        a = _trim(a)
    return a


def _polymulmod(a, b, m, p):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polyrem(out, m, p)


def _polygcd(a, b, p):
    a, b = _trim(x % p for x in a), _trim(x % p for x in b)
    while b:
        a, b = b, _polyrem(a, b, p)
    return a


def is_irreducible(poly, p):
    """Ben-Or test: no factor of degree <= k/2."""
    poly = [c % p for c in poly]
    k = len(poly) - 1
    if k < 1:
        return False
    xp = [0, 1]
    for _ in range(k // 2):
        acc, base, e = [1], xp, p
        while e:
            if e & 1:
                acc = _polymulmod(acc, base, poly, p)
            base = _polymulmod(base, base, poly, p)
            e >>= 1
        xp = acc
        d = list(xp) + [0] * max(0, 2 - len(xp))
        d[1] = (d[1] - 1) % p
        if len(_polygcd(poly, d, p)) > 1:
            return False
    return True


class Field:
    """GF(p^k) with a fixed defining polynomial.  Build via :func:`make_field`."""

    def __init__(self, p, k, poly):
        self.p, self.k = p, k
        self.q = p**k
        self.poly = tuple(poly)
        q = self.q
        self.dtype = np.uint8 if q <= 256 else np.uint16
        self.digits = np.array(
            [[(x // p**t) % p for t in range(k)] for x in range(q)], dtype=np.int64
        ).reshape(q, k)
        self.place = np.array([p**t for t in range(k)], dtype=np.int64)
        self._build_tables()

    # -- construction -----------------------------------------------------
    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        d = self.digits
        self.add = ((d[:, None, :] + d[None, :, :]) % p) @ self.place
        self.sub = ((d[:, None, :] - d[None, :, :]) % p) @ self.place
        self.neg = ((-d) % p) @ self.place
        # multiplication via powers of the generator b
        red = []  # b^s for s = 0..2k-2 as coefficient vectors
        for s in range(2 * k - 1):
            v = [0] * s + [1]
            red.append((_polyrem(v, list(self.poly), p) + [0] * k)[:k])
        red = np.array(red, dtype=np.int64)  # (2k-1, k)
        conv = np.zeros((q, q, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                conv[:, :, i + j] += d[:, None, i] * d[None, :, j]
        self.mul = ((conv @ red) % p) @ self.place
        self.add = self.add.astype(self.dtype)
        self.sub = self.sub.astype(self.dtype)
        self.neg = self.neg.astype(self.dtype)
        self.mul = self.mul.astype(self.dtype)
        inv = np.zeros(q, dtype=self.dtype)
        rows, cols = np.nonzero(self.mul == 1)
        inv[rows] = cols
        self.inv = inv
        self.beta = 1 if k == 1 else p  # element "b"
        if k == 1:
            # defining poly x + c0, so b = -c0
            self.beta = (-self.poly[0]) % p
        self._frob = {}

    # -- scalar helpers on encoded ints ----------------------------------
    def zero(self):
        return FieldScalar(self, 0)

    def one(self):
        return FieldScalar(self, 1)

    def gen(self):
        return FieldScalar(self, self.beta)

    def __call__(self, x):
        if isinstance(x, FieldScalar):
            if x.field is not self:
                raise FieldError("element belongs to a different field")
            return x
        if isinstance(x, str):
            return FieldScalar(self, self.parse(x))
        if isinstance(x, (int, np.integer)):
            return FieldScalar(self, self.from_int(int(x)))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def from_int(self, n):
        """Image of the integer n under Z -> GF(q)."""
        return int(n % self.p)

    def power(self, x, e):
        if e < 0:
            if x == 0:
                raise ZeroDivisionError("0 has no inverse")
            x, e = int(self.inv[x]), -e
        acc = 1
        while e:
            if e & 1:
                acc = int(self.mul[acc, x])
            x = int(self.mul[x, x])
            e >>= 1
        return acc

    def frob_table(self, e):
        """Table of x -> x^(p^e)."""
        e %= self.k
        t = self._frob.get(e)
        if t is None:
            t = np.array([self.power(x, self.p**e) for x in range(self.q)], dtype=self.dtype)
            self._frob[e] = t
        return t

    def order_of(self, x):
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        m, n = 1, x
        while n != 1:
            n = int(self.mul[n, x])
            m += 1
        return m

    def elements(self):
        return [FieldScalar(self, x) for x in range(self.q)]

    def primitive_element(self):
        for x in range(1, self.q):
            if self.order_of(x) == self.q - 1:
                return x
        raise FieldError("no primitive element")  # pragma: no cover

    def sqrt(self, x):
        """Some square root of x, or None."""
        for y in range(self.q):
            if int(self.mul[y, y]) == x:
                return y
        return None

    # -- text syntax -------------------------------------------------------
    _TERM = re.compile(r"^(\d+)?\*?(b(?:\^(-?\d+))?)?$")

    def parse(self, text):
        """Parse ``b^2+2*b+1`` style expressions (symbol ``b``)."""
        s = text.replace(" ", "")
        if not s:
            raise FieldError("empty field expression")
        if s[0] not in "+-":
            s = "+" + s
        parts = re.findall(r"([+-])([^+-]+)", s)
        if "".join(sgn + t for sgn, t in parts) != s:
            raise FieldError(f"cannot parse field expression {text!r}")
        acc = 0
        for sign, term in parts:
            m = self._TERM.match(term)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise FieldError(f"cannot parse term {term!r} in {text!r}")
            coef = int(m.group(1)) if m.group(1) is not None else 1
            val = self.from_int(coef)
            if m.group(2):
                e = int(m.group(3)) if m.group(3) is not None else 1
                val = int(self.mul[val, self.power(self.beta, e)])
            if sign == "-":
                val = int(self.neg[val])
            acc = int(self.add[acc, val])
        return acc

    def format(self, x):
        """Canonical text of an encoded element (polynomial in ``b``)."""
        x = int(x)
        if self.k == 1:
            return str(x)
        terms = []
        for t in range(self.k - 1, -1, -1):
            c = int(self.digits[x, t])
            if not c:
                continue
            if t == 0:
                terms.append(str(c))
            else:
                mon = "b" if t == 1 else f"b^{t}"
                terms.append(mon if c == 1 else f"{c}*{mon}")
        return "+".join(terms) if terms else "0"

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def _field(p, k, poly):
    return Field(p, k, poly)


def make_field(p, k=1, poly=None):
    """Validated GF(p^k).  ``poly`` is monic, coefficients low -> high."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if poly is None:
        if (p, k) not in CONWAY:
            raise FieldError(f"no built-in defining polynomial for GF({p}^{k}); pass poly")
        poly = CONWAY[(p, k)]
    poly = tuple(int(c) % p for c in poly)
    if len(poly) != k + 1 or poly[-1] != 1:
        raise FieldError("defining polynomial must be monic of degree k")
    if not is_irreducible(poly, p):
        raise FieldError(f"polynomial {poly} is reducible over GF({p})")
    if p**k > MAX_TABLE_Q:
        raise FieldError(f"GF({p}^{k}) is too large for table arithmetic")
    return _field(p, k, poly)


def field_of_size(q):
    pk = prime_power(q)
    if pk is None:
        raise FieldError(f"{q} is not a prime power")
    return make_field(*pk)


class FieldScalar:
    """An element of a :class:`Field`; immutable."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", int(value))

    def __setattr__(self, name, value):
        raise AttributeError("FieldScalar is immutable")

    @property
    def coeffs(self):
        return tuple(int(c) for c in self.field.digits[self.value])

    def _other(self, other):
        if isinstance(other, FieldScalar):
            if other.field is not self.field:
                raise FieldError("cross-field arithmetic")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldScalar(self.field, self.field.add[self.value, o])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldScalar(self.field, self.field.sub[self.value, o])

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldScalar(self.field, self.field.sub[o, self.value])

    def __neg__(self):
        return FieldScalar(self.field, self.field.neg[self.value])

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldScalar(self.field, self.field.mul[self.value, o])

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldScalar(self.field, self.field.inv[self.value])

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldScalar(self.field, o).inverse()

    def __pow__(self, e):
        return FieldScalar(self.field, self.field.power(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field is other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return self.field.format(self.value)


def frobenius(x, e=1):
    """x -> x^(p^e)."""
    return FieldScalar(x.field, x.field.frob_table(e)[x.value])


def multiplicative_order(x):
    """Least m >= 1 with x^m = 1."""
    if x.value == 0:
        raise FieldError("zero has no multiplicative order")
    return x.field.order_of(x.value)
