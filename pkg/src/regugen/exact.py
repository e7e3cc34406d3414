"""Exact cyclotomic numbers and the ring Z[sqrt 2]."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

# ---------------------------------------------------------------------------
# cyclotomic polynomials


def _mobius(n):
    res, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    return -res if n > 1 else res


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdiv_exact(a, b):
    """Quotient of integer polynomials (low degree first), b monic."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Coefficients of Phi_n, low degree first."""
    num, den = [1], [1]
    for d in range(1, n + 1):
        if n % d:
            continue
        mu = _mobius(n // d)
        f = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _pmul(num, f)
        elif mu == -1:
            den = _pmul(den, f)
    return tuple(_pdiv_exact(num, den))


@lru_cache(maxsize=None)
def _power_table(n):
    """Row j: x^j mod Phi_n, for 0 <= j < n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        if top:
            cur = [c - top * phi[i] for i, c in enumerate(cur)]
    return tuple(rows), deg


class NonRationalError(ValueError):
    def __init__(self, x):
        self.terms = {j: c for j, c in enumerate(x.coeffs) if c and j}
        super().__init__(f"value is not rational; nonzero zeta-coefficients {self.terms}")


class Cyclotomic:
    """Element of Q(zeta_N) as coefficients of 1, z, ..., z^(phi(N)-1)."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N, coeffs):
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic is immutable")

    # constructors
    @classmethod
    def from_powers(cls, N, terms):
        """sum of c * zeta_N^j over (j, c) pairs."""
        rows, deg = _power_table(N)
        acc = [Fraction(0)] * deg
        for j, c in terms:
            c = Fraction(c)
            if not c:
                continue
            for i, r in enumerate(rows[j % N]):
                if r:
                    acc[i] += c * r
        return cls(N, acc)

    @classmethod
    def rational(cls, c, N=1):
        return cls.from_powers(N, [(0, c)])

    @classmethod
    def zeta(cls, N, j=1):
        return cls.from_powers(N, [(j, 1)])

    # conductor handling
    def lift(self, M):
        """Same number expressed in Q(zeta_M), N | M."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot lift conductor {self.N} to {M}")
        s = M // self.N
        return Cyclotomic.from_powers(M, [(j * s, c) for j, c in enumerate(self.coeffs)])

    def _common(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.N)
        if other.N == self.N:
            return self, other
        M = self.N * other.N // gcd(self.N, other.N)
        return self.lift(M), other.lift(M)

    def __add__(self, other):
        a, b = self._common(other)
        return Cyclotomic(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            c = Fraction(other)
            return Cyclotomic(self.N, [c * x for x in self.coeffs])
        a, b = self._common(other)
        prod = {}
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] = prod.get(i + j, 0) + x * y
        return Cyclotomic.from_powers(a.N, prod.items())

    __rmul__ = __mul__

    def conj(self):
        return Cyclotomic.from_powers(self.N, [(-j, c) for j, c in enumerate(self.coeffs)])

    def galois(self, k):
        """Image under zeta -> zeta^k, gcd(k, N) = 1."""
        if gcd(k, self.N) != 1:
            raise ValueError("k must be coprime to the conductor")
        return Cyclotomic.from_powers(self.N, [(j * k, c) for j, c in enumerate(self.coeffs)])

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_part(self):
        if not self.is_rational():
            raise NonRationalError(self)
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            try:
                other = Cyclotomic.rational(Fraction(other), self.N)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        x = self.reduced()
        return hash((x.N, x.coeffs))

    def reduced(self):
        """Representation in the least conductor dividing N (canonical for hashing)."""
        for d in sorted(d for d in range(1, self.N + 1) if self.N % d == 0):
            if d == self.N:
                return self
            cand = _descend(self, d)
            if cand is not None:
                return cand
        return self

    def __complex__(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.N)
        return complex(sum(float(c) * z**j for j, c in enumerate(self.coeffs)))

    def to_literal(self):
        """``[[j, "p/q"], ...]`` over powers of zeta_N (canonical basis)."""
        return [[j, str(c)] for j, c in enumerate(self.coeffs) if c]

    @classmethod
    def from_literal(cls, N, lit):
        return cls.from_powers(N, [(int(j), Fraction(c)) for j, c in lit])

    def __repr__(self):
        if self.is_rational():
            return str(self.rational_part())
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*z{self.N}^{j}")
        return " + ".join(terms)


def _descend(x, d):
    """x as an element of Q(zeta_d) if it lies there, else None."""
    s = x.N // d
    rows, deg = _power_table(d)
    # candidate: coefficients c'_i on zeta_d^i = zeta_N^(s*i); solve greedily
    # by matching the image of each basis element of Q(zeta_d) in Q(zeta_N).
    basis = [Cyclotomic.zeta(x.N, s * i) for i in range(deg)]
    # linear solve over Q (deg unknowns, phi(N) equations)
    m = len(x.coeffs)
    A = [[basis[i].coeffs[r] for i in range(deg)] + [x.coeffs[r]] for r in range(m)]
    piv_cols, row = [], 0
    for c in range(deg):
        p = next((r for r in range(row, m) if A[r][c]), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][c]
        A[row] = [v * inv for v in A[row]]
        for r in range(m):
            if r != row and A[r][c]:
                f = A[r][c]
                A[r] = [v - f * w for v, w in zip(A[r], A[row])]
        piv_cols.append(c)
        row += 1
    if any(A[r][deg] for r in range(row, m)):
        return None
    sol = [Fraction(0)] * deg
    for r, c in enumerate(piv_cols):
        sol[c] = A[r][deg]
    return Cyclotomic(d, sol)


# ---------------------------------------------------------------------------
# Z[sqrt 2]


class QuadraticSurd:
    """a + b*sqrt(2) with integer a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticSurd is immutable")

    @staticmethod
    def _coerce(x):
        return x if isinstance(x, QuadraticSurd) else QuadraticSurd(int(x), 0)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticSurd(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadraticSurd(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers leave Z[sqrt 2]")
        acc, base = QuadraticSurd(1), self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def conjugate(self):
        return QuadraticSurd(self.a, -self.b)

    def norm(self):
        return self.a * self.a - 2 * self.b * self.b

    def exact_div(self, n):
        """Division by a nonzero integer, which must be exact."""
        if self.a % n or self.b % n:
            raise ArithmeticError(f"{self} is not divisible by {n}")
        return QuadraticSurd(self.a // n, self.b // n)

    def sign(self):
        """Exact sign of a + b*sqrt(2)."""
        a, b = self.a, self.b
        if a >= 0 and b >= 0:
            return 0 if a == 0 and b == 0 else 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def is_integer(self):
        return self.b == 0

    def to_int(self):
        if self.b:
            raise ArithmeticError(f"{self} is not a rational integer")
        return self.a

    def __eq__(self, other):
        if isinstance(other, int):
            other = QuadraticSurd(other)
        if not isinstance(other, QuadraticSurd):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __repr__(self):
        return f"{self.a} + {self.b}*sqrt2"


SQRT2 = QuadraticSurd(0, 1)


def suzuki_q(m):
    """q = sqrt(2) * 2^m, so q^2 = 2^(2m+1)."""
    return QuadraticSurd(0, 2**m)


def surd_eval(coeffs, m):
    """Evaluate sum coeffs[i] * q^i over Z[sqrt 2] at q = sqrt(2) * 2^m.

    ``coeffs`` is a list (low degree first) of ints or QuadraticSurd values,
    or a dict mapping exponent to coefficient.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if isinstance(coeffs, dict):
        top = max(coeffs) if coeffs else 0
        coeffs = [coeffs.get(i, 0) for i in range(top + 1)]
    q = suzuki_q(m)
    acc = QuadraticSurd(0)
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


def rational_part(x):
    """Rational value of a cyclotomic number, or NonRationalError."""
    return x.rational_part()
