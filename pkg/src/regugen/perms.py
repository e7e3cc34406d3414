"""Permutations of {1..n} in cycle notation.

Left action, right-to-left composition: ``(g*h)(x) == g(h(x))``.
"""

from __future__ import annotations

import re
from math import lcm

_CYCLE = re.compile(r"\(([^()]*)\)")


class PermError(ValueError):
    pass


class Perm:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise PermError("not a permutation")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def from_cycles(cls, text, degree=None):
        """Parse ``(1,2,3)(4,5)``; points are 1-based."""
        text = text.strip()
        cycles = []
        rest = _CYCLE.sub("", text).strip()
        if rest:
            raise PermError(f"bad cycle notation: {text!r}")
        top = 0
        for body in _CYCLE.findall(text):
            body = body.strip()
            if not body:
                continue
            pts = [int(t) for t in body.split(",")]
            if min(pts) < 1 or len(set(pts)) != len(pts):
                raise PermError(f"bad cycle {body!r}")
            cycles.append(pts)
            top = max(top, *pts)
        n = max(top, degree or 0)
        img = list(range(n))
        seen = set()
        for c in cycles:
            if seen & set(c):
                raise PermError("cycles are not disjoint")
            seen |= set(c)
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b - 1
        return cls(img)

    @property
    def degree(self):
        return len(self.images)

    def padded(self, n):
        if n < self.degree:
            raise PermError("cannot shrink a permutation")
        return Perm(self.images + tuple(range(self.degree, n)))

    def _align(self, other):
        n = max(self.degree, other.degree)
        return self.padded(n), other.padded(n)

    def __mul__(self, other):
        a, b = self._align(other)
        return Perm(a.images[x] for x in b.images)

    __matmul__ = __mul__

    def __call__(self, x):
        """Image of the 1-based point x."""
        return self.images[x - 1] + 1 if x <= self.degree else x

    def inverse(self):
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Perm(inv)

    def __pow__(self, e):
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        acc = Perm.identity(self.degree)
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def cycles(self):
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j + 1)
                j = self.images[j]
            out.append(tuple(c))
        return out

    def order(self):
        return lcm(1, *(len(c) for c in self.cycles()))

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def _trimmed(self):
        im = list(self.images)
        while im and im[-1] == len(im) - 1:
            im.pop()
        return tuple(im)

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self._trimmed() == other._trimmed()

    def __hash__(self):
        return hash(self._trimmed())

    def __str__(self):
        cs = self.cycles()
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cs) or "()"

    __repr__ = __str__
