"""Stabilizer chains over batched element arrays.

The chain is grown by seeded random Schreier-Sims (product replacement) and
then either closed by a known order bound or proved complete by sifting
every Schreier generator.  Base points are always the first moved standard
point, so a matrix chain has at most ``n`` levels.
"""

from __future__ import annotations

import numpy as np

from .galois import prime_power
from .groups import PermUniverse, universe_of
from .matrices import Matrix
from .perms import Perm

DEFAULT_BUDGET = 10**7
BATCH = 1 << 14


class ChainBudgetExceeded(RuntimeError):
    pass


class _Level:
    __slots__ = ("base", "gens", "ginv", "codes", "reps", "repinv", "order", "sorted_codes")

    def __init__(self, U, base):
        self.base = base
        self.gens, self.ginv = [], []
        ident = U.identity()[None]
        self.codes = np.array([U.base_code(base)], dtype=np.int64)
        self.reps = ident.copy()
        self.repinv = ident.copy()
        self._resort()

    def _resort(self):
        self.order = np.argsort(self.codes, kind="stable")
        self.sorted_codes = self.codes[self.order]

    def lookup(self, codes):
        pos = np.searchsorted(self.sorted_codes, codes)
        pos = np.minimum(pos, len(self.sorted_codes) - 1)
        found = self.sorted_codes[pos] == codes
        return self.order[pos], found

    @property
    def size(self):
        return len(self.codes)


class StabilizerChain:
    """Base, transversals and level generators for a finite group."""

    def __init__(self, universe, budget=DEFAULT_BUDGET):
        self.U = universe
        self.levels = []
        self.budget = budget
        self.gens = []
        self.complete = False

    # -- queries -----------------------------------------------------------
    def order(self):
        out = 1
        for L in self.levels:
            out *= L.size
        return out

    @property
    def base(self):
        return [L.base for L in self.levels]

    def transversal_sizes(self):
        return [L.size for L in self.levels]

    def sift(self, A, start=0):
        """Sift a batch; returns residues and the level where each stopped."""
        A = np.array(A, copy=True)
        stop = np.full(len(A), len(self.levels), dtype=np.int64)
        active = np.arange(len(A))
        for i in range(start, len(self.levels)):
            if not len(active):
                break
            L = self.levels[i]
            pts = self.U.base_image(A[active], L.base)
            idx, found = L.lookup(pts)
            stop[active[~found]] = i
            active = active[found]
            if len(active):
                A[active] = self.U.mul(L.repinv[idx[found]], A[active])
        return A, stop

    def contains(self, g):
        a = self.U.unwrap(g)[None]
        res, _ = self.sift(a)
        return bool(self.U.is_identity(res)[0])

    # -- growth ------------------------------------------------------------
    def _points_total(self):
        return sum(L.size for L in self.levels)

    def _extend(self, i, new_ids):
        L = self.levels[i]
        U = self.U
        gen_ids, frontier = list(new_ids), np.arange(L.size)
        while len(frontier):
            cand_codes, cand_src, cand_gen = [], [], []
            for gi in gen_ids:
                img = U.act(L.gens[gi], L.codes[frontier])
                _, found = L.lookup(img)
                keep = ~found
                cand_codes.append(img[keep])
                cand_src.append(frontier[keep])
                cand_gen.append(np.full(int(keep.sum()), gi))
            codes = np.concatenate(cand_codes)
            if not len(codes):
                break
            src = np.concatenate(cand_src)
            gid = np.concatenate(cand_gen)
            codes, first = np.unique(codes, return_index=True)
            src, gid = src[first], gid[first]
            if self._points_total() + len(codes) > self.budget:
                raise ChainBudgetExceeded(
                    f"orbit budget of {self.budget} points exceeded at level {i}")
            reps = np.empty((len(codes),) + L.reps.shape[1:], dtype=L.reps.dtype)
            rinv = np.empty_like(reps)
            for gi in np.unique(gid):
                sel = gid == gi
                reps[sel] = U.mul(L.gens[gi], L.reps[src[sel]])
                rinv[sel] = U.mul(L.repinv[src[sel]], L.ginv[gi])
            start = L.size
            L.codes = np.concatenate([L.codes, codes])
            L.reps = np.concatenate([L.reps, reps])
            L.repinv = np.concatenate([L.repinv, rinv])
            L._resort()
            frontier = np.arange(start, L.size)
            gen_ids = range(len(L.gens))

    def _inverse(self, a):
        return inverse_array(self.U, a)

    def add_residue(self, h, stop, only_stop=False):
        """Insert a non-identity residue that fixes base points 0..stop-1.

        With ``only_stop`` the residue joins the generators of its own level
        only.  Transversal products stay lower bounds on the order, but the
        levels must be :meth:`saturate`-d before any Schreier check.
        """
        if stop == len(self.levels):
            b = self.U.first_moved(h)
            self.levels.append(_Level(self.U, b))
        hinv = self._inverse(h)
        for i in range(stop if only_stop else 0, stop + 1):
            L = self.levels[i]
            L.gens.append(h)
            L.ginv.append(hinv)
            self._extend(i, [len(L.gens) - 1])

    def saturate(self):
        """Make every level's generators include those of all deeper levels."""
        for i in range(len(self.levels) - 2, -1, -1):
            L, D = self.levels[i], self.levels[i + 1]
            have = {g.tobytes() for g in L.gens}
            new = []
            for g, gi in zip(D.gens, D.ginv):
                if g.tobytes() not in have:
                    have.add(g.tobytes())
                    L.gens.append(g)
                    L.ginv.append(gi)
                    new.append(len(L.gens) - 1)
            if new:
                self._extend(i, new)

    def _sift_and_add(self, A, start=0, only_stop=False):
        res, stop = self.sift(A, start)
        bad = ~self.U.is_identity(res)
        if not bad.any():
            return False
        j = int(np.nonzero(bad)[0][0])
        self.add_residue(res[j], int(stop[j]), only_stop)
        return True

    def schreier_check(self, target=None):
        """Sift all Schreier generators bottom-up; add residues until none remain."""
        U = self.U
        i = len(self.levels) - 1
        while i >= 0:
            if target is not None and self.order() == target:
                return
            L = self.levels[i]
            changed = False
            for gi in range(len(L.gens)):
                s = L.gens[gi]
                for lo in range(0, L.size, BATCH):
                    sl = slice(lo, min(lo + BATCH, L.size))
                    prod = U.mul(s, L.reps[sl])
                    idx, found = L.lookup(U.base_image(prod, L.base))
                    assert found.all()
                    sg = U.mul(L.repinv[idx], prod)
                    if self._sift_and_add(sg, i + 1):
                        changed = True
                        break
                if changed:
                    break
            if changed:
                i = len(self.levels) - 1
            else:
                i -= 1
        self.complete = True


def inverse_array(U, a):
    if isinstance(U, PermUniverse):
        inv = np.empty_like(a)
        inv[a] = np.arange(len(a), dtype=a.dtype)
        return inv
    return np.array(Matrix(U.field, a).inverse().a)


class _ProductReplacement:
    def __init__(self, U, gens, rng, length=10, warmup=40):
        self.U = U
        self.rng = rng
        pool = list(gens)
        while len(pool) < length:
            pool += gens
        self.pool = [np.array(g) for g in pool[: max(length, len(gens))]]
        self.acc = U.identity()
        for _ in range(warmup):
            self.next()

    def next(self):
        n = len(self.pool)
        i, j = self.rng.choice(n, size=2, replace=False)
        if self.rng.random() < 0.5:
            self.pool[i] = self.U.mul(self.pool[i], self.pool[j])
        else:
            self.pool[i] = self.U.mul(self.pool[j], self.pool[i])
        self.acc = self.U.mul(self.acc, self.pool[i])
        return self.acc


def build_chain(gens, universe=None, target=None, seed=0, budget=DEFAULT_BUDGET, patience=30,
                verify=True):
    """Stabilizer chain of <gens>.

    ``target`` is an upper bound on the group order known to the caller (for
    instance the order of an ambient group containing every generator); the
    construction stops as soon as the transversal product reaches it, which
    is then exact.  Otherwise the chain is proved complete by Schreier
    generator sifting.
    """
    gens = list(gens)
    U = universe or universe_of(gens)
    arrays = [U.unwrap(g) for g in gens]
    arrays = [a for a in arrays if not U.is_identity(a)]
    chain = StabilizerChain(U, budget)
    chain.gens = arrays
    if not arrays:
        chain.complete = True
        return chain
    lazy = target is not None
    for a in arrays:
        chain._sift_and_add(a[None])
    rng = np.random.default_rng(seed)
    pr = _ProductReplacement(U, arrays, rng)
    quiet = 0
    while quiet < patience:
        if lazy and chain.order() >= target:
            break
        if chain._sift_and_add(pr.next()[None], only_stop=lazy):
            quiet = 0
        else:
            quiet += 1
    if lazy and chain.order() >= target:
        chain.complete = True
        return chain
    if verify:
        chain.saturate()
        chain.schreier_check(target)
    return chain


# ---------------------------------------------------------------------------
# element orders


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _order_bound_factors(q, n):
    """Prime factorisation of a multiple of every element order in GL_n(q)."""
    p, _ = prime_power(q)
    fac = {}
    for i in range(1, n + 1):
        for r, e in _factor(q**i - 1).items():
            fac[r] = max(fac.get(r, 0), e)
    pe, e = 1, 0
    while pe < n:
        pe *= p
        e += 1
    fac[p] = max(fac.get(p, 0), e)
    return fac


def element_order(g):
    """Least m >= 1 with g^m = 1 for a Matrix or Perm."""
    if isinstance(g, Perm):
        return g.order()
    if not isinstance(g, Matrix):
        raise TypeError("element_order expects a Matrix or Perm")
    if g.det() == 0:
        raise ValueError("singular matrix has no order")
    fac = _order_bound_factors(g.field.q, g.n)
    m = 1
    for r, e in fac.items():
        m *= r**e
    for r, e in fac.items():
        for _ in range(e):
            if m % r == 0 and (g ** (m // r)).is_identity():
                m //= r
            else:
                break
    return m


def batch_power(U, A, e):
    """A**e for a batch of elements (e >= 0)."""
    acc = np.broadcast_to(U.identity(), A.shape).copy()
    base = A
    while e:
        if e & 1:
            acc = U.mul(acc, base)
        e >>= 1
        if e:
            base = U.mul(base, base)
    return acc


def group_order(gens, target=None, **kw):
    return build_chain(gens, target=target, **kw).order()
