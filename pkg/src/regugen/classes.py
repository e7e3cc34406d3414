"""Full enumeration of small groups, conjugacy classes and structure constants by counting."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .chain import ChainBudgetExceeded, batch_power, build_chain, element_order, inverse_array
from .genfile import format_element
from .groups import GroupSpec, expected_order, standard_generators, universe_of

ENUM_BUDGET = 3 * 10**7
CHUNK = 1 << 16


class EnumerationError(RuntimeError):
    pass


def worker_count():
    env = os.environ.get("REGUGEN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _letters(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("a") + r) + s
    return s


@dataclass(frozen=True)
class ClassInfo:
    index: int
    label: str
    size: int
    order: int
    rep: object  # Matrix or Perm
    rep_code: int


class ClassTable:
    """All elements of a group, sorted by code, with their conjugacy classes."""

    def __init__(self, universe, gens, codes, class_of, infos, inverse, name=""):
        self.U = universe
        self.gens = gens
        self.codes = codes  # sorted int64
        self.class_of = class_of  # class id per sorted position
        self.classes = infos
        self.inverse = inverse  # class id -> class id of inverses
        self.name = name

    @property
    def order(self):
        return len(self.codes)

    def __len__(self):
        return len(self.classes)

    def index_of(self, codes):
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, len(self.codes) - 1)
        if not np.all(self.codes[pos] == codes):
            raise KeyError("element not in group")
        return pos

    def class_ids(self, A):
        return self.class_of[self.index_of(self.U.encode(A))]

    def class_of_element(self, g):
        return int(self.class_ids(self.U.unwrap(g)[None])[0])

    def members(self, c):
        return self.U.decode(self.codes[self.class_of == c])

    def by_label(self, label):
        hits = [c.index for c in self.classes if c.label == label]
        if not hits:
            raise KeyError(f"no class labelled {label!r}")
        return hits[0]

    def with_order(self, o):
        return [c.index for c in self.classes if c.order == o]

    def to_json(self):
        return json.dumps(
            [{"label": c.label, "size": c.size, "elementOrder": c.order,
              "representative": format_element(c.rep)} for c in self.classes],
            indent=1,
        )


def enumerate_elements(chain, budget=ENUM_BUDGET):
    """Sorted codes of every element, as products of transversal representatives."""
    U = chain.U
    N = chain.order()
    if N > budget:
        raise EnumerationError(f"group order {N} exceeds enumeration budget {budget}")
    if not U.code_fits:
        raise EnumerationError("element codes do not fit in 64 bits")
    E = U.identity()[None]
    for L in reversed(chain.levels):
        parts = []
        for start in range(0, len(E), max(1, CHUNK // L.size)):
            blk = E[start:start + max(1, CHUNK // L.size)]
            prod = U.mul(L.reps[:, None], blk[None])
            parts.append(prod.reshape((-1,) + E.shape[1:]))
        E = np.concatenate(parts)
    codes = np.sort(U.encode(E))
    if len(np.unique(codes)) != N:
        raise EnumerationError("transversal products are not distinct")
    return codes


def _conj_images(U, codes, s, sinv):
    out = np.empty_like(codes)
    for start in range(0, len(codes), CHUNK):
        A = U.decode(codes[start:start + CHUNK])
        out[start:start + CHUNK] = U.encode(U.mul(U.mul(sinv, A), s))
    return out


def _ordered_classes(U, codes, comp, ncomp):
    sizes = np.bincount(comp, minlength=ncomp)
    # codes are sorted, so the first occurrence of each component is its least member
    _, first = np.unique(comp, return_index=True)
    least = codes[first]
    reps = U.decode(least)
    orders = [element_order(U.wrap(r)) for r in reps]
    key = sorted(range(ncomp), key=lambda c: (orders[c], -int(sizes[c]), int(least[c])))
    return key, sizes, least, orders


def class_table(gens, universe=None, target=None, name="", budget=ENUM_BUDGET, seed=0):
    U = universe or universe_of(gens)
    chain = build_chain(gens, U, target=target, seed=seed)
    codes = enumerate_elements(chain, budget)
    N = len(codes)
    arrays = [U.unwrap(g) for g in gens]
    rows, cols = [], []
    idx = np.arange(N)
    for a in arrays:
        ainv = inverse_array(U, a)
        img = _conj_images(U, codes, a, ainv)
        rows.append(idx)
        cols.append(np.searchsorted(codes, img))
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(N, N))
    ncomp, comp = connected_components(graph, directed=True, connection="weak")
    order, sizes, least, orders = _ordered_classes(U, codes, comp, ncomp)
    relabel = np.empty(ncomp, dtype=np.int32)
    relabel[order] = np.arange(ncomp, dtype=np.int32)
    class_of = relabel[comp]
    infos, count = [], {}
    for new, old in enumerate(order):
        o = orders[old]
        letter = _letters(count.get(o, 0))
        count[o] = count.get(o, 0) + 1
        rep = U.decode(least[old])
        infos.append(ClassInfo(new, f"{o}{letter}", int(sizes[old]), o, U.wrap(rep), int(least[old])))
    table = ClassTable(U, list(gens), codes, class_of, infos, None, name)
    inv_reps = np.stack([inverse_array(U, U.unwrap(c.rep)) for c in infos])
    table.inverse = [int(x) for x in table.class_ids(inv_reps)]
    return table


def enumerate_classes(spec, budget=ENUM_BUDGET):
    """ClassTable of a GroupSpec; the closure must match the expected order."""
    if not isinstance(spec, GroupSpec):
        raise TypeError("enumerate_classes expects a GroupSpec")
    gens = standard_generators(spec)
    U = universe_of(spec)
    target = expected_order(spec)
    if target is not None and target > budget:
        raise EnumerationError(f"group order {target} exceeds enumeration budget {budget}")
    t = class_table(gens, U, target=target, name=spec.name, budget=budget)
    if target is not None and t.order != target:
        raise EnumerationError(f"generators close to order {t.order}, expected {target}")
    return t


# ---------------------------------------------------------------------------
# structure constants by counting


def _rep_array(ct, c):
    return ct.U.unwrap(ct.classes[c].rep)


def _pair_mask(ct, c1, c2, c3):
    """Members g1 of c1 (as arrays) with g1^-1 g3 in c2."""
    U = ct.U
    g3inv = inverse_array(U, U.unwrap(ct.classes[c3].rep))
    target = ct.inverse[c2]
    G1 = ct.members(c1)
    keep = np.zeros(len(G1), dtype=bool)
    for start in range(0, len(G1), CHUNK):
        blk = G1[start:start + CHUNK]
        keep[start:start + CHUNK] = ct.class_ids(U.mul(g3inv, blk)) == target
    return G1, keep


def delta_brute(ct, c1, c2, c3):
    """#{(g1, g2) in c1 x c2 : g1 g2 = g3} for the stored representative g3 of c3."""
    _, keep = _pair_mask(ct, c1, c2, c3)
    return int(keep.sum())


def _generates(U, a, b, full_order, memo):
    key = tuple(sorted((int(U.encode(a[None])[0]), int(U.encode(b[None])[0]))))
    if key in memo:
        return memo[key]
    chain = build_chain([U.wrap(a), U.wrap(b)], U, target=full_order)
    memo[key] = chain.order() == full_order
    return memo[key]


def delta_star(ct, c1, c2, c3, full_order=None, workers=None):
    """Pairs counted by delta_brute that also generate a group of order full_order."""
    U = ct.U
    full_order = full_order or ct.order
    G1, keep = _pair_mask(ct, c1, c2, c3)
    g3 = _rep_array(ct, c3)
    firsts = G1[keep]
    seconds = U.mul(_inverse_batch(ct, firsts), g3)
    workers = workers or worker_count()

    def run(lo_hi):
        lo, hi = lo_hi
        memo = {}
        return sum(_generates(U, firsts[i], seconds[i], full_order, memo) for i in range(lo, hi))

    n = len(firsts)
    if n == 0:
        return 0
    step = max(1, -(-n // workers))
    spans = [(lo, min(n, lo + step)) for lo in range(0, n, step)]
    if workers == 1 or len(spans) == 1:
        return int(sum(run(s) for s in spans))
    with ThreadPoolExecutor(workers) as ex:
        return int(sum(ex.map(run, spans)))


def _inverse_batch(ct, A):
    if not len(A):
        return A
    orders = [ct.classes[c].order for c in ct.class_ids(A)]
    out = np.empty_like(A)
    for o in set(orders):
        sel = np.array([x == o for x in orders])
        out[sel] = batch_power(ct.U, A[sel], o - 1)
    return out


# ---------------------------------------------------------------------------
# subgroups


def subgroup_elements(U, gens, target=None, budget=ENUM_BUDGET):
    chain = build_chain(gens, U, target=target)
    return enumerate_elements(chain, budget)


def count_subgroup_conjugates_containing(ct, H_gens, x, limit=10**4):
    """Number of distinct conjugates H^g containing x, by orbit of the element set of H."""
    U = ct.U
    xa = U.unwrap(x)
    H = subgroup_elements(U, H_gens)
    if len(H) == ct.order:
        return 1
    xcode = int(U.encode(xa[None])[0])
    if len(H) == 1:
        return int(U.is_identity(xa))
    seen = {H.tobytes(): H}
    frontier = [H]
    gens = [U.unwrap(g) for g in ct.gens]
    invs = [inverse_array(U, g) for g in gens]
    while frontier:
        nxt = []
        for S in frontier:
            A = U.decode(S)
            for g, gi in zip(gens, invs):
                T = np.sort(U.encode(U.mul(U.mul(gi, A), g)))
                k = T.tobytes()
                if k not in seen:
                    seen[k] = T
                    nxt.append(T)
                    if len(seen) > limit:
                        raise ChainBudgetExceeded(f"more than {limit} conjugates of H")
        frontier = nxt
    return sum(1 for S in seen.values() if S[min(np.searchsorted(S, xcode), len(S) - 1)] == xcode)


def sigma_brute(ct, H_gens, c1, c2, c3, H_order=None):
    """Pairs (g1, g2) in (H n c1) x (H n c2) with g1 g2 = g3, g3 the ambient representative of c3.

    Summing the structure constants of H over its classes inside c1, c2 gives
    the same number, since every pair is counted once in exactly one term.
    """
    U = ct.U
    H = subgroup_elements(U, H_gens, target=H_order)
    g3 = _rep_array(ct, c3)
    g3code = int(U.encode(g3[None])[0])
    pos = min(np.searchsorted(H, g3code), len(H) - 1)
    if H[pos] != g3code:
        raise ValueError("g3 is not in H")
    cls = ct.class_of[ct.index_of(H)]
    G1 = U.decode(H[cls == c1])
    if not len(G1):
        return 0
    G2 = U.mul(_inverse_batch(ct, G1), g3)
    return int((ct.class_ids(G2) == c2).sum())


def conjugacy_orbit(U, gens, x, budget=ENUM_BUDGET):
    """Sorted codes of the conjugacy class of x, by breadth-first conjugation."""
    arrays = [U.unwrap(g) for g in gens]
    invs = [inverse_array(U, a) for a in arrays]
    seen = np.array([int(U.encode(U.unwrap(x)[None])[0])], dtype=np.int64)
    frontier = seen.copy()
    while len(frontier):
        found = []
        for a, ai in zip(arrays, invs):
            for start in range(0, len(frontier), CHUNK):
                A = U.decode(frontier[start:start + CHUNK])
                found.append(U.encode(U.mul(U.mul(ai, A), a)))
        new = np.unique(np.concatenate(found))
        new = new[~np.isin(new, seen, assume_unique=True)]
        seen = np.union1d(seen, new)
        if len(seen) > budget:
            raise EnumerationError(f"class exceeds {budget} elements")
        frontier = new
    return seen


def delta_by_orbits(U, gens, g1, g2, g3, budget=ENUM_BUDGET):
    """Structure constant from the two conjugacy classes alone (no full enumeration)."""
    C1 = conjugacy_orbit(U, gens, g1, budget)
    C2 = conjugacy_orbit(U, gens, g2, budget)
    g3a = U.unwrap(g3)
    e = element_order(g1)  # shared by every conjugate
    total = 0
    for start in range(0, len(C1), CHUNK):
        A = U.decode(C1[start:start + CHUNK])
        B = U.mul(batch_power(U, A, e - 1), g3a)
        total += int(np.isin(U.encode(B), C2).sum())
    return total
