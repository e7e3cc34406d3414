"""One line per acceptance criterion, printed in the terminal summary."""

import itertools
import os
import time

import pytest

from conftest import ACCEPTANCE
from regugen import suites
from regugen.chartab import dixon_build
from regugen.classes import delta_brute
from regugen.report import FAIL, INCONCLUSIVE, PASS
from regugen.witnesses import beta_squared_mutant, get_witness, verify


def record(n, title, reports, allowed=(PASS,), t0=None):
    bad = [r for r in reports if r.status not in allowed]
    status = PASS if not bad else FAIL
    extra = f" ({len(reports)} checks"
    extra += f", {time.time() - t0:.1f}s)" if t0 else ")"
    if bad:
        extra += " failing: " + "; ".join(f"{r.check} -> {r.actual}" for r in bad)
    ACCEPTANCE[n] = f"[{status}] {n:>2}. {title}{extra}"
    return bad


def test_01_witness_suite():
    t0 = time.time()
    reps = suites.witness_suite()
    assert not record(1, "witness suite", reps, t0=t0)


def test_02_brute_structure_constants():
    t0 = time.time()
    reps = suites.brute_suite()
    assert not record(2, "brute structure constants 10 and 486", reps, t0=t0)


def test_03_generating_pairs():
    t0 = time.time()
    reps = suites.genpairs_suite() + suites.su42_theta_suite()
    assert not record(3, "generating pairs at least theta and at most delta", reps, t0=t0)


def test_04_formula_vs_brute():
    t0 = time.time()
    reps = suites.formula_oracle_suite()
    assert not record(4, "symplectic formula at q=3 against brute force", reps, t0=t0)


def test_05_table_vs_brute():
    t0 = time.time()
    reps = suites.table_vs_brute_suite() + suites.su42_table_suite()
    assert not record(5, "character-table constants against brute force", reps, t0=t0)


def test_06_catalog_integrity():
    reps = suites.catalog_suite()
    assert not record(6, "formula catalog integrity and constant round-trip", reps)


SANDWICH_2E6 = "inequality/2E6 sandwich"


def test_07_counting_inequalities():
    reps = suites.inequality_suite()
    record(7, "counting inequalities for 1 <= m <= 60", reps)
    # the twisted E6 sandwich is checked separately below; everything else must hold
    assert all(r.status == PASS for r in reps if not r.check.startswith(SANDWICH_2E6))


@pytest.mark.xfail(strict=True, reason="|2E6(2)| is about 0.51 * 2^77, so 2^77 < |G| fails at m = 1")
def test_07_twisted_e6_sandwich_whole_range():
    reps = [r for r in suites.inequality_suite() if r.check.startswith(SANDWICH_2E6)]
    assert reps and all(r.status == PASS for r in reps)


def test_08_structural_suites():
    t0 = time.time()
    reps = suites.structural_suite()
    assert not record(8, "structural suites", reps, t0=t0)


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("REGUGEN_SKIP_EXTENDED") == "1", reason="extended tier disabled")
def test_09_extended_tier():
    t0 = time.time()
    reps = suites.extended_suite()
    assert not record(9, "extended tier: SU(5,2) constant 53416", reps, allowed=(PASS, INCONCLUSIVE), t0=t0)


def test_10_property_checks(tables):
    from regugen.chain import build_chain
    from regugen.classes import delta_star
    from regugen.report import Report

    reps = []
    for name in ("Sym(4)", "SL(2,3)", "SL(2,5)", "SU(3,2)"):
        ct = tables(name)
        reps.append(Report.compare(f"class equation/{name}", ct.order, sum(c.size for c in ct.classes)))
        T = dixon_build(ct)
        reps.append(Report.compare(f"orthogonality/{name}", True, T.validate()))
        r, size, inv = len(ct), [c.size for c in ct.classes], ct.inverse
        ok = all(size[c] * delta_brute(ct, a, b, c) == size[a] * delta_brute(ct, b, inv[c], inv[a])
                 for a, b, c in itertools.product(range(r), repeat=3))
        reps.append(Report.compare(f"delta symmetry/{name}", True, ok))
        ok = all(delta_star(ct, a, b, c) <= delta_brute(ct, a, b, c)
                 for a, b, c in itertools.product(range(min(r, 5)), repeat=3))
        reps.append(Report.compare(f"delta* <= delta/{name}", True, ok))
        c1, c2 = build_chain(ct.gens, ct.U), build_chain(ct.gens, ct.U)
        reps.append(Report.compare(f"chain determinism/{name}", (c1.base, c1.transversal_sizes()),
                                   (c2.base, c2.transversal_sizes())))
    mutant = verify(beta_squared_mutant(get_witness("sl2-9")))
    reps.append(Report.compare("mutation sanity/sl2-9", True, any(r.status == FAIL for r in mutant)))
    assert not record(10, "property checks", reps)
