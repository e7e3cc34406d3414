"""regugen command line: every subcommand prints JSON reports, one per line."""

from __future__ import annotations

import argparse
import json
import sys

from . import suites
from .chain import ChainBudgetExceeded
from .chartab import CharacterTable, TableError, ThetaInput, delta_from_table, dixon_build, theta
from .classes import EnumerationError, delta_brute, delta_star, enumerate_classes
from .formulas import FormulaError, formula_eval, verify_union_bound
from .groups import parse_group
from .report import COMPUTED, DIRECT, FAIL, INCONCLUSIVE, PASS, PUBLISHED, Report, exit_code
from .witnesses import get_witness, verify, witness_ids


class UsageError(Exception):
    pass


def resolve_classes(ct, labels, index=None):
    """Class ids for three labels; a bare element order must be disambiguated by --class-index."""
    if index:
        ids = [int(x) for x in index.split(",")]
        if len(ids) != 3 or not all(0 <= i < len(ct) for i in ids):
            raise UsageError(f"--class-index needs three ids in 0..{len(ct) - 1}")
        return ids
    out = []
    for lab in labels:
        hits = [c for c in ct.classes if c.label == lab]
        if not hits and lab.isdigit():
            hits = [c for c in ct.classes if c.order == int(lab)]
        if not hits:
            raise UsageError(f"no class {lab!r}; known: {' '.join(c.label for c in ct.classes)}")
        if len(hits) > 1:
            cands = ", ".join(f"{c.index}={c.label} (size {c.size})" for c in hits)
            raise UsageError(f"{lab!r} is ambiguous: {cands}; pass --class-index")
        out.append(hits[0].index)
    return out


def _value(check, value, basis=COMPUTED, expected=None, **kw):
    if expected is None:
        return Report(check, PASS, value, value, basis, **kw)
    return Report.compare(check, expected, value, basis, **kw)


def cmd_witness(a):
    if a.all:
        ids = witness_ids()
    elif a.id:
        ids = [a.id]
    else:
        raise UsageError("witness verify needs an id or --all")
    out = []
    for wid in ids:
        out += verify(get_witness(wid))
    return out


def cmd_classes(a):
    ct = enumerate_classes(parse_group(a.group))
    rows = json.loads(ct.to_json())
    return [Report(f"classes/{a.group}", PASS, ct.order, sum(c.size for c in ct.classes), DIRECT,
                   extra={"classes": rows})]


def _table_for(a):
    ct = enumerate_classes(parse_group(a.group))
    return ct, resolve_classes(ct, a.classes, a.class_index)


def cmd_delta(a):
    if a.method == "formula":
        if not a.formula:
            raise UsageError("delta formula needs --formula ID")
        params = {}
        for kv in a.param or []:
            k, v = kv.split("=")
            params[k] = int(v)
        v = formula_eval(a.formula, allow_outside=a.allow_outside, **params)
        return [_value(f"delta-formula/{a.formula}", v, PUBLISHED, a.expect, extra=params)]
    ct, ids = _table_for(a)
    labels = " ".join(ct.classes[i].label for i in ids)
    if a.method == "brute":
        v = delta_brute(ct, *ids)
    else:
        v = delta_from_table(dixon_build(ct), *ids)
    return [_value(f"delta-{a.method}/{a.group} {labels}", v, COMPUTED, a.expect)]


def cmd_genpairs(a):
    ct, ids = _table_for(a)
    labels = " ".join(ct.classes[i].label for i in ids)
    ds = delta_star(ct, *ids)
    d = delta_brute(ct, *ids)
    return [Report(f"genpairs/{a.group} {labels}", PASS if ds <= d else FAIL, "<= delta", ds, COMPUTED,
                   extra={"delta": d})]


def cmd_theta(a):
    corr = []
    for c in a.correction or []:
        h, s = c.split(":")
        corr.append((int(h), int(s)))
    r = theta(ThetaInput(a.delta, tuple(corr)))
    rep = _value("theta", r.value, DIRECT, a.expect)
    if r.negative:
        rep.detail = "negative: the lower bound is vacuous"
    return [rep]


def cmd_inequality(a):
    fam = {"f4": "F4", "2e6": "2E6"}[a.family.lower()]
    out = []
    for m in range(1, a.max_m + 1):
        r = verify_union_bound(fam, m)
        out.append(Report(f"inequality/{fam} m={m}", PASS if r["ok"] else FAIL, True, r["ok"], PUBLISHED,
                          extra={"union_bound": r["union_bound"], "sandwich": r["sandwich"],
                                 "margin": str(r["margin"])}))
    return out


def cmd_chartab(a):
    if a.action == "build":
        ct = enumerate_classes(parse_group(a.group))
        T = dixon_build(ct)
        text = T.to_json()
        if a.table_out:
            with open(a.table_out, "w") as fh:
                fh.write(text)
        return [Report(f"chartab/build {a.group}", PASS, ct.order, T.order, COMPUTED,
                       extra={"degrees": T.degrees})]
    if not a.file:
        raise UsageError("chartab check needs a file")
    with open(a.file) as fh:
        text = fh.read()
    try:
        CharacterTable.from_json(text)
        return [Report(f"chartab/check {a.file}", PASS, "valid", "valid", DIRECT)]
    except (TableError, ValueError, KeyError) as e:
        return [Report(f"chartab/check {a.file}", FAIL, "valid", "invalid", DIRECT, detail=str(e))]


def cmd_suite(a):
    reps = suites.desk_suite()
    if a.which == "extended":
        reps += suites.extended_suite()
    return reps


def build_parser():
    # accepted before or after the subcommand
    timing = argparse.ArgumentParser(add_help=False)
    timing.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS, help="omit runtime fields")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", default=argparse.SUPPRESS, help="also write all reports to this file as a JSON array")
    common = [timing, out]

    p = argparse.ArgumentParser(prog="regugen", description=__doc__, parents=common)
    p.set_defaults(out=None, no_timing=False)
    sub = p.add_subparsers(dest="cmd", required=True)

    w = sub.add_parser("witness", parents=common)
    w.add_argument("action", choices=["verify"])
    w.add_argument("id", nargs="?")
    w.add_argument("--all", action="store_true")
    w.set_defaults(fn=cmd_witness)

    c = sub.add_parser("classes", parents=common)
    c.add_argument("--group", required=True)
    c.set_defaults(fn=cmd_classes)

    def class_args(q):
        q.add_argument("--group")
        q.add_argument("--classes", nargs=3, metavar="LABEL")
        q.add_argument("--class-index", help="three class ids i,j,k")
        q.add_argument("--expect", type=int)

    d = sub.add_parser("delta", parents=common)
    d.add_argument("method", choices=["brute", "table", "formula"])
    class_args(d)
    d.add_argument("--formula")
    d.add_argument("--param", action="append", help="name=value")
    d.add_argument("--allow-outside", action="store_true")
    d.set_defaults(fn=cmd_delta)

    g = sub.add_parser("genpairs", parents=common)
    class_args(g)
    g.set_defaults(fn=cmd_genpairs)

    t = sub.add_parser("theta", parents=common)
    t.add_argument("--delta", type=int, required=True)
    t.add_argument("--correction", action="append", help="h:sigma")
    t.add_argument("--expect", type=int)
    t.set_defaults(fn=cmd_theta)

    i = sub.add_parser("inequality", parents=common)
    i.add_argument("--family", required=True, choices=["f4", "2e6", "F4", "2E6"])
    i.add_argument("--max-m", type=int, default=60)
    i.set_defaults(fn=cmd_inequality)

    ch = sub.add_parser("chartab", parents=[timing])
    ch.add_argument("action", choices=["build", "check"])
    ch.add_argument("file", nargs="?")
    ch.add_argument("--group")
    ch.add_argument("--out", dest="table_out", help="file for the built table")
    ch.set_defaults(fn=cmd_chartab)

    s = sub.add_parser("suite", parents=common)
    s.add_argument("which", choices=["desk", "extended"])
    s.set_defaults(fn=cmd_suite)
    return p


def run(argv=None, stream=None):
    stream = stream or sys.stdout
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.cmd in ("delta", "genpairs") and getattr(a, "method", None) != "formula":
        if not a.group or not (a.classes or a.class_index):
            parser.error("--group and --classes (or --class-index) are required")
    if a.cmd == "chartab" and a.action == "build":
        if not a.group:
            parser.error("chartab build needs --group")
    try:
        reports = a.fn(a)
    except (UsageError, OSError) as e:
        parser.error(str(e))
    except (ChainBudgetExceeded, EnumerationError) as e:
        reports = [Report(a.cmd, INCONCLUSIVE, None, None, DIRECT, detail=str(e))]
    except FormulaError as e:
        reports = [Report(a.cmd, FAIL, None, None, DIRECT, detail=str(e))]
    reports = sorted(reports, key=lambda r: r.check) if a.cmd == "suite" else reports
    for r in reports:
        stream.write(r.to_json(not a.no_timing) + "\n")
    if a.out:
        with open(a.out, "w") as fh:
            json.dump([r.to_dict(not a.no_timing) for r in reports], fh, indent=1)
    return exit_code(reports)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
