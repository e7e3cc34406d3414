"""Plain-text generator files.

    field 3 2
    dim 3
    mat: u
    1, b, 0
    0, 1, b^2+1
    0, 0, 1
    perm: g (1,2,3,4)(5,6)
    assert: order u*v = 80

Names after ``mat:`` / ``perm:`` are optional.  ``assert:`` lines are kept
verbatim for witness files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dfield

from .galois import make_field, Field
from .matrices import Matrix
from .perms import Perm


class GenFileError(ValueError):
    pass


@dataclass
class GeneratorFile:
    field: Field | None = None
    dim: int | None = None
    elements: list = dfield(default_factory=list)  # (name or None, element)
    asserts: list = dfield(default_factory=list)
    group: str | None = None

    def named(self):
        return {n: e for n, e in self.elements if n}

    def generators(self):
        return [e for _, e in self.elements]


def format_matrix(g):
    return "\n".join(row.replace(",", ", ") for row in g.format_rows())


def format_element(g, name=None):
    tag = f" {name}" if name else ""
    if isinstance(g, Perm):
        return f"perm:{tag} {g}"
    return f"mat:{tag}\n{format_matrix(g)}"


def dump_generators(elements, names=None, group=None):
    elements = list(elements)
    names = names or [None] * len(elements)
    lines = []
    if group:
        lines.append(f"group {group}")
    mats = [g for g in elements if isinstance(g, Matrix)]
    if mats:
        F = mats[0].field
        lines += [f"field {F.p} {F.k}", f"dim {mats[0].n}"]
    for g, nm in zip(elements, names):
        lines.append(format_element(g, nm))
    return "\n".join(lines) + "\n"


_PERM = re.compile(r"^perm:\s*([A-Za-z_]\w*)?\s*(\(.*\)|\(\))\s*$")


def parse_generators(text):
    out = GeneratorFile()
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    i = 0
    while i < len(lines):
        ln = lines[i]
        i += 1
        if not ln:
            continue
        head = ln.split()
        if head[0] == "field":
            if len(head) != 3:
                raise GenFileError(f"bad field line {ln!r}")
            out.field = make_field(int(head[1]), int(head[2]))
        elif head[0] == "dim":
            out.dim = int(head[1])
        elif head[0] == "group":
            out.group = ln[len("group"):].strip()
        elif ln.startswith("perm:"):
            m = _PERM.match(ln)
            if not m:
                raise GenFileError(f"bad perm line {ln!r}")
            out.elements.append((m.group(1), Perm.from_cycles(m.group(2))))
        elif ln.startswith("mat:"):
            if out.field is None or out.dim is None:
                raise GenFileError("mat: block before field/dim header")
            name = ln[4:].strip() or None
            rows = []
            while len(rows) < out.dim:
                if i >= len(lines):
                    raise GenFileError("truncated mat: block")
                if lines[i]:
                    rows.append([t.strip() for t in lines[i].split(",")])
                i += 1
            if any(len(r) != out.dim for r in rows):
                raise GenFileError(f"matrix {name or ''} is not {out.dim}x{out.dim}")
            out.elements.append((name, Matrix.from_rows(out.field, rows)))
        elif ln.startswith("assert:"):
            out.asserts.append(ln[7:].strip())
        else:
            raise GenFileError(f"unrecognised line {ln!r}")
    return out
