"""Design files: canonical JSON and the 0/1 incidence text."""

from __future__ import annotations

import json

from .design import Design
from .field import Automorphism, FieldSpec
from .projline import ProjectiveLine
from .ring import RingSpec


class MalformedDesign(ValueError):
    pass


def field_dict(R: RingSpec) -> dict:
    return {**R.field.to_dict(), "m": R.m}


def ring_from_dict(d: dict) -> RingSpec:
    K = FieldSpec(int(d["p"]), int(d["n"]), [int(c) for c in d["modulus"]])
    return RingSpec(K, Automorphism(K, int(d["m"])))


def point_legend(line: ProjectiveLine) -> list[dict]:
    R = line.ring
    return [{"kind": p.kind, "coord": R.to_json(p.coord)} for p in line.points]


def design_to_dict(design: Design, lambda3: int | None) -> dict:
    R = design.ring
    return {
        "field": field_dict(R),
        "m": R.m,
        "v": design.v,
        "s": design.s,
        "k": design.k,
        "lambda3": lambda3,
        "points": point_legend(design.line),
        "parallel_classes": design.parallel_classes,
        "blocks": [list(B) for B in sorted(tuple(sorted(B)) for B in design.blocks)],
    }


def dumps(obj: dict) -> str:
    """Canonical serialization: fixed key order, compact separators, trailing newline."""
    return json.dumps(obj, separators=(",", ":")) + "\n"


def loads_design(text: str) -> tuple[Design, dict]:
    """Parse a design file; returns the design and the raw header values.

    Only structural problems raise; block contents are left for
    verification to judge.
    """
    try:
        obj = json.loads(text)
        R = ring_from_dict(obj["field"])
        blocks = [tuple(int(i) for i in B) for B in obj["blocks"]]
        legend = obj["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDesign(f"cannot read design: {exc}") from exc
    if int(obj.get("m", R.m)) != R.m:
        raise MalformedDesign("top-level m disagrees with the field description")
    line = ProjectiveLine(R)
    if legend != point_legend(line):
        raise MalformedDesign("point legend does not match the canonical enumeration")
    if not blocks:
        raise MalformedDesign("design has no blocks")
    if any(not 0 <= i < line.v for B in blocks for i in B):
        raise MalformedDesign("block refers to a point index out of range")
    header = {k: obj.get(k) for k in ("v", "s", "k", "lambda3", "parallel_classes")}
    return Design(line, blocks), header


def incidence_text(design: Design) -> str:
    """v rows by b columns of '0'/'1'; columns follow the sorted block order."""
    blocks = sorted(tuple(sorted(B)) for B in design.blocks)
    rows = [["0"] * len(blocks) for _ in range(design.v)]
    for j, B in enumerate(blocks):
        for i in B:
            rows[i][j] = "1"
    return "\n".join("".join(r) for r in rows) + "\n"


def parse_incidence(line: ProjectiveLine, text: str) -> Design:
    rows = text.split()
    if len(rows) != line.v or len({len(r) for r in rows}) != 1:
        raise MalformedDesign("incidence matrix has the wrong shape")
    if any(c not in "01" for r in rows for c in r):
        raise MalformedDesign("incidence matrix must contain only 0 and 1")
    blocks = [tuple(i for i in range(line.v) if rows[i][j] == "1") for j in range(len(rows[0]))]
    return Design(line, blocks)

