"""The implication diagram among the invariant properties, annotated with how each arrow is realized here."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

NODES = ("s", "p", "t", "a", "b", "d", "r", "u", "i")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    mechanism: str
    realized_by: str
    external: bool = False


EDGES = (
    Edge("s", "p", "split-dichotomy + smooth", "diagonal.smooth_split_witness, diagonal.split_side"),
    Edge("p", "t", "identity-morphism", "morphisms.builtin_morphism('p_to_t')"),
    Edge("p", "a", "complement-morphism", "morphisms.builtin_morphism('p_to_a')"),
    Edge("p", "b", "external-construction", "morphisms.builtin_morphism('p_to_b_stub')", external=True),
    Edge("b", "d", "successor-morphism", "morphisms.builtin_morphism('b_to_d')"),
    Edge("b", "r", "interval-coalescing pipeline", "morphisms.interval_split_witness"),
    Edge("r", "u", "identity-morphism", "morphisms.builtin_morphism('r_to_u')"),
    Edge("r", "i", "independence-extension pipeline", "morphisms.independence_extension"),
)


def diagram_json() -> dict:
    return {"nodes": list(NODES), "edges": [asdict(e) for e in EDGES]}


def diagram_dot() -> str:
    lines = ["digraph implications {", "  rankdir=TB;"]
    lines += [f"  {n};" for n in NODES]
    for e in EDGES:
        style = ", style=dashed, color=gray40" if e.external else ""
        lines.append(f'  {e.source} -> {e.target} [label="{e.mechanism}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_diagram(fmt: str) -> str:
    if fmt == "dot":
        return diagram_dot()
    if fmt == "json":
        return json.dumps(diagram_json(), indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown diagram format {fmt!r}")
