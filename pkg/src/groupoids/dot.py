"""DOT rendering of quivers, groupoids, and morphisms."""

from __future__ import annotations

from .groupoid import Groupoid, GroupoidMorphism
from .quiver import Quiver


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def quiver_to_dot(q: Quiver, name: str = "quiver") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    for v in sorted(q.vertices):
        lines.append(f"  {_quote(v)};")
    for a in sorted(q.arrows):
        lines.append(f"  {_quote(q.source[a])} -> {_quote(q.target[a])} [label={_quote(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def groupoid_to_dot(g: Groupoid, name: str = "groupoid") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    for v in sorted(g.vertices):
        lines.append(f"  {_quote(v)};")
    for a in sorted(g.arrows):
        style = ' style=dashed' if g.is_unit(a) else ""
        lines.append(
            f"  {_quote(g.source(a))} -> {_quote(g.target(a))} [label={_quote(a)}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def morphism_to_dot(f: GroupoidMorphism, name: str = "morphism") -> str:
    """Two clusters plus dotted mapping edges between vertices."""
    lines = [f"digraph {_quote(name)} {{"]
    lines.append("  subgraph cluster_domain {")
    lines.append('    label="domain";')
    for v in sorted(f.domain.vertices):
        lines.append(f"    {_quote('d:' + v)} [label={_quote(v)}];")
    for a in sorted(f.domain.arrows):
        lines.append(
            f"    {_quote('d:' + f.domain.source(a))} -> {_quote('d:' + f.domain.target(a))}"
            f" [label={_quote(a)}];"
        )
    lines.append("  }")
    lines.append("  subgraph cluster_codomain {")
    lines.append('    label="codomain";')
    for v in sorted(f.codomain.vertices):
        lines.append(f"    {_quote('c:' + v)} [label={_quote(v)}];")
    for a in sorted(f.codomain.arrows):
        lines.append(
            f"    {_quote('c:' + f.codomain.source(a))} -> {_quote('c:' + f.codomain.target(a))}"
            f" [label={_quote(a)}];"
        )
    lines.append("  }")
    for v in sorted(f.domain.vertices):
        lines.append(
            f"  {_quote('d:' + v)} -> {_quote('c:' + f.vertex_map[v])}"
            " [style=dotted, constraint=false];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
