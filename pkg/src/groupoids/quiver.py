"""Finite quivers, their morphisms, equivalence pairs, quotients, and products.

A quiver is a directed multigraph given by explicit finite tables. Identifiers
are opaque strings; isolated vertices are allowed everywhere and never pruned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidEquivalencePair, SchurianRequired, VertexSetMismatch
from .util import Partition


@dataclass(frozen=True)
class Quiver:
    vertices: frozenset[str]
    arrows: frozenset[str]
    source: dict[str, str]
    target: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arrows", frozenset(self.arrows))

    def arrows_between(self, a: str, b: str) -> list[str]:
        return sorted(x for x in self.arrows if self.source[x] == a and self.target[x] == b)

    def star(self, v: str) -> list[str]:
        """Outgoing star at v."""
        return sorted(x for x in self.arrows if self.source[x] == v)

    def loops(self, v: str) -> list[str]:
        return self.arrows_between(v, v)

    def is_schurian(self) -> bool:
        seen = set()
        for x in self.arrows:
            key = (self.source[x], self.target[x])
            if key in seen:
                return False
            seen.add(key)
        return True

    def is_complete_of_degree(self, d: int) -> bool:
        vs = sorted(self.vertices)
        return all(len(self.arrows_between(a, b)) == d for a in vs for b in vs)

    def __repr__(self) -> str:
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def validate_quiver(q: Quiver) -> list[str]:
    report = []
    for x in sorted(q.arrows):
        if x not in q.source:
            report.append(f"arrow {x}: missing source")
        elif q.source[x] not in q.vertices:
            report.append(f"arrow {x}: dangling source {q.source[x]}")
        if x not in q.target:
            report.append(f"arrow {x}: missing target")
        elif q.target[x] not in q.vertices:
            report.append(f"arrow {x}: dangling target {q.target[x]}")
    for x in sorted(set(q.source) | set(q.target)):
        if x not in q.arrows:
            report.append(f"source/target table mentions unknown arrow {x}")
    overlap = q.vertices & q.arrows
    if overlap:
        report.append(f"vertex and arrow identifier spaces overlap: {sorted(overlap)}")
    return report


@dataclass(frozen=True)
class QuiverMorphism:
    domain: Quiver
    codomain: Quiver
    arrow_map: dict[str, str]
    vertex_map: dict[str, str]

    def apply(self, arrow: str) -> str:
        return self.arrow_map[arrow]

    def apply_vertex(self, v: str) -> str:
        return self.vertex_map[v]

    def __repr__(self) -> str:
        return f"QuiverMorphism({self.domain!r} -> {self.codomain!r})"


def identity_morphism(q: Quiver) -> QuiverMorphism:
    return QuiverMorphism(q, q, {x: x for x in q.arrows}, {v: v for v in q.vertices})


def compose_quiver_morphisms(f: QuiverMorphism, g: QuiverMorphism) -> QuiverMorphism:
    """First f, then g (g∘f)."""
    if f.codomain is not g.domain and f.codomain != g.domain:
        raise VertexSetMismatch("composition: codomain of first != domain of second")
    return QuiverMorphism(
        f.domain,
        g.codomain,
        {x: g.arrow_map[f.arrow_map[x]] for x in f.domain.arrows},
        {v: g.vertex_map[f.vertex_map[v]] for v in f.domain.vertices},
    )


def validate_morphism(f: QuiverMorphism) -> list[str]:
    report = []
    for x in sorted(f.domain.arrows):
        if x not in f.arrow_map:
            report.append(f"arrow map undefined on {x}")
    for v in sorted(f.domain.vertices):
        if v not in f.vertex_map:
            report.append(f"vertex map undefined on {v}")
    if report:
        return report
    for x in sorted(f.domain.arrows):
        y = f.arrow_map[x]
        if y not in f.codomain.arrows:
            report.append(f"arrow {x} maps outside codomain: {y}")
            continue
        if f.codomain.source[y] != f.vertex_map[f.domain.source[x]]:
            report.append(f"arrow {x}: source does not commute")
        if f.codomain.target[y] != f.vertex_map[f.domain.target[x]]:
            report.append(f"arrow {x}: target does not commute")
    for v in sorted(f.domain.vertices):
        if f.vertex_map[v] not in f.codomain.vertices:
            report.append(f"vertex {v} maps outside codomain")
    return report


@dataclass(frozen=True)
class MorphismClassification:
    # "faithful" = injective arrow map, "full" = surjective arrow map; the
    # diagram categories here have a single global hom collection per map.
    faithful: bool
    full: bool
    fully_faithful: bool
    injective_on_vertices: bool
    surjective_on_vertices: bool
    strong: bool           # vertex map injective (strong-homomorphism convention)
    strong_over_base: bool  # vertex map is the identity
    mono: bool
    epi: bool


def classify_morphism(f: QuiverMorphism) -> MorphismClassification:
    a_inj = len(set(f.arrow_map.values())) == len(f.domain.arrows)
    a_sur = set(f.arrow_map.values()) >= f.codomain.arrows
    v_inj = len(set(f.vertex_map.values())) == len(f.domain.vertices)
    v_sur = set(f.vertex_map.values()) >= f.codomain.vertices
    v_id = all(f.vertex_map[v] == v for v in f.domain.vertices)
    return MorphismClassification(
        faithful=a_inj,
        full=a_sur,
        fully_faithful=a_inj and a_sur,
        injective_on_vertices=v_inj,
        surjective_on_vertices=v_sur,
        strong=v_inj,
        strong_over_base=v_id and f.domain.vertices == f.codomain.vertices,
        mono=a_inj and v_inj,
        epi=a_sur and v_sur,
    )


# ---------------------------------------------------------------------------
# Equivalence pairs and quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalencePair:
    """A pair of partitions (~ on arrows, ≈ on vertices)."""

    arrow_partition: Partition
    vertex_partition: Partition


def discrete_pair(q: Quiver) -> EquivalencePair:
    return EquivalencePair(Partition(q.arrows), Partition(q.vertices))


def validate_equivalence_pair(q: Quiver, e: EquivalencePair) -> list[str]:
    report = []
    if e.arrow_partition.carrier != q.arrows:
        report.append("arrow partition does not cover the arrow set exactly")
    if e.vertex_partition.carrier != q.vertices:
        report.append("vertex partition does not cover the vertex set exactly")
    if report:
        return report
    for block in e.arrow_partition.blocks():
        rep = block[0]
        for x in block[1:]:
            if not e.vertex_partition.same(q.source[x], q.source[rep]):
                report.append(f"arrows {rep} ~ {x} but sources not ≈-equivalent")
            if not e.vertex_partition.same(q.target[x], q.target[rep]):
                report.append(f"arrows {rep} ~ {x} but targets not ≈-equivalent")
    return report


def min_vertex_equivalence(q: Quiver, arrow_partition: Partition) -> EquivalencePair:
    """Smallest vertex equivalence making (~, ≈) an equivalence pair."""
    vp = Partition(q.vertices)
    for block in arrow_partition.blocks():
        rep = block[0]
        for x in block[1:]:
            vp.union(q.source[rep], q.source[x])
            vp.union(q.target[rep], q.target[x])
    return EquivalencePair(arrow_partition, vp)


def max_arrow_equivalence(q: Quiver, vertex_partition: Partition) -> EquivalencePair:
    """Largest arrow equivalence compatible with ≈: merge arrows with ≈-equal endpoints."""
    ap = Partition(q.arrows)
    by_class: dict[tuple[str, str], str] = {}
    for x in sorted(q.arrows):
        key = (vertex_partition.find(q.source[x]), vertex_partition.find(q.target[x]))
        if key in by_class:
            ap.union(by_class[key], x)
        else:
            by_class[key] = x
    return EquivalencePair(ap, vertex_partition)


def schurian_min_arrow_equivalence(q: Quiver, vertex_partition: Partition) -> EquivalencePair:
    """Smallest arrow equivalence with Schurian quotient; requires q Schurian."""
    if not q.is_schurian():
        raise SchurianRequired("minimum Schurian arrow equivalence needs a Schurian quiver")
    return max_arrow_equivalence(q, vertex_partition)


def _class_id(block: tuple[str, ...]) -> str:
    return block[0] if len(block) == 1 else "|".join(block)


def quotient_quiver(q: Quiver, e: EquivalencePair) -> tuple[Quiver, QuiverMorphism]:
    bad = validate_equivalence_pair(q, e)
    if bad:
        raise InvalidEquivalencePair("; ".join(bad))
    v_id = {b[0]: _class_id(b) for b in e.vertex_partition.blocks()}
    a_id = {b[0]: _class_id(b) for b in e.arrow_partition.blocks()}
    vmap = {v: v_id[e.vertex_partition.find(v)] for v in q.vertices}
    amap = {x: a_id[e.arrow_partition.find(x)] for x in q.arrows}
    source = {}
    target = {}
    for x in q.arrows:
        source[amap[x]] = vmap[q.source[x]]
        target[amap[x]] = vmap[q.target[x]]
    quot = Quiver(frozenset(vmap.values()), frozenset(amap.values()), source, target)
    return quot, QuiverMorphism(q, quot, amap, vmap)


# ---------------------------------------------------------------------------
# Twisted fibre and tensor products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistedFibreSpec:
    """Data (q, p) for a twisted fibre product of two quivers.

    q maps each right arrow b to a table over left arrows, p maps each left
    arrow a to a table over right arrows; a×b survives iff q[b][a] == p[a][b].
    """

    left: Quiver
    right: Quiver
    q: dict[str, dict[str, str]] = field(repr=False)
    p: dict[str, dict[str, str]] = field(repr=False)


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


def twisted_fibre_product(spec: TwistedFibreSpec) -> Quiver:
    vertices = spec.left.vertices | spec.right.vertices
    arrows = set()
    source = {}
    target = {}
    for a in sorted(spec.left.arrows):
        for b in sorted(spec.right.arrows):
            if spec.q[b][a] == spec.p[a][b]:
                x = pair_id(a, b)
                arrows.add(x)
                source[x] = spec.left.source[a]
                target[x] = spec.right.target[b]
    return Quiver(frozenset(vertices), frozenset(arrows), source, target)


def tensor_product(q: Quiver, r: Quiver) -> Quiver:
    """Tensor product over the shared vertex set: consecutive pairs a⊗b."""
    if q.vertices != r.vertices:
        raise VertexSetMismatch("tensor product requires the same vertex set")
    spec = TwistedFibreSpec(
        q,
        r,
        q={b: {a: q.target[a] for a in q.arrows} for b in r.arrows},
        p={a: {b: r.source[b] for b in r.arrows} for a in q.arrows},
    )
    out = twisted_fibre_product(spec)
    return Quiver(q.vertices, out.arrows, out.source, out.target)


def unit_quiver(vertices: frozenset[str] | set[str]) -> Quiver:
    """One loop per vertex: the monoidal unit over the vertex set."""
    vs = frozenset(vertices)
    arrows = {f"[{v},{v}]" for v in vs}
    return Quiver(vs, frozenset(arrows), {f"[{v},{v}]": v for v in vs}, {f"[{v},{v}]": v for v in vs})


# ---------------------------------------------------------------------------
# Oracle helpers (used by the property suite)
# ---------------------------------------------------------------------------

def probe_morphisms_into(r: Quiver):
    """All morphisms into r from the one-vertex and the one-arrow probe quivers.

    These probes suffice to detect failures of left-cancellability, mirroring
    the formal-source/target construction.
    """
    point = Quiver(frozenset({"p"}), frozenset(), {}, {})
    segment = Quiver(frozenset({"s", "t"}), frozenset({"e"}), {"e": "s"}, {"e": "t"})
    probes = []
    for v in sorted(r.vertices):
        probes.append(QuiverMorphism(point, r, {}, {"p": v}))
    for x in sorted(r.arrows):
        probes.append(
            QuiverMorphism(segment, r, {"e": x}, {"s": r.source[x], "t": r.target[x]})
        )
    return probes


def is_left_cancellable(f: QuiverMorphism) -> bool:
    """Oracle for mono: no two distinct probes into the domain are merged by f."""
    probes = probe_morphisms_into(f.domain)
    for alpha, beta in itertools.combinations(probes, 2):
        if alpha.domain.vertices != beta.domain.vertices:
            continue
        fa = compose_quiver_morphisms(alpha, f)
        fb = compose_quiver_morphisms(beta, f)
        if fa.arrow_map == fb.arrow_map and fa.vertex_map == fb.vertex_map:
            return False
    return True
