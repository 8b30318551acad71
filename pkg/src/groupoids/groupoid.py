"""Finite groupoids: axioms, morphisms, connectivity, isotropy, decomposition.

Composition is diagrammatic: mult[(a, b)] is "a then b", defined exactly when
target(a) == source(b).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NotConnected, VertexSetMismatch
from .group import FiniteGroup, validate_group
from .quiver import Quiver, QuiverMorphism, classify_morphism, validate_morphism
from .util import Partition


@dataclass(frozen=True)
class Groupoid:
    quiver: Quiver
    mult: dict[tuple[str, str], str]
    unit: dict[str, str]
    inv: dict[str, str]

    @property
    def vertices(self) -> frozenset[str]:
        return self.quiver.vertices

    @property
    def arrows(self) -> frozenset[str]:
        return self.quiver.arrows

    def source(self, a: str) -> str:
        return self.quiver.source[a]

    def target(self, a: str) -> str:
        return self.quiver.target[a]

    def compose(self, a: str, b: str) -> str:
        return self.mult[(a, b)]

    def unit_at(self, v: str) -> str:
        return self.unit[v]

    def inverse(self, a: str) -> str:
        return self.inv[a]

    def is_unit(self, a: str) -> bool:
        return self.unit[self.source(a)] == a

    def arrows_between(self, a: str, b: str) -> list[str]:
        return self.quiver.arrows_between(a, b)

    def loops(self, v: str) -> list[str]:
        return self.quiver.loops(v)

    def composable_pairs(self):
        for a in sorted(self.arrows):
            for b in sorted(self.arrows):
                if self.target(a) == self.source(b):
                    yield a, b

    def __repr__(self) -> str:
        return f"Groupoid({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def validate_groupoid(g: Groupoid) -> list[str]:
    from .quiver import validate_quiver

    report = validate_quiver(g.quiver)
    if report:
        return report
    if not g.vertices or not g.arrows:
        report.append("vertices and arrows must be nonempty")
        return report
    arrows = sorted(g.arrows)
    for a, b in itertools.product(arrows, repeat=2):
        defined = (a, b) in g.mult
        composable = g.target(a) == g.source(b)
        if defined and not composable:
            report.append(f"mult defined on non-consecutive pair ({a},{b})")
        if composable and not defined:
            report.append(f"mult missing on consecutive pair ({a},{b})")
        if defined and composable:
            c = g.mult[(a, b)]
            if c not in g.arrows:
                report.append(f"mult ({a},{b}) is not an arrow")
            elif g.source(c) != g.source(a) or g.target(c) != g.target(b):
                report.append(f"mult ({a},{b}) has wrong endpoints")
    if report:
        return report
    for v in sorted(g.vertices):
        u = g.unit.get(v)
        if u is None or u not in g.arrows:
            report.append(f"unit missing at {v}")
        elif g.source(u) != v or g.target(u) != v:
            report.append(f"unit at {v} is not a loop there")
    if report:
        return report
    for a in arrows:
        if g.mult[(a, g.unit[g.target(a)])] != a:
            report.append(f"right unit fails on {a}")
        if g.mult[(g.unit[g.source(a)], a)] != a:
            report.append(f"left unit fails on {a}")
        ai = g.inv.get(a)
        if ai is None or ai not in g.arrows:
            report.append(f"inverse missing for {a}")
            continue
        if g.source(ai) != g.target(a) or g.target(ai) != g.source(a):
            report.append(f"inverse of {a} has wrong endpoints")
            continue
        if g.mult[(a, ai)] != g.unit[g.source(a)]:
            report.append(f"a·a⁻¹ is not the unit for {a}")
        if g.mult[(ai, a)] != g.unit[g.target(a)]:
            report.append(f"a⁻¹·a is not the unit for {a}")
    # associativity over all composable triples
    for a, b in g.composable_pairs():
        ab = g.mult[(a, b)]
        for c in sorted(g.arrows):
            if g.target(b) == g.source(c):
                if g.mult[(ab, c)] != g.mult[(a, g.mult[(b, c)])]:
                    report.append(f"associativity fails on ({a},{b},{c})")
                    return report
    return report


def is_schurian(g: Groupoid) -> bool:
    return g.quiver.is_schurian()


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def coarse_on(vertices) -> Groupoid:
    vs = sorted(vertices)
    arrows = {f"[{a},{b}]" for a in vs for b in vs}
    source = {f"[{a},{b}]": a for a in vs for b in vs}
    target = {f"[{a},{b}]": b for a in vs for b in vs}
    mult = {}
    for a, b, c in itertools.product(vs, repeat=3):
        mult[(f"[{a},{b}]", f"[{b},{c}]")] = f"[{a},{c}]"
    unit = {v: f"[{v},{v}]" for v in vs}
    inv = {f"[{a},{b}]": f"[{b},{a}]" for a in vs for b in vs}
    return Groupoid(Quiver(frozenset(vs), frozenset(arrows), source, target), mult, unit, inv)


def coarse(n: int) -> Groupoid:
    return coarse_on(f"v{i}" for i in range(1, n + 1))


def unit_groupoid(vertices) -> Groupoid:
    vs = sorted(vertices)
    arrows = {f"[{v},{v}]" for v in vs}
    q = Quiver(
        frozenset(vs),
        frozenset(arrows),
        {f"[{v},{v}]": v for v in vs},
        {f"[{v},{v}]": v for v in vs},
    )
    mult = {(f"[{v},{v}]", f"[{v},{v}]"): f"[{v},{v}]" for v in vs}
    return Groupoid(q, mult, {v: f"[{v},{v}]" for v in vs}, {f"[{v},{v}]": f"[{v},{v}]" for v in vs})


def from_group(grp: FiniteGroup, vertex: str = "pt") -> Groupoid:
    arrows = set(grp.elements)
    q = Quiver(
        frozenset({vertex}),
        frozenset(arrows),
        {a: vertex for a in arrows},
        {a: vertex for a in arrows},
    )
    return Groupoid(q, dict(grp.mult), {vertex: grp.identity}, dict(grp.inverse))


def cyclic(n: int) -> Groupoid:
    from .group import cyclic_group

    return from_group(cyclic_group(n))


def symmetric(n: int) -> Groupoid:
    from .group import symmetric_group

    return from_group(symmetric_group(n))


def disjoint_union(parts: list[Groupoid]) -> Groupoid:
    vertices, arrows, source, target, mult, unit, inv = set(), set(), {}, {}, {}, {}, {}
    for i, g in enumerate(parts):
        p = f"{i}."
        vertices |= {p + v for v in g.vertices}
        arrows |= {p + a for a in g.arrows}
        source.update({p + a: p + g.source(a) for a in g.arrows})
        target.update({p + a: p + g.target(a) for a in g.arrows})
        mult.update({(p + a, p + b): p + c for (a, b), c in g.mult.items()})
        unit.update({p + v: p + g.unit[v] for v in g.vertices})
        inv.update({p + a: p + g.inv[a] for a in g.arrows})
    return Groupoid(Quiver(frozenset(vertices), frozenset(arrows), source, target), mult, unit, inv)


def group_bundle(grp: FiniteGroup, vertices) -> Groupoid:
    """Bundle with one copy of grp at each vertex; only loops, no cross arrows."""
    vs = sorted(vertices)
    arrows = {f"{g}@{v}" for v in vs for g in grp.elements}
    q = Quiver(
        frozenset(vs),
        frozenset(arrows),
        {f"{g}@{v}": v for v in vs for g in grp.elements},
        {f"{g}@{v}": v for v in vs for g in grp.elements},
    )
    mult = {
        (f"{a}@{v}", f"{b}@{v}"): f"{grp.op(a, b)}@{v}"
        for v in vs
        for a in grp.elements
        for b in grp.elements
    }
    unit = {v: f"{grp.identity}@{v}" for v in vs}
    inv = {f"{a}@{v}": f"{grp.inv(a)}@{v}" for v in vs for a in grp.elements}
    return Groupoid(q, mult, unit, inv)


def restrict(g: Groupoid, arrows: set[str] | frozenset[str], vertices: set[str] | frozenset[str]) -> Groupoid:
    """Restriction to closed subsets (caller guarantees closure)."""
    arrows = frozenset(arrows)
    vertices = frozenset(vertices)
    q = Quiver(
        vertices,
        arrows,
        {a: g.source(a) for a in arrows},
        {a: g.target(a) for a in arrows},
    )
    mult = {(a, b): c for (a, b), c in g.mult.items() if a in arrows and b in arrows}
    return Groupoid(q, mult, {v: g.unit[v] for v in vertices}, {a: g.inv[a] for a in arrows})


# ---------------------------------------------------------------------------
# Connectivity and isotropy
# ---------------------------------------------------------------------------

def vertex_components(g: Groupoid) -> Partition:
    p = Partition(g.vertices)
    for a in g.arrows:
        p.union(g.source(a), g.target(a))
    return p


def connected_components(g: Groupoid) -> tuple[Partition, list[Groupoid]]:
    p = vertex_components(g)
    comps = []
    for block in p.blocks():
        vs = frozenset(block)
        arrs = frozenset(a for a in g.arrows if g.source(a) in vs)
        comps.append(restrict(g, arrs, vs))
    return p, comps


def is_connected(g: Groupoid) -> bool:
    return vertex_components(g).n_blocks() == 1


def isotropy_group(g: Groupoid, v: str) -> FiniteGroup:
    loops = tuple(sorted(g.loops(v)))
    mult = {(a, b): g.mult[(a, b)] for a in loops for b in loops}
    inv = {a: g.inv[a] for a in loops}
    grp = FiniteGroup(loops, mult, g.unit[v], inv)
    assert not validate_group(grp), f"isotropy at {v} is not a group"
    return grp


def loop_bundle(g: Groupoid) -> Groupoid:
    loops = frozenset(a for a in g.arrows if g.source(a) == g.target(a))
    return restrict(g, loops, g.vertices)


def maximal_schurian_subgroupoid(g: Groupoid) -> Groupoid:
    """The wide coarse subgroupoid {t_μ⁻¹·t_ν} for the BFS transversal (g connected)."""
    dec = decompose_connected(g, min(g.vertices))
    t = dec.transversal
    arrows = set()
    for mu in g.vertices:
        for nu in g.vertices:
            arrows.add(g.mult[(g.inv[t[mu]], t[nu])])
    return restrict(g, frozenset(arrows), g.vertices)


# ---------------------------------------------------------------------------
# Decomposition of connected groupoids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectedDecomposition:
    """Isomorphism data g ≅ isotropy(base) × coarse(vertices).

    transversal[μ] is an arrow base → μ chosen by BFS over sorted arrow ids;
    to_pair / from_pair realize the arrow bijection a ↔ (loop, (src, tgt)).
    """

    groupoid: Groupoid
    base: str
    transversal: dict[str, str]
    isotropy: FiniteGroup

    def to_pair(self, a: str) -> tuple[str, tuple[str, str]]:
        g = self.groupoid
        s, t = g.source(a), g.target(a)
        loop = g.mult[(g.mult[(self.transversal[s], a)], g.inv[self.transversal[t]])]
        return loop, (s, t)

    def from_pair(self, loop: str, ends: tuple[str, str]) -> str:
        g = self.groupoid
        s, t = ends
        return g.mult[(g.mult[(g.inv[self.transversal[s]], loop)], self.transversal[t])]


def decompose_connected(g: Groupoid, base: str) -> ConnectedDecomposition:
    if not is_connected(g):
        raise NotConnected("decomposition needs a connected groupoid")
    transversal = {base: g.unit[base]}
    frontier = [base]
    # deterministic BFS over sorted arrow identifiers
    adj: dict[str, list[str]] = {v: [] for v in g.vertices}
    for a in sorted(g.arrows):
        adj[g.source(a)].append(a)
    while frontier:
        next_frontier = []
        for v in frontier:
            for a in adj[v]:
                w = g.target(a)
                if w not in transversal:
                    transversal[w] = g.mult[(transversal[v], a)]
                    next_frontier.append(w)
        frontier = next_frontier
    assert set(transversal) == set(g.vertices)
    return ConnectedDecomposition(g, base, transversal, isotropy_group(g, base))


def assemble_from_group_and_coarse(grp: FiniteGroup, vertices) -> Groupoid:
    """Groupoid on arrows g×[λ,μ] with (g×[λ,μ])·(h×[μ,ν]) = gh×[λ,ν]."""
    vs = sorted(vertices)
    if not vs:
        raise VertexSetMismatch("need a nonempty vertex set")

    def aid(x: str, a: str, b: str) -> str:
        return f"({x},{a},{b})"

    arrows = {aid(x, a, b) for x in grp.elements for a in vs for b in vs}
    source = {aid(x, a, b): a for x in grp.elements for a in vs for b in vs}
    target = {aid(x, a, b): b for x in grp.elements for a in vs for b in vs}
    mult = {}
    for x, y in itertools.product(grp.elements, repeat=2):
        for a, b, c in itertools.product(vs, repeat=3):
            mult[(aid(x, a, b), aid(y, b, c))] = aid(grp.op(x, y), a, c)
    unit = {a: aid(grp.identity, a, a) for a in vs}
    inv = {aid(x, a, b): aid(grp.inv(x), b, a) for x in grp.elements for a in vs for b in vs}
    return Groupoid(Quiver(frozenset(vs), frozenset(arrows), source, target), mult, unit, inv)


# ---------------------------------------------------------------------------
# Groupoid morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupoidMorphism:
    domain: Groupoid
    codomain: Groupoid
    arrow_map: dict[str, str]
    vertex_map: dict[str, str]

    def as_quiver_morphism(self) -> QuiverMorphism:
        return QuiverMorphism(self.domain.quiver, self.codomain.quiver, self.arrow_map, self.vertex_map)

    def apply(self, a: str) -> str:
        return self.arrow_map[a]

    def apply_vertex(self, v: str) -> str:
        return self.vertex_map[v]


def validate_groupoid_morphism(f: GroupoidMorphism) -> list[str]:
    report = validate_morphism(f.as_quiver_morphism())
    if report:
        return report
    g, h = f.domain, f.codomain
    for a, b in g.composable_pairs():
        if h.mult[(f.arrow_map[a], f.arrow_map[b])] != f.arrow_map[g.mult[(a, b)]]:
            report.append(f"multiplicativity fails on ({a},{b})")
    return report


def identity_groupoid_morphism(g: Groupoid) -> GroupoidMorphism:
    return GroupoidMorphism(g, g, {a: a for a in g.arrows}, {v: v for v in g.vertices})


def compose_groupoid_morphisms(f: GroupoidMorphism, g: GroupoidMorphism) -> GroupoidMorphism:
    """First f, then g."""
    return GroupoidMorphism(
        f.domain,
        g.codomain,
        {a: g.arrow_map[f.arrow_map[a]] for a in f.domain.arrows},
        {v: g.vertex_map[f.vertex_map[v]] for v in f.domain.vertices},
    )


def inclusion_morphism(sub: Groupoid, parent: Groupoid) -> GroupoidMorphism:
    return GroupoidMorphism(
        sub, parent, {a: a for a in sub.arrows}, {v: v for v in sub.vertices}
    )


def generated_image(f: GroupoidMorphism) -> Groupoid:
    """Smallest subgroupoid of the codomain containing the image of f."""
    h = f.codomain
    vertices = frozenset(f.vertex_map[v] for v in f.domain.vertices)
    arrows = {f.arrow_map[a] for a in f.domain.arrows}
    arrows |= {h.unit[v] for v in vertices}
    changed = True
    while changed:
        changed = False
        for a in list(arrows):
            if h.inv[a] not in arrows:
                arrows.add(h.inv[a])
                changed = True
        for a, b in itertools.product(sorted(arrows), repeat=2):
            if h.target(a) == h.source(b) and h.mult[(a, b)] not in arrows:
                arrows.add(h.mult[(a, b)])
                changed = True
    return restrict(h, frozenset(arrows), vertices)


def is_monomorphism_gpd(f: GroupoidMorphism) -> bool:
    return classify_morphism(f.as_quiver_morphism()).mono


def is_epimorphism_gpd(f: GroupoidMorphism) -> bool:
    img = generated_image(f)
    return img.arrows == f.codomain.arrows and img.vertices == f.codomain.vertices


def morphism_from_group_and_set_pair(
    alpha: dict[str, str],
    beta: dict[str, str],
    dec_g: ConnectedDecomposition,
    dec_h: ConnectedDecomposition,
) -> GroupoidMorphism:
    """Morphism induced by a group hom alpha and a pointed vertex map beta."""
    if beta[dec_g.base] != dec_h.base:
        raise VertexSetMismatch("beta must send the base vertex to the base vertex")
    g, h = dec_g.groupoid, dec_h.groupoid
    arrow_map = {}
    for a in g.arrows:
        loop, (s, t) = dec_g.to_pair(a)
        arrow_map[a] = dec_h.from_pair(alpha[loop], (beta[s], beta[t]))
    return GroupoidMorphism(g, h, arrow_map, dict(beta))


# ---------------------------------------------------------------------------
# Isomorphism search (desk-scale oracle)
# ---------------------------------------------------------------------------

def _vertex_invariant(g: Groupoid, v: str):
    degs = sorted(len(g.arrows_between(v, w)) for w in g.vertices)
    return (len(g.loops(v)), degs)


def find_isomorphism(g: Groupoid, h: Groupoid) -> GroupoidMorphism | None:
    """Backtracking search for a groupoid isomorphism g -> h, or None.

    Prunes on loop counts and degree profiles; arrow images are propagated
    through units, inverses and multiplication as soon as they are forced.
    """
    if len(g.vertices) != len(h.vertices) or len(g.arrows) != len(h.arrows):
        return None
    g_inv = sorted(_vertex_invariant(g, v) for v in g.vertices)
    h_inv = sorted(_vertex_invariant(h, v) for v in h.vertices)
    if g_inv != h_inv:
        return None

    g_vs = sorted(g.vertices, key=lambda v: (_vertex_invariant(g, v), v))
    h_by_inv: dict[tuple, list[str]] = {}
    for w in sorted(h.vertices):
        h_by_inv.setdefault(str(_vertex_invariant(h, w)), []).append(w)

    def try_vertex_map(i: int, vmap: dict[str, str], used: set[str]):
        if i == len(g_vs):
            amap = _extend_arrow_map(g, h, vmap)
            if amap is not None:
                return GroupoidMorphism(g, h, amap, dict(vmap))
            return None
        v = g_vs[i]
        for w in h_by_inv.get(str(_vertex_invariant(g, v)), []):
            if w in used:
                continue
            # adjacency consistency with already-assigned vertices
            if any(
                len(g.arrows_between(v, v2)) != len(h.arrows_between(w, w2))
                or len(g.arrows_between(v2, v)) != len(h.arrows_between(w2, w))
                for v2, w2 in vmap.items()
            ):
                continue
            vmap[v] = w
            used.add(w)
            found = try_vertex_map(i + 1, vmap, used)
            if found is not None:
                return found
            del vmap[v]
            used.discard(w)
        return None

    return try_vertex_map(0, {}, set())


def _extend_arrow_map(g: Groupoid, h: Groupoid, vmap: dict[str, str]) -> dict[str, str] | None:
    order = sorted(g.arrows)

    def propagate(amap: dict[str, str], used: set[str], new: list[str]) -> bool:
        while new:
            a = new.pop()
            fa = amap[a]
            forced = [(g.inv[a], h.inv[fa])]
            for b in list(amap):
                fb = amap[b]
                if g.target(a) == g.source(b):
                    if h.target(fa) != h.source(fb):
                        return False
                    forced.append((g.mult[(a, b)], h.mult[(fa, fb)]))
                if g.target(b) == g.source(a):
                    if h.target(fb) != h.source(fa):
                        return False
                    forced.append((g.mult[(b, a)], h.mult[(fb, fa)]))
            for x, y in forced:
                if x in amap:
                    if amap[x] != y:
                        return False
                else:
                    if y in used:
                        return False
                    amap[x] = y
                    used.add(y)
                    new.append(x)
        return True

    def backtrack(amap: dict[str, str], used: set[str]):
        pending = [a for a in order if a not in amap]
        if not pending:
            return amap
        a = pending[0]
        candidates = h.arrows_between(vmap[g.source(a)], vmap[g.target(a)])
        for c in candidates:
            if c in used:
                continue
            trial = dict(amap)
            trial_used = set(used)
            trial[a] = c
            trial_used.add(c)
            if propagate(trial, trial_used, [a]):
                res = backtrack(trial, trial_used)
                if res is not None:
                    return res
        return None

    seed = {g.unit[v]: h.unit[vmap[v]] for v in g.vertices}
    used = set(seed.values())
    if len(used) != len(seed):
        return None
    trial = dict(seed)
    if not propagate(trial, used, list(seed)):
        return None
    return backtrack(trial, used)


def are_isomorphic(g: Groupoid, h: Groupoid) -> bool:
    return find_isomorphism(g, h) is not None
