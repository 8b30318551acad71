"""Normal subgroupoids, kernels, quotients, FIT sequences, quotient geometry."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import NotNormal
from .group import FiniteGroup, groups_isomorphic, quotient_group
from .groupoid import (
    ConnectedDecomposition,
    Groupoid,
    GroupoidMorphism,
    assemble_from_group_and_coarse,
    connected_components,
    decompose_connected,
    find_isomorphism,
    is_connected,
    is_epimorphism_gpd,
    is_monomorphism_gpd,
    isotropy_group,
    restrict,
    validate_groupoid,
    validate_groupoid_morphism,
)
from .quiver import EquivalencePair, Quiver, QuiverMorphism, quotient_quiver
from .util import Partition


@dataclass(frozen=True)
class Subgroupoid:
    parent: Groupoid
    arrows: frozenset[str]
    vertices: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "arrows", frozenset(self.arrows))
        object.__setattr__(self, "vertices", frozenset(self.vertices))

    def as_groupoid(self) -> Groupoid:
        return restrict(self.parent, self.arrows, self.vertices)

    def is_wide(self) -> bool:
        return self.vertices == self.parent.vertices

    def is_full(self) -> bool:
        g = self.parent
        return all(
            a in self.arrows
            for a in g.arrows
            if g.source(a) in self.vertices and g.target(a) in self.vertices
        )

    def loops(self, v: str) -> list[str]:
        g = self.parent
        return sorted(a for a in self.arrows if g.source(a) == v and g.target(a) == v)

    def loop_part(self) -> "Subgroupoid":
        g = self.parent
        loops = frozenset(a for a in self.arrows if g.source(a) == g.target(a))
        return Subgroupoid(g, loops, self.parent.vertices)

    def __repr__(self) -> str:
        return f"Subgroupoid({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def validate_subgroupoid(n: Subgroupoid) -> list[str]:
    g = n.parent
    report = []
    for a in sorted(n.arrows):
        if a not in g.arrows:
            report.append(f"{a} is not a parent arrow")
            continue
        if g.source(a) not in n.vertices or g.target(a) not in n.vertices:
            report.append(f"arrow {a} leaves the vertex subset")
        if g.inv[a] not in n.arrows:
            report.append(f"not closed under inverse: {a}")
    for v in sorted(n.vertices):
        if v not in g.vertices:
            report.append(f"{v} is not a parent vertex")
        elif g.unit[v] not in n.arrows:
            report.append(f"missing unit at {v}")
    if report:
        return report
    for a, b in itertools.product(sorted(n.arrows), repeat=2):
        if g.target(a) == g.source(b) and g.mult[(a, b)] not in n.arrows:
            report.append(f"not closed under multiplication: ({a},{b})")
    return report


def wide_subgroupoid(g: Groupoid, arrows) -> Subgroupoid:
    return Subgroupoid(g, frozenset(arrows) | frozenset(g.unit.values()), g.vertices)


def unit_subgroupoid(g: Groupoid) -> Subgroupoid:
    return Subgroupoid(g, frozenset(g.unit.values()), g.vertices)


def full_subgroupoid(g: Groupoid) -> Subgroupoid:
    return Subgroupoid(g, g.arrows, g.vertices)


def is_normal(n: Subgroupoid) -> bool:
    if validate_subgroupoid(n):
        return False
    if not n.is_wide():
        return False
    g = n.parent
    for a in g.arrows:
        ai = g.inv[a]
        for loop in n.loops(g.target(a)):
            conj = g.mult[(g.mult[(a, loop)], ai)]
            if conj not in n.arrows:
                return False
    return True


def normality_via_loops(n: Subgroupoid) -> bool:
    """Normality depends only on the loop part; asserts agreement with is_normal."""
    loops_only = Subgroupoid(n.parent, n.loop_part().arrows, n.parent.vertices)
    via_loops = is_normal(loops_only)
    if not validate_subgroupoid(n) and n.is_wide():
        assert via_loops == is_normal(n)
    return via_loops


def kernel(f: GroupoidMorphism) -> Subgroupoid:
    g, h = f.domain, f.codomain
    arrows = frozenset(
        a for a in g.arrows if f.arrow_map[a] == h.unit[f.vertex_map[g.source(a)]]
    )
    return Subgroupoid(g, arrows, g.vertices)


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------

def _vertex_equivalence(g: Groupoid, n: Subgroupoid) -> Partition:
    p = Partition(g.vertices)
    for a in n.arrows:
        p.union(g.source(a), g.target(a))
    return p


def _two_sided_arrow_equivalence(g: Groupoid, n: Subgroupoid) -> Partition:
    p = Partition(g.arrows)
    for y in g.arrows:
        for m in n.arrows:
            if g.target(m) != g.source(y):
                continue
            my = g.mult[(m, y)]
            for k in n.arrows:
                if g.target(y) == g.source(k):
                    p.union(y, g.mult[(my, k)])
    return p


def _left_arrow_equivalence(g: Groupoid, n: Subgroupoid) -> Partition:
    # x ~L y iff y⁻¹x is defined and lies in n
    p = Partition(g.arrows)
    for x in g.arrows:
        for y in g.arrows:
            if g.source(x) == g.source(y) and g.mult[(g.inv[y], x)] in n.arrows:
                p.union(x, y)
    return p


def _right_arrow_equivalence(g: Groupoid, n: Subgroupoid) -> Partition:
    # x ~R y iff x·y⁻¹ is defined and lies in n
    p = Partition(g.arrows)
    for x in g.arrows:
        for y in g.arrows:
            if g.target(x) == g.target(y) and g.mult[(x, g.inv[y])] in n.arrows:
                p.union(x, y)
    return p


@dataclass(frozen=True)
class QuotientResult:
    quiver: Quiver
    projection: QuiverMorphism
    groupoid: Groupoid | None          # None when no induced structure exists
    groupoid_projection: GroupoidMorphism | None


def _induce_groupoid(g: Groupoid, n: Subgroupoid, pair: EquivalencePair) -> QuotientResult:
    quot_quiver, pi = quotient_quiver(g.quiver, pair)
    amap, vmap = pi.arrow_map, pi.vertex_map

    # try to induce multiplication class-wise; every witness must agree
    mult: dict[tuple[str, str], str] = {}
    ok = True
    classes = sorted(set(amap.values()))
    members: dict[str, list[str]] = {c: [] for c in classes}
    for a in sorted(g.arrows):
        members[amap[a]].append(a)
    for c1, c2 in itertools.product(classes, repeat=2):
        if quot_quiver.target[c1] != quot_quiver.source[c2]:
            continue
        products = set()
        for x in members[c1]:
            for y in members[c2]:
                # all connecting witnesses m in n from target(x) to source(y)
                for m in n.arrows:
                    if g.source(m) == g.target(x) and g.target(m) == g.source(y):
                        products.add(amap[g.mult[(g.mult[(x, m)], y)]])
        if len(products) != 1:
            ok = False
            break
        mult[(c1, c2)] = products.pop()
    if not ok:
        return QuotientResult(quot_quiver, pi, None, None)
    unit = {vmap[v]: amap[g.unit[v]] for v in g.vertices}
    inv = {amap[a]: amap[g.inv[a]] for a in g.arrows}
    quot = Groupoid(quot_quiver, mult, unit, inv)
    if validate_groupoid(quot):
        return QuotientResult(quot_quiver, pi, None, None)
    gp = GroupoidMorphism(g, quot, amap, vmap)
    assert validate_groupoid_morphism(gp) == []
    return QuotientResult(quot_quiver, pi, quot, gp)


def two_sided_quotient(g: Groupoid, n: Subgroupoid) -> QuotientResult:
    if not is_normal(n):
        raise NotNormal("two-sided quotient needs a normal subgroupoid")
    pair = EquivalencePair(_two_sided_arrow_equivalence(g, n), _vertex_equivalence(g, n))
    res = _induce_groupoid(g, n, pair)
    # a normal subgroupoid always induces a groupoid on the two-sided quotient
    assert res.groupoid is not None, "witness disagreement in a two-sided quotient"
    assert is_epimorphism_gpd(res.groupoid_projection)
    assert kernel(res.groupoid_projection).arrows == n.arrows
    return res


def left_quotient(g: Groupoid, n: Subgroupoid) -> QuotientResult:
    if not is_normal(n):
        raise NotNormal("left quotient needs a normal subgroupoid")
    pair = EquivalencePair(_left_arrow_equivalence(g, n), _vertex_equivalence(g, n))
    return _induce_groupoid(g, n, pair)


def right_quotient(g: Groupoid, n: Subgroupoid) -> QuotientResult:
    if not is_normal(n):
        raise NotNormal("right quotient needs a normal subgroupoid")
    pair = EquivalencePair(_right_arrow_equivalence(g, n), _vertex_equivalence(g, n))
    return _induce_groupoid(g, n, pair)


# ---------------------------------------------------------------------------
# Quotient geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientGeometry:
    degree: int
    component_count: int
    components_same_degree: bool
    isotropies_isomorphic: bool
    model: Groupoid                     # (G_λ/N_λ) × coarse(m)
    iso_witness: GroupoidMorphism | None

    @property
    def all_verified(self) -> bool:
        return self.components_same_degree and self.isotropies_isomorphic and self.iso_witness is not None


def quotient_geometry(g: Groupoid, n: Subgroupoid) -> QuotientGeometry:
    if not is_connected(g):
        raise NotNormal("quotient geometry is stated for connected parents")
    if not is_normal(n):
        raise NotNormal("not a normal subgroupoid")
    ng = n.as_groupoid()
    part, comps = connected_components(ng)
    lam = min(g.vertices)
    n_lambda = isotropy_group(ng, lam)
    degree = n_lambda.order
    same_degree = all(c.quiver.is_complete_of_degree(degree) for c in comps)
    isos = all(
        groups_isomorphic(isotropy_group(ng, v), n_lambda) for v in sorted(g.vertices)
    )
    g_lambda = isotropy_group(g, lam)
    q_group, _ = quotient_group(g_lambda, frozenset(n_lambda.elements))
    model = assemble_from_group_and_coarse(q_group, [f"c{i}" for i in range(part.n_blocks())])
    quot = two_sided_quotient(g, n)
    witness = find_isomorphism(quot.groupoid, model)
    return QuotientGeometry(degree, part.n_blocks(), same_degree, isos, model, witness)


# ---------------------------------------------------------------------------
# Short exact sequences and FIT
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShortExactSequence:
    n: Groupoid
    g: Groupoid
    h: Groupoid
    iota: GroupoidMorphism      # n -> g
    pi: GroupoidMorphism        # g -> h
    section: GroupoidMorphism | None = None   # h -> g with section;pi = id


def validate_sequence(s: ShortExactSequence) -> list[str]:
    report = []
    report += [f"iota: {r}" for r in validate_groupoid_morphism(s.iota)]
    report += [f"pi: {r}" for r in validate_groupoid_morphism(s.pi)]
    if report:
        return report
    if not is_monomorphism_gpd(s.iota):
        report.append("iota is not a monomorphism")
    if not is_epimorphism_gpd(s.pi):
        report.append("pi is not an epimorphism")
    ker = kernel(s.pi)
    image_arrows = frozenset(s.iota.arrow_map[a] for a in s.n.arrows)
    if image_arrows != ker.arrows:
        report.append("image of iota differs from kernel of pi")
    if frozenset(s.iota.vertex_map[v] for v in s.n.vertices) != s.g.vertices:
        report.append("iota is not wide onto the kernel")
    if s.section is not None:
        report += [f"section: {r}" for r in validate_groupoid_morphism(s.section)]
        if not report:
            for a in s.h.arrows:
                if s.pi.arrow_map[s.section.arrow_map[a]] != a:
                    report.append(f"section is not split by pi on {a}")
            for v in s.h.vertices:
                if s.pi.vertex_map[s.section.vertex_map[v]] != v:
                    report.append(f"section is not split by pi on vertex {v}")
    return report


def sequence_from_normal(g: Groupoid, n: Subgroupoid) -> ShortExactSequence:
    """The canonical sequence n -> g -> g/n."""
    quot = two_sided_quotient(g, n)
    ng = n.as_groupoid()
    iota = GroupoidMorphism(ng, g, {a: a for a in ng.arrows}, {v: v for v in ng.vertices})
    return ShortExactSequence(ng, g, quot.groupoid, iota, quot.groupoid_projection)


@dataclass(frozen=True)
class FITResult:
    holds: bool
    witness: GroupoidMorphism | None


def is_fit_sequence(s: ShortExactSequence) -> FITResult:
    """FIT: the induced map g/ker(pi) -> h is an isomorphism; witness returned."""
    bad = validate_sequence(s)
    assert not bad, f"not an exact sequence: {bad}"
    ker = kernel(s.pi)
    quot = two_sided_quotient(s.g, ker)
    q = quot.groupoid
    proj = quot.groupoid_projection
    # induced map [x] -> pi(x); well-defined because pi kills kernel witnesses
    amap: dict[str, str] = {}
    vmap: dict[str, str] = {}
    for a in s.g.arrows:
        c = proj.arrow_map[a]
        img = s.pi.arrow_map[a]
        if amap.setdefault(c, img) != img:
            return FITResult(False, None)
    for v in s.g.vertices:
        c = proj.vertex_map[v]
        img = s.pi.vertex_map[v]
        if vmap.setdefault(c, img) != img:
            return FITResult(False, None)
    induced = GroupoidMorphism(q, s.h, amap, vmap)
    if validate_groupoid_morphism(induced):
        return FITResult(False, None)
    bijective = (
        len(set(amap.values())) == len(q.arrows) == len(s.h.arrows)
        and len(set(vmap.values())) == len(q.vertices) == len(s.h.vertices)
    )
    return FITResult(bijective, induced if bijective else None)


# ---------------------------------------------------------------------------
# Exhaustive enumeration oracle
# ---------------------------------------------------------------------------

def _normal_closure(g: Groupoid, seed: frozenset[str]) -> frozenset[str]:
    arrows = set(seed) | set(g.unit.values())
    frontier = list(arrows)
    while frontier:
        a = frontier.pop()
        candidates = [g.inv[a]]
        for b in list(arrows):
            if g.target(a) == g.source(b):
                candidates.append(g.mult[(a, b)])
            if g.target(b) == g.source(a):
                candidates.append(g.mult[(b, a)])
        if g.source(a) == g.target(a):
            for x in g.arrows:
                if g.target(x) == g.source(a):
                    candidates.append(g.mult[(g.mult[(x, a)], g.inv[x])])
        for c in candidates:
            if c not in arrows:
                arrows.add(c)
                frontier.append(c)
    return frozenset(arrows)


def enumerate_normal_subgroupoids(g: Groupoid, max_arrows: int = 24) -> list[Subgroupoid]:
    """Every normal subgroupoid, exactly once, via incremental normal closures.

    Each normal subgroupoid is the normal closure of some arrow subset, so
    walking the closure lattice from the unit bundle reaches all of them.
    """
    if len(g.arrows) > max_arrows:
        raise ValueError(
            f"enumeration bound exceeded: {len(g.arrows)} arrows > {max_arrows}"
        )
    bottom = _normal_closure(g, frozenset())
    found = {bottom}
    frontier = [bottom]
    while frontier:
        current = frontier.pop()
        for a in sorted(g.arrows):
            if a in current:
                continue
            bigger = _normal_closure(g, current | {a})
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    subs = [Subgroupoid(g, arrows, g.vertices) for arrows in found]
    subs.sort(key=lambda s: (len(s.arrows), tuple(sorted(s.arrows))))
    for s in subs:
        assert is_normal(s)
    return subs
