"""Balanced tensor products, two-sided and unilateral crossed products, and
the split-lemma reconstructions.

A split FIT sequence N -> G -> H (H identified with the section image) gives
G = N·H·N; triples (a, h, b) composing to the same arrow differ by sliding
loops of N at the H-vertices across h via conjugation. The crossed product is
the groupoid structure on those triple classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .actions import SemistrongAction, WeakAction, semidirect_product, validate_semistrong_action
from .errors import ComponentVertexCondition, NoFactorization, NotSplitFIT
from .groupoid import (
    Groupoid,
    GroupoidMorphism,
    decompose_connected,
    from_group,
    is_connected,
    is_schurian,
    isotropy_group,
    restrict,
    validate_groupoid,
    validate_groupoid_morphism,
)
from .normal import ShortExactSequence, Subgroupoid, is_fit_sequence, is_normal, kernel, validate_sequence
from .quiver import Quiver
from .util import Partition


Triple = tuple[str, str, str]


def _component_vertex_map(n: Groupoid, h_vertices: frozenset[str]) -> dict[str, str]:
    """Each N-component must contain exactly one H-vertex; map vertex -> its H-vertex."""
    part = Partition(n.vertices)
    for a in n.arrows:
        part.union(n.source(a), n.target(a))
    anchor: dict[str, str] = {}
    for block in part.blocks():
        inside = [v for v in block if v in h_vertices]
        if len(inside) != 1:
            raise ComponentVertexCondition(
                f"component {block} contains {len(inside)} H-vertices"
            )
        for v in block:
            anchor[v] = inside[0]
    return anchor


@dataclass(frozen=True)
class BalancedTensor:
    n: Groupoid
    h: Groupoid
    action: SemistrongAction
    anchor: dict[str, str]                 # N-vertex -> its component's H-vertex
    class_of: dict[Triple, str]
    members: dict[str, tuple[Triple, ...]]

    def rep(self, cls: str) -> Triple:
        return self.members[cls][0]

    @property
    def classes(self) -> list[str]:
        return sorted(self.members)


def _class_id(t: Triple) -> str:
    return f"<{t[0]}|{t[1]}|{t[2]}>"


def balanced_tensor(n: Groupoid, h: Groupoid, action: SemistrongAction) -> BalancedTensor:
    """Triples (a, h, b) modulo sliding loops of N̲ across the middle arrow."""
    if not h.vertices <= n.vertices:
        raise ComponentVertexCondition("H-vertices must sit inside N-vertices")
    anchor = _component_vertex_map(n, h.vertices)
    bad = validate_semistrong_action(action)
    assert not bad, f"invalid action: {bad}"

    triples = [
        (a, k, b)
        for k in sorted(h.arrows)
        for a in sorted(n.arrows)
        if n.target(a) == h.source(k)
        for b in sorted(n.arrows)
        if n.source(b) == h.target(k)
    ]
    part = Partition.from_blocks([[ _class_id(t) ] for t in triples])
    ids = {t: _class_id(t) for t in triples}
    for a, k, b in triples:
        for ell in n.loops(h.target(k)):
            moved = (
                n.mult[(a, action.act(k, ell))],
                k,
                n.mult[(n.inv[ell], b)],
            )
            part.union(ids[(a, k, b)], ids[moved])
    members: dict[str, list[Triple]] = {}
    for t in triples:
        members.setdefault(part.find(ids[t]), []).append(t)
    class_of = {t: part.find(ids[t]) for t in triples}
    return BalancedTensor(
        n, h, action, anchor, class_of, {c: tuple(sorted(m)) for c, m in members.items()}
    )


def balanced_tensor_two_generator_classes(bt: BalancedTensor) -> dict[Triple, str]:
    """Oracle: the closure of the two-sided relation from the definition;
    must agree with the single-move classes."""
    n, h, action = bt.n, bt.h, bt.action
    ids = {t: _class_id(t) for t in bt.class_of}
    part = Partition.from_blocks([[i] for i in ids.values()])
    for a, k, b in bt.class_of:
        for ell in n.loops(h.target(k)):
            moved = (n.mult[(a, action.act(k, ell))], k, n.mult[(n.inv[ell], b)])
            part.union(ids[(a, k, b)], ids[moved])
        for ell in n.loops(h.source(k)):
            # (a·ℓ⁻¹, k, (ℓ◁k)·b) with ℓ◁k = k⁻¹▷ℓ
            moved = (
                n.mult[(a, n.inv[ell])],
                k,
                n.mult[(action.act(h.inv[k], ell), b)],
            )
            part.union(ids[(a, k, b)], ids[moved])
    return {t: part.find(ids[t]) for t in bt.class_of}


@dataclass(frozen=True)
class CrossedProduct:
    tensor: BalancedTensor
    groupoid: Groupoid
    embedded_n: Subgroupoid           # the classes with a unit middle, normal ≅ N
    embedding_iso: GroupoidMorphism   # embedded copy -> N, a⊗1⊗b ↦ ab

    def class_of(self, t: Triple) -> str:
        return self.tensor.class_of[t]


def crossed_product_two_sided(
    n: Groupoid, h: Groupoid, action: SemistrongAction, check_representatives: bool = True
) -> CrossedProduct:
    bt = balanced_tensor(n, h, action)
    classes = bt.classes
    source = {c: n.source(bt.rep(c)[0]) for c in classes}
    target = {c: n.target(bt.rep(c)[2]) for c in classes}
    for c in classes:  # endpoints are class invariants
        for a, k, b in bt.members[c]:
            assert n.source(a) == source[c] and n.target(b) == target[c]

    def one_product(t1: Triple, t2: Triple) -> str:
        a1, k1, b1 = t1
        a2, k2, b2 = t2
        loop = n.mult[(b1, a2)]
        return bt.class_of[(n.mult[(a1, bt.action.act(k1, loop))], h.mult[(k1, k2)], b2)]

    mult: dict[tuple[str, str], str] = {}
    for c1, c2 in itertools.product(classes, repeat=2):
        if target[c1] != source[c2]:
            continue
        reps1 = bt.members[c1] if check_representatives else bt.members[c1][:1]
        reps2 = bt.members[c2] if check_representatives else bt.members[c2][:1]
        products = {one_product(t1, t2) for t1 in reps1 for t2 in reps2}
        assert len(products) == 1, f"product of classes depends on representatives: {c1},{c2}"
        mult[(c1, c2)] = products.pop()

    unit = {}
    for lam in sorted(n.vertices):
        mu = bt.anchor[lam]
        candidates = n.arrows_between(lam, mu)
        units_found = {bt.class_of[(a, h.unit[mu], n.inv[a])] for a in candidates}
        assert len(units_found) == 1, f"unit at {lam} depends on the connecting arrow"
        unit[lam] = units_found.pop()

    inv = {}
    for c in classes:
        a, k, b = bt.rep(c)
        inv[c] = bt.class_of[(n.inv[b], h.inv[k], n.inv[a])]

    quiver = Quiver(n.vertices, frozenset(classes), source, target)
    gpd = Groupoid(quiver, mult, unit, inv)
    assert validate_groupoid(gpd) == [], "crossed product is not a groupoid"

    embedded_arrows = frozenset(
        c for c in classes if any(k == h.unit[h.source(k)] for _, k, _ in bt.members[c])
    )
    embedded = Subgroupoid(gpd, embedded_arrows, gpd.vertices)
    assert not validate_subgroupoid_report(embedded)
    assert is_normal(embedded), "embedded N is not normal in the crossed product"
    # the strong isomorphism a⊗1⊗b ↦ ab
    emb_g = embedded.as_groupoid()
    amap = {}
    for c in embedded_arrows:
        unit_triples = [t for t in bt.members[c] if t[1] == h.unit[h.source(t[1])]]
        images = {n.mult[(a, b)] for a, _, b in unit_triples}
        assert len(images) == 1
        amap[c] = images.pop()
    iso = GroupoidMorphism(emb_g, n, amap, {v: v for v in emb_g.vertices})
    assert validate_groupoid_morphism(iso) == []
    assert len(set(amap.values())) == len(n.arrows) == len(amap)
    return CrossedProduct(bt, gpd, embedded, iso)


def validate_subgroupoid_report(s: Subgroupoid) -> list[str]:
    from .normal import validate_subgroupoid

    return validate_subgroupoid(s)


# ---------------------------------------------------------------------------
# Reconstruction from a split FIT sequence
# ---------------------------------------------------------------------------

def conjugation_action(g: Groupoid, n_arrows: frozenset[str], h_sub: Groupoid) -> SemistrongAction:
    """H acting on the loops of N at the H-vertices by conjugation in g."""
    carrier_arrows = frozenset(
        a for a in n_arrows if g.source(a) == g.target(a) and g.source(a) in h_sub.vertices
    )
    carrier = Quiver(
        h_sub.vertices,
        carrier_arrows,
        {a: g.source(a) for a in carrier_arrows},
        {a: g.target(a) for a in carrier_arrows},
    )
    arrow_act = {}
    for k in h_sub.arrows:
        for ell in carrier_arrows:
            if g.source(ell) == g.target(k):
                arrow_act[(k, ell)] = g.mult[(g.mult[(k, ell)], g.inv[k])]
    vertex_act = {}
    for k in h_sub.arrows:
        swap = {v: v for v in h_sub.vertices}
        swap[g.target(k)], swap[g.source(k)] = g.source(k), g.target(k)
        vertex_act[k] = swap
    return SemistrongAction(h_sub, carrier, arrow_act, vertex_act)


def canonical_triple(g: Groupoid, n_arrows: frozenset[str], h_sub: Groupoid, bt: BalancedTensor, x: str) -> str:
    """The class of a factorization x = a·h·b; all factorizations share it."""
    found = set()
    for a in sorted(n_arrows):
        if g.source(a) != g.source(x):
            continue
        for k in sorted(h_sub.arrows):
            if g.source(k) != g.target(a):
                continue
            b = g.mult[(g.inv[k], g.mult[(g.inv[a], x)])]
            if b in n_arrows:
                found.add(bt.class_of[(a, k, b)])
    if not found:
        raise NoFactorization(f"{x} admits no N·H·N factorization")
    assert len(found) == 1, f"factorizations of {x} fall into several classes"
    return found.pop()


@dataclass(frozen=True)
class Reconstruction:
    sequence: ShortExactSequence
    crossed: CrossedProduct
    forward: GroupoidMorphism      # g -> crossed product
    backward: GroupoidMorphism     # crossed product -> g


def reconstruct_from_split(seq: ShortExactSequence) -> Reconstruction:
    """Theorem: a split FIT sequence makes G strongly isomorphic to N⊗H⊗N."""
    if seq.section is None:
        raise NotSplitFIT("sequence is not split")
    bad = validate_sequence(seq)
    assert not bad, f"invalid sequence: {bad}"
    if not is_fit_sequence(seq).holds:
        raise NotSplitFIT("sequence is not FIT")
    g = seq.g
    n_arrows = frozenset(seq.iota.arrow_map[a] for a in seq.n.arrows)
    h_vertices = frozenset(seq.section.vertex_map[v] for v in seq.h.vertices)
    h_arrows = frozenset(seq.section.arrow_map[a] for a in seq.h.arrows)
    h_sub = restrict(g, h_arrows, h_vertices)
    n_sub = restrict(g, n_arrows, g.vertices)
    action = conjugation_action(g, n_arrows, h_sub)
    cp = crossed_product_two_sided(n_sub, h_sub, action)

    forward_map = {x: canonical_triple(g, n_arrows, h_sub, cp.tensor, x) for x in g.arrows}
    forward = GroupoidMorphism(g, cp.groupoid, forward_map, {v: v for v in g.vertices})
    assert validate_groupoid_morphism(forward) == []

    backward_map = {}
    for c in cp.tensor.classes:
        products = {g.mult[(g.mult[(a, k)], b)] for a, k, b in cp.tensor.members[c]}
        assert len(products) == 1, f"members of {c} multiply out differently"
        backward_map[c] = products.pop()
    backward = GroupoidMorphism(cp.groupoid, g, backward_map, {v: v for v in g.vertices})
    assert validate_groupoid_morphism(backward) == []

    for x in g.arrows:
        assert backward_map[forward_map[x]] == x
    for c in cp.tensor.classes:
        assert forward_map[backward_map[c]] == c
    return Reconstruction(seq, cp, forward, backward)


# ---------------------------------------------------------------------------
# Unilateral collapse over a fixed vertex set
# ---------------------------------------------------------------------------

def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


@dataclass(frozen=True)
class UnilateralCrossed:
    n: Groupoid
    h: Groupoid
    action: SemistrongAction
    groupoid: Groupoid


def unilateral_crossed(n: Groupoid, h: Groupoid, action: SemistrongAction) -> UnilateralCrossed:
    """N⊗H for a group bundle N over H's vertex set."""
    assert n.vertices == h.vertices, "unilateral crossed product needs a shared vertex set"
    assert all(n.source(a) == n.target(a) for a in n.arrows), "N must be a bundle of loops"
    arrows = {
        _pair(a, k) for k in h.arrows for a in n.loops(h.source(k))
    }
    source = {}
    target = {}
    for x in arrows:
        a, k = _unpair(x)
        source[x] = h.source(k)
        target[x] = h.target(k)
    mult = {}
    for x in sorted(arrows):
        a1, k1 = _unpair(x)
        for y in sorted(arrows):
            a2, k2 = _unpair(y)
            if h.target(k1) != h.source(k2):
                continue
            mult[(x, y)] = _pair(n.mult[(a1, action.act(k1, a2))], h.mult[(k1, k2)])
    unit = {v: _pair(n.unit[v], h.unit[v]) for v in h.vertices}
    inv = {}
    for x in arrows:
        a, k = _unpair(x)
        ki = h.inv[k]
        inv[x] = _pair(action.act(ki, n.inv[a]), ki)
    gpd = Groupoid(Quiver(h.vertices, frozenset(arrows), source, target), mult, unit, inv)
    assert validate_groupoid(gpd) == []
    return UnilateralCrossed(n, h, action, gpd)


def _unpair(x: str) -> tuple[str, str]:
    depth = 0
    inner = x[1:-1]
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1 :]
    raise ValueError(f"not a pair id: {x}")


@dataclass(frozen=True)
class UnilateralCollapse:
    crossed: CrossedProduct
    unilateral: UnilateralCrossed
    phi: GroupoidMorphism          # two-sided -> one-sided
    phi_inverse: GroupoidMorphism


def two_sided_to_one_sided(cp: CrossedProduct) -> UnilateralCollapse:
    """φ: a ⊗ h ⊗ b ↦ a·(h▷b) ⊗ h, a strong isomorphism for group bundles."""
    n, h, action = cp.tensor.n, cp.tensor.h, cp.tensor.action
    assert all(n.source(a) == n.target(a) for a in n.arrows), "N must be a bundle"
    ucp = unilateral_crossed(n, h, action)
    amap = {}
    for c in cp.tensor.classes:
        images = set()
        for a, k, b in cp.tensor.members[c]:
            images.add(_pair(n.mult[(a, action.act(k, b))], k))
        assert len(images) == 1, f"φ is not constant on {c}"
        amap[c] = images.pop()
    phi = GroupoidMorphism(cp.groupoid, ucp.groupoid, amap, {v: v for v in cp.groupoid.vertices})
    assert validate_groupoid_morphism(phi) == []
    assert len(set(amap.values())) == len(ucp.groupoid.arrows) == len(amap)
    inv_map = {}
    for x in ucp.groupoid.arrows:
        a, k = _unpair(x)
        inv_map[x] = cp.tensor.class_of[(a, k, n.unit[h.target(k)])]
    phi_inv = GroupoidMorphism(ucp.groupoid, cp.groupoid, inv_map, {v: v for v in ucp.groupoid.vertices})
    assert validate_groupoid_morphism(phi_inv) == []
    for x in ucp.groupoid.arrows:
        assert amap[inv_map[x]] == x
    return UnilateralCollapse(cp, ucp, phi, phi_inv)


# ---------------------------------------------------------------------------
# From bundles to classical semidirect products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BundleSemidirect:
    unilateral: UnilateralCrossed
    semidirect: Groupoid             # N_λ ⋊ H in the classical sense
    iso: GroupoidMorphism            # semidirect -> unilateral
    canonical: bool                  # exactly when H is Schurian


def bundle_to_semidirect(ucp: UnilateralCrossed) -> BundleSemidirect:
    """Rewrites N⊗H as N_λ ⋊ H along a chosen maximal Schurian subgroupoid."""
    n, h, action = ucp.n, ucp.h, ucp.action
    assert is_connected(h), "H must be connected"
    lam0 = min(h.vertices)
    dec = decompose_connected(h, lam0)
    schur = {}
    for a in h.vertices:
        for b in h.vertices:
            schur[(a, b)] = h.mult[(h.inv[dec.transversal[a]], dec.transversal[b])]

    n_group = isotropy_group(n, lam0)
    a_gpd = from_group(n_group, "pt")

    def boomerang(k: str) -> str:
        # [λ0, s(k)]·k·[t(k), λ0], a loop at λ0 in H
        return h.mult[(h.mult[(schur[(lam0, h.source(k))], k)], schur[(h.target(k), lam0)])]

    arrow_act = {k: {x: action.act(boomerang(k), x) for x in n_group.elements} for k in h.arrows}
    vertex_act = {k: {"pt": "pt"} for k in h.arrows}
    weak = WeakAction(h, a_gpd.quiver, arrow_act, vertex_act)
    sd = semidirect_product(a_gpd, h, weak)
    assert sd.groupoid is not None  # single carrier vertex, so the action is strong

    def phi(x: str, mu: str) -> str:
        # conjugate a loop at λ0 to a loop at mu along the Schurian transversal
        return action.act(schur[(mu, lam0)], x)

    amap = {}
    for x in n_group.elements:
        for k in h.arrows:
            amap[f"({x},{k})"] = _pair(phi(x, h.source(k)), k)
    vmap = {f"(pt,{v})": v for v in h.vertices}
    iso = GroupoidMorphism(sd.groupoid, ucp.groupoid, amap, vmap)
    assert validate_groupoid_morphism(iso) == []
    assert len(set(amap.values())) == len(ucp.groupoid.arrows) == len(amap)
    return BundleSemidirect(ucp, sd.groupoid, iso, is_schurian(h))


# ---------------------------------------------------------------------------
# The split lemma over a fixed vertex set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitLemmaResult:
    reconstruction: Reconstruction
    collapse: UnilateralCollapse
    bundle_form: BundleSemidirect | None


def gpd_lambda_split_lemma(seq: ShortExactSequence) -> SplitLemmaResult:
    """Split sequences over a fixed vertex set: G ≅ N ⊗ H (and ≅ N_λ ⋊ H
    when H is connected)."""
    if seq.section is None:
        raise NotSplitFIT("sequence is not split")
    assert all(seq.pi.vertex_map[v] == v for v in seq.g.vertices), "π must fix the vertices"
    assert all(seq.section.vertex_map[v] == v for v in seq.h.vertices), "section must be strong"
    rec = reconstruct_from_split(seq)
    collapse = two_sided_to_one_sided(rec.crossed)
    bundle_form = None
    if is_connected(seq.h):
        bundle_form = bundle_to_semidirect(collapse.unilateral)
    return SplitLemmaResult(rec, collapse, bundle_form)
