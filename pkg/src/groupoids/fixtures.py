"""Shared example instances: the counterexample gallery and small generators.

These are the regression instances the acceptance suite runs against; the CLI
ships them as text files too (scripts/make_fixtures.py).
"""

from __future__ import annotations

from .group import cyclic_group, symmetric_group
from .groupoid import (
    Groupoid,
    GroupoidMorphism,
    coarse_on,
    cyclic,
    disjoint_union,
    from_group,
    unit_groupoid,
)
from .normal import ShortExactSequence, Subgroupoid, kernel


def _schurian_morphism(g: Groupoid, h: Groupoid, vertex_map: dict[str, str]) -> GroupoidMorphism:
    """The unique morphism between Schurian groupoids extending a vertex map."""
    amap = {}
    for a in g.arrows:
        candidates = h.arrows_between(vertex_map[g.source(a)], vertex_map[g.target(a)])
        assert len(candidates) == 1, "codomain not Schurian enough to force the arrow map"
        amap[a] = candidates[0]
    return GroupoidMorphism(g, h, amap, dict(vertex_map))


def sequence_from_epi(pi: GroupoidMorphism) -> ShortExactSequence:
    ker = kernel(pi)
    n = ker.as_groupoid()
    iota = GroupoidMorphism(n, pi.domain, {a: a for a in n.arrows}, {v: v for v in n.vertices})
    return ShortExactSequence(n, pi.domain, pi.codomain, iota, pi)


def fig_image_not_subgroupoid() -> GroupoidMorphism:
    """Two Schurian components mapping into a connected Schurian groupoid.

    The image contains f(a): L->M and f(b): M->L2 but not their composite.
    """
    g = disjoint_union([coarse_on(["l", "m"]), coarse_on(["l2", "m2"])])
    h = coarse_on(["L", "M", "L2"])
    vmap = {"0.l": "L", "0.m": "M", "1.m2": "M", "1.l2": "L2"}
    f = _schurian_morphism(g, h, vmap)
    return f


def fig_two_to_z4() -> GroupoidMorphism:
    """Coarse groupoid on two vertices onto Z/4, crossing arrow to 1."""
    g = coarse_on(["l", "m"])
    h = cyclic(4)
    amap = {"[l,l]": "0", "[m,m]": "0", "[l,m]": "1", "[m,l]": "3"}
    return GroupoidMorphism(g, h, amap, {"l": "pt", "m": "pt"})


def fig_case_study() -> GroupoidMorphism:
    """The virtual-kernel case study: f merges two vertices across components."""
    g = disjoint_union([coarse_on(["l", "m"]), coarse_on(["l2", "m2"])])
    h = coarse_on(["L", "M", "L2"])
    vmap = {"0.l": "L", "0.m": "M", "1.m2": "M", "1.l2": "L2"}
    return _schurian_morphism(g, h, vmap)


def fig_case_study_sequence() -> ShortExactSequence:
    return sequence_from_epi(fig_case_study())


def fig_two_to_z4_sequence() -> ShortExactSequence:
    return sequence_from_epi(fig_two_to_z4())


def fig_no_coherent_family() -> GroupoidMorphism:
    """Three components with no common choice of base vertex over H."""
    g = disjoint_union(
        [coarse_on(["a1", "b1"]), coarse_on(["a2", "b2"]), coarse_on(["a3", "b3"])]
    )
    h = coarse_on(["A1", "B", "A", "B3"])
    vmap = {"0.a1": "A1", "0.b1": "B", "1.a2": "A", "1.b2": "B", "2.a3": "A", "2.b3": "B3"}
    return _schurian_morphism(g, h, vmap)


def fig_disagreeing_schurian() -> GroupoidMorphism:
    """No choice of maximal Schurian subgroupoids is respected by f."""
    from .groupoid import assemble_from_group_and_coarse

    g = disjoint_union([coarse_on(["a1", "b1"]), coarse_on(["a2", "b2"])])
    h = assemble_from_group_and_coarse(cyclic_group(2), ["a", "b"])
    amap = {}
    vmap = {"0.a1": "a", "0.b1": "b", "1.a2": "a", "1.b2": "b"}
    for a in g.arrows:
        s, t = vmap[g.source(a)], vmap[g.target(a)]
        elt = "0" if a.startswith("0.") else ("0" if s == t else "1")
        amap[a] = f"({elt},{s},{t})"
    return GroupoidMorphism(g, h, amap, vmap)


def six_mod_blocks() -> tuple[Groupoid, Subgroupoid]:
    """6̂ with the normal subgroupoid {1,2,3}̂ ⊔ {4,5,6}̂."""
    g = coarse_on(["1", "2", "3", "4", "5", "6"])
    arrows = {
        f"[{a},{b}]"
        for block in (["1", "2", "3"], ["4", "5", "6"])
        for a in block
        for b in block
    }
    return g, Subgroupoid(g, frozenset(arrows), g.vertices)


def nine_grid() -> tuple[Groupoid, Subgroupoid, Groupoid]:
    """9̂, its block-normal subgroupoid, and the section image 3̂ on {1,2,3}."""
    g = coarse_on([str(i) for i in range(1, 10)])
    blocks = [["1", "4", "7"], ["2", "5", "8"], ["3", "6", "9"]]
    n_arrows = frozenset(f"[{a},{b}]" for block in blocks for a in block for b in block)
    n = Subgroupoid(g, n_arrows, g.vertices)
    h_arrows = frozenset(f"[{a},{b}]" for a in "123" for b in "123")
    from .groupoid import restrict

    h = restrict(g, h_arrows, frozenset({"1", "2", "3"}))
    return g, n, h


def nine_grid_sequence() -> ShortExactSequence:
    """The split FIT sequence N -> 9̂ -> 3̂ with the least-representative section."""
    from .normal import sequence_from_normal

    g, n, h_sub = nine_grid()
    seq = sequence_from_normal(g, n)
    h = seq.h
    # section: each quotient vertex class to its least representative
    vsec = {}
    for v in h.vertices:
        members = v.split("|")
        vsec[v] = min(members)
    asec = {}
    for a in h.arrows:
        s, t = h.source(a), h.target(a)
        asec[a] = f"[{vsec[s]},{vsec[t]}]"
    section = GroupoidMorphism(h, g, asec, vsec)
    return ShortExactSequence(seq.n, seq.g, seq.h, seq.iota, seq.pi, section)


def s3_split_sequence() -> ShortExactSequence:
    """Z/3 -> S_3 -> Z/2 with the transposition section."""
    s3 = from_group(symmetric_group(3), "pt")
    z2 = from_group(cyclic_group(2), "pt")
    sign = {p: "0" if p in ("012", "120", "201") else "1" for p in s3.arrows}
    pi = GroupoidMorphism(s3, z2, sign, {"pt": "pt"})
    section = GroupoidMorphism(z2, s3, {"0": "012", "1": "021"}, {"pt": "pt"})
    n_arrows = frozenset(p for p in s3.arrows if sign[p] == "0")
    from .groupoid import restrict

    n = restrict(s3, n_arrows, frozenset({"pt"}))
    iota = GroupoidMorphism(n, s3, {a: a for a in n.arrows}, {"pt": "pt"})
    return ShortExactSequence(n, s3, z2, iota, pi, section)


def trivial_over(h: Groupoid) -> ShortExactSequence:
    """1 -> H -> H with the identity as section."""
    n = unit_groupoid(h.vertices)
    remap = {a: h.unit[n.source(a)] for a in n.arrows}
    iota = GroupoidMorphism(n, h, remap, {v: v for v in n.vertices})
    ident = GroupoidMorphism(h, h, {a: a for a in h.arrows}, {v: v for v in h.vertices})
    return ShortExactSequence(n, h, h, iota, ident, ident)


def nine_semidirect_action():
    """3̂ acting on K = {1,4,7}̂ by rotations: the twisted product carries 9̂.

    The action of [c,d] rotates K by (d-c) steps along 1 -> 4 -> 7 -> 1; it is
    functorial but not strong, so the semidirect product is a genuine
    (▷,◁)-structure rather than a groupoid.
    """
    from .actions import WeakAction

    k = coarse_on(["1", "4", "7"])
    h3 = coarse_on(["1", "2", "3"])
    rho = {"1": "4", "4": "7", "7": "1"}

    def rot(v: str, steps: int) -> str:
        for _ in range(steps % 3):
            v = rho[v]
        return v

    arrow_act = {}
    vertex_act = {}
    for a in h3.arrows:
        c, d = a[1:-1].split(",")
        steps = (int(d) - int(c)) % 3
        vertex_act[a] = {v: rot(v, steps) for v in k.vertices}
        arrow_act[a] = {
            x: f"[{rot(k.source(x), steps)},{rot(k.target(x), steps)}]" for x in k.arrows
        }
    return k, h3, WeakAction(h3, k.quiver, arrow_act, vertex_act)


def coarse_block_split_sequence(blocks: list[list[str]]) -> ShortExactSequence:
    """n̂ -> m̂ collapsing the given vertex blocks, split by least representatives."""
    from .normal import sequence_from_normal

    vs = [v for b in blocks for v in b]
    g = coarse_on(vs)
    arrows = frozenset(f"[{a},{b}]" for blk in blocks for a in blk for b in blk)
    n = Subgroupoid(g, arrows, g.vertices)
    seq = sequence_from_normal(g, n)
    h = seq.h
    vsec = {v: min(v.split("|")) for v in h.vertices}
    asec = {a: f"[{vsec[h.source(a)]},{vsec[h.target(a)]}]" for a in h.arrows}
    section = GroupoidMorphism(h, g, asec, vsec)
    return ShortExactSequence(seq.n, seq.g, seq.h, seq.iota, seq.pi, section)
