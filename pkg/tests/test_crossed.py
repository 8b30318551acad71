import pytest

from groupoids.crossed import (
    balanced_tensor,
    balanced_tensor_two_generator_classes,
    bundle_to_semidirect,
    canonical_triple,
    conjugation_action,
    crossed_product_two_sided,
    gpd_lambda_split_lemma,
    reconstruct_from_split,
    two_sided_to_one_sided,
    unilateral_crossed,
)
from groupoids.errors import ComponentVertexCondition, NoFactorization, NotSplitFIT
from groupoids.fixtures import nine_grid_sequence, s3_split_sequence
from groupoids.group import cyclic_group, symmetric_group
from groupoids.groupoid import (
    GroupoidMorphism,
    are_isomorphic,
    assemble_from_group_and_coarse,
    coarse,
    coarse_on,
    from_group,
    group_bundle,
    is_schurian,
    restrict,
    validate_groupoid,
)
from groupoids.normal import ShortExactSequence, kernel


def test_nine_balanced_tensor_81_singletons():
    seq = nine_grid_sequence()
    rec = reconstruct_from_split(seq)
    bt = rec.crossed.tensor
    assert len(bt.classes) == 81
    assert all(len(bt.members[c]) == 1 for c in bt.classes)


def test_nine_crossed_is_nine():
    seq = nine_grid_sequence()
    rec = reconstruct_from_split(seq)
    assert are_isomorphic(rec.crossed.groupoid, coarse(9))
    # and the canonical triple of [7,5] is ([7,1],[1,2],[2,5])
    cls = rec.forward.arrow_map["[7,5]"]
    assert rec.crossed.tensor.rep(cls) == ("[7,1]", "[1,2]", "[2,5]")


def test_nine_unit_example():
    seq = nine_grid_sequence()
    rec = reconstruct_from_split(seq)
    cls = rec.forward.arrow_map["[7,7]"]
    assert ("[7,1]", "[1,1]", "[1,7]") in rec.crossed.tensor.members[cls]


def test_single_move_matches_two_generator_closure():
    for seq in (nine_grid_sequence(), s3_split_sequence()):
        rec = reconstruct_from_split(seq)
        bt = rec.crossed.tensor
        other = balanced_tensor_two_generator_classes(bt)
        for t, c in bt.class_of.items():
            assert set(bt.members[c]) == {s for s, d in other.items() if d == other[t]}


def test_s3_reconstruction():
    seq = s3_split_sequence()
    rec = reconstruct_from_split(seq)
    bt = rec.crossed.tensor
    assert len(bt.classes) == 6
    assert all(len(bt.members[c]) == 3 for c in bt.classes)
    assert are_isomorphic(rec.crossed.groupoid, from_group(symmetric_group(3), "pt"))
    for x in seq.g.arrows:
        assert rec.backward.arrow_map[rec.forward.arrow_map[x]] == x


def test_reconstruction_of_unit_kernel():
    # N = unit bundle, section = identity: the reconstruction is identity-like
    from groupoids.fixtures import trivial_over

    seq = trivial_over(coarse_on(["x", "y"]))
    rec = reconstruct_from_split(seq)
    assert are_isomorphic(rec.crossed.groupoid, seq.g)


def test_embedded_n_normal_and_isomorphic():
    seq = nine_grid_sequence()
    rec = reconstruct_from_split(seq)
    emb = rec.crossed.embedded_n
    assert emb.is_wide()
    n_arrows = frozenset(seq.iota.arrow_map[a] for a in seq.n.arrows)
    image = set(rec.crossed.embedding_iso.arrow_map.values())
    assert image == set(n_arrows)


def test_reconstruct_rejects_unsplit():
    from groupoids.fixtures import fig_case_study_sequence

    with pytest.raises(NotSplitFIT):
        reconstruct_from_split(fig_case_study_sequence())


def test_crossed_h_unit_groupoid_gives_n():
    # H = the unit groupoid on one vertex per component: product ≅ N
    n = coarse_on(["1", "2"])
    h = restrict(n, frozenset({"[1,1]"}), frozenset({"1"}))
    act_arrows = {("[1,1]", "[1,1]"): "[1,1]"}
    from groupoids.actions import SemistrongAction

    act = SemistrongAction(h, _loops_at(n, {"1"}), act_arrows, {"[1,1]": {"1": "1"}})
    cp = crossed_product_two_sided(n, h, act)
    assert are_isomorphic(cp.groupoid, n)


def _loops_at(n, vertices):
    from groupoids.quiver import Quiver

    arrows = frozenset(
        a for a in n.arrows if n.source(a) == n.target(a) and n.source(a) in vertices
    )
    return Quiver(
        frozenset(vertices),
        arrows,
        {a: n.source(a) for a in arrows},
        {a: n.target(a) for a in arrows},
    )


def test_component_condition_enforced():
    n = coarse_on(["1", "2"])
    h = restrict(n, frozenset({"[1,1]", "[2,2]"}), frozenset({"1", "2"}))
    from groupoids.actions import SemistrongAction

    act = SemistrongAction(
        h,
        _loops_at(n, {"1", "2"}),
        {("[1,1]", "[1,1]"): "[1,1]", ("[2,2]", "[2,2]"): "[2,2]"},
        {"[1,1]": {"1": "1", "2": "2"}, "[2,2]": {"1": "1", "2": "2"}},
    )
    with pytest.raises(ComponentVertexCondition):
        balanced_tensor(n, h, act)


def test_canonical_triple_no_factorization_raises():
    seq = nine_grid_sequence()
    rec = reconstruct_from_split(seq)
    g = seq.g
    n_arrows = frozenset(a for a in g.arrows if a in {"[1,1]"})
    h_sub = restrict(g, frozenset(seq.section.arrow_map.values()),
                     frozenset(seq.section.vertex_map.values()))
    with pytest.raises(NoFactorization):
        canonical_triple(g, n_arrows, h_sub, rec.crossed.tensor, "[4,4]")


# ---------------------------------------------------------------------------
# unilateral collapse
# ---------------------------------------------------------------------------

def z2_bundle_split_sequence():
    """16-arrow G over two vertices: a Z/2 bundle extended by 2̂ with swap."""
    g = assemble_from_group_and_coarse(cyclic_group(2), ["a", "b"])
    h = coarse_on(["a", "b"])
    pi = GroupoidMorphism(
        g, h,
        {x: f"[{g.source(x)},{g.target(x)}]" for x in g.arrows},
        {v: v for v in g.vertices},
    )
    section = GroupoidMorphism(
        h, g,
        {x: f"(0,{h.source(x)},{h.target(x)})" for x in h.arrows},
        {v: v for v in h.vertices},
    )
    ker = kernel(pi)
    n = ker.as_groupoid()
    iota = GroupoidMorphism(n, g, {a: a for a in n.arrows}, {v: v for v in n.vertices})
    return ShortExactSequence(n, g, h, iota, pi, section)


def test_unilateral_crossed_z2_bundle():
    seq = z2_bundle_split_sequence()
    rec = reconstruct_from_split(seq)
    collapse = two_sided_to_one_sided(rec.crossed)
    assert len(collapse.unilateral.groupoid.arrows) == 8  # |N̲|=4 loops pair with... 2 per source × 4 h
    assert validate_groupoid(collapse.unilateral.groupoid) == []
    assert are_isomorphic(collapse.unilateral.groupoid, seq.g)


def test_group_case_unilateral_is_semidirect():
    seq = s3_split_sequence()
    rec = reconstruct_from_split(seq)
    collapse = two_sided_to_one_sided(rec.crossed)
    assert are_isomorphic(collapse.unilateral.groupoid, seq.g)


def test_bundle_to_semidirect_z2():
    seq = z2_bundle_split_sequence()
    rec = reconstruct_from_split(seq)
    collapse = two_sided_to_one_sided(rec.crossed)
    bundle_form = bundle_to_semidirect(collapse.unilateral)
    assert bundle_form.canonical  # H = 2̂ is Schurian
    assert are_isomorphic(bundle_form.semidirect, seq.g)


def test_bundle_to_semidirect_non_schurian_h():
    # G = (Z/2 x Z/2) x 2̂-style tower: H has isotropy, so the witness is
    # recorded as non-canonical
    g = assemble_from_group_and_coarse(cyclic_group(2), ["a", "b"])
    trivial_bundle = group_bundle(cyclic_group(1), ["a", "b"]) if False else None
    from groupoids.fixtures import trivial_over

    seq = trivial_over(g)
    res = gpd_lambda_split_lemma(seq)
    assert res.bundle_form is not None
    assert not res.bundle_form.canonical
    assert are_isomorphic(res.bundle_form.semidirect, g)


def test_gpd_lambda_split_lemma_group_case():
    seq = s3_split_sequence()
    res = gpd_lambda_split_lemma(seq)
    assert res.bundle_form is not None
    assert res.bundle_form.canonical is False or res.bundle_form.canonical  # flag present
    assert are_isomorphic(res.bundle_form.semidirect, seq.g)


def test_gpd_lambda_split_lemma_z2_bundle():
    seq = z2_bundle_split_sequence()
    res = gpd_lambda_split_lemma(seq)
    assert are_isomorphic(res.collapse.unilateral.groupoid, seq.g)
    assert are_isomorphic(res.bundle_form.semidirect, seq.g)


def test_split_lemma_rejects_non_split():
    from groupoids.fixtures import fig_case_study_sequence

    with pytest.raises(NotSplitFIT):
        gpd_lambda_split_lemma(fig_case_study_sequence())


def test_trivial_action_direct_product_like():
    n = group_bundle(cyclic_group(2), ["a", "b"])
    h = coarse_on(["a", "b"])
    from groupoids.actions import SemistrongAction

    arrow_act = {}
    for k in h.arrows:
        for x in n.arrows:
            if n.source(x) == h.target(k):
                elt = x.split("@")[0]
                arrow_act[(k, x)] = f"{elt}@{h.source(k)}"
    vertex_act = {}
    for k in h.arrows:
        vmap = {v: v for v in h.vertices}
        vmap[h.target(k)], vmap[h.source(k)] = h.source(k), h.target(k)
        vertex_act[k] = vmap
    act = SemistrongAction(h, n.quiver, arrow_act, vertex_act)
    ucp = unilateral_crossed(n, h, act)
    assert len(ucp.groupoid.arrows) == 8
    assert are_isomorphic(ucp.groupoid, assemble_from_group_and_coarse(cyclic_group(2), ["a", "b"]))
