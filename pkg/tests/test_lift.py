import pytest

from groupoids.errors import CompatibilityFailure, NotSplitFIT
from groupoids.fixtures import (
    coarse_block_split_sequence,
    fig_case_study_sequence,
    fig_disagreeing_schurian,
    fig_no_coherent_family,
    fig_two_to_z4_sequence,
    nine_grid_sequence,
    s3_split_sequence,
    sequence_from_epi,
    trivial_over,
)
from groupoids.freeproduct import EMPTY_WORD
from groupoids.group import cyclic_group
from groupoids.groupoid import (
    GroupoidMorphism,
    are_isomorphic,
    assemble_from_group_and_coarse,
    coarse,
    coarse_on,
    unit_groupoid,
    validate_groupoid_morphism,
)
from groupoids.lift import (
    SequenceMorphism,
    build_lift,
    build_lifts,
    canonical_self_morphism,
    iota_morphism,
    lift_morphism,
    materialized_sequence,
    probe_words,
    split_lift,
    universal_factorization,
)
from groupoids.normal import is_fit_sequence, validate_sequence


def test_fig3_lift_is_coarse4():
    seq = fig_case_study_sequence()
    assert validate_sequence(seq) == []
    lift = build_lift(seq)
    mat = lift.materialize()
    assert mat is not None
    assert are_isomorphic(mat.model, coarse(4))


def test_fig3_virtual_kernel_partition():
    lift = build_lift(fig_case_study_sequence())
    part = lift.virtual_kernel_vertex_partition()
    assert sorted(len(b) for b in part.blocks()) == [1, 1, 2]


def test_fig3_virtual_kernel_dashed_arrow_exists():
    lift = build_lift(fig_case_study_sequence())
    f0 = lift.base.pi.vertex_map
    merged = [v for v in lift.vertices if sum(1 for w in lift.vertices if f0[w] == f0[v]) == 2]
    a, b = sorted(merged)
    assert lift.virtual_kernel_contains(EMPTY_WORD, (a, b))
    assert not lift.virtual_kernel_contains(EMPTY_WORD, (a, min(set(lift.vertices) - set(merged))))


def test_fig5_lift_is_z4_times_two():
    seq = fig_two_to_z4_sequence()
    lift = build_lift(seq)
    mat = lift.materialize()
    assert mat is not None
    assert are_isomorphic(mat.model, assemble_from_group_and_coarse(cyclic_group(4), ["x", "y"]))


def test_fig5_virtual_kernel_loops():
    lift = build_lift(fig_two_to_z4_sequence())
    # injection(0, 1) is not in the virtual kernel: maps to 1 in Z/4
    w = lift.family.injection(0, "1")
    v = min(lift.vertices)
    assert not lift.virtual_kernel_contains(w, (v, v))
    assert lift.virtual_kernel_contains(EMPTY_WORD, tuple(sorted(lift.vertices)))


def test_group_epi_lift_is_free_product():
    seq = s3_split_sequence()
    lift = build_lift(seq)
    # two nontrivial factors: S_3-group and Z/2-group, so the lift is infinite
    assert not lift.group_is_finite()
    orders = sorted(grp.order for grp in lift.family.factors.values())
    assert orders == [2, 6]


def test_lift_mult_inv_units():
    lift = build_lift(fig_two_to_z4_sequence())
    w = lift.family.injection(0, "1")
    vs = sorted(lift.vertices)
    x = (w, (vs[0], vs[1]))
    xi = lift.tilde_inv(x)
    prod = lift.tilde_mult(x, xi)
    assert prod == lift.tilde_unit(vs[0])
    sq = lift.tilde_mult((w, (vs[0], vs[0])), (w, (vs[0], vs[0])))
    assert sq[0] == lift.family.injection(0, "2")


def test_tilde_f_eval_empty_word():
    lift = build_lift(fig_case_study_sequence())
    h = lift.base.h
    for v in lift.vertices:
        hv = lift.base.pi.vertex_map[v]
        assert lift.f_eval(EMPTY_WORD, (v, v)) == h.unit[hv]


def test_section_round_trip_exhaustive():
    for seq in (fig_case_study_sequence(), fig_two_to_z4_sequence(), s3_split_sequence()):
        lift = build_lift(seq)
        for arrow in seq.h.arrows:
            word, ends = lift.section_arrow(arrow)
            assert lift.f_eval(word, ends) == arrow


def test_disagreeing_schurian_still_lifts():
    f = fig_disagreeing_schurian()
    assert validate_groupoid_morphism(f) == []
    seq = sequence_from_epi(f)
    lift = build_lift(seq)  # internal checks assert f̃∘ι = f despite the disagreement
    assert lift.group_is_finite()
    mat = lift.materialize()
    assert are_isomorphic(mat.model, assemble_from_group_and_coarse(cyclic_group(2), list("wxyz")))


def test_no_coherent_family_lifts():
    f = fig_no_coherent_family()
    seq = sequence_from_epi(f)
    lift = build_lift(seq)
    assert are_isomorphic(lift.materialize().model, coarse(6))


def test_disconnected_h_plumbing():
    from groupoids.groupoid import disjoint_union

    g = disjoint_union([coarse_on(["a", "b"]), coarse_on(["c", "d"])])
    h = disjoint_union([unit_groupoid({"x"}), unit_groupoid({"y"})])
    amap = {}
    vmap = {}
    for v in g.vertices:
        vmap[v] = "0.x" if v.startswith("0.") else "1.y"
    for a in g.arrows:
        amap[a] = h.unit[vmap[g.source(a)]]
    pi = GroupoidMorphism(g, h, amap, vmap)
    lifts = build_lifts(g, pi)
    assert len(lifts) == 2
    for lift in lifts:
        assert are_isomorphic(lift.materialize().model, coarse(2))


def test_materialized_sequence_is_split_fit():
    for seq in (fig_case_study_sequence(), fig_two_to_z4_sequence()):
        lift = build_lift(seq)
        target, m = materialized_sequence(lift)
        assert validate_sequence(target) == []
        assert target.section is not None
        assert is_fit_sequence(target).holds


def test_iota_morphism_mono_and_commutes():
    seq = fig_case_study_sequence()
    lift = build_lift(seq)
    inc = iota_morphism(lift)
    assert validate_groupoid_morphism(inc) == []
    target, _ = materialized_sequence(lift)
    for a in seq.g.arrows:
        assert target.pi.arrow_map[inc.arrow_map[a]] == seq.pi.arrow_map[a]


# ---------------------------------------------------------------------------
# split lifts
# ---------------------------------------------------------------------------

def test_split_lift_nine_grid():
    seq = nine_grid_sequence()
    assert validate_sequence(seq) == []
    lift = split_lift(seq)   # asserts ι∘s = s̃ internally
    assert lift.split_index is not None
    assert are_isomorphic(lift.materialize().model, coarse(9))


def test_split_lift_groups():
    seq = s3_split_sequence()
    lift = split_lift(seq)
    assert lift.split_index == 1
    assert not lift.group_is_finite()


def test_split_lift_trivial_sequence():
    seq = trivial_over(coarse_on(["u", "v"]))
    lift = split_lift(seq)
    # H*H-style lift: factor 0 and the component factor are both H's group (trivial here)
    assert are_isomorphic(lift.materialize().model, coarse(2))


def test_split_lift_rejects_sectionless():
    with pytest.raises(NotSplitFIT):
        split_lift(fig_case_study_sequence())


# ---------------------------------------------------------------------------
# functoriality
# ---------------------------------------------------------------------------

def swap_automorphism_sequence():
    """G = two isolated units over a point; swapping them commutes with f."""
    g = unit_groupoid({"p", "q"})
    h = unit_groupoid({"z"})
    pi = GroupoidMorphism(g, h, {a: "[z,z]" for a in g.arrows}, {v: "z" for v in g.vertices})
    return sequence_from_epi(pi)


def test_lift_identity_morphism():
    seq = fig_case_study_sequence()
    lift = build_lift(seq)
    from groupoids.groupoid import identity_groupoid_morphism

    m = SequenceMorphism(seq, seq, identity_groupoid_morphism(seq.n), identity_groupoid_morphism(seq.g))
    lm = lift_morphism(lift, lift, m)
    for i, grp in lift.family.factors.items():
        for e in grp.elements:
            if e != grp.identity:
                pass
    assert lm.section_vertices_exact
    for w in probe_words(lift.family, 2, cap=50):
        assert lm.apply_word(w) == w


def test_lift_swap_automorphism():
    seq = swap_automorphism_sequence()
    lift = build_lift(seq)
    g = seq.g
    xi = GroupoidMorphism(
        g, g, {"[p,p]": "[q,q]", "[q,q]": "[p,p]"}, {"p": "q", "q": "p"}
    )
    eta = GroupoidMorphism(seq.n, seq.n, xi.arrow_map, xi.vertex_map)
    m = SequenceMorphism(seq, seq, eta, xi)
    lm = lift_morphism(lift, lift, m)
    # the induced map is the vertex swap on the coarse lift; the fixed
    # set-theoretic section cannot be swap-equivariant
    assert lm.vertex_map == {"p": "q", "q": "p"}
    assert not lm.section_vertices_exact


def test_lift_morphism_composition_law():
    seq = swap_automorphism_sequence()
    lift = build_lift(seq)
    g = seq.g
    swap = GroupoidMorphism(g, g, {"[p,p]": "[q,q]", "[q,q]": "[p,p]"}, {"p": "q", "q": "p"})
    eta = GroupoidMorphism(seq.n, seq.n, swap.arrow_map, swap.vertex_map)
    m = SequenceMorphism(seq, seq, eta, swap)
    lm = lift_morphism(lift, lift, m)
    # swap∘swap = identity lifts to the identity
    twice_vertex = {v: lm.vertex_map[lm.vertex_map[v]] for v in g.vertices}
    assert twice_vertex == {v: v for v in g.vertices}
    for w in probe_words(lift.family, 2, cap=50):
        assert lm.apply_word(lm.apply_word(w)) == w


def test_lift_canonical_inclusion_into_materialized():
    seq = fig_case_study_sequence()
    lift = build_lift(seq)
    target, m = materialized_sequence(lift)
    # the lift of the materialized sequence itself
    lift2 = build_lift(target)
    lm = lift_morphism(lift, lift2, m)
    for w in probe_words(lift.family, 2, cap=100):
        img = lm.apply_word(w)
        for a in sorted(lift.vertices)[:3]:
            for b in sorted(lift.vertices)[:3]:
                assert lift2.f_eval(img, (lm.vertex_map[a], lm.vertex_map[b])) == lift.f_eval(w, (a, b))


# ---------------------------------------------------------------------------
# the universal property
# ---------------------------------------------------------------------------

def test_universal_factorization_groups_to_trivial_extension():
    seq = s3_split_sequence()
    lift = build_lift(seq)
    target = trivial_over(seq.h)
    # xi = s_R ∘ f = f (section of target is the identity)
    xi = GroupoidMorphism(seq.g, seq.h, dict(seq.pi.arrow_map), dict(seq.pi.vertex_map))
    eta = GroupoidMorphism(
        seq.n, target.n,
        {a: target.n.unit["pt"] for a in seq.n.arrows},
        {"pt": "pt"},
    )
    m = SequenceMorphism(seq, target, eta, xi)
    out = universal_factorization(lift, target, m)
    # ξ̃ on the free product S_3 * Z/2 evaluates letters via (f, id)
    w = lift.family.multiply(
        lift.family.injection(1, "120"), lift.family.injection(0, "1")
    )
    evaluated = out.xi_group(w)
    h_grp = lift.h_group()
    assert evaluated == h_grp.op(seq.pi.arrow_map["120"], "1")


def test_universal_factorization_self_target():
    seq = coarse_block_split_sequence([["1", "2"], ["3", "4"]])
    assert is_fit_sequence(seq).holds
    lift = build_lift(seq)
    m = canonical_self_morphism(seq)
    out = universal_factorization(lift, seq, m)
    # the factorization sends ι-arrows to ξ = s∘f of them
    for a in seq.g.arrows:
        assert out.apply(lift.iota_arrow(a)) == m.xi.arrow_map[a]


def test_universal_factorization_materialized_lift_target():
    seq = fig_case_study_sequence()
    lift = build_lift(seq)
    target, m = materialized_sequence(lift)
    out = universal_factorization(lift, target, m)
    # ξ̃ is the projection s̃∘f̃ of the lift onto its section image
    mat = lift.materialize()
    for w in probe_words(lift.family, 2, cap=50):
        for a in sorted(lift.vertices)[:3]:
            for b in sorted(lift.vertices)[:3]:
                expected = mat.to_model(lift.section_arrow(lift.f_eval(w, (a, b))))
                assert out.apply((w, (a, b))) == expected


def test_universal_factorization_rejects_non_split():
    seq = fig_case_study_sequence()
    lift = build_lift(seq)
    target = fig_case_study_sequence()  # no section
    m = SequenceMorphism(
        seq, target,
        GroupoidMorphism(seq.n, target.n, {a: a for a in seq.n.arrows}, {v: v for v in seq.n.vertices}),
        GroupoidMorphism(seq.g, target.g, {a: a for a in seq.g.arrows}, {v: v for v in seq.g.vertices}),
    )
    with pytest.raises(NotSplitFIT):
        universal_factorization(lift, target, m)


def test_universal_factorization_rejects_incompatible_xi():
    seq = coarse_block_split_sequence([["1", "2"], ["3", "4"]])
    lift = build_lift(seq)
    # the identity morphism is a valid comparison but has ξ ≠ s∘f
    from groupoids.groupoid import identity_groupoid_morphism

    bad = SequenceMorphism(
        seq, seq, identity_groupoid_morphism(seq.n), identity_groupoid_morphism(seq.g)
    )
    with pytest.raises(CompatibilityFailure):
        universal_factorization(lift, seq, bad)
