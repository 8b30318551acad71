import itertools

import pytest

from groupoids.errors import PushForwardNotCoarse, TargetNotFIT
from groupoids.fixtures import fig_case_study
from groupoids.schurian import (
    EquivalenceRelation,
    coarse_rel,
    discrete_rel,
    eqrel_kernel,
    eqrel_morphism_check,
    fiber_relation,
    forced_coarse_closure,
    push_forward,
    rel_from_blocks,
    relation_from_schurian,
    schurian_groupoid_from_relation,
    schurian_lift,
    schurian_universal_factorization,
    union_rel,
    zigzag_path,
)
from groupoids.util import Partition, set_partitions


def test_kernel_of_injective_map_is_discrete():
    rel = rel_from_blocks([["a", "b"], ["c"]])
    f0 = {"a": "x", "b": "y", "c": "z"}
    k = eqrel_kernel(f0, rel, coarse_rel({"x", "y", "z"}))
    assert k.is_discrete()


def test_push_forward_of_discrete_is_discrete():
    rel = discrete_rel({"a", "b", "c"})
    f0 = {"a": "x", "b": "y", "c": "x"}
    out = push_forward(f0, rel, {"x", "y"})
    assert out.is_discrete()


def test_fig4_pushforward_coarse():
    # Λ = {l, m, l2, m2}, ≡_G = {l~m, l2~m2}, f merges m and m2
    rel = rel_from_blocks([["l", "m"], ["l2", "m2"]])
    f0 = {"l": "L", "m": "M", "m2": "M", "l2": "L2"}
    out = push_forward(f0, rel, {"L", "M", "L2"})
    assert out.is_coarse()


def test_morphism_check():
    rel = rel_from_blocks([["a", "b"]])
    assert eqrel_morphism_check({"a": "x", "b": "x"}, rel, discrete_rel({"x"}))
    assert not eqrel_morphism_check(
        {"a": "x", "b": "y"}, rel, discrete_rel({"x", "y"})
    )


def test_schurian_lift_fig4():
    rel = rel_from_blocks([["l", "m"], ["l2", "m2"]])
    f0 = {"l": "L", "m": "M", "m2": "M", "l2": "L2"}
    lift = schurian_lift(f0, rel, {"L", "M", "L2"})
    assert lift.middle.is_coarse()
    assert lift.tilde_kernel.related("m", "m2")
    assert not lift.tilde_kernel.related("l", "m")
    assert sorted(len(b) for b in lift.tilde_kernel.partition.blocks()) == [1, 1, 2]


def test_schurian_lift_rejects_non_coarse_pushforward():
    rel = discrete_rel({"a", "b"})
    f0 = {"a": "x", "b": "y"}
    with pytest.raises(PushForwardNotCoarse):
        schurian_lift(f0, rel, {"x", "y"})


def test_schurian_lift_coarse_input():
    rel = coarse_rel({"a", "b"})
    f0 = {"a": "x", "b": "x"}
    lift = schurian_lift(f0, rel, {"x"})
    assert lift.tilde_kernel.is_coarse()


def test_zigzag_chain_on_six_vertex_alternation():
    # chain 1 -g- 2 -n- 3 -g- 4 -n- 5 -g- 6
    rel_g = rel_from_blocks([["1", "2"], ["3", "4"], ["5", "6"]])
    tilde = rel_from_blocks([["2", "3"], ["4", "5"], ["1"], ["6"]])
    path = zigzag_path(rel_g, tilde, "1", "6")
    assert path is not None
    assert path[0][1] == "1" and path[-1][2] == "6"
    kinds = [k for k, _, _ in path]
    assert "g" in kinds and "n" in kinds


def test_zigzag_none_when_disconnected():
    rel_g = rel_from_blocks([["1", "2"], ["3"]])
    tilde = discrete_rel({"1", "2", "3"})
    assert zigzag_path(rel_g, tilde, "1", "3") is None


def test_factorization_on_fig4_instance():
    rel = rel_from_blocks([["l", "m"], ["l2", "m2"]])
    f0 = {"l": "L", "m": "M", "m2": "M", "l2": "L2"}
    lift = schurian_lift(f0, rel, {"L", "M", "L2"})
    # R := the lifted sequence itself, m = identity
    out = schurian_universal_factorization(
        lift, coarse_rel(rel.carrier), f0, {x: x for x in rel.carrier}
    )
    assert out.xi0 == {x: x for x in rel.carrier}
    assert all(chain is not None for chain in out.chains.values())


def test_factorization_rejects_non_fit_target():
    rel = rel_from_blocks([["l", "m"], ["l2", "m2"]])
    f0 = {"l": "L", "m": "M", "m2": "M", "l2": "L2"}
    lift = schurian_lift(f0, rel, {"L", "M", "L2"})
    # target with a fiber not fully related: discrete on a 2-element fiber
    bad_rel = rel_from_blocks([["l", "m", "l2"], ["m2"]])
    with pytest.raises(TargetNotFIT):
        schurian_universal_factorization(lift, bad_rel, f0, {x: x for x in rel.carrier})


def test_forced_coarse_corollary_fig4():
    rel = rel_from_blocks([["l", "m"], ["l2", "m2"]])
    f0 = {"l": "L", "m": "M", "m2": "M", "l2": "L2"}
    lift = schurian_lift(f0, rel, {"L", "M", "L2"})
    assert forced_coarse_closure(lift)


def all_instances(n: int):
    """All (partition, fiber-map) pairs on n labeled points."""
    items = [str(i) for i in range(1, n + 1)]
    parts = list(set_partitions(items))
    for gp in parts:
        rel_g = rel_from_blocks(gp)
        for fp in parts:
            f0 = {}
            mu = set()
            for i, block in enumerate(fp):
                name = f"c{i}"
                mu.add(name)
                for x in block:
                    f0[x] = name
            yield rel_g, f0, frozenset(mu)


def test_exhaustive_small_instances():
    checked = 0
    for n in range(1, 5):
        for rel_g, f0, mu in all_instances(n):
            pushed = push_forward(f0, rel_g, mu)
            if not pushed.is_coarse():
                continue
            lift = schurian_lift(f0, rel_g, mu)
            assert forced_coarse_closure(lift)
            out = schurian_universal_factorization(
                lift, coarse_rel(rel_g.carrier), f0, {x: x for x in rel_g.carrier}
            )
            checked += 1
    assert checked > 50


def test_schurian_groupoid_dictionary_roundtrip():
    rel = rel_from_blocks([["a", "b"], ["c"]])
    g = schurian_groupoid_from_relation(rel)
    back = relation_from_schurian(g)
    assert sorted(len(b) for b in back.partition.blocks()) == [1, 2]


def test_lift_matches_groupoid_lift_for_schurian_inputs():
    """For Schurian input the groupoid lift is coarse and its virtual-kernel
    vertex partition is the fiber relation."""
    from groupoids.fixtures import fig_case_study_sequence
    from groupoids.lift import build_lift

    seq = fig_case_study_sequence()
    lift = build_lift(seq)
    assert all(grp.order == 1 for grp in lift.family.factors.values())
    f0 = seq.pi.vertex_map
    rel = relation_from_schurian(seq.g)
    s_lift = schurian_lift(f0, rel, seq.h.vertices)
    assert lift.virtual_kernel_vertex_partition() == s_lift.tilde_kernel.partition
