import itertools

import pytest

from groupoids.actions import (
    SemistrongAction,
    TGGroupoid,
    WeakAction,
    groupoid_as_tg,
    is_tensor_fibre,
    left_multiplication_action,
    rotated_triangle,
    semidirect_product,
    tg_units_are_loops,
    trivial_weak_action,
    validate_semistrong_action,
    validate_tg_groupoid,
    validate_weak_action,
)
from groupoids.fixtures import nine_semidirect_action
from groupoids.group import cyclic_group
from groupoids.groupoid import (
    Groupoid,
    assemble_from_group_and_coarse,
    coarse,
    coarse_on,
    cyclic,
    from_group,
    group_bundle,
    loop_bundle,
    unit_groupoid,
    validate_groupoid,
)


def test_trivial_weak_action_valid():
    g = cyclic(3)
    q = coarse(2).quiver
    act = trivial_weak_action(g, q)
    assert validate_weak_action(act) == []


def test_conjugation_weak_action_on_loop_bundle():
    g = assemble_from_group_and_coarse(cyclic_group(2), ["a", "b"])
    lb = loop_bundle(g)
    arrow_act = {}
    vertex_act = {}
    for k in g.arrows:
        arrow_act[k] = {}
        s, t = g.source(k), g.target(k)
        vmap = {v: v for v in g.vertices}
        vmap[t], vmap[s] = s, t
        vertex_act[k] = vmap
        for x in lb.arrows:
            v = g.source(x)
            if v == t:
                arrow_act[k][x] = g.mult[(g.mult[(k, x)], g.inv[k])]
            elif v == s:
                kin = g.inv[k]
                arrow_act[k][x] = g.mult[(g.mult[(kin, x)], k)]
            else:
                arrow_act[k][x] = x
    act = WeakAction(g, lb.quiver, arrow_act, vertex_act)
    assert validate_weak_action(act, carrier_mult=lb) == []


def test_weak_action_functoriality_violation_reported():
    g = cyclic(2)
    q = unit_groupoid({"a", "b"}).quiver
    arrow_act = {
        "0": {x: x for x in q.arrows},
        "1": {"[a,a]": "[b,b]", "[b,b]": "[a,a]"},
    }
    vertex_act = {
        "0": {"a": "a", "b": "b"},
        "1": {"a": "a", "b": "b"},  # inconsistent with the arrow swap
    }
    act = WeakAction(g, q, arrow_act, vertex_act)
    assert validate_weak_action(act)


def test_left_multiplication_semistrong_not_strong():
    g = coarse(2)
    act = left_multiplication_action(g)
    assert validate_semistrong_action(act, carrier_mult=g, module_algebra=True) == []
    assert any(
        act.vertex_act[a][v] != v for a in g.arrows for v in g.vertices
    )  # not strong


def test_unit_groupoid_action_forced_trivial():
    bundle = group_bundle(cyclic_group(2), ["a", "b"])
    one = unit_groupoid({"a", "b"})
    arrow_act = {}
    for u in one.arrows:
        v = one.source(u)
        for x in bundle.arrows:
            if bundle.source(x) == v:
                arrow_act[(u, x)] = x
    act = SemistrongAction(one, bundle.quiver, arrow_act, {u: {v: v for v in one.vertices} for u in one.arrows})
    assert validate_semistrong_action(act, carrier_mult=bundle, module_algebra=True) == []


def test_semistrong_rejects_non_bijective_vertex_action():
    g = coarse(2)
    act = left_multiplication_action(g)
    bad_vertex = {a: {v: min(g.vertices) for v in g.vertices} for a in g.arrows}
    bad = SemistrongAction(g, g.quiver, act.arrow_act, bad_vertex)
    assert validate_semistrong_action(bad)


# ---------------------------------------------------------------------------
# semidirect products and the (▷,◁) laws
# ---------------------------------------------------------------------------

def test_group_by_groupoid_semidirect_is_groupoid():
    grp = from_group(cyclic_group(3), "pt")
    h = coarse(2)
    arrow_act = {k: {x: x for x in grp.arrows} for k in h.arrows}
    vertex_act = {k: {"pt": "pt"} for k in h.arrows}
    act = WeakAction(h, grp.quiver, arrow_act, vertex_act)
    sd = semidirect_product(grp, h, act)
    assert sd.is_tensor_fibre
    assert sd.groupoid is not None
    assert validate_groupoid(sd.groupoid) == []
    assert len(sd.groupoid.arrows) == 3 * 4
    report = validate_tg_groupoid(sd.tg)
    assert report.valid
    assert report.action_rules and report.module_morphism_rules and report.bimodule_rule


def test_trivial_right_factor_gives_left_factor():
    a = coarse(2)
    b = unit_groupoid({"z"})
    act = trivial_weak_action(b, a.quiver)
    sd = semidirect_product(a, b, act)
    assert sd.groupoid is not None
    assert len(sd.groupoid.arrows) == len(a.arrows)


def test_nine_semidirect_recovers_nine():
    k, h3, act = nine_semidirect_action()
    assert validate_weak_action(act, carrier_mult=k) == []
    sd = semidirect_product(k, h3, act)
    assert not sd.is_tensor_fibre
    assert sd.groupoid is None
    report = validate_tg_groupoid(sd.tg)
    assert report.valid
    assert report.action_rules and report.bimodule_rule and report.module_morphism_rules

    # the product is Schurian: arrows are determined by their endpoints
    tg = sd.tg
    seen = {}
    for arrow in tg.quiver.arrows:
        key = (tg.quiver.source[arrow], tg.quiver.target[arrow])
        assert key not in seen
        seen[key] = arrow

    # transport onto 9̂: the correspondence is a bijection matching
    # composability and multiplication
    nine = coarse_on([str(i) for i in range(1, 10)])
    rho = {"1": "4", "4": "7", "7": "1"}

    def rot(v, steps):
        for _ in range(steps % 3):
            v = rho[v]
        return v

    def chi(kv, hv):
        return str(int(kv) + int(hv) - 1)

    def transport(arrow):
        ka, ha = arrow[1:-1].split(",[")
        ka = ka.strip("[]")
        ha = ha.strip("[]")
        k1, k2 = ka.split(",")
        h1, h2 = ha.split(",")
        src = chi(k1, h1)
        tgt = chi(rot(k2, int(h1) - int(h2)), h2)
        return f"[{src},{tgt}]"

    images = {transport(a) for a in tg.quiver.arrows}
    assert images == set(nine.arrows)
    psi = {a: transport(a) for a in tg.quiver.arrows}
    for p1, p2 in itertools.product(sorted(tg.quiver.arrows), repeat=2):
        composable = (p1, p2) in tg.mult
        nine_comp = nine.target(psi[p1]) == nine.source(psi[p2])
        assert composable == nine_comp
        if composable:
            assert psi[tg.mult[(p1, p2)]] == nine.mult[(psi[p1], psi[p2])]


def test_is_tensor_fibre_iff_strong():
    k, h3, act = nine_semidirect_action()
    assert not is_tensor_fibre(act)
    assert is_tensor_fibre(trivial_weak_action(h3, k.quiver))


def test_unit_only_action_is_tensor():
    a = coarse(2)
    b = unit_groupoid({"z", "w"})
    act = trivial_weak_action(b, a.quiver)
    assert is_tensor_fibre(act)


# ---------------------------------------------------------------------------
# (▷,◁)-groupoids
# ---------------------------------------------------------------------------

def test_plain_groupoid_as_tg_valid_with_loop_units():
    g = coarse(3)
    t = groupoid_as_tg(g)
    report = validate_tg_groupoid(t)
    assert report.valid
    assert report.units_literal and report.inverses_literal
    assert report.action_rules and report.module_morphism_rules
    assert tg_units_are_loops(t)


def test_rotated_triangle_valid_no_loop_units():
    t = rotated_triangle()
    report = validate_tg_groupoid(t)
    assert report.valid, report.problems
    # all three arrows are units and none is a loop
    units = set(t.units.values())
    assert units == set(t.quiver.arrows)
    assert all(t.quiver.source[u] != t.quiver.target[u] for u in units)
    assert not tg_units_are_loops(t)
    # the twisted examples necessarily break the literal unit indexing
    assert not report.units_literal


def test_rotated_triangle_composability_diagonal():
    t = rotated_triangle()
    for a in t.quiver.arrows:
        for b in t.quiver.arrows:
            assert ((a, b) in t.mult) == (a == b)


def test_tg_report_flags_broken_mult_domain():
    g = coarse(2)
    t = groupoid_as_tg(g)
    broken = TGGroupoid(
        t.quiver, t.left_act, t.right_act,
        {k: v for k, v in t.mult.items() if k[0] != k[1]},
        t.units, t.inv,
    )
    report = validate_tg_groupoid(broken)
    assert not report.composability_is_twist
    assert not report.valid
