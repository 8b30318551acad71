"""Weak and semistrong groupoid actions, semidirect products, (▷,◁)-groupoids.

A semidirect product A⋊B composes along a twisted rule: a₁×b₁ then a₂×b₂ is
allowed when (target a₁, target b₁) = (b₁▷source a₂, source b₂). Such products
are groupoid-like structures whose composability is governed by per-arrow
vertex permutations; they are genuine groupoids exactly when the action is
strong.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .groupoid import Groupoid
from .quiver import Quiver, QuiverMorphism, validate_morphism


# ---------------------------------------------------------------------------
# Weak actions: functors into the fully faithful quiver endomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeakAction:
    actor: Groupoid
    carrier: Quiver
    arrow_act: dict[str, dict[str, str]]    # g -> (carrier arrow -> carrier arrow)
    vertex_act: dict[str, dict[str, str]]   # g -> (carrier vertex -> carrier vertex)

    def act(self, g: str, x: str) -> str:
        return self.arrow_act[g][x]

    def act_vertex(self, g: str, v: str) -> str:
        return self.vertex_act[g][v]

    def endo(self, g: str) -> QuiverMorphism:
        return QuiverMorphism(self.carrier, self.carrier, self.arrow_act[g], self.vertex_act[g])


def validate_weak_action(act: WeakAction, carrier_mult: Groupoid | None = None) -> list[str]:
    report = []
    g = act.actor
    for arrow in sorted(g.arrows):
        if arrow not in act.arrow_act or arrow not in act.vertex_act:
            report.append(f"action undefined on {arrow}")
            continue
        endo = act.endo(arrow)
        bad = validate_morphism(endo)
        if bad:
            report.append(f"θ_{arrow} is not a quiver endomorphism: {bad[0]}")
        if len(set(act.arrow_act[arrow].values())) != len(act.carrier.arrows):
            report.append(f"θ_{arrow} is not fully faithful")
    if report:
        return report
    for a, b in g.composable_pairs():
        ab = g.mult[(a, b)]
        for x in sorted(act.carrier.arrows):
            if act.arrow_act[ab][x] != act.arrow_act[a][act.arrow_act[b][x]]:
                report.append(f"θ is not functorial on ({a},{b}) at {x}")
                break
        for v in sorted(act.carrier.vertices):
            if act.vertex_act[ab][v] != act.vertex_act[a][act.vertex_act[b][v]]:
                report.append(f"θ⁰ is not functorial on ({a},{b}) at {v}")
                break
    if report:
        return report
    # derived properties: θ_{g⁻¹} inverts θ_g on arrows; θ⁰ bijective on im(s)∪im(t)
    used = {act.carrier.source[x] for x in act.carrier.arrows} | {
        act.carrier.target[x] for x in act.carrier.arrows
    }
    for arrow in sorted(g.arrows):
        inv = g.inv[arrow]
        for x in act.carrier.arrows:
            if act.arrow_act[inv][act.arrow_act[arrow][x]] != x:
                report.append(f"θ_{inv} does not invert θ_{arrow}")
                break
        image = {act.vertex_act[arrow][v] for v in used}
        if image != used:
            report.append(f"θ⁰_{arrow} is not a bijection of im(s)∪im(t)")
    if carrier_mult is not None:
        report += module_algebra_violations(act, carrier_mult)
    return report


def module_algebra_violations(act: WeakAction, carrier_mult: Groupoid) -> list[str]:
    report = []
    for arrow in sorted(act.actor.arrows):
        for x, y in carrier_mult.composable_pairs():
            lhs = act.arrow_act[arrow][carrier_mult.mult[(x, y)]]
            gx, gy = act.arrow_act[arrow][x], act.arrow_act[arrow][y]
            if carrier_mult.target(gx) != carrier_mult.source(gy):
                report.append(f"θ_{arrow} breaks consecutiveness of ({x},{y})")
                return report
            if lhs != carrier_mult.mult[(gx, gy)]:
                report.append(f"θ_{arrow} is not multiplicative on ({x},{y})")
                return report
    return report


def trivial_weak_action(actor: Groupoid, carrier: Quiver) -> WeakAction:
    return WeakAction(
        actor,
        carrier,
        {g: {x: x for x in carrier.arrows} for g in actor.arrows},
        {g: {v: v for v in carrier.vertices} for g in actor.arrows},
    )


# ---------------------------------------------------------------------------
# Semistrong actions over a shared vertex set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemistrongAction:
    actor: Groupoid
    carrier: Quiver
    arrow_act: dict[tuple[str, str], str]     # (g, x) -> g▷x, defined iff target(g)=source(x)
    vertex_act: dict[str, dict[str, str]]     # g -> bijection of the shared vertex set

    def act(self, g: str, x: str) -> str:
        return self.arrow_act[(g, x)]


def validate_semistrong_action(
    act: SemistrongAction, carrier_mult: Groupoid | None = None, module_algebra: bool = False
) -> list[str]:
    report = []
    g, q = act.actor, act.carrier
    lam = g.vertices
    if q.vertices != lam:
        report.append("actor and carrier must share the vertex set")
        return report
    for arrow in sorted(g.arrows):
        va = act.vertex_act.get(arrow)
        if va is None or set(va) != set(lam) or set(va.values()) != set(lam):
            report.append(f"vertex action of {arrow} is not a bijection of the vertex set")
            continue
        if va[g.target(arrow)] != g.source(arrow):
            report.append(f"vertex action of {arrow} does not send target to source")
    for arrow in sorted(g.arrows):
        for x in sorted(q.arrows):
            defined = (arrow, x) in act.arrow_act
            composable = g.target(arrow) == q.source[x]
            if defined != composable:
                report.append(f"arrow action domain wrong on ({arrow},{x})")
            elif defined:
                gx = act.arrow_act[(arrow, x)]
                if gx not in q.arrows:
                    report.append(f"{arrow}▷{x} is not a carrier arrow")
                elif q.source[gx] != g.source(arrow):
                    report.append(f"{arrow}▷{x} has the wrong source")
    if report:
        return report
    for v in lam:
        unit = g.unit[v]
        for x in q.arrows:
            if q.source[x] == v and act.arrow_act[(unit, x)] != x:
                report.append(f"unit at {v} does not act trivially on {x}")
    for a, b in g.composable_pairs():
        ab = g.mult[(a, b)]
        for x in q.arrows:
            if q.source[x] == g.target(b):
                if act.arrow_act[(ab, x)] != act.arrow_act[(a, act.arrow_act[(b, x)])]:
                    report.append(f"action law fails on ({a},{b},{x})")
    if module_algebra and carrier_mult is not None and not report:
        for a in sorted(g.arrows):
            for x, y in carrier_mult.composable_pairs():
                if carrier_mult.source(x) != g.target(a):
                    continue
                gx = act.arrow_act[(a, x)]
                gy_src = carrier_mult.source(y)
                if gy_src != g.target(a):
                    continue
                gy = act.arrow_act[(a, y)]
                if carrier_mult.target(gx) != carrier_mult.source(gy):
                    continue
                if act.arrow_act[(a, carrier_mult.mult[(x, y)])] != carrier_mult.mult[(gx, gy)]:
                    report.append(f"module-algebra law fails on ({a},{x},{y})")
    return report


def left_multiplication_action(g: Groupoid) -> SemistrongAction:
    """g acting on itself by left multiplication; semistrong but not strong."""
    arrow_act = {}
    for a in g.arrows:
        for x in g.arrows:
            if g.target(a) == g.source(x):
                arrow_act[(a, x)] = g.mult[(a, x)]
    vertex_act = {}
    for a in g.arrows:
        s, t = g.source(a), g.target(a)
        swap = {v: v for v in g.vertices}
        swap[s], swap[t] = t, s
        vertex_act[a] = swap
    return SemistrongAction(g, g.quiver, arrow_act, vertex_act)


# ---------------------------------------------------------------------------
# (▷,◁)-groupoids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TGGroupoid:
    quiver: Quiver
    left_act: dict[str, dict[str, str]]     # a -> (λ -> a▷λ)
    right_act: dict[str, dict[str, str]]    # a -> (λ -> λ◁a)
    mult: dict[tuple[str, str], str]
    units: dict[str, str]                   # λ -> the unit arrow 1_λ (maybe not a loop)
    inv: dict[str, str]

    def composable(self, a: str, b: str) -> bool:
        return self.right_act[b][self.quiver.target[a]] == self.left_act[a][self.quiver.source[b]]


@dataclass(frozen=True)
class TGReport:
    no_isolated_vertices: bool
    permutation_type: bool
    composability_is_twist: bool
    associativity: bool
    units_exist: bool
    units_literal: bool
    inverses_exist: bool
    inverses_literal: bool
    action_rules: bool
    bimodule_rule: bool
    module_morphism_rules: bool
    unit_endpoint_equations: bool
    problems: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        """The satisfiable core of the axioms; the literal unit indexing and
        the module laws are reported separately (twisted examples break them)."""
        return (
            self.no_isolated_vertices
            and self.permutation_type
            and self.composability_is_twist
            and self.associativity
            and self.units_exist
            and self.inverses_exist
        )


def validate_tg_groupoid(t: TGGroupoid) -> TGReport:
    q = t.quiver
    problems = []
    lam = sorted(q.vertices)
    used = {q.source[x] for x in q.arrows} | {q.target[x] for x in q.arrows}
    no_isolated = used == set(lam)
    if not no_isolated:
        problems.append("isolated vertices present")

    perm_type = True
    for a in sorted(q.arrows):
        for table, name in ((t.left_act, "▷"), (t.right_act, "◁")):
            m = table.get(a)
            if m is None or set(m) != set(lam) or set(m.values()) != set(lam):
                perm_type = False
                problems.append(f"{name}-map of {a} is not a permutation")

    comp_ok = True
    if perm_type:
        for a, b in itertools.product(sorted(q.arrows), repeat=2):
            defined = (a, b) in t.mult
            twisted = t.composable(a, b)
            if defined != twisted:
                comp_ok = False
                problems.append(f"mult domain disagrees with the twist on ({a},{b})")
                break

    assoc = True
    for a, b in t.mult:
        ab = t.mult[(a, b)]
        for c in sorted(q.arrows):
            left = t.mult.get((ab, c)) if (ab, c) in t.mult else None
            bc = t.mult.get((b, c))
            right = t.mult.get((a, bc)) if bc is not None and (a, bc) in t.mult else None
            both_undefined = (ab, c) not in t.mult and (bc is None or (a, bc) not in t.mult)
            if both_undefined:
                continue
            if left is None or right is None or left != right:
                assoc = False
                problems.append(f"associativity fails on ({a},{b},{c})")
                break
        if not assoc:
            break

    unit_family = set(t.units.values())
    units_exist = True
    for a in sorted(q.arrows):
        has_right = any(t.mult.get((a, u)) == a for u in unit_family)
        has_left = any(t.mult.get((u, a)) == a for u in unit_family)
        if not (has_right and has_left):
            units_exist = False
            problems.append(f"{a} lacks a one-sided unit in the family")
            break
    units_literal = all(
        t.mult.get((a, t.units[q.target[a]])) == a and t.mult.get((t.units[q.source[a]], a)) == a
        for a in q.arrows
    )

    inverses_exist = True
    for a in sorted(q.arrows):
        x = t.inv.get(a)
        ok = (
            x is not None
            and t.mult.get((a, x)) in unit_family
            and t.mult.get((x, a)) in unit_family
            and t.mult.get((t.mult[(a, x)], a)) == a
            and t.mult.get((a, t.mult[(x, a)])) == a
        )
        if not ok:
            inverses_exist = False
            problems.append(f"{a} lacks a two-sided inverse")
            break
    inverses_literal = all(
        t.inv.get(a) is not None
        and t.mult.get((a, t.inv[a])) == t.units[q.source[a]]
        and t.mult.get((t.inv[a], a)) == t.units[q.target[a]]
        for a in q.arrows
    )

    def compose_maps(p, r):
        return {v: p[r[v]] for v in lam}

    action_rules = True
    for (a, b), ab in t.mult.items():
        if t.left_act[ab] != compose_maps(t.left_act[a], t.left_act[b]):
            action_rules = False
        if t.right_act[ab] != compose_maps(t.right_act[b], t.right_act[a]):
            action_rules = False
    bimodule = all(
        compose_maps(t.left_act[a], t.right_act[b]) == compose_maps(t.right_act[b], t.left_act[a])
        for a in q.arrows
        for b in q.arrows
    )
    module_rules = all(
        q.target[ab] == t.left_act[a][q.target[b]] and q.source[ab] == t.right_act[b][q.source[a]]
        for (a, b), ab in t.mult.items()
    )
    unit_eqs = all(
        t.right_act[t.units[q.target[a]]][q.target[a]]
        == t.left_act[a][q.source[t.units[q.target[a]]]]
        and t.right_act[a][q.target[t.units[q.source[a]]]]
        == t.left_act[t.units[q.source[a]]][q.source[a]]
        for a in q.arrows
    ) if units_literal else False

    return TGReport(
        no_isolated, perm_type, comp_ok, assoc, units_exist, units_literal,
        inverses_exist, inverses_literal, action_rules, bimodule, module_rules,
        unit_eqs, tuple(problems),
    )


def tg_units_are_loops(t: TGGroupoid) -> bool:
    """Checks the loop-unit criterion: trivially acting units plus ◁a = (a▷)⁻¹
    force every unit to be a loop; returns whether all units are loops."""
    q = t.quiver
    lam = sorted(q.vertices)
    ident = {v: v for v in lam}
    hyp_units = all(
        t.left_act[u] == ident and t.right_act[u] == ident for u in set(t.units.values())
    )
    hyp_inverse = all(
        {v: t.right_act[a][t.left_act[a][v]] for v in lam} == ident for a in q.arrows
    )
    all_loops = all(q.source[u] == q.target[u] for u in set(t.units.values()))
    if hyp_units and hyp_inverse:
        assert all_loops, "loop-unit criterion falsified"
    return all_loops


def groupoid_as_tg(g: Groupoid) -> TGGroupoid:
    """A genuine groupoid with trivial permutations is a (▷,◁)-groupoid."""
    ident = {v: v for v in g.vertices}
    return TGGroupoid(
        g.quiver,
        {a: dict(ident) for a in g.arrows},
        {a: dict(ident) for a in g.arrows},
        dict(g.mult),
        dict(g.unit),
        dict(g.inv),
    )


def rotated_triangle() -> TGGroupoid:
    """Three non-loop arrows, all of them units: the unit bundle on three
    vertices as seen by a uniformly rotating observer.

    Each arrow composes only with itself (the observer reads the second factor
    with time-shifted endpoint labels), the left permutation of an arrow swaps
    its endpoints, and the right action is trivial.
    """
    vs = ["1", "2", "3"]
    nxt = {"1": "2", "2": "3", "3": "1"}
    arrows = {f"u{v}": v for v in vs}
    q = Quiver(
        frozenset(vs),
        frozenset(arrows),
        {a: v for a, v in arrows.items()},
        {a: nxt[v] for a, v in arrows.items()},
    )
    ident = {v: v for v in vs}
    left = {}
    for a, v in arrows.items():
        swap = dict(ident)
        swap[v], swap[nxt[v]] = nxt[v], v
        left[a] = swap
    right = {a: dict(ident) for a in arrows}
    mult = {(a, a): a for a in arrows}
    units = {v: f"u{v}" for v in vs}
    inv = {a: a for a in arrows}
    return TGGroupoid(q, left, right, mult, units, inv)


# ---------------------------------------------------------------------------
# Semidirect products
# ---------------------------------------------------------------------------

def _pair(a: str, b: str) -> str:
    return f"({a},{b})"


@dataclass(frozen=True)
class SemidirectProduct:
    left: Groupoid
    right: Groupoid
    action: WeakAction
    tg: TGGroupoid
    is_tensor_fibre: bool
    groupoid: Groupoid | None      # present exactly when the action is strong


def is_tensor_fibre(action: WeakAction) -> bool:
    """True iff the twisted fibre product degenerates to the tensor product,
    i.e. the vertex action is the identity throughout."""
    return all(
        action.vertex_act[g][v] == v
        for g in action.actor.arrows
        for v in action.carrier.vertices
    )


def semidirect_product(a: Groupoid, b: Groupoid, action: WeakAction) -> SemidirectProduct:
    """A⋊B for a left action of B on A's quiver making A a B-module algebra."""
    bad = validate_weak_action(action, carrier_mult=a)
    assert not bad, f"invalid action: {bad}"
    assert action.carrier == a.quiver

    vertices = frozenset(_pair(x, y) for x in a.vertices for y in b.vertices)
    arrows = frozenset(_pair(x, y) for x in a.arrows for y in b.arrows)
    source = {}
    target = {}
    for x in a.arrows:
        for y in b.arrows:
            source[_pair(x, y)] = _pair(a.source(x), b.source(y))
            target[_pair(x, y)] = _pair(a.target(x), b.target(y))
    quiver = Quiver(vertices, arrows, source, target)

    left_act = {}
    right_act = {}
    ident = {v: v for v in vertices}
    for x in a.arrows:
        for y in b.arrows:
            act = {
                _pair(v, w): _pair(action.vertex_act[y][v], w)
                for v in a.vertices
                for w in b.vertices
            }
            left_act[_pair(x, y)] = act
            right_act[_pair(x, y)] = dict(ident)

    mult = {}
    for x1, y1 in itertools.product(sorted(a.arrows), sorted(b.arrows)):
        for x2, y2 in itertools.product(sorted(a.arrows), sorted(b.arrows)):
            if b.target(y1) != b.source(y2):
                continue
            if a.target(x1) != action.vertex_act[y1][a.source(x2)]:
                continue
            prod_left = a.mult[(x1, action.arrow_act[y1][x2])]
            mult[(_pair(x1, y1), _pair(x2, y2))] = _pair(prod_left, b.mult[(y1, y2)])

    units = {_pair(v, w): _pair(a.unit[v], b.unit[w]) for v in a.vertices for w in b.vertices}
    inv = {}
    for x in a.arrows:
        for y in b.arrows:
            yi = b.inv[y]
            inv[_pair(x, y)] = _pair(action.arrow_act[yi][a.inv[x]], yi)

    tg = TGGroupoid(quiver, left_act, right_act, mult, units, inv)
    _check_semidirect_laws(a, b, action, tg)

    tensor = is_tensor_fibre(action)
    groupoid = None
    if tensor:
        groupoid = Groupoid(quiver, mult, units, inv)
        from .groupoid import validate_groupoid

        assert validate_groupoid(groupoid) == []
    return SemidirectProduct(a, b, action, tg, tensor, groupoid)


def _check_semidirect_laws(a: Groupoid, b: Groupoid, action: WeakAction, tg: TGGroupoid) -> None:
    """Partial associativity, units, and inverses, exhaustively."""
    mult = tg.mult
    arrows = sorted(tg.quiver.arrows)
    # m(id×m) = m(m×id) with coinciding definedness
    for p1, p2 in mult:
        for p3 in arrows:
            lhs_def = (mult[(p1, p2)], p3) in mult
            rhs_def = (p2, p3) in mult and (p1, mult[(p2, p3)]) in mult
            assert lhs_def == rhs_def, f"definedness differs on ({p1},{p2},{p3})"
            if lhs_def:
                assert mult[(mult[(p1, p2)], p3)] == mult[(p1, mult[(p2, p3)])]
    # unit and inverse identities in the twisted form
    for x in sorted(a.arrows):
        for y in sorted(b.arrows):
            p = _pair(x, y)
            yi = b.inv[y]
            right_unit = _pair(a.unit[action.vertex_act[yi][a.target(x)]], b.unit[b.target(y)])
            left_unit = _pair(a.unit[a.source(x)], b.unit[b.source(y)])
            assert mult.get((p, right_unit)) == p
            assert mult.get((left_unit, p)) == p
            q = _pair(action.arrow_act[yi][a.inv[x]], yi)
            assert mult.get((p, q)) == left_unit
            assert mult.get((q, p)) == right_unit
