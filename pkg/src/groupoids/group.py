"""Finite groups as explicit multiplication tables.

Element identifiers are strings. Multiplication is written in the same
left-to-right order used for groupoid arrows, so isotropy groups extracted
from a groupoid carry their table over unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple[str, ...]
    mult: dict[tuple[str, str], str]
    identity: str
    inverse: dict[str, str]

    def op(self, a: str, b: str) -> str:
        return self.mult[(a, b)]

    def inv(self, a: str) -> str:
        return self.inverse[a]

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def __repr__(self) -> str:
        return f"FiniteGroup(order {self.order})"


def validate_group(g: FiniteGroup) -> list[str]:
    report = []
    els = g.elements
    if len(set(els)) != len(els):
        report.append("duplicate elements")
    if g.identity not in els:
        report.append("identity not an element")
        return report
    for a, b in itertools.product(els, repeat=2):
        if (a, b) not in g.mult:
            report.append(f"mult undefined on ({a},{b})")
            return report
        if g.mult[(a, b)] not in els:
            report.append(f"mult ({a},{b}) lands outside the group")
    for a in els:
        if g.mult[(g.identity, a)] != a or g.mult[(a, g.identity)] != a:
            report.append(f"identity not neutral on {a}")
        if a not in g.inverse or g.inverse[a] not in els:
            report.append(f"inverse missing for {a}")
        elif g.mult[(a, g.inverse[a])] != g.identity or g.mult[(g.inverse[a], a)] != g.identity:
            report.append(f"inverse wrong for {a}")
    for a, b, c in itertools.product(els, repeat=3):
        if g.mult[(g.mult[(a, b)], c)] != g.mult[(a, g.mult[(b, c)])]:
            report.append(f"associativity fails on ({a},{b},{c})")
            return report
    return report


def trivial_group() -> FiniteGroup:
    return FiniteGroup(("e",), {("e", "e"): "e"}, "e", {"e": "e"})


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(str(i) for i in range(n))
    mult = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    inv = {str(a): str((-a) % n) for a in range(n)}
    return FiniteGroup(els, mult, "0", inv)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n with elements written as image strings; product is apply-left-then-right."""
    perms = sorted("".join(p) for p in itertools.permutations("0123456789"[:n]))

    def compose(p: str, q: str) -> str:
        # (p·q)(x) = q(p(x)): diagrammatic order, matching arrow composition
        return "".join(q[int(p[i])] for i in range(n))

    mult = {(p, q): compose(p, q) for p in perms for q in perms}
    ident = "0123456789"[:n]
    inv = {}
    for p in perms:
        img = ["?"] * n
        for i in range(n):
            img[int(p[i])] = str(i)
        inv[p] = "".join(img)
    return FiniteGroup(tuple(perms), mult, ident, inv)


def direct_product_group(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    els = tuple(f"({a},{b})" for a in g.elements for b in h.elements)
    mult = {}
    for a1, b1 in itertools.product(g.elements, h.elements):
        for a2, b2 in itertools.product(g.elements, h.elements):
            mult[(f"({a1},{b1})", f"({a2},{b2})")] = f"({g.op(a1, a2)},{h.op(b1, b2)})"
    inv = {f"({a},{b})": f"({g.inv(a)},{h.inv(b)})" for a in g.elements for b in h.elements}
    return FiniteGroup(els, mult, f"({g.identity},{h.identity})", inv)


def subgroup_closure(g: FiniteGroup, gens: set[str]) -> frozenset[str]:
    closed = {g.identity} | set(gens)
    frontier = list(closed)
    while frontier:
        a = frontier.pop()
        for b in list(closed):
            for c in (g.op(a, b), g.op(b, a), g.inv(a)):
                if c not in closed:
                    closed.add(c)
                    frontier.append(c)
    return frozenset(closed)


def all_subgroups(g: FiniteGroup) -> list[frozenset[str]]:
    found = {frozenset({g.identity})}
    frontier = [frozenset({g.identity})]
    while frontier:
        h = frontier.pop()
        for x in g.elements:
            if x not in h:
                bigger = subgroup_closure(g, set(h) | {x})
                if bigger not in found:
                    found.add(bigger)
                    frontier.append(bigger)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def is_normal_subgroup(g: FiniteGroup, h: frozenset[str]) -> bool:
    return all(g.op(g.op(x, n), g.inv(x)) in h for x in g.elements for n in h)


def quotient_group(g: FiniteGroup, n: frozenset[str]) -> tuple[FiniteGroup, dict[str, str]]:
    """Quotient by a normal subgroup; returns the quotient and the projection map."""
    coset_of: dict[str, str] = {}
    for a in sorted(g.elements):
        if a in coset_of:
            continue
        members = sorted(g.op(a, x) for x in n)
        rep = members[0]
        for m in members:
            coset_of[m] = rep
    reps = tuple(sorted(set(coset_of.values())))
    mult = {(a, b): coset_of[g.op(a, b)] for a in reps for b in reps}
    inv = {a: coset_of[g.inv(a)] for a in reps}
    return FiniteGroup(reps, mult, coset_of[g.identity], inv), coset_of


def is_group_hom(dom: FiniteGroup, cod: FiniteGroup, phi: dict[str, str]) -> bool:
    if set(phi) != set(dom.elements):
        return False
    if any(phi[a] not in cod.elements for a in dom.elements):
        return False
    return all(
        phi[dom.op(a, b)] == cod.op(phi[a], phi[b]) for a in dom.elements for b in dom.elements
    )


def find_group_isomorphism(g: FiniteGroup, h: FiniteGroup) -> dict[str, str] | None:
    """Backtracking search for a group isomorphism g -> h."""
    if g.order != h.order:
        return None

    def order_of(grp: FiniteGroup, a: str) -> int:
        k, x = 1, a
        while x != grp.identity:
            x = grp.op(x, a)
            k += 1
        return k

    g_orders = {a: order_of(g, a) for a in g.elements}
    h_orders = {a: order_of(h, a) for a in h.elements}
    if sorted(g_orders.values()) != sorted(h_orders.values()):
        return None

    g_els = sorted(g.elements, key=lambda a: (-g_orders[a], a))
    phi: dict[str, str] = {g.identity: h.identity}
    used = {h.identity}

    def extend(i: int) -> bool:
        while i < len(g_els) and g_els[i] in phi:
            i += 1
        if i == len(g_els):
            return True
        a = g_els[i]
        for b in h.elements:
            if b in used or h_orders[b] != g_orders[a]:
                continue
            # tentatively map the subgroup generated by dom(phi) ∪ {a}
            trial = dict(phi)
            trial[a] = b
            ok = True
            new = [a]
            while new and ok:
                x = new.pop()
                for y in list(trial):
                    for u, v in ((x, y), (y, x)):
                        w = g.op(u, v)
                        img = h.op(trial[u], trial[v])
                        if w in trial:
                            if trial[w] != img:
                                ok = False
                                break
                        else:
                            if img in trial.values():
                                ok = False
                                break
                            trial[w] = img
                            new.append(w)
                    if not ok:
                        break
            if ok:
                saved_used = set(used)
                used.clear()
                used.update(trial.values())
                saved_phi = dict(phi)
                phi.clear()
                phi.update(trial)
                if extend(i + 1):
                    return True
                phi.clear()
                phi.update(saved_phi)
                used.clear()
                used.update(saved_used)
        return False

    if extend(0):
        return dict(phi)
    return None


def groups_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    return find_group_isomorphism(g, h) is not None
