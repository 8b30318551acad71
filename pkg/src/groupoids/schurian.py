"""Equivalence-relation form of the lifted FIT theorem for Schurian groupoids.

A Schurian groupoid is an equivalence relation on its vertex set; under this
dictionary the universal lift becomes: kernel = fiber relation of the vertex
map, middle relation = the coarse one, and morphisms of lifted sequences are
verified by zig-zag chains alternating between the original relation and the
fiber relation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import PushForwardNotCoarse, TargetNotFIT
from .groupoid import Groupoid, coarse_on
from .util import Partition


@dataclass(frozen=True)
class EquivalenceRelation:
    carrier: frozenset[str]
    partition: Partition

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(self.carrier))
        assert self.partition.carrier == self.carrier

    def related(self, a: str, b: str) -> bool:
        return self.partition.same(a, b)

    def is_coarse(self) -> bool:
        return self.partition.is_coarse()

    def is_discrete(self) -> bool:
        return self.partition.is_discrete()

    def contains(self, other: "EquivalenceRelation") -> bool:
        return other.partition.refines(self.partition)

    def __repr__(self) -> str:
        return f"EquivalenceRelation({self.partition!r})"


def discrete_rel(carrier) -> EquivalenceRelation:
    return EquivalenceRelation(frozenset(carrier), Partition(carrier))


def coarse_rel(carrier) -> EquivalenceRelation:
    carrier = frozenset(carrier)
    return EquivalenceRelation(carrier, Partition.from_blocks([sorted(carrier)]))


def rel_from_blocks(blocks) -> EquivalenceRelation:
    p = Partition.from_blocks(blocks)
    return EquivalenceRelation(p.carrier, p)


def union_rel(a: EquivalenceRelation, b: EquivalenceRelation) -> EquivalenceRelation:
    assert a.carrier == b.carrier
    p = a.partition.copy()
    for block in b.partition.blocks():
        for x in block[1:]:
            p.union(block[0], x)
    return EquivalenceRelation(a.carrier, p)


def eqrel_morphism_check(f0: dict[str, str], frm: EquivalenceRelation, to: EquivalenceRelation) -> bool:
    for block in frm.partition.blocks():
        rep = block[0]
        for x in block[1:]:
            if not to.related(f0[rep], f0[x]):
                return False
    return True


def eqrel_kernel(
    f0: dict[str, str], rel_g: EquivalenceRelation, rel_h: EquivalenceRelation
) -> EquivalenceRelation:
    """a ≡ b iff a ≡_G b and f0(a) = f0(b); f0 must be a morphism into rel_h."""
    assert eqrel_morphism_check(f0, rel_g, rel_h), "f0 is not a morphism of relations"
    p = Partition(rel_g.carrier)
    for block in rel_g.partition.blocks():
        by_image: dict[str, str] = {}
        for x in block:
            if f0[x] in by_image:
                p.union(by_image[f0[x]], x)
            else:
                by_image[f0[x]] = x
    return EquivalenceRelation(rel_g.carrier, p)


def fiber_relation(f0: dict[str, str], carrier) -> EquivalenceRelation:
    p = Partition(carrier)
    by_image: dict[str, str] = {}
    for x in sorted(carrier):
        if f0[x] in by_image:
            p.union(by_image[f0[x]], x)
        else:
            by_image[f0[x]] = x
    return EquivalenceRelation(frozenset(carrier), p)


def push_forward(f0: dict[str, str], rel: EquivalenceRelation, codomain) -> EquivalenceRelation:
    p = Partition(codomain)
    for block in rel.partition.blocks():
        for x in block[1:]:
            p.union(f0[block[0]], f0[x])
    return EquivalenceRelation(frozenset(codomain), p)


# ---------------------------------------------------------------------------
# The lifted sequence of relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchurianLift:
    f0: dict[str, str]
    rel_g: EquivalenceRelation
    mu_set: frozenset[str]
    kernel_rel: EquivalenceRelation       # ≡_N
    tilde_kernel: EquivalenceRelation     # fiber relation of f0
    middle: EquivalenceRelation           # the coarse relation on Λ
    quotient: EquivalenceRelation         # the coarse relation on Μ


def schurian_lift(f0: dict[str, str], rel_g: EquivalenceRelation, mu_set) -> SchurianLift:
    mu_set = frozenset(mu_set)
    pushed = push_forward(f0, rel_g, mu_set)
    if not pushed.is_coarse():
        raise PushForwardNotCoarse("push-forward of the middle relation must be coarse")
    carrier = rel_g.carrier
    kernel = eqrel_kernel(f0, rel_g, coarse_rel(mu_set))
    tilde = fiber_relation(f0, carrier)
    lifted = SchurianLift(
        dict(f0), rel_g, mu_set, kernel, tilde, coarse_rel(carrier), coarse_rel(mu_set)
    )
    # the lifted sequence is FIT: f0(a) = f0(b) ⟺ a ≡̃ b, by construction
    assert all(
        (f0[a] == f0[b]) == tilde.related(a, b)
        for a in carrier
        for b in carrier
    )
    return lifted


def zigzag_path(
    rel_g: EquivalenceRelation, tilde_kernel: EquivalenceRelation, a: str, b: str
) -> list[tuple[str, str, str]] | None:
    """Chain a = a1 ≡_G a2 ≡̃_N a3 ≡_G ... = b, as (step kind, from, to) triples."""
    if a == b:
        return []
    prev: dict[str, tuple[str, str]] = {a: ("", "")}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for kind, rel in (("g", rel_g), ("n", tilde_kernel)):
            for y in rel.partition.block_of(x):
                if y not in prev:
                    prev[y] = (kind, x)
                    if y == b:
                        path = []
                        cur = b
                        while cur != a:
                            kind, parent = prev[cur]
                            path.append((kind, parent, cur))
                            cur = parent
                        return list(reversed(path))
                    queue.append(y)
    return None


@dataclass(frozen=True)
class SchurianFactorization:
    eta0: dict[str, str]
    xi0: dict[str, str]
    chains: dict[tuple[str, str], list[tuple[str, str, str]]]


def schurian_universal_factorization(
    lift: SchurianLift,
    nu_rel: EquivalenceRelation,
    r0: dict[str, str],
    xi0: dict[str, str],
) -> SchurianFactorization:
    """Unique morphism from the lifted sequence to a FIT sequence over Μ.

    The maps are forced (η̃ = ξ̃ = the given ξ); what needs proof is that ξ is a
    morphism out of the coarse relation, which the zig-zag chains witness.
    """
    carrier = sorted(lift.rel_g.carrier)
    # target sequence ker(r0) -> (Ν, ≡_R) -> (Μ, coarse) must be exact and FIT
    if not push_forward(r0, nu_rel, lift.mu_set).is_coarse():
        raise TargetNotFIT("r0 is not an epimorphism onto the coarse relation")
    for a in nu_rel.carrier:
        for b in nu_rel.carrier:
            if r0[a] == r0[b] and not nu_rel.related(a, b):
                raise TargetNotFIT("target fails the FIT condition")
    # the given square: r0 ∘ ξ0 = f0, and ξ0 a morphism out of ≡_G
    assert all(r0[xi0[x]] == lift.f0[x] for x in carrier), "square r0∘ξ0 = f0 fails"
    assert eqrel_morphism_check(xi0, lift.rel_g, nu_rel)

    kernel_of_r = eqrel_kernel(r0, nu_rel, coarse_rel(lift.mu_set))
    chains = {}
    for a in carrier:
        for b in carrier:
            chain = zigzag_path(lift.rel_g, lift.tilde_kernel, a, b)
            assert chain is not None, f"no zig-zag chain from {a} to {b}"
            chains[(a, b)] = chain
            # each chain step certifies ξ0(a) ≡_R ξ0(b)
            for kind, x, y in chain:
                if kind == "g":
                    assert nu_rel.related(xi0[x], xi0[y])
                else:
                    assert kernel_of_r.related(xi0[x], xi0[y])
            assert nu_rel.related(xi0[a], xi0[b])
    # η̃ is a morphism (Λ, ≡̃_N) -> ker(r0)
    assert eqrel_morphism_check(xi0, lift.tilde_kernel, kernel_of_r)
    return SchurianFactorization(dict(xi0), dict(xi0), chains)


def forced_coarse_closure(lift: SchurianLift) -> bool:
    """Corollary check: any relation containing ≡_G and ≡̃_N contains Λ×Λ."""
    return union_rel(lift.rel_g, lift.tilde_kernel).is_coarse()


# ---------------------------------------------------------------------------
# Dictionary between Schurian groupoids and equivalence relations
# ---------------------------------------------------------------------------

def relation_from_schurian(g: Groupoid) -> EquivalenceRelation:
    assert g.quiver.is_schurian()
    p = Partition(g.vertices)
    for a in g.arrows:
        p.union(g.source(a), g.target(a))
    return EquivalenceRelation(g.vertices, p)


def schurian_groupoid_from_relation(rel: EquivalenceRelation) -> Groupoid:
    from .groupoid import disjoint_union

    blocks = rel.partition.blocks()
    if len(blocks) == 1:
        return coarse_on(blocks[0])
    return disjoint_union([coarse_on(b) for b in blocks])
