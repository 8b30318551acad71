"""The property suite: acceptance criteria and invariant checks.

Every check is a module-level function returning (passed, detail); the CLI
`suite` subcommand and tests/test_acceptance.py both run them. Results are
deterministic for a fixed seed.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import fixtures
from .freeproduct import EMPTY_WORD, GroupFamily, Word, reduce_in_random_order
from .group import cyclic_group, symmetric_group
from .groupoid import (
    GroupoidMorphism,
    are_isomorphic,
    assemble_from_group_and_coarse,
    coarse,
    coarse_on,
    cyclic,
    disjoint_union,
    from_group,
    group_bundle,
    is_connected,
    is_schurian,
    unit_groupoid,
)
from .lift import (
    build_lift,
    canonical_self_morphism,
    materialized_sequence,
    split_lift,
    universal_factorization,
)
from .normal import (
    Subgroupoid,
    enumerate_normal_subgroupoids,
    is_fit_sequence,
    kernel,
    quotient_geometry,
    sequence_from_normal,
    two_sided_quotient,
    unit_subgroupoid,
)
from .schurian import (
    coarse_rel,
    forced_coarse_closure,
    push_forward,
    rel_from_blocks,
    schurian_lift,
    schurian_universal_factorization,
)
from .util import set_partitions


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    probe_len: int = 4
    jobs: int = 1
    normal_bound: int = 36


def _connected_corpus():
    """Connected groupoids small enough for exhaustive normal enumeration."""
    return [
        ("coarse2", coarse(2)),
        ("coarse3", coarse(3)),
        ("coarse4", coarse(4)),
        ("cyclic2", cyclic(2)),
        ("cyclic3", cyclic(3)),
        ("cyclic4", cyclic(4)),
        ("cyclic6", cyclic(6)),
        ("s3", from_group(symmetric_group(3), "pt")),
        ("z2x2", assemble_from_group_and_coarse(cyclic_group(2), ["a", "b"])),
        ("z3x2", assemble_from_group_and_coarse(cyclic_group(3), ["a", "b"])),
        ("z4x2", assemble_from_group_and_coarse(cyclic_group(4), ["a", "b"])),
        ("z2x3", assemble_from_group_and_coarse(cyclic_group(2), ["a", "b", "c"])),
    ]


def _full_corpus():
    return _connected_corpus() + [
        ("z2bundle", group_bundle(cyclic_group(2), ["a", "b"])),
        ("mixed", disjoint_union([coarse(2), cyclic(3)])),
    ]


def _split_fit_corpus():
    seqs = [
        ("s3", fixtures.s3_split_sequence()),
        ("nine", fixtures.nine_grid_sequence()),
        ("blocks22", fixtures.coarse_block_split_sequence([["1", "2"], ["3", "4"]])),
        ("blocks31", fixtures.coarse_block_split_sequence([["1", "2", "3"], ["4"]])),
        ("blocks222", fixtures.coarse_block_split_sequence([["1", "2"], ["3", "4"], ["5", "6"]])),
        ("blocks33", fixtures.coarse_block_split_sequence([["1", "2", "3"], ["4", "5", "6"]])),
        ("trivial_coarse2", fixtures.trivial_over(coarse(2))),
        ("trivial_coarse3", fixtures.trivial_over(coarse(3))),
        ("trivial_z4x2", fixtures.trivial_over(assemble_from_group_and_coarse(cyclic_group(4), ["a", "b"]))),
    ]
    # cyclic group splittings Z/6 -> Z/2 and Z/6 -> Z/3
    z6 = cyclic(6)
    for m, comp in ((2, 3), (3, 2)):
        zm = cyclic(m)
        pi = GroupoidMorphism(z6, zm, {a: str(int(a) % m) for a in z6.arrows}, {"pt": "pt"})
        section = GroupoidMorphism(zm, z6, {a: str(int(a) * comp % 6) for a in zm.arrows}, {"pt": "pt"})
        ker = kernel(pi)
        n = ker.as_groupoid()
        iota = GroupoidMorphism(n, z6, {a: a for a in n.arrows}, {"pt": "pt"})
        from .normal import ShortExactSequence

        seqs.append((f"z6_to_z{m}", ShortExactSequence(n, z6, zm, iota, pi, section)))
    return seqs


# ---------------------------------------------------------------------------
# Acceptance criteria
# ---------------------------------------------------------------------------

def criterion_1_counterexamples(cfg: SuiteConfig):
    """FIT failure in Gpd: the two counterexample fixtures."""
    seq3 = fixtures.fig_case_study_sequence()
    ker3 = kernel(seq3.pi)
    if ker3.arrows != frozenset(seq3.g.unit.values()):
        return False, "fig-3 kernel is not the unit bundle"
    quot3 = two_sided_quotient(seq3.g, ker3)
    if not are_isomorphic(quot3.groupoid, seq3.g):
        return False, "fig-3 quotient by the kernel is not G"
    if are_isomorphic(quot3.groupoid, seq3.h):
        return False, "fig-3 quotient unexpectedly isomorphic to H"
    if is_fit_sequence(seq3).holds:
        return False, "fig-3 sequence is unexpectedly FIT"

    seq2 = fixtures.fig_two_to_z4_sequence()
    ker2 = kernel(seq2.pi)
    loops = frozenset(a for a in seq2.g.arrows if seq2.g.source(a) == seq2.g.target(a))
    if ker2.arrows != loops:
        return False, "fig-2 kernel is not the loop bundle"
    quot2 = two_sided_quotient(seq2.g, ker2)
    if are_isomorphic(quot2.groupoid, seq2.h):
        return False, "fig-2 quotient unexpectedly isomorphic to Z/4"
    if not are_isomorphic(quot2.groupoid, seq2.g):
        return False, "fig-2 quotient is not G (the loop bundle is the unit bundle here)"
    if is_fit_sequence(seq2).holds:
        return False, "fig-2 sequence is unexpectedly FIT"
    return True, "both counterexamples behave as required"


def criterion_2_fit_in_gpd_lambda(cfg: SuiteConfig):
    """Vertex-bijective projections are always FIT."""
    checked = 0
    for name, g in _full_corpus():
        for n in enumerate_normal_subgroupoids(g, cfg.normal_bound):
            if any(g.source(a) != g.target(a) for a in n.arrows):
                continue  # not a loop bundle: projection not vertex-bijective
            seq = sequence_from_normal(g, n)
            res = is_fit_sequence(seq)
            if not res.holds:
                return False, f"vertex-bijective sequence over {name} is not FIT"
            checked += 1
    return checked > 0, f"{checked} vertex-bijective sequences, all FIT"


def criterion_3_universal_lift(cfg: SuiteConfig):
    """build_lift's invariants over all generated epis plus the two fixtures."""
    count = 0
    for name, g in _connected_corpus():
        if len(g.arrows) > 20:
            continue
        for n in enumerate_normal_subgroupoids(g, cfg.normal_bound):
            seq = sequence_from_normal(g, n)
            build_lift(seq)  # internal assertions: f̃∘s̃ = id, f̃∘ι = f, φ_0 = id
            count += 1
    for seq in (
        fixtures.fig_case_study_sequence(),
        fixtures.fig_two_to_z4_sequence(),
        fixtures.sequence_from_epi(fixtures.fig_no_coherent_family()),
        fixtures.sequence_from_epi(fixtures.fig_disagreeing_schurian()),
    ):
        build_lift(seq)
        count += 1

    lift3 = build_lift(fixtures.fig_case_study_sequence())
    mat3 = lift3.materialize()
    if mat3 is None or not are_isomorphic(mat3.model, coarse(4)):
        return False, "fig-3 lift is not coarse(4)"
    sizes = sorted(len(b) for b in lift3.virtual_kernel_vertex_partition().blocks())
    if sizes != [1, 1, 2]:
        return False, f"fig-3 virtual kernel partition is {sizes}"
    lift2 = build_lift(fixtures.fig_two_to_z4_sequence())
    mat2 = lift2.materialize()
    model = assemble_from_group_and_coarse(cyclic_group(4), ["x", "y"])
    if mat2 is None or not are_isomorphic(mat2.model, model):
        return False, "fig-2 lift is not Z/4 x 2̂"
    return True, f"{count} lifts built with exhaustive section/inclusion checks"


def criterion_4_universal_property(cfg: SuiteConfig):
    """≥25 factorization triples, each with commuting equations + uniqueness probe."""
    triples = 0
    for name, seq in _split_fit_corpus():
        lift = build_lift(seq)
        universal_factorization(lift, seq, canonical_self_morphism(seq))
        triples += 1
    for seq in (
        fixtures.fig_case_study_sequence(),
        fixtures.fig_two_to_z4_sequence(),
        fixtures.sequence_from_epi(fixtures.fig_no_coherent_family()),
        fixtures.sequence_from_epi(fixtures.fig_disagreeing_schurian()),
    ):
        lift = build_lift(seq)
        target, m = materialized_sequence(lift)
        universal_factorization(lift, target, m)
        triples += 1
    for name, g in _connected_corpus():
        if len(g.arrows) > 16 or triples >= 40:
            continue
        for n in enumerate_normal_subgroupoids(g, cfg.normal_bound):
            seq = sequence_from_normal(g, n)
            lift = build_lift(seq)
            if not lift.group_is_finite():
                continue
            target, m = materialized_sequence(lift)
            universal_factorization(lift, target, m)
            triples += 1
    return triples >= 25, f"{triples} factorization triples verified (uniqueness probed)"


def criterion_5_schurian_adjunction(cfg: SuiteConfig):
    """Exhaustive equivalence-relation instances on |Λ| ≤ 6."""
    checked = 0
    for n in range(1, 7):
        items = [str(i) for i in range(1, n + 1)]
        parts = list(set_partitions(items))
        for gp in parts:
            rel_g = rel_from_blocks(gp)
            for fp in parts:
                f0 = {}
                mu = set()
                for i, block in enumerate(fp):
                    tag = f"c{i}"
                    mu.add(tag)
                    for x in block:
                        f0[x] = tag
                if not push_forward(f0, rel_g, mu).is_coarse():
                    continue
                lift = schurian_lift(f0, rel_g, mu)
                if not forced_coarse_closure(lift):
                    return False, f"forced-coarse corollary fails on {gp} / {fp}"
                schurian_universal_factorization(
                    lift, coarse_rel(rel_g.carrier), f0, {x: x for x in rel_g.carrier}
                )
                checked += 1
    return checked > 0, f"{checked} coarse-push-forward instances, zig-zag always found"


def criterion_6_semidirect_laws(cfg: SuiteConfig):
    """Semidirect/(▷,◁) laws; the two action fixtures."""
    from .actions import (
        is_tensor_fibre,
        rotated_triangle,
        semidirect_product,
        trivial_weak_action,
        validate_tg_groupoid,
    )

    count = 0
    small = [g for _, g in _full_corpus() if len(g.arrows) <= 12]
    for a in small[:6]:
        for b in small[:6]:
            act = trivial_weak_action(b, a.quiver)
            sd = semidirect_product(a, b, act)  # laws asserted exhaustively inside
            if sd.is_tensor_fibre != all(
                act.vertex_act[x][v] == v for x in b.arrows for v in a.vertices
            ):
                return False, "tensor-fibre flag disagrees with strongness"
            count += 1
    k, h3, act9 = fixtures.nine_semidirect_action()
    sd9 = semidirect_product(k, h3, act9)
    if sd9.is_tensor_fibre or sd9.groupoid is not None:
        return False, "the 9̂ action is unexpectedly strong"
    rep9 = validate_tg_groupoid(sd9.tg)
    if not (rep9.valid and rep9.action_rules and rep9.module_morphism_rules):
        return False, f"9̂ product fails validation: {rep9.problems}"
    if not _nine_transport_ok(sd9.tg):
        return False, "9̂ product does not reproduce the composition table"
    tri = rotated_triangle()
    rep = validate_tg_groupoid(tri)
    units = set(tri.units.values())
    if not rep.valid:
        return False, f"rotated triangle fails validation: {rep.problems}"
    if units != set(tri.quiver.arrows) or any(
        tri.quiver.source[u] == tri.quiver.target[u] for u in units
    ):
        return False, "rotated triangle does not consist of non-loop units"
    return True, f"{count} semidirect products verified; both fixtures pass"


def _nine_transport_ok(tg) -> bool:
    nine = coarse_on([str(i) for i in range(1, 10)])
    rho = {"1": "4", "4": "7", "7": "1"}

    def rot(v, steps):
        for _ in range(steps % 3):
            v = rho[v]
        return v

    def transport(arrow):
        ka, ha = arrow[1:-1].split(",[")
        k1, k2 = ka.strip("[]").split(",")
        h1, h2 = ha.strip("[]").split(",")
        src = str(int(k1) + int(h1) - 1)
        tgt = str(int(rot(k2, int(h1) - int(h2))) + int(h2) - 1)
        return f"[{src},{tgt}]"

    psi = {a: transport(a) for a in tg.quiver.arrows}
    if set(psi.values()) != set(nine.arrows):
        return False
    for p1, p2 in itertools.product(sorted(tg.quiver.arrows), repeat=2):
        composable = (p1, p2) in tg.mult
        if composable != (nine.target(psi[p1]) == nine.source(psi[p2])):
            return False
        if composable and psi[tg.mult[(p1, p2)]] != nine.mult[(psi[p1], psi[p2])]:
            return False
    return True


def criterion_7_crossed_split_lemma(cfg: SuiteConfig):
    """Reconstruction through the two-sided crossed product."""
    from .crossed import reconstruct_from_split

    count = 0
    for name, seq in _split_fit_corpus():
        reconstruct_from_split(seq)  # mutual inverses asserted inside
        count += 1
    rec = reconstruct_from_split(fixtures.nine_grid_sequence())
    bt = rec.crossed.tensor
    if len(bt.classes) != 81 or any(len(bt.members[c]) != 1 for c in bt.classes):
        return False, "9̂ balanced tensor is not 81 singletons"
    cls = rec.forward.arrow_map["[7,5]"]
    if bt.rep(cls) != ("[7,1]", "[1,2]", "[2,5]"):
        return False, f"[7,5] canonicalizes to {bt.rep(cls)}"
    return True, f"{count} split FIT sequences reconstructed"


def criterion_8_unilateral_collapse(cfg: SuiteConfig):
    """φ and the bundle-to-semidirect witness on the group-bundle corpus."""
    from .crossed import gpd_lambda_split_lemma

    count = 0
    for name, seq in _split_fit_corpus():
        if any(seq.pi.vertex_map[v] != v for v in seq.g.vertices):
            continue
        if seq.section is None or any(
            seq.section.vertex_map[v] != v for v in seq.h.vertices
        ):
            continue
        res = gpd_lambda_split_lemma(seq)
        if not are_isomorphic(res.collapse.unilateral.groupoid, seq.g):
            return False, f"unilateral collapse of {name} is not G"
        if is_connected(seq.h):
            if res.bundle_form is None:
                return False, f"missing bundle form for {name}"
            if res.bundle_form.canonical != is_schurian(seq.h):
                return False, f"canonicity flag wrong for {name}"
            if not are_isomorphic(res.bundle_form.semidirect, seq.g):
                return False, f"semidirect form of {name} is not G"
        count += 1
    return count > 0, f"{count} fixed-vertex split sequences collapsed"


def criterion_9_quotient_geometry(cfg: SuiteConfig):
    """All four geometry items for every connected parent and normal."""
    count = 0
    for name, g in _connected_corpus():
        if len(g.arrows) > 24 and name != "coarse4":
            continue
        for n in enumerate_normal_subgroupoids(g, cfg.normal_bound):
            geo = quotient_geometry(g, n)
            if not geo.all_verified:
                return False, f"geometry fails for {name}"
            count += 1
    # the unequal-vertex-count witness: 4̂ ⊇ 1̂⊔1̂⊔2̂
    g = coarse_on(["1", "2", "3", "4"])
    arrows = set(g.unit.values()) | {"[3,4]", "[4,3]"}
    n = Subgroupoid(g, frozenset(arrows), g.vertices)
    geo = quotient_geometry(g, n)
    if geo.component_count != 3 or not geo.all_verified:
        return False, "the 1̂⊔1̂⊔2̂ witness fails"
    if not are_isomorphic(geo.model, coarse(3)):
        return False, "quotient of the witness is not coarse(3)"
    sizes = sorted(len(b) for b in _component_sizes(n))
    if sizes != [1, 1, 2]:
        return False, "witness components do not have vertex counts 1,1,2"
    return True, f"{count} (parent, normal) pairs verified plus the witness"


def _component_sizes(n: Subgroupoid):
    from .groupoid import connected_components

    part, _ = connected_components(n.as_groupoid())
    return [b for b in part.blocks()]


def criterion_10_free_product_engine(cfg: SuiteConfig):
    fam = GroupFamily({1: cyclic_group(2), 2: cyclic_group(2)})
    rng = random.Random(cfg.seed)
    pool = [(1, "0"), (1, "1"), (2, "0"), (2, "1")]
    for _ in range(1000):
        letters = [pool[rng.randrange(4)] for _ in range(rng.randrange(8))]
        if reduce_in_random_order(fam, letters, rng) != fam.reduce(letters):
            return False, "confluence violated"
    words = [EMPTY_WORD]
    gens = [(1, "1"), (2, "1")]
    for length in range(1, 5):
        for combo in itertools.product(gens, repeat=length):
            if fam.is_reduced(combo):
                words.append(Word(tuple(combo)))
    for w in words:
        if fam.multiply(w, fam.invert(w)) != EMPTY_WORD:
            return False, f"inverse law fails on {w}"
        if fam.multiply(w, EMPTY_WORD) != w or fam.multiply(EMPTY_WORD, w) != w:
            return False, f"unit law fails on {w}"
    for w1 in words:
        for w2 in words:
            for w3 in words[:8]:
                if fam.multiply(fam.multiply(w1, w2), w3) != fam.multiply(w1, fam.multiply(w2, w3)):
                    return False, "associativity fails"
    target = cyclic_group(2)
    hom = fam.induced_hom(target, {1: {"0": "0", "1": "1"}, 2: {"0": "0", "1": "1"}})
    for _ in range(500):
        w1, w2 = rng.choice(words), rng.choice(words)
        if hom(fam.multiply(w1, w2)) != target.op(hom(w1), hom(w2)):
            return False, "induced hom is not multiplicative"
    return True, f"confluence x1000, laws on {len(words)} words, hom x500"


CRITERIA = [
    ("1 counterexample regression", criterion_1_counterexamples),
    ("2 FIT in Gpd_Λ", criterion_2_fit_in_gpd_lambda),
    ("3 universal lift", criterion_3_universal_lift),
    ("4 universal property", criterion_4_universal_property),
    ("5 Schurian adjunction", criterion_5_schurian_adjunction),
    ("6 semidirect laws", criterion_6_semidirect_laws),
    ("7 crossed split lemma", criterion_7_crossed_split_lemma),
    ("8 unilateral collapse", criterion_8_unilateral_collapse),
    ("9 quotient geometry", criterion_9_quotient_geometry),
    ("10 free product engine", criterion_10_free_product_engine),
]


# ---------------------------------------------------------------------------
# Extra invariant checks (beyond the acceptance criteria)
# ---------------------------------------------------------------------------

def invariant_mono_oracle(cfg: SuiteConfig):
    from .quiver import classify_morphism, identity_morphism, is_left_cancellable

    g = fixtures.fig_image_not_subgroupoid()
    qm = g.as_quiver_morphism()
    ok = classify_morphism(qm).mono == is_left_cancellable(qm)
    ident = identity_morphism(qm.domain)
    ok &= classify_morphism(ident).mono == is_left_cancellable(ident)
    return ok, "left-cancellability oracle agrees with the mono flag"


def invariant_decompose_roundtrip(cfg: SuiteConfig):
    from .groupoid import decompose_connected

    for name, g in _connected_corpus():
        for base in sorted(g.vertices):
            dec = decompose_connected(g, base)
            for a in g.arrows:
                loop, ends = dec.to_pair(a)
                if dec.from_pair(loop, ends) != a:
                    return False, f"round trip fails on {name}"
    return True, "decomposition round-trips on the whole corpus"


def invariant_generated_image_least(cfg: SuiteConfig):
    from .groupoid import generated_image, restrict, validate_groupoid

    f = fixtures.fig_two_to_z4()
    img = generated_image(f)
    for a in sorted(img.arrows):
        if a in set(f.arrow_map.values()):
            continue
        smaller = restrict(img, img.arrows - {a}, img.vertices)
        if validate_groupoid(smaller) == []:
            return False, f"removing {a} keeps a groupoid: not a least fixed point"
    return True, "generated image is a least fixed point"


def invariant_quotient_kernel(cfg: SuiteConfig):
    for name, g in _full_corpus():
        for n in enumerate_normal_subgroupoids(g, cfg.normal_bound):
            quot = two_sided_quotient(g, n)
            if kernel(quot.groupoid_projection).arrows != n.arrows:
                return False, f"projection kernel differs from N over {name}"
    return True, "projection kernels equal the normal subgroupoid everywhere"


def invariant_loop_quotients_schurian(cfg: SuiteConfig):
    from .normal import left_quotient

    for name, g in _full_corpus():
        loops = frozenset(a for a in g.arrows if g.source(a) == g.target(a))
        lb = Subgroupoid(g, loops, g.vertices)
        lq = left_quotient(g, lb)
        tq = two_sided_quotient(g, lb)
        if not tq.groupoid.quiver.is_schurian() or not lq.quiver.is_schurian():
            return False, f"quotient by the loop bundle is not Schurian over {name}"
    return True, "G/G^↻ is Schurian across the corpus"


INVARIANTS = [
    ("mono oracle", invariant_mono_oracle),
    ("decompose round trip", invariant_decompose_roundtrip),
    ("generated image least fixed point", invariant_generated_image_least),
    ("two-sided projection kernel", invariant_quotient_kernel),
    ("loop-bundle quotients Schurian", invariant_loop_quotients_schurian),
]


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    results: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.results)

    def render(self) -> str:
        lines = []
        for name, passed, detail in self.results:
            lines.append(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
        lines.append(f"{'OK' if self.ok else 'FALSIFIED'} ({len(self.results)} checks)")
        return "\n".join(lines)


_ALL_CHECKS = {name: fn for name, fn in CRITERIA + INVARIANTS}


def _run_one(args):
    name, cfg = args
    fn = _ALL_CHECKS[name]
    try:
        passed, detail = fn(cfg)
    except AssertionError as exc:
        passed, detail = False, f"assertion: {exc}"
    return name, passed, detail


def run_suite(cfg: SuiteConfig | None = None) -> SuiteReport:
    cfg = cfg or SuiteConfig()
    names = [name for name, _ in CRITERIA + INVARIANTS]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_one, [(n, cfg) for n in names]))
    else:
        results = [_run_one((n, cfg)) for n in names]
    order = {n: i for i, n in enumerate(names)}
    results.sort(key=lambda r: order[r[0]])
    return SuiteReport(results)
