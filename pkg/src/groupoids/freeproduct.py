"""Free products of indexed families of finite groups, as reduced words.

A word is a tuple of (factor index, element) letters; it is reduced iff no
letter is a factor identity and adjacent letters have distinct indices. All
constructors reduce eagerly, so word equality is plain tuple equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import CommutationFailure
from .group import FiniteGroup, is_group_hom


Letter = tuple[int, str]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...]

    def __len__(self) -> int:
        return len(self.letters)

    def is_empty(self) -> bool:
        return not self.letters

    def __repr__(self) -> str:
        if not self.letters:
            return "e"
        return "".join(f"({i}:{g})" for i, g in self.letters)


EMPTY_WORD = Word(())


@dataclass(frozen=True)
class GroupFamily:
    factors: dict[int, FiniteGroup]

    def factor(self, i: int) -> FiniteGroup:
        return self.factors[i]

    def reduce(self, letters) -> Word:
        """Stack reduction: merge adjacent same-index letters, drop identities."""
        stack: list[Letter] = []
        for i, g in letters:
            grp = self.factors[i]
            if g not in grp.elements:
                raise KeyError(f"{g} is not an element of factor {i}")
            if g == grp.identity:
                continue
            if stack and stack[-1][0] == i:
                merged = grp.op(stack[-1][1], g)
                stack.pop()
                if merged != grp.identity:
                    stack.append((i, merged))
            else:
                stack.append((i, g))
        return Word(tuple(stack))

    def word(self, *letters: Letter) -> Word:
        return self.reduce(letters)

    def injection(self, i: int, g: str) -> Word:
        return self.reduce([(i, g)])

    def multiply(self, w1: Word, w2: Word) -> Word:
        return self.reduce(w1.letters + w2.letters)

    def invert(self, w: Word) -> Word:
        return self.reduce([(i, self.factors[i].inv(g)) for i, g in reversed(w.letters)])

    def is_reduced(self, letters) -> bool:
        letters = list(letters)
        for k, (i, g) in enumerate(letters):
            if g == self.factors[i].identity:
                return False
            if k > 0 and letters[k - 1][0] == i:
                return False
        return True

    def conjugate(self, w: Word, by: Word) -> Word:
        """by⁻¹ · w · by (diagrammatic conjugation used by the lift)."""
        return self.multiply(self.multiply(self.invert(by), w), by)

    def induced_hom(self, target: FiniteGroup, phi: dict[int, dict[str, str]]):
        """The unique homomorphism to target extending the family phi.

        Each phi[i] must be a verified group homomorphism factor_i -> target.
        """
        for i, grp in self.factors.items():
            if i not in phi or not is_group_hom(grp, target, phi[i]):
                raise CommutationFailure(f"phi[{i}] is not a group homomorphism")

        def evaluate(w: Word) -> str:
            out = target.identity
            for i, g in w.letters:
                out = target.op(out, phi[i][g])
            return out

        return evaluate


def reduce_in_random_order(family: GroupFamily, letters, rng: random.Random) -> Word:
    """Confluence oracle: apply one random applicable rewrite at a time."""
    work = [(i, g) for i, g in letters]
    while True:
        moves = []
        for k, (i, g) in enumerate(work):
            if g == family.factors[i].identity:
                moves.append(("drop", k))
        for k in range(len(work) - 1):
            if work[k][0] == work[k + 1][0]:
                moves.append(("merge", k))
        if not moves:
            return Word(tuple(work))
        kind, k = moves[rng.randrange(len(moves))]
        if kind == "drop":
            del work[k]
        else:
            i = work[k][0]
            merged = family.factors[i].op(work[k][1], work[k + 1][1])
            work[k : k + 2] = [(i, merged)]


def sliced_factorization(
    family: GroupFamily,
    h: FiniteGroup,
    phi: dict[int, dict[str, str]],
    r_group: FiniteGroup,
    xi: dict[int, dict[str, str]],
    r: dict[str, str],
    probe_words: list[Word] | None = None,
):
    """Unique hom ξ into r_group compatible with a retraction r: r_group -> h.

    Verifies r∘ξ_i = φ_i exhaustively, returns the induced ξ, and checks
    r∘ξ = φ-induced on the probe words.
    """
    if not is_group_hom(r_group, h, r):
        raise CommutationFailure("r is not a group homomorphism")
    for i, grp in family.factors.items():
        for g in grp.elements:
            if r[xi[i][g]] != phi[i][g]:
                raise CommutationFailure(f"r∘ξ_{i} ≠ φ_{i} at {g}")
    xi_hom = family.induced_hom(r_group, xi)
    phi_hom = family.induced_hom(h, phi)
    for w in probe_words or []:
        assert r[xi_hom(w)] == phi_hom(w)
    return xi_hom
