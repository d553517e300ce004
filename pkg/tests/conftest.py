"""Shared fixtures and definition-level oracles.

The oracles here deliberately avoid the code paths they are used to check:
outlier brute forcing iterates raw (L, S) candidate pairs against the
exhaustive extension enumerator, with extension sets memoized per fact
variant.
"""

from __future__ import annotations

import itertools

import pytest

from defoutlier import DefaultTheory, Literal, extensions, lits, negate_all, parse_theory

CREDIT_CARD = """
fact CreditNumber & MultipleIPs.
default CreditNumber : -MultipleIPs / -MultipleIPs.
"""

CELLPHONE = """
fact CreditNumber & CellUse & -MfC & QuietTime & NewLocation & MultipleIPs.
default CreditNumber : -MultipleIPs / -MultipleIPs.
default CellUse : MfC / MfC.
default CellUse : -QuietTime / -QuietTime.
default CellUse : -NewLocation / -NewLocation.
"""


@pytest.fixture
def credit_card() -> DefaultTheory:
    return parse_theory(CREDIT_CARD)


@pytest.fixture
def cellphone() -> DefaultTheory:
    return parse_theory(CELLPHONE)


@pytest.fixture
def schematic_pair() -> DefaultTheory:
    # Two unrelated defaults a_i : b_i / b_i with contradicting observations.
    return parse_theory(
        """
        fact a1 & a2 & -b1 & -b2.
        default a1 : b1 / b1.
        default a2 : b2 / b2.
        """
    )


class ExhaustiveOracle:
    """Memoized exhaustive skeptical queries over fact-set variants."""

    def __init__(self, theory: DefaultTheory):
        self.theory = theory
        self._cache: dict[frozenset[Literal], tuple] = {}

    def exts(self, facts: frozenset[Literal]):
        hit = self._cache.get(facts)
        if hit is None:
            hit = extensions(self.theory.with_facts(facts))
            self._cache[facts] = hit
        return hit

    def skeptical(self, facts: frozenset[Literal], goal: Literal) -> bool:
        return all(e.contains(goal) for e in self.exts(facts))

    def cond1(self, s: frozenset[Literal]) -> bool:
        reduced = self.theory.facts - s
        return all(self.skeptical(reduced, x.negate()) for x in s)

    def cond2_strong(self, l: frozenset[Literal], s: frozenset[Literal]) -> bool:
        reduced = self.theory.facts - s - l
        return all(not self.skeptical(reduced, x.negate()) for x in s)

    def cond2_general(self, l: frozenset[Literal], s: frozenset[Literal]) -> bool:
        reduced = self.theory.facts - s - l
        return any(not self.skeptical(reduced, x.negate()) for x in s)

    def is_witness(self, l, s, strong: bool) -> bool:
        cond2 = self.cond2_strong if strong else self.cond2_general
        return self.cond1(s) and cond2(l, s)


def nonempty_subsets(pool, max_size=None):
    top = len(pool) if max_size is None else min(max_size, len(pool))
    for size in range(1, top + 1):
        yield from itertools.combinations(pool, size)


def brute_force_outliers(theory: DefaultTheory, k: int, strong: bool, h: int | None = None):
    """Definition-level outlier sets of size <= k (witness size <= h if set)."""
    oracle = ExhaustiveOracle(theory)
    facts = sorted(theory.facts, key=str)
    found: dict[frozenset[Literal], list[frozenset[Literal]]] = {}
    for l_tuple in nonempty_subsets(facts, k):
        l = frozenset(l_tuple)
        rest = [x for x in facts if x not in l]
        for s_tuple in nonempty_subsets(rest, h):
            s = frozenset(s_tuple)
            if oracle.is_witness(l, s, strong):
                found.setdefault(l, []).append(s)
    return found
