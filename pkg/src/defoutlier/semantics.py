"""Extensions, entailment, and proofs for disjunction-free default theories.

Two entailment backends are provided.  The exhaustive backend enumerates
every signature set by depth-first search over rule application sequences,
branching on applying versus permanently blocking each applicable rule and
validating candidates against the closure and justification-coherence
conditions; it is total (up to a configurable node budget) on all DF
theories.  The fast backend answers skeptical literal queries on normal
unary (NU) and dual normal unary (DNU) theories in polynomial time by
searching for a countermodel extension: it grows the set of letters that
must be kept non-positive, re-checking blockability against a positive
reachability fixpoint until the requirement set stabilizes or becomes
unsatisfiable.  Both backends agree wherever the fast one is applicable;
the test suite enforces this on large seeded random families.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import DefaultTheory, Literal, classify, dualize, is_inconsistent
from .errors import BudgetExceededError, ScopeError

EXHAUSTIVE = "exhaustive"
FAST = "fast"
AUTO = "auto"
DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class SignatureSet:
    """The finite literal set characterizing one extension.

    ``generating`` lists the indices (into the theory's rule list) of the
    generating defaults in application order.  An inconsistent signature set
    stands for the single extension of a theory with inconsistent facts and
    contains every literal.
    """

    literals: frozenset[Literal]
    generating: tuple[int, ...]

    @property
    def inconsistent(self) -> bool:
        return is_inconsistent(self.literals)

    def contains(self, literal: Literal) -> bool:
        return self.inconsistent or literal in self.literals


@dataclass(frozen=True)
class Proof:
    """A grounded derivation of a literal: either a fact or a rule chain."""

    target: Literal
    steps: tuple
    in_w: bool

    def __len__(self) -> int:
        return 0 if self.in_w else len(self.steps)


# ---------------------------------------------------------------------------
# Exhaustive backend: signature-set enumeration
# ---------------------------------------------------------------------------


class _MaskIndex:
    """Bitmask encoding of a theory: literal i*2 is letter i, i*2+1 its negation."""

    def __init__(self, theory: DefaultTheory):
        self.letters = sorted(theory.letters())
        self.lit_id: dict[Literal, int] = {}
        for i, x in enumerate(self.letters):
            self.lit_id[Literal(x, True)] = 2 * i
            self.lit_id[Literal(x, False)] = 2 * i + 1

        def mask(literals: Iterable[Literal]) -> int:
            m = 0
            for l in literals:
                m |= 1 << self.lit_id[l]
            return m

        self.w_mask = mask(theory.facts)
        self.pre = [mask(d.prerequisite) for d in theory.defaults]
        self.concl = [mask(d.consequent) for d in theory.defaults]
        # Mask of the negations of the justification literals: a rule is
        # refuted by E exactly when this intersects E.
        self.neg_just = [mask(l.negate() for l in d.justification) for d in theory.defaults]
        self.n_rules = len(theory.defaults)

    def to_literals(self, m: int) -> frozenset[Literal]:
        out = []
        i = 0
        while m:
            if m & 1:
                out.append(Literal(self.letters[i // 2], i % 2 == 0))
            m >>= 1
            i += 1
        return frozenset(out)


def _iter_masks(idx: _MaskIndex, budget: int):
    """Yield each distinct signature set (as a bitmask) with one generating
    sequence, in depth-first apply-before-block order."""
    pre, concl, neg_just = idx.pre, idx.concl, idx.neg_just
    n = idx.n_rules
    seen: set[int] = set()
    nodes = 0
    # Stack entries: (literal mask, blocked-rules mask, applied indices).
    stack: list[tuple[int, int, tuple[int, ...]]] = [(idx.w_mask, 0, ())]
    while stack:
        e, blocked, applied = stack.pop()
        nodes += 1
        if nodes > budget:
            raise BudgetExceededError(budget)
        act = None
        for i in range(n):
            if blocked >> i & 1:
                continue
            if concl[i] & ~e == 0 or pre[i] & ~e or neg_just[i] & e:
                continue
            act = i
            break
        if act is None:
            if e in seen:
                continue
            if any(neg_just[i] & e for i in applied):
                continue
            if any(
                pre[i] & ~e == 0 and concl[i] & ~e and not (neg_just[i] & e)
                for i in range(n)
            ):
                continue
            seen.add(e)
            yield e, applied
        else:
            stack.append((e, blocked | (1 << act), applied))
            stack.append((e | concl[act], blocked, applied + (act,)))


def extensions(theory: DefaultTheory, budget: int = DEFAULT_BUDGET) -> tuple[SignatureSet, ...]:
    """All distinct signature sets of a DF theory, deterministically ordered.

    Returns an empty tuple iff the theory is incoherent.  A theory with
    inconsistent facts has exactly one (inconsistent) extension.
    """
    if is_inconsistent(theory.facts):
        return (SignatureSet(theory.facts, ()),)
    idx = _MaskIndex(theory)
    sigs = [SignatureSet(idx.to_literals(m), gen) for m, gen in _iter_masks(idx, budget)]
    sigs.sort(key=lambda s: sorted((l.letter, not l.positive) for l in s.literals))
    return tuple(sigs)


def brave_member(theory: DefaultTheory, literal: Literal, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff some extension contains the literal (false when incoherent)."""
    if is_inconsistent(theory.facts):
        return True
    idx = _MaskIndex(theory)
    bit = idx.lit_id.get(literal)
    if bit is None:
        return False
    return any(e >> bit & 1 for e, _ in _iter_masks(idx, budget))


# ---------------------------------------------------------------------------
# Theorem-style extension check and proofs (NMU scope)
# ---------------------------------------------------------------------------


def _require_nmu(theory: DefaultTheory, op: str) -> None:
    if not classify(theory).is_nmu:
        raise ScopeError(f"{op} requires a normal mixed unary theory")


def _rule_provable(theory: DefaultTheory, context: frozenset[Literal]) -> set[Literal]:
    """Literals provable via rule chains w.r.t. (D, W) and the context set."""
    proved: set[Literal] = set()
    changed = True
    while changed:
        changed = False
        for d in theory.defaults:
            (c,) = d.consequent
            if c in proved or c.negate() in context:
                continue
            if d.prerequisite:
                (p,) = d.prerequisite
                if p not in theory.facts and p not in proved:
                    continue
            proved.add(c)
            changed = True
    return proved


def is_extension(theory: DefaultTheory, candidate: frozenset[Literal]) -> bool:
    """Decide whether a literal set is an extension of a consistent NMU theory.

    Holds iff the facts are contained, every default is satisfied (its
    prerequisite is absent, or its consequent is present or contradicted),
    and every member literal has a grounded proof.
    """
    _require_nmu(theory, "is_extension")
    if is_inconsistent(theory.facts):
        raise ScopeError("is_extension requires consistent facts")
    candidate = frozenset(candidate)
    if not theory.facts <= candidate:
        return False
    for d in theory.defaults:
        if d.prerequisite:
            (p,) = d.prerequisite
            if p not in candidate:
                continue
        (c,) = d.consequent
        if c not in candidate and c.negate() not in candidate:
            return False
    provable = set(theory.facts) | _rule_provable(theory, candidate)
    return candidate <= provable


def find_proof(
    theory: DefaultTheory, literal: Literal, context: Iterable[Literal]
) -> Proof | None:
    """Shortest grounded rule chain deriving the literal, or a fact marker.

    A chain is valid when each rule is prerequisite-free, grounded in a fact,
    or chained to the previous conclusion, and no conclusion along it is
    contradicted by the context.  Shortest chains are minimal: removing any
    rule breaks them.
    """
    _require_nmu(theory, "find_proof")
    context = frozenset(context)
    if literal in theory.facts:
        return Proof(literal, (), True)

    # BFS over derived literals; parent links reconstruct the chain.
    parent: dict[Literal, tuple[Literal | None, int]] = {}
    queue: list[Literal] = []
    for i, d in enumerate(theory.defaults):
        (c,) = d.consequent
        if c in parent or c.negate() in context:
            continue
        if not d.prerequisite:
            parent[c] = (None, i)
            queue.append(c)
        else:
            (p,) = d.prerequisite
            if p in theory.facts:
                parent[c] = (None, i)
                queue.append(c)
    pos = 0
    while pos < len(queue):
        cur = queue[pos]
        pos += 1
        if cur == literal:
            break
        for i, d in enumerate(theory.defaults):
            if not d.prerequisite:
                continue
            (p,) = d.prerequisite
            if p != cur:
                continue
            (c,) = d.consequent
            if c in parent or c.negate() in context:
                continue
            parent[c] = (cur, i)
            queue.append(c)
    if literal not in parent:
        return None
    chain: list[int] = []
    at: Literal | None = literal
    while at is not None:
        prev, ri = parent[at]
        chain.append(ri)
        at = prev
    chain.reverse()
    return Proof(literal, tuple(theory.defaults[i] for i in chain), False)


# ---------------------------------------------------------------------------
# Fast backend: polynomial skeptical entailment for NU / DNU theories
# ---------------------------------------------------------------------------


class _NuEntailer:
    """Skeptical literal queries on an NU theory via countermodel search.

    An extension omitting a goal corresponds to a set of letters kept
    non-positive.  Each such letter must either admit a firable attacking
    rule (one concluding its negation, with a live trigger) or have all of
    its positive supports starved in turn.  Keeping the requirement set
    closed under forced starvation while re-checking attacker liveness
    against the shrinking positive-reachability fixpoint decides
    feasibility exactly.
    """

    def __init__(self, defaults: Sequence):
        self.pos_triggers: dict[str, list[str | None]] = {}
        self.neg_triggers: dict[str, list[str | None]] = {}
        self.pos_children: dict[str, list[str]] = {}
        self.top_pos: list[str] = []
        for d in defaults:
            (c,) = d.consequent
            trig: str | None = None
            if d.prerequisite:
                (p,) = d.prerequisite
                trig = p.letter
            if c.positive:
                self.pos_triggers.setdefault(c.letter, []).append(trig)
                if trig is None:
                    self.top_pos.append(c.letter)
                else:
                    self.pos_children.setdefault(trig, []).append(c.letter)
            else:
                self.neg_triggers.setdefault(c.letter, []).append(trig)

    def _reach(self, wpos: frozenset[str], wneg: frozenset[str], avoid: set[str]) -> set[str]:
        """Letters that can be made positive while every letter in ``avoid``
        stays non-positive (facts are immovable; callers exclude them)."""
        seen = set(wpos)
        frontier = list(seen)
        for y in self.top_pos:
            if y not in seen and y not in wneg and y not in avoid:
                seen.add(y)
                frontier.append(y)
        while frontier:
            x = frontier.pop()
            for y in self.pos_children.get(x, ()):
                if y not in seen and y not in wneg and y not in avoid:
                    seen.add(y)
                    frontier.append(y)
        return seen

    def _can_all_be_nonpositive(
        self, wpos: frozenset[str], wneg: frozenset[str], targets: Iterable[str]
    ) -> bool:
        kept = set(targets)
        if kept & wpos:
            return False
        while True:
            reach = self._reach(wpos, wneg, kept)
            grew = False
            for x in sorted(kept):
                if x in wneg:
                    continue
                attackers = self.neg_triggers.get(x, ())
                if any(t is None or t in reach for t in attackers):
                    continue
                missing: set[str] = set()
                for t in self.pos_triggers.get(x, ()):
                    if t is None:
                        return False
                    if t not in kept:
                        missing.add(t)
                if missing & wpos:
                    return False
                if missing:
                    kept |= missing
                    grew = True
            if not grew:
                return True

    def skeptical(self, wpos: frozenset[str], wneg: frozenset[str], q: Literal) -> bool:
        x = q.letter
        if q.positive:
            if x in wpos:
                return True
            if x in wneg:
                return False
            return not self._can_all_be_nonpositive(wpos, wneg, {x})
        if x in wneg:
            return True
        if x in wpos:
            return False
        if x not in self.neg_triggers:
            return False
        if x in self._reach(wpos, wneg, set()):
            return False
        # x can never be positive; its negation is everywhere unless every
        # rule mentioning x can be starved, leaving x wholly undecided.
        triggers: set[str] = set()
        for t in self.neg_triggers.get(x, ()):
            if t is None:
                return True
            triggers.add(t)
        for t in self.pos_triggers.get(x, ()):
            if t is not None:
                triggers.add(t)
        return not self._can_all_be_nonpositive(wpos, wneg, triggers)


# Entailers keyed by rule-tuple identity: fact-set variants of one theory
# share their defaults object, so repeated queries reuse the index.
_entailer_cache: dict[int, tuple[object, "_NuEntailer"]] = {}


def _get_entailer(defaults: tuple) -> "_NuEntailer":
    hit = _entailer_cache.get(id(defaults))
    if hit is not None and hit[0] is defaults:
        return hit[1]
    ent = _NuEntailer(defaults)
    if len(_entailer_cache) > 64:
        _entailer_cache.clear()
    _entailer_cache[id(defaults)] = (defaults, ent)
    return ent


def _fast_entails(theory: DefaultTheory, goal: Iterable[Literal]) -> bool:
    frag = classify(theory)
    if frag.is_nu:
        work, goal_lits = theory, list(goal)
    elif frag.is_dnu:
        work = dualize(theory)
        goal_lits = [l.negate() for l in goal]
    else:
        raise ScopeError("fast backend requires an NU or DNU theory")
    if is_inconsistent(work.facts):
        return True
    wpos = frozenset(l.letter for l in work.facts if l.positive)
    wneg = frozenset(l.letter for l in work.facts if not l.positive)
    ent = _get_entailer(work.defaults)
    return all(ent.skeptical(wpos, wneg, q) for q in goal_lits)


def entails(
    theory: DefaultTheory,
    goal: Iterable[Literal],
    backend: str = AUTO,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Skeptical entailment: every extension contains every goal literal.

    Incoherent theories entail everything vacuously; theories with
    inconsistent facts entail everything.  ``backend`` is one of
    ``"exhaustive"``, ``"fast"`` (NU/DNU only) or ``"auto"``.
    """
    goal = list(goal)
    if backend == AUTO:
        frag = classify(theory)
        backend = FAST if (frag.is_nu or frag.is_dnu) else EXHAUSTIVE
    if backend == FAST:
        return _fast_entails(theory, goal)
    if backend == EXHAUSTIVE:
        if is_inconsistent(theory.facts):
            return True
        idx = _MaskIndex(theory)
        bits = [idx.lit_id.get(l) for l in goal]
        # Letters absent from the theory cannot appear in any extension.
        if any(b is None for b in bits):
            return not any(True for _ in _iter_masks(idx, budget))
        return all(
            all(e >> b & 1 for b in bits) for e, _ in _iter_masks(idx, budget)
        )
    raise ValueError(f"unknown backend {backend!r}")
