"""Belief change operators on total preorders.

Revision inputs are given by their model sets (sentences are
canonicalised before they reach this layer).  All three built-in
revisions promote exactly the minimal input-worlds to the bottom and
differ in how they rearrange everything else:

* natural: everything else keeps its prior order;
* restrained: prior strict order kept, prior ties broken in favour of
  worlds satisfying the input;
* lexicographic: every input-world moves below every countermodel, prior
  order kept within each side.

Contraction is defined from revision: merge the prior order with the
revision by the negated input using the synchronized-minima TeamQueue
recurrence (repeatedly pop the union of both orders' current minima).
The recurrence makes the contraction's first cell the union of the prior
beliefs with the revised beliefs, and preserves any strict preference on
which the two merged orders agree.

All functions are pure; every value is immutable.
"""

from __future__ import annotations

import enum
import random
from functools import lru_cache
from typing import Union

from .exceptions import AbsurdStateError, InconsistentInputError
from .tpo import Absurd, State, Tpo, enumerate_tpos, min_worlds, propositions


class Revision(enum.Enum):
    NATURAL = "natural"
    RESTRAINED = "restrained"
    LEXICOGRAPHIC = "lexicographic"


class Contraction(enum.Enum):
    NATURAL = "contract-natural"
    STQ_RESTRAINED = "contract-stq-restrained"
    STQ_LEX = "contract-stq-lex"

    @property
    def base(self) -> Revision:
        return _CONTRACTION_BASE[self]


_CONTRACTION_BASE = {
    Contraction.NATURAL: Revision.NATURAL,
    Contraction.STQ_RESTRAINED: Revision.RESTRAINED,
    Contraction.STQ_LEX: Revision.LEXICOGRAPHIC,
}


class TabularRevision:
    """Revision given by an explicit (prior, input) -> posterior table.

    Used as a fuzzing substrate: tables are keyed by the prior's cell
    list and the input's model set, so equal preorders always revise
    identically.  Tables built by ``make_random_dp_operator`` satisfy
    success and the four iterated-revision postulates by construction.
    """

    def __init__(self, n_atoms: int, table: dict, seed: int | None = None):
        self.n_atoms = n_atoms
        self.table = table
        self.seed = seed

    def posterior(self, t: Tpo, sentence_models: frozenset) -> Tpo:
        try:
            return self.table[(t.cells, sentence_models)]
        except KeyError:
            raise LookupError(
                f"tabular operator has no entry for this prior/input at n={self.n_atoms}"
            ) from None

    def __repr__(self) -> str:
        return f"TabularRevision(n_atoms={self.n_atoms}, seed={self.seed})"


RevisionMethod = Union[Revision, TabularRevision]


def method_name(method) -> str:
    """CLI string for a revision or contraction method."""
    if isinstance(method, TabularRevision):
        return f"tabular(seed={method.seed})"
    return method.value


def _require_consistent(sentence_models: frozenset) -> None:
    if not sentence_models:
        raise InconsistentInputError("input sentence has no models")


def revise(t: Tpo, sentence_models: frozenset, method: RevisionMethod) -> Tpo:
    """Revise a preorder by a consistent sentence (given as a model set).

    Besides the three built-in methods, any object with a
    ``posterior(tpo, models)`` method is accepted (tabular operators,
    composed operators used by the checker).
    """
    _require_consistent(sentence_models)
    if not sentence_models <= t.world_set:
        raise ValueError("input models outside this preorder's world set")
    if not isinstance(method, Revision):
        posterior = getattr(method, "posterior", None)
        if posterior is None:
            raise TypeError(f"not a revision method: {method!r}")
        return posterior(t, sentence_models)
    minimal = min_worlds(t, sentence_models)
    cells = [minimal]
    if method is Revision.NATURAL:
        for cell in t.cells:
            rest = cell - minimal
            if rest:
                cells.append(rest)
    elif method is Revision.RESTRAINED:
        for cell in t.cells:
            inside = (cell & sentence_models) - minimal
            outside = cell - sentence_models
            if inside:
                cells.append(inside)
            if outside:
                cells.append(outside)
    else:
        cells = []
        for cell in t.cells:
            inside = cell & sentence_models
            if inside:
                cells.append(inside)
        for cell in t.cells:
            outside = cell - sentence_models
            if outside:
                cells.append(outside)
    return Tpo(tuple(cells), t.n_atoms)


def stq_merge(t1: Tpo, t2: Tpo) -> Tpo:
    """Synchronized-minima merge of two preorders over the same worlds.

    Next cell = union of the two orders' minimal still-unassigned worlds,
    until the world set is exhausted.
    """
    if t1.n_atoms != t2.n_atoms:
        raise ValueError("cannot merge preorders over different atom counts")
    remaining = set(t1.world_set)
    cells = []
    while remaining:
        current: set = set()
        for t in (t1, t2):
            for cell in t.cells:
                alive = cell & remaining
                if alive:
                    current |= alive
                    break
        cells.append(frozenset(current))
        remaining -= current
    return Tpo(tuple(cells), t1.n_atoms)


def contract(state: State, sentence_models: frozenset, method: Contraction) -> Tpo:
    """Contract by a consistent sentence.

    Contracting the absurd state flattens it completely, whatever the
    input.  Contracting by a tautology returns the prior unchanged (its
    negation has no models to revise by); otherwise the result is the
    TeamQueue merge of the prior with the revision by the negated input.
    """
    _require_consistent(sentence_models)
    if isinstance(state, Absurd):
        return Tpo((frozenset(range(1 << state.n_atoms)),), state.n_atoms)
    if sentence_models == state.world_set:
        return state
    negated = state.world_set - sentence_models
    return stq_merge(state, revise(state, negated, method.base))


def expand(state: State, sentence_models: frozenset, base: RevisionMethod) -> State:
    """Iterable expansion: revision while consistent, absurd afterwards.

    Expansion of an already-absurd state is left undefined and rejected.
    """
    if isinstance(state, Absurd):
        raise AbsurdStateError("expansion of the absurd state is undefined")
    _require_consistent(sentence_models)
    if not state.cells[0] & sentence_models:
        return Absurd(state.n_atoms)
    return revise(state, sentence_models, base)


def nli_revise(
    t: Tpo,
    sentence_models: frozenset,
    contraction: Contraction,
    revision: RevisionMethod,
) -> Tpo:
    """Revision routed through contraction by the negated input.

    When the input is a tautology its negation cannot be contracted by;
    retracting an inconsistent sentence is vacuous, so the contraction
    step is skipped and only the final revision applies.
    """
    _require_consistent(sentence_models)
    contracted = contract_by_negation(t, sentence_models, contraction)
    return revise(contracted, sentence_models, revision)


def contract_by_negation(
    t: Tpo, sentence_models: frozenset, method: Contraction
) -> Tpo:
    """Contract by the input's negation, vacuously when that is inconsistent."""
    _require_consistent(sentence_models)
    negated = t.world_set - sentence_models
    if not negated:
        return t
    return contract(t, negated, method)


# ---------------------------------------------------------------------------
# Randomised operators satisfying the iterated-revision postulates

def _success_and_dp(prior: Tpo, sentence_models: frozenset, post: Tpo) -> bool:
    """Success plus the four iterated-revision postulates, one instance."""
    if not post.cells[0] <= sentence_models:
        return False
    rp, rq = prior.rank, post.rank
    worlds = sorted(prior.world_set)
    for x in worlds:
        xin = x in sentence_models
        for y in worlds:
            if y <= x:
                continue
            yin = y in sentence_models
            if xin == yin:
                if (rp[x] <= rp[y]) != (rq[x] <= rq[y]) or (rp[y] <= rp[x]) != (
                    rq[y] <= rq[x]
                ):
                    return False
            else:
                inside, outside = (x, y) if xin else (y, x)
                if rp[inside] < rp[outside] and not rq[inside] < rq[outside]:
                    return False
                if rp[inside] <= rp[outside] and not rq[inside] <= rq[outside]:
                    return False
    return True


@lru_cache(maxsize=4)
def _dp_posterior_candidates(n_atoms: int) -> dict:
    """For each (prior, input), every posterior passing ``_success_and_dp``."""
    all_tpos = list(enumerate_tpos(n_atoms))
    candidates: dict = {}
    for prior in all_tpos:
        for sentence_models in propositions(n_atoms):
            allowed = tuple(
                post
                for post in all_tpos
                if _success_and_dp(prior, sentence_models, post)
            )
            candidates[(prior.cells, sentence_models)] = allowed
    return candidates


def make_random_dp_operator(seed: int, n_atoms: int) -> TabularRevision:
    """Seeded uniform choice of a posterior per (prior, input).

    Every entry independently picks one of the posteriors satisfying
    success and the iterated-revision postulates relative to its prior,
    so the operator passes those checks by construction while being free
    to break any cross-prior or cross-input coherence.
    """
    if n_atoms > 2:
        raise ValueError("random tabular operators are supported for at most 2 atoms")
    rng = random.Random(seed)
    candidates = _dp_posterior_candidates(n_atoms)
    table = {}
    # Insertion order of the candidate map is the enumeration order of
    # (prior, input) pairs, so the draws line up identically per seed.
    for key, allowed in candidates.items():
        table[key] = allowed[rng.randrange(len(allowed))]
    return TabularRevision(n_atoms, table, seed=seed)
