"""Iterated belief change over finite total preorders.

The package models belief states as total preorders over the valuations
of a small fixed atom set, implements the three classic iterated
revision operators together with TeamQueue-style contraction, iterable
expansion with an absurd state, and rational closure, and ships an
exhaustive checker that verifies or refutes the governing postulates,
and the equivalences relating them, on every instance the finite space
admits.
"""

from .conditionals import (
    ClosureResult,
    is_rational,
    rational_closure,
    rational_closure_fast,
    satisfies,
)
from .exceptions import (
    AbsurdStateError,
    BeliefChangeError,
    EmptyModelSetError,
    FormulaSyntaxError,
    InconsistentInputError,
    MalformedDiagramError,
    MissingContractionError,
    NoMaximumError,
    PartitionError,
    ScopeError,
    UnknownAtomError,
    UnsatisfiableError,
)
from .lang import (
    Conditional,
    Formula,
    MixedSet,
    cn_extended_member,
    dnf_of_worlds,
    entails,
    models,
    parse_formula,
    world_str,
)
from .operators import (
    Contraction,
    Revision,
    TabularRevision,
    contract,
    contract_by_negation,
    expand,
    make_random_dp_operator,
    nli_revise,
    revise,
    stq_merge,
)
from .postulates import (
    CheckReport,
    Witness,
    check_diagram,
    check_postulate,
    pair_profile,
    postulate_holds,
    render_machine,
    render_text,
    replay_witness,
    verify_claim,
)
from .tpo import (
    Absurd,
    State,
    Tpo,
    agrees_on,
    beliefs,
    conditional_holds,
    conditional_set,
    count_tpos,
    enumerate_a_preserving_isos,
    enumerate_tpos,
    flatter_eq,
    format_tpo,
    input_cmp,
    min_worlds,
    parse_tpo,
    tpo_at_index,
    tpo_from_partition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
