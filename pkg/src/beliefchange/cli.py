"""Command-line surface: scenario runs, postulate checks, claim
verification, and rational-closure queries.

Commands::

    beliefchange [--format text|machine] run <file>
    beliefchange [--format text|machine] check <postulate> <revision> [<contraction>]
                 --n <k> --mode <exhaustive|sampled> [--seed S] [--sample N] [--workers W]
    beliefchange [--format text|machine] verify <claim> --n <k>
    beliefchange [--format text|machine] closure <file> --n <k> [--atoms ...]

Exit codes: ``run`` 0/2 (parse)/3 (semantic); ``check`` 0 pass, 1 fail,
2 usage; ``verify`` 0 iff the claim's check passes; ``closure`` 0, 1
unsatisfiable, 4 no flattest element.  All output is a pure function of
the inputs; transcripts and reports are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .conditionals import rational_closure, rational_closure_fast
from .exceptions import (
    BeliefChangeError,
    FormulaSyntaxError,
    MalformedDiagramError,
    MissingContractionError,
    NoMaximumError,
    PartitionError,
    ScenarioError,
    ScopeError,
    UnsatisfiableError,
)
from .lang import (
    Conditional,
    MixedSet,
    check_atoms,
    dnf_of_worlds,
    models,
    parse_formula,
)
from .operators import Contraction, Revision, contract, expand, nli_revise, revise
from .postulates import (
    CLAIM_IDS,
    POSTULATE_IDS,
    check_postulate,
    default_atoms,
    render_machine,
    render_text,
    verify_claim,
)
from .tpo import Absurd, State, Tpo, beliefs, conditional_holds, format_tpo, min_worlds, parse_tpo, propositions

_REVISIONS = {m.value: m for m in Revision}
_CONTRACTIONS = {m.value: m for m in Contraction}


# ---------------------------------------------------------------------------
# Scenario files


@dataclass(frozen=True)
class Step:
    kind: str  # revise | contract | expand | nli-revise
    methods: tuple
    formula_text: str


@dataclass(frozen=True)
class Query:
    kind: str  # belief | conditional
    text: str


@dataclass(frozen=True)
class Scenario:
    atoms: tuple
    initial_text: str
    steps: tuple
    queries: tuple


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def parse_scenario(text: str) -> Scenario:
    atoms = None
    initial = None
    steps = []
    queries = []
    for number, line in _content_lines(text):
        if ":" not in line:
            raise ScenarioError(f"line {number}: expected 'section: content'")
        section, _, content = line.partition(":")
        section = section.strip()
        content = content.strip()
        if section == "atoms":
            atoms = tuple(content.split())
        elif section == "initial":
            initial = content
        elif section == "step":
            parts = content.split()
            if not parts:
                raise ScenarioError(f"line {number}: empty step")
            kind = parts[0]
            if kind in ("revise", "contract", "expand"):
                if len(parts) < 3:
                    raise ScenarioError(f"line {number}: step needs a method and a formula")
                table = _CONTRACTIONS if kind == "contract" else _REVISIONS
                if parts[1] not in table:
                    raise ScenarioError(f"line {number}: unknown method {parts[1]!r}")
                steps.append(Step(kind, (parts[1],), " ".join(parts[2:])))
            elif kind == "nli-revise":
                if len(parts) < 4:
                    raise ScenarioError(
                        f"line {number}: nli-revise needs contraction, revision and a formula"
                    )
                if parts[1] not in _CONTRACTIONS or parts[2] not in _REVISIONS:
                    raise ScenarioError(f"line {number}: unknown method in nli-revise step")
                steps.append(Step(kind, (parts[1], parts[2]), " ".join(parts[3:])))
            else:
                raise ScenarioError(f"line {number}: unknown step {kind!r}")
        elif section == "query":
            parts = content.split(None, 1)
            if len(parts) != 2 or parts[0] not in ("belief", "conditional"):
                raise ScenarioError(f"line {number}: query must be 'belief F' or 'conditional A => B'")
            queries.append(Query(parts[0], parts[1].strip()))
        else:
            raise ScenarioError(f"line {number}: unknown section {section!r}")
    if atoms is None:
        raise ScenarioError("missing 'atoms:' line")
    if initial is None:
        raise ScenarioError("missing 'initial:' line")
    try:
        check_atoms(atoms)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    for step in steps:
        parse_formula(step.formula_text, atoms)
    for query in queries:
        if query.kind == "belief":
            parse_formula(query.text, atoms)
        else:
            antecedent, sep, consequent = query.text.partition("=>")
            if not sep:
                raise ScenarioError("conditional query must be written 'A => B'")
            parse_formula(antecedent.strip(), atoms)
            parse_formula(consequent.strip(), atoms)
    return Scenario(atoms=atoms, initial_text=initial, steps=tuple(steps), queries=tuple(queries))


def _parse_state(text: str, n_atoms: int) -> State:
    if text == "absurd":
        return Absurd(n_atoms)
    return parse_tpo(text, n_atoms)


def _state_text(state: State) -> str:
    return "absurd" if isinstance(state, Absurd) else format_tpo(state)


def _beliefs_text(state: State, atoms) -> str:
    return dnf_of_worlds(beliefs(state), atoms)


def _revision_method(name: str, where: str):
    if name not in _REVISIONS:
        raise ScenarioError(f"{where}: unknown revision method {name!r}")
    return _REVISIONS[name]


def _contraction_method(name: str, where: str):
    if name not in _CONTRACTIONS:
        raise ScenarioError(f"{where}: unknown contraction method {name!r}")
    return _CONTRACTIONS[name]


def _apply_step(state: State, step: Step, atoms) -> State:
    sentence = models(parse_formula(step.formula_text, atoms), atoms)
    if step.kind == "revise":
        if isinstance(state, Absurd):
            raise BeliefChangeError("revision of the absurd state is undefined")
        return revise(state, sentence, _revision_method(step.methods[0], "step"))
    if step.kind == "contract":
        return contract(state, sentence, _contraction_method(step.methods[0], "step"))
    if step.kind == "expand":
        return expand(state, sentence, _revision_method(step.methods[0], "step"))
    if isinstance(state, Absurd):
        raise BeliefChangeError("nli-revise of the absurd state is undefined")
    return nli_revise(
        state,
        sentence,
        _contraction_method(step.methods[0], "step"),
        _revision_method(step.methods[1], "step"),
    )


def _answer_query(state: State, query: Query, atoms) -> bool:
    if query.kind == "belief":
        sentence = models(parse_formula(query.text, atoms), atoms)
        if isinstance(state, Absurd):
            return True  # the absurd belief set is the whole language
        return beliefs(state) <= sentence
    antecedent_text, sep, consequent_text = query.text.partition("=>")
    if not sep:
        raise ScenarioError("conditional query must be written 'A => B'")
    if isinstance(state, Absurd):
        raise BeliefChangeError("conditional queries against the absurd state are undefined")
    cond = Conditional(
        parse_formula(antecedent_text.strip(), atoms),
        parse_formula(consequent_text.strip(), atoms),
    )
    return conditional_holds(state, cond, atoms)


def run_scenario(text: str, fmt: str = "text") -> tuple:
    """Execute a scenario; returns (exit_code, stdout_text, stderr_text)."""
    try:
        scenario = parse_scenario(text)
        atoms = scenario.atoms
        state = _parse_state(scenario.initial_text, len(atoms))
    except (ScenarioError, FormulaSyntaxError, PartitionError) as exc:
        return 2, "", f"error: {exc}\n"

    def answers(current_state):
        return [
            (f"{q.kind} {q.text}", _answer_query(current_state, q, atoms))
            for q in scenario.queries
        ]

    lines = [f"atoms: {' '.join(atoms)}", f"initial: {_state_text(state)}",
             f"beliefs: {_beliefs_text(state, atoms)}"]
    record = {
        "atoms": list(atoms),
        "initial": {"state": _state_text(state), "beliefs": _beliefs_text(state, atoms)},
        "steps": [],
    }
    try:
        if not scenario.steps and scenario.queries:
            for label, value in answers(state):
                lines.append(f"query {label}: {str(value).lower()}")
                record["initial"].setdefault("queries", []).append(
                    {"query": label, "result": value}
                )
        for index, step in enumerate(scenario.steps, start=1):
            described = " ".join((step.kind,) + step.methods + (step.formula_text,))
            try:
                state = _apply_step(state, step, atoms)
                step_queries = answers(state)
            except FormulaSyntaxError as exc:
                return 2, "", f"error: step {index}: {exc}\n"
            except BeliefChangeError as exc:
                out = _render_run(fmt, lines, record)
                return 3, out, f"error: step {index}: {exc}\n"
            lines.append(f"step {index}: {described}")
            lines.append(f"state: {_state_text(state)}")
            lines.append(f"beliefs: {_beliefs_text(state, atoms)}")
            entry = {
                "index": index,
                "step": described,
                "state": _state_text(state),
                "beliefs": _beliefs_text(state, atoms),
                "queries": [],
            }
            for label, value in step_queries:
                lines.append(f"query {label}: {str(value).lower()}")
                entry["queries"].append({"query": label, "result": value})
            record["steps"].append(entry)
    except FormulaSyntaxError as exc:
        return 2, "", f"error: {exc}\n"
    return 0, _render_run(fmt, lines, record), ""


def _render_run(fmt: str, lines, record) -> str:
    if fmt == "machine":
        return json.dumps(record, sort_keys=True, indent=2) + "\n"
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Conditional-set files


def parse_conditional_set(text: str, atoms) -> MixedSet:
    """One entry per line: plain formulas as-is, conditionals as A => B."""
    plain = []
    conds = []
    for number, line in _content_lines(text):
        if "=>" in line:
            antecedent, _, consequent = line.partition("=>")
            try:
                conds.append(
                    Conditional(
                        parse_formula(antecedent.strip(), atoms),
                        parse_formula(consequent.strip(), atoms),
                    )
                )
            except FormulaSyntaxError as exc:
                raise ScenarioError(f"line {number}: {exc}") from None
        else:
            try:
                plain.append(parse_formula(line, atoms))
            except FormulaSyntaxError as exc:
                raise ScenarioError(f"line {number}: {exc}") from None
    return MixedSet.from_items(plain, conds, atoms)


def _rational_base(delta: MixedSet, n_atoms: int):
    """The preorder whose minimal-world map the conditionals name, if any."""
    strongest = delta.strongest_map()
    required = propositions(n_atoms)
    if set(strongest) != set(required):
        return None
    n_worlds = 1 << n_atoms
    below = []
    for x in range(n_worlds):
        count = 0
        for y in range(n_worlds):
            if y != x and strongest[frozenset((x, y))] == frozenset((y,)):
                count += 1
        below.append(count)
    cells = []
    for key in sorted(set(below)):
        cells.append(frozenset(w for w in range(n_worlds) if below[w] == key))
    candidate = Tpo(tuple(cells), n_atoms)
    for p in required:
        if min_worlds(candidate, p) != strongest[p]:
            return None
    return candidate


def closure_answer(delta: MixedSet, n_atoms: int) -> tuple:
    """Closure result plus whether the natural-revision fast path applied.

    The fast path applies when the conditional part is exactly some
    preorder's conditional set and the plain part keeps one of its
    minimal worlds; the conditional part then pins the belief set, so a
    plain part excluding all minimal worlds is unsatisfiable outright.
    """
    base = _rational_base(delta, n_atoms)
    if base is not None and not delta.plain_models & base.cells[0]:
        raise UnsatisfiableError("no total preorder satisfies the input set")
    fast_applicable = base is not None and bool(delta.plain_models)
    fast = rational_closure_fast(base, delta.plain_models) if fast_applicable else None
    if n_atoms <= 2:
        result = rational_closure(delta, n_atoms).tpo
        if fast is not None and result != fast:
            raise BeliefChangeError(
                "internal error: fast path disagrees with the flattest satisfier"
            )
        return result, fast_applicable
    if fast is not None:
        return fast, True
    return rational_closure(delta, n_atoms).tpo, False


# ---------------------------------------------------------------------------
# Entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beliefchange",
        description="Iterated belief change over finite total preorders.",
    )
    parser.add_argument(
        "--format", choices=("text", "machine"), default="text",
        help="report format (default: text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="execute a scenario file")
    run_parser.add_argument("file")

    check_parser = sub.add_parser("check", help="check one postulate")
    check_parser.add_argument("postulate", metavar="postulate",
                              help=", ".join(POSTULATE_IDS))
    check_parser.add_argument("revision", choices=sorted(_REVISIONS))
    check_parser.add_argument("contraction", nargs="?", choices=sorted(_CONTRACTIONS))
    check_parser.add_argument("--n", type=int, default=2, dest="n_atoms")
    check_parser.add_argument("--mode", choices=("exhaustive", "sampled"),
                              default="exhaustive")
    check_parser.add_argument("--seed", type=int, default=None)
    check_parser.add_argument("--sample", type=int, default=None)
    check_parser.add_argument("--workers", type=int, default=1)

    verify_parser = sub.add_parser("verify", help="verify a named claim")
    verify_parser.add_argument("claim", choices=CLAIM_IDS)
    verify_parser.add_argument("--n", type=int, default=2, dest="n_atoms")

    closure_parser = sub.add_parser("closure", help="rational closure of a conditional-set file")
    closure_parser.add_argument("file")
    closure_parser.add_argument("--n", type=int, default=2, dest="n_atoms")
    closure_parser.add_argument(
        "--atoms", default=None,
        help="atom names, comma or space separated (default: p q r ... per --n)",
    )
    return parser


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            code, out, err = run_scenario(_read_file(args.file), args.format)
            sys.stdout.write(out)
            sys.stderr.write(err)
            return code
        if args.command == "check":
            contraction = (
                _CONTRACTIONS[args.contraction] if args.contraction else None
            )
            report = check_postulate(
                args.postulate,
                _REVISIONS[args.revision],
                contraction,
                n_atoms=args.n_atoms,
                mode=args.mode,
                seed=args.seed,
                sample=args.sample,
                workers=args.workers,
            )
            sys.stdout.write(
                render_machine(report) if args.format == "machine" else render_text(report)
            )
            return 0 if report.passed else 1
        if args.command == "verify":
            report = verify_claim(args.claim, n_atoms=args.n_atoms)
            sys.stdout.write(
                render_machine(report) if args.format == "machine" else render_text(report)
            )
            return 0 if report.passed else 1
        if args.command == "closure":
            if args.atoms:
                atoms = tuple(args.atoms.replace(",", " ").split())
            else:
                atoms = default_atoms(args.n_atoms)
            if len(atoms) != args.n_atoms:
                parser.error(f"--atoms names {len(atoms)} atoms but --n is {args.n_atoms}")
            try:
                check_atoms(atoms)
            except ValueError as exc:
                parser.error(str(exc))
            delta = parse_conditional_set(_read_file(args.file), atoms)
            try:
                tpo, fast = closure_answer(delta, args.n_atoms)
            except UnsatisfiableError as exc:
                sys.stderr.write(f"error: {exc}\n")
                return 1
            except NoMaximumError as exc:
                sys.stderr.write(f"error: {exc}\n")
                return 4
            if args.format == "machine":
                sys.stdout.write(
                    json.dumps(
                        {"tpo": format_tpo(tpo), "fast_path": fast},
                        sort_keys=True,
                        indent=2,
                    )
                    + "\n"
                )
            else:
                sys.stdout.write(f"tpo: {format_tpo(tpo)}\n")
                sys.stdout.write(
                    "fast-path: applied (natural revision)\n" if fast else "fast-path: not applicable\n"
                )
            return 0
    except (ScenarioError, FormulaSyntaxError, PartitionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (MissingContractionError, ScopeError, MalformedDiagramError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except BeliefChangeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
