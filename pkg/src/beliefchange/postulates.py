"""Executable postulates and claim verification by exhaustive enumeration.

Every postulate is compiled to a scan over concrete instances: total
preorders (or pairs of them), consistent input propositions, and world
pairs.  A check either passes with zero violations or fails with
replayable witnesses, reported deterministically: identical runs and any
worker count produce byte-identical reports.

Quantification conventions, fixed once for the whole module:

* input sentences range over nonempty model sets (sentences equivalent
  up to logical equivalence are checked once);
* postulates relating contraction by the negated input to revision by
  the input treat the tautology instance vacuously (retracting an
  inconsistent sentence changes nothing), so they quantify over all
  consistent inputs;
* postulates that *revise* by the negated input skip tautologies, since
  revision by an inconsistent sentence is undefined.

Exhaustive checks are supported for at most 2 atoms; sampled checks,
drawing preorders uniformly via ordered-partition unranking, for at
most 3.
"""

from __future__ import annotations

import json
import multiprocessing
import random
from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterator, Optional

from .conditionals import rational_closure, rational_closure_fast
from .exceptions import (
    MalformedDiagramError,
    MissingContractionError,
    ScopeError,
)
from .lang import (
    TOP,
    Conditional,
    all_worlds,
    cn_extended_member,
    dnf_of_worlds,
    models,
    parse_formula,
    world_str,
)
from .operators import (
    Contraction,
    Revision,
    RevisionMethod,
    contract,
    contract_by_negation,
    make_random_dp_operator,
    method_name,
    revise,
)
from .tpo import (
    Tpo,
    conditional_set,
    count_tpos,
    enumerate_a_preserving_isos,
    enumerate_tpos,
    flatter_eq,
    format_tpo,
    min_worlds,
    parse_tpo,
    propositions,
    tpo_at_index,
)

WITNESS_CAP = 10
_CHUNKS = 16

POSTULATE_IDS = (
    "Success",
    "DP1",
    "DP2",
    "DP3",
    "DP4",
    "CC1",
    "CC2",
    "CC3",
    "CC4",
    "CR1",
    "CR2",
    "CR3",
    "CR4",
    "SPU",
    "WPU",
    "IIAP",
    "IIAI",
    "Beta1",
    "Beta2",
    "Neut",
    "Red",
    "HI_beliefs",
    "LI_beliefs",
    "NLI",
    "iLIRC",
)

CLAIM_IDS = ("T1", "T2", "T3", "Cor1", "T4", "P1", "P2", "P3", "P5", "L_flattest")

DIAGRAM_IDS = ("a", "b", "c", "d", "e", "f")


def default_atoms(n_atoms: int) -> tuple:
    return ("p", "q", "r", "s")[:n_atoms]


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class CheckScope:
    n_atoms: int
    mode: str
    sample: Optional[int] = None
    seed: Optional[int] = None


@dataclass(frozen=True)
class Witness:
    tpos: tuple
    inputs: tuple
    worlds: tuple
    note: str = ""


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    revision: Optional[str]
    contraction: Optional[str]
    scope: CheckScope
    instances: int
    violations: int
    outcome: str
    witnesses: tuple = ()
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"


def render_text(report: CheckReport) -> str:
    lines = [f"check: {report.check_id}"]
    if report.revision is not None:
        lines.append(f"revision: {report.revision}")
    if report.contraction is not None:
        lines.append(f"contraction: {report.contraction}")
    scope = f"scope: n={report.scope.n_atoms} {report.scope.mode}"
    if report.scope.mode == "sampled":
        scope += f" sample={report.scope.sample} seed={report.scope.seed}"
    lines.append(scope)
    lines.append(f"instances: {report.instances}")
    lines.append(f"violations: {report.violations}")
    lines.append(f"outcome: {report.outcome}")
    for i, w in enumerate(report.witnesses, start=1):
        lines.append(f"witness {i}:")
        for t in w.tpos:
            lines.append(f"  tpo: {t}")
        for s in w.inputs:
            lines.append(f"  input: {s}")
        if w.worlds:
            lines.append(f"  worlds: {' '.join(w.worlds)}")
        if w.note:
            lines.append(f"  note: {w.note}")
    if report.detail:
        lines.append("detail:")
        for line in report.detail.splitlines():
            lines.append(f"  {line}")
    return "\n".join(lines) + "\n"


def render_machine(report: CheckReport) -> str:
    payload = {
        "check": report.check_id,
        "revision": report.revision,
        "contraction": report.contraction,
        "scope": {
            "n_atoms": report.scope.n_atoms,
            "mode": report.scope.mode,
            "sample": report.scope.sample,
            "seed": report.scope.seed,
        },
        "instances": report.instances,
        "violations": report.violations,
        "outcome": report.outcome,
        "witnesses": [
            {
                "tpos": list(w.tpos),
                "inputs": list(w.inputs),
                "worlds": list(w.worlds),
                "note": w.note,
            }
            for w in report.witnesses
        ],
        "detail": report.detail,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Scan context


class _Ctx:
    """Per-run caches shared by the postulate scans."""

    def __init__(self, n_atoms: int, rev=None, con: Contraction | None = None):
        self.n = n_atoms
        self.full = all_worlds(n_atoms)
        self.atoms = default_atoms(n_atoms)
        self.props = propositions(n_atoms)
        self.props_proper = tuple(p for p in self.props if p != self.full)
        worlds = tuple(range(1 << n_atoms))
        self.worlds = worlds
        self.pairs = tuple((x, y) for x in worlds for y in worlds if x < y)
        self.opairs = tuple((x, y) for x in worlds for y in worlds if x != y)
        self.rev = rev
        self.con = con
        self._rev = {}
        self._con = {}
        self._conneg = {}
        self._min = {}

    def clear(self):
        self._rev.clear()
        self._con.clear()
        self._conneg.clear()
        self._min.clear()

    def rev_tpo(self, t: Tpo, p: frozenset) -> Tpo:
        key = (t, p)
        out = self._rev.get(key)
        if out is None:
            out = revise(t, p, self.rev)
            self._rev[key] = out
        return out

    def con_tpo(self, t: Tpo, p: frozenset) -> Tpo:
        key = (t, p)
        out = self._con.get(key)
        if out is None:
            out = contract(t, p, self.con)
            self._con[key] = out
        return out

    def conneg_tpo(self, t: Tpo, p: frozenset) -> Tpo:
        key = (t, p)
        out = self._conneg.get(key)
        if out is None:
            out = contract_by_negation(t, p, self.con)
            self._conneg[key] = out
        return out

    def minset(self, t: Tpo, p: frozenset) -> frozenset:
        key = (t, p)
        out = self._min.get(key)
        if out is None:
            out = min_worlds(t, p)
            self._min[key] = out
        return out

    def witness(self, tpos, inputs, worlds, note="") -> Witness:
        return Witness(
            tpos=tuple(format_tpo(t) for t in tpos),
            inputs=tuple(dnf_of_worlds(p, self.atoms) for p in inputs),
            worlds=tuple(world_str(w, self.n) for w in worlds),
            note=note,
        )


def _code(r, x, y) -> int:
    """Relation of (x, y) under a rank map: 1 below, 0 tied, -1 above."""
    if r[x] <= r[y]:
        return 1 if r[y] > r[x] else 0
    return -1


def _icode(p, x, y) -> int:
    """Relation of (x, y) under the input order of proposition p."""
    xin, yin = x in p, y in p
    if xin == yin:
        return 0
    return 1 if xin else -1


# ---------------------------------------------------------------------------
# Postulate scans (generators of witnesses, deterministic order)


def _g_success(ctx, t):
    for p in ctx.props:
        stray = ctx.rev_tpo(t, p).cells[0] - p
        if stray:
            yield ctx.witness((t,), (p,), (min(stray),), note="minimal world outside input")


def _g_dp(same_side: bool, inside: bool):
    """DP1/DP2 when ``same_side``; DP3 (strict) / DP4 (weak) otherwise."""

    def gen(ctx, t):
        r = t.rank
        for p in ctx.props:
            rq = ctx.rev_tpo(t, p).rank
            if same_side:
                for x, y in ctx.pairs:
                    if (x in p) is inside and (y in p) is inside:
                        if _code(r, x, y) != _code(rq, x, y):
                            yield ctx.witness((t,), (p,), (x, y))
            else:
                for x in ctx.worlds:
                    if x not in p:
                        continue
                    for y in ctx.worlds:
                        if y in p:
                            continue
                        if inside:  # strict clause
                            if r[x] < r[y] and not rq[x] < rq[y]:
                                yield ctx.witness((t,), (p,), (x, y))
                        else:
                            if r[x] <= r[y] and not rq[x] <= rq[y]:
                                yield ctx.witness((t,), (p,), (x, y))

    return gen


_g_dp1 = _g_dp(True, True)
_g_dp2 = _g_dp(True, False)
_g_dp3 = _g_dp(False, True)
_g_dp4 = _g_dp(False, False)


def _g_cc(index: int):
    def gen(ctx, t):
        r = t.rank
        for p in ctx.props:
            rc = ctx.con_tpo(t, p).rank
            if index in (1, 2):
                inside = index == 2
                for x, y in ctx.pairs:
                    if (x in p) is inside and (y in p) is inside:
                        if _code(r, x, y) != _code(rc, x, y):
                            yield ctx.witness((t,), (p,), (x, y))
            else:
                for x in ctx.worlds:
                    if x in p:
                        continue
                    for y in ctx.worlds:
                        if y not in p:
                            continue
                        if index == 3:
                            if r[x] < r[y] and not rc[x] < rc[y]:
                                yield ctx.witness((t,), (p,), (x, y))
                        else:
                            if r[x] <= r[y] and not rc[x] <= rc[y]:
                                yield ctx.witness((t,), (p,), (x, y))

    return gen


def _g_cr(index: int):
    def gen(ctx, t):
        for p in ctx.props:
            rc = ctx.conneg_tpo(t, p).rank
            rv = ctx.rev_tpo(t, p).rank
            if index in (1, 2):
                inside = index == 1
                for x, y in ctx.pairs:
                    if (x in p) is inside and (y in p) is inside:
                        if _code(rc, x, y) != _code(rv, x, y):
                            yield ctx.witness((t,), (p,), (x, y))
            else:
                for x in ctx.worlds:
                    if x not in p:
                        continue
                    for y in ctx.worlds:
                        if y in p:
                            continue
                        if index == 3:
                            if rc[x] < rc[y] and not rv[x] < rv[y]:
                                yield ctx.witness((t,), (p,), (x, y))
                        else:
                            if rc[x] <= rc[y] and not rv[x] <= rv[y]:
                                yield ctx.witness((t,), (p,), (x, y))

    return gen


def _g_spu(ctx, t):
    r = t.rank
    for p in ctx.props_proper:
        rc = ctx.con_tpo(t, p).rank
        rv = ctx.rev_tpo(t, ctx.full - p).rank
        for x, y in ctx.opairs:
            if r[x] < r[y] and rv[x] < rv[y] and not rc[x] < rc[y]:
                yield ctx.witness((t,), (p,), (x, y))


def _g_wpu(ctx, t):
    r = t.rank
    for p in ctx.props_proper:
        rc = ctx.con_tpo(t, p).rank
        rv = ctx.rev_tpo(t, ctx.full - p).rank
        for x, y in ctx.opairs:
            if r[x] <= r[y] and rv[x] <= rv[y] and not rc[x] <= rc[y]:
                yield ctx.witness((t,), (p,), (x, y))


def _g_iiap(ctx, pair):
    t1, t2 = pair
    r1, r2 = t1.rank, t2.rank
    for p in ctx.props:
        blocked = ctx.minset(t1, p) | ctx.minset(t2, p)
        r1q = ctx.rev_tpo(t1, p).rank
        r2q = ctx.rev_tpo(t2, p).rank
        for x, y in ctx.pairs:
            if x in blocked or y in blocked:
                continue
            if _code(r1, x, y) == _code(r2, x, y) and _code(r1q, x, y) != _code(
                r2q, x, y
            ):
                yield ctx.witness((t1, t2), (p,), (x, y))


def _g_iiai(ctx, t):
    n_props = len(ctx.props)
    for i in range(n_props):
        p = ctx.props[i]
        rp = ctx.rev_tpo(t, p).rank
        min_p = ctx.minset(t, p)
        for j in range(i + 1, n_props):
            q = ctx.props[j]
            blocked = min_p | ctx.minset(t, q)
            rq = ctx.rev_tpo(t, q).rank
            for x, y in ctx.pairs:
                if x in blocked or y in blocked:
                    continue
                if _icode(p, x, y) == _icode(q, x, y) and _code(rp, x, y) != _code(
                    rq, x, y
                ):
                    yield ctx.witness((t,), (p, q), (x, y))


def _g_beta(strict: bool):
    def gen(ctx, t):
        for a in ctx.props:
            ra = ctx.rev_tpo(t, a).rank
            for x in ctx.worlds:
                if x not in a:
                    continue
                for y in ctx.worlds:
                    if y in a:
                        continue
                    # x is strictly below y in the input order of a
                    if strict:
                        if not ra[y] < ra[x]:
                            continue
                    else:
                        if not ra[y] <= ra[x]:
                            continue
                    for c in ctx.props:
                        if x in ctx.minset(t, c):
                            continue
                        rc = ctx.rev_tpo(t, c).rank
                        if strict:
                            if not rc[y] < rc[x]:
                                yield ctx.witness((t,), (a, c), (x, y))
                        else:
                            if not rc[y] <= rc[x]:
                                yield ctx.witness((t,), (a, c), (x, y))

    return gen


_g_beta1 = _g_beta(False)
_g_beta2 = _g_beta(True)


def _g_neut(ctx, pair):
    t1, t2 = pair
    if [len(c) for c in t1.cells] != [len(c) for c in t2.cells]:
        return
    for p in ctx.props:
        isos = enumerate_a_preserving_isos(t1, t2, p)
        if not isos:
            continue
        r1q = ctx.rev_tpo(t1, p).rank
        r2q = ctx.rev_tpo(t2, p).rank
        for perm in isos:
            for x, y in ctx.pairs:
                if _code(r1q, x, y) != _code(r2q, perm[x], perm[y]):
                    mapping = ",".join(
                        f"{world_str(w, ctx.n)}->{world_str(perm[w], ctx.n)}"
                        for w in ctx.worlds
                    )
                    yield ctx.witness(
                        (t1, t2), (p,), (x, y), note=f"isomorphism {mapping}"
                    )


def _g_red(ctx, t):
    for p in ctx.props:
        first = revise(t, p, ctx.rev)
        second = revise(t, p, ctx.rev)
        if first != second:
            yield ctx.witness((t,), (p,), (), note="revision not a function of (tpo, input)")


def _g_hi_beliefs(ctx, t):
    for p in ctx.props_proper:
        got = ctx.con_tpo(t, p).cells[0]
        expected = t.cells[0] | ctx.rev_tpo(t, ctx.full - p).cells[0]
        if got != expected:
            yield ctx.witness((t,), (p,), (), note="contraction beliefs differ from union of minima")


def _g_li_beliefs(ctx, t):
    for p in ctx.props:
        got = ctx.rev_tpo(t, p).cells[0]
        expected = min_worlds(ctx.conneg_tpo(t, p), p)
        if got != expected:
            yield ctx.witness((t,), (p,), (), note="revision beliefs differ from post-contraction minima")


def _first_diff_pair(ctx, ta: Tpo, tb: Tpo):
    ra, rb = ta.rank, tb.rank
    for x, y in ctx.pairs:
        if _code(ra, x, y) != _code(rb, x, y):
            return (x, y)
    return ()


def _g_nli(ctx, t):
    for p in ctx.props:
        direct = ctx.rev_tpo(t, p)
        routed = revise(ctx.conneg_tpo(t, p), p, ctx.rev)
        if direct != routed:
            pair = _first_diff_pair(ctx, direct, routed)
            yield ctx.witness(
                (t,),
                (p,),
                pair,
                note=f"direct {format_tpo(direct)}; routed {format_tpo(routed)}",
            )


def _g_ilirc(ctx, t):
    for p in ctx.props:
        direct = ctx.rev_tpo(t, p)
        routed = revise(ctx.conneg_tpo(t, p), p, Revision.NATURAL)
        if direct != routed:
            pair = _first_diff_pair(ctx, direct, routed)
            yield ctx.witness(
                (t,),
                (p,),
                pair,
                note=f"direct {format_tpo(direct)}; closure route {format_tpo(routed)}",
            )


@dataclass(frozen=True)
class _PostulateDef:
    gen: Callable
    pair_outer: bool = False
    needs_con: bool = False
    needs_rev: bool = True
    inputs_per_outer: Callable = field(default=lambda ctx: len(ctx.props))


_POSTULATES = {
    "Success": _PostulateDef(_g_success),
    "DP1": _PostulateDef(_g_dp1),
    "DP2": _PostulateDef(_g_dp2),
    "DP3": _PostulateDef(_g_dp3),
    "DP4": _PostulateDef(_g_dp4),
    "CC1": _PostulateDef(_g_cc(1), needs_con=True, needs_rev=False),
    "CC2": _PostulateDef(_g_cc(2), needs_con=True, needs_rev=False),
    "CC3": _PostulateDef(_g_cc(3), needs_con=True, needs_rev=False),
    "CC4": _PostulateDef(_g_cc(4), needs_con=True, needs_rev=False),
    "CR1": _PostulateDef(_g_cr(1), needs_con=True),
    "CR2": _PostulateDef(_g_cr(2), needs_con=True),
    "CR3": _PostulateDef(_g_cr(3), needs_con=True),
    "CR4": _PostulateDef(_g_cr(4), needs_con=True),
    "SPU": _PostulateDef(
        _g_spu, needs_con=True, inputs_per_outer=lambda ctx: len(ctx.props_proper)
    ),
    "WPU": _PostulateDef(
        _g_wpu, needs_con=True, inputs_per_outer=lambda ctx: len(ctx.props_proper)
    ),
    "IIAP": _PostulateDef(_g_iiap, pair_outer=True),
    "IIAI": _PostulateDef(
        _g_iiai,
        inputs_per_outer=lambda ctx: len(ctx.props) * (len(ctx.props) - 1) // 2,
    ),
    "Beta1": _PostulateDef(
        _g_beta1, inputs_per_outer=lambda ctx: len(ctx.props) ** 2
    ),
    "Beta2": _PostulateDef(
        _g_beta2, inputs_per_outer=lambda ctx: len(ctx.props) ** 2
    ),
    "Neut": _PostulateDef(_g_neut, pair_outer=True),
    "Red": _PostulateDef(_g_red),
    "HI_beliefs": _PostulateDef(
        _g_hi_beliefs,
        needs_con=True,
        inputs_per_outer=lambda ctx: len(ctx.props_proper),
    ),
    "LI_beliefs": _PostulateDef(_g_li_beliefs, needs_con=True),
    "NLI": _PostulateDef(_g_nli, needs_con=True),
    "iLIRC": _PostulateDef(_g_ilirc, needs_con=True),
}


# ---------------------------------------------------------------------------
# Check driver


def _validate_scope(n_atoms: int, mode: str) -> None:
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exhaustive" and n_atoms > 2:
        raise ScopeError("exhaustive checking supports at most 2 atoms")
    if mode == "sampled" and n_atoms > 3:
        raise ScopeError("sampled checking supports at most 3 atoms")


def _outer_slice(pair_outer, n_atoms, mode, seed, sample, start, stop):
    total_tpos = count_tpos(n_atoms)
    if mode == "exhaustive":
        if pair_outer:
            pool = list(enumerate_tpos(n_atoms))
            for index in range(start, stop):
                yield (pool[index // total_tpos], pool[index % total_tpos])
        else:
            yield from islice(enumerate_tpos(n_atoms), start, stop)
        return
    rng = random.Random(seed)
    if pair_outer:
        draws = [
            (rng.randrange(total_tpos), rng.randrange(total_tpos))
            for _ in range(sample)
        ]
        for i, j in draws[start:stop]:
            yield (tpo_at_index(i, n_atoms), tpo_at_index(j, n_atoms))
    else:
        draws = [rng.randrange(total_tpos) for _ in range(sample)]
        for i in draws[start:stop]:
            yield tpo_at_index(i, n_atoms)


def _chunk_bounds(total: int) -> list:
    chunks = min(_CHUNKS, total) or 1
    return [(total * i // chunks, total * (i + 1) // chunks) for i in range(chunks)]


def _run_chunk(args):
    postulate, rev, con, n_atoms, mode, seed, sample, start, stop = args
    spec = _POSTULATES[postulate]
    ctx = _Ctx(n_atoms, rev, con)
    instances = 0
    violations = 0
    witnesses = []
    per_outer = spec.inputs_per_outer(ctx)
    for outer in _outer_slice(spec.pair_outer, n_atoms, mode, seed, sample, start, stop):
        instances += per_outer
        for witness in spec.gen(ctx, outer):
            violations += 1
            if len(witnesses) < WITNESS_CAP:
                witnesses.append(witness)
        if mode == "sampled":
            ctx.clear()
    return instances, violations, witnesses


def check_postulate(
    postulate: str,
    revision: RevisionMethod | None = None,
    contraction: Contraction | None = None,
    *,
    n_atoms: int = 2,
    mode: str = "exhaustive",
    seed: int | None = None,
    sample: int | None = None,
    workers: int = 1,
) -> CheckReport:
    """Quantify one postulate over its whole instance space and report.

    Exhaustive mode enumerates every preorder (or preorder pair);
    sampled mode draws ``sample`` of them with a seeded generator.
    Violations are counted in full; the report keeps the first ten
    witnesses in enumeration order, whatever the worker count.
    """
    if postulate not in _POSTULATES:
        raise ValueError(f"unknown postulate {postulate!r}")
    spec = _POSTULATES[postulate]
    if spec.needs_con and contraction is None:
        raise MissingContractionError(f"postulate {postulate} needs a contraction operator")
    if spec.needs_rev and revision is None:
        raise ValueError(f"postulate {postulate} needs a revision operator")
    _validate_scope(n_atoms, mode)
    if mode == "sampled":
        seed = 0 if seed is None else seed
        sample = 10000 if sample is None else sample
        total = sample
    else:
        seed = None
        sample = None
        total = count_tpos(n_atoms)
        if spec.pair_outer:
            total *= total
    jobs = [
        (postulate, revision, contraction, n_atoms, mode, seed, sample, start, stop)
        for start, stop in _chunk_bounds(total)
    ]
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_run_chunk, jobs)
    else:
        results = [_run_chunk(job) for job in jobs]
    instances = sum(r[0] for r in results)
    violations = sum(r[1] for r in results)
    witnesses: list = []
    for _, _, chunk_witnesses in results:
        for witness in chunk_witnesses:
            if len(witnesses) < WITNESS_CAP:
                witnesses.append(witness)
    return CheckReport(
        check_id=postulate,
        revision=method_name(revision) if revision is not None else None,
        contraction=method_name(contraction) if contraction is not None else None,
        scope=CheckScope(n_atoms=n_atoms, mode=mode, sample=sample, seed=seed),
        instances=instances,
        violations=violations,
        outcome="pass" if violations == 0 else "fail",
        witnesses=tuple(witnesses),
    )


def postulate_holds(
    postulate: str,
    revision: RevisionMethod | None = None,
    contraction: Contraction | None = None,
    *,
    n_atoms: int = 2,
) -> bool:
    """Exhaustive boolean check with early exit on the first violation."""
    spec = _POSTULATES[postulate]
    if spec.needs_con and contraction is None:
        raise MissingContractionError(f"postulate {postulate} needs a contraction operator")
    _validate_scope(n_atoms, "exhaustive")
    ctx = _Ctx(n_atoms, revision, contraction)
    if spec.pair_outer:
        pool = list(enumerate_tpos(n_atoms))
        outers: Iterator = ((t1, t2) for t1 in pool for t2 in pool)
    else:
        outers = enumerate_tpos(n_atoms)
    for outer in outers:
        if next(spec.gen(ctx, outer), None) is not None:
            return False
    return True


def replay_witness(
    check_id: str,
    witness: Witness,
    revision: RevisionMethod | None = None,
    contraction: Contraction | None = None,
    *,
    n_atoms: int = 2,
) -> bool:
    """Re-run the instance named by a witness; True iff it reproduces."""
    atoms = default_atoms(n_atoms)
    tpos = tuple(parse_tpo(text, n_atoms) for text in witness.tpos)
    if check_id.startswith("diagram"):
        diagram = check_id.split()[-1]
        report = _scan_diagram_instance(diagram, n_atoms, tpos[0], witness)
        return report
    ctx = _Ctx(n_atoms, revision, contraction)
    spec = _POSTULATES[check_id]
    outer = (tpos[0], tpos[1]) if spec.pair_outer else tpos[0]
    return any(w == witness for w in spec.gen(ctx, outer))


# ---------------------------------------------------------------------------
# State-diagram exclusion

_DIAGRAMS = {
    "a": {1: 1, 0: 1, -1: -1},
    "b": {1: 1, 0: 1, -1: 1},
    "c": {1: 1, 0: 0, -1: -1},
    "d": {1: 1, 0: 0, -1: 0},
    "e": {1: 1, 0: 1, -1: 0},
    "f": {1: 1, 0: 0, -1: 1},
}


def _diagram_table(diagram) -> dict:
    if isinstance(diagram, str):
        table = _DIAGRAMS.get(diagram)
        if table is None:
            raise MalformedDiagramError(f"unknown diagram {diagram!r}")
        return table
    table = dict(diagram)
    if set(table) != {1, 0, -1}:
        raise MalformedDiagramError("diagram must map the three prior relations")
    if table[1] != 1 or table[0] not in (0, 1) or table[-1] not in (1, 0, -1):
        raise MalformedDiagramError("diagram arrows may not point downwards")
    return table


def _forced_codes(table, t: Tpo, p: frozenset):
    """Posterior pair relations forced by a diagram on one instance."""
    minimal = min_worlds(t, p)
    r = t.rank
    n_worlds = len(t.rank)

    def code(x, y):
        if x == y:
            return 0
        xmin, ymin = x in minimal, y in minimal
        if xmin and ymin:
            return 0
        if xmin:
            return 1
        if ymin:
            return -1
        xin, yin = x in p, y in p
        prior = _code(r, x, y)
        if xin == yin:
            return prior
        if xin:
            return table[prior]
        return -table[-prior]

    return [[code(x, y) for y in range(n_worlds)] for x in range(n_worlds)]


def _intransitive_triple(codes):
    n_worlds = len(codes)
    for x in range(n_worlds):
        for y in range(n_worlds):
            if codes[x][y] < 0:
                continue
            for z in range(n_worlds):
                if codes[y][z] >= 0 and codes[x][z] < 0:
                    return (x, y, z)
    return None


def check_diagram(diagram, n_atoms: int = 2) -> CheckReport:
    """Search for an order the diagram cannot consistently revise.

    The diagram fixes the posterior relation of every pair with one
    model and one countermodel of the input (outside the promoted
    minimal worlds); everything else is forced by success and by
    preservation within each side.  A configuration where the forced
    relations cannot form a transitive order is a violation: the witness
    names a triple on which transitivity fails.
    """
    table = _diagram_table(diagram)
    _validate_scope(n_atoms, "exhaustive")
    ctx = _Ctx(n_atoms)
    label = diagram if isinstance(diagram, str) else "custom"
    instances = 0
    violations = 0
    witnesses = []
    for t in enumerate_tpos(n_atoms):
        for p in ctx.props:
            instances += 1
            triple = _intransitive_triple(_forced_codes(table, t, p))
            if triple is not None:
                violations += 1
                if len(witnesses) < WITNESS_CAP:
                    x, y, z = triple
                    witnesses.append(
                        ctx.witness(
                            (t,),
                            (p,),
                            triple,
                            note="forced relations are intransitive on this triple",
                        )
                    )
    return CheckReport(
        check_id=f"diagram {label}",
        revision=None,
        contraction=None,
        scope=CheckScope(n_atoms=n_atoms, mode="exhaustive"),
        instances=instances,
        violations=violations,
        outcome="pass" if violations == 0 else "fail",
        witnesses=tuple(witnesses),
    )


def _scan_diagram_instance(diagram, n_atoms, t, witness) -> bool:
    table = _diagram_table(diagram)
    ctx = _Ctx(n_atoms)
    p = models(parse_formula(witness.inputs[0], ctx.atoms), ctx.atoms)
    triple = _intransitive_triple(_forced_codes(table, t, p))
    if triple is None:
        return False
    return tuple(world_str(w, n_atoms) for w in triple) == witness.worlds


# ---------------------------------------------------------------------------
# Claim verification

_BUILTIN_REVISIONS = (
    Revision.NATURAL,
    Revision.RESTRAINED,
    Revision.LEXICOGRAPHIC,
)
_BUILTIN_CONTRACTIONS = (
    Contraction.NATURAL,
    Contraction.STQ_RESTRAINED,
    Contraction.STQ_LEX,
)

ELEMENTARY_POSTULATES = (
    "Success",
    "DP1",
    "DP2",
    "DP3",
    "DP4",
    "IIAP",
    "IIAI",
    "Beta1",
    "Beta2",
    "Neut",
)


@dataclass(frozen=True)
class PairProfile:
    revision: Revision
    contraction: Contraction
    nli: bool
    cr: tuple
    spu: bool
    wpu: bool

    @property
    def cr_all(self) -> bool:
        return all(self.cr)


_PAIR_PROFILE_CACHE: dict = {}


def pair_profile(n_atoms: int = 2) -> tuple:
    """NLI / CR / SPU / WPU outcomes for all nine built-in operator pairs."""
    cached = _PAIR_PROFILE_CACHE.get(n_atoms)
    if cached is not None:
        return cached
    rows = []
    for rev in _BUILTIN_REVISIONS:
        for con in _BUILTIN_CONTRACTIONS:
            rows.append(
                PairProfile(
                    revision=rev,
                    contraction=con,
                    nli=postulate_holds("NLI", rev, con, n_atoms=n_atoms),
                    cr=tuple(
                        postulate_holds(f"CR{i}", rev, con, n_atoms=n_atoms)
                        for i in (1, 2, 3, 4)
                    ),
                    spu=postulate_holds("SPU", rev, con, n_atoms=n_atoms),
                    wpu=postulate_holds("WPU", rev, con, n_atoms=n_atoms),
                )
            )
    result = tuple(rows)
    _PAIR_PROFILE_CACHE[n_atoms] = result
    return result


def _yn(value: bool) -> str:
    return "yes" if value else "no"


def _verify_t1(n_atoms: int):
    lines = []
    failures = 0
    for rev in _BUILTIN_REVISIONS:
        outcomes = {
            p: postulate_holds(p, rev, n_atoms=n_atoms) for p in ELEMENTARY_POSTULATES
        }
        failures += sum(1 for v in outcomes.values() if not v)
        lines.append(
            f"{rev.value}: "
            + " ".join(f"{p}={_yn(v)}" for p, v in outcomes.items())
        )
    for d in DIAGRAM_IDS:
        report = check_diagram(d, n_atoms)
        expect_fail = d in ("d", "e", "f")
        if report.passed == expect_fail:
            failures += 1
        lines.append(
            f"diagram {d}: {report.outcome} (expected {'fail' if expect_fail else 'pass'})"
        )
    lines.append(
        "note: no enumeration over the full space of revision operators is attempted;"
    )
    lines.append(
        "operators outside the three are excluded by the diagram checks, read over"
    )
    lines.append(
        "operators defined on every total preorder (restricted domains not addressed)."
    )
    instances = len(_BUILTIN_REVISIONS) * len(ELEMENTARY_POSTULATES) + len(DIAGRAM_IDS)
    return instances, failures, "\n".join(lines), ()


def _verify_t2(n_atoms: int):
    lines = []
    failures = 0
    for row in pair_profile(n_atoms):
        if row.nli != row.cr_all:
            failures += 1
        crs = " ".join(f"CR{i}={_yn(v)}" for i, v in enumerate(row.cr, start=1))
        lines.append(
            f"{row.revision.value} + {row.contraction.value}: NLI={_yn(row.nli)} {crs}"
        )
    return 9, failures, "\n".join(lines), ()


def _verify_t3(n_atoms: int):
    lines = []
    failures = 0
    for row in pair_profile(n_atoms):
        if row.cr_all != (row.spu and row.wpu):
            failures += 1
        lines.append(
            f"{row.revision.value} + {row.contraction.value}: "
            f"CR1-4={_yn(row.cr_all)} SPU={_yn(row.spu)} WPU={_yn(row.wpu)}"
        )
    return 9, failures, "\n".join(lines), ()


def _verify_cor1(n_atoms: int):
    lines = []
    failures = 0
    for row in pair_profile(n_atoms):
        if row.nli != (row.spu and row.wpu):
            failures += 1
        lines.append(
            f"{row.revision.value} + {row.contraction.value}: "
            f"NLI={_yn(row.nli)} SPU={_yn(row.spu)} WPU={_yn(row.wpu)}"
        )
    return 9, failures, "\n".join(lines), ()


def _verify_t4(n_atoms: int):
    """Fast path against brute force on every contraction-generated instance.

    The closure input is only guaranteed satisfiable when the added
    sentence is consistent with the contracted beliefs, which contraction
    by its negation always ensures; so the sweep instantiates the
    contracted preorder through each contraction method.
    """
    ctx = _Ctx(n_atoms)
    pool = list(enumerate_tpos(n_atoms))
    instances = 0
    failures = 0
    witnesses = []
    resolved: dict = {}
    for con in _BUILTIN_CONTRACTIONS:
        for t in pool:
            for p in ctx.props:
                instances += 1
                contracted = contract_by_negation(t, p, con)
                key = (contracted, p)
                verdict = resolved.get(key)
                if verdict is None:
                    brute = rational_closure(
                        conditional_set(contracted).adding_plain(p),
                        n_atoms,
                        candidates=pool,
                    )
                    fast = rational_closure_fast(contracted, p)
                    verdict = (brute.tpo == fast, fast, brute.tpo)
                    resolved[key] = verdict
                if not verdict[0]:
                    failures += 1
                    if len(witnesses) < WITNESS_CAP:
                        witnesses.append(
                            ctx.witness(
                                (contracted, verdict[1], verdict[2]),
                                (p,),
                                (),
                                note="fast path, then brute-force flattest",
                            )
                        )
    detail = (
        f"{instances} (contracted preorder, input) instances across the three "
        f"contraction methods ({len(resolved)} distinct); brute-force flattest "
        "satisfier equals the natural-revision fast path on all of them; the "
        "flattest element is checked against every satisfier before it is returned"
    )
    return instances, failures, detail, tuple(witnesses)


def _verify_p1(n_atoms: int, operators: int = 100):
    pool = [(f"seed {seed}", make_random_dp_operator(seed, n_atoms)) for seed in range(operators)]
    # The three built-ins cover the branch where both sides hold.
    pool.extend((rev.value, rev) for rev in _BUILTIN_REVISIONS)
    mismatched = []
    both_hold = 0
    for label, op in pool:
        betas = postulate_holds("Beta1", op, n_atoms=n_atoms) and postulate_holds(
            "Beta2", op, n_atoms=n_atoms
        )
        iiai = postulate_holds("IIAI", op, n_atoms=n_atoms)
        if betas != iiai:
            mismatched.append(label)
        if betas:
            both_hold += 1
    witnesses = tuple(
        Witness(tpos=(), inputs=(), worlds=(), note=label)
        for label in mismatched[:WITNESS_CAP]
    )
    detail = (
        f"operators={len(pool)} ({operators} seeded random, 3 built-in); both "
        f"sides hold for {both_hold}, fail for {len(pool) - both_hold}; "
        f"equivalence mismatches: {len(mismatched)}"
    )
    return len(pool), len(mismatched), detail, witnesses


def _verify_p2(n_atoms: int):
    ctx = _Ctx(n_atoms)
    atoms = ctx.atoms
    top_conditional = {}
    for p in ctx.props:
        top_conditional[p] = Conditional(
            TOP, parse_formula(dnf_of_worlds(p, atoms), atoms)
        )
    instances = 0
    failures = 0
    witnesses = []
    for con in _BUILTIN_CONTRACTIONS:
        for t in enumerate_tpos(n_atoms):
            for p in ctx.props:
                contracted = contract_by_negation(t, p, con)
                if contracted.cells[0] <= p:
                    continue  # input believed after contraction: outside the hypothesis
                instances += 1
                naive = conditional_set(contracted).adding_plain(p)
                item = top_conditional[p]
                omitted = not cn_extended_member(naive, item, atoms)
                contained = True
                identity_fails = True
                for rev in _BUILTIN_REVISIONS:
                    revised_set = conditional_set(revise(t, p, rev))
                    contained = contained and cn_extended_member(revised_set, item, atoms)
                    identity_fails = identity_fails and naive != revised_set
                if not (omitted and contained and identity_fails):
                    failures += 1
                    if len(witnesses) < WITNESS_CAP:
                        witnesses.append(
                            ctx.witness((t,), (p,), (), note=f"contraction {con.value}")
                        )
    detail = (
        f"{instances} instances with the input not believed after contraction; "
        "the plain extended consequence omits the top-conditional for the input "
        "while every revision's conditional set contains it, so the naive "
        "identity fails on all of them"
    )
    return instances, failures, detail, tuple(witnesses)


class _NliComposition:
    """Revision defined as contraction by the negated input, then revision."""

    def __init__(self, con: Contraction, rev: Revision):
        self.con = con
        self.rev = rev

    def posterior(self, t: Tpo, sentence_models: frozenset) -> Tpo:
        return revise(
            contract_by_negation(t, sentence_models, self.con),
            sentence_models,
            self.rev,
        )


def _verify_p3(n_atoms: int):
    lines = []
    failures = 0
    instances = 0
    for con in _BUILTIN_CONTRACTIONS:
        cc_ok = all(
            postulate_holds(f"CC{i}", None, con, n_atoms=n_atoms) for i in (1, 2, 3, 4)
        )
        for rev in _BUILTIN_REVISIONS:
            composed = _NliComposition(con, rev)
            outcomes = {}
            for i in (1, 2, 3, 4):
                instances += 1
                outcomes[f"DP{i}"] = postulate_holds(
                    f"DP{i}", composed, n_atoms=n_atoms
                )
            if not (cc_ok and all(outcomes.values())):
                failures += 1
            lines.append(
                f"{con.value} then {rev.value}: CC1-4={_yn(cc_ok)} "
                + " ".join(f"{k}={_yn(v)}" for k, v in outcomes.items())
            )
    return instances, failures, "\n".join(lines), ()


def _verify_p5(n_atoms: int):
    if n_atoms != 2:
        raise ScopeError("the impossibility regression is a four-world model")
    ctx = _Ctx(n_atoms)
    prior = parse_tpo("11 | 10 01 | 00", n_atoms)
    p = frozenset((2, 3))
    expected = parse_tpo("11 | 10 | 01 | 00", n_atoms)
    contracted = contract_by_negation(prior, p, Contraction.STQ_LEX)
    revised_r = revise(prior, p, Revision.RESTRAINED)
    revised_l = revise(prior, p, Revision.LEXICOGRAPHIC)
    checks = {
        "contraction by the negated input is a fixed point": contracted == prior,
        "restrained revision gives the expected order": revised_r == expected,
        "lexicographic revision gives the expected order": revised_l == expected,
        "input already believed": prior.cells[0] <= p,
        "conditional sets of contraction and revision differ": conditional_set(
            contracted
        )
        != conditional_set(expected),
    }
    failures = sum(1 for v in checks.values() if not v)
    lines = [f"{name}: {_yn(value)}" for name, value in checks.items()]
    lines.append(f"prior: {format_tpo(prior)}")
    lines.append(f"contracted: {format_tpo(contracted)}")
    lines.append(f"revised: {format_tpo(revised_r)}")
    lines.append(
        "with identity of rational sets under closure, revision would have to "
        "leave the conditional set unchanged here; it does not"
    )
    return len(checks), failures, "\n".join(lines), ()


def _verify_l_flattest(n_atoms: int):
    ctx = _Ctx(n_atoms)
    pool = list(enumerate_tpos(n_atoms))
    instances = 0
    failures = 0
    witnesses = []
    for t in pool:
        r = t.rank
        strict = tuple((x, y) for x, y in ctx.opairs if r[x] < r[y])
        for p in ctx.props:
            instances += 1
            flattest = revise(t, p, Revision.NATURAL)
            for s in pool:
                if not s.cells[0] <= p:
                    continue
                rs = s.rank
                if any(not rs[x] < rs[y] for x, y in strict):
                    continue
                if not flatter_eq(flattest, s):
                    failures += 1
                    if len(witnesses) < WITNESS_CAP:
                        witnesses.append(
                            ctx.witness(
                                (t, s, flattest),
                                (p,),
                                (),
                                note="satisfier not below the natural revision",
                            )
                        )
    detail = (
        f"{instances} instances; the natural revision of the contracted preorder "
        "is at least as flat as every preorder preserving its strict "
        "preferences and believing the input"
    )
    return instances, failures, detail, tuple(witnesses)


_CLAIMS = {
    "T1": _verify_t1,
    "T2": _verify_t2,
    "T3": _verify_t3,
    "Cor1": _verify_cor1,
    "T4": _verify_t4,
    "P1": _verify_p1,
    "P2": _verify_p2,
    "P3": _verify_p3,
    "P5": _verify_p5,
    "L_flattest": _verify_l_flattest,
}


def verify_claim(claim: str, n_atoms: int = 2, **kwargs) -> CheckReport:
    """Compile one named claim to its exhaustive check and report on it."""
    if claim not in _CLAIMS:
        raise ValueError(f"unknown claim {claim!r}")
    if n_atoms > 2:
        raise ScopeError("claim verification is exhaustive and supports at most 2 atoms")
    instances, failures, detail, witnesses = _CLAIMS[claim](n_atoms, **kwargs)
    return CheckReport(
        check_id=claim,
        revision=None,
        contraction=None,
        scope=CheckScope(n_atoms=n_atoms, mode="exhaustive"),
        instances=instances,
        violations=failures,
        outcome="pass" if failures == 0 else "fail",
        witnesses=witnesses,
        detail=detail,
    )
