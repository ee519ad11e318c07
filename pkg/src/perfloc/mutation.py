"""Deletion analysis, exhaustive first-order mutation, the combined
technique, and the seven-way variant classifier.

Scoring model:

- Deletion: each statement, outermost first, is removed (a function body is
  emptied instead, since it cannot be detached); if the remainder compiles,
  the relative cost saving (cost(p) - cost(p-s)) / cost(p), floored at zero,
  is written onto every node of the removed subtree. Deeper statements then
  overwrite their own subtrees, so values accumulate outward. A statement
  whose removal does not compile keeps whatever its nearest scored ancestor
  gave it. Runs that hang or crash carry no usable cost, so such removals
  measure zero; and because removing a statement also removes everything
  below it, every statement's saving is folded up to at least the maximum
  over its descendants, keeping savings cumulative toward the root even
  when a removal degrades the control flow.
- Exhaustive: every node is a target; donors are every other same-category
  subtree occurring in the program (deduplicated structurally, first
  occurrence in id order) plus, for operator slots, every language operator
  of the same arity. A node's value is n_reduced / n_compiled, where
  n_reduced counts compiled variants that cost less than the original.
  Variants that are both fully correct and cheaper are genuine improvements
  rather than hints: they stay in n_compiled but are excluded from n_reduced
  unless ``include_correct`` is set, and are reported separately.
- Combined: exhaustive, except nodes with no compilable variant take their
  deletion value (gap_filled).

Variant evaluation is a pure function of (program, descriptor, suite), so
the work can be farmed to processes; results are merged in descriptor order
and every output is byte-identical for any job count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .lang.ast import (
    AstNode, Program, CATEGORY, STATEMENT_KINDS,
    CAT_EXPRESSION, CAT_OPERATOR, CAT_STATEMENT,
    KIND_BLOCK, KIND_BINARY, KIND_UNARY, KIND_INCDEC, KIND_OPERATOR,
    BINARY_OPS, UNARY_OPS, INCDEC_OPS,
    structurally_equal,
)
from .lang.check import static_check
from .lang.edit import (
    statement_nodes, delete_statement, empty_function_body, replace_node,
)
from .lang.parser import parse_program
from .lang.printer import render_program, render_snippet
from .runtime.exec import (
    TestCase, SuiteResult, baseline_limits, run_suite, compile_program,
    DEFAULT_TIMEOUT_FACTOR,
)
from .scores import (
    NodeScore, AnalysisCost, SOURCE_DELETION, SOURCE_EXHAUSTIVE,
    SOURCE_COMBINED,
)

CLASS_NOT_COMPILABLE = "NotCompilable"
CLASS_INFINITE_LOOP = "InfiniteLoop"
CLASS_RUNTIME_ERROR = "RuntimeErrorDiffers"
CLASS_DEGRADED = "FunctionallyDegraded"
CLASS_MORE_EXPENSIVE = "MoreExpensive"
CLASS_IDENTICAL = "Identical"
CLASS_LESS_EXPENSIVE = "LessExpensive"

ALL_CLASSES = (CLASS_NOT_COMPILABLE, CLASS_INFINITE_LOOP, CLASS_RUNTIME_ERROR,
               CLASS_DEGRADED, CLASS_MORE_EXPENSIVE, CLASS_IDENTICAL,
               CLASS_LESS_EXPENSIVE)

DELETE_LABEL = "<delete>"


@dataclass(frozen=True)
class MutationDescriptor:
    kind: str                      # "Delete" or "Replace"
    target: int
    donor: Optional[AstNode]       # None for deletions
    donor_label: str


@dataclass(frozen=True)
class VariantRecord:
    """One row of the variant log."""
    target: int
    donor_label: str
    classification: str
    cost: Optional[int]
    correctness: Optional[Fraction]
    reduced: bool
    direct_improvement: bool


@dataclass(frozen=True)
class AnalysisResult:
    scores: dict[int, NodeScore]
    variants: tuple[VariantRecord, ...]
    cost: AnalysisCost
    original: SuiteResult


def classify_variant(original: SuiteResult, outcome: Optional[SuiteResult],
                     compiled: bool) -> str:
    if not compiled:
        return CLASS_NOT_COMPILABLE
    if any(o.status == "Timeout" for o in outcome.per_test):
        return CLASS_INFINITE_LOOP
    if any(o.status == "RuntimeError" for o in outcome.per_test):
        return CLASS_RUNTIME_ERROR
    if outcome.total_cost < original.total_cost:
        return CLASS_LESS_EXPENSIVE
    if outcome.correctness < original.correctness:
        return CLASS_DEGRADED
    if outcome.total_cost > original.total_cost:
        return CLASS_MORE_EXPENSIVE
    return CLASS_IDENTICAL


# donor inventory ----------------------------------------------------------

def _distinct_structures(nodes) -> list[AstNode]:
    seen: list[AstNode] = []
    by_hash: dict[int, list[AstNode]] = {}
    for n in nodes:
        h = n.structural_hash()
        bucket = by_hash.setdefault(h, [])
        if not any(structurally_equal(n, other) for other in bucket):
            bucket.append(n)
            seen.append(n)
    return seen


def _inventory(program: Program):
    exprs = _distinct_structures(
        n for n in program.nodes if CATEGORY[n.kind] == CAT_EXPRESSION)
    stmts = _distinct_structures(
        n for n in program.nodes
        if CATEGORY[n.kind] == CAT_STATEMENT and n.kind != KIND_BLOCK)
    return exprs, stmts


def generate_replacements(program: Program,
                          target_id: int) -> list[MutationDescriptor]:
    exprs, stmts = _inventory(program)
    return _replacements_from_inventory(program, target_id, exprs, stmts)


def _replacements_from_inventory(program, target_id, exprs, stmts):
    target = program.nodes[target_id]
    category = CATEGORY[target.kind]
    out: list[MutationDescriptor] = []
    if category == CAT_OPERATOR:
        parent = program.parent(target_id)
        if parent.kind == KIND_BINARY:
            symbols = BINARY_OPS
        elif parent.kind == KIND_UNARY:
            symbols = UNARY_OPS
        elif parent.kind == KIND_INCDEC:
            symbols = INCDEC_OPS
        else:
            symbols = ()
        for sym in symbols:
            if sym != target.op:
                donor = AstNode(KIND_OPERATOR, op=sym)
                out.append(MutationDescriptor("Replace", target_id, donor,
                                              sym))
        return out
    if category == CAT_EXPRESSION:
        pool = exprs
    elif category == CAT_STATEMENT and target.kind != KIND_BLOCK:
        pool = stmts
    else:
        # Function bodies and declarations have no donor pool; their value
        # comes from gap filling.
        return []
    for donor in pool:
        if not structurally_equal(donor, target):
            out.append(MutationDescriptor("Replace", target_id, donor,
                                          render_snippet(donor)))
    return out


# deletion -----------------------------------------------------------------

def deletion_analysis(program: Program, suite: Sequence[TestCase],
                      factor: float = DEFAULT_TIMEOUT_FACTOR
                      ) -> AnalysisResult:
    ir = compile_program(program)
    limits, original = baseline_limits(ir, suite, factor)
    total = original.total_cost

    variants: list[VariantRecord] = []
    executed = 0
    body_ids = program.body_block_ids()
    savings: dict[int, Fraction] = {}

    for stmt in statement_nodes(program):
        sid = stmt.node_id
        if stmt.kind == KIND_BLOCK:
            if sid not in body_ids:
                continue
            mutated, _, _ = empty_function_body(program, sid)
        else:
            mutated, _, _ = delete_statement(program, sid)
        if static_check(mutated):
            variants.append(VariantRecord(sid, DELETE_LABEL,
                                          CLASS_NOT_COMPILABLE, None, None,
                                          False, False))
            continue
        executed += 1
        outcome = run_suite(compile_program(mutated), suite, limits)
        klass = classify_variant(original, outcome, True)
        # hung and crashed runs have no comparable cost to subtract
        saved = Fraction(0)
        if total and klass not in (CLASS_INFINITE_LOOP, CLASS_RUNTIME_ERROR):
            saved = max(Fraction(0),
                        Fraction(total - outcome.total_cost, total))
        savings[sid] = saved
        variants.append(VariantRecord(
            sid, DELETE_LABEL, klass, outcome.total_cost,
            outcome.correctness, outcome.total_cost < total, False))

    # removing a statement removes everything below it, so fold each
    # saving into the nearest measured ancestor, deepest first
    for sid in sorted(savings, reverse=True):
        node = program.parent(sid)
        while node is not None and node.node_id not in savings:
            node = program.parent(node.node_id)
        if node is not None:
            savings[node.node_id] = max(savings[node.node_id], savings[sid])

    values: dict[int, Fraction] = {n.node_id: Fraction(0)
                                   for n in program.nodes}
    for sid in sorted(savings):
        saved = savings[sid]
        for n in program.nodes[sid].walk():
            values[n.node_id] = saved
        parent = program.parent(sid)
        if parent is not None and sid in body_ids:
            values[parent.node_id] = saved

    scores = {i: NodeScore(node=i, value=v, n_reduced=0, n_compiled=0,
                           source=SOURCE_DELETION)
              for i, v in values.items()}
    n_stmts = len(statement_nodes(program))
    cost = AnalysisCost(variants_generated=n_stmts, compiled=executed,
                        executed=executed, evaluations=executed)
    return AnalysisResult(scores, tuple(variants), cost, original)


# exhaustive ---------------------------------------------------------------

_WORKER_STATE: dict = {}


def _worker_init(source, suite, limits, orig_cost, corr_num, corr_den):
    program = parse_program(source)
    _WORKER_STATE["program"] = program
    _WORKER_STATE["suite"] = suite
    _WORKER_STATE["limits"] = limits
    _WORKER_STATE["original"] = SuiteResult(
        orig_cost, Fraction(corr_num, corr_den), ())


def _evaluate_spec(task):
    """task = (target, donor_idx, spec); spec = ("op", symbol) or
    ("node", source id). Returns a plain-value result row."""
    target, donor_idx, spec = task
    program = _WORKER_STATE["program"]
    suite = _WORKER_STATE["suite"]
    limits = _WORKER_STATE["limits"]
    original = _WORKER_STATE["original"]
    if spec[0] == "op":
        donor = AstNode(KIND_OPERATOR, op=spec[1])
    else:
        donor = program.nodes[spec[1]]
    mutated = replace_node(program, target, donor)
    if static_check(mutated):
        return (target, donor_idx, False, CLASS_NOT_COMPILABLE, 0, 0, 1)
    outcome = run_suite(compile_program(mutated), suite, limits)
    klass = classify_variant(original, outcome, True)
    return (target, donor_idx, True, klass, outcome.total_cost,
            outcome.correctness.numerator, outcome.correctness.denominator)


def _descriptor_spec(descriptor: MutationDescriptor,
                     program: Program) -> tuple:
    donor = descriptor.donor
    if donor.kind == KIND_OPERATOR:
        return ("op", donor.op)
    # Tree donors come from the program itself, so shipping the node id is
    # enough; workers re-parse the source and look the subtree up.
    if donor.node_id >= 0 and program.nodes[donor.node_id] is donor:
        return ("node", donor.node_id)
    for n in program.nodes:
        if n.kind == donor.kind and structurally_equal(n, donor):
            return ("node", n.node_id)
    raise AssertionError("donor does not occur in the program")


def exhaustive_analysis(program: Program, suite: Sequence[TestCase],
                        factor: float = DEFAULT_TIMEOUT_FACTOR,
                        include_correct: bool = False,
                        jobs: int = 1) -> AnalysisResult:
    ir = compile_program(program)
    limits, original = baseline_limits(ir, suite, factor)

    exprs, stmts = _inventory(program)
    per_target: list[list[MutationDescriptor]] = []
    tasks = []
    for node in program.nodes:
        descs = _replacements_from_inventory(program, node.node_id, exprs,
                                             stmts)
        per_target.append(descs)
        for idx, d in enumerate(descs):
            tasks.append((node.node_id, idx, _descriptor_spec(d, program)))

    init_args = (render_program(program), tuple(suite), tuple(limits),
                 original.total_cost, original.correctness.numerator,
                 original.correctness.denominator)
    results: dict[tuple[int, int], tuple] = {}
    if jobs <= 1:
        _worker_init(*init_args)
        for task in tasks:
            row = _evaluate_spec(task)
            results[(row[0], row[1])] = row
        _WORKER_STATE.clear()
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                 initargs=init_args) as pool:
            for row in pool.map(_evaluate_spec, tasks, chunksize=32):
                results[(row[0], row[1])] = row

    scores: dict[int, NodeScore] = {}
    variants: list[VariantRecord] = []
    n_generated = 0
    n_compiled_total = 0
    for node in program.nodes:
        nid = node.node_id
        descs = per_target[nid]
        n_generated += len(descs)
        n_compiled = 0
        n_reduced = 0
        for idx, d in enumerate(descs):
            row = results[(nid, idx)]
            _, _, compiled, klass, cost, cnum, cden = row
            if not compiled:
                variants.append(VariantRecord(nid, d.donor_label, klass,
                                              None, None, False, False))
                continue
            n_compiled += 1
            n_compiled_total += 1
            correctness = Fraction(cnum, cden)
            cheaper = cost < original.total_cost
            fully_correct = correctness == original.correctness
            direct = cheaper and fully_correct
            reduced = cheaper and (include_correct or not direct)
            if reduced:
                n_reduced += 1
            variants.append(VariantRecord(nid, d.donor_label, klass, cost,
                                          correctness, reduced, direct))
        value = Fraction(n_reduced, n_compiled) if n_compiled else Fraction(0)
        scores[nid] = NodeScore(node=nid, value=value, n_reduced=n_reduced,
                                n_compiled=n_compiled,
                                source=SOURCE_EXHAUSTIVE)

    cost = AnalysisCost(variants_generated=n_generated,
                        compiled=n_compiled_total,
                        executed=n_compiled_total,
                        evaluations=n_compiled_total)
    return AnalysisResult(scores, tuple(variants), cost, original)


# combined -----------------------------------------------------------------

def combined_analysis(program: Program, suite: Sequence[TestCase],
                      factor: float = DEFAULT_TIMEOUT_FACTOR,
                      include_correct: bool = False,
                      jobs: int = 1) -> tuple[AnalysisResult, AnalysisResult,
                                              AnalysisResult]:
    """Returns (combined, exhaustive, deletion); the latter two are the
    ingredient runs, exposed so reports need not recompute them."""
    exhaustive = exhaustive_analysis(program, suite, factor, include_correct,
                                     jobs)
    deletion = deletion_analysis(program, suite, factor)
    scores: dict[int, NodeScore] = {}
    for nid, score in exhaustive.scores.items():
        if score.n_compiled == 0:
            fill = deletion.scores[nid].value
            scores[nid] = NodeScore(node=nid, value=fill, n_reduced=0,
                                    n_compiled=0, source=SOURCE_COMBINED,
                                    gap_filled=True)
        else:
            scores[nid] = NodeScore(node=nid, value=score.value,
                                    n_reduced=score.n_reduced,
                                    n_compiled=score.n_compiled,
                                    source=SOURCE_COMBINED)
    cost = AnalysisCost(
        variants_generated=(exhaustive.cost.variants_generated
                            + deletion.cost.variants_generated),
        compiled=exhaustive.cost.compiled + deletion.cost.compiled,
        executed=exhaustive.cost.executed + deletion.cost.executed,
        evaluations=(exhaustive.cost.evaluations
                     + deletion.cost.evaluations),
    )
    combined = AnalysisResult(scores,
                              exhaustive.variants + deletion.variants, cost,
                              exhaustive.original)
    return combined, exhaustive, deletion


def direct_improvements(result: AnalysisResult) -> list[VariantRecord]:
    return [v for v in result.variants if v.direct_improvement]
