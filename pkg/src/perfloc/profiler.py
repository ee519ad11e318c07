"""Statement execution counting and the profiling-based ranking.

A statement's count is the number of times it begins executing, summed over
the whole suite. Every other node inherits the count of its nearest enclosing
statement; a function declaration inherits its body's count. Scores are the
counts normalised by the total over statements, so profiler scores over
statements sum to 1.

Profiling costs one evaluation of the suite, regardless of program size.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lang.ast import Program, STATEMENT_KINDS, KIND_FUNCTION
from .lang.check import static_check
from .runtime import engine_py
from .runtime.exec import (
    TestCase, BaselineDiverged, BOOTSTRAP_LIMIT, entry_index, pack_array,
)
from .runtime.ir import build_ir
from .scores import NodeScore, AnalysisCost, SOURCE_PROFILER


@dataclass(frozen=True)
class ProfileReport:
    counts: dict[int, int]
    node_scores: dict[int, Fraction]
    total: int


def profile(program: Program, suite: Sequence[TestCase]) -> ProfileReport:
    violations = static_check(program)
    if violations:
        raise ValueError(f"program does not compile: {violations[0]}")
    ir = build_ir(program)
    entry = entry_index(ir)
    tally = [0] * len(program.nodes)
    for test in suite:
        heap = list(test.input_array)
        args = [pack_array(0, len(heap))] + list(test.extra_args)
        counts = [0] * len(program.nodes)
        status, _, _ = engine_py.run(ir, entry, args, heap, BOOTSTRAP_LIMIT,
                                     counts=counts)
        if status != 0:
            raise BaselineDiverged(f"original program failed on test {test}")
        if tuple(heap[:len(test.input_array)]) != test.expected_output:
            raise BaselineDiverged(f"original program incorrect on {test}")
        for i, c in enumerate(counts):
            tally[i] += c

    counts_map = {n.node_id: tally[n.node_id] for n in program.nodes
                  if n.kind in STATEMENT_KINDS}
    total = sum(counts_map.values())

    node_scores: dict[int, Fraction] = {}

    def spread(node, inherited):
        if node.kind in STATEMENT_KINDS:
            inherited = Fraction(counts_map[node.node_id], total) if total \
                else Fraction(0)
        node_scores[node.node_id] = inherited
        for c in node.children:
            spread(c, inherited)

    for func in program.functions:
        body = func.children[0]
        body_score = Fraction(counts_map[body.node_id], total) if total \
            else Fraction(0)
        node_scores[func.node_id] = body_score
        spread(body, body_score)

    return ProfileReport(counts_map, node_scores, total)


def inherited_count(program: Program, report: ProfileReport,
                    node_id: int) -> int:
    """Raw count a node inherits (its enclosing statement's; functions take
    their body's)."""
    node = program.nodes[node_id]
    if node.kind == KIND_FUNCTION:
        return report.counts[node.children[0].node_id]
    while node.kind not in STATEMENT_KINDS:
        node = program.parent(node.node_id)
    return report.counts[node.node_id]


def profile_scores(program: Program, report: ProfileReport
                   ) -> dict[int, NodeScore]:
    return {
        node_id: NodeScore(node=node_id, value=score, n_reduced=0,
                           n_compiled=0, source=SOURCE_PROFILER)
        for node_id, score in report.node_scores.items()
    }


def profile_cost() -> AnalysisCost:
    return AnalysisCost(variants_generated=0, compiled=0, executed=0,
                        evaluations=1)
