"""Benchmark problems: loading, improvement-node annotation, suite
generation, and validation.

A problem directory holds ``original.mini``, one or more ``improved-*.mini``
variants, ``problem.json`` (name, notes, designated improved version,
documented improvement percentage) and a generated ``suite.json``.

Improvement nodes come from an AST diff of the original against the
designated improved version: the two trees are aligned top-down and the
smallest set of original nodes that cannot be matched is flagged. The
aligner knows four moves per node pair: match (same kind and payload,
children aligned as sequences), unwrap-original (the improved version
dropped a wrapper; the wrapper and its non-surviving children are flagged),
unwrap-improved (the improved version added a wrapper around existing code;
the wrapped original node is flagged), and give-up (flag the whole original
subtree). Sequence alignment may also drop original statements (flagging
their subtrees) or absorb inserted improved statements (flagging the parent,
since an insertion has no original node of its own). Ties prefer moves in
the order just given, so the result is deterministic.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .lang.ast import AstNode, Program
from .lang.check import static_check
from .lang.parser import ParseError, parse_program
from .runtime.exec import (
    TestCase, baseline_limits, compile_program, run_suite, BaselineDiverged,
)

DEFAULT_SEED = 20220822
CORPUS_VERSION = "1"
SIZES = tuple(range(1, 11))
ORDERINGS = ("sorted", "reverse", "random")
VALUE_RANGE = 100

PROBLEM_NAMES = (
    "insertion", "bubble", "bubble_loops", "selection", "selection2",
    "shell", "radix", "quick", "cocktail", "merge", "heap",
)


class CorpusInvalid(Exception):
    def __init__(self, failures: list[str]):
        self.failures = failures
        super().__init__("; ".join(failures))


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    original: Program
    improved: tuple[Program, ...]
    designated: int                     # index into improved
    annotation: frozenset[int]
    suite: tuple[TestCase, ...]
    notes: str
    improvement_pct: Optional[float]    # documentation only


# test generation ----------------------------------------------------------

def generate_tests(seed: int = DEFAULT_SEED) -> list[TestCase]:
    """One sorted, one reverse-sorted and one random array per size 1..10.
    Expected outputs come from the host sort, never from a corpus program."""
    rng = random.Random(seed)
    tests = []
    for size in SIZES:
        values = [rng.randrange(VALUE_RANGE) for _ in range(size)]
        for ordering in ORDERINGS:
            if ordering == "sorted":
                arr = sorted(values)
            elif ordering == "reverse":
                arr = sorted(values, reverse=True)
            else:
                arr = [rng.randrange(VALUE_RANGE) for _ in range(size)]
            tests.append(TestCase(tuple(arr), (size,), tuple(sorted(arr))))
    return tests


def suite_to_json(suite: Sequence[TestCase]) -> str:
    rows = [{"input": list(t.input_array), "args": list(t.extra_args),
             "expected": list(t.expected_output)} for t in suite]
    return json.dumps(rows, indent=1) + "\n"


def suite_from_json(text: str) -> list[TestCase]:
    return [TestCase(tuple(row["input"]), tuple(row["args"]),
                     tuple(row["expected"]))
            for row in json.loads(text)]


# AST diff -----------------------------------------------------------------

def _subtree_ids(node: AstNode) -> frozenset[int]:
    return frozenset(n.node_id for n in node.walk())


def _better(a, b):
    """Smaller flag set wins; exact content breaks ties deterministically."""
    if a is None:
        return b
    if b is None:
        return a
    ka = (len(a), tuple(sorted(a)))
    kb = (len(b), tuple(sorted(b)))
    return a if ka <= kb else b


def diff_improvement_nodes(original: Program,
                           improved: Program) -> frozenset[int]:
    memo: dict[tuple[int, int], frozenset[int]] = {}
    seq_memo: dict[tuple, frozenset[int]] = {}

    def align(o: AstNode, m: AstNode) -> frozenset[int]:
        key = (o.node_id, m.node_id)
        if key in memo:
            return memo[key]
        # keep recursion well-founded before taking any recursive option
        memo[key] = _subtree_ids(o)
        best = None
        if o.kind == m.kind and o.payload() == m.payload():
            best = _better(best, align_seq(o.children, m.children, o))
        for child in o.children:
            dropped = _subtree_ids(o) - _subtree_ids(child)
            best = _better(best, dropped | align(child, m))
        for child in m.children:
            best = _better(best, frozenset((o.node_id,)) | align(o, child))
        best = _better(best, _subtree_ids(o))
        memo[key] = best
        return best

    def align_seq(os: list[AstNode], ms: list[AstNode],
                  parent: AstNode) -> frozenset[int]:
        key = (parent.node_id, tuple(n.node_id for n in os),
               tuple(n.node_id for n in ms))
        if key in seq_memo:
            return seq_memo[key]
        if not os and not ms:
            result = frozenset()
        elif not os:
            result = frozenset((parent.node_id,))
        elif not ms:
            result = frozenset().union(*(_subtree_ids(n) for n in os))
        else:
            result = _better(
                _better(align(os[0], ms[0]) | align_seq(os[1:], ms[1:],
                                                        parent),
                        _subtree_ids(os[0]) | align_seq(os[1:], ms, parent)),
                frozenset((parent.node_id,)) | align_seq(os, ms[1:], parent))
        seq_memo[key] = result
        return result

    flags: frozenset[int] = frozenset()
    n_funcs = max(len(original.functions), len(improved.functions))
    for i in range(n_funcs):
        if i >= len(improved.functions):
            flags |= _subtree_ids(original.functions[i])
        elif i < len(original.functions):
            flags |= align(original.functions[i], improved.functions[i])
    return flags


# loading and validation ---------------------------------------------------

def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def load_problem(directory: str) -> ProblemSpec:
    meta = json.loads(_read(os.path.join(directory, "problem.json")))
    original = parse_program(_read(os.path.join(directory, "original.mini")))
    improved_names = sorted(
        f for f in os.listdir(directory)
        if f.startswith("improved-") and f.endswith(".mini"))
    if not improved_names:
        raise CorpusInvalid([f"{directory}: no improved versions"])
    improved = tuple(parse_program(_read(os.path.join(directory, f)))
                     for f in improved_names)
    designated_name = meta.get("improved", improved_names[0])
    if designated_name not in improved_names:
        raise CorpusInvalid(
            [f"{directory}: designated version {designated_name} missing"])
    designated = improved_names.index(designated_name)
    suite = tuple(suite_from_json(
        _read(os.path.join(directory, "suite.json"))))
    annotation = diff_improvement_nodes(original, improved[designated])
    pct = meta.get("improvement_pct")
    return ProblemSpec(
        name=meta["name"], original=original, improved=improved,
        designated=designated, annotation=frozenset(annotation),
        suite=suite, notes=meta.get("notes", ""),
        improvement_pct=pct)


def problem_dirs(corpus_dir: str) -> list[str]:
    return sorted(
        os.path.join(corpus_dir, d) for d in os.listdir(corpus_dir)
        if os.path.isdir(os.path.join(corpus_dir, d))
        and os.path.exists(os.path.join(corpus_dir, d, "problem.json")))


def measured_improvement(problem: ProblemSpec) -> tuple[Fraction, int, int]:
    """(fractional saving, original cost, designated improved cost)."""
    ir = compile_program(problem.original)
    limits, base = baseline_limits(ir, problem.suite)
    improved_ir = compile_program(problem.improved[problem.designated])
    result = run_suite(improved_ir, problem.suite, limits)
    saving = Fraction(base.total_cost - result.total_cost, base.total_cost)
    return saving, base.total_cost, result.total_cost


def validate_problem(directory: str) -> list[str]:
    failures = []
    try:
        problem = load_problem(directory)
    except (OSError, KeyError, json.JSONDecodeError, ParseError) as exc:
        return [f"{directory}: unreadable ({exc})"]
    except CorpusInvalid as exc:
        return exc.failures
    name = problem.name
    if static_check(problem.original):
        failures.append(f"{name}: original does not compile")
        return failures
    for i, imp in enumerate(problem.improved):
        if static_check(imp):
            failures.append(f"{name}: improved version {i} does not compile")
    if failures:
        return failures
    for test in problem.suite:
        if tuple(sorted(test.input_array)) != test.expected_output:
            failures.append(f"{name}: suite expectation is not sorted input")
            break
    try:
        ir = compile_program(problem.original)
        limits, base = baseline_limits(ir, problem.suite)
    except BaselineDiverged as exc:
        failures.append(f"{name}: original fails its suite ({exc})")
        return failures
    for i, imp in enumerate(problem.improved):
        result = run_suite(compile_program(imp), problem.suite, limits)
        if result.correctness != 1:
            failures.append(
                f"{name}: improved version {i} correctness "
                f"{result.correctness}")
        if result.total_cost >= base.total_cost:
            failures.append(
                f"{name}: improved version {i} cost {result.total_cost} "
                f"not below original {base.total_cost}")
    if not problem.annotation:
        failures.append(f"{name}: empty improvement annotation")
    n_nodes = len(problem.original.nodes)
    for node in problem.annotation:
        if not 0 <= node < n_nodes:
            failures.append(f"{name}: annotation node {node} out of range")
    return failures


def validate_corpus(corpus_dir: str) -> dict[str, list[str]]:
    """Per-problem failure lists; raises CorpusInvalid if any are non-empty
    or the corpus directory has no problems."""
    dirs = problem_dirs(corpus_dir)
    if not dirs:
        raise CorpusInvalid([f"{corpus_dir}: no problems found"])
    report = {}
    failures = []
    for d in dirs:
        problems = validate_problem(d)
        report[os.path.basename(d)] = problems
        failures.extend(problems)
    if failures:
        raise CorpusInvalid(failures)
    return report
