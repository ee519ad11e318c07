"""Interpreter tests: hand-traced step counts, error paths, int32 semantics,
suite aggregation, and bit-identical behaviour of the two engines.

Each step-count constant below was counted by hand from the cost rules
(+1 per statement entry, +1 per expression-node evaluation, operators and
binding occurrences free) before the first run, then frozen.
"""

import math

import pytest
from hypothesis import given, settings, strategies as st

from perfloc.lang.parser import parse_program
from perfloc.runtime import engine_py
from perfloc.runtime.exec import (
    BOOTSTRAP_LIMIT, BaselineDiverged, MIN_STEP_LIMIT,
    baseline_limits, compile_program, execute, run_suite,
)
from perfloc.runtime.exec import TestCase as Case

try:
    from perfloc.runtime import _engine
except ImportError:
    _engine = None


def ir_for(text: str):
    return compile_program(parse_program(text))


def run1(text: str, array, extra=(), limit=BOOTSTRAP_LIMIT, engine=None):
    test = Case(tuple(array), tuple(extra), tuple(sorted(array)))
    return execute(ir_for(text), test, limit, engine=engine)


# Hand-traces: program text, input array, extra args, expected steps,
# expected final array.
TRACES = [
    ("void sort(int[] a, int length) { }", (5,), (1,), 1, (5,)),
    ("void sort(int[] a, int length) { a[0] = 7; }", (5,), (1,), 6, (7,)),
    ("void sort(int[] a, int length) { int x = 3; a[0] = x; }",
     (9,), (1,), 8, (3,)),
    # && evaluates both sides here: 1 if + 1 cond + 3 lhs + 5 rhs + 1 &&.
    ("void sort(int[] a, int length) "
     "{ if (length > 0 && a[0] > 100) { a[0] = 1; } }",
     (50,), (1,), 11, (50,)),
    # short circuit: the right operand costs nothing.
    ("void sort(int[] a, int length) "
     "{ if (length < 0 && a[0] > 100) { a[0] = 1; } }",
     (50,), (1,), 6, (50,)),
    # while: 1 decl+init(2) + while(1) + 3 cond checks x3 + 2 body x2.
    ("void sort(int[] a, int length) { int i = 0;"
     " while (i < length) { i++; } }",
     (4, 3), (2,), 17, (4, 3)),
    # for: block 1, for 1, init 1, cond 3+3, body 5.
    ("void sort(int[] a, int length) "
     "{ for (int i = 0; i < length; i++) { a[0] = i; } }",
     (9,), (1,), 14, (0,)),
    # x++ yields the value before the update.
    ("void sort(int[] a, int length) { int x = 5; a[0] = x++; a[1] = x; }",
     (0, 0), (2,), 13, (5, 6)),
]


@pytest.mark.parametrize("text,arr,extra,steps,final", TRACES)
def test_hand_traced_step_counts(text, arr, extra, steps, final):
    out = run1(text, arr, extra)
    assert out.status == "Completed"
    assert out.steps == steps
    assert out.final_array == final
    assert out.error_kind is None


def test_timeout_steps_equal_the_limit_exactly():
    out = run1("void sort(int[] a, int length) { while (true) { } }",
               (1,), (1,), limit=1000)
    assert out.status == "Timeout"
    assert out.steps == 1000
    assert out.final_array is None


def test_timeout_fires_even_on_the_final_event():
    text = "void sort(int[] a, int length) { }"
    out = run1(text, (1,), (1,), limit=1)
    assert out.status == "Timeout" and out.steps == 1
    assert run1(text, (1,), (1,), limit=2).status == "Completed"


def test_index_out_of_bounds():
    out = run1("void sort(int[] a, int length) { a[length] = 0; }",
               (1,), (1,))
    assert out.status == "RuntimeError"
    assert out.error_kind == "IndexOutOfBounds"
    assert out.steps == 6  # all operands evaluate before the store checks
    assert out.final_array is None
    neg = run1("void sort(int[] a, int length) { a[0 - 1] = 0; }", (1,), (1,))
    assert neg.error_kind == "IndexOutOfBounds"


def test_divide_by_zero_and_modulo():
    out = run1("void sort(int[] a, int length) { a[0] = 1 / 0; }", (1,), (1,))
    assert (out.status, out.error_kind) == ("RuntimeError", "DivideByZero")
    out = run1("void sort(int[] a, int length) { a[0] = 1 % 0; }", (1,), (1,))
    assert out.error_kind == "DivideByZero"


def test_stack_overflow_on_unbounded_recursion():
    out = run1("void sort(int[] a, int length) { sort(a, length); }",
               (1,), (1,))
    assert (out.status, out.error_kind) == ("RuntimeError", "StackOverflow")


@pytest.mark.parametrize("expr,expected", [
    ("2147483647 + 1", -2147483648),
    ("(0 - 2147483647 - 1) - 1", 2147483647),
    ("(0 - 2147483647 - 1) / (0 - 1)", -2147483648),
    ("(0 - 2147483647 - 1) % (0 - 1)", 0),
    ("(0 - 7) / 2", -3),
    ("(0 - 7) % 2", -1),
    ("7 / 2", 3),
    ("7 % 2", 1),
    ("65536 * 65536", 0),
    ("1 + 2 * 3", 7),
])
def test_int32_arithmetic(expr, expected):
    out = run1(f"void sort(int[] a, int length) {{ a[0] = {expr}; }}",
               (0,), (1,))
    assert out.status == "Completed"
    # stored values are themselves int32
    assert out.final_array[0] == expected


def test_new_array_builtin_zero_fills():
    text = ("void sort(int[] a, int length) {"
            " int[] b = newArray(3); b[2] = 9;"
            " a[0] = b[0] + b[2]; }")
    out = run1(text, (1,), (1,))
    assert out.status == "Completed"
    assert out.final_array == (9,)


def test_new_array_negative_size_faults():
    out = run1("void sort(int[] a, int length) "
               "{ int[] b = newArray(0 - 1); a[0] = 0; }", (1,), (1,))
    assert out.error_kind == "IndexOutOfBounds"


def test_call_and_return_value():
    text = ("int twice(int x) { return x + x; }\n"
            "void sort(int[] a, int length) { a[0] = twice(21); }")
    out = run1(text, (0,), (1,))
    assert out.status == "Completed" and out.final_array == (42,)


def test_entry_is_the_sort_function_regardless_of_order():
    text = ("int helper(int x) { return x; }\n"
            "void sort(int[] a, int length) { a[0] = 5; }")
    out = run1(text, (0,), (1,))
    assert out.final_array == (5,)


def test_run_suite_aggregates_partial_costs():
    text = ("void sort(int[] a, int length) "
            "{ if (a[0] > 90) { while (true) { } } a[length] = 0; }")
    suite = [Case((99,), (1,), (99,)), Case((1,), (1,), (1,))]
    ir = ir_for(text)
    result = run_suite(ir, suite, [50, 50])
    assert [o.status for o in result.per_test] == ["Timeout", "RuntimeError"]
    assert result.total_cost == 50 + result.per_test[1].steps
    assert result.correctness == 0


def test_run_suite_identity_program_correctness():
    text = "void sort(int[] a, int length) { }"
    suite = [
        Case((1, 2), (2,), (1, 2)),   # already sorted: passes
        Case((2, 1), (2,), (1, 2)),   # needs work: fails
    ]
    result = run_suite(ir_for(text), suite, [100, 100])
    assert result.correctness == pytest.approx(0.5)
    assert result.total_cost == 2


def test_run_suite_empty_is_vacuously_correct():
    result = run_suite(ir_for("void sort(int[] a, int length) { }"), [], [])
    assert result.total_cost == 0 and result.correctness == 1


def test_baseline_limits_formula():
    # the trace above fixes this program's cost at 14 steps
    text = ("void sort(int[] a, int length) "
            "{ for (int i = 0; i < length; i++) { a[0] = i; } }")
    suite = [Case((9,), (1,), (0,))]
    limits, result = baseline_limits(ir_for(text), suite, 2.5)
    assert limits == [max(MIN_STEP_LIMIT, math.ceil(2.5 * 14))] == [100]
    assert result.total_cost == 14
    limits, _ = baseline_limits(ir_for(text), suite, 10.0)
    assert limits == [140]


def test_baseline_limits_rejects_diverging_original():
    bad = "void sort(int[] a, int length) { while (true) { } }"
    with pytest.raises(BaselineDiverged):
        baseline_limits(ir_for(bad), [Case((1,), (1,), (1,))], 2.5)
    wrong = "void sort(int[] a, int length) { a[0] = 0 - 1; }"
    with pytest.raises(BaselineDiverged):
        baseline_limits(ir_for(wrong), [Case((3,), (1,), (3,))], 2.5)


ENGINE_CASES = [
    (text, arr, extra) for text, arr, extra, _, _ in TRACES
] + [
    ("void sort(int[] a, int length) { while (true) { } }", (1,), (1,)),
    ("void sort(int[] a, int length) { a[length] = 0; }", (1,), (1,)),
    ("void sort(int[] a, int length) { a[0] = 1 / 0; }", (1,), (1,)),
    ("void sort(int[] a, int length) { sort(a, length); }", (1,), (1,)),
]


@pytest.mark.skipif(_engine is None, reason="compiled engine not built")
@pytest.mark.parametrize("text,arr,extra", ENGINE_CASES)
def test_engines_agree_everywhere(text, arr, extra):
    ir = ir_for(text)
    test = Case(tuple(arr), tuple(extra), tuple(sorted(arr)))
    for limit in (7, 1000):
        a = execute(ir, test, limit, engine=engine_py)
        b = execute(ir, test, limit, engine=_engine)
        assert a == b


@pytest.mark.skipif(_engine is None, reason="compiled engine not built")
@given(st.lists(st.integers(0, 99), min_size=1, max_size=10))
@settings(max_examples=40, deadline=None)
def test_engines_agree_on_bubble_sort_runs(values):
    from conftest import corpus_source
    ir = ir_for(corpus_source("bubble_loops"))
    test = Case(tuple(values), (len(values),), tuple(sorted(values)))
    a = execute(ir, test, BOOTSTRAP_LIMIT, engine=engine_py)
    b = execute(ir, test, BOOTSTRAP_LIMIT, engine=_engine)
    assert a == b
    assert a.status == "Completed"
    assert a.final_array == tuple(sorted(values))


@pytest.mark.skipif(_engine is None, reason="compiled engine not built")
def test_counting_runs_match_plain_runs():
    # Statement counting is an engine_py-only feature (the profiler's single
    # evaluation); it must not change what the run computes.
    from perfloc.runtime.exec import entry_index, pack_array
    from conftest import corpus_source
    ir = ir_for(corpus_source("bubble_loops"))
    results = []
    counts = [0] * len(ir.kind)
    for eng, kwargs in ((engine_py, {"counts": counts}),
                        (engine_py, {}), (_engine, {})):
        heap = [3, 1, 2]
        out = eng.run(ir, entry_index(ir), [pack_array(0, 3), 3], heap,
                      BOOTSTRAP_LIMIT, **kwargs)
        results.append((out, heap))
    assert results[0] == results[1] == results[2]
    assert counts[1] == 1  # the body block ran once
    assert sum(counts) > 0


def test_execution_is_deterministic():
    text = ("void sort(int[] a, int length) "
            "{ for (int i = 0; i < length; i++) { a[i] = a[i] * 3 % 7; } }")
    ir = ir_for(text)
    test = Case((5, 6, 2), (3,), (0, 0, 0))
    outs = {execute(ir, test, 10_000) for _ in range(3)}
    assert len(outs) == 1
