"""Parser, printer, static checker and tree-surgery tests."""

import pytest

from perfloc.lang.ast import (
    CATEGORY, CAT_DECLARATION, CAT_EXPRESSION, CAT_OPERATOR, CAT_STATEMENT,
    KIND_ASSIGN, KIND_BLOCK, KIND_FOR, KIND_IDENT, KIND_IF, KIND_INT,
    KIND_OPERATOR, KIND_VARDECL, STATEMENT_KINDS,
    Program, programs_equal, structurally_equal,
)
from perfloc.lang.check import static_check
from perfloc.lang.edit import (
    CategoryMismatch, NotAStatement, delete_statement, empty_function_body,
    replace_node, statement_nodes, subtree,
)
from perfloc.lang.parser import ParseError, parse_program
from perfloc.lang.printer import render_program, render_snippet

from conftest import corpus_source

PROBLEMS = ("insertion", "bubble", "bubble_loops", "selection", "selection2",
            "shell", "radix", "quick", "cocktail", "merge", "heap")


@pytest.mark.parametrize("name", PROBLEMS)
def test_round_trip_is_a_fixpoint(name):
    src = corpus_source(name)
    once = parse_program(src)
    text = render_program(once)
    twice = parse_program(text)
    assert programs_equal(once, twice)
    assert render_program(twice) == text


def test_bubble_loops_shape():
    p = parse_program(corpus_source("bubble_loops"))
    assert len(p.nodes) == 58
    stmts = statement_nodes(p)
    assert [s.node_id for s in stmts] == [1, 2, 5, 11, 17, 22, 23, 24]
    assert [s.kind for s in stmts] == [
        "Block", "For", "For", "For", "If", "VarDecl", "Assign", "Assign"]
    assert p.nodes[2].loop_var == "h"
    assert p.nodes[2].loop_step == "++"
    assert p.nodes[17].then_count == 3


@pytest.mark.parametrize("name", PROBLEMS)
def test_ids_are_breadth_first_and_contiguous(name):
    p = parse_program(corpus_source(name))
    assert [n.node_id for n in p.nodes] == list(range(len(p.nodes)))
    for node in p.nodes:
        ids = [c.node_id for c in node.children]
        if ids:
            assert ids == list(range(ids[0], ids[0] + len(ids)))
        for child in node.children:
            assert p.parent(child.node_id) is node


def test_structural_equality_ignores_position():
    a = parse_program("void sort(int[] a, int length) { a[0] = 1 + 2; }")
    b = parse_program("void  sort ( int[] a , int length )\n"
                      "{ a[0] = 1 + 2; }")
    assert programs_equal(a, b)
    assert a.nodes[0].structural_hash() == b.nodes[0].structural_hash()
    c = parse_program("void sort(int[] a, int length) { a[0] = 1 + 3; }")
    assert not programs_equal(a, c)


def test_structurally_equal_subtrees_within_one_program():
    p = parse_program(corpus_source("bubble"))
    swaps = [n for n in p.nodes if render_snippet(n) == "a[j]"]
    assert len(swaps) >= 2
    assert structurally_equal(swaps[0], swaps[1])


@pytest.mark.parametrize("text", [
    "void sort(int[] a, int length) { a[0] = 1 }",
    "void sort(int[] a, int length) { if a[0] > 1 { } }",
    "void sort(int[] a, int length) { a[0] = ; }",
    "void sort(int[] a, int length) { } trailing",
    "int x = 1;",
    "void sort(int[] a, int length) { for (i = 0; i < 2; i++) { } }",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_program(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_program("void sort(int[] a, int length) {\n  a[0] = 1\n}")
    assert "3:" in str(err.value)


@pytest.mark.parametrize("text,code", [
    ("void sort(int[] a, int length) { a[0] = y; }", "UndeclaredIdentifier"),
    ("void sort(int[] a, int length) { int x = true; }", "TypeMismatch"),
    ("void sort(int[] a, int length) { if (length) { } }", "TypeMismatch"),
    ("void sort(int[] a, int length) { int a = 1; int a = 2; }",
     "DuplicateDeclaration"),
    ("void sort(int[] a, int length) { sort(a); }", "ArityMismatch"),
    ("void sort(int[] a, int length) { length[0] = 1; }", "TypeMismatch"),
    ("int pick(int x) { x = 1; }", "MissingReturn"),
])
def test_static_check_rejects(text, code):
    violations = static_check(parse_program(text))
    assert code in [v.code for v in violations]


def test_static_check_accepts_the_corpus():
    for name in PROBLEMS:
        assert static_check(parse_program(corpus_source(name))) == []


def test_scopes_allow_shadowing_across_blocks():
    text = ("void sort(int[] a, int length) {"
            " for (int i = 0; i < length; i++) { a[0] = i; }"
            " for (int i = 0; i < length; i++) { a[0] = i; } }")
    assert static_check(parse_program(text)) == []


def test_delete_statement_drops_the_subtree():
    p = parse_program(corpus_source("bubble_loops"))
    clone, id_map, removed = delete_statement(p, 22)  # int k = a[j];
    assert removed == {22, 31, 32, 41, 42}
    assert len(clone.nodes) == 58 - 5
    assert len(p.nodes) == 58  # input untouched
    assert clone.nodes[id_map[17]].then_count == 2
    assert "int k" not in render_program(clone)
    assert set(id_map) | removed == set(range(58))


def test_delete_statement_refuses_blocks_and_expressions():
    p = parse_program(corpus_source("bubble_loops"))
    with pytest.raises(NotAStatement):
        delete_statement(p, 1)  # the function body Block
    with pytest.raises(NotAStatement):
        delete_statement(p, 3)  # an IntLiteral


def test_empty_function_body():
    p = parse_program(corpus_source("bubble"))
    clone, id_map, removed = empty_function_body(p, 1)
    assert len(clone.nodes) == 2
    assert render_program(clone).split("{")[1].strip() == "}"
    assert 1 not in removed and 2 in removed
    with pytest.raises(NotAStatement):
        empty_function_body(p, 2)  # not a function body


def test_replace_node_swaps_category_peers():
    p = parse_program("void sort(int[] a, int length) { a[0] = length; }")
    donor = subtree(p, 6)  # the IntLiteral 0
    swapped = replace_node(p, 4, donor)  # value: length -> 0
    assert "a[0] = 0;" in render_program(swapped)
    assert "a[0] = length;" in render_program(p)


def test_replace_node_rejects_category_mixing():
    p = parse_program(corpus_source("bubble_loops"))
    expr = subtree(p, 3)
    with pytest.raises(CategoryMismatch):
        replace_node(p, 2, expr)  # expression where a For stood
    with pytest.raises(CategoryMismatch):
        replace_node(p, 6, expr)  # expression where an Operator stood


def test_categories_partition_all_kinds():
    assert set(CATEGORY.values()) == {CAT_STATEMENT, CAT_EXPRESSION,
                                      CAT_OPERATOR, CAT_DECLARATION}
    assert KIND_BLOCK in STATEMENT_KINDS
    assert CATEGORY[KIND_OPERATOR] == CAT_OPERATOR
    assert CATEGORY[KIND_IDENT] == CAT_EXPRESSION
    assert CATEGORY["FunctionDecl"] == CAT_DECLARATION


def test_render_snippet_forms():
    p = parse_program(corpus_source("bubble_loops"))
    assert render_snippet(p.nodes[6]) == "<"
    assert render_snippet(p.nodes[4]) == "h < 2"
    assert render_snippet(p.nodes[22]) == "int k = a[j];"
    assert render_snippet(p.nodes[17]).startswith("if (a[j] > a[j + 1]) {")


def test_program_from_functions_reindexes():
    p = parse_program(corpus_source("bubble"))
    rebuilt = Program([p.functions[0].clone()])
    assert programs_equal(p, rebuilt)
    assert [n.node_id for n in rebuilt.nodes] == list(range(len(p.nodes)))
