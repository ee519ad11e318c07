"""Tree surgery used by the localisation techniques.

All edits work on a clone; the input program is never touched. Node ids in a
clone match the original (cloning preserves shape), so callers can address
clone nodes with original ids before the edit, then use the returned id map
afterwards.
"""

from __future__ import annotations

from typing import Optional

from .ast import (
    AstNode, Program, CATEGORY, STATEMENT_KINDS,
    KIND_FUNCTION, KIND_BLOCK, KIND_IF,
)


class NotAStatement(ValueError):
    pass


class CategoryMismatch(ValueError):
    pass


def statement_nodes(program: Program) -> list[AstNode]:
    """All statement nodes in id (breadth-first) order, outermost first."""
    return [n for n in program.nodes if n.kind in STATEMENT_KINDS]


def _collect_ids(node: AstNode) -> set[int]:
    return {n.node_id for n in node.walk()}


def delete_statement(program: Program, node_id: int):
    """Remove the statement with ``node_id``; return (new_program, id_map,
    removed_ids). ``id_map`` maps old ids of surviving nodes to their new
    ids. Function bodies cannot be detached (every function keeps a body);
    use ``empty_function_body`` for that case."""
    target = program.nodes[node_id]
    if target.kind not in STATEMENT_KINDS or target.kind == KIND_BLOCK:
        raise NotAStatement(f"node {node_id} is a {target.kind}")
    clone = program.clone()
    node = clone.nodes[node_id]
    parent = clone.parent(node_id)
    removed = _collect_ids(node)
    pos = parent.children.index(node)
    if parent.kind == KIND_IF and 1 <= pos <= parent.then_count:
        parent.then_count -= 1
    parent.children.pop(pos)
    survivors = [(n, n.node_id) for f in clone.functions for n in f.walk()]
    clone.reindex()
    id_map = {old: n.node_id for n, old in survivors}
    return clone, id_map, removed


def empty_function_body(program: Program, block_id: int):
    """The deletion counterpart for a function body: keep the Block, drop
    everything inside it. Returns (new_program, id_map, removed_ids)."""
    target = program.nodes[block_id]
    parent = program.parent(block_id)
    if target.kind != KIND_BLOCK or parent is None or \
            parent.kind != KIND_FUNCTION:
        raise NotAStatement(f"node {block_id} is not a function body")
    clone = program.clone()
    node = clone.nodes[block_id]
    removed = _collect_ids(node) - {node.node_id}
    node.children = []
    survivors = [(n, n.node_id) for f in clone.functions for n in f.walk()]
    clone.reindex()
    id_map = {old: n.node_id for n, old in survivors}
    return clone, id_map, removed


def replace_node(program: Program, node_id: int, donor: AstNode) -> Program:
    """Swap the subtree at ``node_id`` for a clone of ``donor``. The donor
    must be of the same syntactic category as the target."""
    target = program.nodes[node_id]
    if CATEGORY[target.kind] != CATEGORY[donor.kind]:
        raise CategoryMismatch(
            f"cannot put a {CATEGORY[donor.kind]} where a "
            f"{CATEGORY[target.kind]} was")
    clone = program.clone()
    node = clone.nodes[node_id]
    replacement = donor.clone()
    parent = clone.parent(node_id)
    if parent is None:
        pos = clone.functions.index(node)
        clone.functions[pos] = replacement
    else:
        pos = parent.children.index(node)
        parent.children[pos] = replacement
    clone.reindex()
    return clone


def subtree(program: Program, node_id: int) -> AstNode:
    """Detached copy of the subtree rooted at ``node_id``."""
    return program.nodes[node_id].clone()


def function_of(program: Program, node_id: int) -> Optional[AstNode]:
    n = program.nodes[node_id]
    while n is not None and n.kind != KIND_FUNCTION:
        n = program.parent(n.node_id)
    return n
