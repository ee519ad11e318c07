"""AST for the small imperative language the tool analyses.

One node class covers every construct; ``kind`` discriminates. Node identifiers
are dense integers assigned in breadth-first order over the whole program
(first function first, then level by level), so a node's children always get a
contiguous id range and statements enumerate outer-before-inner.

Shape conventions, fixed here and relied on everywhere else:

- A function body is a Block. Control-flow bodies are NOT blocks: If, For and
  While hold their body statements directly as children.
- If children = [cond, then_0..then_{k-1}, else_0..]; ``then_count`` = k.
- For children = [init_expr, cond_expr, body...]; the loop variable (always an
  int) and the update direction live on the node as ``loop_var``/``loop_step``.
  The header declares the variable; the update is ``var++`` or ``var--``.
- Binary/Unary/IncDec keep their operator as a separate Operator child node
  (first child). Operator nodes carry the symbol and nothing else.
- VarDecl children = [name Identifier] or [name Identifier, init_expr]; the
  name child is a binding occurrence, not an expression.
- Index children = [base_expr, index_expr]. Call stores the callee name on the
  node; children are the arguments.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator, Optional

KIND_FUNCTION = "FunctionDecl"
KIND_BLOCK = "Block"
KIND_VARDECL = "VarDecl"
KIND_ASSIGN = "Assign"
KIND_IF = "If"
KIND_FOR = "For"
KIND_WHILE = "While"
KIND_RETURN = "Return"
KIND_EXPRSTMT = "ExprStmt"
KIND_BINARY = "Binary"
KIND_UNARY = "Unary"
KIND_INCDEC = "IncDec"
KIND_CALL = "Call"
KIND_INDEX = "Index"
KIND_IDENT = "Identifier"
KIND_INT = "IntLiteral"
KIND_BOOL = "BoolLiteral"
KIND_OPERATOR = "Operator"

CAT_STATEMENT = "Statement"
CAT_EXPRESSION = "Expression"
CAT_OPERATOR = "Operator"
CAT_DECLARATION = "Declaration"

CATEGORY = {
    KIND_FUNCTION: CAT_DECLARATION,
    KIND_BLOCK: CAT_STATEMENT,
    KIND_VARDECL: CAT_STATEMENT,
    KIND_ASSIGN: CAT_STATEMENT,
    KIND_IF: CAT_STATEMENT,
    KIND_FOR: CAT_STATEMENT,
    KIND_WHILE: CAT_STATEMENT,
    KIND_RETURN: CAT_STATEMENT,
    KIND_EXPRSTMT: CAT_STATEMENT,
    KIND_BINARY: CAT_EXPRESSION,
    KIND_UNARY: CAT_EXPRESSION,
    KIND_INCDEC: CAT_EXPRESSION,
    KIND_CALL: CAT_EXPRESSION,
    KIND_INDEX: CAT_EXPRESSION,
    KIND_IDENT: CAT_EXPRESSION,
    KIND_INT: CAT_EXPRESSION,
    KIND_BOOL: CAT_EXPRESSION,
    KIND_OPERATOR: CAT_OPERATOR,
}

STATEMENT_KINDS = frozenset(k for k, c in CATEGORY.items() if c == CAT_STATEMENT)
EXPRESSION_KINDS = frozenset(k for k, c in CATEGORY.items() if c == CAT_EXPRESSION)

BINARY_OPS = ("+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||")
UNARY_OPS = ("-", "!")
INCDEC_OPS = ("++", "--")

TYPE_INT = "int"
TYPE_BOOL = "bool"
TYPE_ARRAY = "int[]"
TYPE_VOID = "void"
TYPES = (TYPE_INT, TYPE_BOOL, TYPE_ARRAY, TYPE_VOID)


class AstNode:
    __slots__ = (
        "kind", "children", "name", "value", "op", "decl_type", "ret_type",
        "params", "then_count", "loop_var", "loop_step", "node_id", "parent_id",
        "line", "col", "_hash",
    )

    def __init__(self, kind: str, children: Optional[list["AstNode"]] = None, *,
                 name: Optional[str] = None, value=None, op: Optional[str] = None,
                 decl_type: Optional[str] = None, ret_type: Optional[str] = None,
                 params: Optional[list[tuple[str, str]]] = None,
                 then_count: int = 0, loop_var: Optional[str] = None,
                 loop_step: Optional[str] = None,
                 line: int = 0, col: int = 0):
        self.kind = kind
        self.children = children if children is not None else []
        self.name = name
        self.value = value
        self.op = op
        self.decl_type = decl_type
        self.ret_type = ret_type
        self.params = params
        self.then_count = then_count
        self.loop_var = loop_var
        self.loop_step = loop_step
        self.node_id = -1
        self.parent_id = -1
        self.line = line
        self.col = col
        self._hash = None

    @property
    def category(self) -> str:
        return CATEGORY[self.kind]

    def payload(self) -> tuple:
        """Everything that distinguishes two nodes of the same kind besides
        their children. Ids and source spans are deliberately excluded."""
        if self.kind == KIND_FUNCTION:
            return (self.name, self.ret_type, tuple(self.params or ()))
        if self.kind == KIND_VARDECL:
            return (self.decl_type,)
        if self.kind == KIND_IF:
            return (self.then_count,)
        if self.kind == KIND_FOR:
            return (self.loop_var, self.loop_step)
        if self.kind in (KIND_IDENT, KIND_CALL):
            return (self.name,)
        if self.kind in (KIND_INT, KIND_BOOL):
            return (self.value,)
        if self.kind == KIND_OPERATOR:
            return (self.op,)
        return ()

    def structural_hash(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.kind, self.payload(),
                      tuple(c.structural_hash() for c in self.children)))
            self._hash = h
        return h

    def clone(self) -> "AstNode":
        n = AstNode(self.kind, [c.clone() for c in self.children],
                    name=self.name, value=self.value, op=self.op,
                    decl_type=self.decl_type, ret_type=self.ret_type,
                    params=list(self.params) if self.params is not None else None,
                    then_count=self.then_count, loop_var=self.loop_var,
                    loop_step=self.loop_step, line=self.line, col=self.col)
        return n

    def walk(self) -> Iterator["AstNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def subtree_size(self) -> int:
        return 1 + sum(c.subtree_size() for c in self.children)

    def __repr__(self):
        bits = [self.kind]
        p = self.payload()
        if p:
            bits.append(repr(p))
        return f"<{' '.join(bits)} #{self.node_id}>"


def structurally_equal(a: AstNode, b: AstNode) -> bool:
    if a.kind != b.kind or a.payload() != b.payload():
        return False
    if len(a.children) != len(b.children):
        return False
    return all(structurally_equal(x, y) for x, y in zip(a.children, b.children))


class Program:
    """A parsed program: an ordered list of function declarations plus the
    node table. Construct through ``from_functions`` so ids are assigned."""

    def __init__(self, functions: list[AstNode]):
        self.functions = functions
        self.nodes: list[AstNode] = []
        self._index()

    @classmethod
    def from_functions(cls, functions: list[AstNode]) -> "Program":
        return cls(functions)

    def _index(self) -> None:
        self.nodes = []
        queue: deque[AstNode] = deque()
        for f in self.functions:
            f.parent_id = -1
            queue.append(f)
        while queue:
            node = queue.popleft()
            node.node_id = len(self.nodes)
            self.nodes.append(node)
            queue.extend(node.children)
        for node in self.nodes:
            for c in node.children:
                c.parent_id = node.node_id

    def reindex(self) -> None:
        self._index()

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> AstNode:
        return self.nodes[node_id]

    def parent(self, node_id: int) -> Optional[AstNode]:
        pid = self.nodes[node_id].parent_id
        return None if pid < 0 else self.nodes[pid]

    def clone(self) -> "Program":
        return Program([f.clone() for f in self.functions])

    def function_named(self, name: str) -> Optional[AstNode]:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def enclosing_statement(self, node_id: int) -> Optional[AstNode]:
        """Nearest self-or-ancestor node whose kind is a statement."""
        n = self.nodes[node_id]
        while n is not None and n.kind not in STATEMENT_KINDS:
            n = self.parent(n.node_id)
        return n

    def body_block_ids(self) -> set[int]:
        return {f.children[0].node_id for f in self.functions
                if f.children and f.children[0].kind == KIND_BLOCK}


def programs_equal(a: Program, b: Program) -> bool:
    if len(a.functions) != len(b.functions):
        return False
    return all(structurally_equal(x, y) for x, y in zip(a.functions, b.functions))
