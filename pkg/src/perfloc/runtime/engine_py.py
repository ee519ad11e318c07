"""Pure-Python interpreter engine.

The compiled engine mirrors this file operation for operation; the two must
produce identical (status, steps, heap) for every input, which a test
enforces. Semantics frozen here:

- Cost events: +1 at every statement entry (Block, VarDecl, Assign, If, For,
  While, Return, ExprStmt) and +1 at every expression-node evaluation, counted
  pre-order (node before its children). Operator nodes and binding
  occurrences (VarDecl names, IncDec operands, bare assignment targets, the
  for-counter update) cost nothing.
- The step counter is checked as increment-then-compare: the run times out
  the moment the counter reaches the limit, even on what would have been the
  final event.
- Ints are 32-bit two's complement; arithmetic wraps. Division truncates
  toward zero; INT_MIN / -1 wraps back to INT_MIN and INT_MIN % -1 is 0.
  Division or modulo by zero raises the DivideByZero outcome.
- ``x++``/``x--`` evaluate to the value before the update.
- && and || short-circuit; the unevaluated side costs nothing.
- Assignment to an element evaluates array, index, then value, and bounds
  checks at the store. Assignment to a variable evaluates only the value.
- A for loop evaluates its init once (in the enclosing scope), stores it,
  then alternates condition / body / silent counter update.
- Calls evaluate arguments left to right, then enter the callee's body block.
  More than 512 live frames raises StackOverflow.
- newArray(n) zero-fills; n < 0, or growing the heap past 2^20 ints, raises
  IndexOutOfBounds. Uninitialised variables read as 0 (= false = the empty
  array reference).
"""

from __future__ import annotations

import sys

from .ir import (
    ProgramIR,
    OP_BLOCK, OP_VARDECL, OP_ASSIGN, OP_IF, OP_FOR, OP_WHILE, OP_RETURN,
    OP_EXPRSTMT, OP_BINARY, OP_UNARY, OP_INCDEC, OP_CALL, OP_INDEX,
    OP_IDENT, OP_INTLIT, OP_BOOLLIT,
    BOP_ADD, BOP_SUB, BOP_MUL, BOP_DIV, BOP_MOD, BOP_LT, BOP_LE, BOP_GT,
    BOP_GE, BOP_EQ, BOP_NE, BOP_AND, BOP_OR,
    HEAP_LIMIT, ARRAY_SHIFT, LEN_MASK, STACK_LIMIT,
)

STATUS_COMPLETED = 0
STATUS_TIMEOUT = 1
STATUS_ERROR = 2

ERR_NONE = 0
ERR_INDEX = 1
ERR_DIV = 2
ERR_STACK = 3

_MIN_RECURSION = 200000


class _Timeout(Exception):
    pass


class _Fault(Exception):
    def __init__(self, code):
        self.code = code


class _Return(Exception):
    def __init__(self, value):
        self.value = value


def _wrap(v):
    return ((v + 0x80000000) & 0xFFFFFFFF) - 0x80000000


def run(ir: ProgramIR, entry: int, args: list, heap: list,
        step_limit: int, counts=None):
    """Execute function ``entry`` with ``args`` already packed/encoded and
    ``heap`` holding any argument arrays. Returns (status, steps, error).
    ``heap`` is mutated in place and holds the final array contents.

    ``counts``, when given, must be a list with one zero per node; every
    statement entry bumps its node's cell (the profiler's data source)."""
    if sys.getrecursionlimit() < _MIN_RECURSION:
        sys.setrecursionlimit(_MIN_RECURSION)

    kind = ir.kind
    pa = ir.a
    pb = ir.b
    first = ir.first
    nch = ir.nch
    functions = ir.functions

    state = [0]  # steps

    def tick():
        state[0] += 1
        if state[0] == step_limit:
            raise _Timeout

    def call(findex, argv, depth):
        info = functions[findex]
        frame = [0] * info.n_slots
        for i, v in enumerate(argv):
            frame[i] = v
        try:
            exec_stmt(info.body, frame, depth)
        except _Return as r:
            return r.value
        return None

    def exec_block(i, frame, depth):
        lo = first[i]
        for c in range(lo, lo + nch[i]):
            exec_stmt(c, frame, depth)

    def exec_stmt(i, frame, depth):
        tick()
        if counts is not None:
            counts[i] += 1
        k = kind[i]
        if k == OP_ASSIGN:
            t = first[i]
            if kind[t] == OP_IDENT:
                frame[pa[t]] = eval_expr(t + 1, frame, depth)
            else:
                tick()  # the Index node itself
                ref = eval_expr(first[t], frame, depth)
                idx = eval_expr(first[t] + 1, frame, depth)
                value = eval_expr(t + 1, frame, depth)
                off = ref >> ARRAY_SHIFT
                length = ref & LEN_MASK
                if idx < 0 or idx >= length:
                    raise _Fault(ERR_INDEX)
                heap[off + idx] = value
        elif k == OP_IF:
            if eval_expr(first[i], frame, depth):
                lo = first[i] + 1
                for c in range(lo, lo + pa[i]):
                    exec_stmt(c, frame, depth)
            else:
                lo = first[i] + 1 + pa[i]
                for c in range(lo, first[i] + nch[i]):
                    exec_stmt(c, frame, depth)
        elif k == OP_FOR:
            slot = pa[i]
            step = pb[i]
            frame[slot] = eval_expr(first[i], frame, depth)
            cond = first[i] + 1
            lo = first[i] + 2
            hi = first[i] + nch[i]
            while eval_expr(cond, frame, depth):
                for c in range(lo, hi):
                    exec_stmt(c, frame, depth)
                frame[slot] = _wrap(frame[slot] + step)
        elif k == OP_WHILE:
            cond = first[i]
            lo = cond + 1
            hi = cond + nch[i]
            while eval_expr(cond, frame, depth):
                for c in range(lo, hi):
                    exec_stmt(c, frame, depth)
        elif k == OP_VARDECL:
            if pb[i]:
                frame[pa[i]] = eval_expr(first[i] + 1, frame, depth)
        elif k == OP_EXPRSTMT:
            eval_expr(first[i], frame, depth)
        elif k == OP_BLOCK:
            exec_block(i, frame, depth)
        elif k == OP_RETURN:
            if pb[i]:
                raise _Return(eval_expr(first[i], frame, depth))
            raise _Return(None)

    def eval_expr(i, frame, depth):
        tick()
        k = kind[i]
        if k == OP_IDENT:
            return frame[pa[i]]
        if k == OP_INTLIT or k == OP_BOOLLIT:
            return pa[i]
        if k == OP_BINARY:
            op = pa[i]
            l = eval_expr(first[i] + 1, frame, depth)
            if op == BOP_AND:
                if not l:
                    return 0
                return eval_expr(first[i] + 2, frame, depth)
            if op == BOP_OR:
                if l:
                    return 1
                return eval_expr(first[i] + 2, frame, depth)
            r = eval_expr(first[i] + 2, frame, depth)
            if op == BOP_ADD:
                return _wrap(l + r)
            if op == BOP_SUB:
                return _wrap(l - r)
            if op == BOP_MUL:
                return _wrap(l * r)
            if op == BOP_LT:
                return 1 if l < r else 0
            if op == BOP_LE:
                return 1 if l <= r else 0
            if op == BOP_GT:
                return 1 if l > r else 0
            if op == BOP_GE:
                return 1 if l >= r else 0
            if op == BOP_EQ:
                return 1 if l == r else 0
            if op == BOP_NE:
                return 1 if l != r else 0
            if r == 0:
                raise _Fault(ERR_DIV)
            q = l // r
            if q < 0 and q * r != l:
                q += 1
            if op == BOP_DIV:
                return _wrap(q)
            return l - q * r
        if k == OP_INDEX:
            ref = eval_expr(first[i], frame, depth)
            idx = eval_expr(first[i] + 1, frame, depth)
            off = ref >> ARRAY_SHIFT
            length = ref & LEN_MASK
            if idx < 0 or idx >= length:
                raise _Fault(ERR_INDEX)
            return heap[off + idx]
        if k == OP_INCDEC:
            slot = pa[i]
            old = frame[slot]
            frame[slot] = _wrap(old + pb[i])
            return old
        if k == OP_UNARY:
            v = eval_expr(first[i] + 1, frame, depth)
            if pa[i] == 0:
                return _wrap(-v)
            return 0 if v else 1
        if k == OP_CALL:
            findex = pa[i]
            lo = first[i]
            if findex < 0:
                n = eval_expr(lo, frame, depth)
                if n < 0 or len(heap) + n > HEAP_LIMIT:
                    raise _Fault(ERR_INDEX)
                off = len(heap)
                heap.extend([0] * n)
                return (off << ARRAY_SHIFT) | n
            argv = [eval_expr(c, frame, depth) for c in range(lo, lo + pb[i])]
            if depth + 1 >= STACK_LIMIT:
                raise _Fault(ERR_STACK)
            return call(findex, argv, depth + 1)
        raise AssertionError(f"unexpected opcode {k}")

    try:
        call(entry, args, 0)
    except _Timeout:
        return STATUS_TIMEOUT, state[0], ERR_NONE
    except _Fault as f:
        return STATUS_ERROR, state[0], f.code
    return STATUS_COMPLETED, state[0], ERR_NONE
