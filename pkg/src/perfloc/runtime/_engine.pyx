# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled interpreter engine.

Mirror of engine_py.run: same opcode set, same evaluation order, same
step-event accounting, bit-identical results. Any semantic change must be
made in both files; the cross-engine test compares them on the whole corpus.
"""

from cpython cimport array
from libc.stdlib cimport malloc, free, realloc
from libc.string cimport memset

cdef enum:
    OP_FUNC = 0
    OP_BLOCK = 1
    OP_VARDECL = 2
    OP_ASSIGN = 3
    OP_IF = 4
    OP_FOR = 5
    OP_WHILE = 6
    OP_RETURN = 7
    OP_EXPRSTMT = 8
    OP_BINARY = 9
    OP_UNARY = 10
    OP_INCDEC = 11
    OP_CALL = 12
    OP_INDEX = 13
    OP_IDENT = 14
    OP_INTLIT = 15
    OP_BOOLLIT = 16
    OP_OPER = 17

cdef enum:
    BOP_ADD = 0
    BOP_SUB = 1
    BOP_MUL = 2
    BOP_DIV = 3
    BOP_MOD = 4
    BOP_LT = 5
    BOP_LE = 6
    BOP_GT = 7
    BOP_GE = 8
    BOP_EQ = 9
    BOP_NE = 10
    BOP_AND = 11
    BOP_OR = 12

cdef enum:
    ST_OK = 0
    ST_TIMEOUT = 1
    ST_FAULT = 2
    ST_RETURN = 3

cdef enum:
    ERR_NONE = 0
    ERR_INDEX = 1
    ERR_DIV = 2
    ERR_STACK = 3

cdef enum:
    HEAP_LIMIT = 1048576        # 1 << 20
    ARRAY_SHIFT = 21
    LEN_MASK = 2097151          # (1 << 21) - 1
    STACK_LIMIT = 512

ctypedef long long i64


cdef struct Ctx:
    int* kind
    i64* a
    int* b
    int* first
    int* nch
    int* fbody
    int* fslots
    int* fparams
    i64 steps
    i64 limit
    int* heap
    i64 heap_len
    i64 heap_cap
    int fault
    i64 retval


cdef inline i64 wrap32(i64 v) nogil:
    return ((v + 0x80000000LL) & 0xFFFFFFFFLL) - 0x80000000LL


cdef int grow_heap(Ctx* ctx, i64 need) nogil:
    cdef i64 cap = ctx.heap_cap
    cdef int* p
    if need <= cap:
        return 0
    while cap < need:
        cap = cap * 2 if cap > 0 else 64
    p = <int*>realloc(ctx.heap, cap * sizeof(int))
    if p == NULL:
        return -1
    ctx.heap = p
    ctx.heap_cap = cap
    return 0


cdef int call_fn(Ctx* ctx, int findex, i64* argv, int argc, int depth) nogil:
    cdef int nslots = ctx.fslots[findex]
    cdef i64* frame = <i64*>malloc(nslots * sizeof(i64))
    cdef int i, st
    if frame == NULL:
        ctx.fault = ERR_STACK
        return ST_FAULT
    memset(frame, 0, nslots * sizeof(i64))
    for i in range(argc):
        frame[i] = argv[i]
    ctx.retval = 0
    st = exec_stmt(ctx, ctx.fbody[findex], frame, depth)
    free(frame)
    if st == ST_RETURN:
        return ST_OK
    return st


cdef int exec_stmt(Ctx* ctx, int i, i64* frame, int depth) nogil:
    cdef int k, t, c, lo, hi, slot, step, st
    cdef i64 v, ref, idx, off, length, init
    ctx.steps += 1
    if ctx.steps == ctx.limit:
        return ST_TIMEOUT
    k = ctx.kind[i]
    if k == OP_ASSIGN:
        t = ctx.first[i]
        if ctx.kind[t] == OP_IDENT:
            st = eval_expr(ctx, t + 1, frame, depth, &v)
            if st != ST_OK:
                return st
            frame[ctx.a[t]] = v
        else:
            ctx.steps += 1
            if ctx.steps == ctx.limit:
                return ST_TIMEOUT
            st = eval_expr(ctx, ctx.first[t], frame, depth, &ref)
            if st != ST_OK:
                return st
            st = eval_expr(ctx, ctx.first[t] + 1, frame, depth, &idx)
            if st != ST_OK:
                return st
            st = eval_expr(ctx, t + 1, frame, depth, &v)
            if st != ST_OK:
                return st
            off = ref >> ARRAY_SHIFT
            length = ref & LEN_MASK
            if idx < 0 or idx >= length:
                ctx.fault = ERR_INDEX
                return ST_FAULT
            ctx.heap[off + idx] = <int>v
        return ST_OK
    if k == OP_IF:
        st = eval_expr(ctx, ctx.first[i], frame, depth, &v)
        if st != ST_OK:
            return st
        if v:
            lo = ctx.first[i] + 1
            hi = lo + <int>ctx.a[i]
        else:
            lo = ctx.first[i] + 1 + <int>ctx.a[i]
            hi = ctx.first[i] + ctx.nch[i]
        for c in range(lo, hi):
            st = exec_stmt(ctx, c, frame, depth)
            if st != ST_OK:
                return st
        return ST_OK
    if k == OP_FOR:
        slot = <int>ctx.a[i]
        step = ctx.b[i]
        st = eval_expr(ctx, ctx.first[i], frame, depth, &init)
        if st != ST_OK:
            return st
        frame[slot] = init
        lo = ctx.first[i] + 2
        hi = ctx.first[i] + ctx.nch[i]
        while True:
            st = eval_expr(ctx, ctx.first[i] + 1, frame, depth, &v)
            if st != ST_OK:
                return st
            if not v:
                return ST_OK
            for c in range(lo, hi):
                st = exec_stmt(ctx, c, frame, depth)
                if st != ST_OK:
                    return st
            frame[slot] = wrap32(frame[slot] + step)
    if k == OP_WHILE:
        lo = ctx.first[i] + 1
        hi = ctx.first[i] + ctx.nch[i]
        while True:
            st = eval_expr(ctx, ctx.first[i], frame, depth, &v)
            if st != ST_OK:
                return st
            if not v:
                return ST_OK
            for c in range(lo, hi):
                st = exec_stmt(ctx, c, frame, depth)
                if st != ST_OK:
                    return st
    if k == OP_VARDECL:
        if ctx.b[i]:
            st = eval_expr(ctx, ctx.first[i] + 1, frame, depth, &v)
            if st != ST_OK:
                return st
            frame[ctx.a[i]] = v
        return ST_OK
    if k == OP_EXPRSTMT:
        return eval_expr(ctx, ctx.first[i], frame, depth, &v)
    if k == OP_BLOCK:
        lo = ctx.first[i]
        hi = lo + ctx.nch[i]
        for c in range(lo, hi):
            st = exec_stmt(ctx, c, frame, depth)
            if st != ST_OK:
                return st
        return ST_OK
    if k == OP_RETURN:
        if ctx.b[i]:
            st = eval_expr(ctx, ctx.first[i], frame, depth, &v)
            if st != ST_OK:
                return st
            ctx.retval = v
        else:
            ctx.retval = 0
        return ST_RETURN
    return ST_OK


cdef int eval_expr(Ctx* ctx, int i, i64* frame, int depth, i64* out) nogil:
    cdef int k, op, slot, c, lo, findex, argc, st
    cdef i64 l, r, v, q, ref, idx, off, length, n, old
    cdef i64 argbuf[16]
    cdef i64* argv
    ctx.steps += 1
    if ctx.steps == ctx.limit:
        return ST_TIMEOUT
    k = ctx.kind[i]
    if k == OP_IDENT:
        out[0] = frame[ctx.a[i]]
        return ST_OK
    if k == OP_INTLIT or k == OP_BOOLLIT:
        out[0] = ctx.a[i]
        return ST_OK
    if k == OP_BINARY:
        op = <int>ctx.a[i]
        st = eval_expr(ctx, ctx.first[i] + 1, frame, depth, &l)
        if st != ST_OK:
            return st
        if op == BOP_AND:
            if not l:
                out[0] = 0
                return ST_OK
            return eval_expr(ctx, ctx.first[i] + 2, frame, depth, out)
        if op == BOP_OR:
            if l:
                out[0] = 1
                return ST_OK
            return eval_expr(ctx, ctx.first[i] + 2, frame, depth, out)
        st = eval_expr(ctx, ctx.first[i] + 2, frame, depth, &r)
        if st != ST_OK:
            return st
        if op == BOP_ADD:
            out[0] = wrap32(l + r)
        elif op == BOP_SUB:
            out[0] = wrap32(l - r)
        elif op == BOP_MUL:
            out[0] = wrap32(l * r)
        elif op == BOP_LT:
            out[0] = 1 if l < r else 0
        elif op == BOP_LE:
            out[0] = 1 if l <= r else 0
        elif op == BOP_GT:
            out[0] = 1 if l > r else 0
        elif op == BOP_GE:
            out[0] = 1 if l >= r else 0
        elif op == BOP_EQ:
            out[0] = 1 if l == r else 0
        elif op == BOP_NE:
            out[0] = 1 if l != r else 0
        else:
            if r == 0:
                ctx.fault = ERR_DIV
                return ST_FAULT
            q = l / r
            if op == BOP_DIV:
                out[0] = wrap32(q)
            else:
                out[0] = l - q * r
        return ST_OK
    if k == OP_INDEX:
        st = eval_expr(ctx, ctx.first[i], frame, depth, &ref)
        if st != ST_OK:
            return st
        st = eval_expr(ctx, ctx.first[i] + 1, frame, depth, &idx)
        if st != ST_OK:
            return st
        off = ref >> ARRAY_SHIFT
        length = ref & LEN_MASK
        if idx < 0 or idx >= length:
            ctx.fault = ERR_INDEX
            return ST_FAULT
        out[0] = ctx.heap[off + idx]
        return ST_OK
    if k == OP_INCDEC:
        slot = <int>ctx.a[i]
        old = frame[slot]
        frame[slot] = wrap32(old + ctx.b[i])
        out[0] = old
        return ST_OK
    if k == OP_UNARY:
        st = eval_expr(ctx, ctx.first[i] + 1, frame, depth, &v)
        if st != ST_OK:
            return st
        if ctx.a[i] == 0:
            out[0] = wrap32(-v)
        else:
            out[0] = 0 if v else 1
        return ST_OK
    if k == OP_CALL:
        findex = <int>ctx.a[i]
        lo = ctx.first[i]
        if findex < 0:
            st = eval_expr(ctx, lo, frame, depth, &n)
            if st != ST_OK:
                return st
            if n < 0 or ctx.heap_len + n > HEAP_LIMIT:
                ctx.fault = ERR_INDEX
                return ST_FAULT
            if grow_heap(ctx, ctx.heap_len + n) != 0:
                ctx.fault = ERR_INDEX
                return ST_FAULT
            off = ctx.heap_len
            memset(ctx.heap + off, 0, n * sizeof(int))
            ctx.heap_len += n
            out[0] = (off << ARRAY_SHIFT) | n
            return ST_OK
        argc = ctx.b[i]
        if argc <= 16:
            argv = argbuf
        else:
            argv = <i64*>malloc(argc * sizeof(i64))
            if argv == NULL:
                ctx.fault = ERR_STACK
                return ST_FAULT
        for c in range(argc):
            st = eval_expr(ctx, lo + c, frame, depth, &argv[c])
            if st != ST_OK:
                if argv != argbuf:
                    free(argv)
                return st
        if depth + 1 >= STACK_LIMIT:
            if argv != argbuf:
                free(argv)
            ctx.fault = ERR_STACK
            return ST_FAULT
        st = call_fn(ctx, findex, argv, argc, depth + 1)
        if argv != argbuf:
            free(argv)
        if st != ST_OK:
            return st
        out[0] = ctx.retval
        return ST_OK
    out[0] = 0
    return ST_OK


def run(ir, int entry, args, heap, step_limit):
    """Same contract as engine_py.run."""
    cdef Ctx ctx
    cdef array.array kind_arr = ir.kind
    cdef array.array a_arr = ir.a
    cdef array.array b_arr = ir.b
    cdef array.array first_arr = ir.first
    cdef array.array nch_arr = ir.nch
    ctx.kind = kind_arr.data.as_ints
    ctx.a = a_arr.data.as_longlongs
    ctx.b = b_arr.data.as_ints
    ctx.first = first_arr.data.as_ints
    ctx.nch = nch_arr.data.as_ints

    functions = ir.functions
    cdef int nf = len(functions)
    ctx.fbody = <int*>malloc(nf * sizeof(int))
    ctx.fslots = <int*>malloc(nf * sizeof(int))
    ctx.fparams = <int*>malloc(nf * sizeof(int))
    cdef int i
    for i in range(nf):
        ctx.fbody[i] = functions[i].body
        ctx.fslots[i] = functions[i].n_slots
        ctx.fparams[i] = functions[i].n_params

    cdef i64 hl = len(heap)
    ctx.heap = NULL
    ctx.heap_len = 0
    ctx.heap_cap = 0
    if grow_heap(&ctx, hl if hl > 0 else 1) != 0:
        free(ctx.fbody); free(ctx.fslots); free(ctx.fparams)
        raise MemoryError
    for i in range(<int>hl):
        ctx.heap[i] = heap[i]
    ctx.heap_len = hl

    cdef int argc = len(args)
    cdef i64* argv = <i64*>malloc((argc if argc > 0 else 1) * sizeof(i64))
    for i in range(argc):
        argv[i] = args[i]

    ctx.steps = 0
    ctx.limit = step_limit
    ctx.fault = ERR_NONE
    ctx.retval = 0

    cdef int st = call_fn(&ctx, entry, argv, argc, 0)
    free(argv)

    status = 0
    err = 0
    if st == ST_TIMEOUT:
        status = 1
    elif st == ST_FAULT:
        status = 2
        err = ctx.fault
    if status == 0:
        heap[:] = [ctx.heap[i] for i in range(<int>ctx.heap_len)]
    steps = ctx.steps
    free(ctx.heap)
    free(ctx.fbody)
    free(ctx.fslots)
    free(ctx.fparams)
    return status, steps, err
