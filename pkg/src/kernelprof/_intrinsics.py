"""Low-level primitives for compiled drivers: raw loads/stores, atomic
exchange, and indirect calls through runtime function addresses.

Importing this module also switches on LLVM's SLP vectorizer for all
subsequently compiled functions; the packet-shaped kernel loops rely on it.
"""

from __future__ import annotations

import numba

# Must be set before any kernel compiles. Global numba config; documented
# in the README.
numba.config.SLP_VECTORIZE = 1

from llvmlite import ir
from numba import types
from numba.extending import intrinsic

_F64 = ir.DoubleType()
_F64P = ir.PointerType(_F64)
_I64 = ir.IntType(64)
_I64P = ir.PointerType(_I64)


def _as_f64p(builder, value, typ):
    """Coerce an integer address or typed pointer to double*."""
    if isinstance(typ, types.CPointer):
        return builder.bitcast(value, _F64P)
    return builder.inttoptr(value, _F64P)


def _ptr_ok(typ) -> bool:
    return isinstance(typ, (types.Integer, types.CPointer))


@intrinsic
def load_u64(typingctx, addr):
    """Load a uint64 from a raw address."""
    addr = types.unliteral(addr)
    sig = types.uint64(addr)

    def codegen(context, builder, signature, args):
        return builder.load(builder.inttoptr(args[0], _I64P))

    if isinstance(addr, types.Integer):
        return sig, codegen


@intrinsic
def store_u64(typingctx, addr, value):
    """Store a uint64 to a raw address."""
    addr = types.unliteral(addr)
    sig = types.void(addr, types.uint64)

    def codegen(context, builder, signature, args):
        builder.store(args[1], builder.inttoptr(args[0], _I64P))
        return None

    if isinstance(addr, types.Integer):
        return sig, codegen


@intrinsic
def load_f64(typingctx, addr):
    addr = types.unliteral(addr)
    sig = types.float64(addr)

    def codegen(context, builder, signature, args):
        return builder.load(builder.inttoptr(args[0], _F64P))

    if isinstance(addr, types.Integer):
        return sig, codegen


@intrinsic
def store_f64(typingctx, addr, value):
    addr = types.unliteral(addr)
    sig = types.void(addr, types.float64)

    def codegen(context, builder, signature, args):
        builder.store(args[1], builder.inttoptr(args[0], _F64P))
        return None

    if isinstance(addr, types.Integer):
        return sig, codegen


@intrinsic
def xchg_u64(typingctx, addr, value):
    """Atomic exchange (seq_cst, a full barrier on x86); returns the old value."""
    addr = types.unliteral(addr)
    sig = types.uint64(addr, types.uint64)

    def codegen(context, builder, signature, args):
        ptr = builder.inttoptr(args[0], _I64P)
        return builder.atomic_rmw("xchg", ptr, args[1], "seq_cst")

    if isinstance(addr, types.Integer):
        return sig, codegen


@intrinsic
def icall_inplace_binary(typingctx, fn, a, b, n):
    """Call void(double*, double*, uint64) at a runtime address."""
    fn, a, b, n = map(types.unliteral, (fn, a, b, n))
    sig = types.void(fn, a, b, n)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.VoidType(), [_F64P, _F64P, _I64])
        builder.call(builder.inttoptr(args[0], fnty.as_pointer()),
                     [_as_f64p(builder, args[1], signature.args[1]),
                      _as_f64p(builder, args[2], signature.args[2]),
                      args[3]])
        return None

    if isinstance(fn, types.Integer) and _ptr_ok(a) and _ptr_ok(b):
        return sig, codegen


@intrinsic
def icall_reduce(typingctx, fn, a, n):
    """Call double(double*, uint64) at a runtime address."""
    fn, a, n = map(types.unliteral, (fn, a, n))
    sig = types.float64(fn, a, n)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(_F64, [_F64P, _I64])
        return builder.call(builder.inttoptr(args[0], fnty.as_pointer()),
                            [_as_f64p(builder, args[1], signature.args[1]),
                             args[2]])

    if isinstance(fn, types.Integer) and _ptr_ok(a):
        return sig, codegen


@intrinsic
def icall_horner(typingctx, fn, coeffs, x, y, n):
    """Call void(double*, double*, double*, uint64) at a runtime address."""
    fn, coeffs, x, y, n = map(types.unliteral, (fn, coeffs, x, y, n))
    sig = types.void(fn, coeffs, x, y, n)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.VoidType(), [_F64P, _F64P, _F64P, _I64])
        builder.call(builder.inttoptr(args[0], fnty.as_pointer()),
                     [_as_f64p(builder, args[1], signature.args[1]),
                      _as_f64p(builder, args[2], signature.args[2]),
                      _as_f64p(builder, args[3], signature.args[3]),
                      args[4]])
        return None

    if isinstance(fn, types.Integer) and all(_ptr_ok(t) for t in (coeffs, x, y)):
        return sig, codegen


@intrinsic
def icall_callback(typingctx, fn, state, slot):
    """Call uint64(uint64, uint64) at a runtime address (pin/release/query)."""
    fn, state, slot = map(types.unliteral, (fn, state, slot))
    sig = types.uint64(fn, state, slot)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(_I64, [_I64, _I64])
        return builder.call(builder.inttoptr(args[0], fnty.as_pointer()),
                            [args[1], args[2]])

    if isinstance(fn, types.Integer):
        return sig, codegen
