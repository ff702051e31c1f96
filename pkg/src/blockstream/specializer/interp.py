"""Call-by-value interpreter for the IR, used as the semantic oracle.

Values are signed 64-bit integers, index symbols (bound to ``idx``) and, in
functorized programs, :class:`FunRef` values naming a top-level function.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from blockstream.specializer.ir import (
    INDEX_PARAM,
    ArityMismatch,
    Call,
    Expr,
    Extern,
    ExternWithoutBody,
    Ifz,
    Int,
    IrFunction,
    IrProgram,
    Let,
    MatchIdx,
    Prim,
    UnboundName,
    UnknownIndexSymbol,
    Var,
    wrap64,
)

__all__ = ["FunRef", "interpret"]


@dataclass(frozen=True)
class FunRef:
    name: str


def _prim(op: str, a: int, b: int) -> int:
    if op == "+":
        return wrap64(a + b)
    if op == "-":
        return wrap64(a - b)
    if op == "*":
        return wrap64(a * b)
    if op == "<":
        return int(a < b)
    if op == "=":
        return int(a == b)
    raise UnboundName(f"unknown primitive {op!r}")


class _Machine:
    def __init__(self, p: IrProgram, bindings: Mapping[str, str]):
        self.p = p
        self.bindings = dict(bindings)

    def apply(self, name: str, args: list) -> object:
        item = self.p.get(name)
        if item is None:
            raise UnboundName(f"no function named {name!r}")
        if isinstance(item, Extern):
            impl = self.bindings.get(name)
            if impl is None:
                raise ExternWithoutBody(f"extern {name!r} has no implementation bound")
            if len(args) != item.arity + 1:
                raise ArityMismatch(f"extern {name!r} takes idx and {item.arity} arguments, got {len(args)}")
            return self.apply(impl, args[1:])
        if len(args) != len(item.params):
            raise ArityMismatch(f"{name!r} takes {len(item.params)} arguments, got {len(args)}")
        return self.eval(item.body, dict(zip(item.params, args)))

    def eval(self, e: Expr, env: dict) -> object:
        if isinstance(e, Int):
            return wrap64(e.value)
        if isinstance(e, Var):
            try:
                return env[e.name]
            except KeyError:
                raise UnboundName(f"unbound variable {e.name!r}") from None
        if isinstance(e, Let):
            return self.eval(e.body, {**env, e.name: self.eval(e.bound, env)})
        if isinstance(e, Prim):
            a, b = (self.eval(x, env) for x in e.args)
            return _prim(e.op, a, b)
        if isinstance(e, Ifz):
            branch = e.then if self.eval(e.cond, env) == 0 else e.orelse
            return self.eval(branch, env)
        if isinstance(e, MatchIdx):
            return self.eval(e.arm(env[INDEX_PARAM]), env)
        if isinstance(e, Call):
            args = [self.eval(a, env) for a in e.args]
            target = env.get(e.callee)
            if isinstance(target, FunRef):
                return self.apply(target.name, args)
            return self.apply(e.callee, args)
        raise TypeError(f"not an expression: {e!r}")


def interpret(
    p: IrProgram,
    entry: str,
    args: Sequence[object],
    index: str | None = None,
    bindings: Mapping[str, str] | None = None,
) -> int:
    """Evaluate ``entry(args)`` in ``p``.

    ``index`` must be given exactly when ``entry`` is indexed. ``bindings``
    maps extern names to the concrete functions that implement them, so an
    unspecialized program can be run against the same leaves as its
    specialization.
    """
    item = p.get(entry)
    if not isinstance(item, IrFunction):
        raise UnboundName(f"no function named {entry!r}")
    args = list(args)
    if item.indexed:
        if index is None:
            raise ArityMismatch(f"{entry!r} is indexed; an index value is required")
        if index not in p.index_decl:
            raise UnknownIndexSymbol(f"{index!r} is not declared")
        args.insert(0, index)
    elif index is not None:
        raise ArityMismatch(f"{entry!r} is not indexed; no index value expected")
    result = _Machine(p, bindings or {}).apply(entry, args)
    if not isinstance(result, int):
        raise TypeError(f"{entry!r} returned a non-integer {result!r}")
    return result
