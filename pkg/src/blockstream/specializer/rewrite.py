"""Call-graph rewriting: functorize an indexed program, then instantiate it.

*Functorize* turns every indexed function ``f`` into ``mk_f`` taking, after
``idx``, one function parameter per ``[specialize]`` node reachable from its
body through ``[eliminate]`` nodes only. Calls to specialize nodes go through
those parameters (the index argument disappears); calls to eliminate nodes
become calls to their ``mk_`` form, forwarding ``idx`` and the parameters
they need, always a subset of the caller's own.

*Instantiate* fixes the index and the implementations of extern leaves,
emitting a first-order program: specialize nodes become ``<name>_<suffix>``
definitions (callees first), eliminate nodes are inlined away, ``match-idx``
collapses to the selected arm.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from blockstream.specializer.callgraph import build_call_graph
from blockstream.specializer.ir import (
    INDEX_PARAM,
    Attribute,
    Call,
    Expr,
    Extern,
    Ifz,
    Int,
    InvalidEntryPoint,
    IrFunction,
    IrProgram,
    Let,
    MatchIdx,
    NameCollision,
    Prim,
    UnboundCallee,
    UnboundExtern,
    UnknownIndexSymbol,
    Var,
)

MK_PREFIX = "mk_"

__all__ = ["SpecializationRequest", "functorize", "instantiate", "needed", "specialize"]


@dataclass(frozen=True)
class SpecializationRequest:
    index_value: str
    bindings: dict[str, str] = field(default_factory=dict)
    entry_points: tuple[str, ...] = ()
    mangle_suffix: str = "spec"

    def mangle(self, name: str) -> str:
        return f"{name}_{self.mangle_suffix}"


def _is_specialize_node(item) -> bool:
    return isinstance(item, Extern) or (
        isinstance(item, IrFunction) and item.indexed and item.attribute is Attribute.SPECIALIZE
    )


def _is_eliminated(item) -> bool:
    return isinstance(item, IrFunction) and item.attribute is Attribute.ELIMINATE


def needed(p: IrProgram) -> dict[str, tuple[str, ...]]:
    """For each indexed function, the specialize nodes it must receive, in order.

    Order is depth-first first occurrence over the body, expanding calls to
    eliminate nodes in place.
    """
    build_call_graph(p)  # rejects recursion before the walk below could loop
    memo: dict[str, tuple[str, ...]] = {}

    def walk(fn: IrFunction) -> tuple[str, ...]:
        if fn.name in memo:
            return memo[fn.name]
        out: list[str] = []
        for call in _calls_in_order(fn.body):
            callee = p.get(call.callee)
            if callee is None:
                raise UnboundCallee(f"in {fn.name!r}: call to undefined {call.callee!r}")
            if _is_specialize_node(callee):
                found: tuple[str, ...] = (callee.name,)
            elif callee.indexed and _is_eliminated(callee):
                found = walk(callee)
            else:
                found = ()
            out.extend(g for g in found if g not in out)
        memo[fn.name] = tuple(out)
        return memo[fn.name]

    return {fn.name: walk(fn) for fn in p.functions if fn.indexed}


def _calls_in_order(e: Expr):
    # callee before its arguments, left to right
    if isinstance(e, Call):
        yield e
        for a in e.args:
            yield from _calls_in_order(a)
    elif isinstance(e, Let):
        yield from _calls_in_order(e.bound)
        yield from _calls_in_order(e.body)
    elif isinstance(e, Prim):
        for a in e.args:
            yield from _calls_in_order(a)
    elif isinstance(e, Ifz):
        for a in (e.cond, e.then, e.orelse):
            yield from _calls_in_order(a)
    elif isinstance(e, MatchIdx):
        for _, a in e.arms:
            yield from _calls_in_order(a)


# ---------------------------------------------------------------------------
# functorize


def functorize(p: IrProgram) -> IrProgram:
    needs = needed(p)
    taken = p.names

    def rewrite(e: Expr) -> Expr:
        if isinstance(e, Call):
            args = tuple(rewrite(a) for a in e.args)
            callee = p.get(e.callee)
            if callee is None:
                raise UnboundCallee(f"call to undefined {e.callee!r}")
            if _is_specialize_node(callee):
                return Call(e.callee, args[1:])
            if callee.indexed:
                forwarded = tuple(Var(g) for g in needs[callee.name])
                return Call(MK_PREFIX + callee.name, (args[0], *forwarded, *args[1:]))
            return Call(e.callee, args)
        if isinstance(e, Let):
            return Let(e.name, rewrite(e.bound), rewrite(e.body))
        if isinstance(e, Prim):
            return Prim(e.op, tuple(rewrite(a) for a in e.args))
        if isinstance(e, Ifz):
            return Ifz(rewrite(e.cond), rewrite(e.then), rewrite(e.orelse))
        if isinstance(e, MatchIdx):
            return MatchIdx(tuple((s, rewrite(a)) for s, a in e.arms))
        return e

    functions = []
    for fn in p.functions:
        if not fn.indexed:
            functions.append(fn)
            continue
        mk = MK_PREFIX + fn.name
        if mk in taken:
            raise NameCollision(f"functorized name {mk!r} is already defined")
        gs = needs[fn.name]
        functions.append(
            IrFunction(mk, fn.attribute, (INDEX_PARAM, *gs, *fn.value_params), rewrite(fn.body), fparams=gs)
        )
    return IrProgram(p.index_decl, tuple(functions), p.externs)


# ---------------------------------------------------------------------------
# instantiate


@dataclass(frozen=True)
class _Fn:
    """A function value during residualization: a top-level name to call."""

    name: str


class _Residualizer:
    """Rebuilds bodies under a fixed index, inlining eliminate nodes on the way."""

    def __init__(self, p: IrProgram, index_value: str):
        self.p = p
        self.index_value = index_value
        self.used: set[str] = set()
        self.reachable: list[str] = []

    def fresh(self, base: str) -> str:
        name, k = base, 0
        while name in self.used:
            k += 1
            name = f"{base}_{k}"
        self.used.add(name)
        return name

    def function(self, fn: IrFunction, env: dict) -> tuple[tuple[str, ...], Expr]:
        self.used = set(self.p.names) | set(env)
        params = []
        env = dict(env)
        for prm in fn.value_params:
            params.append(self.fresh(prm))
            env[prm] = Var(params[-1])
        return tuple(params), self.expr(fn.body, env)

    def expr(self, e: Expr, env: dict) -> Expr:
        if isinstance(e, Int):
            return e
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, Let):
            bound = self.expr(e.bound, env)
            name = self.fresh(e.name)
            return Let(name, bound, self.expr(e.body, {**env, e.name: Var(name)}))
        if isinstance(e, Prim):
            return Prim(e.op, tuple(self.expr(a, env) for a in e.args))
        if isinstance(e, Ifz):
            return Ifz(self.expr(e.cond, env), self.expr(e.then, env), self.expr(e.orelse, env))
        if isinstance(e, MatchIdx):
            return self.expr(e.arm(self.index_value), env)
        if isinstance(e, Call):
            return self.call(e, env)
        raise TypeError(f"not an expression: {e!r}")

    def call(self, e: Call, env: dict) -> Expr:
        target = env.get(e.callee)
        if isinstance(target, _Fn):
            return self.direct(target.name, tuple(self.expr(a, env) for a in e.args))
        callee = self.p.get(e.callee)
        if not isinstance(callee, IrFunction):
            raise UnboundCallee(f"call to {e.callee!r}, which has no definition here")
        if callee.indexed and callee.attribute is Attribute.ELIMINATE:
            inner_env: dict = {INDEX_PARAM: self.index_value}
            rest = list(e.args[1:])
            for g in callee.fparams:
                inner_env[g] = env[rest.pop(0).name]
            return self.inline(callee, inner_env, rest, env)
        if callee.indexed:
            raise UnboundCallee(f"{e.callee!r} is still generic; functorize the program first")
        return self.direct(callee.name, tuple(self.expr(a, env) for a in e.args))

    def direct(self, name: str, args: tuple[Expr, ...]) -> Expr:
        callee = self.p.get(name)
        if isinstance(callee, IrFunction) and not callee.indexed and callee.attribute is Attribute.ELIMINATE:
            return self.inline(callee, {}, list(args), None)
        if callee is not None and name not in self.reachable:
            self.reachable.append(name)
        return Call(name, args)

    def inline(self, fn: IrFunction, env: dict, args: list, arg_env: dict | None) -> Expr:
        """Beta-reduce a call to ``fn``: atoms substitute, anything else gets a let."""
        lets = []
        for prm, arg in zip(fn.value_params, args):
            value = arg if arg_env is None else self.expr(arg, arg_env)
            if isinstance(value, (Int, Var)):
                env[prm] = value
            else:
                name = self.fresh(prm)
                lets.append((name, value))
                env[prm] = Var(name)
        body = self.expr(fn.body, env)
        for name, value in reversed(lets):
            body = Let(name, value, body)
        return body


def instantiate(p: IrProgram, req: SpecializationRequest) -> IrProgram:
    """Specialize the functorized program ``p`` for ``req``.

    The output has an empty index declaration; it lists the concrete
    (non-indexed) definitions the specialized code calls, then the
    specialized definitions, callees before callers.
    """
    if req.index_value not in p.index_decl:
        raise UnknownIndexSymbol(f"{req.index_value!r} is not one of ({' '.join(p.index_decl)})")
    res = _Residualizer(p, req.index_value)
    emitted: dict[str, str] = {}
    specialized: list[IrFunction] = []
    taken = p.names

    def claim(name: str) -> str:
        out = req.mangle(name)
        if out in taken or out in emitted.values():
            raise NameCollision(f"specialized name {out!r} is already defined")
        return out

    def bound_impl(ext: str) -> str:
        impl = req.bindings.get(ext)
        if impl is None:
            raise UnboundExtern(f"no implementation bound for extern {ext!r}")
        target = p.get(impl)
        if not isinstance(target, IrFunction) or target.indexed:
            raise UnboundExtern(f"{ext!r} is bound to {impl!r}, which is not a concrete function")
        return impl

    def emit(name: str) -> str:
        if name in emitted:
            return emitted[name]
        mk = p.get(MK_PREFIX + name)
        if not isinstance(mk, IrFunction):
            raise InvalidEntryPoint(f"no functorized definition for {name!r}")
        env: dict = {INDEX_PARAM: req.index_value}
        for g in mk.fparams:
            env[g] = _Fn(bound_impl(g) if isinstance(p.get(g), Extern) else emit(g))
        out = claim(name)
        params, body = res.function(mk, env)
        specialized.append(IrFunction(out, Attribute.SPECIALIZE, params, body))
        emitted[name] = out
        return out

    for entry in req.entry_points:
        item = p.get(entry) or p.get(MK_PREFIX + entry)
        if item is None:
            raise InvalidEntryPoint(f"unknown entry point {entry!r}")
        if item.attribute is Attribute.ELIMINATE:
            raise InvalidEntryPoint(f"{entry!r} is marked eliminate and has no specialized form")
        if isinstance(item, Extern):
            raise InvalidEntryPoint(f"{entry!r} is an extern")
        if item.indexed:
            emit(entry)
        elif entry not in emitted:
            out = claim(entry)
            params, body = res.function(item, {})
            specialized.append(IrFunction(out, Attribute.SPECIALIZE, params, body))
            emitted[entry] = out

    # concrete callees, transitively, each residualized so eliminate calls vanish
    concrete: dict[str, IrFunction] = {}
    i = 0
    while i < len(res.reachable):
        name = res.reachable[i]
        i += 1
        if name in concrete:
            continue
        fn = p.function(name)
        params, body = res.function(fn, {})
        concrete[name] = IrFunction(name, fn.attribute, params, body)
    ordered = [concrete[fn.name] for fn in p.functions if fn.name in concrete]
    return IrProgram((), tuple(ordered + specialized), ())


def specialize(p: IrProgram, req: SpecializationRequest) -> IrProgram:
    """``instantiate(functorize(p), req)``."""
    return instantiate(functorize(p), req)
