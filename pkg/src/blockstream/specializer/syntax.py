"""Text format of the IR: s-expression parser, validator and canonical printer.

::

    program    := index-decl form*
    index-decl := "(index" SYM* ")"
    form       := "(fn" NAME "[" attr "]" "(" param* ")" expr ")"
                | "(extern" NAME "[" attr "]" arity ")"
    attr       := "specialize" | "eliminate"
    expr       := INT | NAME | "(let" NAME expr expr ")" | "(call" NAME expr* ")"
                | "(" op expr expr ")" | "(ifz" expr expr expr ")"
                | "(match-idx" ("(" SYM expr ")")+ ")"
    op         := "+" | "-" | "*" | "<" | "="

``;`` starts a comment running to the end of the line. The printer emits one
top-level form per line with single spaces between tokens, and
``parse_ir(emit_ir(p)) == p`` for every valid program ``p``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from blockstream.specializer.ir import (
    INDEX_PARAM,
    PRIM_OPS,
    ArityMismatch,
    Attribute,
    Call,
    DuplicateName,
    Expr,
    Extern,
    Ifz,
    IndexMisuse,
    Int,
    IrFunction,
    IrProgram,
    IrError,
    IrSyntaxError,
    Let,
    MatchIdx,
    NonTotalIndexMatch,
    Prim,
    UnboundName,
    UnknownIndexSymbol,
    Var,
    wrap64,
)

__all__ = ["emit_expr", "emit_ir", "parse_ir", "validate"]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INT = re.compile(r"-?[0-9]+\Z")
_KEYWORDS = {"index", "fn", "extern", "let", "call", "ifz", "match-idx", "specialize", "eliminate"}


# ---------------------------------------------------------------------------
# reader


@dataclass
class Tok:
    text: str
    line: int
    col: int


@dataclass
class SList:
    items: list
    open: Tok
    bracket: bool = False


def _tokenize(text: str) -> list[Tok]:
    toks: list[Tok] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()[]":
            toks.append(Tok(ch, line, col))
            i += 1
            col += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()[];":
                j += 1
            toks.append(Tok(text[i:j], line, col))
            col += j - i
            i = j
    return toks


def _read(toks: list[Tok]) -> list:
    forms: list = []
    stack: list[SList] = []
    closers = {"(": ")", "[": "]"}
    for tok in toks:
        if tok.text in "([":
            stack.append(SList([], tok, tok.text == "["))
        elif tok.text in ")]":
            if not stack:
                raise IrSyntaxError(f"unbalanced {tok.text!r}", tok.line, tok.col)
            top = stack.pop()
            if closers[top.open.text] != tok.text:
                raise IrSyntaxError(
                    f"{tok.text!r} closes {top.open.text!r} opened at {top.open.line}:{top.open.col}",
                    tok.line,
                    tok.col,
                )
            (stack[-1].items if stack else forms).append(top)
        elif stack:
            stack[-1].items.append(tok)
        else:
            raise IrSyntaxError(f"unexpected {tok.text!r} outside a form", tok.line, tok.col)
    if stack:
        top = stack[-1].open
        raise IrSyntaxError(f"{top.text!r} is never closed", top.line, top.col)
    return forms


# ---------------------------------------------------------------------------
# forms -> AST


def _where(node) -> Tok:
    return node.open if isinstance(node, SList) else node


def _fail(node, message: str, cls=IrSyntaxError):
    t = _where(node)
    raise cls(message, t.line, t.col)


def _name(node, what: str) -> str:
    if not isinstance(node, Tok) or not _NAME.match(node.text) or node.text in _KEYWORDS:
        shown = node.text if isinstance(node, Tok) else "a list"
        _fail(node, f"expected {what}, found {shown!r}")
    return node.text


def _keyword(lst: SList) -> str | None:
    if lst.items and isinstance(lst.items[0], Tok):
        return lst.items[0].text
    return None


def _expr(node, symbols: tuple[str, ...]) -> Expr:
    if isinstance(node, Tok):
        if _INT.match(node.text):
            return Int(wrap64(int(node.text)))
        return Var(_name(node, "an expression"))
    if node.bracket:
        _fail(node, "unexpected '[' in expression")
    head = _keyword(node)
    items = node.items
    if head == "let":
        if len(items) != 4:
            _fail(node, "let takes a name, a bound expression and a body")
        return Let(_name(items[1], "a let-bound name"), _expr(items[2], symbols), _expr(items[3], symbols))
    if head == "call":
        if len(items) < 2:
            _fail(node, "call needs a callee")
        return Call(_name(items[1], "a callee name"), tuple(_expr(a, symbols) for a in items[2:]))
    if head in PRIM_OPS:
        if len(items) != 3:
            _fail(node, f"{head} takes exactly two operands")
        return Prim(head, (_expr(items[1], symbols), _expr(items[2], symbols)))
    if head == "ifz":
        if len(items) != 4:
            _fail(node, "ifz takes a condition and two branches")
        return Ifz(*(_expr(a, symbols) for a in items[1:]))
    if head == "match-idx":
        return _match(node, symbols)
    _fail(node, f"unknown expression form {head!r}" if head else "empty or malformed expression")


def _match(node: SList, symbols: tuple[str, ...]) -> MatchIdx:
    arms = []
    seen: set[str] = set()
    for arm in node.items[1:]:
        if not isinstance(arm, SList) or arm.bracket or len(arm.items) != 2:
            _fail(arm, "match-idx arms look like (SYMBOL expr)")
        sym = _name(arm.items[0], "an index symbol")
        if sym not in symbols:
            _fail(arm.items[0], f"{sym!r} is not a declared index symbol", UnknownIndexSymbol)
        if sym in seen:
            _fail(arm.items[0], f"duplicate match-idx arm for {sym!r}", NonTotalIndexMatch)
        seen.add(sym)
        arms.append((sym, _expr(arm.items[1], symbols)))
    missing = [s for s in symbols if s not in seen]
    if missing:
        _fail(node, f"match-idx does not cover {', '.join(missing)}", NonTotalIndexMatch)
    return MatchIdx(tuple(arms))


def _attribute(node) -> Attribute:
    if not (isinstance(node, SList) and node.bracket and len(node.items) == 1 and isinstance(node.items[0], Tok)):
        _fail(node, "expected [specialize] or [eliminate]")
    try:
        return Attribute(node.items[0].text)
    except ValueError:
        _fail(node.items[0], f"unknown attribute {node.items[0].text!r}")


def _with_attribute(form: SList, items: list, arity: int, usage: str) -> tuple:
    """Attribute plus the ``arity`` items that follow it in a top-level form.

    The attribute may be omitted, in which case it defaults to specialize.
    """
    if len(items) == arity + 3:
        return (_attribute(items[2]), *items[3:])
    if len(items) == arity + 2 and not (isinstance(items[2], SList) and items[2].bracket):
        return (Attribute.SPECIALIZE, *items[2:])
    _fail(form, usage)


def _index_decl(node) -> tuple[str, ...]:
    if not isinstance(node, SList) or node.bracket or _keyword(node) != "index":
        _fail(node, "a program starts with (index SYMBOL ...)")
    syms = tuple(_name(t, "an index symbol") for t in node.items[1:])
    dup = {s for s in syms if syms.count(s) > 1}
    if dup:
        _fail(node, f"index symbol declared twice: {sorted(dup)}", DuplicateName)
    return syms


def parse_ir(text: str) -> IrProgram:
    """Parse and validate a program; errors carry the offending line and column."""
    forms = _read(_tokenize(text))
    if not forms:
        raise IrSyntaxError("empty program; expected (index ...)", 1, 1)
    symbols = _index_decl(forms[0])
    functions: list[IrFunction] = []
    externs: list[Extern] = []
    seen: dict[str, Tok] = {}
    for form in forms[1:]:
        if not isinstance(form, SList) or form.bracket:
            _fail(form, "expected (fn ...) or (extern ...)")
        head = _keyword(form)
        items = form.items
        if head == "fn":
            rest = _with_attribute(form, items, 2, "fn takes a name, [attribute], (params) and a body")
            name = _name(items[1], "a function name")
            attr, plist, body = rest
            if not isinstance(plist, SList) or plist.bracket:
                _fail(plist, "expected a parenthesized parameter list")
            params = tuple(
                INDEX_PARAM if (isinstance(p, Tok) and p.text == INDEX_PARAM) else _name(p, "a parameter")
                for p in plist.items
            )
            item = IrFunction(name, attr, params, _expr(body, symbols))
            functions.append(item)
        elif head == "extern":
            attr, arity = _with_attribute(form, items, 1, "extern takes a name, [attribute] and an arity")
            name = _name(items[1], "an extern name")
            if not (isinstance(arity, Tok) and arity.text.isdigit()):
                _fail(arity, "extern arity must be a non-negative integer")
            item = Extern(name, attr, int(arity.text))
            externs.append(item)
        else:
            _fail(form, f"unknown top-level form {head!r}")
        if name in seen:
            _fail(items[1], f"{name!r} already defined at {seen[name].line}:{seen[name].col}", DuplicateName)
        seen[name] = items[1]
    program = IrProgram(symbols, tuple(functions), tuple(externs))
    validate(program, {n: (t.line, t.col) for n, t in seen.items()})
    return program


# ---------------------------------------------------------------------------
# validation


def validate(p: IrProgram, positions: dict[str, tuple[int, int]] | None = None) -> None:
    """Check scoping, index usage and call arities of a source program.

    ``positions`` maps definition names to source locations; errors found
    inside a definition are reported at its name.
    """
    names = [item.name for item in (*p.externs, *p.functions)]
    dup = sorted({n for n in names if names.count(n) > 1})
    if dup:
        raise DuplicateName(f"defined more than once: {dup}")
    globals_ = set(names)
    if INDEX_PARAM in globals_:
        raise IndexMisuse("idx is reserved and cannot name a definition")
    for ext in p.externs:
        if ext.attribute is not Attribute.SPECIALIZE:
            raise IndexMisuse(f"extern {ext.name!r} has no body and cannot be eliminated")
    for fn in p.functions:
        where = f"in {fn.name!r}"
        try:
            if INDEX_PARAM in fn.params[1:]:
                raise IndexMisuse(f"{where}: idx may only be the first parameter")
            seen: set[str] = set()
            for prm in fn.value_params:
                if prm in seen:
                    raise DuplicateName(f"{where}: parameter {prm!r} repeated")
                if prm in globals_:
                    raise DuplicateName(f"{where}: parameter {prm!r} shadows a top-level definition")
                seen.add(prm)
            _check_expr(p, fn, fn.body, set(fn.value_params), globals_, where)
        except IrError as exc:
            if exc.line is None and positions and fn.name in positions:
                raise type(exc)(str(exc), *positions[fn.name]) from None
            raise


def _check_expr(p, fn, e, scope, globals_, where) -> None:
    if isinstance(e, Int):
        return
    if isinstance(e, Var):
        if e.name == INDEX_PARAM:
            raise IndexMisuse(f"{where}: idx is not a value")
        if e.name not in scope:
            raise UnboundName(f"{where}: unbound variable {e.name!r}")
        return
    if isinstance(e, Let):
        if e.name == INDEX_PARAM or e.name in globals_:
            raise DuplicateName(f"{where}: let-bound {e.name!r} shadows a top-level name")
        _check_expr(p, fn, e.bound, scope, globals_, where)
        _check_expr(p, fn, e.body, scope | {e.name}, globals_, where)
        return
    if isinstance(e, (Prim, Ifz)):
        subs = e.args if isinstance(e, Prim) else (e.cond, e.then, e.orelse)
        for a in subs:
            _check_expr(p, fn, a, scope, globals_, where)
        return
    if isinstance(e, MatchIdx):
        if not fn.indexed:
            raise IndexMisuse(f"{where}: match-idx outside an indexed function")
        for _, a in e.arms:
            _check_expr(p, fn, a, scope, globals_, where)
        return
    if isinstance(e, Call):
        callee = p.get(e.callee)
        if callee is None:
            raise UnboundName(f"{where}: call to undefined {e.callee!r}")
        args = e.args
        if callee.indexed:
            if not fn.indexed:
                raise IndexMisuse(f"{where}: {e.callee!r} is indexed but the caller has no idx")
            if not args or args[0] != Var(INDEX_PARAM):
                raise IndexMisuse(f"{where}: calls to indexed {e.callee!r} pass idx first")
            args = args[1:]
        if len(args) != callee.arity:
            raise ArityMismatch(f"{where}: {e.callee!r} takes {callee.arity} arguments, given {len(args)}")
        for a in args:
            _check_expr(p, fn, a, scope, globals_, where)
        return
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# printer


def emit_expr(e: Expr) -> str:
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Let):
        return f"(let {e.name} {emit_expr(e.bound)} {emit_expr(e.body)})"
    if isinstance(e, Prim):
        return f"({e.op} {' '.join(emit_expr(a) for a in e.args)})"
    if isinstance(e, Ifz):
        return f"(ifz {emit_expr(e.cond)} {emit_expr(e.then)} {emit_expr(e.orelse)})"
    if isinstance(e, Call):
        return "(call " + " ".join([e.callee, *(emit_expr(a) for a in e.args)]) + ")"
    if isinstance(e, MatchIdx):
        return "(match-idx " + " ".join(f"({s} {emit_expr(a)})" for s, a in e.arms) + ")"
    raise TypeError(f"not an expression: {e!r}")


def emit_ir(p: IrProgram) -> str:
    """Canonical text: index header, externs, then functions, one form per line.

    Function parameters added by functorization print inline after ``idx``,
    so functorized programs print but do not re-parse.
    """
    lines = ["(index" + "".join(f" {s}" for s in p.index_decl) + ")"]
    for ext in p.externs:
        lines.append(f"(extern {ext.name} [{ext.attribute.value}] {ext.arity})")
    for fn in p.functions:
        lines.append(f"(fn {fn.name} [{fn.attribute.value}] ({' '.join(fn.params)}) {emit_expr(fn.body)})")
    return "\n".join(lines) + "\n"
