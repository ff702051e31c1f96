"""Abstract syntax for the indexed IR, plus its error types.

Programs are immutable trees of frozen dataclasses, so structural equality
is plain ``==``. Values are 64-bit two's-complement integers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Union

INDEX_PARAM = "idx"
PRIM_OPS = ("+", "-", "*", "<", "=")

_MOD = 1 << 64
_HALF = 1 << 63


def wrap64(x: int) -> int:
    """Reduce ``x`` to a signed 64-bit integer."""
    return ((x + _HALF) % _MOD) - _HALF


# ---------------------------------------------------------------------------
# errors


class IrError(Exception):
    """Base class for every specializer error."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class IrSyntaxError(IrError):
    pass


class DuplicateName(IrError):
    pass


class UnknownIndexSymbol(IrError):
    pass


class NonTotalIndexMatch(IrError):
    pass


class IndexMisuse(IrError):
    """``idx`` used anywhere but as an indexed function's first parameter or argument."""


class UnboundName(IrError):
    pass


class ArityMismatch(IrError):
    pass


class ExternWithoutBody(IrError):
    pass


class CycleDetected(IrError):
    def __init__(self, cycle: list[str]):
        super().__init__("recursion is not supported: " + " -> ".join(cycle))
        self.cycle = cycle


class UnboundCallee(IrError):
    pass


class UnboundExtern(IrError):
    pass


class NameCollision(IrError):
    pass


class InvalidEntryPoint(IrError):
    pass


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Let:
    name: str
    bound: "Expr"
    body: "Expr"


@dataclass(frozen=True)
class Prim:
    op: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Ifz:
    cond: "Expr"
    then: "Expr"
    orelse: "Expr"


@dataclass(frozen=True)
class Call:
    callee: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class MatchIdx:
    arms: tuple[tuple[str, "Expr"], ...]

    def arm(self, symbol: str) -> "Expr":
        for sym, expr in self.arms:
            if sym == symbol:
                return expr
        raise UnknownIndexSymbol(f"no match-idx arm for {symbol!r}")


Expr = Union[Int, Var, Let, Prim, Ifz, Call, MatchIdx]


def subexprs(e: Expr) -> Iterator[Expr]:
    """Pre-order, left-to-right walk of ``e``."""
    yield e
    if isinstance(e, Let):
        yield from subexprs(e.bound)
        yield from subexprs(e.body)
    elif isinstance(e, (Prim, Call)):
        for a in e.args:
            yield from subexprs(a)
    elif isinstance(e, Ifz):
        yield from subexprs(e.cond)
        yield from subexprs(e.then)
        yield from subexprs(e.orelse)
    elif isinstance(e, MatchIdx):
        for _, a in e.arms:
            yield from subexprs(a)


def calls_in(e: Expr) -> Iterator[Call]:
    for sub in subexprs(e):
        if isinstance(sub, Call):
            yield sub


# ---------------------------------------------------------------------------
# top-level items


class Attribute(enum.Enum):
    SPECIALIZE = "specialize"
    ELIMINATE = "eliminate"


@dataclass(frozen=True)
class IrFunction:
    name: str
    attribute: Attribute
    params: tuple[str, ...]
    body: Expr
    #: function-valued parameters added by functorization (listed after ``idx``)
    fparams: tuple[str, ...] = ()

    @property
    def indexed(self) -> bool:
        return bool(self.params) and self.params[0] == INDEX_PARAM

    @property
    def value_params(self) -> tuple[str, ...]:
        skip = (1 if self.indexed else 0) + len(self.fparams)
        return self.params[skip:]

    @property
    def arity(self) -> int:
        """Number of value arguments (the index and function parameters excluded)."""
        return len(self.value_params)


@dataclass(frozen=True)
class Extern:
    """An abstract, indexed leaf: a signature without a body."""

    name: str
    attribute: Attribute
    arity: int

    indexed = True


@dataclass(frozen=True)
class IrProgram:
    index_decl: tuple[str, ...] = ()
    functions: tuple[IrFunction, ...] = ()
    externs: tuple[Extern, ...] = ()
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        table: dict[str, IrFunction | Extern] = {}
        for item in (*self.externs, *self.functions):
            table.setdefault(item.name, item)
        object.__setattr__(self, "_lookup", table)

    def get(self, name: str) -> IrFunction | Extern | None:
        return self._lookup.get(name)

    def function(self, name: str) -> IrFunction:
        item = self._lookup.get(name)
        if not isinstance(item, IrFunction):
            raise UnboundName(f"no function named {name!r}")
        return item

    @property
    def names(self) -> set[str]:
        return set(self._lookup)

    def merged(self, other: "IrProgram") -> "IrProgram":
        """This program extended with the definitions of ``other``.

        ``other``'s index declaration must be empty or identical to this one.
        A definition present in both is taken once if the two are identical.
        """
        if other.index_decl and other.index_decl != self.index_decl:
            raise UnknownIndexSymbol(
                f"cannot merge index ({' '.join(other.index_decl)}) into ({' '.join(self.index_decl)})"
            )
        clash = sorted(
            n for n in self.names & other.names if self.get(n) != other.get(n)
        )
        if clash:
            raise DuplicateName(f"merged programs define {clash} differently")
        mine = self.names
        return IrProgram(
            self.index_decl,
            self.functions + tuple(f for f in other.functions if f.name not in mine),
            self.externs + tuple(e for e in other.externs if e.name not in mine),
        )
