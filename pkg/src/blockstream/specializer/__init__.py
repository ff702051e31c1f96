"""Whole-program specializer for a small indexed IR.

``parse_ir`` -> ``functorize`` -> ``instantiate`` -> ``emit_ir``, with
``interpret`` as the semantic oracle for checking that the rewrite preserves
behavior.
"""
from blockstream.specializer.callgraph import CallGraph, build_call_graph
from blockstream.specializer.interp import FunRef, interpret
from blockstream.specializer.ir import (
    ArityMismatch,
    Attribute,
    CycleDetected,
    DuplicateName,
    ExternWithoutBody,
    IndexMisuse,
    InvalidEntryPoint,
    IrError,
    IrFunction,
    IrProgram,
    IrSyntaxError,
    NameCollision,
    NonTotalIndexMatch,
    UnboundCallee,
    UnboundExtern,
    UnboundName,
    UnknownIndexSymbol,
)
from blockstream.specializer.rewrite import SpecializationRequest, functorize, instantiate, specialize
from blockstream.specializer.syntax import emit_ir, parse_ir

__all__ = [
    "ArityMismatch",
    "Attribute",
    "CallGraph",
    "CycleDetected",
    "DuplicateName",
    "ExternWithoutBody",
    "FunRef",
    "IndexMisuse",
    "InvalidEntryPoint",
    "IrError",
    "IrFunction",
    "IrProgram",
    "IrSyntaxError",
    "NameCollision",
    "NonTotalIndexMatch",
    "SpecializationRequest",
    "UnboundCallee",
    "UnboundExtern",
    "UnboundName",
    "UnknownIndexSymbol",
    "build_call_graph",
    "emit_ir",
    "functorize",
    "instantiate",
    "interpret",
    "parse_ir",
    "specialize",
]
