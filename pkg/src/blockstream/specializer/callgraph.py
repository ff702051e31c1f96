"""Call graphs over IR programs."""
from __future__ import annotations

import graphlib
from dataclasses import dataclass

from blockstream.specializer.ir import CycleDetected, IrFunction, IrProgram, calls_in


@dataclass(frozen=True)
class CallGraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    #: callees before callers
    order: tuple[str, ...]

    def callees(self, name: str) -> list[str]:
        return sorted(b for a, b in self.edges if a == name)

    def callers(self, name: str) -> list[str]:
        return sorted(a for a, b in self.edges if b == name)


def direct_callees(fn: IrFunction, program: IrProgram) -> list[str]:
    """Top-level definitions called from ``fn``'s body, in first-occurrence order.

    Calls through function-valued parameters are not edges.
    """
    local = set(fn.fparams)
    out: list[str] = []
    for call in calls_in(fn.body):
        name = call.callee
        if name not in local and program.get(name) is not None and name not in out:
            out.append(name)
    return out


def build_call_graph(p: IrProgram) -> CallGraph:
    """Edges are exactly the syntactic calls. Raises :class:`CycleDetected` on recursion."""
    nodes = tuple(item.name for item in (*p.externs, *p.functions))
    deps: dict[str, list[str]] = {name: [] for name in nodes}
    edges = set()
    for fn in p.functions:
        for callee in direct_callees(fn, p):
            deps[fn.name].append(callee)
            edges.add((fn.name, callee))
    sorter = graphlib.TopologicalSorter(deps)
    try:
        order = tuple(sorter.static_order())
    except graphlib.CycleError as err:
        cycle = list(err.args[1])
        # graphlib reports the cycle callee-first; present it caller-first
        raise CycleDetected(cycle[::-1]) from None
    return CallGraph(nodes, frozenset(edges), order)
