"""Layered DAG of candidate strata over distinct-value indexes.

Nodes are the group indexes 1..K plus a terminal node K+1. An arc (i, j)
placed at layer h stands for stratum h covering groups i..j-1, and a source
to terminal path with exactly L arcs is a complete stratification. Arcs with
j - i = 1 never appear: a one-group stratum cannot be guaranteed two units
of every candidate split, so each stratum must span at least two groups.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InfeasibleProblemError
from .moments import PrefixMoments, segment_stats, unit_cost


@dataclass(frozen=True, slots=True)
class Arc:
    """Candidate stratum covering groups tail..head-1, usable at one layer."""

    tail: int
    head: int
    layer: int
    cost: float | None = None


@dataclass(frozen=True, slots=True)
class LayeredGraph:
    """Arcs grouped per stratum layer, each layer ordered by (tail, head)."""

    K: int
    L: int
    layers: tuple[tuple[Arc, ...], ...]

    @property
    def source(self) -> int:
        return 1

    @property
    def sink(self) -> int:
        return self.K + 1


def build_layered_graph(K: int, L: int) -> LayeredGraph:
    """Construct the uncosted graph for K distinct values and L strata.

    Node bounds per layer keep every arc on some full source to terminal
    path: layer 1 starts at node 1 only, layer L ends at node K+1 only, and
    a middle layer h spans tails 2h-1..K-1-2(L-h) with heads up to
    K+1-2(L-h). Every head sits at least two past its tail.

    Raises InfeasibleProblemError when K < 2L. L must be at least 2; a
    single stratum needs no graph.
    """
    if L < 2:
        raise ValueError(f"layered graph needs at least two strata, got L={L}")
    _check_feasible(K, L)
    layers: list[tuple[Arc, ...]] = []
    for h in range(1, L + 1):
        arcs: list[Arc] = []
        tails = (1,) if h == 1 else range(2 * h - 1, K - 2 * (L - h))
        for i in tails:
            heads = (K + 1,) if h == L else range(i + 2, K + 2 - 2 * (L - h))
            for j in heads:
                arcs.append(Arc(i, j, h))
        layers.append(tuple(arcs))

    span = K - 2 * L + 1
    assert len(layers[0]) == span and len(layers[-1]) == span
    assert all(len(mid) == span * (span + 1) // 2 for mid in layers[1:-1])
    return LayeredGraph(K, L, tuple(layers))


def arc_counts(K: int, L: int) -> tuple[int, int, int, int]:
    """Closed-form layer sizes (first, last, each middle, total)."""
    if L < 2:
        raise ValueError(f"arc counts are defined for L >= 2, got L={L}")
    _check_feasible(K, L)
    span = K - 2 * L + 1
    middle = span * (span + 1) // 2
    return span, span, middle, 2 * span + (L - 2) * middle


def attach_costs(graph: LayeredGraph, pm: PrefixMoments) -> LayeredGraph:
    """Return a copy of the graph with every arc costed as N_h * S2_h.

    Every arc spans at least two groups and every group holds at least one
    unit, so no segment can be degenerate here.
    """
    if pm.K != graph.K:
        raise ValueError(
            f"prefix moments cover {pm.K} groups, graph expects {graph.K}"
        )
    layers = tuple(
        tuple(
            replace(arc, cost=unit_cost(segment_stats(pm, arc.tail, arc.head)))
            for arc in layer
        )
        for layer in graph.layers
    )
    return LayeredGraph(graph.K, graph.L, layers)


def dump_arcs(graph: LayeredGraph) -> str:
    """Debug listing, one arc per line: layer, tail, head, cost."""
    lines = []
    for layer in graph.layers:
        for arc in layer:
            cost = "" if arc.cost is None else repr(arc.cost)
            lines.append(f"{arc.layer}\t{arc.tail}\t{arc.head}\t{cost}")
    return "\n".join(lines)


def _check_feasible(K: int, L: int) -> None:
    if K < 2 * L:
        raise InfeasibleProblemError(
            f"{K} distinct values cannot form {L} strata of at least two "
            "distinct values each"
        )
