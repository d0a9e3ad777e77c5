"""Minimum-cost path with exactly L arcs, and its survey-report translation.

The variance of the estimated total under proportional allocation is a fixed
population factor times the summed arc costs of a source to terminal path,
so the best stratification is the cheapest path using one arc per layer.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

from .errors import ConsistencyError, InfeasibleProblemError, InvalidSpecError
from .graph import LayeredGraph, attach_costs, build_layered_graph
from .moments import (
    PrefixMoments,
    ProblemSpec,
    allocate_proportional,
    build_prefix_moments,
    coefficient_of_variation,
    cost_units_to_float,
    exact_cost_units,
    segment_stats,
    segment_stats_direct,
    total_variance_proportional,
    unit_cost,
)
from .population import FrequencyTable

# relative gap between the prefix and direct segment routes that flags a bug
_SELF_CHECK_RTOL = 1e-7


@dataclass(frozen=True, slots=True)
class PathSolution:
    """Node sequence of one source to terminal path and its summed cost."""

    nodes: tuple[int, ...]
    total_unit_cost: float


@dataclass(frozen=True, slots=True)
class StratumReport:
    """Reported figures for one stratum."""

    size: int
    variance: float
    y_total: float
    sample_fraction: float
    sample_size: int


@dataclass(frozen=True, slots=True)
class StratificationSolution:
    """Complete answer for one problem.

    boundaries holds the L-1 upper stratum boundaries (distinct x values),
    nodes the winning path, and variance the total-estimator variance, which
    always equals variance_factor(spec) * total_unit_cost.
    """

    boundaries: tuple[float, ...]
    strata: tuple[StratumReport, ...]
    nodes: tuple[int, ...]
    total_unit_cost: float
    variance: float
    cv: float
    elapsed: float

    @property
    def N(self) -> int:
        return sum(report.size for report in self.strata)

    @property
    def K(self) -> int:
        return self.nodes[-1] - 1


def solve(graph: LayeredGraph) -> PathSolution:
    """Cheapest path from source to terminal using one arc per layer.

    Arc costs are carried as exact integer units, so path sums do not depend
    on summation order and equal-cost paths are genuinely tied. Dynamic
    program over layers: completion[h][i] is the least cost from node i to
    the terminal through layers h..L. Ties are broken toward the
    lexicographically smallest node sequence by walking forward and taking
    the smallest head whose completion matches.
    """
    scaled: list[list[tuple[int, int, int]]] = []
    for layer in graph.layers:
        rows: list[tuple[int, int, int]] = []
        for arc in layer:
            if arc.cost is None:
                raise ValueError("graph has no costs attached")
            rows.append((arc.tail, arc.head, exact_cost_units(arc.cost)))
        scaled.append(rows)

    completion: list[dict[int, int]] = [{} for _ in range(graph.L + 2)]
    completion[graph.L + 1] = {graph.sink: 0}
    for h in range(graph.L, 0, -1):
        onward = completion[h + 1]
        table = completion[h]
        for tail, head, units in scaled[h - 1]:
            total = units + onward[head]
            best = table.get(tail)
            if best is None or total < best:
                table[tail] = total

    nodes = [graph.source]
    for h in range(1, graph.L + 1):
        here = nodes[-1]
        target = completion[h][here]
        onward = completion[h + 1]
        for tail, head, units in scaled[h - 1]:  # ordered by (tail, head)
            if tail == here and units + onward[head] == target:
                nodes.append(head)
                break
        else:
            raise ConsistencyError(f"no arc out of node {here} matches its label")
    return PathSolution(tuple(nodes), cost_units_to_float(completion[1][graph.source]))


def path_to_solution(
    path: PathSolution,
    pm: PrefixMoments,
    ft: FrequencyTable,
    spec: ProblemSpec,
    elapsed: float = 0.0,
) -> StratificationSolution:
    """Expand a path into boundaries, per-stratum figures, variance, and CV.

    Every stratum is recomputed through the direct per-group route as a
    self-check against the prefix-difference costs; a relative gap beyond
    1e-7 raises ConsistencyError.
    """
    nodes = path.nodes
    if nodes[0] != 1 or nodes[-1] != ft.K + 1:
        raise ValueError(f"path {nodes} does not span groups 1..{ft.K}")
    if len(nodes) - 1 != spec.L:
        raise ValueError(f"path has {len(nodes) - 1} arcs, spec wants {spec.L}")
    if spec.N != ft.N:
        raise InvalidSpecError(f"spec N={spec.N} does not match table N={ft.N}")

    costs: list[float] = []
    stats_by_stratum = []
    for i, j in zip(nodes, nodes[1:]):
        fast = segment_stats(pm, i, j)
        slow = segment_stats_direct(ft, i, j)
        if fast.n_pop != slow.n_pop:
            raise ConsistencyError(
                f"unit counts disagree for groups {i}..{j - 1}: "
                f"{fast.n_pop} vs {slow.n_pop}"
            )
        fast_cost = unit_cost(fast)
        slow_cost = unit_cost(slow)
        gap = abs(fast_cost - slow_cost)
        if gap > _SELF_CHECK_RTOL * max(abs(fast_cost), abs(slow_cost)):
            raise ConsistencyError(
                f"segment cost mismatch for groups {i}..{j - 1}: "
                f"{fast_cost} vs {slow_cost}"
            )
        costs.append(fast_cost)
        stats_by_stratum.append(fast)

    fractional, rounded = allocate_proportional(
        [s.n_pop for s in stats_by_stratum], spec
    )
    variance = total_variance_proportional(costs, spec)
    cv = coefficient_of_variation(variance, math.fsum(ft.y_sum))
    boundaries = tuple(ft.q[node - 2] for node in nodes[1:-1])
    strata = tuple(
        StratumReport(s.n_pop, s.s2, s.y_total, frac, size)
        for s, frac, size in zip(stats_by_stratum, fractional, rounded)
    )
    return StratificationSolution(
        boundaries=boundaries,
        strata=strata,
        nodes=nodes,
        total_unit_cost=math.fsum(costs),
        variance=variance,
        cv=cv,
        elapsed=elapsed,
    )


def solve_problem(ft: FrequencyTable, spec: ProblemSpec) -> StratificationSolution:
    """Solve one stratification problem end to end.

    L = 1 needs no graph: the single stratum spans everything. For L >= 2
    the costed layered graph is built and searched. Either way the result
    carries wall-clock elapsed seconds.

    Raises InfeasibleProblemError when K < 2L (each stratum must get at
    least two distinct values, so a lone distinct value cannot even fill a
    single stratum).
    """
    start = time.perf_counter()
    if spec.N != ft.N:
        raise InvalidSpecError(f"spec N={spec.N} does not match table N={ft.N}")
    if ft.K < 2 * spec.L:
        raise InfeasibleProblemError(
            f"{ft.K} distinct values cannot form {spec.L} strata of at least "
            "two distinct values each"
        )
    pm = build_prefix_moments(ft)
    if spec.L == 1:
        cost = unit_cost(segment_stats(pm, 1, ft.K + 1))
        path = PathSolution((1, ft.K + 1), cost)
    else:
        graph = attach_costs(build_layered_graph(ft.K, spec.L), pm)
        path = solve(graph)
    solution = path_to_solution(path, pm, ft, spec)
    return replace(solution, elapsed=time.perf_counter() - start)
