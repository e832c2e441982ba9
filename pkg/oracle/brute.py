"""Reference minimizer for tiny Dirichlet problems.

Pure-python block coordinate descent on adjacency lists. It shares no code
with the sparse solvers or the graph builder; the tests use it as ground
truth. Each sweep moves single vertices, then shifts clusters of nearly
equal neighbors as one block, at every gap scale from 1e-1 down to 1e-12
of the boundary span. A dense flow certificate bounds the minimum from
below.
"""
import math
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.optimize import brentq

from models.errors import OracleCapError
from models.solver import ConductanceResult, DirichletProblem, OracleConfig
from settings import logger

GAP_SCALES = tuple(10.0 ** -k for k in range(1, 13))


def _components(num_vertices: int, neighbors: List[List[int]]) -> List[int]:
    label = [-1] * num_vertices
    current = 0
    for root in range(num_vertices):
        if label[root] >= 0:
            continue
        stack = [root]
        label[root] = current
        while stack:
            vertex = stack.pop()
            for other in neighbors[vertex]:
                if label[other] < 0:
                    label[other] = current
                    stack.append(other)
        current += 1
    return label


def _best_shift(offsets: Sequence[float], p: float) -> float:
    """argmin over t of Σ |t - a|^p for the given offsets a."""
    if not offsets:
        return 0.0
    low, high = min(offsets), max(offsets)
    if high == low:
        return low

    def derivative(t: float) -> float:
        return sum(math.copysign(abs(t - a) ** (p - 1), t - a) for a in offsets)

    # the minimizer sits on the side of 0 where the derivative changes sign
    at_zero = derivative(0.0) if low < 0.0 < high else None
    if at_zero is not None:
        if at_zero == 0.0:
            return 0.0
        if at_zero > 0.0:
            high = 0.0
        else:
            low = 0.0
    if derivative(low) >= 0:
        return low
    if derivative(high) <= 0:
        return high
    return brentq(derivative, low, high, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500, disp=False)


class _Descent:
    def __init__(self, problem: DirichletProblem):
        graph = problem.graph
        self.p = float(problem.p)
        self.edges: List[Tuple[int, int]] = [tuple(edge) for edge in graph.edges.tolist()]
        self.neighbors: List[List[int]] = [[] for _ in range(graph.num_vertices)]
        for u, v in self.edges:
            self.neighbors[u].append(v)
            self.neighbors[v].append(u)

        self.fixed: Dict[int, float] = problem.fixed
        labels = _components(graph.num_vertices, self.neighbors)
        anchored = {labels[v] for v in self.fixed}
        self.isolated = [v for v in range(graph.num_vertices) if v not in self.fixed and labels[v] not in anchored]
        self.free = [v for v in range(graph.num_vertices) if v not in self.fixed and labels[v] in anchored]
        self.span = max(self.fixed.values()) - min(self.fixed.values())

        self.tails = graph.edges[:, 0]
        self.heads = graph.edges[:, 1]
        column = {v: i for i, v in enumerate(v for v in range(graph.num_vertices) if v not in self.fixed)}
        self.incidence = np.zeros((len(self.edges), len(column)))
        for row, (u, v) in enumerate(self.edges):
            if u in column:
                self.incidence[row, column[u]] += 1.0
            if v in column:
                self.incidence[row, column[v]] -= 1.0

        start = sum(self.fixed.values()) / len(self.fixed)
        self.values = [0.0] * graph.num_vertices
        for v in self.free:
            self.values[v] = start
        for v, value in self.fixed.items():
            self.values[v] = value

    def total(self) -> float:
        values, p = self.values, self.p
        return sum(abs(values[u] - values[v]) ** p for u, v in self.edges)

    def shift(self, block: Sequence[int]) -> None:
        """Move the block rigidly by the best common offset; inner differences are kept."""
        members = set(block)
        values = self.values
        offsets = [values[w] - values[v] for v in block for w in self.neighbors[v] if w not in members]
        step = _best_shift(offsets, self.p)
        for v in block:
            values[v] += step

    def clusters(self, gap: float) -> List[FrozenSet[int]]:
        """Connected groups of free vertices whose edge differences are below `gap`."""
        free = set(self.free)
        root = {v: v for v in self.free}

        def find(v: int) -> int:
            while root[v] != v:
                root[v] = root[root[v]]
                v = root[v]
            return v

        for u, v in self.edges:
            if u in free and v in free and abs(self.values[u] - self.values[v]) < gap:
                root[find(u)] = find(v)
        groups: Dict[int, Set[int]] = {}
        for v in self.free:
            groups.setdefault(find(v), set()).add(v)
        return [frozenset(group) for group in groups.values() if len(group) > 1]

    def sweep(self) -> None:
        for v in self.free:
            self.shift([v])
        if self.span == 0.0:
            return
        done: Set[FrozenSet[int]] = set()
        for scale in GAP_SCALES:
            for group in self.clusters(scale * self.span):
                if group not in done:
                    done.add(group)
                    self.shift(sorted(group))

    def lower_bound(self) -> float:
        """Dual value of the flow p|Δ|^(p-1) sign(Δ), corrected to be divergence-free at non-fixed vertices."""
        if not self.edges:
            return 0.0
        p = self.p
        values = np.array(self.values)
        delta = values[self.tails] - values[self.heads]
        flow = p * np.abs(delta) ** (p - 1.0) * np.sign(delta)
        if self.incidence.shape[1]:
            correction, *_ = np.linalg.lstsq(self.incidence, flow, rcond=None)
            flow = flow - self.incidence @ correction

        conjugate = (p - 1.0) * (np.abs(flow) / p) ** (p / (p - 1.0))
        return float(np.sum(flow * delta - conjugate))


def brute_solve(problem: DirichletProblem, config: Optional[OracleConfig] = None) -> ConductanceResult:
    """Exact block coordinate descent: vertices and near-equal clusters jump to their 1-D minimizers.

    Stops when a sweep lowers the energy by less than `step_tolerance`
    relative to the energy, or when the certified gap to the lower bound
    falls below `gap_tolerance`. The residual is the relative gap.
    """
    config = config or OracleConfig()
    descent = _Descent(problem)
    if len(descent.free) > config.max_vertices:
        raise OracleCapError(
            f"{len(descent.free)} free vertices exceed the oracle cap of {config.max_vertices}"
        )

    previous = descent.total()
    converged = not descent.free
    sweeps = 0
    while descent.free and sweeps < config.max_sweeps:
        sweeps += 1
        descent.sweep()
        current = descent.total()
        scale = max(current, np.finfo(float).tiny)
        decrease = previous - current
        previous = current
        gap = (current - descent.lower_bound()) / scale
        if decrease <= config.step_tolerance * scale or gap <= config.gap_tolerance:
            converged = True
            break

    gap = max(previous - descent.lower_bound(), 0.0) / max(previous, np.finfo(float).tiny)
    if not converged:
        logger.warning("Oracle hit the sweep cap", extra={"sweeps": sweeps, "gap": gap})

    return ConductanceResult(
        value=previous,
        solution=np.array(descent.values),
        iterations=sweeps,
        residual=gap if previous > 0 else 0.0,
        converged=converged,
        backend="oracle",
        isolated=descent.isolated
    )
