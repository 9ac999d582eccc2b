"""Exact transportation feasibility with lower bounds.

Buyers ship money to goods along capacitated edges; each buyer's outflow and
each good's inflow must land in a given interval. The problem is reduced to a
plain max-flow by the usual lower-bound transformation and solved with
Edmonds-Karp over Fractions. Infinite capacities stay symbolic (:data:`INF`).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .rational import INF


@dataclass(frozen=True)
class ClearingInstance:
    # (lo, hi) money each buyer must send out; hi may be INF
    buyer_bounds: Tuple[Tuple[Fraction, object], ...]
    # (buyer, good, capacity in money or INF)
    edges: Tuple[Tuple[int, int, object], ...]
    # (lo, hi) money each good must receive; hi may be INF
    good_bounds: Tuple[Tuple[Fraction, object], ...]

    def __post_init__(self):
        for lo, hi in self.buyer_bounds + self.good_bounds:
            if lo < 0 or (hi is not INF and hi < lo):
                raise ValueError(f"bad interval [{lo}, {hi}]")
        for i, j, cap in self.edges:
            if cap is not INF and cap < 0:
                raise ValueError(f"negative capacity on edge ({i}, {j})")


@dataclass
class TransportResult:
    feasible: bool
    flows: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    reason: str = ""
    cut_buyers: Tuple[int, ...] = ()
    cut_goods: Tuple[int, ...] = ()
    deficit: Fraction = Fraction(0)

    def __bool__(self) -> bool:
        return self.feasible


def _sub(a, b):
    return INF if a is INF else a - b


class _Graph:
    def __init__(self, n: int):
        self.adj: List[List[int]] = [[] for _ in range(n)]
        self.to: List[int] = []
        self.cap: List[object] = []

    def add(self, u: int, v: int, cap) -> int:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(Fraction(0))
        return len(self.to) - 2

    def max_flow(self, s: int, t: int) -> Fraction:
        total = Fraction(0)
        while True:
            parent = [-1] * len(self.adj)
            parent[s] = -2
            queue = deque([s])
            while queue and parent[t] == -1:
                u = queue.popleft()
                for e in self.adj[u]:
                    v = self.to[e]
                    c = self.cap[e]
                    if parent[v] == -1 and (c is INF or c > 0):
                        parent[v] = e
                        queue.append(v)
            if parent[t] == -1:
                return total
            bottleneck = INF
            v = t
            while v != s:
                e = parent[v]
                c = self.cap[e]
                if bottleneck is INF or (c is not INF and c < bottleneck):
                    bottleneck = c
                v = self.to[e ^ 1]
            if bottleneck is INF:
                raise ValueError("unbounded augmenting path")
            v = t
            while v != s:
                e = parent[v]
                self.cap[e] = _sub(self.cap[e], bottleneck)
                self.cap[e ^ 1] = _sub(self.cap[e ^ 1], -bottleneck)
                v = self.to[e ^ 1]
            total += bottleneck

    def reachable(self, s: int) -> set:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                c = self.cap[e]
                if v not in seen and (c is INF or c > 0):
                    seen.add(v)
                    queue.append(v)
        return seen


def feasible_transport(inst: ClearingInstance) -> TransportResult:
    nb, ng = len(inst.buyer_bounds), len(inst.good_bounds)
    src, snk = 0, 1 + nb + ng
    ss, tt = snk + 1, snk + 2
    g = _Graph(snk + 3)
    excess = [Fraction(0)] * (snk + 1)

    def buyer_node(i):
        return 1 + i

    def good_node(j):
        return 1 + nb + j

    def bounded(u, v, lo, hi):
        excess[v] += lo
        excess[u] -= lo
        return g.add(u, v, _sub(hi, lo))

    for i, (lo, hi) in enumerate(inst.buyer_bounds):
        bounded(src, buyer_node(i), lo, hi)
    edge_ids = []
    for i, j, cap in inst.edges:
        edge_ids.append(g.add(buyer_node(i), good_node(j), cap))
    for j, (lo, hi) in enumerate(inst.good_bounds):
        bounded(good_node(j), snk, lo, hi)
    g.add(snk, src, INF)

    required = Fraction(0)
    for v, ex in enumerate(excess):
        if ex > 0:
            g.add(ss, v, ex)
            required += ex
        elif ex < 0:
            g.add(v, tt, -ex)

    flow = g.max_flow(ss, tt)
    if flow < required:
        side = g.reachable(ss)
        cut_b = tuple(i for i in range(nb) if buyer_node(i) in side)
        cut_g = tuple(j for j in range(ng) if good_node(j) in side)
        return TransportResult(
            feasible=False,
            reason=f"lower bounds cannot be met: max flow {flow} < required {required}",
            cut_buyers=cut_b,
            cut_goods=cut_g,
            deficit=required - flow,
        )
    flows = {}
    for (i, j, cap), e in zip(inst.edges, edge_ids):
        # the reverse edge's residual capacity is the flow pushed along e
        f = g.cap[e ^ 1]
        if f:
            flows[(i, j)] = flows.get((i, j), Fraction(0)) + f
    return TransportResult(feasible=True, flows=flows)
