"""Graph edit distance between bubble diagrams.

Unit cost model: node insert/delete cost 1, node substitution costs 1 iff
the room types differ (0 otherwise), edge insert/delete cost 1. The main
solver is a best-first search over partial node assignments with an
admissible label/edge-count heuristic, a distance upper bound, and a wall
clock timeout; `ged_exhaustive` enumerates every node mapping outright and
serves as the independent oracle for small graphs.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass
from collections import Counter

from ..core import BubbleDiagram

_ORACLE_NODE_CAP = 7


@dataclass(frozen=True)
class GedConfig:
    upper_bound: float = 40.0  # max edit distance considered by the search
    timeout: float = 10.0  # seconds per pair; the published protocol used 3600
    ignore_node_labels: bool = False  # drop type costs (no-constraint ablation)

    def __post_init__(self):
        if self.upper_bound <= 0:
            raise ValueError("upper_bound must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class GedResult:
    distance: float
    exact: bool


def _subst_cost(t1, t2, ignore_labels: bool) -> int:
    return 0 if ignore_labels or t1 == t2 else 1


def ged(g1: BubbleDiagram, g2: BubbleDiagram, config: GedConfig = GedConfig()) -> GedResult:
    """Minimal edit cost transforming g1 into g2, via best-first search.

    Returns an exact distance when the search completes within the bound
    and timeout; otherwise the best upper bound found with exact=False.
    """
    n1, n2 = g1.node_count, g2.node_count
    types1, types2 = g1.room_types, g2.room_types
    adj1 = [g1.neighbors(i) for i in range(n1)]
    adj2 = [g2.neighbors(i) for i in range(n2)]
    deg1 = [len(a) for a in adj1]
    deg2 = [len(a) for a in adj2]
    e1_total = len(g1.edges)
    e2_total = len(g2.edges)
    ignore = config.ignore_node_labels

    def heuristic(depth: int, used: frozenset, e1_done: int, e2_done: int) -> float:
        # Remaining-node bound: unmatched types force substitutions, count
        # imbalance forces inserts/deletes. Remaining-edge bound: count gap.
        a = n1 - depth
        b = n2 - len(used)
        if ignore:
            node_bound = abs(a - b)
        else:
            c1 = Counter(types1[depth:])
            c2 = Counter(t for v, t in enumerate(types2) if v not in used)
            same = sum(min(c1[t], c2[t]) for t in c1)
            node_bound = max(a, b) - same
        e1_rem = e1_total - e1_done
        e2_rem = e2_total - e2_done
        return node_bound + abs(e1_rem - e2_rem)

    # State: g1 nodes 0..depth-1 assigned (to a g2 node or deleted).
    # mapping is a tuple with -1 for deletion; e*_done count edges whose
    # cost is already settled (both endpoints assigned / both images used).
    counter = itertools.count()
    start = (heuristic(0, frozenset(), 0, 0), 0, next(counter), 0.0, (), frozenset(), 0, 0)
    heap = [start]
    best_bound = float("inf")
    deadline = time.monotonic() + config.timeout
    check_clock = 0

    while heap:
        check_clock += 1
        if check_clock % 64 == 0 and time.monotonic() > deadline:
            bound = min(best_bound, config.upper_bound)
            return GedResult(float(bound), exact=False)
        f, neg_depth, _, cost, mapping, used, e1_done, e2_done = heapq.heappop(heap)
        depth = -neg_depth
        if depth == n1 and len(mapping) > n1:  # closed goal state
            return GedResult(cost, exact=True)
        if f >= best_bound or f > config.upper_bound:
            continue
        if depth == n1:
            # Close out: insert every unused g2 node and its incident edges.
            close = (n2 - len(used)) + sum(
                1 for (v, w) in g2.edges if v not in used or w not in used
            )
            total = cost + close
            if total <= config.upper_bound and total < best_bound:
                best_bound = total
                heapq.heappush(
                    heap, (total, neg_depth, next(counter), total, mapping + (-2,), used, e1_done, e2_done)
                )
            continue
        u = depth
        u_edges_before = [v for v in adj1[u] if v < depth]
        candidates = [v for v in range(n2) if v not in used]
        for v in candidates + [-1]:
            delta = 0.0
            new_e1 = e1_done + len(u_edges_before)
            new_e2 = e2_done
            if v == -1:
                delta += 1  # node deletion
                delta += len(u_edges_before)  # incident settled edges die
                new_used = used
            else:
                delta += _subst_cost(types1[u], types2[v], ignore)
                for w in u_edges_before:
                    wv = mapping[w]
                    if wv == -1 or wv not in adj2[v]:
                        delta += 1  # g1 edge deleted
                # Every g2 edge between v and an already-used image settles
                # now: cost 0 when it has a g1 twin, 1 when inserted.
                for x in adj2[v]:
                    if x in used:
                        new_e2 += 1
                        w = mapping.index(x)
                        if w not in adj1[u]:
                            delta += 1  # edge insertion
                new_used = used | {v}
            new_cost = cost + delta
            h = heuristic(depth + 1, new_used, new_e1, new_e2)
            f_child = new_cost + h
            if f_child > config.upper_bound or f_child >= best_bound:
                continue
            heapq.heappush(
                heap,
                (f_child, -(depth + 1), next(counter), new_cost, mapping + (v,), new_used, new_e1, new_e2),
            )

    # Heap exhausted without reaching a goal: nothing within the bound.
    return GedResult(float(config.upper_bound), exact=False)


def ged_exhaustive(g1: BubbleDiagram, g2: BubbleDiagram, ignore_node_labels: bool = False) -> float:
    """Brute-force oracle: minimum cost over every injective node mapping."""
    n1, n2 = g1.node_count, g2.node_count
    if max(n1, n2) > _ORACLE_NODE_CAP:
        raise ValueError(f"exhaustive oracle is limited to {_ORACLE_NODE_CAP} nodes")
    e1 = g1.edges
    e2 = g2.edges
    best = float("inf")
    for k in range(min(n1, n2) + 1):
        for sub1 in itertools.combinations(range(n1), k):
            for img in itertools.permutations(range(n2), k):
                phi = dict(zip(sub1, img))
                cost = (n1 - k) + (n2 - k)
                if not ignore_node_labels:
                    cost += sum(1 for u, v in phi.items() if g1.room_types[u] != g2.room_types[v])
                matched = sum(
                    1
                    for u, w in itertools.combinations(sub1, 2)
                    if (min(u, w), max(u, w)) in e1
                    and (min(phi[u], phi[w]), max(phi[u], phi[w])) in e2
                )
                cost += (len(e1) - matched) + (len(e2) - matched)
                best = min(best, cost)
    return best
