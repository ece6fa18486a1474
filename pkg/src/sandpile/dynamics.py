"""Toppling, stabilization, the burning test and the group of recurrent states.

Configurations are plain integer tuples indexed like ``graph.vertices``.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache
from math import prod
from typing import Sequence

from .graph import SinkedGraph

Config = tuple[int, ...]


class CapExceeded(ValueError):
    pass


def _check_length(graph: SinkedGraph, f: Sequence[int]):
    if len(f) != len(graph):
        raise ValueError(f"configuration has {len(f)} entries, graph has {len(graph)} vertices")


def burning_vector(graph: SinkedGraph) -> Config:
    """One grain per sink edge; equals ``-Δ·1``."""
    return graph.sink_edges


def is_stable(graph: SinkedGraph, f: Sequence[int]) -> bool:
    return all(0 <= x < d for x, d in zip(f, graph.degrees))


def stabilize(graph: SinkedGraph, f: Sequence[int], policy: str = "queue") -> tuple[Config, Config]:
    """Relax a non-negative configuration.

    Returns ``(stable, odometer)`` with ``stable == f + Δ·odometer``.
    ``policy="queue"`` topples vertices in FIFO order, ``"max"`` always
    picks the vertex holding the most sand; both topple in bulk.
    """
    _check_length(graph, f)
    if any(x < 0 for x in f):
        raise ValueError("stabilize needs a non-negative configuration")
    deg = graph.degrees
    nbrs = graph.neighbors
    f = list(f)
    odo = [0] * len(f)

    if policy == "queue":
        queued = [x >= d for x, d in zip(f, deg)]
        queue = deque(i for i, q in enumerate(queued) if q)
        while queue:
            i = queue.popleft()
            queued[i] = False
            k = f[i] // deg[i]
            if not k:
                continue
            f[i] -= k * deg[i]
            odo[i] += k
            for j, m in nbrs[i]:
                f[j] += k * m
                if not queued[j] and f[j] >= deg[j]:
                    queued[j] = True
                    queue.append(j)
    elif policy == "max":
        while True:
            i = max(range(len(f)), key=lambda v: (f[v] - deg[v], -v))
            k = f[i] // deg[i]
            if not k:
                break
            f[i] -= k * deg[i]
            odo[i] += k
            for j, m in nbrs[i]:
                f[j] += k * m
    else:
        raise ValueError(f"unknown toppling policy {policy!r}")
    return tuple(f), tuple(odo)


def is_recurrent(graph: SinkedGraph, phi: Sequence[int]) -> bool:
    """Burning test: adding the burning vector topples every vertex exactly once."""
    _check_length(graph, phi)
    if not is_stable(graph, phi):
        raise ValueError("burning test needs a stable non-negative configuration")
    beta = burning_vector(graph)
    out, odo = stabilize(graph, [a + b for a, b in zip(phi, beta)])
    return out == tuple(phi) and all(x == 1 for x in odo)


def _untopple_negatives(graph: SinkedGraph, f: list[int]) -> None:
    # mirror image of stabilizing (max_stable - f)
    deg = graph.degrees
    nbrs = graph.neighbors
    queue = deque(i for i, x in enumerate(f) if x < 0)
    queued = [x < 0 for x in f]
    while queue:
        i = queue.popleft()
        queued[i] = False
        if f[i] >= 0:
            continue
        k = -(f[i] // deg[i])  # ceil(-f[i] / deg[i])
        f[i] += k * deg[i]
        for j, m in nbrs[i]:
            f[j] -= k * m
            if f[j] < 0 and not queued[j]:
                queued[j] = True
                queue.append(j)


def recurrent_representative(graph: SinkedGraph, f: Sequence[int]) -> Config:
    """The unique recurrent state congruent to ``f`` modulo ``ΔZ^Γ``.

    Negative entries are first removed by reverse topplings, the result is
    stabilized, and the burning vector (which lies in ``ΔZ^Γ``) is added
    and relaxed until the state stops changing.
    """
    _check_length(graph, f)
    g = [int(x) for x in f]
    _untopple_negatives(graph, g)
    phi, _ = stabilize(graph, g)
    beta = burning_vector(graph)
    while True:
        nxt, _ = stabilize(graph, [a + b for a, b in zip(phi, beta)])
        if nxt == phi:
            return phi
        phi = nxt


def group_add(graph: SinkedGraph, a: Sequence[int], b: Sequence[int]) -> Config:
    _check_length(graph, a)
    _check_length(graph, b)
    return stabilize(graph, [x + y for x, y in zip(a, b)])[0]


@lru_cache(maxsize=256)
def identity_element(graph: SinkedGraph) -> Config:
    return recurrent_representative(graph, (0,) * len(graph))


def group_inverse(graph: SinkedGraph, a: Sequence[int]) -> Config:
    return recurrent_representative(graph, [-x for x in a])


def max_stable(graph: SinkedGraph) -> Config:
    return tuple(d - 1 for d in graph.degrees)


def enumerate_recurrent(graph: SinkedGraph, cap: int = 10**6) -> list[Config]:
    """All recurrent states, by running the burning test on every stable state."""
    size = prod(graph.degrees)
    if size > cap:
        raise CapExceeded(f"{size} stable states exceeds cap {cap}")
    return [
        phi
        for phi in itertools.product(*(range(d) for d in graph.degrees))
        if is_recurrent(graph, phi)
    ]
