"""Slow, independent reference computations used to check the library."""

import itertools
from fractions import Fraction
from math import gcd


def leibniz_det(a):
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= a[i][j]
            if not term:
                break
        total += term
    return total


def determinantal_divisors(a):
    """d_k = gcd of all k x k minors, k = 1..min(r, c)."""
    r, c = len(a), len(a[0]) if a else 0
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = gcd(g, leibniz_det([[a[i][j] for j in cols] for i in rows]))
        out.append(g)
    return out


def invariant_factors(a):
    """Smith diagonal from determinantal divisors (zeros once the rank is reached)."""
    ds = determinantal_divisors(a)
    out = []
    prev = 1
    for d in ds:
        if d == 0:
            out.append(0)
            prev = 0
            continue
        out.append(d // prev)
        prev = d
    return out


def spanning_tree_count(graph):
    """Count spanning trees of the graph with its sink by brute force over edge subsets."""
    n = len(graph)
    sink = n
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges += [(i, j)] * graph.adjacency[i][j]
        edges += [(i, sink)] * graph.sink_edges[i]
    count = 0
    for subset in itertools.combinations(range(len(edges)), n):
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in subset:
            u, v = edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        count += ok
    return count


def naive_relax(graph, f):
    """Topple one grain-batch at a time, always at the lowest-index unstable vertex."""
    f = list(f)
    odo = [0] * len(f)
    deg = graph.degrees
    while True:
        unstable = [i for i in range(len(f)) if f[i] >= deg[i]]
        if not unstable:
            return tuple(f), tuple(odo)
        i = unstable[0]
        f[i] -= deg[i]
        odo[i] += 1
        for j in range(len(f)):
            f[j] += graph.adjacency[i][j]


def in_row_lattice(rows, v, box=6):
    """Is v an integer combination of rows with coefficients in [-box, box]?"""
    for coeffs in itertools.product(range(-box, box + 1), repeat=len(rows)):
        if all(sum(c * r[k] for c, r in zip(coeffs, rows)) == v[k] for k in range(len(v))):
            return True
    return False


def matvec_frac(a, x):
    return tuple(sum(Fraction(aij) * xj for aij, xj in zip(row, x)) for row in a)
