"""Named verification suites with reproducible JSON reports."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

from . import harmonic as hm
from .dynamics import enumerate_recurrent, group_add
from .graph import (
    SinkedGraph,
    diamond_points,
    from_edge_list,
    interior_laplacian,
    is_convex_domain,
    lattice_domain,
    path_graph,
)
from .linalg import IntMatrix, det_exact, lattice_equal, lattice_index, rank
from .rect import (
    check_adjoint,
    check_composition,
    check_divisibility,
    check_prop4,
    gamma,
    rect,
    tiling_specs,
)

DEFAULT_SEED = 20240521

# Orders of sandpile groups of (0,m)x(0,n), m, n = 2..6.
TABLE1 = {
    (2, 2): 4, (2, 3): 15, (2, 4): 56, (2, 5): 209, (2, 6): 780,
    (3, 3): 192, (3, 4): 2415, (3, 5): 30305, (3, 6): 380160,
    (4, 4): 100352, (4, 5): 4140081, (4, 6): 170537640,
    (5, 5): 557568000, (5, 6): 74795194705,
    (6, 6): 32565539635200,
}

COMPOSITION_SPECS = [(2, 2, 2, 1), (2, 2, 2, 2), (2, 2, 1, 2), (2, 3, 2, 2), (3, 3, 2, 1)]
PROP4_SPECS = [(2, 2, 2, 1), (2, 3, 2, 2), (3, 3, 2, 2)]


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, hm.CircleVec):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=json.dumps) if isinstance(x, (set, frozenset)) else items
    return repr(x)


@dataclass
class Check:
    id: str
    inputs: Any
    expected: Any
    got: Any
    passed: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "inputs": _jsonable(self.inputs),
            "expected": _jsonable(self.expected),
            "got": _jsonable(self.got),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    suite: str
    seed: int = DEFAULT_SEED
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, id: str, inputs: Any, expected: Any, got: Any, passed: bool | None = None) -> bool:
        ok = (expected == got) if passed is None else bool(passed)
        self.checks.append(Check(id, inputs, expected, got, ok))
        return ok

    def extend(self, other: VerificationReport, prefix: str | None = None):
        for c in other.checks:
            self.checks.append(Check(f"{prefix or other.suite}/{c.id}", c.inputs, c.expected, c.got, c.passed))

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "checks": [c.to_json() for c in self.checks],
            "pass": self.passed,
        }

    def dumps(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=indent)

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.id}" for c in self.checks]
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"{self.suite}: {n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)


# fixture graphs

def random_sinked_graph(rng: random.Random, n: int, max_mult: int = 2, edge_prob: float = 0.35) -> SinkedGraph:
    """Random connected multigraph on n non-sink vertices (labelled 0..n-1)."""
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, 1))
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < edge_prob:
            edges.append((u, v, rng.randint(1, max_mult)))
    sinks = [v for v in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
    edges += [(v, "sink", rng.randint(1, max_mult)) for v in sinks]
    return from_edge_list(edges, vertices=range(n))


def random_fixture_graphs(seed: int = DEFAULT_SEED, count: int = 5, max_vertices: int = 6,
                          max_order: int = 200) -> list[SinkedGraph]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_sinked_graph(rng, rng.randint(3, max_vertices))
        if g.det <= max_order:
            out.append(g)
    return out


def fixture_graphs(seed: int = DEFAULT_SEED) -> list[tuple[str, SinkedGraph]]:
    """Small graphs (group order at most 200) used by the exhaustive suites."""
    out = [(f"rect{p}x{q}", rect(p, q)) for p, q in [(2, 2), (2, 3), (2, 4)]]
    out += [(f"path{n}", path_graph(n)) for n in range(2, 13)]
    out += [(f"random{i}", g) for i, g in enumerate(random_fixture_graphs(seed))]
    return out


def l_shape_points() -> set[tuple[int, int]]:
    return {(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)}


def convex_pairs() -> list[tuple[str, set, set]]:
    """Nested convex lattice domains ``(name, sub, super)``."""
    def box(x0, x1, y0, y1):
        return {(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)}

    tri_small = {(x, y) for x in range(0, 3) for y in range(0, 3) if x + y <= 2}
    tri_big = {(x, y) for x in range(-1, 5) for y in range(-1, 5) if x + y <= 4 and x >= -1 and y >= -1}
    return [
        ("rect2x2_in_rect4x4", box(1, 1, 1, 1), box(1, 3, 1, 3)),
        ("rect3x3_in_rect5x4", box(1, 2, 1, 2), box(1, 4, 1, 3)),
        ("rect3x4_in_rect6x6", box(1, 2, 1, 3), box(1, 5, 1, 5)),
        ("diamond1_in_diamond2", diamond_points(1), diamond_points(2)),
        ("diamond1_in_diamond3", diamond_points(1), diamond_points(3)),
        ("diamond2_in_box", diamond_points(2), box(-3, 3, -2, 2)),
        ("triangle_in_triangle", tri_small, tri_big),
        ("identical_box", box(0, 2, 0, 1), box(0, 2, 0, 1)),
    ]


def find_nontrivial_interior_cokernel(max_vertices: int = 7, max_mult: int = 2):
    """Smallest graph (by vertex count, then enumeration order) whose
    interior Laplacian has a nontrivial cokernel, or ``None``."""
    for k in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(k), 2))
        for mults in itertools.product(range(max_mult + 1), repeat=len(pairs)):
            for sinks in itertools.product(range(max_mult + 1), repeat=k):
                if not any(sinks) or all(sinks):
                    continue
                edges = [(u, v, m) for (u, v), m in zip(pairs, mults) if m]
                edges += [(v, "sink", s) for v, s in enumerate(sinks) if s]
                try:
                    g = from_edge_list(edges, vertices=range(k))
                except ValueError:
                    continue
                if not hm.interior_cokernel(g).is_trivial:
                    return g
    return None


# suites

def verify_table1(max_m: int = 6, max_n: int = 6) -> VerificationReport:
    rep = VerificationReport("table1")
    for m in range(2, max_m + 1):
        for n in range(2, max_n + 1):
            got = gamma(m, n)
            key = (min(m, n), max(m, n))
            if key in TABLE1:
                rep.check(f"gamma({m},{n})", [m, n], TABLE1[key], got)
            rep.check(f"symmetry({m},{n})", [m, n], got, rect(n, m).det)
    return rep


def verify_path(n: int) -> VerificationReport:
    rep = VerificationReport(f"path{n}")
    g = path_graph(n)
    rep.check("invariant_factors", [n], [n], list(hm.sandpile_group_structure(g).invariant_factors)
              if n > 1 else [])
    gen = hm.CircleVec(Fraction(i, n) for i in g.vertices)
    rep.check("progression_strictly_harmonic", [n], True, hm.is_strictly_harmonic(g, gen))
    rep.check("progression_order", [n], n, gen.order)
    elements = set(hm.harmonic_group(g))
    progressions = {k * gen for k in range(n)}
    rep.check("group_is_progressions", [n], progressions, elements)
    return rep


def verify_paths(ns: Iterable[int] = range(2, 13)) -> VerificationReport:
    rep = VerificationReport("paths")
    for n in ns:
        rep.extend(verify_path(n))
    return rep


def _boundary_deltas(g: SinkedGraph) -> list[tuple[int, ...]]:
    return [hm.delta(g, b) for b in g.boundary]


def verify_prop3(g: SinkedGraph, name: str = "graph") -> VerificationReport:
    rep = VerificationReport(f"prop3[{name}]")
    nb = len(g.boundary)
    H = hm.integer_harmonic_basis(g).basis
    # boundary projection of Δ applied to the integer harmonic functions
    P = (g.laplacian @ H).select_rows(g.boundary)
    rep.check("HZ_to_boundary_injective", name, nb, rank(P))
    K = hm.CosetCoordinates(g).kernel_lattice(_boundary_deltas(g))
    rep.check("kernel_equals_image", name, True, lattice_equal(K, P))
    g0 = hm.boundary_subgroup_order_snf(g)
    coker = hm.interior_cokernel(g).order
    rep.check("order_identity", {"G0": g0, "coker": coker}, g.det, g0 * coker)
    rep.check("G0_is_boundary_quotient", name, g0, lattice_index(P))
    return rep


def _subgroup_order_in_cokernel(A: IntMatrix, vectors: list) -> int:
    W = IntMatrix.from_columns(vectors, rows=A.rows) if vectors else IntMatrix.zeros(A.rows, 0)
    return lattice_index(A) // lattice_index(A.hstack(W))


def verify_prop2(g: SinkedGraph, name: str = "graph", seed: int = DEFAULT_SEED,
                 samples: int = 8) -> VerificationReport:
    rep = VerificationReport(f"prop2[{name}]", seed)
    rng = random.Random(seed)
    nb = len(g.boundary)
    lat = hm.integer_harmonic_basis(g)
    D0 = interior_laplacian(g)
    rep.check("rank_HZ", name, nb, lat.rank)
    rep.check("dim_HQ", name, nb, len(g) - rank(D0))
    coker = hm.interior_cokernel(g)
    rep.check("coker_free_rank", name, 0, coker.free_rank)
    g0 = hm.boundary_subgroup_order_snf(g)
    rep.check("coker_is_G_mod_G0", {"G": g.det, "G0": g0}, coker.order, g.det // g0,
              passed=g.det % g0 == 0 and coker.order == g.det // g0)

    # connecting map: harmonic circle function -> class of its interior Laplacian
    def boundary_map(psi):
        lap = g.apply_laplacian(psi.values)
        return [int(lap[i]) for i in g.interior]

    images = []
    for i in g.interior:
        psi = hm.extended_from_state(g, hm.delta(g, i))
        if not hm.is_harmonic(g, psi):
            rep.check(f"interior_delta_harmonic[{i}]", i, True, False)
        images.append(boundary_map(psi))
    rep.check("connecting_map_onto", name, coker.order, _subgroup_order_in_cokernel(D0, images))

    torus_ok = True
    for _ in range(samples):
        coeffs = [Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(lat.rank)]
        psi = hm.rational_harmonic_point(lat, coeffs)
        if not hm.is_harmonic(g, psi) or _subgroup_order_in_cokernel(D0, [boundary_map(psi)]) != 1:
            torus_ok = False
    rep.check("torus_in_kernel_of_connecting_map", {"samples": samples}, True, torus_ok)
    return rep


def verify_lemma1(sub_points, super_points, name: str = "pair") -> VerificationReport:
    sub_points, super_points = set(sub_points), set(super_points)
    if not (is_convex_domain(sub_points) and is_convex_domain(super_points)):
        raise ValueError("lemma1 needs convex lattice domains")
    if not sub_points <= super_points:
        raise ValueError("first domain must lie inside the second")
    rep = VerificationReport(f"lemma1[{name}]")
    sub, sup = lattice_domain(sub_points), lattice_domain(super_points)
    Hsup = hm.integer_harmonic_basis(sup).basis
    Hsub = hm.integer_harmonic_basis(sub).basis
    rows = [sup.index[v] for v in sub.vertices]
    R = Hsup.select_rows(rows)
    lands = all(not any(col) for col in (interior_laplacian(sub) @ R).columns())
    rep.check("restriction_is_harmonic", name, True, lands)
    rep.check("surjective_over_Z", name, True, lattice_equal(R, Hsub))
    rep.check("surjective_over_Q", name, len(sub.boundary), rank(R))
    return rep


def verify_lemma2(points, name: str = "domain") -> VerificationReport:
    g = lattice_domain(points)
    rep = VerificationReport(f"lemma2[{name}]")
    rep.check("interior_cokernel_trivial", name, True, hm.interior_cokernel(g).is_trivial)
    rep.check("boundary_generates", name, g.det, hm.boundary_subgroup_order_snf(g))
    return rep


def verify_duality(g: SinkedGraph, name: str = "graph", cap: int = 10**4,
                   seed: int = DEFAULT_SEED, samples: int = 20) -> VerificationReport:
    rep = VerificationReport(f"duality[{name}]", seed)
    rng = random.Random(seed)
    n = len(g)

    def rand_config(lo=-6, hi=6):
        return tuple(rng.randint(lo, hi) for _ in range(n))

    well_defined = symmetric = True
    for _ in range(samples):
        f, h, u = rand_config(), rand_config(), rand_config()
        psi = hm.strict_harmonic_from_config(g, u)
        moved = tuple(a + b for a, b in zip(f, g.laplacian @ h))
        if hm.pairing(g, f, psi) != hm.pairing(g, moved, psi):
            well_defined = False
        if hm.pairing(g, f, psi) != hm.pairing(g, u, hm.strict_harmonic_from_config(g, f)):
            symmetric = False
    rep.check("well_defined", {"samples": samples}, True, well_defined)
    rep.check("symmetric", {"samples": samples}, True, symmetric)
    rep.check("nondegenerate", name, True, hm.pairing_nondegenerate(g, cap))
    return rep


def verify_group_oracle(g: SinkedGraph, name: str = "graph", cap: int = 10**5) -> VerificationReport:
    """Recurrent states with stabilized addition against Smith cosets and
    against strictly harmonic circle functions, exhaustively."""
    rep = VerificationReport(f"oracle[{name}]")
    states = enumerate_recurrent(g, cap)
    rep.check("recurrent_count", name, g.det, len(states))
    coords = hm.CosetCoordinates(g)
    c = {s: coords(s) for s in states}
    rep.check("coset_bijection", name, len(states), len(set(c.values())))
    psi = {s: hm.strict_harmonic_from_config(g, s) for s in states}
    rep.check("harmonic_bijection", name, len(states), len(set(psi.values())))
    coset_ok = harmonic_ok = True
    for i, a in enumerate(states):
        for b in states[i:]:
            s = group_add(g, a, b)
            if s not in c or c[s] != coords.add(c[a], c[b]):
                coset_ok = False
            if s not in psi or psi[s] != psi[a] + psi[b]:
                harmonic_ok = False
    rep.check("addition_matches_cosets", name, True, coset_ok)
    rep.check("addition_matches_harmonic", name, True, harmonic_ok)
    return rep


def verify_divisibility(max_side: int = 4, max_mult: int = 3, max_big: int = 12) -> VerificationReport:
    rep = VerificationReport("divisibility")
    # caption facts
    rep.check("caption_4_divides_56", [2, 4], 0, gamma(2, 4) % gamma(2, 2))
    rep.check("caption_56_over_4_not_div_4", [2, 4], True, (gamma(2, 4) // 4) % 4 != 0)
    rep.check("caption_16_divides_gamma44", [4, 4], 0, gamma(4, 4) % gamma(2, 2) ** 2)
    for p, q, m, n in tiling_specs(max_side, max_mult, max_big):
        r = check_divisibility(p, q, m, n)
        rep.check(f"divides({p},{q},{m},{n})", [p, q, m, n], True, r["divides"])
        if r["square_case_applicable"]:
            rep.check(f"square_divides({p},{q},{m},{n})", [p, q, m, n], True, r["square_divides"])
    return rep


def verify_composition(specs=COMPOSITION_SPECS) -> VerificationReport:
    rep = VerificationReport("composition")
    for s in specs:
        rep.check(f"epi_mono_is_mn({','.join(map(str, s))})", list(s), True, check_composition(*s))
    return rep


def verify_adjoint(specs=COMPOSITION_SPECS) -> VerificationReport:
    rep = VerificationReport("adjoint")
    for s in specs:
        rep.check(f"epi_dual_to_mono({','.join(map(str, s))})", list(s), True, check_adjoint(*s))
    return rep


def verify_prop4(specs=PROP4_SPECS) -> VerificationReport:
    rep = VerificationReport("prop4")
    for s in specs:
        rep.check(f"corner_restriction({','.join(map(str, s))})", list(s), True, check_prop4(*s))
    return rep


def _over_fixtures(suite: str, fn: Callable, seed: int) -> VerificationReport:
    rep = VerificationReport(suite, seed)
    for name, g in fixture_graphs(seed):
        rep.extend(fn(g, name))
    return rep


def suite_prop2(seed=DEFAULT_SEED):
    return _over_fixtures("prop2", lambda g, n: verify_prop2(g, n, seed), seed)


def suite_prop3(seed=DEFAULT_SEED):
    rep = _over_fixtures("prop3", verify_prop3, seed)
    for p, q in [(3, 3), (3, 4), (4, 4)]:
        rep.extend(verify_prop3(rect(p, q), f"rect{p}x{q}"))
    found = find_nontrivial_interior_cokernel()
    rep.check("nontrivial_interior_cokernel_found", "search<=7 vertices, mult<=2", True, found is not None)
    if found is not None:
        rep.extend(verify_prop3(found, "search_hit"))
        rep.extend(verify_prop2(found, "search_hit", seed))
    return rep


def suite_duality(seed=DEFAULT_SEED):
    return _over_fixtures("duality", lambda g, n: verify_duality(g, n, seed=seed), seed)


def suite_oracle(seed=DEFAULT_SEED):
    return _over_fixtures("oracle", verify_group_oracle, seed)


def suite_lemma1(seed=DEFAULT_SEED):
    rep = VerificationReport("lemma1", seed)
    for name, sub, sup in convex_pairs():
        rep.extend(verify_lemma1(sub, sup, name))
    return rep


def suite_lemma2(seed=DEFAULT_SEED):
    rep = VerificationReport("lemma2", seed)
    for p in range(2, 7):
        for q in range(2, 7):
            rep.extend(verify_lemma2(rect(p, q).coords, f"rect{p}x{q}"))
    rep.extend(verify_lemma2(l_shape_points(), "L_shape"))
    rep.extend(verify_lemma2(diamond_points(2), "diamond2"))
    rep.extend(verify_lemma2(diamond_points(3), "diamond3"))
    return rep


SUITES: dict[str, Callable[[int], VerificationReport]] = {
    "table1": lambda seed: verify_table1(),
    "paths": lambda seed: verify_paths(),
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "duality": suite_duality,
    "oracle": suite_oracle,
    "divisibility": lambda seed: verify_divisibility(),
    "composition": lambda seed: verify_composition(),
    "adjoint": lambda seed: verify_adjoint(),
    "prop4": lambda seed: verify_prop4(),
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> VerificationReport:
    if name == "all":
        rep = VerificationReport("all", seed)
        for key, fn in SUITES.items():
            rep.extend(fn(seed), prefix=key)
        return rep
    if name not in SUITES:
        raise KeyError(name)
    rep = SUITES[name](seed)
    rep.seed = seed
    return rep
