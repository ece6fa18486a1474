"""Circle-valued harmonic functions and the self-duality pairing.

The circle R/Z is represented by its rational points: a :class:`CircleVec`
holds exact fractions in ``[0, 1)``. Every element of the sandpile group and
all torsion of the extended group live there.

Conventions: for a circle vector ``psi`` its canonical lift is the vector of
representatives in ``[0, 1)``. ``psi`` is *harmonic* when the interior rows of
the Laplacian send the lift to integers, *strictly harmonic* when all rows do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Sequence

from .dynamics import CapExceeded
from .graph import Embedding, SinkedGraph, interior_laplacian
from .linalg import (
    GroupStructure,
    IntMatrix,
    cokernel_structure,
    kernel_basis,
    lattice_index,
    snf,
)


class NotHarmonicError(ValueError):
    pass


@dataclass(frozen=True)
class CircleVec:
    """Vector in ``(Q/Z)^n``; entries are normalized into ``[0, 1)``."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable):
        object.__setattr__(self, "values", tuple(Fraction(v) % 1 for v in values))

    @classmethod
    def zero(cls, n: int) -> CircleVec:
        return cls([0] * n)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def _check(self, other):
        if len(other) != len(self):
            raise ValueError("circle vectors of different lengths")

    def __add__(self, other: CircleVec) -> CircleVec:
        self._check(other)
        return CircleVec(a + b for a, b in zip(self.values, other.values))

    def __sub__(self, other: CircleVec) -> CircleVec:
        self._check(other)
        return CircleVec(a - b for a, b in zip(self.values, other.values))

    def __neg__(self) -> CircleVec:
        return CircleVec(-a for a in self.values)

    def __mul__(self, k: int) -> CircleVec:
        return CircleVec(k * a for a in self.values)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.values)

    @property
    def order(self) -> int:
        """Additive order in ``(Q/Z)^n``."""
        return lcm(1, *(v.denominator for v in self.values))

    def to_json(self) -> list[str]:
        return [f"{v.numerator}/{v.denominator}" for v in self.values]

    @classmethod
    def from_json(cls, items: Sequence[str]) -> CircleVec:
        return cls(Fraction(s) for s in items)

    def __repr__(self):
        return f"CircleVec({self.to_json()})"


@dataclass(frozen=True)
class HarmonicLattice:
    """Basis (as columns) of the integer-valued harmonic functions."""

    graph: SinkedGraph
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return self.basis.cols


def _is_integral(xs) -> bool:
    return all(Fraction(x).denominator == 1 for x in xs)


def _check_len(graph: SinkedGraph, v):
    if len(v) != len(graph):
        raise ValueError(f"vector has {len(v)} entries, graph has {len(graph)} vertices")


def solve_laplacian(graph: SinkedGraph, x: Sequence) -> tuple[Fraction, ...]:
    """Exact ``Δ^{-1} x`` for an integer or rational vector, via the cached inverse."""
    _check_len(graph, x)
    N, d = graph.inverse_laplacian
    xs = [Fraction(v) for v in x]
    return tuple(sum((a * v for a, v in zip(row, xs) if v), Fraction(0)) / d for row in N)


def strict_harmonic_from_config(graph: SinkedGraph, f: Sequence[int]) -> CircleVec:
    """``Δ^{-1} f mod 1``: the sandpile class of f as a circle function
    with vanishing Laplacian at every vertex."""
    _check_len(graph, f)
    N, d = graph.inverse_laplacian
    f = [int(x) for x in f]
    return CircleVec(Fraction(sum(a * v for a, v in zip(row, f) if v) % d, d) for row in N)


def is_strictly_harmonic(graph: SinkedGraph, psi: CircleVec) -> bool:
    _check_len(graph, psi)
    return _is_integral(graph.apply_laplacian(psi.values))


def is_harmonic(graph: SinkedGraph, psi: CircleVec) -> bool:
    _check_len(graph, psi)
    lap = graph.apply_laplacian(psi.values)
    return _is_integral(lap[i] for i in graph.interior)


def config_from_strict_harmonic(graph: SinkedGraph, psi: CircleVec) -> tuple[int, ...]:
    """Inverse of :func:`strict_harmonic_from_config` on classes: ``Δ`` of the lift."""
    _check_len(graph, psi)
    lap = graph.apply_laplacian(psi.values)
    if not _is_integral(lap):
        raise NotHarmonicError("circle function is not strictly harmonic")
    return tuple(int(x) for x in lap)


def extended_from_state(graph: SinkedGraph, x: Sequence) -> CircleVec:
    """Harmonic circle function of an extended state.

    ``x`` must be integral on the interior; boundary entries may be any
    rationals.
    """
    _check_len(graph, x)
    if not _is_integral(x[i] for i in graph.interior):
        raise ValueError("extended states take integer values in the interior")
    return CircleVec(solve_laplacian(graph, x))


def boundary_fractional_part(graph: SinkedGraph, psi: CircleVec) -> tuple[Fraction, ...]:
    """Fractional parts of ``Δ psi`` on the boundary vertices (in boundary order)."""
    if not is_harmonic(graph, psi):
        raise NotHarmonicError("circle function is not harmonic")
    lap = graph.apply_laplacian(psi.values)
    return tuple(lap[i] % 1 for i in graph.boundary)


def integer_harmonic_basis(graph: SinkedGraph) -> HarmonicLattice:
    return HarmonicLattice(graph, kernel_basis(interior_laplacian(graph)))


def rational_harmonic_point(lattice: HarmonicLattice, coeffs: Sequence) -> CircleVec:
    """Image in the circle group of the real harmonic function ``sum c_i b_i``."""
    B = lattice.basis
    if len(coeffs) != B.cols:
        raise ValueError("one coefficient per basis vector expected")
    cs = [Fraction(c) for c in coeffs]
    return CircleVec(sum((c * b for c, b in zip(cs, row)), Fraction(0)) for row in B)


def interior_cokernel(graph: SinkedGraph) -> GroupStructure:
    """``Z^{interior} / Δ°Z^Γ``."""
    return cokernel_structure(interior_laplacian(graph))


def sandpile_group_structure(graph: SinkedGraph) -> GroupStructure:
    return cokernel_structure(graph.laplacian)


class CosetCoordinates:
    """Smith coordinates on ``Z^Γ / ΔZ^Γ``.

    A configuration f maps to ``(U f)_i mod s_i`` over the Smith factors
    ``s_i > 1``; two configurations share a class iff their coordinates agree.
    """

    def __init__(self, graph: SinkedGraph):
        dec = snf(graph.laplacian)
        keep = [i for i, s in enumerate(dec.diagonal) if s > 1]
        self.graph = graph
        self.moduli = tuple(dec.diagonal[i] for i in keep)
        self.U = dec.U.select_rows(keep)

    def _moduli_matrix(self) -> IntMatrix:
        k = len(self.moduli)
        return IntMatrix([[self.moduli[i] if i == j else 0 for j in range(k)] for i in range(k)], cols=k)

    def __call__(self, f: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % s for x, s in zip(self.U @ f, self.moduli))

    def add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % s for x, y, s in zip(a, b, self.moduli))

    def subgroup_order(self, configs: Sequence[Sequence[int]]) -> int:
        """Order of the subgroup generated by the classes of ``configs``."""
        k = len(self.moduli)
        if k == 0:
            return 1
        gens = IntMatrix.from_columns([self(f) for f in configs], rows=k) if configs else IntMatrix.zeros(k, 0)
        diag = self._moduli_matrix()
        return prod(self.moduli) // lattice_index(gens.hstack(diag))

    def kernel_lattice(self, configs: Sequence[Sequence[int]]) -> IntMatrix:
        """Generators (columns) of ``{c in Z^m : sum c_j configs[j] in ΔZ^Γ}``."""
        m = len(configs)
        k = len(self.moduli)
        if k == 0:
            return IntMatrix.identity(m)
        gens = IntMatrix.from_columns([self.U @ f for f in configs], rows=k) if m else IntMatrix.zeros(k, 0)
        diag = self._moduli_matrix()
        K = kernel_basis(gens.hstack(diag))
        return K.select_rows(range(m))


def delta(graph: SinkedGraph, i: int, times: int = 1) -> tuple[int, ...]:
    return tuple(times if j == i else 0 for j in range(len(graph)))


def boundary_subgroup_order(graph: SinkedGraph) -> int:
    """Order of the subgroup generated by single grains at boundary vertices.

    Computed as ``|det Δ| / |Coker Δ°|`` and checked against the subgroup
    order in Smith coordinates.
    """
    order = graph.det // interior_cokernel(graph).order
    snf_order = boundary_subgroup_order_snf(graph)
    if order != snf_order:
        raise ArithmeticError(f"boundary subgroup order mismatch: {order} vs {snf_order}")
    return order


def boundary_subgroup_order_snf(graph: SinkedGraph) -> int:
    coords = CosetCoordinates(graph)
    return coords.subgroup_order([delta(graph, b) for b in graph.boundary])


def pairing(graph: SinkedGraph, f: Sequence[int], psi: CircleVec) -> Fraction:
    """``sum_v f(v) psi(v) mod 1`` for a strictly harmonic psi."""
    _check_len(graph, f)
    if not is_strictly_harmonic(graph, psi):
        raise NotHarmonicError("pairing needs a strictly harmonic circle function")
    return sum((int(a) * b for a, b in zip(f, psi.values)), Fraction(0)) % 1


def harmonic_group(graph: SinkedGraph, cap: int = 10**5) -> dict[CircleVec, tuple[int, ...]]:
    """All strictly harmonic circle functions, each with a configuration
    representing the same class. Built by closing the images of the unit
    configurations under addition."""
    n = len(graph)
    gens = [(strict_harmonic_from_config(graph, delta(graph, i)), delta(graph, i)) for i in range(n)]
    zero = CircleVec.zero(n)
    seen = {zero: (0,) * n}
    frontier = [zero]
    while frontier:
        nxt = []
        for psi in frontier:
            f = seen[psi]
            for g, e in gens:
                s = psi + g
                if s not in seen:
                    seen[s] = tuple(a + b for a, b in zip(f, e))
                    nxt.append(s)
                    if len(seen) > cap:
                        raise CapExceeded(f"harmonic group exceeds cap {cap}")
        frontier = nxt
    return seen


def pairing_nondegenerate(graph: SinkedGraph, cap: int = 10**5) -> bool:
    """Exhaustive nondegeneracy of the pairing on both sides."""
    if graph.det > cap:
        raise CapExceeded(f"group order {graph.det} exceeds cap {cap}")
    elements = harmonic_group(graph, cap)
    if len(elements) != graph.det:
        return False
    n = len(graph)
    units = [delta(graph, w) for w in range(n)]
    gen_psis = [strict_harmonic_from_config(graph, e) for e in units]
    for psi, f in elements.items():
        if psi.is_zero():
            continue
        # psi is seen by some unit configuration
        if all(pairing(graph, e, psi) == 0 for e in units):
            return False
        # the class of f (nonzero, since psi != 0) is seen by some generator
        if all(pairing(graph, f, g) == 0 for g in gen_psis):
            return False
    return True


def restrict(psi: CircleVec, emb: Embedding) -> CircleVec:
    """Pull a circle function on the target back to the source."""
    if len(psi) != len(emb.target):
        raise ValueError("circle function does not live on the embedding target")
    return CircleVec(psi.values[j] for j in emb.vertex_map)


@dataclass(frozen=True)
class ExtendedGroupPresentation:
    """Extended group as (torus of dimension ``rank``) extended by a finite
    component group ``Coker Δ°``."""

    harmonic: HarmonicLattice
    components: GroupStructure

    @property
    def torus_dimension(self) -> int:
        return self.harmonic.rank


def extended_group(graph: SinkedGraph) -> ExtendedGroupPresentation:
    return ExtendedGroupPresentation(integer_harmonic_basis(graph), interior_cokernel(graph))
