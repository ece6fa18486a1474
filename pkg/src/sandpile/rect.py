"""Folding monomorphisms and epimorphisms between rectangle sandpile groups.

Group elements are strictly harmonic circle functions on
``Γ(p, q) = (0, p) x (0, q) ∩ Z^2`` (see :mod:`sandpile.harmonic`). The big
rectangle ``Γ(mp, nq)`` is tiled by m x n copies of the small one, each
reflected accordion-style with alternating sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .graph import SinkedGraph, rectangle_graph, translate_embedding
from .harmonic import (
    CircleVec,
    NotHarmonicError,
    config_from_strict_harmonic,
    delta,
    harmonic_group,
    is_strictly_harmonic,
    pairing,
    restrict,
    strict_harmonic_from_config,
)


@lru_cache(maxsize=None)
def rect(p: int, q: int) -> SinkedGraph:
    return rectangle_graph(p, q)


def fold(p: int, k: int, x: int) -> int:
    """Map ``[0, p]`` onto the k-th tile ``[kp, (k+1)p]``, reversed on odd tiles."""
    if not 0 <= x <= p:
        raise ValueError(f"x={x} outside [0, {p}]")
    if k < 0:
        raise ValueError("tile index must be non-negative")
    return k * p + x if k % 2 == 0 else (k + 1) * p - x


def unfold(p: int, x: int) -> tuple[int, int]:
    """Tile index ``k = x // p`` and the preimage of x under ``fold(p, k, .)``."""
    k = x // p
    r = x - k * p
    return k, r if k % 2 == 0 else p - r


@dataclass(frozen=True)
class RectMorphismSpec:
    """Small rectangle ``(p, q)`` tiled ``m`` by ``n`` times."""

    p: int
    q: int
    m: int = 1
    n: int = 1
    direction: str = "mono"

    def __post_init__(self):
        if self.p < 2 or self.q < 2:
            raise ValueError("rectangle sides must be at least 2")
        if self.m < 1 or self.n < 1:
            raise ValueError("tiling multiplicities must be positive")
        if self.direction not in ("mono", "epi"):
            raise ValueError(f"unknown direction {self.direction!r}")

    @property
    def small(self) -> SinkedGraph:
        return rect(self.p, self.q)

    @property
    def big(self) -> SinkedGraph:
        return rect(self.m * self.p, self.n * self.q)

    @property
    def source(self) -> SinkedGraph:
        return self.small if self.direction == "mono" else self.big

    @property
    def target(self) -> SinkedGraph:
        return self.big if self.direction == "mono" else self.small

    def apply(self, psi: CircleVec) -> CircleVec:
        if self.direction == "mono":
            return mono_apply(psi, self.p, self.q, self.m, self.n)
        return epi_apply(psi, self.p, self.q, self.m, self.n)


def _require_strict(graph: SinkedGraph, psi: CircleVec):
    if len(psi) != len(graph):
        raise ValueError(f"expected {len(graph)} values, got {len(psi)}")
    if not is_strictly_harmonic(graph, psi):
        raise NotHarmonicError("input is not strictly harmonic")


def mono_apply(psi: CircleVec, p: int, q: int, m: int, n: int) -> CircleVec:
    """Extend psi by zero to the closed rectangle, then reflect it oddly
    across every tile edge of ``Γ(mp, nq)``."""
    small, big = rect(p, q), rect(m * p, n * q)
    _require_strict(small, psi)
    idx = small.index
    out = []
    for x, y in big.vertices:
        k, x0 = unfold(p, x)
        l, y0 = unfold(q, y)
        i = idx.get((x0, y0))
        v = psi.values[i] if i is not None else Fraction(0)
        out.append(-v if (k + l) % 2 else v)
    return CircleVec(out)


def epi_apply(psi: CircleVec, p: int, q: int, m: int, n: int) -> CircleVec:
    """Alternating sum of psi over the m*n folded copies of each small vertex."""
    small, big = rect(p, q), rect(m * p, n * q)
    _require_strict(big, psi)
    idx = big.index
    out = []
    for x, y in small.vertices:
        total = Fraction(0)
        for k in range(m):
            for l in range(n):
                i = idx.get((fold(p, k, x), fold(q, l, y)))
                if i is not None:
                    total += -psi.values[i] if (k + l) % 2 else psi.values[i]
        out.append(total)
    return CircleVec(out)


def generators(graph: SinkedGraph) -> list[CircleVec]:
    """Images of the unit configurations; they generate the group."""
    return [strict_harmonic_from_config(graph, delta(graph, i)) for i in range(len(graph))]


def check_composition(p: int, q: int, m: int, n: int) -> bool:
    """``epi(mono(psi)) == m*n*psi`` on every generator of ``G(Γ(p, q))``."""
    return all(
        epi_apply(mono_apply(g, p, q, m, n), p, q, m, n) == (m * n) * g
        for g in generators(rect(p, q))
    )


def check_adjoint(p: int, q: int, m: int, n: int, exhaustive_cap: int = 10**4) -> bool:
    """Epi is the dual of mono under the canonical pairings.

    Checks ``Q_small(f, epi(psi)) == Q_big(f', psi)`` where f' is a
    configuration in the class of ``mono(f)``. Runs over all element pairs
    when the product of group orders is at most ``exhaustive_cap``,
    otherwise over pairs of generators.
    """
    small, big = rect(p, q), rect(m * p, n * q)
    if small.det * big.det <= exhaustive_cap:
        small_side = list(harmonic_group(small).items())
        big_side = list(harmonic_group(big))
    else:
        small_side = [(g, delta(small, i)) for i, g in enumerate(generators(small))]
        big_side = generators(big)
    for phi, f in small_side:
        f_big = config_from_strict_harmonic(big, mono_apply(phi, p, q, m, n))
        for psi in big_side:
            if pairing(small, f, epi_apply(psi, p, q, m, n)) != pairing(big, f_big, psi):
                return False
    return True


@lru_cache(maxsize=None)
def gamma(p: int, q: int) -> int:
    """Number of spanning trees of the rectangle graph, ``|G(Γ(p, q))|``."""
    if p < 2 or q < 2:
        raise ValueError("rectangle sides must be at least 2")
    if p > q:
        return gamma(q, p)
    return rect(p, q).det


def check_divisibility(p: int, q: int, m: int, n: int) -> dict:
    small = gamma(p, q)
    big = gamma(m * p, n * q)
    square_case = (m * n) % small == 0
    return {
        "gamma_small": small,
        "gamma_big": big,
        "divides": big % small == 0,
        "square_case_applicable": square_case,
        "square_divides": big % (small * small) == 0,
    }


def check_prop4(m: int, n: int, p: int, q: int) -> bool:
    """Restricting the image of ``G(Γ(m, n)) -> G(Γ(pm, qn))`` to the corner
    copy of ``Γ(m, n)`` gives back the original element.

    Argument roles follow the diagram: ``(m, n)`` is the small rectangle and
    ``(p, q)`` the scaling.
    """
    small, big = rect(m, n), rect(p * m, q * n)
    corner = translate_embedding(small, big, (0, 0))
    return all(restrict(mono_apply(g, m, n, p, q), corner) == g for g in generators(small))


def table(max_m: int, max_n: int) -> list[list[int]]:
    return [[gamma(a, b) for b in range(2, max_n + 1)] for a in range(2, max_m + 1)]


def tiling_specs(max_side: int = 4, max_mult: int = 3, max_big: int = 12):
    """Quadruples ``(p, q, m, n)`` of the divisibility sweep."""
    for p, q, m, n in product(range(2, max_side + 1), range(2, max_side + 1),
                              range(1, max_mult + 1), range(1, max_mult + 1)):
        if m * p <= max_big and n * q <= max_big:
            yield p, q, m, n
