"""
SL3 Weights Module - Weight diagrams of sl3 irreps and their su2 profiles.

A weight of the irrep (n, m) with highest weight n mu1 + m mu2 is addressed
by its lowering depth (A, B): the weight n mu1 + m mu2 - A alpha1 - B alpha2.
Inner products use the fundamental-weight Gram matrix
mu_i . mu_j = [[1/3, 1/6], [1/6, 1/3]], so alpha_i . alpha_i = 1 and
alpha1 . alpha2 = -1/2.

Every weight carries three su2 labels (j, m), one per positive root
alpha1, alpha2, alpha3 = alpha1 + alpha2, describing where it sits on the
corresponding root string.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError


class RootIndex(IntEnum):
    """The three positive roots of sl3."""

    ALPHA1 = 1
    ALPHA2 = 2
    ALPHA3 = 3


# positive roots in the fundamental-weight basis
ROOTS: dict[RootIndex, tuple[int, int]] = {
    RootIndex.ALPHA1: (2, -1),
    RootIndex.ALPHA2: (-1, 2),
    RootIndex.ALPHA3: (1, 1),
}

# lowering by each root moves (A, B) by
ROOT_STEPS: dict[RootIndex, tuple[int, int]] = {
    RootIndex.ALPHA1: (1, 0),
    RootIndex.ALPHA2: (0, 1),
    RootIndex.ALPHA3: (1, 1),
}


def _gram(u: tuple[int, int], v: tuple[int, int]) -> Fraction:
    return Fraction(2 * u[0] * v[0] + u[0] * v[1] + u[1] * v[0] + 2 * u[1] * v[1], 6)


@dataclass(frozen=True, order=True)
class WeightSpaceVector:
    """
    The weight mu1_coeff mu1 + mu2_coeff mu2 + a1 alpha1 + a2 alpha2.

    Attributes:
        mu1: Coefficient of mu1
        mu2: Coefficient of mu2
        alpha1: Coefficient of alpha1
        alpha2: Coefficient of alpha2
    """

    mu1: int = 0
    mu2: int = 0
    alpha1: int = 0
    alpha2: int = 0

    @classmethod
    def root(cls, index: RootIndex) -> WeightSpaceVector:
        a1, a2 = ROOT_STEPS[RootIndex(index)]
        return cls(0, 0, a1, a2)

    def fundamental_coordinates(self) -> tuple[int, int]:
        """Coordinates in the (mu1, mu2) basis."""
        return (
            self.mu1 + 2 * self.alpha1 - self.alpha2,
            self.mu2 - self.alpha1 + 2 * self.alpha2,
        )

    def __add__(self, other: WeightSpaceVector) -> WeightSpaceVector:
        return WeightSpaceVector(
            self.mu1 + other.mu1,
            self.mu2 + other.mu2,
            self.alpha1 + other.alpha1,
            self.alpha2 + other.alpha2,
        )


def inner_product(u: WeightSpaceVector, v: WeightSpaceVector) -> Fraction:
    """
    Exact inner product of two weights.

    Example: (5 mu1 + 2 mu2 - alpha1 - 3 alpha2) . alpha1 = 3.
    """
    return _gram(u.fundamental_coordinates(), v.fundamental_coordinates())


@dataclass(frozen=True, order=True)
class WeightVector:
    """
    The weight (n, m, A, B) = n mu1 + m mu2 - A alpha1 - B alpha2 of irrep (n, m).

    Attributes:
        n: First Dynkin label of the irrep
        m: Second Dynkin label of the irrep
        A: Lowering depth along alpha1
        B: Lowering depth along alpha2
    """

    n: int
    m: int
    A: int
    B: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise DomainError(f"irrep labels must be non-negative, got ({self.n}, {self.m})")

    @property
    def rep(self) -> tuple[int, int]:
        return (self.n, self.m)

    @property
    def depth(self) -> tuple[int, int]:
        return (self.A, self.B)

    def vector(self) -> WeightSpaceVector:
        return WeightSpaceVector(self.n, self.m, -self.A, -self.B)

    def fundamental_coordinates(self) -> tuple[int, int]:
        """The weight itself in the (mu1, mu2) basis (its Dynkin labels)."""
        return self.vector().fundamental_coordinates()

    def in_diagram(self) -> bool:
        """Check that (A, B) lies inside the weight hexagon of (n, m)."""
        return in_weight_diagram(self.n, self.m, self.A, self.B)

    def lower(self, root: RootIndex, power: int = 1) -> WeightVector:
        step_a, step_b = ROOT_STEPS[RootIndex(root)]
        return WeightVector(self.n, self.m, self.A + power * step_a, self.B + power * step_b)

    def raise_(self, root: RootIndex, power: int = 1) -> WeightVector:
        return self.lower(root, -power)

    def label(self) -> str:
        return f"({self.A},{self.B})"


def in_weight_diagram(n: int, m: int, A: int, B: int) -> bool:
    """Hexagon membership: 0 <= A, B <= n + m, A - B <= n, B - A <= m."""
    return 0 <= A <= n + m and 0 <= B <= n + m and A - B <= n and B - A <= m


def shell_depth(n: int, m: int, A: int, B: int) -> int:
    """
    Distance of (A, B) from the boundary of the hexagon.

    Returns:
        0 on the boundary, -1 outside the diagram
    """
    if not in_weight_diagram(n, m, A, B):
        return -1
    return min(A, B, n + m - A, n + m - B, n - (A - B), m - (B - A))


def multiplicity(n: int, m: int, A: int, B: int) -> int:
    """
    Weight multiplicity: one on the outer shell, growing by one per shell
    inward until it saturates at min(n, m) + 1.
    """
    depth = shell_depth(n, m, A, B)
    if depth < 0:
        return 0
    return min(depth, min(n, m)) + 1


def dimension(n: int, m: int) -> int:
    """Weyl dimension (n+1)(m+1)(n+m+2)/2."""
    if n < 0 or m < 0:
        raise DomainError(f"irrep labels must be non-negative, got ({n}, {m})")
    return (n + 1) * (m + 1) * (n + m + 2) // 2


@lru_cache(maxsize=None)
def enumerate_weights(n: int, m: int) -> tuple[tuple[WeightVector, int], ...]:
    """
    Every weight of (n, m) with its multiplicity, ordered by (A, B).

    The multiplicities sum to dimension(n, m).
    """
    if n < 0 or m < 0:
        raise DomainError(f"irrep labels must be non-negative, got ({n}, {m})")
    return tuple(
        (WeightVector(n, m, A, B), multiplicity(n, m, A, B))
        for A in range(n + m + 1)
        for B in range(n + m + 1)
        if in_weight_diagram(n, m, A, B)
    )


@dataclass(frozen=True)
class SubalgebraProfile:
    """
    The su2 labels of a weight along the three positive roots.

    Attributes:
        j: (j1, j2, j3), half-integers
        m: (m1, m2, m3), half-integers
    """

    j: tuple[Fraction, Fraction, Fraction]
    m: tuple[Fraction, Fraction, Fraction]

    def pair(self, root: RootIndex) -> tuple[Fraction, Fraction]:
        index = int(root) - 1
        return self.j[index], self.m[index]

    def room(self, root: RootIndex) -> int:
        """Number of lowering steps left along the root string (j + m)."""
        spin, projection = self.pair(root)
        return int(spin + projection)


@lru_cache(maxsize=None)
def subalgebra_profile(weight: WeightVector) -> SubalgebraProfile:
    """
    Compute the su2 labels of a weight.

    j along alpha1 is measured from the top of the alpha1 string through
    the weight, j along alpha2 likewise, and j along alpha3 from the top
    of the alpha3 string; m is always weight . alpha.

    Raises:
        DomainError: If the weight lies outside its diagram
    """
    if not weight.in_diagram():
        raise DomainError(f"weight {weight.label()} is outside the diagram of {weight.rep}")
    n, m, A, B = weight.n, weight.m, weight.A, weight.B
    top = WeightSpaceVector(n, m)
    alpha1 = WeightSpaceVector.root(RootIndex.ALPHA1)
    alpha2 = WeightSpaceVector.root(RootIndex.ALPHA2)
    alpha3 = WeightSpaceVector.root(RootIndex.ALPHA3)

    j1 = inner_product(top + WeightSpaceVector(0, 0, -max(B - m, 0), -B), alpha1)
    j2 = inner_product(top + WeightSpaceVector(0, 0, -A, -max(A - n, 0)), alpha2)
    if A >= B:
        j3 = inner_product(top + WeightSpaceVector(0, 0, -(A - B), 0), alpha3)
    else:
        j3 = inner_product(top + WeightSpaceVector(0, 0, 0, -(B - A)), alpha3)

    here = weight.vector()
    projections = (
        inner_product(here, alpha1),
        inner_product(here, alpha2),
        inner_product(here, alpha3),
    )
    return SubalgebraProfile((j1, j2, j3), projections)


def conjugate_weight(weight: WeightVector) -> WeightVector:
    """The image of (n, m, A, B) under conjugation: (m, n, B, A)."""
    return WeightVector(weight.m, weight.n, weight.B, weight.A)

