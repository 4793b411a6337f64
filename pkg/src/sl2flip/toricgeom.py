"""Simplicial cones, small fans, and wall-curve intersection numbers.

Everything is exact integer or rational arithmetic.  The fans that show up
here have at most four maximal cones (one wall, two chambers, or a star
subdivision), so face compatibility is checked by exhaustive pairwise
inspection instead of anything clever.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .lattice import (
    IntMatrix,
    Vec,
    det2,
    kernel_basis,
    primitive,
    smith_normal_form,
    xgcd,
)

__all__ = [
    "Cone",
    "CyclicSingularity",
    "Fan",
    "classify_2d",
    "common_wall",
    "cone_contains",
    "flip_subdivisions",
    "gaifullin_criterion",
    "multiplicity",
    "sigma0_of",
    "sigma_of",
    "star_subdivide_at_v5",
    "wall_curve_K_degree",
]


def _cross(u: Vec, v: Vec) -> Vec:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _dot(u: Vec, v: Vec) -> int:
    return sum(a * b for a, b in zip(u, v))


def _proportional(u: Vec, v: Vec) -> bool:
    if len(u) == 2:
        return det2(u, v) == 0
    return _cross(u, v) == (0, 0, 0)


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone given by its extremal rays.

    Rays must be primitive and pairwise non-proportional.  Nothing here
    checks that the listed rays really are extremal for their hull; the
    constructors in this module only ever build cones where they are.
    """

    rays: tuple[Vec, ...]

    def __post_init__(self):
        if not self.rays:
            raise ValueError("cone needs at least one ray")
        dim = len(self.rays[0])
        if dim not in (2, 3):
            raise ValueError("only rank 2 and 3 cones are supported")
        for r in self.rays:
            if len(r) != dim:
                raise ValueError("rays of mixed dimension")
            if r != primitive(r):
                raise ValueError(f"ray {r} is not primitive")
        for i in range(len(self.rays)):
            for j in range(i + 1, len(self.rays)):
                if _proportional(self.rays[i], self.rays[j]):
                    raise ValueError("proportional rays")

    @property
    def dim(self) -> int:
        return len(self.rays[0])


def _solve_exact(cols: tuple[Vec, ...], target) -> list[Fraction] | None:
    """Solve sum_j x_j cols[j] = target over the rationals by elimination.

    Columns must be linearly independent.  Returns None when the target is
    outside their span.
    """
    rows, n = len(target), len(cols)
    aug = [
        [Fraction(cols[j][i]) for j in range(n)] + [Fraction(target[i])]
        for i in range(rows)
    ]
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, rows) if aug[i][col]), None)
        if piv is None:
            raise ValueError("dependent columns")
        aug[row], aug[piv] = aug[piv], aug[row]
        scale = aug[row][col]
        aug[row] = [v / scale for v in aug[row]]
        for i in range(rows):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        row += 1
    if any(aug[i][n] for i in range(row, rows)):
        return None
    return [aug[i][n] for i in range(n)]


def cone_contains(c: Cone, x: Vec) -> bool:
    """Weak membership test for a simplicial cone."""
    if len(x) != c.dim:
        raise ValueError("dimension mismatch")
    sol = _solve_exact(c.rays, x)
    return sol is not None and all(v >= 0 for v in sol)


def multiplicity(c: Cone) -> int:
    """Index of the subgroup spanned by the rays inside the lattice points
    of their linear span.  1 means the cone is smooth."""
    diag = smith_normal_form(IntMatrix.from_cols(c.rays)).diag
    nonzero = [d for d in diag if d != 0]
    if len(nonzero) != len(c.rays):
        raise ValueError("cone is not simplicial")
    out = 1
    for d in nonzero:
        out *= d
    return out


@dataclass(frozen=True)
class CyclicSingularity:
    """Cyclic quotient surface singularity of type 1/order (1, twist)."""

    order: int
    twist: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        if not 0 <= self.twist < self.order:
            raise ValueError("twist out of range")
        if self.order > 1 and gcd(self.twist, self.order) != 1:
            raise ValueError("twist must be a unit")

    @property
    def is_smooth(self) -> bool:
        return self.order == 1

    def same_type(self, other: "CyclicSingularity") -> bool:
        # 1/n(1,c) and 1/n(1,c') are isomorphic iff c' = c or cc' = 1 mod n;
        # swapping the rays of a cone inverts the twist
        if self.order != other.order:
            return False
        if self.order == 1:
            return True
        return (
            self.twist == other.twist
            or (self.twist * other.twist) % self.order == 1
        )

    def __str__(self) -> str:
        if self.order == 1:
            return "smooth"
        return f"1/{self.order}(1,{self.twist})"


def classify_2d(c: Cone) -> CyclicSingularity:
    """Normal form of a pointed 2-d cone under GL(2,Z).

    Sends ray 1 to (1,0) and ray 2 to (-c, n) with 0 <= c < n, where n is
    the multiplicity; the quotient singularity is then of type 1/n(1,c).
    """
    if c.dim != 2 or len(c.rays) != 2:
        raise ValueError("expected two rays in rank 2")
    r1, r2 = c.rays
    e, f = r1
    x, y, _ = xgcd(e, f)
    s = x * r2[0] + y * r2[1]
    n = e * r2[1] - f * r2[0]
    if n < 0:
        n = -n
    return CyclicSingularity(n, (-s) % n)


@dataclass(frozen=True)
class Fan:
    """A set of maximal simplicial cones intersecting in common faces.

    Validation is pairwise: cones sharing a 2-face must sit on strictly
    opposite sides of it, and otherwise no ray of one cone may lie inside
    another.  That suffices for the handful of small fans built here.
    """

    max_cones: tuple[Cone, ...]

    def __post_init__(self):
        if not self.max_cones:
            raise ValueError("fan needs at least one cone")
        dim = self.max_cones[0].dim
        for c in self.max_cones:
            if c.dim != dim:
                raise ValueError("cones of mixed dimension")
            multiplicity(c)  # rejects non-simplicial cones
        for i in range(len(self.max_cones)):
            for j in range(i + 1, len(self.max_cones)):
                self._check_pair(self.max_cones[i], self.max_cones[j])

    @staticmethod
    def _check_pair(a: Cone, b: Cone) -> None:
        shared = [r for r in a.rays if r in b.rays]
        if len(shared) == min(len(a.rays), len(b.rays)):
            raise ValueError("duplicate or nested cones")
        if len(shared) == 2 and a.dim == 3 and len(a.rays) == 3 == len(b.rays):
            n = _cross(shared[0], shared[1])
            sa = _dot(n, next(r for r in a.rays if r not in shared))
            sb = _dot(n, next(r for r in b.rays if r not in shared))
            if sa * sb >= 0:
                raise ValueError("cones overlap across a shared 2-face")
            return
        for first, second in ((a, b), (b, a)):
            for r in first.rays:
                if r not in shared and cone_contains(second, r):
                    raise ValueError("ray of one cone lies inside another")

    def rays(self) -> tuple[Vec, ...]:
        out: list[Vec] = []
        for c in self.max_cones:
            for r in c.rays:
                if r not in out:
                    out.append(r)
        return tuple(out)


def _check_pq(p: int, q: int) -> None:
    if not (0 < p < q and gcd(p, q) == 1):
        raise ValueError("need 0 < p < q coprime")


def sigma_of(p: int, q: int, a: int) -> Cone:
    """The 4-ray degeneration cone with rays

        v1 = e1,  v2 = -e1 + aq e3,  v3 = e2,  v4 = -e2 + ap e3,

    satisfying p(v1 + v2) = q(v3 + v4)."""
    _check_pq(p, q)
    if a < 1:
        raise ValueError("a must be positive")
    v1 = (1, 0, 0)
    v2 = (-1, 0, a * q)
    v3 = (0, 1, 0)
    v4 = (0, -1, a * p)
    assert all(p * (x + y) == q * (z + w) for x, y, z, w in zip(v1, v2, v3, v4))
    return Cone((v1, v2, v3, v4))


def sigma0_of(p: int, q: int) -> Cone:
    """The 4-ray cone with rays

        v1 = (0,0,1),  v2 = (1,1,-1),  v3 = (0,1,0),  v4 = (p,-q,0),

    satisfying p(v1 + v2) = (p+q) v3 + v4.  Same abstract threefold as the
    sigma_of cone for a = 1, but the relation coefficients are lopsided."""
    _check_pq(p, q)
    v1 = (0, 0, 1)
    v2 = (1, 1, -1)
    v3 = (0, 1, 0)
    v4 = (p, -q, 0)
    assert all(
        p * (x + y) == (p + q) * z + w for x, y, z, w in zip(v1, v2, v3, v4)
    )
    return Cone((v1, v2, v3, v4))


def _facets_of_4cone(c: Cone) -> list[tuple[int, int, Vec]]:
    """Facet pairs (i, j) of a 4-ray cone with inward normals."""
    out = []
    for i in range(4):
        for j in range(i + 1, 4):
            n = _cross(c.rays[i], c.rays[j])
            rest = [c.rays[k] for k in range(4) if k not in (i, j)]
            signs = [_dot(n, r) for r in rest]
            if all(v > 0 for v in signs):
                out.append((i, j, n))
            elif all(v < 0 for v in signs):
                out.append((i, j, tuple(-x for x in n)))
    return out


V5: Vec = (0, 0, 1)


def star_subdivide_at_v5(c: Cone) -> Fan:
    """Star subdivision of a 4-ray cone through v5 = e3.

    Requires e3 to lie in the interior; returns the four cones spanned by
    v5 and the facets of the input.
    """
    if c.dim != 3 or len(c.rays) != 4:
        raise ValueError("expected a 4-ray cone in rank 3")
    facets = _facets_of_4cone(c)
    if len(facets) != 4:
        raise ValueError("rays are not in convex position")
    for _, _, n in facets:
        if _dot(n, V5) <= 0:
            raise ValueError("e3 does not lie in the interior")
    return Fan(
        tuple(Cone((c.rays[i], c.rays[j], V5)) for i, j, _ in facets)
    )


def flip_subdivisions(c: Cone) -> tuple[Fan, Fan]:
    """The two 2-cone triangulations of a 4-ray cone.

    The rays satisfy a unique relation splitting them into two pairs with
    positive coefficients on each side.  Returned as (plus, minus), where
    the plus fan is subdivided through the pair with the larger coefficient
    sum; the wall curve of that fan is the one K pairs positively with.  On
    a tie both wall curves have K-degree 0 and the choice is stabilized by
    putting the lexicographically smallest ray on the plus wall.
    """
    if c.dim != 3 or len(c.rays) != 4:
        raise ValueError("expected a 4-ray cone in rank 3")
    ker = kernel_basis(IntMatrix.from_cols(c.rays))
    if len(ker) != 1:
        raise ValueError("rays do not span the lattice")
    rel = primitive(ker[0])
    if any(v == 0 for v in rel):
        raise ValueError("some three rays are dependent")
    if rel[0] < 0:
        rel = tuple(-v for v in rel)
    pos = tuple(i for i in range(4) if rel[i] > 0)
    neg = tuple(i for i in range(4) if rel[i] < 0)
    if len(pos) != 2:
        raise ValueError("relation does not split the rays into pairs")
    pos_sum = rel[pos[0]] + rel[pos[1]]
    neg_sum = -rel[neg[0]] - rel[neg[1]]
    if pos_sum != neg_sum:
        wall, other = (pos, neg) if pos_sum > neg_sum else (neg, pos)
    else:
        smallest = min(c.rays)
        on_pos = smallest in (c.rays[pos[0]], c.rays[pos[1]])
        wall, other = (pos, neg) if on_pos else (neg, pos)

    def fan_through(widx, oidx):
        w1, w2 = c.rays[widx[0]], c.rays[widx[1]]
        return Fan(tuple(Cone((w1, w2, c.rays[o])) for o in oidx))

    return fan_through(wall, other), fan_through(other, wall)


def common_wall(f: Fan) -> Cone:
    """The shared 2-face of a fan with exactly two maximal cones."""
    if len(f.max_cones) != 2:
        raise ValueError("expected exactly two maximal cones")
    a, b = f.max_cones
    shared = tuple(r for r in a.rays if r in b.rays)
    if len(shared) != 2:
        raise ValueError("cones do not share a 2-face")
    return Cone(shared)


def wall_curve_K_degree(f: Fan, wall: Cone) -> Fraction:
    """Degree of K on the torus-invariant curve of a wall.

    With -K = sum of all ray divisors, the pairing of each divisor with the
    wall curve is mult(wall)/mult(chamber) for the two completing rays; the
    pairings of the wall's own rays are forced by the relations
    sum <u, v_rho> (D_rho . C) = 0 for a basis of characters u.
    """
    if wall.dim != 3 or len(wall.rays) != 2:
        raise ValueError("wall must be a 2-ray cone in rank 3")
    wset = set(wall.rays)
    carriers = [c for c in f.max_cones if wset <= set(c.rays)]
    if len(carriers) != 2:
        raise ValueError("wall must be a face of exactly two maximal cones")
    completing = [next(r for r in c.rays if r not in wset) for c in carriers]
    mt = multiplicity(wall)
    coeffs = [Fraction(mt, multiplicity(c)) for c in carriers]
    target = tuple(
        -(coeffs[0] * completing[0][i] + coeffs[1] * completing[1][i])
        for i in range(3)
    )
    sol = _solve_exact(wall.rays, target)
    if sol is None:
        raise ValueError("wall relation is inconsistent")
    return -(coeffs[0] + coeffs[1] + sol[0] + sol[1])


def gaifullin_criterion(rays, coefficients) -> bool:
    """Quasihomogeneity test for a 4-ray cone.

    Given the relation n1 v1 + n2 v2 = n3 v3 + n4 v4 with positive integer
    coefficients (verified), the affine toric threefold carries a
    quasihomogeneous SL(2)-action iff n1 = n2 and n3 = n4.
    """
    rays = tuple(tuple(r) for r in rays)
    coefficients = tuple(coefficients)
    if len(rays) != 4 or len(coefficients) != 4:
        raise ValueError("need four rays and four coefficients")
    if not all(isinstance(n, int) and n > 0 for n in coefficients):
        raise ValueError("coefficients must be positive integers")
    n1, n2, n3, n4 = coefficients
    v1, v2, v3, v4 = rays
    lhs = tuple(n1 * a + n2 * b for a, b in zip(v1, v2))
    rhs = tuple(n3 * a + n4 * b for a, b in zip(v3, v4))
    if lhs != rhs:
        raise ValueError("relation does not hold")
    return n1 == n2 and n3 == n4
