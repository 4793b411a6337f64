"""Affine semigroups cut out by covector inequalities and congruences.

All semigroups here are of the shape

    S = { x in Z^rank : c . x >= 0 for the inequality covectors c,
                        g . x == 0 mod n for the congruence pairs (g, n) }

i.e. the lattice points of a rational cone intersected with a finite-index
sublattice.  That makes membership a constraint check, and it makes the
rank-2 Hilbert basis computation exact: two extremal rays, one minimal
semigroup point on each, the fundamental parallelepiped between them, and a
decomposability sieve.

The concrete semigroups of interest are spanned by a height h = p/q and a
degree m (0 < p <= q coprime, m >= 1):

  make_Mplus   dominant weights (i, j) with p*i - q*j >= 0 in the first
               quadrant, i == j mod m; the weight monoid of the open orbit
               closure in the plus chart
  make_Mminus  same covector but j free to go negative (i >= 0 only); the
               minus chart
  make_Mprime  p*j - q*i >= 0 together with j >= i; the fixed-point chart
               (not pointed when p == q == 1)
  make_Mtilde  rank-3 degeneration semigroup fibered over make_Mplus with
               fiber cardinality i + j + 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .lattice import (
    IntMatrix,
    Vec,
    det2,
    kernel_basis,
    lattice_basis_from_generators,
    primitive,
)


@dataclass(frozen=True)
class AffineSemigroup:
    rank: int
    inequalities: tuple[Vec, ...]
    congruences: tuple[tuple[Vec, int], ...] = ()
    nonneg_coords: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for c in self.inequalities:
            if len(c) != self.rank:
                raise ValueError("inequality covector has wrong length")
        for g, n in self.congruences:
            if len(g) != self.rank or n < 1:
                raise ValueError("bad congruence")
        for i in self.nonneg_coords:
            if not 0 <= i < self.rank:
                raise ValueError("nonneg coordinate index out of range")

    def effective_inequalities(self) -> tuple[Vec, ...]:
        """Inequality covectors with the nonnegativity constraints unfolded."""
        units = tuple(
            tuple(1 if j == i else 0 for j in range(self.rank))
            for i in self.nonneg_coords
        )
        return self.inequalities + units

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.rank:
            raise ValueError("point has wrong length")
        for i in self.nonneg_coords:
            if x[i] < 0:
                return False
        for c in self.inequalities:
            if sum(ci * xi for ci, xi in zip(c, x)) < 0:
                return False
        for g, n in self.congruences:
            if sum(gi * xi for gi, xi in zip(g, x)) % n != 0:
                return False
        return True


def _check_params(p: int, q: int, m: int) -> None:
    if not (0 < p <= q) or math.gcd(p, q) != 1 or m < 1:
        raise ValueError(f"need 0 < p <= q coprime and m >= 1, got p={p} q={q} m={m}")


def make_Mplus(p: int, q: int, m: int) -> AffineSemigroup:
    _check_params(p, q, m)
    return AffineSemigroup(2, ((p, -q),), (((1, -1), m),), nonneg_coords=(0, 1))


def make_Mminus(p: int, q: int, m: int) -> AffineSemigroup:
    """Like make_Mplus but only i >= 0; j may be negative."""
    _check_params(p, q, m)
    return AffineSemigroup(2, ((p, -q),), (((1, -1), m),), nonneg_coords=(0,))


def make_Mprime(p: int, q: int, m: int) -> AffineSemigroup:
    # at p == q == 1 the two covectors coincide and the region is a
    # half-plane; callers asking for a Hilbert basis will get the
    # not-pointed error from cone_rays
    _check_params(p, q, m)
    return AffineSemigroup(2, ((-q, p), (-1, 1)), (((1, -1), m),))


def make_Mtilde(p: int, q: int, m: int, transpose_ij: bool = False) -> AffineSemigroup:
    """Rank-3 semigroup of the toric degeneration.

    Points are (i, j, l) with (i, j) a member of make_Mplus(p, q, m) and
    0 <= l <= i + j.  transpose_ij swaps the roles of i and j (the same
    semigroup in transposed coordinates; both sign conventions are in
    circulation and the fiber structure is identical either way).
    """
    _check_params(p, q, m)
    if transpose_ij:
        ineqs = ((1, 1, -1), (-q, p, 0))
        nonneg = (0, 2)
    else:
        ineqs = ((1, 1, -1), (p, -q, 0))
        nonneg = (1, 2)
    return AffineSemigroup(3, ineqs, (((1, -1, 0), m),), nonneg_coords=nonneg)


def cone_rays(s: AffineSemigroup) -> tuple[Vec, Vec]:
    """The two extremal rays of a pointed full rank-2 cone, lex sorted.

    Raises ValueError when the inequality region is not a pointed
    two-dimensional cone (a half-plane, a line, a single ray, ...).
    """
    if s.rank != 2:
        raise ValueError("cone_rays handles rank 2 only")
    ineqs = s.effective_inequalities()
    rays: list[Vec] = []
    for c in ineqs:
        if c == (0, 0):
            continue
        for d in (primitive((-c[1], c[0])), primitive((c[1], -c[0]))):
            if all(c2[0] * d[0] + c2[1] * d[1] >= 0 for c2 in ineqs):
                if d not in rays:
                    rays.append(d)
    for r in rays:
        if (-r[0], -r[1]) in rays:
            raise ValueError("cone contains a line, not pointed")
    if len(rays) != 2 or det2(rays[0], rays[1]) == 0:
        raise ValueError(f"expected a pointed full 2d cone, found rays {rays}")
    return tuple(sorted(rays))  # type: ignore[return-value]


def minimal_ray_point(s: AffineSemigroup, ray: Sequence[int]) -> Vec:
    """Smallest positive multiple of a primitive extremal ray lying in s.

    On the ray every inequality already holds, so only the congruences can
    fail, and they are periodic in the multiple t with period dividing the
    lcm of the moduli.  Scan up to that bound; running past it means the
    ray was not actually a semigroup direction.
    """
    cap = math.lcm(1, *(n for _, n in s.congruences))
    for t in range(1, cap + 1):
        point = tuple(t * ri for ri in ray)
        if s.contains(point):
            return point
    raise RuntimeError(f"no semigroup point on ray {tuple(ray)} within lcm bound {cap}")


@dataclass(frozen=True)
class HilbertBasis:
    generators: tuple[Vec, ...]
    rays: tuple[Vec, Vec]
    ray_points: tuple[Vec, Vec]


def hilbert_basis(s: AffineSemigroup) -> HilbertBasis:
    """Unique minimal generating set of a pointed rank-2 semigroup.

    Candidates are the minimal points u1, u2 on the two extremal rays plus
    every semigroup point in the half-open parallelepiped
    {a*u1 + b*u2 : 0 <= a, b < 1}.  Any semigroup element reduces into the
    parallelepiped by subtracting copies of u1 and u2, so the candidates
    generate, and the true basis is the candidates that do not split as
    candidate + nonzero semigroup element.
    """
    r1, r2 = cone_rays(s)
    u1 = minimal_ray_point(s, r1)
    u2 = minimal_ray_point(s, r2)
    d = det2(u1, u2)
    corners = [(0, 0), u1, u2, (u1[0] + u2[0], u1[1] + u2[1])]
    xs = range(min(c[0] for c in corners), max(c[0] for c in corners) + 1)
    ys = range(min(c[1] for c in corners), max(c[1] for c in corners) + 1)
    candidates = [u1, u2]
    for x0 in xs:
        for x1 in ys:
            if (x0, x1) == (0, 0):
                continue
            alpha = Fraction(det2((x0, x1), u2), d)
            beta = Fraction(det2(u1, (x0, x1)), d)
            if 0 <= alpha < 1 and 0 <= beta < 1 and s.contains((x0, x1)):
                candidates.append((x0, x1))
    basis = []
    for x in candidates:
        for c in candidates:
            rest = (x[0] - c[0], x[1] - c[1])
            if rest != (0, 0) and s.contains(rest):
                break
        else:
            basis.append(x)
    return HilbertBasis(tuple(sorted(basis)), (r1, r2), (u1, u2))


def fiber_count(s: AffineSemigroup, base: Sequence[int]) -> int:
    """Number of third coordinates over a rank-2 base point.

    For the degeneration semigroup this is i + j + 1 over members of
    make_Mplus and 0 elsewhere; the count is taken by scanning, not by
    trusting that formula.
    """
    if s.rank != 3:
        raise ValueError("fiber_count needs a rank-3 semigroup")
    i, j = base
    if i + j < 0:
        return 0
    return sum(1 for l in range(i + j + 1) if s.contains((i, j, l)))


def congruence_lattice_basis(s: AffineSemigroup) -> tuple[Vec, Vec]:
    """Basis of the finite-index sublattice of Z^2 cut by the congruences."""
    if s.rank != 2:
        raise ValueError("rank 2 only")
    if not s.congruences:
        return ((1, 0), (0, 1))
    # solutions of g.x == 0 mod n are the projections of the integer kernel
    # of the block matrix [covectors | diag(moduli)]
    ncong = len(s.congruences)
    rows = []
    for idx, (g, n) in enumerate(s.congruences):
        row = list(g) + [0] * ncong
        row[2 + idx] = n
        rows.append(row)
    gens = [v[:2] for v in kernel_basis(IntMatrix.from_rows(rows, 2 + ncong))]
    basis = lattice_basis_from_generators(gens, 2)
    if len(basis) != 2:
        raise ValueError("congruence lattice is not finite index")
    return (basis[0], basis[1])


def dual_cone_rays(s: AffineSemigroup) -> tuple[Vec, Vec]:
    """Rays of the dual cone, in coordinates dual to the congruence lattice.

    The slice surface Spec C[s] is the toric surface of this dual cone: its
    character lattice is the congruence sublattice M_s, and the cone sits in
    the lattice dual to M_s.  Returned rays are primitive; their order
    matches the lex order of cone_rays (first dual ray is the one positive
    on the first primal ray).
    """
    r1, r2 = cone_rays(s)
    b1, b2 = congruence_lattice_basis(s)
    d = det2(b1, b2)

    def in_basis(r: Vec) -> Vec:
        # rational coordinates of the ray direction in the M_s basis,
        # scaled back to a primitive integer vector
        a = Fraction(det2(r, b2), d)
        b = Fraction(det2(b1, r), d)
        den = math.lcm(a.denominator, b.denominator)
        return primitive((int(a * den), int(b * den)))

    p1, p2 = in_basis(r1), in_basis(r2)

    def dual_ray(perp_of: Vec, positive_on: Vec) -> Vec:
        sperp = (-perp_of[1], perp_of[0])
        val = sperp[0] * positive_on[0] + sperp[1] * positive_on[1]
        if val == 0:
            raise ValueError("degenerate dual cone")
        return sperp if val > 0 else (-sperp[0], -sperp[1])

    return (dual_ray(p2, p1), dual_ray(p1, p2))


def iter_points_in_box(
    s: AffineSemigroup, lo: Sequence[int], hi: Sequence[int]
) -> Iterator[Vec]:
    """All members with lo <= x <= hi componentwise, lex order."""
    if len(lo) != s.rank or len(hi) != s.rank:
        raise ValueError("box dimension mismatch")
    import itertools

    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if s.contains(x):
            yield x
