"""Shifted lattices S = b + Z^n with optional nonnegative-integer tails.

A tail of k appended coordinates models product sets S x Z_+^k, which is
where lifted cones live.  Truncation by a rational polyhedron is carried as
data but automatic translation-group computation for truncated lattices is
deliberately not attempted; the caller must declare the group.

Enumeration of lattice points inside a polyhedral region works by slicing
tail coordinates at integer heights (the set of nonempty heights of a convex
region is an interval) and running an exact bounding-box scan over the
residues of each 2-D slice.  Output order is lexicographic, so repeated runs
are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DimensionMismatch,
    TruncationNeedsExplicitGroup,
    UnboundedRegion,
)
from .exactgeo import HPoly, fm_feasible, fm_upper_bound, vertices_from_rows, UNBOUNDED
from .rational import Vec, dot, is_integral, rat


@dataclass(frozen=True)
class TranslationGroup:
    """Basis of the translation group plus extra monoid generators."""

    generators: tuple
    monoid_extra: tuple = ()


@dataclass(frozen=True)
class Lattice:
    """S = (b + Z^dim) [ x Z_+^tail ], optionally truncated by a polyhedron."""

    dim: int
    shift: Vec
    tail: int = 0
    truncation: tuple | None = None  # rows (a, c) meaning a.x <= c, or None
    declared_group: TranslationGroup | None = None

    def __post_init__(self):
        if len(self.shift) != self.dim:
            raise DimensionMismatch("lattice shift has wrong length")
        if self.tail not in (0, 1, 2):
            raise DimensionMismatch("tail must be 0, 1 or 2")
        if all(is_integral(c) for c in self.shift):
            raise DimensionMismatch("shift must have a non-integer coordinate")

    @property
    def full_dim(self) -> int:
        return self.dim + self.tail

    def with_tail(self, tail: int) -> "Lattice":
        return Lattice(self.dim, self.shift, tail, self.truncation, self.declared_group)


def contains(lat: Lattice, x: Vec) -> bool:
    """Exact membership of x in S (base residues, tail nonnegativity, truncation)."""
    if len(x) != lat.full_dim:
        raise DimensionMismatch(
            f"point of length {len(x)} against lattice of dimension {lat.full_dim}"
        )
    for xi, bi in zip(x[: lat.dim], lat.shift):
        if not is_integral(rat(xi) - bi):
            return False
    for xi in x[lat.dim :]:
        xi = rat(xi)
        if not is_integral(xi) or xi < 0:
            return False
    if lat.truncation is not None:
        base = tuple(x[: lat.dim])
        if not all(dot(a, base) <= c for a, c in lat.truncation):
            return False
    return True


def translation_group(lat: Lattice) -> TranslationGroup:
    """Translations preserving S: Z^n x {0}^tail, monoid extras on the tail."""
    if lat.truncation is not None:
        if lat.declared_group is None:
            raise TruncationNeedsExplicitGroup(
                "truncated lattice has no declared translation group"
            )
        return lat.declared_group
    d = lat.full_dim

    def unit(i):
        return tuple(Fraction(1) if j == i else Fraction(0) for j in range(d))

    return TranslationGroup(
        generators=tuple(unit(i) for i in range(lat.dim)),
        monoid_extra=tuple(unit(lat.dim + i) for i in range(lat.tail)),
    )


def _base_points_in_rows(lat: Lattice, rows):
    """Lattice residue scan over the bounding box of a 2-D region."""
    poly = vertices_from_rows(rows)
    if poly is UNBOUNDED:
        raise UnboundedRegion("2-D slice has a recession direction")
    if poly.is_empty:
        return []
    xmin, xmax, ymin, ymax = poly.bbox()
    b1, b2 = lat.shift
    out = []
    for i in range(math.ceil(xmin - b1), math.floor(xmax - b1) + 1):
        x = b1 + i
        for j in range(math.ceil(ymin - b2), math.floor(ymax - b2) + 1):
            y = b2 + j
            if all(dot(a, (x, y)) <= c for a, c in rows):
                out.append((x, y))
    return out


def points_in(lat: Lattice, region: HPoly, extra_rows=(), strict: bool = False):
    """All points of S inside the region (interior only when strict).

    The region lives in the lattice's full dimension.  Tail coordinates are
    sliced at integer heights k >= 0; an exact Fourier-Motzkin bound caps the
    scan and a recession test raises UnboundedRegion instead of looping.
    """
    if region.dim != lat.full_dim:
        raise DimensionMismatch("region/lattice dimension mismatch")
    rows_full = list(region.as_pairs()) + [(tuple(a), rat(c)) for a, c in extra_rows]
    if lat.truncation is not None:
        for a, c in lat.truncation:
            padded = tuple(a) + (Fraction(0),) * lat.tail
            rows_full.append((padded, rat(c)))

    candidates = _enumerate_slices(lat, rows_full, lat.full_dim)
    out = []
    body_rows = list(region.as_pairs()) + [(tuple(a), rat(c)) for a, c in extra_rows]
    for x in candidates:
        vals = [dot(a, x) for a, _ in body_rows]
        ok = all(v < c for v, (_, c) in zip(vals, body_rows)) if strict else all(
            v <= c for v, (_, c) in zip(vals, body_rows)
        )
        if ok:
            out.append(x)
    return tuple(sorted(out))


def _enumerate_slices(lat: Lattice, rows, d: int):
    """Closed-region candidates, recursing on tail coordinates."""
    if d == lat.dim:
        return _base_points_in_rows(lat, rows)
    # recession direction with positive last coordinate => unbounded scan
    rec_rows = [(a[:-1], -a[-1]) for a, _ in rows]
    if fm_feasible(list(rec_rows), d - 1):
        raise UnboundedRegion("region recedes along a tail coordinate")
    hi = fm_upper_bound(list(rows), d, d - 1)
    if hi is None:
        raise UnboundedRegion("tail coordinate unbounded above")
    out = []
    for k in range(0, math.floor(hi) + 1):
        sliced = [(a[:-1], c - a[-1] * k) for a, c in rows]
        for x in _enumerate_slices(lat, sliced, d - 1):
            out.append(tuple(x) + (Fraction(k),))
    return out


def integer_points_in_polygon(poly) -> tuple:
    """Plain Z^2 points inside a polygon (closed), in lexicographic order.

    Used for translation-group enumerations, where the relevant lattice is
    the integer lattice itself rather than a shifted one.
    """
    if poly is UNBOUNDED:
        raise UnboundedRegion("polygon is unbounded")
    if poly.is_empty:
        return ()
    xmin, xmax, ymin, ymax = poly.bbox()
    out = []
    for i in range(math.ceil(xmin), math.floor(xmax) + 1):
        for j in range(math.ceil(ymin), math.floor(ymax) + 1):
            p = (Fraction(i), Fraction(j))
            if poly.contains(p):
                out.append(p)
    return tuple(out)


def naive_box_points(lat: Lattice, bbox, pred) -> tuple:
    """Brute-force oracle: scan all residues in a box, keep those passing pred."""
    xmin, xmax, ymin, ymax = (rat(v) for v in bbox)
    b1, b2 = lat.shift
    out = []
    for i in range(math.ceil(xmin - b1), math.floor(xmax - b1) + 1):
        for j in range(math.ceil(ymin - b2), math.floor(ymax - b2) + 1):
            p = (b1 + i, b2 + j)
            if pred(p):
                out.append(p)
    return tuple(sorted(out))
