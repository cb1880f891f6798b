"""Lorentz and Poincare transformations and observer-tied subgroups.

Linear maps act on spacetime vectors, affine maps on spacetime points.
Constructors produce rotations about an observer-simultaneous axis,
canonical velocity-to-velocity boosts, and the per-observer time and
space inversions.  Membership predicates realize the observer-dependent
subgroups: maps fixing a velocity, maps fixing a point, maps stabilizing
an instant.

Regions are finite unions of axis-aligned boxes in an orthonormal basis
of an instant's direction space: exactly representable, closed under the
transformations the verification suites need, and sufficient to exercise
localization.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .geometry import (
    GeometryError,
    Instant,
    SpacetimePoint,
    SpacetimeVector,
    Velocity,
    spatial_basis_for,
)
from .geometry import _METRIC, _product  # shared internal frame

__all__ = [
    "LorentzMap",
    "PoincareMap",
    "Region",
    "make_rotation",
    "make_boost",
    "time_inversion",
    "space_inversion",
    "frame_map",
    "lattice_point_group",
    "is_lorentz",
    "is_orthochronous",
    "is_proper",
    "in_O_u",
    "fixes_point",
    "stabilizes_instant",
    "grow_region_causally",
]

_MEMBER_TOL = 1e-9


def _rel_scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m))) ** 2)


class LorentzMap:
    """A linear map preserving the Lorentz product.

    Wraps a 4x4 matrix in the hidden fiducial frame; construction checks
    product preservation to relative 1e-9 unless ``check=False``.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray, check: bool = True):
        m = np.asarray(matrix, dtype=float)
        if m.shape != (4, 4):
            raise GeometryError("a Lorentz map needs a 4x4 matrix")
        if check and not is_lorentz(m):
            raise GeometryError("matrix does not preserve the Lorentz product")
        m = m.copy()
        m.flags.writeable = False
        self.matrix = m

    @staticmethod
    def identity() -> "LorentzMap":
        return LorentzMap(np.eye(4), check=False)

    def __call__(self, x: SpacetimeVector) -> SpacetimeVector:
        return SpacetimeVector(self.matrix @ x._c)

    def transform_velocity(self, u: Velocity) -> Velocity:
        """Push a velocity forward; requires an orthochronous map."""
        c = self.matrix @ u._c
        if c[0] <= 0.0:
            raise GeometryError(
                "map reverses the time arrow; no image velocity exists"
            )
        return Velocity(c)

    def compose(self, other: "LorentzMap") -> "LorentzMap":
        return LorentzMap(self.matrix @ other.matrix, check=False)

    def __matmul__(self, other: "LorentzMap") -> "LorentzMap":
        return self.compose(other)

    def inverse(self) -> "LorentzMap":
        # metric-transpose inverse is exact for product-preserving maps,
        # but the numeric inverse tracks accumulated rounding better
        return LorentzMap(np.linalg.inv(self.matrix), check=False)

    def approx_eq(self, other: "LorentzMap", tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= tol)

    def __repr__(self) -> str:
        return f"LorentzMap({self.matrix!r})"


def is_lorentz(candidate) -> bool:
    """Whether a map (or raw matrix) preserves the product to 1e-9."""
    m = candidate.matrix if isinstance(candidate, LorentzMap) else np.asarray(candidate, float)
    gram = m.T @ np.diag(_METRIC) @ m
    return bool(np.max(np.abs(gram - np.diag(_METRIC))) <= _MEMBER_TOL * _rel_scale(m))


def is_orthochronous(L: LorentzMap) -> bool:
    """Whether the map preserves the arrow orientation."""
    return bool(L.matrix[0, 0] > 0.0)


def is_proper(L: LorentzMap) -> bool:
    """Whether the map preserves the orientation of spacetime."""
    return bool(np.linalg.det(L.matrix) > 0.0)


def in_O_u(L: LorentzMap, u: Velocity) -> bool:
    """Whether the map fixes the observer velocity ``u``."""
    image = L.matrix @ u._c
    return bool(np.max(np.abs(image - u._c)) <= _MEMBER_TOL)


def _outer_dual(out_vec: np.ndarray, in_vec: np.ndarray) -> np.ndarray:
    # rank-one map x -> (in_vec . x) out_vec, with the metric pairing
    return np.outer(out_vec, _METRIC * in_vec)


def frame_map(
    u: Velocity,
    basis: Sequence[SpacetimeVector],
    spatial_matrix: np.ndarray,
) -> LorentzMap:
    """The map fixing ``u`` that acts by an orthogonal 3x3 matrix on a basis.

    ``basis`` must be an orthonormal basis of the ``u``-simultaneous
    space; ``spatial_matrix`` is applied to coordinates in that basis.
    """
    s = np.asarray(spatial_matrix, dtype=float)
    if s.shape != (3, 3):
        raise GeometryError("spatial matrix must be 3x3")
    m = _outer_dual(u._c, -u._c)
    cols = [b._c for b in basis]
    for j in range(3):
        image = sum(s[i, j] * cols[i] for i in range(3))
        m = m + _outer_dual(image, cols[j])
    return LorentzMap(m)


def make_rotation(
    u: Velocity, axis: SpacetimeVector, angle: float
) -> LorentzMap:
    """Rotation by ``angle`` about ``axis`` inside the space of observer ``u``.

    ``axis`` must be a nonzero vector simultaneous for ``u`` (orthogonal
    to it within 1e-10).  The result fixes ``u`` and restricts to the
    familiar right-handed rotation on the observer's space.
    """
    n2 = _product(axis._c, axis._c)
    if n2 <= 0.0:
        raise GeometryError("rotation axis must be a nonzero spacelike vector")
    if abs(_product(u._c, axis._c)) > 1e-10 * max(1.0, math.sqrt(n2)):
        raise GeometryError("rotation axis must be simultaneous for the observer")
    n = axis._c / math.sqrt(n2)

    # complete (u, n) to an orthonormal frame, deterministically
    comp: list[np.ndarray] = []
    for i in (1, 2, 3):
        cand = np.zeros(4)
        cand[i] = 1.0
        v = cand + _product(u._c, cand) * u._c
        v = v - _product(n, v) * n
        for b in comp:
            v = v - _product(b, v) * b
        vn = _product(v, v)
        if vn > 1e-12:
            comp.append(v / math.sqrt(vn))
        if len(comp) == 2:
            break
    a, b = comp
    # right-handed orientation of (a, b, n) with u first
    if np.linalg.det(np.column_stack([u._c, a, b, n])) < 0.0:
        a, b = b, a

    c, s = math.cos(angle), math.sin(angle)
    m = (
        _outer_dual(u._c, -u._c)
        + _outer_dual(n, n)
        + _outer_dual(c * a + s * b, a)
        + _outer_dual(-s * a + c * b, b)
    )
    return LorentzMap(m)


def make_boost(u: Velocity, u2: Velocity) -> LorentzMap:
    """The canonical boost carrying observer ``u`` to observer ``u2``.

    Orthochronous, proper, and the identity on directions simultaneous
    for both observers.  Built from the double-reflection formula

        x -> x - 2 (x.u) u2 + (x.(u + u2)) (u + u2) / (1 + g),

    with g = -u.u2 >= 1, which never degenerates on future-directed unit
    velocities.
    """
    g = -_product(u._c, u2._c)
    w = u._c + u2._c
    m = (
        np.eye(4)
        - 2.0 * _outer_dual(u2._c, u._c)
        + _outer_dual(w, w) / (1.0 + g)
    )
    return LorentzMap(m)


def time_inversion(u: Velocity) -> LorentzMap:
    """Reverse the observer's time while fixing the observer's space."""
    return LorentzMap(np.eye(4) + 2.0 * _outer_dual(u._c, u._c), check=False)


def space_inversion(u: Velocity) -> LorentzMap:
    """Reverse the observer's space while fixing the observer's time."""
    return LorentzMap(-np.eye(4) - 2.0 * _outer_dual(u._c, u._c), check=False)


_SIGNED_PERMS: list[np.ndarray] | None = None


def _signed_perm_matrices() -> list[np.ndarray]:
    global _SIGNED_PERMS
    if _SIGNED_PERMS is None:
        import itertools

        mats = []
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((1.0, -1.0), repeat=3):
                m = np.zeros((3, 3))
                for i, (p, s) in enumerate(zip(perm, signs)):
                    m[p, i] = s
                mats.append(m)
        _SIGNED_PERMS = mats
    return _SIGNED_PERMS


def lattice_point_group(
    u: Velocity, basis: Sequence[SpacetimeVector] | None = None
) -> list[LorentzMap]:
    """The 48 maps fixing ``u`` that permute the axes of a cubic lattice.

    These are the signed permutations of an orthonormal basis of the
    observer's space: all axis-aligned right-angle rotations and
    reflections.
    """
    if basis is None:
        basis = spatial_basis_for(u)
    return [frame_map(u, basis, s) for s in _signed_perm_matrices()]


# ---------------------------------------------------------------------------
# affine maps
# ---------------------------------------------------------------------------


class PoincareMap:
    """An affine map of spacetime points over a Lorentz map.

    Acts as ``x -> o_f + linear(x - o_f) + translation`` with ``o_f`` the
    fiducial origin, so differences of images equal the linear image of
    differences exactly.
    """

    __slots__ = ("linear", "translation")

    def __init__(self, linear: LorentzMap, translation: SpacetimeVector):
        self.linear = linear
        self.translation = translation

    @staticmethod
    def identity() -> "PoincareMap":
        return PoincareMap(LorentzMap.identity(), SpacetimeVector((0, 0, 0, 0)))

    @staticmethod
    def from_translation(v: SpacetimeVector) -> "PoincareMap":
        return PoincareMap(LorentzMap.identity(), v)

    @staticmethod
    def from_homogeneous(L: LorentzMap, center: SpacetimePoint) -> "PoincareMap":
        """The affine map with linear part ``L`` fixing ``center``."""
        shift = center._c - L.matrix @ center._c
        return PoincareMap(L, SpacetimeVector(shift))

    def __call__(self, p: SpacetimePoint) -> SpacetimePoint:
        return SpacetimePoint(self.linear.matrix @ p._c + self.translation._c)

    def compose(self, other: "PoincareMap") -> "PoincareMap":
        lin = self.linear.compose(other.linear)
        tr = SpacetimeVector(
            self.linear.matrix @ other.translation._c + self.translation._c
        )
        return PoincareMap(lin, tr)

    def __matmul__(self, other: "PoincareMap") -> "PoincareMap":
        return self.compose(other)

    def inverse(self) -> "PoincareMap":
        inv = self.linear.inverse()
        return PoincareMap(inv, SpacetimeVector(-(inv.matrix @ self.translation._c)))

    def transform_instant(self, t: Instant) -> Instant:
        """Image hyperplane, labeled by the pushed-forward observer."""
        return Instant(self.linear.transform_velocity(t.observer), self(t.anchor))

    def transform_region(self, region: "Region") -> "Region":
        """Image region, with boxes re-expressed in the pushed-forward basis."""
        new_instant = self.transform_instant(region.instant)
        new_basis = tuple(self.linear(b) for b in region.basis)
        return Region(
            new_instant,
            [(lo.copy(), hi.copy()) for lo, hi in region.boxes],
            basis=new_basis,
            anchor=self(region.anchor),
            _canonical=True,
        )

    def is_orthochronous(self) -> bool:
        return is_orthochronous(self.linear)

    def approx_eq(self, other: "PoincareMap", tol: float = 1e-10) -> bool:
        return self.linear.approx_eq(other.linear, tol) and bool(
            np.max(np.abs(self.translation._c - other.translation._c)) <= tol
        )

    def __repr__(self) -> str:
        return f"PoincareMap(linear={self.linear!r}, translation={self.translation!r})"


def fixes_point(P: PoincareMap, o: SpacetimePoint) -> bool:
    """Whether the affine map leaves the event ``o`` in place."""
    image = P(o)
    scale = max(1.0, float(np.max(np.abs(o._c))))
    return bool(np.max(np.abs(image._c - o._c)) <= _MEMBER_TOL * scale)


def stabilizes_instant(P: PoincareMap, t: Instant) -> bool:
    """Whether the affine map carries the hyperplane ``t`` onto itself.

    Requires the anchor image to stay on the hyperplane and the linear
    part to map the hyperplane's direction space into itself (it then
    sends the observer velocity to plus or minus itself).  Time
    inversions about an event of ``t`` qualify, as they must.
    """
    image_anchor = P(t.anchor)
    if not t.contains(image_anchor, rel=_MEMBER_TOL):
        return False
    lu = P.linear.matrix @ t.observer._c
    keeps = np.max(np.abs(lu - t.observer._c)) <= _MEMBER_TOL
    flips = np.max(np.abs(lu + t.observer._c)) <= _MEMBER_TOL
    return bool(keeps or flips)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


def _split_box(
    lo: np.ndarray, hi: np.ndarray, cut_lo: np.ndarray, cut_hi: np.ndarray
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pieces of [lo, hi) outside [cut_lo, cut_hi), as disjoint boxes."""
    pieces = []
    rem_lo, rem_hi = lo.copy(), hi.copy()
    for ax in range(3):
        if cut_lo[ax] > rem_lo[ax]:
            p_lo, p_hi = rem_lo.copy(), rem_hi.copy()
            p_hi[ax] = cut_lo[ax]
            pieces.append((p_lo, p_hi))
            rem_lo[ax] = cut_lo[ax]
        if cut_hi[ax] < rem_hi[ax]:
            p_lo, p_hi = rem_lo.copy(), rem_hi.copy()
            p_lo[ax] = cut_hi[ax]
            pieces.append((p_lo, p_hi))
            rem_hi[ax] = cut_hi[ax]
    return [(l, h) for l, h in pieces if np.all(h > l)]


class Region:
    """A finite union of half-open axis-aligned boxes on one instant.

    Boxes are stored as coordinate intervals ``[lo, hi)`` relative to an
    anchor event on the instant, in an orthonormal basis of the
    instant's direction space.  The stored list is canonical: boxes are
    pairwise disjoint and sorted, so equal unions have equal
    representations up to floating-point splitting.
    """

    __slots__ = ("instant", "basis", "anchor", "boxes")

    def __init__(
        self,
        instant: Instant,
        boxes: Iterable[tuple[np.ndarray, np.ndarray]],
        basis: Sequence[SpacetimeVector] | None = None,
        anchor: SpacetimePoint | None = None,
        _canonical: bool = False,
    ):
        self.instant = instant
        if basis is not None:
            self.basis = tuple(basis)
            if len(self.basis) != 3:
                raise GeometryError("a region basis needs three vectors")
            u = instant.observer._c
            for i, b in enumerate(self.basis):
                if abs(_product(u, b._c)) > 1e-9:
                    raise GeometryError("region basis must lie in the instant")
                for j, c in enumerate(self.basis):
                    want = 1.0 if i == j else 0.0
                    if abs(_product(b._c, c._c) - want) > 1e-9:
                        raise GeometryError("region basis must be orthonormal")
        else:
            self.basis = instant.spatial_basis()
        self.anchor = anchor if anchor is not None else instant.anchor
        if not instant.contains(self.anchor):
            raise GeometryError("region anchor must lie on the instant")
        cleaned = []
        for lo, hi in boxes:
            lo = np.asarray(lo, dtype=float).reshape(3)
            hi = np.asarray(hi, dtype=float).reshape(3)
            if np.any(hi <= lo):
                continue
            cleaned.append((lo, hi))
        if _canonical:
            # already disjoint (image of a canonical list); keep sorted
            cleaned.sort(key=lambda b: (tuple(b[0]), tuple(b[1])))
            self.boxes = cleaned
        else:
            self.boxes = self._canonicalize(cleaned)

    @staticmethod
    def _canonicalize(boxes):
        disjoint: list[tuple[np.ndarray, np.ndarray]] = []
        for lo, hi in boxes:
            pending = [(lo, hi)]
            for d_lo, d_hi in disjoint:
                next_pending = []
                for p_lo, p_hi in pending:
                    if np.all(p_lo < d_hi) and np.all(d_lo < p_hi):
                        next_pending.extend(_split_box(p_lo, p_hi, d_lo, d_hi))
                    else:
                        next_pending.append((p_lo, p_hi))
                pending = next_pending
            disjoint.extend(pending)
        disjoint.sort(key=lambda b: (tuple(b[0]), tuple(b[1])))
        return disjoint

    @staticmethod
    def from_bounds(
        instant: Instant,
        bounds: Iterable[tuple[Sequence[float], Sequence[float]]],
        basis: Sequence[SpacetimeVector] | None = None,
        anchor: SpacetimePoint | None = None,
    ) -> "Region":
        boxes = [(np.asarray(lo, float), np.asarray(hi, float)) for lo, hi in bounds]
        return Region(instant, boxes, basis=basis, anchor=anchor)

    def volume(self) -> float:
        return float(sum(np.prod(hi - lo) for lo, hi in self.boxes))

    def corners(self) -> list[SpacetimePoint]:
        """World events at all box corners."""
        pts = []
        cols = [b._c for b in self.basis]
        for lo, hi in self.boxes:
            for mask in range(8):
                coord = np.where(
                    [(mask >> ax) & 1 for ax in range(3)], hi, lo
                )
                disp = sum(coord[i] * cols[i] for i in range(3))
                pts.append(SpacetimePoint(self.anchor._c + disp))
        return pts

    def coordinates_of(self, p: SpacetimePoint) -> np.ndarray:
        """Coordinates of an event of the instant in this region's frame."""
        d = p._c - self.anchor._c
        return np.array([_product(b._c, d) for b in self.basis])

    def contains_point(self, p: SpacetimePoint, snap: float = 0.0) -> bool:
        c = self.coordinates_of(p)
        for lo, hi in self.boxes:
            if np.all(c >= lo - snap) and np.all(c < hi - snap):
                return True
        return False

    def translated(self, offset: Sequence[float]) -> "Region":
        off = np.asarray(offset, float).reshape(3)
        return Region(
            self.instant,
            [(lo + off, hi + off) for lo, hi in self.boxes],
            basis=self.basis,
            anchor=self.anchor,
            _canonical=True,
        )

    def __repr__(self) -> str:
        return f"Region({len(self.boxes)} boxes, volume={self.volume():.6g})"


def grow_region_causally(region: Region, t2: Instant) -> Region:
    """Intersect the causal shadow of a region with a later instant.

    The shadow is the region plus the closed future cone (timelike and
    lightlike directions).  Its slice on ``t2`` is covered exactly per
    axis by boxes spanned over the original box corners: from a corner
    ``p`` the cone meets ``t2`` in the ball of radius ``T_p`` around the
    arrival point of ``p`` along the ``t2`` observer, where ``T_p`` is
    the observer duration from ``p`` to ``t2``; both vary affinely over
    a box, so corner extremes bound the whole box.

    ``t2`` must not precede any part of the region.
    """
    u2 = t2.observer
    basis2 = t2.spatial_basis()
    cols2 = [b._c for b in basis2]
    out_boxes = []
    for lo, hi in region.boxes:
        b_lo = np.full(3, np.inf)
        b_hi = np.full(3, -np.inf)
        cols = [b._c for b in region.basis]
        for mask in range(8):
            coord = np.where([(mask >> ax) & 1 for ax in range(3)], hi, lo)
            p = region.anchor._c + sum(coord[i] * cols[i] for i in range(3))
            arrival_time = -_product(u2._c, t2.anchor._c - p)
            if arrival_time < -1e-12 * max(1.0, float(np.max(np.abs(p)))):
                raise GeometryError("instant is not in the region's future")
            arrival_time = max(arrival_time, 0.0)
            center = p + arrival_time * u2._c
            ccoord = np.array(
                [_product(c, center - t2.anchor._c) for c in cols2]
            )
            b_lo = np.minimum(b_lo, ccoord - arrival_time)
            b_hi = np.maximum(b_hi, ccoord + arrival_time)
        out_boxes.append((b_lo, b_hi))
    return Region(t2, out_boxes, basis=basis2, anchor=t2.anchor)
