"""Coordinate-free Minkowski geometry with dimension-tagged scalars.

Spacetime vectors and points are opaque values: their components relative
to the internal fiducial frame are an implementation detail, and client
code observes them only through the Lorentz product, observer splittings
and explicit basis queries.  Every scalar produced by the kernel carries
an integer power of the time unit (seconds), and mixing unequal powers is
an error rather than a silent coercion.

Conventions baked into the internal frame:

* metric signature (-, +, +, +), stored in seconds squared;
* the arrow (future) orientation is fixed by a distinguished future
  timelike fiducial vector;
* orientation of the vector space is positive determinant in the
  fiducial frame;
* light speed is 1, so velocities are dimensionless.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "GeometryError",
    "MeasureScalar",
    "seconds",
    "CausalClass",
    "SpacetimeVector",
    "SpacetimePoint",
    "Velocity",
    "Instant",
    "SpacePoint",
    "vector",
    "point",
    "fiducial_frame",
    "fiducial_origin",
    "lorentz_product",
    "causal_class",
    "is_future_directed",
    "normalize_velocity",
    "time_part",
    "space_part",
    "instant_subtract",
    "space_subtract",
    "spatial_basis_for",
]

# Signature of the product on the fiducial frame, in sec^2.
_METRIC = np.array([-1.0, 1.0, 1.0, 1.0])

# Relative tolerance for pure geometry predicates.
_REL_TOL = 1e-12


class DimensionMismatchError(ValueError):
    """Arithmetic attempted on scalars with different unit exponents."""


class GeometryError(ValueError):
    """Geometric precondition violated (causality, normalization, observers)."""


# ---------------------------------------------------------------------------
# dimension-tagged scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureScalar:
    """A real value together with an integer exponent of the time unit.

    ``dim=0`` is a pure number, ``dim=1`` seconds, ``dim=2`` seconds
    squared, ``dim=-1`` inverse seconds, and so on.  Addition and
    subtraction require equal ``dim``; multiplication and division add
    and subtract the exponents; ``sqrt`` requires an even exponent and a
    non-negative value.
    """

    value: float
    dim: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))
        if self.dim != int(self.dim):
            raise DimensionMismatchError("unit exponent must be an integer")
        object.__setattr__(self, "dim", int(self.dim))

    def _require_same_dim(self, other: "MeasureScalar", op: str) -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"cannot {op} sec^{self.dim} and sec^{other.dim}"
            )

    def __add__(self, other: "MeasureScalar") -> "MeasureScalar":
        if not isinstance(other, MeasureScalar):
            return NotImplemented
        self._require_same_dim(other, "add")
        return MeasureScalar(self.value + other.value, self.dim)

    def __sub__(self, other: "MeasureScalar") -> "MeasureScalar":
        if not isinstance(other, MeasureScalar):
            return NotImplemented
        self._require_same_dim(other, "subtract")
        return MeasureScalar(self.value - other.value, self.dim)

    def __mul__(self, other):
        if isinstance(other, MeasureScalar):
            return MeasureScalar(self.value * other.value, self.dim + other.dim)
        if isinstance(other, (int, float)):
            return MeasureScalar(self.value * other, self.dim)
        if isinstance(other, Velocity):
            return other * self
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MeasureScalar):
            return MeasureScalar(self.value / other.value, self.dim - other.dim)
        if isinstance(other, (int, float)):
            return MeasureScalar(self.value / other, self.dim)
        return NotImplemented

    def __neg__(self) -> "MeasureScalar":
        return MeasureScalar(-self.value, self.dim)

    def __abs__(self) -> "MeasureScalar":
        return MeasureScalar(abs(self.value), self.dim)

    def sqrt(self) -> "MeasureScalar":
        if self.dim % 2 != 0:
            raise DimensionMismatchError(
                f"sqrt of sec^{self.dim} is not an integer power"
            )
        if self.value < 0.0:
            raise GeometryError("sqrt of a negative measure value")
        return MeasureScalar(math.sqrt(self.value), self.dim // 2)

    def _cmp_key(self, other: "MeasureScalar") -> float:
        self._require_same_dim(other, "compare")
        return other.value

    def __lt__(self, other: "MeasureScalar") -> bool:
        return self.value < self._cmp_key(other)

    def __le__(self, other: "MeasureScalar") -> bool:
        return self.value <= self._cmp_key(other)

    def __gt__(self, other: "MeasureScalar") -> bool:
        return self.value > self._cmp_key(other)

    def __ge__(self, other: "MeasureScalar") -> bool:
        return self.value >= self._cmp_key(other)

    def approx_eq(self, other: "MeasureScalar", rel: float = _REL_TOL) -> bool:
        self._require_same_dim(other, "compare")
        scale = max(1.0, abs(self.value), abs(other.value))
        return abs(self.value - other.value) <= rel * scale

    def __repr__(self) -> str:
        if self.dim == 0:
            return f"{self.value!r}"
        return f"{self.value!r} sec^{self.dim}"


def seconds(value: float) -> MeasureScalar:
    """A duration or distance in seconds (light speed 1)."""
    return MeasureScalar(value, 1)


# ---------------------------------------------------------------------------
# vectors and points
# ---------------------------------------------------------------------------


def _as_components(values: Iterable[float]) -> np.ndarray:
    c = np.asarray(tuple(values), dtype=float)
    if c.shape != (4,):
        raise GeometryError("expected four components")
    c = c.copy()
    c.flags.writeable = False
    return c


class SpacetimeVector:
    """A displacement between spacetime points, semantically in seconds.

    Components are stored relative to a hidden orthonormal fiducial frame;
    they are observable only through :func:`lorentz_product`, the observer
    splittings and :meth:`coordinates_in_basis`.
    """

    __slots__ = ("_c",)

    def __init__(self, components: Iterable[float]):
        self._c = _as_components(components)

    def __add__(self, other):
        if isinstance(other, SpacetimeVector):
            return SpacetimeVector(self._c + other._c)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SpacetimeVector):
            return SpacetimeVector(self._c - other._c)
        return NotImplemented

    def __radd__(self, other):
        # lets sum() start from 0
        if isinstance(other, (int, float)) and other == 0:
            return self
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return SpacetimeVector(self._c * scalar)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, float)):
            return SpacetimeVector(self._c / scalar)
        return NotImplemented

    def __neg__(self) -> "SpacetimeVector":
        return SpacetimeVector(-self._c)

    def is_zero(self, rel: float = _REL_TOL) -> bool:
        return bool(np.all(np.abs(self._c) <= rel * max(1.0, np.max(np.abs(self._c)))))

    def coordinates_in_basis(
        self, basis: Sequence["SpacetimeVector"]
    ) -> tuple[float, ...]:
        """Coefficients of this vector in an explicit basis of four vectors."""
        if len(basis) != 4:
            raise GeometryError("a basis of spacetime needs four vectors")
        mat = np.column_stack([b._c for b in basis])
        try:
            coeffs = np.linalg.solve(mat, self._c)
        except np.linalg.LinAlgError as exc:
            raise GeometryError("basis vectors are linearly dependent") from exc
        return tuple(float(v) for v in coeffs)

    def approx_eq(self, other: "SpacetimeVector", rel: float = _REL_TOL) -> bool:
        scale = max(1.0, np.max(np.abs(self._c)), np.max(np.abs(other._c)))
        return bool(np.max(np.abs(self._c - other._c)) <= rel * scale)

    def __repr__(self) -> str:
        return f"SpacetimeVector({tuple(self._c)!r} sec)"


class SpacetimePoint:
    """An event: element of the affine space over spacetime vectors."""

    __slots__ = ("_c",)

    def __init__(self, displacement_from_fiducial_origin: Iterable[float]):
        self._c = _as_components(displacement_from_fiducial_origin)

    def __sub__(self, other):
        if isinstance(other, SpacetimePoint):
            return SpacetimeVector(self._c - other._c)
        if isinstance(other, SpacetimeVector):
            return SpacetimePoint(self._c - other._c)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, SpacetimeVector):
            return SpacetimePoint(self._c + other._c)
        return NotImplemented

    __radd__ = __add__

    def approx_eq(self, other: "SpacetimePoint", rel: float = _REL_TOL) -> bool:
        scale = max(1.0, np.max(np.abs(self._c)), np.max(np.abs(other._c)))
        return bool(np.max(np.abs(self._c - other._c)) <= rel * scale)

    def __repr__(self) -> str:
        return f"SpacetimePoint({tuple(self._c)!r})"


def vector(t: float, x: float, y: float, z: float) -> SpacetimeVector:
    """Spacetime vector from fiducial-frame components, in seconds."""
    return SpacetimeVector((t, x, y, z))


def point(t: float, x: float, y: float, z: float) -> SpacetimePoint:
    """Spacetime point displaced from the fiducial origin, in seconds."""
    return SpacetimePoint((t, x, y, z))


def fiducial_frame() -> tuple[SpacetimeVector, SpacetimeVector, SpacetimeVector, SpacetimeVector]:
    """The hidden orthonormal frame, exposed for explicit basis queries."""
    return (
        vector(1.0, 0.0, 0.0, 0.0),
        vector(0.0, 1.0, 0.0, 0.0),
        vector(0.0, 0.0, 1.0, 0.0),
        vector(0.0, 0.0, 0.0, 1.0),
    )


def fiducial_origin() -> SpacetimePoint:
    return point(0.0, 0.0, 0.0, 0.0)


# The stored future vector fixing the arrow orientation.
_FUTURE = np.array([1.0, 0.0, 0.0, 0.0])


def _product(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a * _METRIC, b))


def lorentz_product(x: SpacetimeVector, y: SpacetimeVector) -> MeasureScalar:
    """The symmetric bilinear product of signature (-, +, +, +), in sec^2."""
    return MeasureScalar(_product(x._c, y._c), 2)


class CausalClass(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    ZERO = "zero"


def causal_class(x: SpacetimeVector, rel: float = _REL_TOL) -> CausalClass:
    """Classify a vector by the sign of its self-product.

    The lightlike band is ``|x.x| <= rel * |x|^2`` with the Euclidean
    component norm as scale, so each nonzero vector lands in exactly one
    class.
    """
    scale = float(np.dot(x._c, x._c))
    if scale == 0.0:
        return CausalClass.ZERO
    s = _product(x._c, x._c)
    if abs(s) <= rel * scale:
        return CausalClass.LIGHTLIKE
    return CausalClass.TIMELIKE if s < 0.0 else CausalClass.SPACELIKE


def is_future_directed(x: SpacetimeVector) -> bool:
    """Whether a causal vector points to the future of the arrow orientation.

    Raises :class:`GeometryError` for spacelike or zero input: the arrow
    orientation only sorts timelike and lightlike vectors.
    """
    cls = causal_class(x)
    if cls not in (CausalClass.TIMELIKE, CausalClass.LIGHTLIKE):
        raise GeometryError(f"not causal: {cls.value} vector has no time arrow")
    return _product(x._c, _FUTURE) < 0.0


class Velocity:
    """A future-directed unit timelike direction (dimensionless components).

    Instances satisfy ``u.u = -1`` within 1e-12 and are future directed;
    construct them through :func:`normalize_velocity`.
    """

    __slots__ = ("_c",)

    def __init__(self, components: Iterable[float]):
        c = _as_components(components)
        norm = _product(c, c)
        if abs(norm + 1.0) > 1e-12 * max(1.0, float(np.dot(c, c))):
            raise GeometryError("velocity is not unit timelike")
        if _product(c, _FUTURE) >= 0.0:
            raise GeometryError("velocity is not future directed")
        self._c = c

    def __mul__(self, scalar):
        # velocity times a duration is a displacement
        if isinstance(scalar, MeasureScalar):
            if scalar.dim != 1:
                raise DimensionMismatchError(
                    f"velocity scaled by sec^{scalar.dim}; need sec^1"
                )
            return SpacetimeVector(self._c * scalar.value)
        if isinstance(scalar, (int, float)):
            return SpacetimeVector(self._c * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def as_vector(self) -> SpacetimeVector:
        """The unit displacement covered per second along this velocity."""
        return SpacetimeVector(self._c)

    def approx_eq(self, other: "Velocity", rel: float = _REL_TOL) -> bool:
        return bool(np.max(np.abs(self._c - other._c)) <= rel)

    def coordinates_in_basis(self, basis) -> tuple[float, ...]:
        return SpacetimeVector(self._c).coordinates_in_basis(basis)

    def __repr__(self) -> str:
        return f"Velocity({tuple(self._c)!r})"


def normalize_velocity(x: SpacetimeVector) -> Velocity:
    """The absolute velocity along a future-directed timelike vector."""
    if causal_class(x) is not CausalClass.TIMELIKE:
        raise GeometryError("only a timelike vector defines a velocity")
    if not is_future_directed(x):
        raise GeometryError("velocity must be future directed")
    s = _product(x._c, x._c)
    return Velocity(x._c / math.sqrt(-s))


def time_part(u: Velocity, x: SpacetimeVector) -> MeasureScalar:
    """Duration of ``x`` as seen by observer ``u`` (in seconds).

    This is the coefficient of ``u`` in the unique splitting of ``x``
    into a part along ``u`` plus a part simultaneous for ``u``.
    """
    return MeasureScalar(-_product(u._c, x._c), 1)


def space_part(u: Velocity, x: SpacetimeVector) -> SpacetimeVector:
    """The ``u``-simultaneous component of ``x``.

    Satisfies ``time_part(u, x) * u + space_part(u, x) == x`` and is
    orthogonal to ``u`` in the Lorentz product.
    """
    t = -_product(u._c, x._c)
    return SpacetimeVector(x._c - t * u._c)


# ---------------------------------------------------------------------------
# observer time and space
# ---------------------------------------------------------------------------


class Instant:
    """A simultaneity hyperplane of an inertial observer.

    Stored as the observer plus any anchor event on the hyperplane; two
    instants with the same observer compare equal when their anchors are
    simultaneous for that observer.
    """

    __slots__ = ("observer", "anchor")

    def __init__(self, observer: Velocity, anchor: SpacetimePoint):
        self.observer = observer
        self.anchor = anchor

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instant):
            return NotImplemented
        if not self.observer.approx_eq(other.observer):
            return False
        gap = time_part(self.observer, self.anchor - other.anchor).value
        scale = max(
            1.0,
            float(np.max(np.abs(self.anchor._c))),
            float(np.max(np.abs(other.anchor._c))),
        )
        return abs(gap) <= _REL_TOL * scale

    __hash__ = None  # tolerance-based equality

    def contains(self, p: SpacetimePoint, rel: float = 1e-9) -> bool:
        gap = time_part(self.observer, p - self.anchor).value
        scale = max(1.0, float(np.max(np.abs(p._c))), float(np.max(np.abs(self.anchor._c))))
        return abs(gap) <= rel * scale

    def spatial_basis(self) -> tuple[SpacetimeVector, SpacetimeVector, SpacetimeVector]:
        """Deterministic orthonormal basis of the hyperplane's direction space."""
        return spatial_basis_for(self.observer)

    def shifted(self, dt: MeasureScalar) -> "Instant":
        """The observer's instant a duration later."""
        return Instant(self.observer, self.anchor + self.observer * dt)

    def __repr__(self) -> str:
        return f"Instant(observer={self.observer!r}, anchor={self.anchor!r})"


class SpacePoint:
    """A point of an inertial observer's space: a straight world line.

    Two space points of the same observer compare equal when their
    anchors differ by a multiple of the observer velocity.
    """

    __slots__ = ("observer", "anchor")

    def __init__(self, observer: Velocity, anchor: SpacetimePoint):
        self.observer = observer
        self.anchor = anchor

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpacePoint):
            return NotImplemented
        if not self.observer.approx_eq(other.observer):
            return False
        gap = space_part(self.observer, self.anchor - other.anchor)
        scale = max(
            1.0,
            float(np.max(np.abs(self.anchor._c))),
            float(np.max(np.abs(other.anchor._c))),
        )
        return bool(np.max(np.abs(gap._c)) <= _REL_TOL * scale)

    __hash__ = None

    def __repr__(self) -> str:
        return f"SpacePoint(observer={self.observer!r}, anchor={self.anchor!r})"


def instant_subtract(t1: Instant, t2: Instant) -> MeasureScalar:
    """Time interval between two instants of the same observer.

    Independent of the anchors chosen within each hyperplane.
    """
    if not t1.observer.approx_eq(t2.observer):
        raise GeometryError("instants of different observers have no interval")
    return time_part(t1.observer, t1.anchor - t2.anchor)


def space_subtract(q1: SpacePoint, q2: SpacePoint) -> SpacetimeVector:
    """Displacement between two space points of the same observer.

    The result is simultaneous for the observer and independent of the
    anchor events chosen on each world line.
    """
    if not q1.observer.approx_eq(q2.observer):
        raise GeometryError("space points of different observers have no difference")
    return space_part(q1.observer, q1.anchor - q2.anchor)


def spatial_basis_for(
    u: Velocity,
) -> tuple[SpacetimeVector, SpacetimeVector, SpacetimeVector]:
    """Deterministic orthonormal basis of the space simultaneous for ``u``.

    Gram-Schmidt over the projections of the fiducial spatial axes, in
    fixed order, so lattice constructions downstream are reproducible.
    For the fiducial rest observer this returns the fiducial spatial axes
    exactly.
    """
    basis: list[np.ndarray] = []
    for i in (1, 2, 3):
        cand = np.zeros(4)
        cand[i] = 1.0
        v = cand + _product(u._c, cand) * u._c  # project off u
        for b in basis:
            v = v - _product(b, v) * b
        n = _product(v, v)
        if n <= 0.0:
            raise GeometryError("degenerate spatial projection")
        basis.append(v / math.sqrt(n))
    return tuple(SpacetimeVector(b) for b in basis)
