"""Localization projections and the generalized position family.

For the constructing observer and instant, the localization projection
of a region is realized directly: transform to the position lattice,
keep the amplitudes whose cells lie in the region, transform back.  For
any other observer/instant pair the projection is *defined* by
covariance: conjugate the constructing projection with the represented
canonical map carrying the constructing labels to the requested ones.
The verification drivers then test that this definition coheres with
the transform numerics.

Cells are half-open boxes centered on the position lattice points, and
membership is evaluated on the torus (coordinates wrap at the box
length), which keeps lattice symmetries exact at the seam.  Position
multipliers use the same wrapped branch, centered at each operator's
own origin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import (
    GeometryError,
    Instant,
    MeasureScalar,
    SpacetimePoint,
    SpacetimeVector,
    Velocity,
    lorentz_product,
    spatial_basis_for,
    time_part,
)
from ..geometry import _METRIC
from ..groups import LorentzMap, PoincareMap, Region, make_boost
from .config import ModelConfig
from .state import (
    LatticeState,
    _to_momentum,
    _to_position,
    represent_array,
)

__all__ = [
    "PvmHandle",
    "NwPosition",
    "NwComponentStats",
    "rasterize",
    "canonical_map",
    "pvm_project",
    "localization_probability",
    "position_multipliers",
    "apply_position_family",
    "nw_expectation",
    "nw_component_stats",
]

_SNAP = 1e-9  # fraction of a lattice spacing


@dataclass(frozen=True)
class PvmHandle:
    """Labels of one localization projection family: observer and instant."""

    observer: Velocity
    instant: Instant

    def __post_init__(self):
        if not self.observer.approx_eq(self.instant.observer):
            raise GeometryError("handle instant must belong to the handle observer")

    def is_constructing(self, cfg: ModelConfig) -> bool:
        return self.observer.approx_eq(cfg.observer) and self.instant == cfg.instant


@dataclass(frozen=True)
class NwPosition:
    """Labels of one member of the generalized position family.

    The member is the integral of (identity - origin) against the
    localization projections of its observer/instant pair; on the
    lattice this is the Newton-Wigner position of that observer.
    """

    observer: Velocity
    instant: Instant
    origin: SpacetimePoint

    def __post_init__(self):
        if not self.observer.approx_eq(self.instant.observer):
            raise GeometryError("position instant must belong to the observer")

    def pvm(self) -> PvmHandle:
        return PvmHandle(self.observer, self.instant)


# ---------------------------------------------------------------------------
# rasterization
# ---------------------------------------------------------------------------


def rasterize(cfg: ModelConfig, region: Region, inflate: float = 0.0) -> np.ndarray:
    """Boolean cell mask of a region on the constructing position lattice.

    A cell belongs to the mask when its center falls in one of the
    region's boxes, with coordinates compared on the torus and a snap
    tolerance of 1e-9 spacings so exactly aligned boundaries rasterize
    stably.  ``inflate`` grows every box by that amount per side first
    (used for conservative causal covers).
    """
    if not region.instant == cfg.instant:
        raise GeometryError("region instant differs from the constructing instant")
    # affine map from lattice coordinates to the region frame
    mat = np.array(
        [[lorentz_product(bi, br).value for br in region.basis] for bi in cfg.basis]
    )
    off_vec = cfg.origin - region.anchor
    off = np.array([lorentz_product(br, off_vec).value for br in region.basis])
    x1 = cfg.x1d[:, None, None]
    x2 = cfg.x1d[None, :, None]
    x3 = cfg.x1d[None, None, :]
    L = cfg.box_length
    snap = _SNAP * cfg.spacing.value
    mask = np.zeros((cfg.N,) * 3, dtype=bool)
    for lo, hi in region.boxes:
        lo = lo - inflate
        hi = hi + inflate
        if np.any(hi - lo > L + snap):
            raise GeometryError("region box wider than the lattice box")
        box_mask = None
        for m in range(3):
            c = off[m] + x1 * mat[0, m] + x2 * mat[1, m] + x3 * mat[2, m]
            length = hi[m] - lo[m]
            if length >= L:
                cond = np.ones((cfg.N,) * 3, dtype=bool)
            else:
                cond = np.mod(c - lo[m] + snap, L) < length
            box_mask = cond if box_mask is None else (box_mask & cond)
        mask |= box_mask
    return mask


# ---------------------------------------------------------------------------
# covariance plumbing
# ---------------------------------------------------------------------------


def canonical_map(cfg: ModelConfig, observer: Velocity, instant: Instant) -> PoincareMap:
    """The canonical affine map from the constructing labels to the given ones.

    Linear part: the canonical velocity-to-velocity transform fixing the
    lattice origin; then a step along the target observer reaches the
    target instant.
    """
    if not observer.approx_eq(instant.observer):
        raise GeometryError("instant must belong to the observer")
    if observer.approx_eq(cfg.observer):
        linear = LorentzMap.identity()
    else:
        linear = make_boost(cfg.observer, observer)
    hom = PoincareMap.from_homogeneous(linear, cfg.origin)
    gap = time_part(observer, instant.anchor - cfg.origin)
    return PoincareMap.from_translation(observer * gap).compose(hom)


def _pullback_region(cfg: ModelConfig, P: PoincareMap, region: Region) -> Region:
    """Region carried back to the constructing instant by ``P`` inverse."""
    inv = P.inverse()
    basis = tuple(inv.linear(b) for b in region.basis)
    return Region(
        cfg.instant,
        [(lo.copy(), hi.copy()) for lo, hi in region.boxes],
        basis=basis,
        anchor=inv(region.anchor),
        _canonical=True,
    )


def _project_raw(
    handle: PvmHandle, region: Region, psi: np.ndarray, cfg: ModelConfig
) -> np.ndarray:
    if handle.is_constructing(cfg):
        mask = rasterize(cfg, region)
        return _to_momentum(_to_position(psi) * mask)
    carry = canonical_map(cfg, handle.observer, handle.instant)
    pulled = _pullback_region(cfg, carry, region)
    mask = rasterize(cfg, pulled)
    back, _ = represent_array(cfg, psi, carry.inverse())
    projected = _to_momentum(_to_position(back) * mask)
    forward, _ = represent_array(cfg, projected, carry)
    return forward


def pvm_project(handle: PvmHandle, region: Region, state: LatticeState) -> LatticeState:
    """Apply the localization projection of ``region`` (unnormalized).

    The region must sit on the handle's instant.  On the constructing
    labels this is the exact cell indicator conjugated by the position
    transform: idempotent, self-adjoint and additive over disjoint
    regions.  On other labels it is the covariance-pulled version,
    exact for lattice-symmetric label changes and convergent for
    velocity changes.
    """
    if not region.instant == handle.instant:
        raise GeometryError("region does not sit on the handle instant")
    return LatticeState(state.cfg, _project_raw(handle, region, state.psi, state.cfg))


def localization_probability(
    handle: PvmHandle, region: Region, state: LatticeState
) -> float:
    """Squared norm of the projected state; in [0, 1] for unit states
    and monotone in the region."""
    if not region.instant == handle.instant:
        raise GeometryError("region does not sit on the handle instant")
    raw = _project_raw(handle, region, state.psi, state.cfg)
    return float(np.real(np.vdot(raw, raw)))


# ---------------------------------------------------------------------------
# position family
# ---------------------------------------------------------------------------


def position_multipliers(cfg: ModelConfig, origin: SpacetimePoint) -> np.ndarray:
    """Fiducial components of (cell center - origin) over the lattice.

    Shape (4, N, N, N).  Each coordinate wraps to the centered
    fundamental domain of the torus, and the row exactly opposite the
    origin is assigned coordinate zero: that is the unique branch choice
    that is odd on the torus, so axis symmetries and lattice shifts
    about the origin conjugate these multipliers exactly.
    """
    disp = cfg.origin - origin
    base = np.array([lorentz_product(b, disp).value for b in cfg.basis])
    L = cfg.box_length
    seam = _SNAP * cfg.spacing.value
    wrapped = []
    for m in range(3):
        w = np.mod(base[m] + cfg.x1d + 0.5 * L, L) - 0.5 * L
        w[np.abs(w + 0.5 * L) <= seam] = 0.0
        wrapped.append(w)
    tau0 = time_part(cfg.observer, disp).value
    u = cfg.observer._c
    b = [v._c for v in cfg.basis]
    out = np.empty((4, cfg.N, cfg.N, cfg.N))
    for mu in range(4):
        out[mu] = (
            tau0 * u[mu]
            + wrapped[0][:, None, None] * b[0][mu]
            + wrapped[1][None, :, None] * b[1][mu]
            + wrapped[2][None, None, :] * b[2][mu]
        )
    return out


def apply_position_family(w: NwPosition, state: LatticeState) -> np.ndarray:
    """The four component fields of the position family applied to a state.

    Direct multiplication by the cell displacements on the constructing
    labels; other labels go through the covariance route in the
    verification drivers.  Returns raw momentum amplitudes (4, N, N, N).
    """
    cfg = state.cfg
    if not (w.observer.approx_eq(cfg.observer) and w.instant == cfg.instant):
        raise GeometryError("direct position application needs constructing labels")
    mult = position_multipliers(cfg, w.origin)
    pos = _to_position(state.psi)
    return _to_momentum(mult * pos[None, ...])


@dataclass(frozen=True)
class NwComponentStats:
    """Mean and variance of the split components of the position family."""

    time_mean: MeasureScalar
    time_variance: MeasureScalar
    space_means: tuple[MeasureScalar, MeasureScalar, MeasureScalar]
    space_variances: tuple[MeasureScalar, MeasureScalar, MeasureScalar]


def _stats_weights(w: NwPosition, state: LatticeState):
    cfg = state.cfg
    if w.observer.approx_eq(cfg.observer) and w.instant == cfg.instant:
        return state.position_probability(), position_multipliers(cfg, w.origin), None
    carry = canonical_map(cfg, w.observer, w.instant)
    back, _ = represent_array(cfg, state.psi, carry.inverse())
    prob = LatticeState(cfg, back).position_probability()
    mult = position_multipliers(cfg, carry.inverse()(w.origin))
    return prob, mult, carry.linear


def nw_expectation(w: NwPosition, state: LatticeState) -> SpacetimeVector:
    """Expected displacement of the particle from the family origin."""
    prob, mult, push = _stats_weights(w, state)
    mean = np.tensordot(mult, prob, axes=([1, 2, 3], [0, 1, 2]))
    v = SpacetimeVector(mean)
    return push(v) if push is not None else v


def nw_component_stats(
    w: NwPosition, u2: Velocity, state: LatticeState
) -> NwComponentStats:
    """Statistics of the duration and space components relative to ``u2``.

    When ``u2`` is the family observer every cell shares the instant's
    duration coordinate, so the duration variance vanishes identically;
    for other observers it is generally positive.  Space components are
    taken in the deterministic basis attached to ``u2`` (carried to the
    constructing frame for non-constructing labels).
    """
    prob, mult, push = _stats_weights(w, state)
    if push is not None:
        u2 = push.inverse().transform_velocity(u2)
    gu2 = _METRIC * u2._c
    fields = [-np.tensordot(gu2, mult, axes=(0, 0))]
    for bvec in spatial_basis_for(u2):
        gb = _METRIC * bvec._c
        # basis vectors are u2-orthogonal, so this is the simultaneous part
        fields.append(np.tensordot(gb, mult, axes=(0, 0)))
    means, variances = [], []
    for f in fields:
        m = float(np.sum(f * prob))
        v = float(np.sum((f - m) ** 2 * prob))
        means.append(m)
        variances.append(v)
    return NwComponentStats(
        time_mean=MeasureScalar(means[0], 1),
        time_variance=MeasureScalar(variances[0], 2),
        space_means=tuple(MeasureScalar(m, 1) for m in means[1:]),
        space_variances=tuple(MeasureScalar(v, 2) for v in variances[1:]),
    )
