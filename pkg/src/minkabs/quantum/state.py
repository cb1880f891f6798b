"""States on the momentum lattice and the unitary spacetime actions.

Amplitudes live on the periodic momentum lattice of a
:class:`~minkabs.quantum.config.ModelConfig`; their unitary discrete
Fourier transform gives amplitudes on the dual position lattice of the
constructing instant (kernel ``exp(+i k.x)``, so a packet built with
mean momentum ``k`` drifts along ``+k`` under time evolution).

Three flavors of spacetime action are implemented:

* translations act by momentum-space phases
  ``exp(-i (omega(k) dt + k . dx))`` and are exactly unitary; lattice
  steps become exact cyclic shifts of the position amplitudes;
* maps fixing the constructing observer whose spatial restriction is a
  signed permutation of the lattice axes act by exact index
  permutations;
* remaining orthochronous maps (velocity changes) act by pulling the
  amplitudes back along the mass shell with the on-shell measure weight
  ``sqrt(omega(source)/omega(target))``, evaluated by pad-oversampled
  spectral interpolation.  This path is approximately unitary; the norm
  drift is reported and the result rescaled to the input norm.

Everything here is a pure function of immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage

from ..geometry import (
    GeometryError,
    MeasureScalar,
    SpacetimePoint,
    SpacetimeVector,
    lorentz_product,
    space_part,
    time_part,
)
from ..geometry import _METRIC
from ..groups import LorentzMap, PoincareMap, in_O_u, is_orthochronous
from .config import ModelConfig

__all__ = [
    "LatticeState",
    "BoostReport",
    "make_gaussian",
    "apply_translation",
    "apply_rotation",
    "apply_boost",
    "apply_poincare",
    "signed_permutation_of",
    "rapidity_of",
]


class LatticeState:
    """An amplitude field on the momentum lattice.

    Physical states are unit vectors; projections hand back shorter
    ones.  All representation operations preserve the norm.
    """

    __slots__ = ("cfg", "psi")

    def __init__(self, cfg: ModelConfig, psi: np.ndarray):
        arr = np.asarray(psi, dtype=complex)
        if arr.shape != (cfg.N, cfg.N, cfg.N):
            raise GeometryError("amplitude array does not match the lattice")
        if not np.all(np.isfinite(arr)):
            raise GeometryError("amplitudes must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        self.cfg = cfg
        self.psi = arr

    def norm(self) -> float:
        return float(np.linalg.norm(self.psi))

    def normalized(self) -> "LatticeState":
        n = self.norm()
        if n == 0.0:
            raise GeometryError("cannot normalize the zero field")
        return LatticeState(self.cfg, self.psi / n)

    def position_amplitudes(self) -> np.ndarray:
        """Amplitudes on the position lattice (unitary transform)."""
        return _to_position(self.psi)

    def position_probability(self) -> np.ndarray:
        pos = _to_position(self.psi)
        return pos.real**2 + pos.imag**2

    def overlap(self, other: "LatticeState") -> complex:
        return complex(np.vdot(self.psi, other.psi))

    def __repr__(self) -> str:
        return f"LatticeState(N={self.cfg.N}, norm={self.norm():.6g})"


@dataclass(frozen=True)
class BoostReport:
    """Diagnostics of one velocity-transform application."""

    rapidity: float
    rapidity_cap: float
    norm_drift: float  # relative norm change before rescaling


# ---------------------------------------------------------------------------
# transforms on raw arrays (leading batch axes allowed)
# ---------------------------------------------------------------------------


def _to_position(arr: np.ndarray) -> np.ndarray:
    return np.fft.ifftn(arr, axes=(-3, -2, -1), norm="ortho")


def _to_momentum(arr: np.ndarray) -> np.ndarray:
    return np.fft.fftn(arr, axes=(-3, -2, -1), norm="ortho")


def _translation_phase(cfg: ModelConfig, v: SpacetimeVector) -> np.ndarray:
    dt = time_part(cfg.observer, v).value
    spatial = space_part(cfg.observer, v)
    d = np.array([lorentz_product(b, spatial).value for b in cfg.basis])
    k1 = cfg.k1d[:, None, None]
    k2 = cfg.k1d[None, :, None]
    k3 = cfg.k1d[None, None, :]
    return np.exp(-1j * (cfg.omega * dt + k1 * d[0] + k2 * d[1] + k3 * d[2]))


def signed_permutation_of(cfg: ModelConfig, L: LorentzMap) -> np.ndarray | None:
    """The integer signed-permutation matrix of ``L`` on the lattice axes.

    ``None`` when ``L`` does not fix the constructing observer or does
    not permute the axes (within 1e-10).
    """
    if not in_O_u(L, cfg.observer):
        return None
    r = np.empty((3, 3))
    for j, bj in enumerate(cfg.basis):
        image = L(bj)
        for i, bi in enumerate(cfg.basis):
            r[i, j] = lorentz_product(bi, image).value
    rounded = np.round(r)
    if np.max(np.abs(r - rounded)) > 1e-10:
        return None
    rounded = rounded.astype(int)
    if not (
        np.all(np.abs(rounded).sum(axis=0) == 1)
        and np.all(np.abs(rounded).sum(axis=1) == 1)
    ):
        return None
    return rounded


_PERM_CACHE: dict[tuple, np.ndarray] = {}


def _perm_flat_indices(cfg: ModelConfig, r3: np.ndarray) -> np.ndarray:
    key = (id(cfg), r3.tobytes())
    cached = _PERM_CACHE.get(key)
    if cached is not None:
        return cached
    n = cfg.N
    s = cfg.signed_index
    s1 = s[:, None, None]
    s2 = s[None, :, None]
    s3 = s[None, None, :]
    rt = r3.T  # inverse of a signed permutation
    src = []
    for i in range(3):
        lab = rt[i, 0] * s1 + rt[i, 1] * s2 + rt[i, 2] * s3
        src.append(np.mod(lab, n))
    flat = (src[0] * n + src[1]) * n + src[2]
    flat = np.ascontiguousarray(np.broadcast_to(flat, (n, n, n))).reshape(-1)
    _PERM_CACHE[key] = flat
    return flat


def _apply_perm(arr: np.ndarray, flat_idx: np.ndarray) -> np.ndarray:
    shape = arr.shape
    n3 = flat_idx.size
    out = arr.reshape(-1, n3)[:, flat_idx]
    return out.reshape(shape)


def rapidity_of(cfg: ModelConfig, L: LorentzMap) -> float:
    """Rapidity between the constructing observer and its image."""
    u = cfg.observer._c
    g = -float(np.dot((L.matrix @ u) * _METRIC, u))
    return math.acosh(max(g, 1.0))


def _boost_array(
    cfg: ModelConfig, arr: np.ndarray, L: LorentzMap
) -> tuple[np.ndarray, float]:
    """Mass-shell pullback of one amplitude field along ``L``.

    Returns the transformed field rescaled to the input norm, plus the
    relative norm drift of the raw pullback.
    """
    n, pad = cfg.N, cfg.pad
    npad = n * pad
    norm_in = float(np.linalg.norm(arr))
    if norm_in == 0.0:
        return arr.copy(), 0.0

    # values of the trigonometric interpolant on the pad-refined grid
    pos = _to_position(arr)
    if pad == 1:
        fine = _to_momentum(pos)
    else:
        padded = np.zeros((npad, npad, npad), dtype=complex)
        ix = np.mod(cfg.signed_index, npad)
        padded[np.ix_(ix, ix, ix)] = pos
        fine = np.fft.fftn(padded, norm="ortho") * pad**1.5

    # labels of the inverse image of each on-shell four-momentum
    li = L.inverse().matrix
    u = cfg.observer._c
    bmat = np.stack([b._c for b in cfg.basis])  # (3, 4)
    k1 = cfg.k1d[:, None, None]
    k2 = cfg.k1d[None, :, None]
    k3 = cfg.k1d[None, None, :]
    four = (
        cfg.omega[..., None] * u
        - k1[..., None] * bmat[0]
        - k2[..., None] * bmat[1]
        - k3[..., None] * bmat[2]
    )
    pulled = four @ li.T
    q = -np.einsum("...m,im,m->...i", pulled, bmat, _METRIC)
    omega_q = np.sqrt(cfg.mass.value**2 + np.sum(q * q, axis=-1))

    dk_fine = cfg.dk / pad
    coords = np.moveaxis(np.mod(q / dk_fine, npad), -1, 0)
    interp_re = ndimage.map_coordinates(
        fine.real, coords, order=5, mode="grid-wrap", prefilter=True
    )
    interp_im = ndimage.map_coordinates(
        fine.imag, coords, order=5, mode="grid-wrap", prefilter=True
    )
    out = (interp_re + 1j * interp_im) * np.sqrt(omega_q / cfg.omega)
    norm_out = float(np.linalg.norm(out))
    if norm_out == 0.0:
        raise GeometryError("velocity transform annihilated the state")
    return out * (norm_in / norm_out), abs(norm_out / norm_in - 1.0)


def _apply_poincare_array(
    cfg: ModelConfig, arr: np.ndarray, P: PoincareMap
) -> tuple[np.ndarray, float]:
    """Apply an affine map to raw amplitudes (batch axes allowed).

    Factorization: the homogeneous part at the lattice origin, then the
    translation carrying the origin to its image.  Returns the result
    and the worst norm drift of any interpolation step (0 for exact
    paths).
    """
    out = arr
    drift = 0.0
    linear = P.linear
    if not np.array_equal(linear.matrix, np.eye(4)):
        r3 = signed_permutation_of(cfg, linear)
        if r3 is not None:
            out = _apply_perm(out, _perm_flat_indices(cfg, r3))
        else:
            if not is_orthochronous(linear):
                raise GeometryError("only orthochronous maps are represented")
            chi = rapidity_of(cfg, linear)
            if chi > cfg.chi_max + 1e-12:
                raise GeometryError(
                    f"rapidity {chi:.4f} exceeds the band-limit cap {cfg.chi_max:.4f}"
                )
            if out.ndim == 3:
                out, drift = _boost_array(cfg, out, linear)
            else:
                batch = out.reshape(-1, cfg.N, cfg.N, cfg.N)
                pieces = []
                for one in batch:
                    res, d = _boost_array(cfg, one, linear)
                    pieces.append(res)
                    drift = max(drift, d)
                out = np.stack(pieces).reshape(out.shape)
    shift = P(cfg.origin) - cfg.origin
    if not np.all(shift._c == 0.0):
        out = out * _translation_phase(cfg, shift)
    return out, drift


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def make_gaussian(
    cfg: ModelConfig,
    center: SpacetimePoint | None = None,
    width: MeasureScalar | None = None,
    mean_momentum: Sequence[float] | Sequence[MeasureScalar] = (0.0, 0.0, 0.0),
) -> LatticeState:
    """A normalized gaussian wave packet on the constructing instant.

    ``center`` must lie on the constructing instant, far enough from the
    lattice boundary; ``width`` is the position standard deviation per
    axis (at least three lattice spacings); ``mean_momentum`` gives
    coordinates in the lattice basis, in inverse seconds, bounded by
    half the momentum cutoff so the packet stays band limited.
    """
    if center is None:
        center = cfg.origin
    if width is None:
        width = cfg.spacing * 3.0
    if not isinstance(width, MeasureScalar) or width.dim != 1:
        raise GeometryError("width must carry sec^1")
    if width.value < 3.0 * cfg.spacing.value:
        raise GeometryError("width must be at least three lattice spacings")
    if any(isinstance(m, MeasureScalar) and m.dim != -1 for m in mean_momentum):
        raise GeometryError("mean momentum must carry sec^-1")
    kbar = np.array(
        [m.value if isinstance(m, MeasureScalar) else float(m) for m in mean_momentum]
    )
    if np.linalg.norm(kbar) > 0.5 * cfg.cutoff:
        raise GeometryError("band limit violated: mean momentum beyond half cutoff")
    if not cfg.instant.contains(center):
        raise GeometryError("packet center must lie on the constructing instant")
    if width.value > 0.25 * cfg.box_length:
        raise GeometryError("packet too wide for the lattice box")
    disp = center - cfg.origin
    c = np.array([lorentz_product(b, disp).value for b in cfg.basis])
    half = 0.5 * cfg.box_length
    if np.any(np.abs(c) > half - width.value):
        raise GeometryError("packet center too close to the lattice boundary")

    sigma = width.value
    k1 = cfg.k1d[:, None, None]
    k2 = cfg.k1d[None, :, None]
    k3 = cfg.k1d[None, None, :]
    envelope = np.exp(
        -(sigma**2)
        * ((k1 - kbar[0]) ** 2 + (k2 - kbar[1]) ** 2 + (k3 - kbar[2]) ** 2)
    )
    phase = np.exp(
        -1j * ((k1 - kbar[0]) * c[0] + (k2 - kbar[1]) * c[1] + (k3 - kbar[2]) * c[2])
    )
    raw = envelope * phase
    return LatticeState(cfg, raw / np.linalg.norm(raw))


def apply_translation(state: LatticeState, a: SpacetimeVector) -> LatticeState:
    """Translate the state by the spacetime vector ``a``.

    Multiplies the amplitudes by the on-shell phase; for ``a`` in the
    constructing instant on lattice points this cyclically shifts the
    position amplitudes.  Exactly unitary.
    """
    return LatticeState(state.cfg, state.psi * _translation_phase(state.cfg, a))


def apply_rotation(state: LatticeState, L: LorentzMap) -> LatticeState:
    """Apply a lattice-preserving map fixing the constructing observer.

    ``L`` must restrict to a signed permutation of the lattice axes; the
    action is an exact index permutation (exactly unitary).
    """
    r3 = signed_permutation_of(state.cfg, L)
    if r3 is None:
        raise GeometryError(
            "map does not permute the lattice; use the velocity-transform path"
        )
    flat = _perm_flat_indices(state.cfg, r3)
    return LatticeState(state.cfg, _apply_perm(state.psi, flat))


def apply_boost(state: LatticeState, L: LorentzMap, return_report: bool = False):
    """Apply an orthochronous map by mass-shell pullback.

    The rapidity between the constructing observer and its image must
    stay under the configuration's cap so band-limited packets remain in
    band.  The result keeps the input norm; the measured relative norm
    drift is available through ``return_report=True``.
    """
    if not is_orthochronous(L):
        raise GeometryError("only orthochronous maps are represented")
    chi = rapidity_of(state.cfg, L)
    if chi > state.cfg.chi_max + 1e-12:
        raise GeometryError(
            f"rapidity {chi:.4f} exceeds the band-limit cap {state.cfg.chi_max:.4f}"
        )
    r3 = signed_permutation_of(state.cfg, L)
    if r3 is not None:
        out = LatticeState(
            state.cfg, _apply_perm(state.psi, _perm_flat_indices(state.cfg, r3))
        )
        report = BoostReport(chi, state.cfg.chi_max, 0.0)
        return (out, report) if return_report else out
    psi, drift = _boost_array(state.cfg, state.psi, L)
    out = LatticeState(state.cfg, psi)
    report = BoostReport(chi, state.cfg.chi_max, drift)
    return (out, report) if return_report else out


def apply_poincare(state: LatticeState, P: PoincareMap) -> LatticeState:
    """Apply an affine map: homogeneous part at the lattice origin, then
    the translation carrying the origin to its image."""
    out, _ = _apply_poincare_array(state.cfg, state.psi, P)
    return LatticeState(state.cfg, out)


# ---------------------------------------------------------------------------
# the covariance representation
# ---------------------------------------------------------------------------


def _time_twist(cfg: ModelConfig, P: PoincareMap) -> PoincareMap:
    """Conjugate an affine map by the constructing observer's time inversion
    anchored at the lattice origin."""
    from ..groups import time_inversion  # local import to avoid a cycle

    inv = PoincareMap.from_homogeneous(time_inversion(cfg.observer), cfg.origin)
    return inv.compose(P).compose(inv)


def represent_array(cfg: ModelConfig, arr: np.ndarray, P: PoincareMap):
    """The unitary of the covariance representation applied to raw amplitudes.

    The phase convention ``exp(-i(omega dt + k.dx))`` pushes spatial
    localization labels forward but time labels backward under
    conjugation; twisting the argument by the observer's time inversion
    (an automorphism that is the identity on the instant's stabilizer)
    restores the geometric label motion: conjugating a localization
    projection by ``represent(P)`` carries its region by ``P`` for every
    represented map.  In particular ``represent`` of a step to a later
    instant has the forward evolution ``exp(-i omega dt)`` as its
    inverse, so localization probabilities at later instants see the
    spread packet.
    """
    return _apply_poincare_array(cfg, arr, _time_twist(cfg, P))


def represent(state: LatticeState, P: PoincareMap) -> LatticeState:
    """Covariance-representation unitary on states (see ``represent_array``)."""
    out, _ = represent_array(state.cfg, state.psi, P)
    return LatticeState(state.cfg, out)
