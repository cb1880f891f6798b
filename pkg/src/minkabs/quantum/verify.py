"""Numerical verification drivers for covariance and causality claims.

Each driver measures a residual against a stated tolerance and returns a
plain record.  Exactness split: label changes inside the constructing
instant's stabilizer (lattice translations, axis permutations,
reflections) and steps along the constructing observer run on exact
phase/permutation paths and must sit at rounding level; velocity
changes run on the interpolated path and must shrink under lattice
refinement.

Velocity-change covariance cannot be probed by comparing the canonical
definition against itself, so the driver compares two factorizations of
the same labeled projection, ``shift then transform`` against
``transform then shifted-shift``, which agree exactly in the continuum
and differ on the lattice only by interpolation error.

Drivers are deterministic given a seed; trial fan-out may run on
threads (capped by the caller) and results merge in trial order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..geometry import (
    GeometryError,
    Instant,
    Velocity,
    normalize_velocity,
    seconds,
    vector,
)
from ..groups import (
    LorentzMap,
    PoincareMap,
    Region,
    grow_region_causally,
    lattice_point_group,
    make_boost,
)
from .config import ModelConfig
from .pvm import (
    NwPosition,
    PvmHandle,
    canonical_map,
    localization_probability,
    nw_component_stats,
    position_multipliers,
    pvm_project,
    rasterize,
)
from .state import (
    LatticeState,
    make_gaussian,
    represent_array,
    _to_momentum,
    _to_position,
)

__all__ = [
    "CheckResult",
    "CausalityResult",
    "cell_region",
    "random_states",
    "smooth_states",
    "boosted_velocity",
    "worker_cap",
    "stabilizer_elements",
    "stabilizer_covariance_residual",
    "run_stabilizer_suite",
    "label_change_residual",
    "factorization_residual",
    "boost_convergence_rows",
    "position_family_stabilizer_residual",
    "fixed_label_boost_witness",
    "space_component_residual",
    "time_variance_dichotomy",
    "causality_experiment",
    "commutator_witness",
    "handle_covariance_residual",
    "equivariance_probe",
    "equivariance_residual",
]


@dataclass(frozen=True)
class CheckResult:
    """One measured residual against its tolerance."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    n: int
    seconds: float
    details: dict = field(default_factory=dict)

    @staticmethod
    def make(name, residual, tolerance, cfg, t0, below=True, **details):
        ok = residual <= tolerance if below else residual >= tolerance
        return CheckResult(
            name=name,
            residual=float(residual),
            tolerance=float(tolerance),
            passed=bool(ok),
            n=cfg.N,
            seconds=time.perf_counter() - t0,
            details=dict(details, bound="upper" if below else "lower"),
        )


def worker_cap(default: int = 1) -> int:
    """Thread cap for trial fan-out, from MINKABS_THREADS."""
    raw = os.environ.get("MINKABS_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return default


# ---------------------------------------------------------------------------
# state and region factories
# ---------------------------------------------------------------------------


def cell_region(cfg: ModelConfig, lo_cells, hi_cells, instant: Instant | None = None) -> Region:
    """Cell-edge aligned box from inclusive cell index ranges.

    Edges sit between lattice points, so every lattice symmetry carries
    the rasterized cell set exactly onto the rasterization of the
    carried region.
    """
    a = cfg.spacing.value
    lo = (np.asarray(lo_cells, float) - 0.5) * a
    hi = (np.asarray(hi_cells, float) + 0.5) * a
    target = instant if instant is not None else cfg.instant
    return Region(target, [(lo, hi)], anchor=target.anchor)


def random_states(cfg: ModelConfig, rng: np.random.Generator, count: int) -> np.ndarray:
    """Unit-norm white random momentum amplitudes, stacked (count, N, N, N)."""
    shape = (count, cfg.N, cfg.N, cfg.N)
    psi = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    psi /= np.linalg.norm(psi.reshape(count, -1), axis=1)[:, None, None, None]
    return psi


def smooth_states(cfg: ModelConfig, rng: np.random.Generator, count: int) -> np.ndarray:
    """Band-limited gaussian-mixture states for interpolated paths.

    Mixture parameters are drawn from the generator, so two lattices at
    different resolution realize the same physical states when fed the
    same seed.
    """
    w_hi = min(1.1, 0.25 * cfg.box_length)
    w_lo = min(0.75, w_hi)
    out = np.empty((count, cfg.N, cfg.N, cfg.N), dtype=complex)
    for i in range(count):
        acc = None
        for _ in range(2):
            width = rng.uniform(w_lo, w_hi)
            center_coords = rng.uniform(-0.75, 0.75, 3)
            kbar = rng.uniform(-1.2, 1.2, 3)
            amp = rng.normal() + 1j * rng.normal()
            center = cfg.origin + sum(
                float(c) * b for c, b in zip(center_coords, cfg.basis)
            )
            g = make_gaussian(
                cfg, center=center, width=seconds(width), mean_momentum=tuple(kbar)
            )
            acc = amp * g.psi if acc is None else acc + amp * g.psi
        out[i] = acc / np.linalg.norm(acc)
    return out


def boosted_velocity(chi: float, axis=(1.0, 0.0, 0.0)) -> Velocity:
    d = np.asarray(axis, float)
    d = d / np.linalg.norm(d)
    return normalize_velocity(vector(math.cosh(chi), *(math.sinh(chi) * d)))


# ---------------------------------------------------------------------------
# stabilizer covariance (exact paths)
# ---------------------------------------------------------------------------


def stabilizer_elements(cfg: ModelConfig, rng: np.random.Generator, translations: int = 4):
    """Labeled elements of the instant's stabilizer that preserve the lattice:
    the 48 axis symmetries about the origin plus sampled lattice
    translations and mixed products."""
    elements = []
    for i, L in enumerate(lattice_point_group(cfg.observer, cfg.basis)):
        elements.append((f"axis-symmetry-{i:02d}", PoincareMap.from_homogeneous(L, cfg.origin)))
    group = lattice_point_group(cfg.observer, cfg.basis)
    a = cfg.spacing.value
    for j in range(translations):
        steps = rng.integers(-cfg.N // 4, cfg.N // 4 + 1, 3)
        shift = sum(int(s) * a * b for s, b in zip(steps, cfg.basis))
        t = PoincareMap.from_translation(shift)
        elements.append((f"lattice-shift-{j}", t))
        r = group[int(rng.integers(0, len(group)))]
        elements.append(
            (f"shifted-symmetry-{j}", t.compose(PoincareMap.from_homogeneous(r, cfg.origin)))
        )
    return elements


def _conjugate_mask(cfg: ModelConfig, states: np.ndarray, chain, mask: np.ndarray):
    """Apply U P(mask) U^-1 with U representing the composite of ``chain``
    in application order (first element acts on spacetime first)."""
    arr = states
    for P in reversed(chain):
        arr, _ = represent_array(cfg, arr, P.inverse())
    arr = _to_momentum(_to_position(arr) * mask)
    for P in chain:
        arr, _ = represent_array(cfg, arr, P)
    return arr


def _batch_max_norm(diff: np.ndarray) -> float:
    flat = diff.reshape(diff.shape[0], -1) if diff.ndim == 4 else diff.reshape(1, -1)
    return float(np.max(np.linalg.norm(flat, axis=1)))


def stabilizer_covariance_residual(
    cfg: ModelConfig, S: PoincareMap, region: Region, states: np.ndarray
) -> float:
    """Max residual of conjugation-vs-carried-region on the given states."""
    lhs = _conjugate_mask(cfg, states, [S], rasterize(cfg, region))
    carried = S.transform_region(region)
    rhs = _to_momentum(_to_position(states) * rasterize(cfg, carried))
    return _batch_max_norm(lhs - rhs)


def run_stabilizer_suite(
    cfg: ModelConfig,
    n_states: int = 50,
    seed: int = 42,
    tolerance: float = 1e-10,
    translations: int = 4,
    workers: int | None = None,
) -> list[CheckResult]:
    """Covariance of the localization family under every lattice-preserving
    stabilizer element, on white random states."""
    rng = np.random.default_rng(seed)
    states = random_states(cfg, rng, n_states)
    region = cell_region(
        cfg, (-cfg.N // 8, -cfg.N // 8 + 1, -2), (cfg.N // 8, cfg.N // 8 - 1, 1)
    )
    elements = stabilizer_elements(cfg, rng, translations)
    cap = workers if workers is not None else worker_cap()

    def job(item):
        idx, (name, S) = item
        t0 = time.perf_counter()
        res = stabilizer_covariance_residual(cfg, S, region, states)
        return idx, CheckResult.make(
            f"stabilizer-covariance/{name}", res, tolerance, cfg, t0, states=n_states
        )

    if cap > 1:
        with ThreadPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(job, enumerate(elements)))
    else:
        results = [job(item) for item in enumerate(elements)]
    results.sort(key=lambda pair: pair[0])
    return [r for _, r in results]


# ---------------------------------------------------------------------------
# label changes (definition and factorization probes)
# ---------------------------------------------------------------------------


def label_change_residual(
    cfg: ModelConfig, L: PoincareMap, region: Region, states: np.ndarray
) -> float:
    """Residual of conjugation against the canonically defined projection
    at the carried labels.

    Exact (rounding level) for stabilizer elements and steps along the
    constructing observer; near zero by construction for canonical
    velocity changes, whose genuine check is the factorization probe.
    """
    if not L.is_orthochronous():
        raise GeometryError("covariance drivers take orthochronous maps")
    carried_region = L.transform_region(region)
    u2 = L.linear.transform_velocity(cfg.observer)
    t2 = Instant(u2, L(cfg.instant.anchor))
    handle = PvmHandle(u2, t2)
    lhs = _conjugate_mask(cfg, states, [L], rasterize(cfg, region))
    rhs = np.empty_like(states)
    batch = states.reshape(-1, cfg.N, cfg.N, cfg.N)
    out = rhs.reshape(-1, cfg.N, cfg.N, cfg.N)
    for i, one in enumerate(batch):
        out[i] = pvm_project(handle, carried_region, LatticeState(cfg, one)).psi
    return _batch_max_norm(lhs - rhs)


def factorization_residual(
    cfg: ModelConfig,
    linear: LorentzMap,
    region: Region,
    states: np.ndarray,
    rng: np.random.Generator,
    shifts: int = 2,
) -> float:
    """Factorization coherence of one labeled projection.

    For a velocity change ``B`` and a lattice step ``T_d``, the two
    factorizations ``B T_d`` and ``T_{B d} B`` carry the same region to
    the same labels, so the conjugated projections agree exactly in the
    continuum; on the lattice they differ by the interpolation error of
    phase-modulated pullbacks.  This is the residual that must shrink
    under lattice refinement.
    """
    mask = rasterize(cfg, region)
    hom = PoincareMap.from_homogeneous(linear, cfg.origin)
    a = cfg.spacing.value
    worst = 0.0
    for _ in range(shifts):
        steps = rng.integers(1, max(2, cfg.N // 8) + 1, 3) * rng.choice([-1, 1], 3)
        d = sum(int(s) * a * b for s, b in zip(steps, cfg.basis))
        t_d = PoincareMap.from_translation(d)
        t_bd = PoincareMap.from_translation(linear(d))
        # the same map factored two ways: shift-then-transform equals
        # transform-then-shifted-shift
        lhs = _conjugate_mask(cfg, states, [t_d, hom], mask)
        rhs = _conjugate_mask(cfg, states, [hom, t_bd], mask)
        worst = max(worst, _batch_max_norm(lhs - rhs))
    return worst


def boost_convergence_rows(
    base: ModelConfig,
    chi: float = 0.25,
    seeds=(42, 43, 44),
    n_states: int = 2,
    refinements: int = 1,
) -> list[dict]:
    """Factorization residual at N, 2N, ... for each seed, with ratios."""
    rows = []
    u2 = boosted_velocity(chi)
    for seed in seeds:
        cfg = base
        prev = None
        for step in range(refinements + 1):
            rng = np.random.default_rng(seed)
            states = smooth_states(cfg, rng, n_states)
            region = cell_region(cfg, (-3, -3, -3), (2, 2, 2))
            boost = make_boost(cfg.observer, u2)
            res = factorization_residual(cfg, boost, region, states, rng, shifts=2)
            rows.append(
                {
                    "seed": int(seed),
                    "N": cfg.N,
                    "rapidity": chi,
                    "residual": res,
                    "ratio_to_previous": (res / prev) if prev else None,
                }
            )
            prev = res
            if step < refinements:
                cfg = cfg.refined()
    return rows


# ---------------------------------------------------------------------------
# position family covariance
# ---------------------------------------------------------------------------


def _family_fields(cfg: ModelConfig, states: np.ndarray, mult: np.ndarray) -> np.ndarray:
    """Multiplier fields applied in position space: (B, 4, N, N, N)."""
    pos = _to_position(states)
    return _to_momentum(pos[:, None, ...] * mult[None, ...])


def _family_norm(diff: np.ndarray) -> float:
    # aggregate over the four vector components, max over the batch
    flat = diff.reshape(diff.shape[0], -1)
    return float(np.max(np.linalg.norm(flat, axis=1)))


def position_family_stabilizer_residual(
    cfg: ModelConfig, S: PoincareMap, states: np.ndarray
) -> float:
    """Covariance of the position family under a lattice stabilizer element.

    Conjugating the component fields equals carrying the origin with the
    map and mixing the components with the inverse linear part; both
    sides are exact lattice paths.
    """
    mult = position_multipliers(cfg, cfg.origin)
    batch = states if states.ndim == 4 else states[None]
    # left side: conjugate each component field
    arr = batch
    arr, _ = represent_array(cfg, arr, S.inverse())
    lhs = _family_fields(cfg, arr, mult)
    moved = np.empty_like(lhs)
    for mu in range(4):
        moved[:, mu], _ = represent_array(cfg, lhs[:, mu], S)
    # right side: carried origin, mixed components
    mult_carried = position_multipliers(cfg, S(cfg.origin))
    rhs_fields = _family_fields(cfg, batch, mult_carried)
    li = S.linear.inverse().matrix
    rhs = np.einsum("mn,bn...->bm...", li, rhs_fields)
    return _family_norm(moved - rhs)


def fixed_label_boost_witness(
    cfg: ModelConfig, chi: float = 0.25, width: float = 0.75
) -> float:
    """Residual of the fixed-label transformation guess under a velocity
    change: conjugation against plainly mixing the components.

    The family member with frozen labels is not a spacetime-vector
    operator, so this residual is bounded away from zero on the
    standard packet.
    """
    boost = make_boost(cfg.observer, boosted_velocity(chi))
    hom = PoincareMap.from_homogeneous(boost, cfg.origin)
    s = make_gaussian(cfg, width=seconds(width)).psi[None, ...]
    mult = position_multipliers(cfg, cfg.origin)
    arr, _ = represent_array(cfg, s, hom.inverse())
    conj = _family_fields(cfg, arr, mult)
    moved = np.empty_like(conj)
    for mu in range(4):
        moved[:, mu], _ = represent_array(cfg, conj[:, mu], hom)
    guess_fields = _family_fields(cfg, s, mult)
    guess = np.einsum("mn,bn...->bm...", boost.matrix, guess_fields)
    return _family_norm(moved - guess)


def space_component_residual(
    cfg: ModelConfig, u2: Velocity, S: PoincareMap, states: np.ndarray
) -> float:
    """Covariance residual of the ``u2``-simultaneous component of the
    position family under an origin-fixing stabilizer element.

    Vanishes (exact path) when ``u2`` is the constructing observer;
    bounded away from zero for witness elements when it is not.
    """
    from ..geometry import _METRIC

    mult = position_multipliers(cfg, cfg.origin)
    dot = np.einsum("m,m...->...", _METRIC * u2._c, mult)
    pia = mult + dot[None, ...] * u2._c[:, None, None, None]
    batch = states if states.ndim == 4 else states[None]
    arr, _ = represent_array(cfg, batch, S.inverse())
    lhs = _family_fields(cfg, arr, pia)
    moved = np.empty_like(lhs)
    for mu in range(4):
        moved[:, mu], _ = represent_array(cfg, lhs[:, mu], S)
    rhs_fields = _family_fields(cfg, batch, pia)
    li = S.linear.inverse().matrix
    rhs = np.einsum("mn,bn...->bm...", li, rhs_fields)
    return _family_norm(moved - rhs)


def time_variance_dichotomy(
    cfg: ModelConfig,
    n_states: int = 100,
    seed: int = 42,
    witness_chi: float = 0.5,
    witness_width: float = 1.0,
) -> tuple[float, float]:
    """The duration-component variance split.

    Returns the largest own-observer variance over random states (must
    be exactly zero) and the witness variance of a wide packet relative
    to a tilted observer (must be positive).
    """
    w = NwPosition(cfg.observer, cfg.instant, cfg.origin)
    rng = np.random.default_rng(seed)
    states = random_states(cfg, rng, n_states)
    worst = 0.0
    for one in states:
        stats = nw_component_stats(w, cfg.observer, LatticeState(cfg, one))
        worst = max(worst, abs(stats.time_variance.value))
    witness_state = make_gaussian(cfg, width=seconds(witness_width))
    u2 = boosted_velocity(witness_chi)
    witness = nw_component_stats(w, u2, witness_state).time_variance.value
    return worst, witness


# ---------------------------------------------------------------------------
# causality and commutators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CausalityResult:
    """One causality trial: leakage outside the causal shadow."""

    delta_t: float
    rapidity: float
    leakage: float
    localized_probability: float
    shadow_cells: int
    N: int
    margin: float


def causality_experiment(
    cfg: ModelConfig,
    region: Region | None = None,
    delta_t: float = 2.0,
    u2: Velocity | None = None,
    margin: float | None = None,
    width: float | None = None,
) -> CausalityResult:
    """Prepare a localized state, then measure how much of it escapes the
    causal shadow of its region on a later instant.

    The state is a packet projected into the region and renormalized, so
    it is localized there exactly.  The shadow is the causally grown
    region, rasterized conservatively: every cell within half a spacing
    (plus ``margin``) of the cover counts as inside, so leakage can only
    be under-reported.  Any strictly positive leakage exhibits
    superluminal spreading of this localization notion.
    """
    if delta_t < 0.0:
        raise GeometryError("the later instant must not precede the region")
    a = cfg.spacing.value
    if region is None:
        region = cell_region(cfg, (-2, -2, -2), (1, 1, 1))
    if margin is None:
        margin = 0.2 * a
    if width is None:
        width = 3.0 * a
    observer2 = cfg.observer if u2 is None else u2
    chi = (
        0.0
        if u2 is None
        else math.acosh(max(1.0, -float(np.dot(_metric_vec() * u2._c, cfg.observer._c))))
    )

    lo, hi = region.boxes[0]
    box_center = region.anchor + sum(
        float(0.5 * (lo[m] + hi[m])) * b for m, b in enumerate(region.basis)
    )
    packet = make_gaussian(cfg, center=box_center, width=seconds(width))
    handle0 = PvmHandle(cfg.observer, cfg.instant)
    phi = pvm_project(handle0, region, packet).normalized()
    localized = localization_probability(handle0, region, phi)

    t2 = Instant(observer2, cfg.origin + cfg.observer * seconds(delta_t))
    shadow = grow_region_causally(region, t2)
    carry = canonical_map(cfg, observer2, t2)
    from .pvm import _pullback_region

    pulled = _pullback_region(cfg, carry, shadow)
    inflate = 0.5 * a * (1.0 + 1e-9) + margin
    mask = rasterize(cfg, pulled, inflate=inflate)
    arr, _ = represent_array(cfg, phi.psi, carry.inverse())
    inside = float(np.sum((np.abs(_to_position(arr)) ** 2) * mask))
    return CausalityResult(
        delta_t=float(delta_t),
        rapidity=float(chi),
        leakage=1.0 - inside,
        localized_probability=float(localized),
        shadow_cells=int(mask.sum()),
        N=cfg.N,
        margin=float(margin),
    )


def _metric_vec():
    from ..geometry import _METRIC

    return _METRIC


def commutator_witness(
    cfg: ModelConfig,
    region_a: Region | None = None,
    region_b: Region | None = None,
    delta_t: float = 0.5,
    seed: int = 42,
    starts: int = 3,
    iterations: int = 12,
) -> float:
    """Largest found commutator norm of two localization projections.

    Defaults: two boxes on instants half a second apart, displaced so
    every pair of their points is separated faster than light.  Power
    iteration from random states maximizes the commutator norm; a
    strictly positive value exhibits the failure of local commutativity
    for this localization family.
    """
    if region_a is None:
        region_a = cell_region(cfg, (-5, -2, -2), (-2, 1, 1))
    if region_b is None:
        t2 = Instant(cfg.observer, cfg.origin + cfg.observer * seconds(delta_t))
        region_b = cell_region(cfg, (2, -2, -2), (5, 1, 1), instant=t2)
    handle_a = PvmHandle(region_a.instant.observer, region_a.instant)
    handle_b = PvmHandle(region_b.instant.observer, region_b.instant)

    def commutator(arr):
        ab = _project_arr(cfg, handle_a, region_a, _project_arr(cfg, handle_b, region_b, arr))
        ba = _project_arr(cfg, handle_b, region_b, _project_arr(cfg, handle_a, region_a, arr))
        return ab - ba

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(starts):
        v = random_states(cfg, rng, 1)[0]
        for _ in range(iterations):
            w = -commutator(commutator(v))  # adjoint-square of the skew map
            n = np.linalg.norm(w)
            if n == 0.0:
                break
            v = w / n
        best = max(best, float(np.linalg.norm(commutator(v))))
    return best


def _project_arr(cfg, handle, region, arr):
    from .pvm import _project_raw

    return _project_raw(handle, region, arr, cfg)


# ---------------------------------------------------------------------------
# global equivariance
# ---------------------------------------------------------------------------


def handle_covariance_residual(
    cfg: ModelConfig,
    S: PoincareMap,
    handle: PvmHandle,
    region: Region,
    states: np.ndarray,
) -> float:
    """Conjugation-vs-carried-labels residual through arbitrary handles."""
    carried_handle = PvmHandle(
        S.linear.transform_velocity(handle.observer), S.transform_instant(handle.instant)
    )
    carried_region = S.transform_region(region)
    worst = 0.0
    for one in states.reshape(-1, cfg.N, cfg.N, cfg.N):
        back, _ = represent_array(cfg, one, S.inverse())
        mid = _project_arr(cfg, handle, region, back)
        lhs, _ = represent_array(cfg, mid, S)
        rhs = _project_arr(cfg, carried_handle, carried_region, one)
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def _random_lattice_map(cfg: ModelConfig, rng: np.random.Generator) -> PoincareMap:
    group = lattice_point_group(cfg.observer, cfg.basis)
    R = group[int(rng.integers(0, len(group)))]
    a = cfg.spacing.value
    steps = rng.integers(-cfg.N // 8, cfg.N // 8 + 1, 3)
    shift = sum(int(s) * a * b for s, b in zip(steps, cfg.basis))
    shift = shift + cfg.observer * seconds(float(rng.uniform(-1.0, 1.0)))
    return PoincareMap.from_translation(shift).compose(
        PoincareMap.from_homogeneous(R, cfg.origin)
    )


def _probe_bundle(
    cfg: ModelConfig, P: PoincareMap | None, seed: int
) -> dict[str, float]:
    """Reported numbers with every input optionally carried by ``P``.

    All quantities go through the label-handle machinery, so the carried
    variant exercises exactly the same public surface with transformed
    observers, instants, origins, regions and states.
    """
    ident = PoincareMap.identity() if P is None else P
    rng = np.random.default_rng(seed)
    states = random_states(cfg, rng, 3)
    moved_states, _ = represent_array(cfg, states, ident)
    region = cell_region(cfg, (-3, -2, -4), (2, 3, 1))
    moved_region = ident.transform_region(region)
    handle = PvmHandle(
        ident.linear.transform_velocity(cfg.observer),
        ident.transform_instant(cfg.instant),
    )
    out: dict[str, float] = {}
    for i in range(3):
        out[f"localization-{i}"] = localization_probability(
            handle, moved_region, LatticeState(cfg, moved_states[i])
        )
    gauss = make_gaussian(cfg, width=seconds(0.75))
    mg, _ = represent_array(cfg, gauss.psi, ident)
    mg_state = LatticeState(cfg, mg)
    out["localization-gauss"] = localization_probability(handle, moved_region, mg_state)

    w = NwPosition(handle.observer, handle.instant, ident(cfg.origin))
    own = nw_component_stats(w, handle.observer, mg_state)
    for m, val in enumerate(own.space_variances):
        out[f"space-variance-{m}"] = val.value
    tilted = ident.linear.transform_velocity(boosted_velocity(0.5))
    out["time-variance-witness"] = nw_component_stats(w, tilted, mg_state).time_variance.value

    S = stabilizer_elements(cfg, np.random.default_rng(seed + 1), translations=1)[9][1]
    moved_S = ident.compose(S).compose(ident.inverse())
    out["covariance-residual"] = handle_covariance_residual(
        cfg, moved_S, handle, moved_region, moved_states
    )

    # causal leakage with a non-cell-aligned horizon
    phi_raw = _project_arr(cfg, handle, moved_region, mg)
    phi = phi_raw / np.linalg.norm(phi_raw)
    dt = 0.8
    t2 = ident.transform_instant(
        Instant(cfg.observer, cfg.origin + cfg.observer * seconds(dt))
    )
    shadow = grow_region_causally(moved_region, t2)
    h2 = PvmHandle(t2.observer, t2)
    out["causality-leakage"] = 1.0 - localization_probability(
        h2, shadow, LatticeState(cfg, phi)
    )
    return out


def equivariance_probe(cfg: ModelConfig, seed: int = 42) -> dict[str, float]:
    """The untransported probe bundle."""
    return _probe_bundle(cfg, None, seed)


def equivariance_residual(cfg: ModelConfig, seed: int = 42) -> float:
    """Worst change of any probed number when all inputs are carried by a
    random lattice-compatible orthochronous map."""
    rng = np.random.default_rng(seed + 100)
    P = _random_lattice_map(cfg, rng)
    base = _probe_bundle(cfg, None, seed)
    moved = _probe_bundle(cfg, P, seed)
    return max(abs(base[k] - moved[k]) for k in base)
