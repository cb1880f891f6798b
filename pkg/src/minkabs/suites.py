"""Randomized invariant suites for the geometry and group layers.

Each function measures one residual (or exercises one error path) over
seeded random inputs and returns a :class:`CheckResult`.  These back the
``verify-geometry`` command.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .geometry import (
    CausalClass,
    DimensionMismatchError,
    Instant,
    MeasureScalar,
    causal_class,
    fiducial_origin,
    lorentz_product,
    normalize_velocity,
    seconds,
    space_part,
    time_part,
    vector,
)
from .groups import (
    LorentzMap,
    PoincareMap,
    Region,
    grow_region_causally,
    in_O_u,
    is_lorentz,
    is_orthochronous,
    make_boost,
    make_rotation,
    stabilizes_instant,
    time_inversion,
)
from .quantum.verify import CheckResult

__all__ = ["run_geometry_suite"]


def _random_velocity(rng, max_rapidity=1.5):
    chi = rng.uniform(0, max_rapidity)
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    return normalize_velocity(vector(math.cosh(chi), *(math.sinh(chi) * d)))


def _random_map(rng, depth=3):
    u0 = normalize_velocity(vector(1, 0, 0, 0))
    m = LorentzMap.identity()
    for _ in range(rng.integers(1, depth + 1)):
        if rng.random() < 0.5:
            m = make_boost(u0, _random_velocity(rng, 1.0)).compose(m)
        else:
            c = rng.normal(size=3)
            axis = c[0] * vector(0, 1, 0, 0) + c[1] * vector(0, 0, 1, 0) + c[2] * vector(0, 0, 0, 1)
            m = make_rotation(u0, axis, rng.uniform(0, 2 * math.pi)).compose(m)
    return m


def _check(name, residual, tolerance, t0, samples, below=True, note=None):
    ok = residual <= tolerance if below else residual >= tolerance
    details = {"samples": samples, "bound": "upper" if below else "lower"}
    if note:
        details["note"] = note
    return CheckResult(
        name=name,
        residual=float(residual),
        tolerance=float(tolerance),
        passed=bool(ok),
        n=0,
        seconds=time.perf_counter() - t0,
        details=details,
    )


def run_geometry_suite(seed: int = 42, heavy_samples: int = 10_000) -> list[CheckResult]:
    """All geometry and group invariants at their stated tolerances."""
    rng = np.random.default_rng(seed)
    results = []

    # observer splitting: reconstruction and orthogonality
    t0 = time.perf_counter()
    worst_split = 0.0
    worst_orth = 0.0
    for _ in range(heavy_samples):
        u = _random_velocity(rng)
        x = vector(*rng.uniform(-10, 10, 4))
        tp = time_part(u, x)
        sp = space_part(u, x)
        recon = u * tp + sp
        scale = max(1.0, float(np.max(np.abs(x._c))))
        worst_split = max(worst_split, float(np.max(np.abs(recon._c - x._c))) / scale)
        worst_orth = max(
            worst_orth,
            abs(lorentz_product(u.as_vector(), sp).value) / max(1.0, tp.value**2),
        )
    results.append(_check("splitting-reconstruction", worst_split, 1e-12, t0, heavy_samples))
    results.append(_check("splitting-orthogonality", worst_orth, 1e-12, t0, heavy_samples))

    # product preservation under composed maps
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        m = _random_map(rng)
        x = vector(*rng.uniform(-5, 5, 4))
        y = vector(*rng.uniform(-5, 5, 4))
        before = lorentz_product(x, y).value
        after = lorentz_product(m(x), m(y)).value
        scale = max(
            1.0,
            abs(lorentz_product(x, x).value),
            abs(lorentz_product(y, y).value),
        )
        worst = max(worst, abs(after - before) / scale)
    results.append(_check("product-preservation", worst, 1e-9, t0, 1000))

    # restriction to a simultaneity space is positive definite
    t0 = time.perf_counter()
    min_norm = math.inf
    for _ in range(1000):
        u = _random_velocity(rng)
        v = space_part(u, vector(*rng.uniform(-10, 10, 4)))
        if float(np.max(np.abs(v._c))) > 1e-10:
            min_norm = min(min_norm, lorentz_product(v, v).value)
    results.append(
        _check("simultaneous-space-positive", min_norm, 1e-12, t0, 1000, below=False)
    )

    # causal classification partitions nonzero vectors
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        x = vector(*rng.uniform(-3, 3, 4))
        if causal_class(x) not in (
            CausalClass.TIMELIKE,
            CausalClass.SPACELIKE,
            CausalClass.LIGHTLIKE,
        ):
            bad += 1
    light = vector(1, 1, 0, 0)
    if causal_class(light) is not CausalClass.LIGHTLIKE:
        bad += 1
    results.append(_check("causal-partition", float(bad), 0.0, t0, 1001))

    # dimensional safety must be an error, not a coercion
    t0 = time.perf_counter()
    caught = 0
    try:
        seconds(1.0) + MeasureScalar(1.0, 2)
    except DimensionMismatchError:
        caught += 1
    try:
        MeasureScalar(1.0, 0) - seconds(2.0)
    except DimensionMismatchError:
        caught += 1
    results.append(
        _check("dimension-safety-error-path", float(2 - caught), 0.0, t0, 2)
    )

    # group laws over random composites
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        a = _random_map(rng)
        b = _random_map(rng)
        c = _random_map(rng)
        if not is_lorentz(a.compose(b)):
            worst = max(worst, 1.0)
        ident = a.compose(a.inverse())
        worst = max(worst, float(np.max(np.abs(ident.matrix - np.eye(4)))))
        assoc = a.compose(b).compose(c).matrix - a.compose(b.compose(c)).matrix
        worst = max(worst, float(np.max(np.abs(assoc))))
    results.append(_check("group-laws", worst, 1e-10, t0, 100))

    # orientation characters compose as expected
    t0 = time.perf_counter()
    u0 = normalize_velocity(vector(1, 0, 0, 0))
    bad = 0
    for _ in range(50):
        a = _random_map(rng)
        b = _random_map(rng)
        if not is_orthochronous(a.compose(b)):
            bad += 1
    if is_orthochronous(time_inversion(u0)):
        bad += 1
    if is_orthochronous(time_inversion(_random_velocity(rng)).compose(_random_map(rng))):
        bad += 1
    results.append(_check("orientation-characters", float(bad), 0.0, t0, 52))

    # velocity stabilizers of different observers differ
    t0 = time.perf_counter()
    misses = 0
    for _ in range(50):
        u2 = _random_velocity(rng)
        if abs(u2._c[0] - 1.0) < 1e-6:
            continue
        found = False
        for axis in (vector(0, 1, 0, 0), vector(0, 0, 1, 0), vector(0, 0, 0, 1)):
            r = make_rotation(u0, axis, 0.9)
            if in_O_u(r, u0) and not in_O_u(r, u2):
                found = True
                break
        if not found:
            misses += 1
    results.append(_check("velocity-stabilizers-differ", float(misses), 0.0, t0, 50))

    # instant stabilizers restrict to isometries of the hyperplane
    t0 = time.perf_counter()
    worst = 0.0
    o = fiducial_origin()
    t_inst = Instant(u0, o)
    for _ in range(50):
        axis = vector(0, *rng.normal(size=3))
        rot = PoincareMap.from_homogeneous(
            make_rotation(u0, axis, rng.uniform(0, 2 * math.pi)), o
        )
        shift = PoincareMap.from_translation(vector(0, *rng.uniform(-3, 3, 3)))
        m = shift.compose(rot)
        if not stabilizes_instant(m, t_inst):
            worst = max(worst, 1.0)
            continue
        p = o + vector(0, *rng.uniform(-5, 5, 3))
        q = o + vector(0, *rng.uniform(-5, 5, 3))
        d0 = lorentz_product(p - q, p - q).value
        d1 = lorentz_product(m(p) - m(q), m(p) - m(q)).value
        worst = max(worst, abs(d1 - d0) / max(1.0, abs(d0)))
    results.append(_check("instant-stabilizer-isometry", worst, 1e-10, t0, 50))

    # the time inversion about an instant stabilizes it
    t0 = time.perf_counter()
    bad = 0
    for _ in range(20):
        u = _random_velocity(rng)
        anchor = o + vector(*rng.uniform(-3, 3, 4))
        inst = Instant(u, anchor)
        inv = PoincareMap.from_homogeneous(time_inversion(u), anchor)
        if not stabilizes_instant(inv, inst):
            bad += 1
        if inv.is_orthochronous():
            bad += 1
    results.append(_check("time-inversion-stabilizes-instant", float(bad), 0.0, t0, 20))

    # causal growth: light-speed box growth and the no-interval limit
    t0 = time.perf_counter()
    reg = Region(t_inst, [((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))])
    t_later = Instant(u0, o + vector(1, 0, 0, 0))
    grown = grow_region_causally(reg, t_later)
    lo, hi = grown.boxes[0]
    worst = max(float(np.max(np.abs(lo + 1.0))), float(np.max(np.abs(hi - 2.0))))
    same = grow_region_causally(reg, t_inst)
    lo0, hi0 = same.boxes[0]
    worst = max(worst, float(np.max(np.abs(lo0))), float(np.max(np.abs(hi0 - 1.0))))
    results.append(_check("causal-growth-unit-speed", worst, 1e-10, t0, 2))

    return results
