"""Localization projections and position-family statistics."""

import math

import numpy as np
import pytest

from minkabs.geometry import (
    GeometryError,
    Instant,
    fiducial_origin,
    normalize_velocity,
    seconds,
    vector,
)
from minkabs.groups import Region
from minkabs.quantum import (
    ModelConfig,
    NwPosition,
    PvmHandle,
    apply_translation,
    localization_probability,
    make_gaussian,
    nw_component_stats,
    nw_expectation,
    pvm_project,
    rasterize,
)
from minkabs.quantum.state import LatticeState

U0 = normalize_velocity(vector(1, 0, 0, 0))
ORIGIN = fiducial_origin()


@pytest.fixture(scope="module")
def cfg():
    return ModelConfig(N=16)


@pytest.fixture(scope="module")
def cfg32():
    return ModelConfig(N=32)


def handle(cfg):
    return PvmHandle(cfg.observer, cfg.instant)


def cell_box(cfg, lo_cells, hi_cells):
    """Cell-edge-aligned box from inclusive cell index ranges."""
    a = cfg.spacing.value
    lo = (np.asarray(lo_cells, float) - 0.5) * a
    hi = (np.asarray(hi_cells, float) + 0.5) * a
    return (lo, hi)


def region_of_cells(cfg, lo_cells, hi_cells):
    return Region(cfg.instant, [cell_box(cfg, lo_cells, hi_cells)])


def random_state(cfg, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(cfg.N,) * 3) + 1j * rng.normal(size=(cfg.N,) * 3)
    return LatticeState(cfg, psi / np.linalg.norm(psi))


class TestRasterize:
    def test_full_box_is_everything(self, cfg):
        half = 0.5 * cfg.box_length
        reg = Region(cfg.instant, [((-half, -half, -half), (half, half, half))])
        assert rasterize(cfg, reg).all()

    def test_cell_counts(self, cfg):
        reg = region_of_cells(cfg, (0, 0, 0), (3, 3, 3))
        assert rasterize(cfg, reg).sum() == 64

    def test_wraps_at_seam(self, cfg):
        a = cfg.spacing.value
        n = cfg.N
        lo = ((n // 2 - 2) - 0.5) * a  # two cells inside, crossing the seam
        hi = ((n // 2 + 2) - 0.5) * a
        reg = Region(cfg.instant, [((lo, -0.5 * a, -0.5 * a), (hi, 0.5 * a, 0.5 * a))])
        assert rasterize(cfg, reg).sum() == 4


class TestProjection:
    def test_full_box_is_identity(self, cfg):
        s = random_state(cfg, 1)
        half = 0.5 * cfg.box_length
        reg = Region(cfg.instant, [((-half, -half, -half), (half, half, half))])
        out = pvm_project(handle(cfg), reg, s)
        assert np.max(np.abs(out.psi - s.psi)) <= 1e-12

    def test_idempotent_and_self_adjoint(self, cfg):
        s = random_state(cfg, 2)
        t = random_state(cfg, 3)
        reg = region_of_cells(cfg, (-3, -3, -3), (2, 2, 2))
        h = handle(cfg)
        once = pvm_project(h, reg, s)
        twice = pvm_project(h, reg, once)
        assert np.max(np.abs(twice.psi - once.psi)) <= 1e-12
        lhs = np.vdot(t.psi, once.psi)
        rhs = np.vdot(pvm_project(h, reg, t).psi, s.psi)
        assert abs(lhs - rhs) <= 1e-12

    def test_additive_over_disjoint_regions(self, cfg):
        s = random_state(cfg, 4)
        h = handle(cfg)
        r1 = region_of_cells(cfg, (-4, -4, -4), (-1, -1, -1))
        r2 = region_of_cells(cfg, (0, 0, 0), (3, 3, 3))
        both = Region(
            cfg.instant,
            [cell_box(cfg, (-4, -4, -4), (-1, -1, -1)), cell_box(cfg, (0, 0, 0), (3, 3, 3))],
        )
        p1 = localization_probability(h, r1, s)
        p2 = localization_probability(h, r2, s)
        p12 = localization_probability(h, both, s)
        assert abs(p1 + p2 - p12) <= 1e-12

    def test_gaussian_mostly_inside_its_box(self, cfg32):
        s = make_gaussian(cfg32, width=seconds(0.75))
        reg = Region(
            cfg32.instant,
            [((-2.375, -2.375, -2.375), (2.375, 2.375, 2.375))],  # > 3 sigma
        )
        out = pvm_project(handle(cfg32), reg, s)
        assert np.linalg.norm(out.psi - s.psi) <= 0.1

    def test_probability_bounds_and_monotonicity(self, cfg):
        s = random_state(cfg, 5)
        h = handle(cfg)
        small = region_of_cells(cfg, (-1, -1, -1), (0, 0, 0))
        large = region_of_cells(cfg, (-3, -3, -3), (2, 2, 2))
        ps = localization_probability(h, small, s)
        pl = localization_probability(h, large, s)
        assert 0.0 <= ps <= pl <= 1.0 + 1e-12

    def test_empty_region_gives_zero(self, cfg):
        s = random_state(cfg, 6)
        a = cfg.spacing.value
        # a sliver between cell centers holds no cells
        reg = Region(cfg.instant, [((0.1 * a, 0, 0), (0.2 * a, a, a))])
        assert localization_probability(handle(cfg), reg, s) <= 1e-15

    def test_half_box_on_even_gaussian(self, cfg32):
        # symmetry oracle: a packet centered at the cut plane puts half
        # its mass on each side
        a = cfg32.spacing.value
        center = ORIGIN + vector(0, -0.5 * a, 0, 0)
        s = make_gaussian(cfg32, center=center, width=seconds(0.75))
        half = 0.5 * cfg32.box_length
        reg = Region(
            cfg32.instant, [((-half, -half, -half), (-0.5 * a, half, half))]
        )
        p = localization_probability(handle(cfg32), reg, s)
        assert abs(p - 0.5) <= 2.0 / cfg32.N

    def test_region_on_wrong_instant_rejected(self, cfg):
        s = random_state(cfg, 7)
        other = Instant(U0, ORIGIN + vector(1, 0, 0, 0))
        reg = Region(other, [((0, 0, 0), (1, 1, 1))])
        with pytest.raises(GeometryError):
            pvm_project(handle(cfg), reg, s)

    def test_covariant_handle_time_translation(self, cfg):
        # localization of a state at a later instant equals localization
        # of the forward-evolved state on the same footprint at the
        # constructing instant (exact phase path)
        s = make_gaussian(cfg, width=seconds(0.8))
        dt = 0.75
        later = Instant(U0, ORIGIN + vector(dt, 0, 0, 0))
        h2 = PvmHandle(U0, later)
        reg2 = Region(later, [cell_box(cfg, (-2, -2, -2), (1, 1, 1))], anchor=later.anchor)
        p_later = localization_probability(h2, reg2, s)
        reg0 = Region(cfg.instant, [cell_box(cfg, (-2, -2, -2), (1, 1, 1))])
        evolved = apply_translation(s, vector(dt, 0, 0, 0))
        p_evolved = localization_probability(handle(cfg), reg0, evolved)
        assert abs(p_later - p_evolved) <= 1e-10
        # the packet spreads, so the later-instant probability drops
        p_now = localization_probability(handle(cfg), reg0, s)
        assert p_later < p_now


class TestPositionFamily:
    def test_expectation_tracks_center(self, cfg32):
        center = ORIGIN + vector(0, 1.0, -0.75, 0.5)
        s = make_gaussian(cfg32, center=center, width=seconds(0.75))
        w = NwPosition(U0, cfg32.instant, ORIGIN)
        mean = nw_expectation(w, s)
        got = np.array(mean.coordinates_in_basis(
            tuple(__import__("minkabs").fiducial_frame())
        ))
        assert np.max(np.abs(got - np.array([0, 1.0, -0.75, 0.5]))) <= cfg32.spacing.value

    def test_time_variance_vanishes_for_own_observer(self, cfg32):
        w = NwPosition(U0, cfg32.instant, ORIGIN)
        for seed in range(5):
            s = random_state(cfg32, seed)
            stats = nw_component_stats(w, U0, s)
            assert stats.time_variance.value == 0.0
            assert stats.time_variance.dim == 2

    def test_time_variance_positive_for_other_observer(self, cfg32):
        chi = 0.5
        u2 = normalize_velocity(vector(math.cosh(chi), math.sinh(chi), 0, 0))
        w = NwPosition(U0, cfg32.instant, ORIGIN)
        s = make_gaussian(cfg32, width=seconds(1.0))
        stats = nw_component_stats(w, u2, s)
        assert stats.time_variance.value > 0.01

    def test_space_variance_matches_packet(self, cfg32):
        width = 0.75
        s = make_gaussian(cfg32, width=seconds(width))
        w = NwPosition(U0, cfg32.instant, ORIGIN)
        stats = nw_component_stats(w, U0, s)
        for v in stats.space_variances:
            assert abs(v.value - width**2) <= 0.1 * width**2
