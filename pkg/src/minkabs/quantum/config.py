"""Lattice realization parameters for the mass-m scalar particle.

The one-particle Hilbert space is realized as complex amplitudes on a
periodic cubic momentum lattice dual to a spatial lattice drawn on one
instant of a constructing observer.  Natural units: light speed and the
quantum of action are 1, so masses and momenta carry inverse seconds.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import (
    GeometryError,
    Instant,
    MeasureScalar,
    SpacetimePoint,
    Velocity,
    fiducial_origin,
    normalize_velocity,
    seconds,
    spatial_basis_for,
    vector,
)

__all__ = ["ModelConfig"]


class ModelConfig:
    """Geometry and resolution of the lattice realization.

    Parameters
    ----------
    N:
        Lattice points per axis; a power of two, at least 8.
    spacing:
        Lattice spacing in seconds (dim 1).
    mass:
        Particle mass in inverse seconds (dim -1).  The momentum cutoff
        ``pi/spacing`` must be at least eight masses so wave packets stay
        band limited.
    observer, instant, origin:
        The constructing observer, the instant carrying the spatial
        lattice, and the lattice origin event.  The origin must lie on
        the instant.  Defaults: the fiducial rest observer through the
        fiducial origin.
    pad:
        Oversampling factor for spectral interpolation in velocity
        transforms.
    """

    def __init__(
        self,
        N: int = 32,
        spacing: MeasureScalar = seconds(0.25),
        mass: MeasureScalar = MeasureScalar(1.0, -1),
        observer: Velocity | None = None,
        instant: Instant | None = None,
        origin: SpacetimePoint | None = None,
        pad: int = 2,
    ):
        if N < 8 or (N & (N - 1)) != 0:
            raise GeometryError("lattice size must be a power of two, at least 8")
        if not isinstance(spacing, MeasureScalar) or spacing.dim != 1:
            raise GeometryError("spacing must carry sec^1")
        if spacing.value <= 0:
            raise GeometryError("spacing must be positive")
        if not isinstance(mass, MeasureScalar) or mass.dim != -1:
            raise GeometryError("mass must carry sec^-1")
        if mass.value <= 0:
            raise GeometryError("mass must be positive")
        if pad < 1 or pad != int(pad):
            raise GeometryError("pad factor must be a positive integer")
        if math.pi / spacing.value < 8.0 * mass.value:
            raise GeometryError(
                "momentum cutoff pi/spacing must be at least eight masses"
            )

        self.N = int(N)
        self.spacing = spacing
        self.mass = mass
        self.pad = int(pad)
        self.observer = observer if observer is not None else normalize_velocity(
            vector(1, 0, 0, 0)
        )
        if origin is None:
            origin = instant.anchor if instant is not None else fiducial_origin()
        self.origin = origin
        self.instant = instant if instant is not None else Instant(self.observer, origin)
        if not self.observer.approx_eq(self.instant.observer):
            raise GeometryError("instant must belong to the constructing observer")
        if not self.instant.contains(self.origin):
            raise GeometryError("lattice origin must lie on the constructing instant")
        self.basis = spatial_basis_for(self.observer)

        a = spacing.value
        n = self.N
        idx = np.arange(n)
        self.signed_index = np.where(idx < n // 2, idx, idx - n)  # fft layout
        self.dk = 2.0 * math.pi / (n * a)
        self.k1d = self.signed_index * self.dk
        self.x1d = self.signed_index * a
        self.box_length = n * a
        k1 = self.k1d[:, None, None]
        k2 = self.k1d[None, :, None]
        k3 = self.k1d[None, None, :]
        self.omega = np.sqrt(mass.value**2 + k1**2 + k2**2 + k3**2)
        self.cutoff = math.pi / a

        # band-limit energy assuming packet support within half the cutoff,
        # which the gaussian factory enforces; caps usable rapidity
        band_energy = math.sqrt(3.0 * (0.5 * self.cutoff) ** 2 + mass.value**2)
        self.chi_max = math.asinh(0.25 * self.cutoff / band_energy)

    def same_lattice(self, other: "ModelConfig") -> bool:
        return (
            self.N == other.N
            and self.pad == other.pad
            and abs(self.spacing.value - other.spacing.value) <= 1e-15
            and abs(self.mass.value - other.mass.value) <= 1e-15
            and self.observer.approx_eq(other.observer)
            and self.instant == other.instant
            and self.origin.approx_eq(other.origin)
        )

    def refined(self, factor: int = 2) -> "ModelConfig":
        """Same physics on a lattice with ``factor`` times the points."""
        return ModelConfig(
            N=self.N * factor,
            spacing=self.spacing,
            mass=self.mass,
            observer=self.observer,
            instant=self.instant,
            origin=self.origin,
            pad=self.pad,
        )

    def echo(self) -> dict:
        """Configuration summary for reports."""
        return {
            "N": self.N,
            "spacing_sec": self.spacing.value,
            "mass_inv_sec": self.mass.value,
            "pad": self.pad,
            "box_length_sec": self.box_length,
            "momentum_cutoff_inv_sec": self.cutoff,
            "rapidity_cap": self.chi_max,
        }

    def __repr__(self) -> str:
        return (
            f"ModelConfig(N={self.N}, spacing={self.spacing!r}, "
            f"mass={self.mass!r}, pad={self.pad})"
        )
