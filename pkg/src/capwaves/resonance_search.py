"""Exact-triad enumeration over an integer spectral domain and resonance widths.

A triad is a pair of positive wavenumbers (k1 <= k2) together with its sum
mode k3 = k1 + k2, the vorticity that closes it exactly and the coupling
coefficient there.  The resonance width of a candidate pair under an
arbitrary vorticity quantifies how far it is from exact resonance and feeds
the exact / quasi-resonant / approximate classification.

Grid enumeration is embarrassingly parallel over (k1, k2) and is implemented
with vectorized numpy; all returned objects are immutable after construction.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import (
    RESONANCE_REL_TOL,
    FluidParams,
    branch_frequency,
    resonant_vorticity,
)

__all__ = [
    "Triad",
    "InteractionKind",
    "InteractionClass",
    "enumerate_triads",
    "resonance_width",
    "min_positive_width",
    "interaction_bounds",
    "classify_interaction",
]


@dataclass(frozen=True, order=True)
class Triad:
    """Exact resonance (k1, k2, k3=k1+k2) with generating vorticity and coupling.

    Canonical ordering k1 <= k2 is assumed everywhere downstream.
    """

    k1: int
    k2: int
    k3: int
    omega_gen: float
    z: float

    def __post_init__(self) -> None:
        if not (0 < self.k1 <= self.k2):
            raise ValueError(f"triad requires 0 < k1 <= k2, got ({self.k1}, {self.k2})")
        if self.k3 != self.k1 + self.k2:
            raise ValueError(f"triad requires k3 = k1 + k2, got {self.k3}")

    @property
    def wavenumbers(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)

    def role(self, k: int) -> str:
        """'A' if k is the active (sum) mode of this triad, 'P' if passive."""
        if k == self.k3:
            return "A"
        if k in (self.k1, self.k2):
            return "P"
        raise ValueError(f"wavenumber {k} does not belong to triad {self.wavenumbers}")


class InteractionKind(enum.Enum):
    EXACT = "exact"
    QUASI = "quasi"
    APPROXIMATE = "approximate"


@dataclass(frozen=True)
class InteractionClass:
    """Classification of one candidate interaction plus its width delta (1/s)."""

    kind: InteractionKind
    delta: float


def enumerate_triads(kmax: int, params: FluidParams) -> list[Triad]:
    """All exact triads with 1 <= k1 <= k2 <= kmax, sorted by generating vorticity.

    k3 = k1 + k2 is deliberately not clipped to kmax: clusters of interest
    contain sum modes beyond the search domain.  The result has exactly
    kmax (kmax + 1) / 2 entries.
    """
    if kmax < 1:
        raise ValueError(f"kmax must be a positive integer, got {kmax}")
    k1g, k2g = np.meshgrid(np.arange(1, kmax + 1), np.arange(1, kmax + 1), indexing="ij")
    keep = k1g <= k2g
    k1 = k1g[keep]
    k2 = k2g[keep]
    k3 = k1 + k2
    omega = resonant_vorticity(k1, k2, params)
    # coupling taken at each triad's own generating vorticity
    w1 = np.sqrt(params.sigma * k1.astype(float) ** 3 + omega**2 / 4.0)
    w2 = np.sqrt(params.sigma * k2.astype(float) ** 3 + omega**2 / 4.0)
    w3 = np.sqrt(params.sigma * k3.astype(float) ** 3 + omega**2 / 4.0)
    z = np.sqrt(k1 * k2 * k3 / (np.pi * w1 * w2 * w3)) * (-w1 * w2 / 2.0 + omega / 4.0 * w3)
    order = np.lexsort((k2, k1, omega))
    return [
        Triad(int(k1[i]), int(k2[i]), int(k3[i]), float(omega[i]), float(z[i]))
        for i in order
    ]


def resonance_width(k1: int, k2: int, omega_cap: float, params: FluidParams) -> float:
    """Frequency mismatch |omega(k1) + omega(k2) - omega(k1+k2)| at the given vorticity.

    Evaluated on the propagation branch that carries the exact resonances of
    positive vorticity (see :mod:`capwaves.dispersion`); vanishes exactly at
    omega_cap = resonant_vorticity(k1, k2) and is continuous in omega_cap.
    """
    if k1 <= 0 or k2 <= 0:
        raise ValueError("resonance width requires positive wavenumbers")
    w = (
        branch_frequency(k1, omega_cap, params)
        + branch_frequency(k2, omega_cap, params)
        - branch_frequency(k1 + k2, omega_cap, params)
    )
    return abs(float(w))


def _width_grid(kmax: int, omega_cap: float, params: FluidParams):
    k1g, k2g = np.meshgrid(np.arange(1, kmax + 1), np.arange(1, kmax + 1), indexing="ij")
    keep = k1g <= k2g
    k1 = k1g[keep]
    k2 = k2g[keep]
    k3 = k1 + k2
    widths = np.abs(
        branch_frequency(k1, omega_cap, params)
        + branch_frequency(k2, omega_cap, params)
        - branch_frequency(k3, omega_cap, params)
    )
    return k1, k2, k3, widths


def min_positive_width(kmax: int, omega_cap: float, params: FluidParams) -> float:
    """Smallest nonzero resonance width on the (k1 <= k2 <= kmax) grid.

    Widths below the exactness tolerance (relative to the sum-mode frequency)
    are treated as exact resonances and excluded; this estimates the gap
    separating the quasi-resonant band from exact resonance.
    """
    if kmax < 1:
        raise ValueError(f"kmax must be a positive integer, got {kmax}")
    k1, k2, k3, widths = _width_grid(kmax, omega_cap, params)
    scale = branch_frequency(k3, omega_cap, params)
    positive = widths >= RESONANCE_REL_TOL * scale
    if not positive.any():
        raise ValueError("no positive width in domain: every candidate is exactly resonant")
    return float(widths[positive].min())


def interaction_bounds(kmax: int, omega_cap: float, params: FluidParams) -> tuple[float, float]:
    """(r, r_max) width bounds for classification at the given vorticity.

    r is the smallest positive width on the grid (quasi-resonance threshold);
    r_max the largest width present, beyond which a mismatch no longer
    corresponds to any in-domain interaction.
    """
    k1, k2, k3, widths = _width_grid(kmax, omega_cap, params)
    scale = branch_frequency(k3, omega_cap, params)
    positive = widths >= RESONANCE_REL_TOL * scale
    if not positive.any():
        raise ValueError("no positive width in domain: every candidate is exactly resonant")
    return float(widths[positive].min()), float(widths.max())


def classify_interaction(
    delta: float, r: float, r_max: float, *, exact_tol: float = 0.0
) -> InteractionClass:
    """Classify a width delta as exact, quasi-resonant or approximate.

    Exact for delta <= exact_tol; quasi for delta < r; approximate for
    r <= delta < r_max.  A delta at or beyond r_max is still reported as
    approximate, with a diagnostic warning, since it exceeds the distance to
    the nearest in-domain interaction.
    """
    if delta < 0.0:
        raise ValueError(f"width must be nonnegative, got {delta}")
    if not (0.0 <= r <= r_max):
        raise ValueError(f"require 0 <= r <= r_max, got r={r}, r_max={r_max}")
    if delta <= exact_tol:
        kind = InteractionKind.EXACT
    elif delta < r:
        kind = InteractionKind.QUASI
    else:
        if delta >= r_max:
            warnings.warn(
                f"width {delta} is at or beyond the largest in-domain width {r_max}",
                stacklevel=2,
            )
        kind = InteractionKind.APPROXIMATE
    return InteractionClass(kind, float(delta))
