"""Closed-form solution of the isolated three-wave system via elliptic functions.

The squared sum-mode amplitude rho3 = C3² of a resonant triad obeys

    (d rho3 / dt)² = 4 Z² P(rho3),   P(rho) = rho (I13 - rho)(I23 - rho) - (H/Z)²

where I13, I23 are the two quadratic invariants and H the (coupling-weighted)
Hamiltonian.  P has three real roots rho_a <= rho_b <= rho_c for any physical
state; rho3 oscillates between the two smallest and the motion is

    rho3(t) = rho_c - (rho_c - rho_a) dn²(|Z| sqrt(rho_c - rho_a) (t - t0), mu)

with modulus mu² = (rho_b - rho_a)/(rho_c - rho_a) and period
tau = 2 K(mu) / (|Z| sqrt(rho_c - rho_a)).  t0 is anchored at a minimum of
rho3.  The other two squared amplitudes follow from the invariants, and the
dynamical phase follows in closed form from cot(phi) = Re/Im of the triple
product (see :func:`closed_form_phase`).

Elliptic functions use the modulus convention (dn² + mu² sn² = 1) and are
computed by the arithmetic-geometric mean with the descending Landen
recurrence; no library special functions are used, so this module is an
oracle fully independent of the numerical integrator.  All functions are
pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TriadInvariants",
    "EllipticParams",
    "jacobi_elliptic",
    "complete_elliptic_K",
    "triad_elliptic_params",
    "closed_form_amplitudes",
    "closed_form_phase",
]

_AGM_TOL = 1e-17
_MAX_AGM_ITER = 64


@dataclass(frozen=True)
class TriadInvariants:
    """Conserved quantities of one triad: I13, I23, coupling-weighted H and Z."""

    i13: float
    i23: float
    h: float
    z: float

    def __post_init__(self) -> None:
        if self.i13 < 0.0 or self.i23 < 0.0:
            raise ValueError("quadratic invariants must be nonnegative")
        if self.z == 0.0:
            raise ValueError("coupling coefficient must be nonzero")

    @classmethod
    def from_state(cls, b1: complex, b2: complex, b3: complex, z: float) -> "TriadInvariants":
        h = z * (b1 * b2 * np.conj(b3)).imag
        return cls(
            i13=abs(b1) ** 2 + abs(b3) ** 2,
            i23=abs(b2) ** 2 + abs(b3) ** 2,
            h=float(h),
            z=float(z),
        )


@dataclass(frozen=True)
class EllipticParams:
    """Roots of the invariant cubic and derived elliptic constants."""

    rho_a: float
    rho_b: float
    rho_c: float
    mu: float
    k_complete: float  # K(mu), quarter period
    tau: float  # full period of the squared amplitudes


def complete_elliptic_K(mu: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention.

    Computed as pi / (2 agm(1, sqrt(1 - mu²))); strictly increasing with
    K(0) = pi/2, diverging logarithmically as mu -> 1.
    """
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"modulus must lie in [0, 1), got {mu}")
    a = 1.0
    b = math.sqrt((1.0 - mu) * (1.0 + mu))
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= _AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def jacobi_elliptic(x, mu: float):
    """Jacobi elliptic functions (sn, cn, dn) of argument x for modulus mu in [0, 1].

    Descending Landen / AGM evaluation: build the AGM scales a_n, c_n, seed
    the amplitude at the deepest level and fold back with
    phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n)) / 2.  Degenerate moduli
    reduce to circular (mu = 0) and hyperbolic (mu = 1) functions.

    Accepts scalar or ndarray x; satisfies sn² + cn² = 1 and
    dn² + mu² sn² = 1.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"modulus must lie in [0, 1], got {mu}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    if mu == 0.0:
        sn, cn, dn = np.sin(x), np.cos(x), np.ones_like(x)
    elif mu == 1.0:
        sn = np.tanh(x)
        cn = 1.0 / np.cosh(x)
        dn = cn.copy()
    else:
        a = [1.0]
        c = [mu]
        b = math.sqrt((1.0 - mu) * (1.0 + mu))
        while abs(c[-1]) > _AGM_TOL * a[-1] and len(a) < _MAX_AGM_ITER:
            a.append(0.5 * (a[-1] + b))
            c.append(0.5 * (a[-2] - b))
            b = math.sqrt(a[-2] * b)
        n = len(a) - 1
        phi = (2.0**n) * a[n] * x
        for i in range(n, 0, -1):
            ratio = np.clip(c[i] / a[i] * np.sin(phi), -1.0, 1.0)
            phi = 0.5 * (phi + np.arcsin(ratio))
        sn = np.sin(phi)
        cn = np.cos(phi)
        dn = np.sqrt(1.0 - (mu * sn) ** 2)
    if scalar:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def _cubic_roots(i13: float, i23: float, g: float) -> np.ndarray:
    """Real roots of rho³ - (I13+I23) rho² + I13 I23 rho - g, ascending.

    g = (H/Z)² >= 0.  Roots are polished with two Newton steps; a physical
    state always yields three real roots, otherwise a ValueError is raised.
    """
    coeffs = np.array([1.0, -(i13 + i23), i13 * i23, -g])
    roots = np.roots(coeffs)
    scale = max(i13, i23, 1e-300)
    if np.any(np.abs(roots.imag) > 1e-8 * scale):
        raise ValueError(
            f"unphysical invariants: complex cubic roots for I13={i13}, I23={i23}, (H/Z)²={g}"
        )
    roots = np.sort(roots.real)
    for _ in range(2):  # Newton polish
        p = np.polyval(coeffs, roots)
        dp = np.polyval(np.polyder(coeffs), roots)
        step = np.where(dp != 0.0, p / np.where(dp == 0.0, 1.0, dp), 0.0)
        roots = roots - step
    roots = np.sort(roots)
    # clamp the tiny negative excursion of the lowest root at H ~ 0
    if roots[0] < 0.0:
        if roots[0] < -1e-10 * scale:
            raise ValueError(f"unphysical invariants: negative root {roots[0]}")
        roots[0] = 0.0
    return roots


def triad_elliptic_params(inv: TriadInvariants) -> EllipticParams:
    """Elliptic constants (roots, modulus, quarter period, period) of a triad.

    At the separatrix (h = 0 with I13 = I23) the modulus reaches 1 and the
    period is infinite; this limit is returned as mu = 1, K = tau = inf.
    """
    g = (inv.h / inv.z) ** 2
    rho_a, rho_b, rho_c = _cubic_roots(inv.i13, inv.i23, g)
    if rho_c - rho_a <= 0.0:
        raise ValueError("degenerate invariants: the amplitude cubic has a triple root")
    mu2 = (rho_b - rho_a) / (rho_c - rho_a)
    mu = math.sqrt(min(max(mu2, 0.0), 1.0))
    if mu >= 1.0:
        k_complete = math.inf
        tau = math.inf
    else:
        k_complete = complete_elliptic_K(mu)
        tau = 2.0 * k_complete / (abs(inv.z) * math.sqrt(rho_c - rho_a))
    return EllipticParams(float(rho_a), float(rho_b), float(rho_c), mu, k_complete, tau)


def closed_form_amplitudes(params: EllipticParams, inv: TriadInvariants, t, t0: float):
    """Squared amplitudes (C1², C2², C3²) at time(s) t, with t0 a minimum of C3².

    C3² sweeps [rho_a, rho_b] through dn²; C1² and C2² follow from the
    invariants, C1² = I13 - C3² and C2² = I23 - C3².
    """
    t = np.asarray(t, dtype=float)
    u = abs(inv.z) * math.sqrt(params.rho_c - params.rho_a) * (t - t0)
    _, _, dn = jacobi_elliptic(u, params.mu)
    rho3 = params.rho_c - (params.rho_c - params.rho_a) * np.square(dn)
    rho1 = inv.i13 - rho3
    rho2 = inv.i23 - rho3
    if t.ndim == 0:
        return float(rho1), float(rho2), float(rho3)
    return rho1, rho2, rho3


def closed_form_phase(params: EllipticParams, inv: TriadInvariants, phi0: float, t, t0: float):
    """Dynamical phase phi(t) = sign(phi0) arccot(k1 F(k2 (t - t0), mu)).

    F = sn cn dn, k2 = 2 K(mu)/tau and
    k1 = -Z mu² (rho_c - rho_a)^{3/2} / |H|; with the coupling-weighted H the
    prefactor carries the sign of Z, which keeps the expression valid for
    either sign of the coupling.  Requires h != 0 (for h = 0 the phase is
    locked at 0 or pi and this representation degenerates); t0 must be a
    minimum of C3², where the phase passes sign(phi0) * pi/2.
    """
    if inv.h == 0.0:
        raise ValueError("phase closed form requires a nonzero Hamiltonian (phase-locked state)")
    if not math.isfinite(params.tau):
        raise ValueError("phase closed form is not defined on the separatrix (mu = 1)")
    t = np.asarray(t, dtype=float)
    span = params.rho_c - params.rho_a
    k1 = -inv.z * params.mu**2 * span**1.5 / abs(inv.h)
    k2 = 2.0 * params.k_complete / params.tau
    sn, cn, dn = jacobi_elliptic(k2 * (t - t0), params.mu)
    phi = math.copysign(1.0, phi0) * (0.5 * math.pi - np.arctan(k1 * sn * cn * dn))
    if t.ndim == 0:
        return float(phi)
    return phi
