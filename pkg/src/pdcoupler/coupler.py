"""Device model: coupling constants, drift matrix and operating regime.

Quadratures are ordered ``(x_A, p_A, x_B, p_B)`` and the vacuum variance is 1/2.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .matkernel import gen_eigvals, sym_eigvals

TWO_PI = 2.0 * math.pi

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.kron(np.eye(2), J2)


def canonical_phase(phi):
    """Reduce a phase to the half-open interval [0, 2*pi)."""
    r = math.fmod(float(phi), TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if r >= TWO_PI:
        r = 0.0
    return r


@dataclass(frozen=True)
class CouplerParams:
    """Coupling magnitudes (inverse length) and phases (radians).

    ``gl``/``ga``/``gb`` are the linear coupling and the two down-conversion
    strengths.  Phases are stored reduced to [0, 2*pi).
    """

    gl_mag: float
    ga_mag: float
    gb_mag: float
    phi_l: float = 0.0
    phi_a: float = 0.0
    phi_b: float = 0.0

    def __post_init__(self):
        for name in ("gl_mag", "ga_mag", "gb_mag"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise InvalidInputError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)
        for name in ("phi_l", "phi_a", "phi_b"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidInputError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, canonical_phase(value))

    @classmethod
    def from_dphi(cls, gl_mag, ga_mag, gb_mag, dphi):
        """Canonical realisation of an effective phase difference: phi_A = dphi, phi_B = phi_L = 0."""
        return cls(gl_mag, ga_mag, gb_mag, phi_l=0.0, phi_a=dphi, phi_b=0.0)

    @property
    def magnitudes(self):
        return (self.gl_mag, self.ga_mag, self.gb_mag)


@dataclass(frozen=True)
class DriftMatrix:
    matrix: np.ndarray = field(repr=False)
    params: CouplerParams


class Regime(enum.Enum):
    BELOW = "below-threshold"
    ABOVE = "above-threshold"
    AT = "at-threshold"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegimeResult:
    regime: Regime
    margin: float


def build_drift(p):
    """Generator ``M`` of the quadrature equations ``d xi/dz = M xi``."""
    sa, ca = 2 * p.ga_mag * math.sin(p.phi_a), 2 * p.ga_mag * math.cos(p.phi_a)
    sb, cb = 2 * p.gb_mag * math.sin(p.phi_b), 2 * p.gb_mag * math.cos(p.phi_b)
    sl, cl = 2 * p.gl_mag * math.sin(p.phi_l), 2 * p.gl_mag * math.cos(p.phi_l)
    m = np.array(
        [
            [-sa, ca, sl, -cl],
            [ca, sa, cl, sl],
            [-sl, -cl, -sb, cb],
            [cl, -sl, cb, sb],
        ]
    )
    return DriftMatrix(m, p)


def effective_phase(p):
    """The gauge-invariant combination phi_A - phi_B + 2 phi_L, in [0, 2*pi)."""
    return canonical_phase(p.phi_a - p.phi_b + 2.0 * p.phi_l)


def effective_gain(p):
    """Down-conversion strength that the linear coupling has to beat.

    The characteristic polynomial of the drift matrix is biquadratic and its
    spectrum is entirely real iff

        2|g_L| <= (|g_A| + |g_B|) |(|g_A| - |g_B|)| / | |g_A| - |g_B| e^{i dphi} |

    The right-hand side equals |g_A + g_B| whenever the phases are matched
    (dphi = 0); at |g_A| = |g_B|, dphi = 0 the ratio is taken as its limit
    |g_A| + |g_B|.
    """
    a, b = p.ga_mag, p.gb_mag
    half = 0.5 * effective_phase(p)
    denom = math.sqrt((a - b) ** 2 + 4.0 * a * b * math.sin(half) ** 2)
    if denom == 0.0:
        return a + b
    return (a + b) * abs(a - b) / denom


def threshold_tolerance(p):
    return 1e-12 * (1.0 + 2.0 * p.gl_mag + p.ga_mag + p.gb_mag)


def classify_regime(p):
    """Closed-form threshold test: sign of ``2|g_L| - effective_gain``."""
    margin = 2.0 * p.gl_mag - effective_gain(p)
    tol = threshold_tolerance(p)
    if margin > tol:
        regime = Regime.BELOW
    elif margin < -tol:
        regime = Regime.ABOVE
    else:
        regime = Regime.AT
    return RegimeResult(regime, margin)


def _nullity(m, lam, tol):
    n = m - lam * np.eye(4)
    sv2 = sym_eigvals(n.T @ n)
    return int(np.sum(sv2 <= tol * tol))


def classify_regime_spectral(p, eigenvalues=None):
    """Regime read off from the eigenvalues of the drift matrix.

    Any eigenvalue with a non-negligible imaginary part means oscillatory
    (below-threshold) dynamics.  A purely real spectrum is above threshold,
    unless it is degenerate: all zero, or containing a repeated eigenvalue
    with a single eigenvector (the defective point where two real
    eigenvalues are about to leave the real axis).

    Returns:
        tuple: ``(Regime, eigenvalues)``.
    """
    m = build_drift(p).matrix
    ev = gen_eigvals(m) if eigenvalues is None else eigenvalues
    scale = 1.0 + float(np.abs(m).sum(axis=1).max())
    tol = 1e-9 * scale

    if np.all(np.abs(ev) <= tol):
        return Regime.AT, ev
    if np.any(np.abs(ev.imag) > tol):
        return Regime.BELOW, ev
    reals = np.sort(ev.real)
    for lam in np.unique(reals):
        mult = int(np.sum(np.abs(reals - lam) <= tol))
        if mult > 1 and _nullity(m, lam, 1e-6 * scale) < mult:
            return Regime.AT, ev
    return Regime.ABOVE, ev
