"""Propagation of the two-mode covariance matrix along the coupler."""

import math

import numpy as np

from .coupler import CouplerParams, DriftMatrix, build_drift
from .entanglement import symplectic_spectrum
from .errors import InvalidInputError, NumericalFailure
from .matkernel import expm, sym_eigvals

VACUUM_VARIANCE = 0.5

# relative asymmetry allowed before symmetrising S V S^T
_ASYMMETRY_TOL = 1e-10
_PHYSICAL_TOL = 1e-9


def propagator(drift, z):
    """Symplectic propagator ``S(z) = exp(M z)``.

    Args:
        drift: :class:`DriftMatrix` or a raw 4x4 generator.
        z: coupler length, finite and >= 0.
    """
    z = float(z)
    if not math.isfinite(z) or z < 0.0:
        raise InvalidInputError(f"z must be finite and >= 0, got {z!r}")
    m = drift.matrix if isinstance(drift, DriftMatrix) else np.asarray(drift, dtype=float)
    return expm(m * z)


def vacuum_covariance():
    return VACUUM_VARIANCE * np.eye(4)


def evolve(v0, s):
    """Covariance after a symplectic map: ``S V0 S^T``, symmetrised."""
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (4, 4) or not np.all(np.isfinite(v0)):
        raise InvalidInputError("covariance matrix must be a finite 4x4 array")
    if np.abs(v0 - v0.T).max() > _ASYMMETRY_TOL * max(1.0, np.abs(v0).max()):
        raise InvalidInputError("covariance matrix is not symmetric")
    if sym_eigvals(v0)[0] <= 0.0:
        raise InvalidInputError("covariance matrix is not positive definite")
    if symplectic_spectrum(v0)[0] < VACUUM_VARIANCE - _PHYSICAL_TOL:
        raise InvalidInputError("covariance matrix violates the uncertainty principle")
    return _transform(v0, s)


def _transform(v0, s):
    with np.errstate(over="ignore", invalid="ignore"):
        v = s @ v0 @ s.T
    if not np.all(np.isfinite(v)):
        raise NumericalFailure("evolved covariance overflows double precision")
    asym = np.abs(v - v.T).max()
    if asym > _ASYMMETRY_TOL * max(1.0, np.abs(v).max()):
        raise InvalidInputError(f"evolved covariance lost symmetry ({asym:.3e}); propagator is suspect")
    return 0.5 * (v + v.T)


def squeeze_variance(v):
    """Generalized squeeze variance: the smallest eigenvalue of ``V``.

    The state is nonclassical iff the value is below 1/2; no tolerance is
    applied here.
    """
    return float(sym_eigvals(v)[0])


def covariance_at(params, z):
    """Covariance of the vacuum input after a coupler of length ``z``."""
    if isinstance(params, CouplerParams):
        params = build_drift(params)
    return _transform(vacuum_covariance(), propagator(params, z))


def z_grid(z_min=0.0, z_max=3.0, z_points=301):
    """Uniform grid including both end points."""
    if not (z_points >= 2 and z_min < z_max):
        raise InvalidInputError("z grid needs z_min < z_max and at least two points")
    return np.linspace(z_min, z_max, int(z_points))
