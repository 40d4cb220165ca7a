"""Choice of the effective phase difference that maximises entanglement.

For fixed coupling magnitudes the logarithmic negativity depends on the phases
only through ``dphi = phi_A - phi_B + 2 phi_L``.  ``dphi`` is realised as
``phi_A = dphi, phi_B = phi_L = 0``.  The optimiser scans a dense uniform grid
(the objective can have several lobes) and then refines the best grid point
by golden-section search.
"""

import math
from dataclasses import dataclass

import numpy as np

from .coupler import TWO_PI, CouplerParams, canonical_phase
from .dynamics import covariance_at
from .entanglement import log_negativity
from .errors import InvalidInputError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_COARSE_N = 256
DEFAULT_REFINE_TOL = 1e-6

# grid values this close to the maximum count as ties
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class PhaseOptimum:
    z: float
    dphi_opt: float
    en_max: float
    evaluations: int


def en_of_phase(mags, dphi, z):
    """Logarithmic negativity (bits) of the output for a given effective phase."""
    gl, ga, gb = mags
    params = CouplerParams.from_dphi(gl, ga, gb, dphi)
    return log_negativity(covariance_at(params, z)).log_neg


def golden_section_max(f, lo, hi, tol):
    """Maximise ``f`` on ``[lo, hi]`` until the bracket is narrower than ``tol``.

    Returns ``(x, f(x), evaluations)`` for the best interior point seen.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals = 2
    while hi - lo >= tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        evals += 1
    if f1 >= f2:
        return x1, f1, evals
    return x2, f2, evals


def optimize_phase(mags, z, coarse_n=DEFAULT_COARSE_N, refine_tol=DEFAULT_REFINE_TOL):
    """Maximise the logarithmic negativity over the effective phase at length ``z``."""
    if int(coarse_n) != coarse_n or coarse_n < 16:
        raise InvalidInputError(f"coarse_n must be an integer >= 16, got {coarse_n!r}")
    if not (0.0 < refine_tol <= 1e-3):
        raise InvalidInputError(f"refine_tol must lie in (0, 1e-3], got {refine_tol!r}")
    coarse_n = int(coarse_n)
    z = float(z)

    def objective(d):
        return en_of_phase(mags, d, z)

    step = TWO_PI / coarse_n
    grid = [k * step for k in range(coarse_n)]
    values = [objective(d) for d in grid]
    evals = coarse_n

    top = max(values)
    tie = _TIE_TOL * max(1.0, abs(top))
    k_best = next(k for k, val in enumerate(values) if val >= top - tie)
    d_best, f_best = grid[k_best], values[k_best]

    x, fx, n = golden_section_max(objective, d_best - step, d_best + step, refine_tol)
    evals += n
    if fx > f_best + tie:
        d_best, f_best = canonical_phase(x), fx

    return PhaseOptimum(z=z, dphi_opt=d_best, en_max=f_best, evaluations=evals)


def optimize_over_z(mags, z_grid, coarse_n=DEFAULT_COARSE_N, refine_tol=DEFAULT_REFINE_TOL):
    zs = [float(z) for z in z_grid]
    if not zs:
        raise InvalidInputError("z grid is empty")
    if any(b < a for a, b in zip(zs, zs[1:])):
        raise InvalidInputError("z grid must be ascending")
    return [optimize_phase(mags, z, coarse_n, refine_tol) for z in zs]


def phase_distance(a, b):
    """Distance between two phases on the circle."""
    d = abs(canonical_phase(a) - canonical_phase(b))
    return min(d, TWO_PI - d)


def detect_onset(optima, tol=DEFAULT_REFINE_TOL):
    """First length at which the optimal phase leaves zero.

    Returns ``None`` if it never does.  Every grid point before the returned
    length has ``dphi_opt`` within ``tol`` of zero.
    """
    for opt in optima:
        if phase_distance(opt.dphi_opt, 0.0) > tol:
            return opt.z
    return None


def tail_stats(optima, fraction=0.2):
    """Mean and standard deviation of ``dphi_opt`` over the last part of the grid."""
    count = max(1, int(round(fraction * len(optima))))
    tail = np.array([opt.dphi_opt for opt in optima[-count:]])
    return float(tail.mean()), float(tail.std())
