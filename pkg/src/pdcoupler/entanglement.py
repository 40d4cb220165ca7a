"""Separability and logarithmic negativity of two-mode Gaussian states.

Partial transposition acts on mode B as the momentum flip
``Lambda = diag(1, 1, 1, -1)``.  The smaller partially transposed symplectic
eigenvalue ``c1`` falls below 1/2 iff the state is entangled.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NumericalFailure
from .matkernel import det, gen_eigvals

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
OMEGA = np.kron(np.eye(2), J2)
FLIP_B = np.diag([1.0, 1.0, 1.0, -1.0])
_FLIP2 = np.diag([1.0, -1.0])

_NEG_TOL = 1e-12
_ORACLE_RE_TOL = 1e-8


class BlockDecomposition(NamedTuple):
    """``V = [[A, C], [C^T, B]]``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def assemble(self):
        return np.block([[self.a, self.c], [self.c.T, self.b]])


@dataclass(frozen=True)
class EntanglementReport:
    c1: float
    c2: float
    negativity: float
    log_neg: float

    @property
    def entangled(self):
        return self.log_neg > 0.0


def block_decompose(v):
    v = np.asarray(v, dtype=float)
    return BlockDecomposition(v[:2, :2].copy(), v[2:, 2:].copy(), v[:2, 2:].copy())


def _det2(m):
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def _biquadratic_roots(v, partial_transpose):
    a, b, c = block_decompose(v)
    if partial_transpose:
        b = _FLIP2 @ b @ _FLIP2
        c = c @ _FLIP2
    det_a, det_b, det_c = _det2(a), _det2(b), _det2(c)
    delta = det_a + det_b + 2.0 * det_c
    # delta^2 - 4 det V, expanded with det V = detA detB + detC^2 - tr(A J C J B J C^T J)
    # so that it vanishes without cancellation when the modes are uncorrelated
    cross = float(np.trace(a @ J2 @ c @ J2 @ b @ J2 @ c.T @ J2))
    disc = (det_a - det_b) ** 2 + 4.0 * (det_a + det_b) * det_c + 4.0 * cross
    if disc < 0.0:
        # the terms are quartic in the entries, so roundoff scales like |V|^4
        if disc < -_NEG_TOL * max(1.0, float(np.abs(v).max())) ** 4:
            raise NumericalFailure(f"negative discriminant {disc:.3e}: covariance matrix is unphysical")
        disc = 0.0
    big = 0.5 * (delta + math.sqrt(disc))
    if big <= 0.0:
        raise NumericalFailure("no positive root of the symplectic biquadratic")
    det_v = det(v)
    small = det_v / big
    if small < 0.0:
        if small < -_NEG_TOL:
            raise NumericalFailure(f"negative squared symplectic eigenvalue {small:.3e}")
        small = 0.0
    return math.sqrt(small), math.sqrt(big)


def symplectic_spectrum(v):
    """Symplectic eigenvalues of ``V`` itself, ascending."""
    return _biquadratic_roots(v, partial_transpose=False)


def pt_symplectic_spectrum(v):
    """Symplectic eigenvalues of the partially transposed state, ascending.

    These are the positive roots of
    ``zeta^4 - (det A + det B - 2 det C) zeta^2 + det V = 0``.
    """
    return _biquadratic_roots(v, partial_transpose=True)


def pt_spectrum_oracle(v):
    """Same quantity as :func:`pt_symplectic_spectrum`, from the eigenvalues of ``Omega V~``.

    ``Omega V~`` has eigenvalues ``+-i c_j``; used as an independent check.
    """
    vt = FLIP_B @ np.asarray(v, dtype=float) @ FLIP_B
    ev = gen_eigvals(OMEGA @ vt)
    scale = max(1.0, float(np.abs(ev).max()))
    if np.abs(ev.real).max() > _ORACLE_RE_TOL * scale:
        raise NumericalFailure("Omega V has eigenvalues off the imaginary axis: covariance matrix is unphysical")
    im = np.sort(np.abs(ev.imag))
    return 0.5 * (im[0] + im[1]), 0.5 * (im[2] + im[3])


def neg_log_term(c):
    """``-log2(2c)`` below the vacuum level, zero otherwise."""
    if 2.0 * c >= 1.0:
        return 0.0
    return -math.log2(2.0 * c)


def log_negativity(v):
    c1, c2 = pt_symplectic_spectrum(v)
    if c1 == 0.0:
        raise NumericalFailure("vanishing symplectic eigenvalue: logarithmic negativity diverges")
    en = neg_log_term(c1) + neg_log_term(c2)
    return EntanglementReport(c1=c1, c2=c2, negativity=(2.0**en - 1.0) / 2.0, log_neg=en)
