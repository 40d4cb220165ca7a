"""Small dense linear algebra for 2x2 and 4x4 real matrices.

Everything here works on plain ``numpy`` arrays.  The algorithms are written
out explicitly (scaling-and-squaring exponential, cyclic Jacobi, characteristic
polynomial plus Durand-Kerner) instead of delegating to LAPACK, because the
drift matrix becomes defective exactly at the coupler threshold and the
routines need predictable behaviour there.
"""

import math

import numpy as np

from .errors import InvalidInputError, NumericalFailure

__all__ = [
    "expm",
    "sym_eigvals",
    "gen_eigvals",
    "det",
    "charpoly",
    "poly_eval",
    "sort_complex",
]

EPS = np.finfo(float).eps

# scaled argument norm for the truncated Taylor series
_THETA_MAX = 0.5
_MAX_TAYLOR_ORDER = 30

_JACOBI_OFF_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 100
_SYMMETRY_TOL = 1e-10

_DK_MAX_ITER = 500
_DK_STALL_ITER = 30


def _as_real_matrix(m, sizes=(4,)):
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in sizes:
        raise InvalidInputError(f"expected a square matrix of size {sizes}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def expm(m, tol=1e-16):
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 1/2; the
    Taylor order is then the smallest one whose remainder bound, amplified by
    the ``s`` squarings, stays below ``tol`` relative to the result.

    Args:
        m: 4x4 real matrix.
        tol: truncation tolerance, in ``(0, 1e-6]``.

    Returns:
        ndarray: ``e**m``.
    """
    a = _as_real_matrix(m, sizes=(2, 4))
    if not (0.0 < tol <= 1e-6):
        raise InvalidInputError(f"tol must lie in (0, 1e-6], got {tol!r}")

    n = a.shape[0]
    norm = float(np.abs(a).sum(axis=0).max())
    s = 0
    if norm > _THETA_MAX:
        s = int(math.ceil(math.log2(norm / _THETA_MAX)))
    b = a / 2.0**s
    theta = norm / 2.0**s

    # remainder of order-m series for ||b|| <= theta is <= theta^(m+1)/(m+1)! e^theta,
    # and ||e^b|| >= e^-theta, so relative error <= that times e^theta
    amplification = 2.0**s * math.exp(2.0 * theta)
    order = 0
    term = theta
    while term * amplification > tol and order < _MAX_TAYLOR_ORDER:
        order += 1
        term *= theta / (order + 1)

    eye = np.eye(n)
    result = eye.copy()
    for k in range(order, 0, -1):
        result = eye + (b @ result) / k
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(s):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise NumericalFailure("matrix exponential overflows double precision")
    return result


def _symmetrized(v):
    a = _as_real_matrix(v, sizes=(2, 4))
    scale = max(1.0, float(np.abs(a).max()))
    asym = float(np.abs(a - a.T).max())
    if asym > _SYMMETRY_TOL * scale:
        raise InvalidInputError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return 0.5 * (a + a.T)


def sym_eigvals(v):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Small asymmetries (up to 1e-10 relative to the largest entry) are removed
    by averaging with the transpose; anything larger is rejected.

    Returns:
        ndarray: the eigenvalues in nondecreasing order.
    """
    a = _symmetrized(v)
    n = a.shape[0]
    fro = float(np.sqrt((a * a).sum()))
    off_tol = _JACOBI_OFF_TOL * max(1.0, fro)

    mask = ~np.eye(n, dtype=bool)

    def off_norm(x):
        return float(np.sqrt((x[mask] ** 2).sum()))

    sweeps = 0
    while off_norm(a) > off_tol:
        if sweeps == _JACOBI_MAX_SWEEPS:
            raise NumericalFailure(f"Jacobi iteration did not converge (off-diagonal {off_norm(a):.3e})")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = sn
                rot[q, p] = -sn
                a = rot.T @ a @ rot
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a))


def det(m):
    """Determinant of a 2x2 or 4x4 real matrix.

    2x2 uses the closed form; 4x4 uses LU factorisation with partial pivoting.
    """
    a = _as_real_matrix(m, sizes=(2, 4))
    if a.shape[0] == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    lu = [list(map(float, row)) for row in a]
    n = 4
    sign = 1.0
    result = 1.0
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(lu[i][k]))
        if lu[piv][k] == 0.0:
            return 0.0
        if piv != k:
            lu[k], lu[piv] = lu[piv], lu[k]
            sign = -sign
        pivot = lu[k][k]
        result *= pivot
        for i in range(k + 1, n):
            f = lu[i][k] / pivot
            if f != 0.0:
                row_i, row_k = lu[i], lu[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return sign * result


def charpoly(m):
    """Monic characteristic polynomial coefficients via Faddeev-LeVerrier.

    Returns ``[1, c_{n-1}, ..., c_0]`` (highest degree first).
    """
    a = _as_real_matrix(m, sizes=(2, 4))
    n = a.shape[0]
    coeffs = [1.0]
    mk = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * eye
        coeffs.append(-float(np.trace(a @ mk)) / k)
    return coeffs


def poly_eval(coeffs, x):
    """Horner evaluation of a polynomial given highest-degree-first coefficients."""
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _derivative(coeffs):
    deg = len(coeffs) - 1
    return [c * (deg - i) for i, c in enumerate(coeffs[:-1])]


def sort_complex(values):
    """Canonical order: by real part, then imaginary part."""
    return np.array(sorted(values, key=lambda w: (w.real, w.imag)), dtype=complex)


def _durand_kerner(coeffs, radius):
    deg = len(coeffs) - 1
    # offset angle avoids starting on a symmetry axis of the root set
    roots = [radius * complex(math.cos(2 * math.pi * k / deg + 0.4), math.sin(2 * math.pi * k / deg + 0.4))
             for k in range(deg)]
    best = math.inf
    stalled = 0
    for _ in range(_DK_MAX_ITER):
        biggest = 0.0
        for k in range(deg):
            zk = roots[k]
            denom = 1.0 + 0j
            for j in range(deg):
                if j != k:
                    denom *= zk - roots[j]
            if denom == 0:
                denom = complex(EPS * radius, EPS * radius)
            step = poly_eval(coeffs, zk) / denom
            roots[k] = zk - step
            biggest = max(biggest, abs(step))
        if biggest <= 1e-14 * radius:
            break
        if biggest < best:
            best = biggest
            stalled = 0
        else:
            stalled += 1
            if stalled >= _DK_STALL_ITER:
                break
    return roots


def _polish_clusters(coeffs, roots, radius, bound):
    """Replace clusters of nearby roots by one accurately located multiple root.

    A cluster of ``m`` approximations to an ``m``-fold root is only accurate to
    about eps**(1/m); its centroid is refined as a simple root of the
    (m-1)-th derivative and kept only if the polynomial vanishes there to
    rounding accuracy.
    """
    deg = len(roots)
    merge_dist = 1e-4 * radius
    parent = list(range(deg))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in range(deg):
        for j in range(i + 1, deg):
            if abs(roots[i] - roots[j]) < merge_dist:
                parent[find(j)] = find(i)
    groups = {}
    for i in range(deg):
        groups.setdefault(find(i), []).append(i)

    out = list(roots)
    for members in groups.values():
        mult = len(members)
        if mult == 1:
            continue
        q = coeffs
        for _ in range(mult - 1):
            q = _derivative(q)
        dq = _derivative(q)
        x = sum(roots[i] for i in members) / mult
        for _ in range(50):
            dqx = poly_eval(dq, x) if dq else 0.0
            if dqx == 0:
                break
            step = poly_eval(q, x) / dqx
            x -= step
            if abs(step) <= EPS * max(abs(x), radius * 1e-3):
                break
        # accept only at rounding level: two distinct roots a distance d apart leave
        # a residual of order d**2 at their midpoint
        rounding = 8.0 * EPS * sum(abs(c) * abs(x) ** k for k, c in enumerate(reversed(coeffs)))
        if abs(poly_eval(coeffs, x)) <= min(bound, rounding):
            for i in members:
                out[i] = x
    return out


def _pair_conjugates(roots):
    """Make near-conjugate root pairs exact conjugates (real input polynomial)."""
    out = list(roots)
    used = set()
    order = sorted(range(len(out)), key=lambda i: -out[i].imag)
    for i in order:
        if i in used or out[i].imag <= 0:
            continue
        target = out[i].conjugate()
        cands = [j for j in range(len(out)) if j != i and j not in used]
        if not cands:
            break
        j = min(cands, key=lambda k: abs(out[k] - target))
        if abs(out[j] - target) < abs(out[i] - target):
            re = 0.5 * (out[i].real + out[j].real)
            im = 0.5 * (out[i].imag - out[j].imag)
            out[i] = complex(re, im)
            out[j] = complex(re, -im)
            used.update((i, j))
    return out


def gen_eigvals(m):
    """All eigenvalues of a real 4x4 (or 2x2) matrix.

    Roots of the characteristic polynomial are found by simultaneous
    (Durand-Kerner) iteration started on a circle of radius ``1 + ||m||_inf``,
    then repeated roots are re-located and conjugate pairs matched.

    Returns:
        ndarray of complex, sorted by real then imaginary part.

    Raises:
        NumericalFailure: if the final residual exceeds
            ``1e-12 * (1 + ||m||_inf**n)``.
    """
    a = _as_real_matrix(m, sizes=(2, 4))
    n = a.shape[0]
    norm_inf = float(np.abs(a).sum(axis=1).max())
    radius = 1.0 + norm_inf
    coeffs = charpoly(a)
    bound = 1e-12 * (1.0 + norm_inf**n)

    roots = _durand_kerner(coeffs, radius)
    roots = _polish_clusters(coeffs, roots, radius, bound)
    roots = _pair_conjugates(roots)

    residual = max(abs(poly_eval(coeffs, r)) for r in roots)
    if not residual <= bound:
        raise NumericalFailure(f"eigenvalue iteration did not converge (residual {residual:.3e}, bound {bound:.3e})")
    return sort_complex(roots)
