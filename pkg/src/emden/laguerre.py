"""Generalized Laguerre polynomials, their decaying variants, and collocation nodes.

Everything in this module lives on the unscaled half line. The map parameter L
enters only through ``eval_mgl`` (which evaluates the decaying basis function
exp(-x/(2L)) * L_n^alpha(x/L)) and through consumers in the operator module.

Evaluation is restricted to the envelope n <= 30, x <= 200 where the forward
recurrence stays inside double-precision range; outside it a RangeError is
raised rather than silently losing accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gamma

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NumericalError, ParameterError, RangeError
from .validation import check_integer, check_real

__all__ = [
    "MAX_DEGREE",
    "MAX_ARGUMENT",
    "BasisParams",
    "RadauNodeSet",
    "eval_laguerre",
    "eval_laguerre_all",
    "eval_laguerre_deriv",
    "laguerre_zeros",
    "radau_nodes",
    "eval_mgl",
]

MAX_DEGREE = 30
MAX_ARGUMENT = 200.0

# Newton polish on the raw polynomial targets |L(z)| <= POLISH_TOL * max(1,|z|) * |L'(z)|,
# the tightest criterion reachable in doubles once e^{z/2} growth sets the noise floor.
POLISH_TOL = 1e-13
_POLISH_MAX_ITER = 50


def _check_degree(n):
    n = check_integer("n", n, minimum=0)
    if n > MAX_DEGREE:
        raise RangeError(f"n={n} outside the evaluation envelope (n <= {MAX_DEGREE})")
    return n


def _check_alpha(alpha):
    alpha = check_real("alpha", alpha)
    if alpha <= -1.0:
        raise ParameterError(f"alpha must be > -1, got {alpha}")
    return alpha


def _check_argument(x):
    arr = np.asarray(x, dtype=float)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ParameterError("argument must be finite")
    if arr.size and (np.any(arr > MAX_ARGUMENT) or np.any(arr < -1.0)):
        raise RangeError(
            f"argument outside the evaluation envelope [-1, {MAX_ARGUMENT:g}]"
        )
    return arr


@dataclass(frozen=True)
class BasisParams:
    """One half-line discretization: degree n, weight parameter alpha, map scale L."""

    n: int
    alpha: float = 1.0
    L: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "n", _check_degree(check_integer("n", self.n, minimum=1)))
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        object.__setattr__(self, "L", check_real("L", self.L, minimum=0.0, exclusive=True))


@dataclass(frozen=True)
class RadauNodeSet:
    """The n+1 collocation points {0} U {zeros of L_n^alpha} with cached derivative data.

    eta[0] is exactly 0. dLn_at_eta[j] holds (d/dx)L_n^alpha(eta[j]); entry 0 is
    unused by the matrix formulas (the boundary column uses Ln_at_zero instead)
    but stored for diagnostics. Immutable, safe to share between threads.
    """

    eta: np.ndarray
    dLn_at_eta: np.ndarray
    Ln_at_zero: float

    def __post_init__(self):
        self.eta.setflags(write=False)
        self.dLn_at_eta.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.eta) - 1


def eval_laguerre_all(n, alpha, x):
    """All values [L_0^a(x), ..., L_n^a(x)] from one recurrence sweep.

    x may be a scalar or an ndarray; the result has shape (n+1,) + shape(x).
    """
    n = _check_degree(n)
    alpha = _check_alpha(alpha)
    x = _check_argument(x)
    out = np.empty((n + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if n >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(2, n + 1):
        out[k] = ((2.0 * k - 1.0 + alpha - x) * out[k - 1] - (k + alpha - 1.0) * out[k - 2]) / k
    return out


def eval_laguerre(n, alpha, x):
    """L_n^alpha(x) by the three-term recurrence, one forward pass."""
    values = eval_laguerre_all(n, alpha, x)[-1]
    return float(values) if values.ndim == 0 else values


def eval_laguerre_deriv(n, alpha, x):
    """(d/dx)L_n^alpha(x) via the summed lower-degree values; 0 for n = 0."""
    n = _check_degree(n)
    if n == 0:
        alpha = _check_alpha(alpha)
        x = _check_argument(x)
        zeros = np.zeros(x.shape)
        return 0.0 if zeros.ndim == 0 else zeros
    values = -np.sum(eval_laguerre_all(n - 1, alpha, x), axis=0)
    return float(values) if values.ndim == 0 else values


def laguerre_zeros(n, alpha):
    """The n simple positive zeros of L_n^alpha, ascending.

    Eigenvalues of the symmetric tridiagonal Jacobi matrix (diagonal 2k+alpha+1,
    off-diagonal sqrt(k(k+alpha))) give the zeros to near machine accuracy;
    Newton polish with the analytic derivative then pins each one down to the
    documented residual target.

    Raises NumericalError if any zero fails to polish within the iteration cap.
    """
    n = _check_degree(check_integer("n", n, minimum=1))
    alpha = _check_alpha(alpha)
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    z = eigh_tridiagonal(diag, off, eigvals_only=True) if n > 1 else diag.copy()
    for _ in range(_POLISH_MAX_ITER):
        val = eval_laguerre(n, alpha, z)
        der = eval_laguerre_deriv(n, alpha, z)
        target = POLISH_TOL * np.maximum(1.0, np.abs(z)) * np.abs(der)
        done = np.abs(val) <= target
        if np.all(done):
            return np.sort(z)
        z = np.where(done, z, z - val / der)
    bad = int(np.argmax(np.abs(val) > target))
    raise NumericalError(f"zero polish failed to converge at index {bad} (n={n}, alpha={alpha})")


def radau_nodes(params: BasisParams) -> RadauNodeSet:
    """Assemble the node set {0} U zeros(L_n^alpha) with cached L_n' values and L_n(0)."""
    eta = np.concatenate(([0.0], laguerre_zeros(params.n, params.alpha)))
    dln = eval_laguerre_deriv(params.n, params.alpha, eta)
    ln0 = eval_laguerre(params.n, params.alpha, 0.0)
    return RadauNodeSet(eta=eta, dLn_at_eta=dln, Ln_at_zero=ln0)


def eval_mgl(params: BasisParams, n_index, x):
    """Decaying basis function exp(-x/(2L)) * L_k^alpha(x/L) for k = n_index.

    Defined for x >= 0 only (the half-line weight); x may be scalar or array.
    """
    n_index = _check_degree(n_index)
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ParameterError("x must be nonnegative")
    t = arr / params.L
    values = np.exp(-t / 2.0) * eval_laguerre_all(n_index, params.alpha, t)[-1]
    return float(values) if values.ndim == 0 else values


def mgl_norm_constant(params: BasisParams, n_index: int) -> float:
    """Diagonal value of the weighted inner product at L=1: Gamma(n+alpha+1)/n!."""
    n_index = _check_degree(n_index)
    return gamma(n_index + params.alpha + 1.0) / gamma(n_index + 1.0)
