"""Differentiation matrices and interpolant evaluation for the half-line basis.

Two families of dense (n+1) x (n+1) operators are built from the node set:

- polynomial-basis matrices D1_poly/D2_poly, mapping nodal values of a degree-n
  polynomial interpolant to nodal values of its derivatives;
- weighted matrices D1_mgl/D2_mgl for interpolants of the form
  exp(-x/2) * p(x), obtained from the polynomial matrices by the product rule:
  conjugation with the diagonal exp(-eta/2) weight plus the -1/2 (first
  derivative) and +1/4 - D1 (second derivative) shifts.

Scaling by the map parameter L gives D1_scaled = D1_mgl/L, D2_scaled =
D2_mgl/L**2 acting on values at the mapped nodes L*eta.

All entries come from closed forms; nothing here differentiates numerically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .laguerre import BasisParams, RadauNodeSet, eval_laguerre, radau_nodes
from .validation import check_real

__all__ = [
    "DiffOperators",
    "build_poly_d1",
    "build_poly_d2",
    "build_mgl_d1",
    "build_mgl_d2",
    "scale_operators",
    "build_operators",
    "eval_hat_interpolant",
]

# Relative half-width of the removable-singularity branch around each node.
NEAR_NODE_TOL = 1e-9
# Band where the debug build cross-checks evaluation against the Taylor form.
_TAYLOR_BAND = 1e-6


@dataclass(frozen=True)
class DiffOperators:
    """Operator bundle for one discretization; immutable, safe to share."""

    params: BasisParams
    nodes: RadauNodeSet
    mapped_nodes: np.ndarray
    D1_poly: np.ndarray
    D2_poly: np.ndarray
    D1_mgl: np.ndarray
    D2_mgl: np.ndarray
    D1_scaled: np.ndarray
    D2_scaled: np.ndarray

    def __post_init__(self):
        for name in ("mapped_nodes", "D1_poly", "D2_poly", "D1_mgl", "D2_mgl",
                     "D1_scaled", "D2_scaled"):
            getattr(self, name).setflags(write=False)

    @property
    def n(self) -> int:
        return self.nodes.n


def build_poly_d1(nodes: RadauNodeSet, alpha: float) -> np.ndarray:
    """First-derivative matrix of the polynomial nodal basis.

    Five closed-form cases: interior off-diagonal, interior diagonal, boundary
    column j=0, boundary row i=0, and the corner i=j=0.
    """
    eta, lp, l0 = nodes.eta, nodes.dLn_at_eta, nodes.Ln_at_zero
    n = nodes.n
    d = np.empty((n + 1, n + 1))
    ei, ej = eta[1:, None], eta[None, 1:]
    lpi, lpj = lp[1:, None], lp[None, 1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        d[1:, 1:] = (ei * lpi) / (ej * lpj * (ei - ej))
    idx = np.arange(1, n + 1)
    d[idx, idx] = (1.0 - alpha + eta[1:]) / (2.0 * eta[1:])
    d[1:, 0] = lp[1:] / l0
    d[0, 1:] = -l0 / (eta[1:] ** 2 * lp[1:])
    d[0, 0] = -n / (alpha + 1.0)
    return d


def build_poly_d2(nodes: RadauNodeSet, alpha: float) -> np.ndarray:
    """Second-derivative matrix of the polynomial nodal basis.

    Same five-case structure as build_poly_d1. Equals build_poly_d1 squared up
    to roundoff; built directly from closed forms so the identity stays a
    testable property rather than a construction.
    """
    eta, lp, l0 = nodes.eta, nodes.dLn_at_eta, nodes.Ln_at_zero
    n = nodes.n
    d = np.empty((n + 1, n + 1))
    ei, ej = eta[1:, None], eta[None, 1:]
    lpi, lpj = lp[1:, None], lp[None, 1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        d[1:, 1:] = lpi * ((1.0 - alpha + ei) * (ei - ej) - 2.0 * ei) / (
            ej * (ei - ej) ** 2 * lpj
        )
    idx = np.arange(1, n + 1)
    d[idx, idx] = ((eta[1:] - alpha) ** 2 - 1.0) / (3.0 * eta[1:] ** 2) - (n - 1.0) / (
        3.0 * eta[1:]
    )
    d[1:, 0] = -(alpha + 1.0 - eta[1:]) * lp[1:] / (eta[1:] * l0)
    d[0, 1:] = 2.0 * l0 * (n * eta[1:] - alpha - 1.0) / ((alpha + 1.0) * eta[1:] ** 3 * lp[1:])
    d[0, 0] = n * (n - 1.0) / ((alpha + 1.0) * (alpha + 2.0))
    return d


def _exp_ratio(eta: np.ndarray) -> np.ndarray:
    # R[i, j] = exp((eta_j - eta_i)/2); n <= 30 keeps the arguments within range
    return np.exp((eta[None, :] - eta[:, None]) / 2.0)


def build_mgl_d1(d1_poly: np.ndarray, nodes: RadauNodeSet) -> np.ndarray:
    """Weighted first-derivative matrix: (D1 - I/2) conjugated by the decay weight."""
    shift = d1_poly - 0.5 * np.eye(len(nodes.eta))
    return shift * _exp_ratio(nodes.eta)


def build_mgl_d2(d1_poly: np.ndarray, d2_poly: np.ndarray, nodes: RadauNodeSet) -> np.ndarray:
    """Weighted second-derivative matrix: (D2 - D1 + I/4) conjugated by the decay weight."""
    core = d2_poly - d1_poly + 0.25 * np.eye(len(nodes.eta))
    return core * _exp_ratio(nodes.eta)


def scale_operators(d1_mgl, d2_mgl, nodes: RadauNodeSet, L):
    """Apply the map parameter: returns (D1_mgl/L, D2_mgl/L**2, L*eta)."""
    L = check_real("L", L, minimum=0.0, exclusive=True)
    return d1_mgl / L, d2_mgl / (L * L), L * nodes.eta


def build_operators(params: BasisParams) -> DiffOperators:
    """Assemble the full operator bundle for one discretization."""
    nodes = radau_nodes(params)
    d1p = build_poly_d1(nodes, params.alpha)
    d2p = build_poly_d2(nodes, params.alpha)
    d1m = build_mgl_d1(d1p, nodes)
    d2m = build_mgl_d2(d1p, d2p, nodes)
    d1s, d2s, mapped = scale_operators(d1m, d2m, nodes, params.L)
    return DiffOperators(
        params=params,
        nodes=nodes,
        mapped_nodes=mapped,
        D1_poly=d1p,
        D2_poly=d2p,
        D1_mgl=d1m,
        D2_mgl=d2m,
        D1_scaled=d1s,
        D2_scaled=d2s,
    )


def _hat_cardinals(nodes: RadauNodeSet, alpha: float, t: float) -> np.ndarray:
    """Values of the n+1 weighted cardinal functions at the unscaled point t."""
    eta = nodes.eta
    n = nodes.n
    ln = eval_laguerre(n, alpha, t)
    w = np.exp((eta - t) / 2.0)
    card = np.empty(n + 1)
    card[0] = np.exp(-t / 2.0) * ln / nodes.Ln_at_zero
    with np.errstate(divide="ignore", invalid="ignore"):
        card[1:] = w[1:] * t * ln / (eta[1:] * nodes.dLn_at_eta[1:] * (t - eta[1:]))
    # removable singularity at t = eta_j: the cardinal limit is the bare weight
    near = np.abs(t - eta) < NEAR_NODE_TOL * np.maximum(1.0, eta)
    card[near] = w[near]
    return card


def eval_hat_interpolant(ops: DiffOperators, b, x):
    """Evaluate the weighted interpolant sum_j b_j * card_j(x/L) at x >= 0.

    Accepts a scalar or an array of evaluation points; returns a matching
    scalar or array. Exactly reproduces b_j at the mapped nodes (the
    removable-singularity branch) and b_0 = y(0) at the origin.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (ops.n + 1,):
        raise ParameterError(f"coefficient vector must have length {ops.n + 1}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ParameterError("x must be nonnegative")
    scalar = arr.ndim == 0
    pts = np.atleast_1d(arr)
    out = np.empty(pts.shape)
    eta = ops.nodes.eta
    for k, xv in enumerate(pts):
        t = xv / ops.params.L
        card = _hat_cardinals(ops.nodes, ops.params.alpha, t)
        if __debug__:
            gap = np.abs(t - eta)
            s = np.maximum(1.0, eta)
            band = (gap >= NEAR_NODE_TOL * s) & (gap < _TAYLOR_BAND * s)
            for j in np.nonzero(band)[0]:
                taylor = 1.0 + ops.D1_mgl[j, j] * (t - eta[j])
                assert abs(card[j] - taylor) <= 1e-5, (
                    f"near-node evaluation drifted from the Taylor form at node {j}"
                )
        out[k] = card @ b
    return float(out[0]) if scalar else out
