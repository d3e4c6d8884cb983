"""One-dimensional Gauss-Lobatto polynomial infrastructure.

Provides the nodes/weights, the Lagrange derivative matrix (which satisfies
the summation-by-parts relation), Legendre evaluation, nodal<->modal
transforms, and modal filter matrices. Everything here is precomputed once
per polynomial degree and cached immutably.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


def legendre_poly(n: int, x):
    """Evaluate L_n and L'_n via the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x), np.zeros_like(x)
    lm, l = np.ones_like(x), x.copy()
    dlm, dl = np.zeros_like(x), np.ones_like(x)
    for k in range(2, n + 1):
        lnew = ((2 * k - 1) * x * l - (k - 1) * lm) / k
        dlnew = dlm + (2 * k - 1) * l
        lm, l = l, lnew
        dlm, dl = dl, dlnew
    return l, dl


@dataclass(frozen=True)
class QuadratureRule:
    N: int
    nodes: np.ndarray
    weights: np.ndarray


def gauss_lobatto_rule(N: int) -> QuadratureRule:
    """Gauss-Lobatto nodes (roots of (1-x^2)L'_N) and weights.

    Interior nodes by Newton iteration on L'_N with Chebyshev-Lobatto
    initial guesses; w_i = 2/(N(N+1) L_N(x_i)^2).
    """
    if N < 1:
        raise ValueError(f"degree must be >= 1, got {N}")
    x = np.zeros(N + 1)
    x[0], x[N] = -1.0, 1.0
    if N > 1:
        xi = -np.cos(np.pi * np.arange(1, N) / N)
        for _ in range(100):
            ln, dln = legendre_poly(N, xi)
            # L''_N from the Legendre ODE: (1-x^2)L'' = 2xL' - N(N+1)L
            d2ln = (2 * xi * dln - N * (N + 1) * ln) / (1.0 - xi**2)
            dx = dln / d2ln
            xi -= dx
            if np.max(np.abs(dx)) < 1e-15:
                break
        x[1:N] = xi
    ln, _ = legendre_poly(N, x)
    w = 2.0 / (N * (N + 1) * ln**2)
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(N=N, nodes=x, weights=w)


def derivative_matrix(rule: QuadratureRule) -> np.ndarray:
    """Lagrange derivative matrix D_ij = l'_j(x_i), barycentric form."""
    x = rule.nodes
    n = x.size
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    b = 1.0 / np.prod(diff, axis=1)  # barycentric weights
    D = (b[None, :] / b[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def legendre_vandermonde(rule: QuadratureRule) -> np.ndarray:
    """V_ij = L_j(x_i) for j = 0..N."""
    V = np.empty((rule.N + 1, rule.N + 1))
    for j in range(rule.N + 1):
        V[:, j] = legendre_poly(j, rule.nodes)[0]
    return V


def modal_transforms(rule: QuadratureRule):
    """Forward (nodal->modal) F, backward (modal->nodal) B, discrete norms.

    F_ij = <l_j, L_i>_N / ||L_i||^2_N and B_ij = <L_j, l_i>_N / w_i = L_j(x_i),
    so B is the Legendre Vandermonde matrix and F its quadrature inverse.
    """
    V = legendre_vandermonde(rule)
    norms_sq = rule.weights @ V**2
    F = (V * rule.weights[:, None]).T / norms_sq[:, None]
    return F, V, norms_sq


@dataclass(frozen=True)
class OperatorSet:
    """Per-degree bundle of 1-D operators, immutable after construction."""

    rule: QuadratureRule
    D: np.ndarray
    P: np.ndarray
    F: np.ndarray
    B: np.ndarray
    legendre_norms_sq: np.ndarray

    @property
    def N(self) -> int:
        return self.rule.N

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.rule.weights


@lru_cache(maxsize=None)
def operator_set(N: int) -> OperatorSet:
    rule = gauss_lobatto_rule(N)
    D = derivative_matrix(rule)
    P = np.diag(rule.weights)
    F, B, norms_sq = modal_transforms(rule)
    for a in (D, P, F, B, norms_sq):
        a.setflags(write=False)
    return OperatorSet(rule=rule, D=D, P=P, F=F, B=B, legendre_norms_sq=norms_sq)


@dataclass(frozen=True)
class FilterSpec:
    """Per-mode nonnegative kernel coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if np.any(c < 0):
            raise ValueError("kernel coefficients must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


def power_kernel(N: int, p_svv: float) -> FilterSpec:
    """Power-law kernel (i/N)^P.

    P = 0 returns the all-ones kernel (identity filter, plain viscosity);
    for P > 0 the i = 0 entry is exactly zero.
    """
    if p_svv < 0:
        raise ValueError("kernel exponent must be nonnegative")
    if p_svv == 0:
        return FilterSpec(np.ones(N + 1))
    i = np.arange(N + 1, dtype=float)
    return FilterSpec((i / N) ** p_svv)


def filter_matrix(ops: OperatorSet, spec: FilterSpec) -> np.ndarray:
    """Modal filter H = B diag(kernel) F."""
    if spec.coeffs.size != ops.N + 1:
        raise ValueError("kernel length does not match degree")
    return ops.B @ (spec.coeffs[:, None] * ops.F)
