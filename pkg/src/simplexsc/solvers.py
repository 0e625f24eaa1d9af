"""Self-expressive coefficient solvers.

Four models share the ridge data term ||X - XC||_F^2 + lam*||.||_F^2 and
differ only in the constraint set:

    lsr    unconstrained (closed form)
    nlsr   C >= 0
    slsr   columns sum to s
    ssrsc  columns on the scale-s simplex (>= 0 and sum to s)

The three constrained models run the same ADMM skeleton: a ridge update of C
against the current feasible iterate, a projection update of Z, and a dual
ascent on the multiplier. The ridge system matrix is constant, so its inverse
is computed once up front, optionally through the Woodbury identity which
swaps the N x N inversion for a D x D one (a large win whenever D < N).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    ConfigError,
    DivergenceError,
    SolverConfig,
    as_data_matrix,
    frobenius_distance,
)
from .projections import (
    project_columns_scaled_affine,
    project_columns_scaled_simplex,
    project_nonneg,
    project_scaled_simplex,
)

GRAM_INVERSE_MODES = ("direct", "woodbury", "auto")


@dataclass(frozen=True)
class PrecomputedKernel:
    """Gram matrix and shifted inverse reused across all ADMM iterations."""

    gram: np.ndarray            # X^T X
    inverse_factor: np.ndarray  # (X^T X + shift*I)^{-1}
    shift: float


@dataclass
class SolveResult:
    """Feasible coefficient matrix plus the per-iteration residual record.

    ``residual_history[k]`` holds (||C-Z||_F, ||C_k+1 - C_k||_F,
    ||Z_k+1 - Z_k||_F) for iteration k. ``converged`` is True when all three
    fell to <= tol simultaneously within the iteration budget.
    """

    coefficients: np.ndarray
    residual_history: list[tuple[float, float, float]] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations_used(self) -> int:
        return len(self.residual_history)


def regularized_gram_inverse(x, shift: float, mode: str = "auto") -> np.ndarray:
    """Return (X^T X + shift*I)^{-1} for a D x N data matrix.

    mode "direct" inverts the N x N system; "woodbury" rewrites it as
    (1/shift)*I - (1/shift)^2 * X^T (I_D + (1/shift) X X^T)^{-1} X, inverting
    a D x D system instead; "auto" picks woodbury exactly when D < N. The
    inner D x D system is positive definite for any shift > 0.
    """
    x = as_data_matrix(x)
    if not np.isfinite(shift) or shift <= 0:
        raise ConfigError(f"shift must be positive, got {shift}")
    if mode not in GRAM_INVERSE_MODES:
        raise ConfigError(f"mode must be one of {GRAM_INVERSE_MODES}, got {mode!r}")
    d, n = x.shape
    with np.errstate(over="ignore", invalid="ignore"):
        if mode == "woodbury" or (mode == "auto" and d < n):
            inner = np.eye(d) + (x @ x.T) / shift
            solved = np.linalg.solve(inner, x)
            result = np.eye(n) / shift - (x.T @ solved) / shift**2
        else:
            result = np.linalg.inv(x.T @ x + shift * np.eye(n))
    if not np.all(np.isfinite(result)):
        raise NumericError("regularized Gram inverse overflowed; rescale the data")
    return result


def precompute_kernel(x, shift: float, mode: str = "auto") -> PrecomputedKernel:
    """Build the Gram matrix and its shifted inverse for an ADMM run."""
    x = as_data_matrix(x)
    return PrecomputedKernel(
        gram=x.T @ x,
        inverse_factor=regularized_gram_inverse(x, shift, mode),
        shift=shift,
    )


def solve_lsr(x, lam: float, use_woodbury: str = "auto") -> np.ndarray:
    """Closed-form ridge self-expression C = (X^T X + lam*I)^{-1} X^T X."""
    x = as_data_matrix(x)
    if not np.isfinite(lam) or lam <= 0:
        raise ConfigError(f"lam must be positive, got {lam}")
    mode = {"auto": "auto", "on": "woodbury", "off": "direct"}.get(use_woodbury)
    if mode is None:
        raise ConfigError(f"use_woodbury must be one of ('auto', 'on', 'off'), got {use_woodbury!r}")
    return regularized_gram_inverse(x, lam, mode) @ (x.T @ x)


def _admm_loop(x: np.ndarray, cfg: SolverConfig, shift: float, z_update) -> SolveResult:
    """Shared ADMM skeleton: ridge C-step, projection Z-step, dual ascent.

    All three iterates start at zero. Stops when the equality-gap and both
    successive-change residuals are simultaneously <= tol, or after
    max_iters iterations. Returns Z, the iterate that satisfies the model's
    constraints exactly.
    """
    mode = {"auto": "auto", "on": "woodbury", "off": "direct"}[cfg.use_woodbury]
    kernel = precompute_kernel(x, shift, mode)
    n = x.shape[1]
    c = np.zeros((n, n))
    z = np.zeros((n, n))
    delta = np.zeros((n, n))
    history: list[tuple[float, float, float]] = []
    converged = False
    for _ in range(cfg.max_iters):
        c_next = kernel.inverse_factor @ (kernel.gram + 0.5 * cfg.rho * z + 0.5 * delta)
        if not np.all(np.isfinite(c_next)):
            raise DivergenceError("ADMM iterates became non-finite")
        z_next = z_update(c_next, delta)
        delta = delta + cfg.rho * (z_next - c_next)
        history.append(
            (
                frobenius_distance(c_next, z_next),
                frobenius_distance(c_next, c),
                frobenius_distance(z_next, z),
            )
        )
        c, z = c_next, z_next
        if max(history[-1]) <= cfg.tol:
            converged = True
            break
    return SolveResult(coefficients=z, residual_history=history, converged=converged)


def _rezero_diagonal(z: np.ndarray, s: float) -> np.ndarray:
    """Force diag(Z)=0, re-projecting each column's off-diagonal onto the simplex."""
    n = z.shape[0]
    out = np.empty_like(z)
    for j in range(n):
        keep = np.delete(z[:, j], j)
        col = np.insert(project_scaled_simplex(keep, s), j, 0.0)
        out[:, j] = col
    return out


def solve_ssrsc(x, cfg: SolverConfig) -> SolveResult:
    """ADMM for ridge self-expression with scale-s simplex columns.

    The Z-step projects each column of rho/(2*lam+rho) * (C - Delta/rho)
    onto the scale-s simplex; with cfg.zero_diagonal the diagonal entry is
    then zeroed and the remaining entries re-projected, keeping feasibility.
    """
    if cfg.model != "ssrsc":
        raise ConfigError(f"solve_ssrsc requires model 'ssrsc', got {cfg.model!r}")
    x = as_data_matrix(x)
    if cfg.zero_diagonal and x.shape[1] < 2:
        raise ConfigError("zero_diagonal needs at least 2 points to keep columns feasible")
    scale = cfg.rho / (2.0 * cfg.lam + cfg.rho)

    def z_update(c: np.ndarray, delta: np.ndarray) -> np.ndarray:
        v = scale * (c - delta / cfg.rho)
        z = project_columns_scaled_simplex(v, cfg.s)
        if cfg.zero_diagonal:
            z = _rezero_diagonal(z, cfg.s)
        return z

    return _admm_loop(x, cfg, shift=0.5 * cfg.rho, z_update=z_update)


def solve_nlsr(x, cfg: SolverConfig) -> SolveResult:
    """ADMM for ridge self-expression with non-negative coefficients.

    The regularizer rides on the C-step here, so the ridge shift is
    (2*lam+rho)/2 and the Z-step is a plain clip of C - Delta/rho to the
    non-negative orthant.
    """
    if cfg.model != "nlsr":
        raise ConfigError(f"solve_nlsr requires model 'nlsr', got {cfg.model!r}")
    x = as_data_matrix(x)

    def z_update(c: np.ndarray, delta: np.ndarray) -> np.ndarray:
        return project_nonneg(c - delta / cfg.rho)

    return _admm_loop(x, cfg, shift=0.5 * (2.0 * cfg.lam + cfg.rho), z_update=z_update)


def solve_slsr(x, cfg: SolverConfig) -> SolveResult:
    """ADMM for ridge self-expression with columns summing to s.

    Identical to the simplex solver except the Z-step projects onto the
    sum-to-s hyperplane (a uniform shift, no clipping), so coefficients may
    go negative.
    """
    if cfg.model != "slsr":
        raise ConfigError(f"solve_slsr requires model 'slsr', got {cfg.model!r}")
    x = as_data_matrix(x)
    scale = cfg.rho / (2.0 * cfg.lam + cfg.rho)

    def z_update(c: np.ndarray, delta: np.ndarray) -> np.ndarray:
        return project_columns_scaled_affine(scale * (c - delta / cfg.rho), cfg.s)

    return _admm_loop(x, cfg, shift=0.5 * cfg.rho, z_update=z_update)


def solve(x, cfg: SolverConfig) -> SolveResult:
    """Run the solver selected by cfg.model on a D x N data matrix."""
    if cfg.model == "lsr":
        return SolveResult(
            coefficients=solve_lsr(x, cfg.lam, cfg.use_woodbury),
            residual_history=[],
            converged=True,
        )
    runner = {"ssrsc": solve_ssrsc, "nlsr": solve_nlsr, "slsr": solve_slsr}[cfg.model]
    return runner(x, cfg)
