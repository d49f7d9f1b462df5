"""Maximum-entropy fitting over enumerated complex spaces.

The multipliers ``theta`` of the Gibbs distribution ``P(C) ~ exp(-theta . x(C))``
are found by minimising the convex dual ``log Z(theta) + theta . target``.  Its
gradient is ``target - E[x]`` and its Hessian the covariance of ``x`` under the
current Gibbs distribution, so damped Newton converges quadratically.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.special import logsumexp

from .enumeration import ComplexSpace, ExactDistribution, entropy, enumerate_space, feasible_perturbations
from .observables import Observable, f_obs, phi_obs

__all__ = [
    "FitError",
    "InfeasibleTargets",
    "MaxEntProblem",
    "FitReport",
    "MaxEntReport",
    "gibbs_distribution",
    "solve_theta",
    "a3_theta",
    "a4_theta",
    "kahle_n3_distribution",
    "tilde_distribution_n3",
    "verify_maxent",
]

log = logging.getLogger(__name__)

ARMIJO_SLOPE = 1e-4
SHRINK = 0.5
MAX_ITER = 200
RANK_RTOL = 1e-10
HULL_CHECK_MAX_OBS = 12
THETA_WATCHDOG = 1e6


class FitError(RuntimeError):
    pass


class InfeasibleTargets(FitError):
    """Targets are not in the relative interior of the achievable moment set."""


@dataclass
class MaxEntProblem:
    space: ComplexSpace
    observables: list[Observable]
    targets: np.ndarray
    theta: np.ndarray | None = None
    _X: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.targets = np.asarray(self.targets, dtype=float)
        if self.targets.shape != (len(self.observables),):
            raise ValueError("one target per observable is required")
        if self.theta is not None:
            self.theta = np.asarray(self.theta, dtype=float)

    @property
    def X(self) -> np.ndarray:
        if self._X is None:
            self._X = self.space.matrix(self.observables)
        return self._X


@dataclass
class FitReport:
    theta: np.ndarray
    gradient_norm: float
    iterations: int
    achieved_expectations: np.ndarray
    entropy: float
    rank: int
    log_partition: float
    dependent: bool = False
    history: list[float] = field(default_factory=list)  # dual objective after each accepted step

    def to_dict(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "gradient_norm": self.gradient_norm,
            "iterations": self.iterations,
            "achieved": self.achieved_expectations.tolist(),
            "entropy": self.entropy,
        }


def _gibbs(X: np.ndarray, theta: np.ndarray) -> tuple[np.ndarray, float]:
    h = -X @ theta
    logz = float(logsumexp(h))
    return np.exp(h - logz), logz


def gibbs_distribution(problem: MaxEntProblem) -> ExactDistribution:
    """``exp(-theta . x(C)) / Z(theta)`` over the problem's space."""
    if problem.theta is None or not np.all(np.isfinite(problem.theta)):
        raise ValueError("theta must be set and finite")
    probs, _ = _gibbs(problem.X, problem.theta)
    return ExactDistribution(problem.space, probs)


def _interior_margin(X: np.ndarray, targets: np.ndarray) -> float:
    """Largest t such that some q >= t with sum q = 1 and X^T q = targets (LP)."""
    m, r = X.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((r + 1, m + 1))
    A_eq[:r, :m] = X.T
    A_eq[r, :m] = 1.0
    b_eq = np.append(targets, 1.0)
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])  # t - q_j <= 0
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, 1.0)], method="highs")
    if res.status != 0:
        return -math.inf
    return float(res.x[-1])


def solve_theta(
    problem: MaxEntProblem,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
    theta0: Sequence[float] | None = None,
    check_feasible: bool = True,
) -> FitReport:
    """Fit ``theta`` so the Gibbs means of the observables hit the targets.

    Damped Newton on the dual with Armijo backtracking.  A rank-deficient
    covariance (linearly dependent observables) is handled with a
    pseudo-inverse step and flagged in the report.  Sets ``problem.theta``.

    Raises
    ------
    InfeasibleTargets
        Targets outside the relative interior of the moment set.
    FitError
        No convergence within ``max_iter`` iterations, or diverging ``theta``.
    """
    X = problem.X
    target = problem.targets
    r = X.shape[1]
    if check_feasible:
        if r <= HULL_CHECK_MAX_OBS:
            margin = _interior_margin(X, target)
            if not margin > 1e-12:
                raise InfeasibleTargets(f"targets {target.tolist()} have no strictly positive realisation")
        else:
            warnings.warn(f"{r} observables: skipping the hull test, relying on the divergence watchdog", stacklevel=2)

    theta = np.zeros(r) if theta0 is None else np.asarray(theta0, dtype=float).copy()
    probs, logz = _gibbs(X, theta)
    obj = logz + theta @ target
    history = [float(obj)]
    rank = r
    for it in range(max_iter + 1):
        mean = probs @ X
        grad = target - mean
        gnorm = float(np.max(np.abs(grad))) if r else 0.0
        if gnorm < tol:
            break
        if it == max_iter:
            raise FitError(f"no convergence after {max_iter} iterations (|grad| = {gnorm:.3e})")
        centered = X - mean
        cov = (centered * probs[:, None]).T @ centered
        U, s, Vt = np.linalg.svd(cov)
        keep = s > RANK_RTOL * s[0] if s.size and s[0] > 0 else np.zeros_like(s, dtype=bool)
        rank = int(keep.sum())
        step = -(Vt[keep].T @ ((U[:, keep].T @ grad) / s[keep]))
        slope = grad @ step
        t = 1.0
        while True:
            cand = theta + t * step
            cprobs, clogz = _gibbs(X, cand)
            cobj = clogz + cand @ target
            if cobj <= obj + ARMIJO_SLOPE * t * slope or t < 1e-12:
                break
            t *= SHRINK
        if cobj > obj:
            # numerical floor reached: accept the current point
            log.debug("line search stalled at |grad| = %.3e", gnorm)
            break
        theta, probs, logz, obj = cand, cprobs, clogz, cobj
        history.append(float(obj))
        if np.max(np.abs(theta)) > THETA_WATCHDOG:
            raise FitError("theta diverges; targets are probably on the boundary of the moment set")
    mean = probs @ X
    grad = target - mean
    gnorm = float(np.max(np.abs(grad))) if r else 0.0
    if gnorm >= tol:
        raise FitError(f"stalled with |grad| = {gnorm:.3e} > tol = {tol:.1e}")
    problem.theta = theta
    if rank < r:
        log.info("observables are linearly dependent: covariance rank %d of %d", rank, r)
    return FitReport(
        theta=theta,
        gradient_norm=gnorm,
        iterations=it,
        achieved_expectations=mean,
        entropy=entropy(probs),
        rank=rank,
        log_partition=logz,
        dependent=rank < r,
        history=history,
    )


# --- three-vertex closed forms -------------------------------------------------

def _check_open(p1: float, p2: float) -> None:
    if not (0.0 < p1 < 1.0 and 0.0 < p2 < 1.0):
        raise ValueError("p1 and p2 must lie strictly between 0 and 1")


def a3_theta(p1: float, p2: float) -> np.ndarray:
    """Multipliers for ``(f_1, f_2, phi_2)`` reproducing the Kahle model on three vertices."""
    _check_open(p1, p2)
    return -np.log([p1 / (1 - p1), p2 / (1 - p2), 1 - p2])


def a4_theta(f1bar: float, f2bar: float) -> np.ndarray:
    """Multipliers for ``(f_1, f_2)`` alone with targets ``f1bar``, ``f2bar`` on three vertices."""
    e = f1bar / 3 - f2bar
    if not (0 < f2bar < 1 and e > 0 and f1bar / 3 < 1):
        raise ValueError("targets outside the open moment region")
    x1 = e / (1 - f1bar / 3)
    x2 = f2bar * (1 - f2bar) ** 2 / e**3
    return -np.log([x1, x2])


def kahle_n3_distribution(p1: float, p2: float, space: ComplexSpace | None = None) -> ExactDistribution:
    """Closed-form Kahle probabilities on the nine complexes with three vertices."""
    space = space or enumerate_space("C_n", 3)
    X = space.matrix([f_obs(1), f_obs(2), phi_obs(2)])
    f1, f2, phi2 = X.T
    probs = p1**f1 * (1 - p1) ** (3 - f1) * p2**f2 * (1 - p2) ** (phi2 - f2)
    return ExactDistribution(space, probs)


def tilde_distribution_n3(p1: float, p2: float, space: ComplexSpace | None = None) -> ExactDistribution:
    """Max-entropy distribution on three vertices constraining only ``E f_1`` and ``E f_2``.

    Targets are the Kahle values ``3 p1`` and ``p1^3 p2``.
    """
    _check_open(p1, p2)
    space = space or enumerate_space("C_n", 3)
    X = space.matrix([f_obs(1), f_obs(2)])
    f1, f2 = X.T
    probs = (
        p1**f1 * (1 - p1) ** (3 - f1) * p2**f2
        * (1 - p1**2 * p2) ** (f1 - 3 * f2)
        * (1 - p1**3 * p2) ** (2 * f2 - 2)
    )
    return ExactDistribution(space, probs)


@dataclass
class MaxEntReport:
    perturbations: int
    violations: int
    min_gap: float
    max_increase: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def verify_maxent(
    p_star: ExactDistribution,
    observables,
    n_perturbations: int,
    seed: int = 0,
    magnitudes: Sequence[float] = (0.5, 0.1, 0.01, 0.001),
    slack: float = 1e-12,
) -> MaxEntReport:
    """Check that no feasible perturbation of ``p_star`` has larger entropy.

    The perturbations are split evenly over ``magnitudes`` (fractions of the
    distance to the nonnegativity boundary): large steps probe global
    dominance, small ones local optimality, where a first-order entropy gain
    cannot hide behind the curvature.

    ``min_gap`` is the smallest ``S(p_star) - S(Q)`` seen and ``max_increase``
    its negation.  A violation is an increase above ``slack``.
    """
    if np.any(p_star.probs < 0):
        raise ValueError("p_star has negative mass")
    X = observables if isinstance(observables, np.ndarray) else p_star.space.matrix(observables)
    share = np.diff(np.linspace(0, n_perturbations, len(magnitudes) + 1).round().astype(int))
    qs = []
    for j, (mag, k) in enumerate(zip(magnitudes, share)):
        qs += feasible_perturbations(p_star, X, int(k), magnitude=mag, seed=seed + j)
    s_star = entropy(p_star)
    gaps = np.array([s_star - entropy(q) for q in qs]) if qs else np.zeros(0)
    return MaxEntReport(
        perturbations=len(qs),
        violations=int((gaps < -slack).sum()),
        min_gap=float(gaps.min()) if gaps.size else math.nan,
        max_increase=float(-gaps.min()) if gaps.size else math.nan,
    )
