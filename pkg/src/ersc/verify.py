"""Self-check suites run by ``ersc verify``.

Each suite returns a list of :class:`Check` lines: what was measured, what it
should equal and the tolerance used.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .enumeration import enumerate_space, exact_distribution, partition_function
from .generators import GeneralParams, KahleParams
from .maxent import (
    MaxEntProblem,
    a3_theta,
    a4_theta,
    gibbs_distribution,
    kahle_n3_distribution,
    solve_theta,
    tilde_distribution_n3,
    verify_maxent,
)
from .measures import conditional_probability, expected_a, expected_b
from .observables import a_obs, b_obs, f_obs, phi_obs

SUITES = ("a3", "a4", "fig6", "product", "dominance")
RANDOMISED = {"product", "dominance"}


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    expected: float
    tol: float
    passed: bool
    relation: str = "=="

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: measured={self.measured!r} {self.relation} expected={self.expected!r} (tol {self.tol:g})"


def _close(name: str, measured: float, expected: float, tol: float) -> Check:
    return Check(name, float(measured), float(expected), tol, abs(measured - expected) <= tol)


def suite_a3(p1: float = 0.4, p2: float = 0.6, **_) -> list[Check]:
    S = enumerate_space("C_n", 3)
    obs = [f_obs(1), f_obs(2), phi_obs(2)]
    z = partition_function(a3_theta(p1, p2), obs, S)
    out = [_close("Z at closed-form theta", z, 1 / (1 - p1) ** 3, 1e-12)]
    fit = solve_theta(MaxEntProblem(S, obs, [3 * p1, p1**3 * p2, p1**3]))
    want = [p1 / (1 - p1), p2 / (1 - p2), 1 - p2]
    for i, (got, w) in enumerate(zip(np.exp(-fit.theta), want), start=1):
        out.append(_close(f"exp(-theta_{i}) from fit", got, w, 1e-8))
    return out


def suite_a4(p1: float = 0.4, p2: float = 0.6, **_) -> list[Check]:
    S = enumerate_space("C_n", 3)
    tilde = tilde_distribution_n3(p1, p2, S)
    out = [_close("sum of P~", tilde.probs.sum(), 1.0, 1e-12)]
    prob = MaxEntProblem(S, [f_obs(1), f_obs(2)], [3 * p1, p1**3 * p2])
    fit = solve_theta(prob)
    out.append(_close("max |P~ - fitted Gibbs|", np.abs(gibbs_distribution(prob).probs - tilde.probs).max(), 0.0, 1e-8))
    closed = a4_theta(3 * p1, p1**3 * p2)
    out.append(_close("max |theta fit - closed form|", np.abs(fit.theta - closed).max(), 0.0, 1e-8))
    gap = np.abs(tilde.probs - kahle_n3_distribution(p1, p2, S).probs).max()
    out.append(Check("max |P~ - P_Kahle|", float(gap), 1e-6, 0.0, gap > 1e-6, ">"))
    return out


def suite_multiplicities(**_) -> list[Check]:
    S = enumerate_space("C_n", 3)
    X = S.matrix([f_obs(1), f_obs(2), phi_obs(2)]).astype(int)
    got = Counter(map(tuple, X.tolist()))
    want = {(0, 0, 0): 1, (1, 0, 0): 3, (2, 0, 0): 3, (3, 0, 1): 1, (3, 1, 1): 1}
    out = [Check("|C_3|", len(S), 9, 0, len(S) == 9)]
    for key, k in want.items():
        out.append(Check(f"multiplicity of (f1,f2,phi2)={key}", got.get(key, 0), k, 0, got.get(key, 0) == k))
    out.append(Check("no other (f1,f2,phi2) values", len(set(got) - set(want)), 0, 0, set(got) <= set(want)))
    return out


def suite_product(seed: int = 0, **_) -> list[Check]:
    n = 3
    params = GeneralParams.random(n, 0.2, 0.9, seed)
    S = enumerate_space("C_le_n", n)
    simplices = [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    bounded = [s for s in simplices if len(s) > 1]
    obs = [a_obs(s) for s in simplices] + [b_obs(s) for s in bounded]
    targets = [expected_a(s, params) for s in simplices] + [expected_b(s, params) for s in bounded]
    prob = MaxEntProblem(S, obs, targets)
    solve_theta(prob)
    exact = exact_distribution(params, S)
    gap = np.abs(gibbs_distribution(prob).probs - exact.probs).max()
    out = [_close("max |fitted Gibbs - product distribution|", gap, 0.0, 1e-8)]
    for s in simplices[3:]:
        out.append(_close(f"P(a|b) for {s}", conditional_probability(exact, s), params.prob(s), 1e-12))
    return out


def suite_dominance(seed: int = 0, p1: float = 0.4, p2: float = 0.6, perturbations: int = 1000, **_) -> list[Check]:
    S = enumerate_space("C_n", 3)
    pk = exact_distribution(KahleParams(3, (p1, p2)), S)
    full = verify_maxent(pk, [f_obs(1), f_obs(2), phi_obs(2)], perturbations, seed=seed)
    partial = verify_maxent(pk, [f_obs(1), f_obs(2)], perturbations, seed=seed)
    return [
        Check("entropy-increasing perturbations with (f1,f2,phi2)", full.violations, 0, 0, full.violations == 0),
        Check("entropy-increasing perturbations with (f1,f2)", partial.violations, 1, 0, partial.violations >= 1, ">="),
    ]


def run_suite(name: str, **kw) -> list[Check]:
    fn = {"a3": suite_a3, "a4": suite_a4, "fig6": suite_multiplicities, "product": suite_product, "dominance": suite_dominance}[name]
    return fn(**kw)
