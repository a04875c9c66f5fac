"""Distances to the ideal (fully indistinguishable) output distributions.

Both setups are compared with their own ideal case. In both, the total
variation distance is bounded by ``1 - d_s``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .distinguishability import ds_closed_form, ds_exact
from .errors import DomainError, SizeLimitError
from .interference import (
    Experiment,
    amplitude_table,
    conditional_tables,
    occupations,
    prob_a_ideal_occupation,
    prob_a_occupation,
    prob_a_table,
)
from .photon_model import purity_order_n, sample_times

MAX_TVD_N = 4
MAX_TVD_M = 8
MC_BATCH = 32


def _check_limits(exp: Experiment) -> None:
    if exp.n_photons > MAX_TVD_N or exp.n_modes > MAX_TVD_M:
        raise SizeLimitError(
            f"TVD enumeration limited to N <= {MAX_TVD_N}, M <= {MAX_TVD_M} "
            f"(got N={exp.n_photons}, M={exp.n_modes})"
        )


def tvd_a(exp: Experiment, mode: str = "exact") -> float:
    """Total variation distance of setup (a) from its ideal, over ordered tuples."""
    _check_limits(exp)
    p = prob_a_table(exp, mode)
    q = prob_a_table(exp, ideal=True)
    return 0.5 * float(np.sum(np.abs(p - q)))


def tvd_a_occupation(exp: Experiment, mode: str = "exact") -> float:
    """Same distance summed over occupation numbers instead of ordered tuples."""
    _check_limits(exp)
    total = 0.0
    for m in occupations(exp.n_modes, exp.n_photons):
        total += abs(prob_a_occupation(exp, m, mode) - prob_a_ideal_occupation(exp, m))
    return 0.5 * total


def tvd_b(exp: Experiment, seed: int, samples: int) -> tuple[float, float]:
    """Monte-Carlo total variation distance of setup (b) from its ideal.

    Detection times are drawn from ``p(t)`` itself, so each sample
    contributes ``0.5 * sum_l |p_l(t) - p°_l(t)| / p(t)``, a number in
    ``[0, 1]``.

    Returns
    -------
    estimate, std_error : float
    """
    _check_limits(exp)
    if samples < 1000:
        raise DomainError("tvd_b needs at least 1000 samples")
    a = amplitude_table(exp)
    t = sample_times(exp.model, seed, samples)
    vals = np.empty(samples)
    for lo in range(0, samples, MC_BATCH):
        hi = min(samples, lo + MC_BATCH)
        mixed, ideal = conditional_tables(exp, t[lo:hi], a)
        vals[lo:hi] = 0.5 * np.sum(np.abs(mixed - ideal), axis=1)
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(samples))


def _check_purity(purity: float) -> None:
    if not 0.0 < purity <= 1.0:
        raise DomainError(f"purity must lie in (0, 1], got {purity}")


def deviation_bound(n_photons: int, purity: float) -> float:
    """``1 - d_s`` expressed through the single-photon purity ``P = Tr(rho^2)``.

    ``1 - P^((N-1)/2) (1 + sum_{n=2}^{N} (1 - sqrt P)^n / (n! P^((n-1)/2)))``,
    which is the closed-form ``d_s`` rewritten with ``P = exp(-2 eta^2)``.
    """
    if n_photons < 1:
        raise DomainError("n_photons must be >= 1")
    _check_purity(purity)
    r = math.sqrt(purity)
    total = 1.0
    term = 1.0 - r  # (1 - r)^n / (n! r^(n-1)) at n = 1
    for n in range(2, n_photons + 1):
        term *= (1.0 - r) / (n * r)
        total += term
    return 1.0 - purity ** ((n_photons - 1) / 2.0) * total


def required_purity(n_photons: int, target_deviation: float, tol: float = 1e-12) -> float:
    """Smallest purity whose deviation bound does not exceed ``target_deviation``.

    Bisection on ``P``; the bound decreases monotonically to 0 at ``P = 1``.
    Targets at the supremum of the bound (within 1e-9) resolve to the
    bottom of the purity range.
    """
    if not 0.0 < target_deviation < 1.0:
        raise DomainError("target deviation must lie in (0, 1)")
    if n_photons < 2:
        raise DomainError("a single photon has zero deviation for every purity; target unreachable")
    lo, hi = 1e-12, 1.0
    # the bound rises towards a finite supremum as P -> 0 (1/2 at N = 2)
    sup = deviation_bound(n_photons, lo)
    if sup < target_deviation - 1e-9:
        raise DomainError(
            f"target {target_deviation} exceeds the largest attainable deviation {sup:.9g} for N={n_photons}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if deviation_bound(n_photons, mid) > target_deviation:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def purity_to_eta(purity: float) -> float:
    """``eta`` with ``exp(-2 eta^2) = P``."""
    _check_purity(purity)
    return math.sqrt(-math.log(purity) / 2.0)


@dataclass(frozen=True)
class DistSummary:
    """Distances, ``d_s`` and the bound for one experiment."""

    d_a: float
    d_b: float
    d_b_err: float
    ds: float
    bound: float
    purity: float
    ds_route: str

    @property
    def bound_a_ok(self) -> bool:
        return self.d_a <= self.bound + 1e-9

    @property
    def bound_b_ok(self) -> bool:
        return self.d_b <= self.bound + 3.0 * self.d_b_err

    def to_dict(self) -> dict:
        out = asdict(self)
        out["bound_a_ok"] = self.bound_a_ok
        out["bound_b_ok"] = self.bound_b_ok
        return out


def summarize(exp: Experiment, seed: int, samples: int, ds_route: str = "exact") -> DistSummary:
    """Compute both distances and the ``1 - d_s`` bound.

    ``ds_route`` selects ``"exact"`` (group average with exact purities) or
    ``"closed"`` (exponential approximation); the two differ measurably once
    ``eta`` approaches 0.1.
    """
    eta = exp.model.eta
    n = exp.n_photons
    if ds_route == "exact":
        ds = ds_exact(eta, n)
    elif ds_route == "closed":
        ds = ds_closed_form(n, eta)
    else:
        raise ValueError(f"unknown d_s route {ds_route!r}")
    d_b, err = tvd_b(exp, seed, samples)
    return DistSummary(
        d_a=tvd_a(exp),
        d_b=d_b,
        d_b_err=err,
        ds=ds,
        bound=1.0 - ds,
        purity=purity_order_n(eta, 2),
        ds_route=ds_route,
    )
