"""Distinguishability functions over the permutation group and the measure d_s.

Setup (a), no time resolution: ``J(sigma)`` is a product of higher-order
purities over the cycles of ``sigma``. Setup (b), sharp time resolution:
``J(t; sigma)`` is a product of time-basis kernel elements, and the
*proper* function ``J~(t; sigma) = J(t; sigma) / p(t)`` has unit weight on
the identity for every ``t``.

``d_s`` (probability that the photons behave as fully indistinguishable)
is available three ways: exact group average of ``J``, the closed form
built on the exponential purity approximation, and Monte-Carlo averaging
of the conditional value ``lambda(t)`` over detection times.
"""

from __future__ import annotations

import functools
import math
from collections.abc import Iterator, Sequence

import numpy as np

from . import permgroup
from .errors import DimensionError, DomainError, NumericRangeError, SizeLimitError
from .photon_model import (
    GaussianModel,
    as_time_tuple,
    log_time_density,
    purity_approx,
    purity_order_n,
    sample_times,
)

MAX_EXACT_N = 10
MAX_MC_N = 8
MODES = ("exact", "approx")


def _eta_of(model_or_eta) -> float:
    if isinstance(model_or_eta, GaussianModel):
        return model_or_eta.eta
    e = float(model_or_eta)
    if e < 0 or not math.isfinite(e):
        raise DomainError("eta must be finite and >= 0")
    return e


def _purity(eta: float, n: int, mode: str) -> float:
    if mode == "exact":
        return purity_order_n(eta, n)
    if mode == "approx":
        return purity_approx(eta, n)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def j_from_cycle_type(eta: float, counts: Sequence[int], mode: str = "exact") -> float:
    """``prod_{n>=2} Tr(rho^n)^{C_n}`` for a cycle-count vector."""
    if mode == "approx":
        # exp(-eta^2 (N - C_1))
        n_total = sum(n * c for n, c in enumerate(counts))
        return math.exp(-eta * eta * (n_total - counts[1]))
    out = 1.0
    for n, c in enumerate(counts):
        if n >= 2 and c:
            out *= _purity(eta, n, mode) ** c
    return out


def j_a(model, sigma: Sequence[int], mode: str = "exact") -> float:
    """Setup-(a) distinguishability function ``J(sigma)``.

    Parameters
    ----------
    model : GaussianModel or float
        Model, or ``eta`` directly; only ``eta`` matters here.
    sigma : permutation tuple
    mode : {"exact", "approx"}
        Exact purities, or ``exp(-n eta^2)`` for each n-cycle.
    """
    eta = _eta_of(model)
    return j_from_cycle_type(eta, permgroup.cycle_type(permgroup.validate(sigma)), mode)


@functools.lru_cache(maxsize=None)
def group_data(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached ``(perms, counts)`` for ``S_n``: permutations and their cycle types."""
    perms = permgroup.group_array(n)
    counts = np.array([permgroup.cycle_type(p) for p in map(tuple, perms)], dtype=np.intp)
    perms.setflags(write=False)
    counts.setflags(write=False)
    return perms, counts


def j_a_table(model, n: int, mode: str = "exact") -> np.ndarray:
    """``J(sigma)`` for every row of ``group_data(n)[0]``."""
    eta = _eta_of(model)
    _, counts = group_data(n)
    if mode == "approx":
        return np.exp(-eta * eta * (n - counts[:, 1]))
    logs = np.array([0.0, 0.0] + [math.log(_purity(eta, k, mode)) for k in range(2, n + 1)])
    return np.exp(counts @ logs)


def _check_sigma(model: GaussianModel, sigma) -> np.ndarray:
    sigma = permgroup.validate(sigma)
    if len(sigma) != model.n_photons:
        raise DimensionError(f"permutation has {len(sigma)} elements, model has {model.n_photons} photons")
    return np.asarray(sigma, dtype=np.intp)


def _sq_displacement(t: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    return np.sum((t - t[..., sigma]) ** 2, axis=-1)


def j_b_raw(model: GaussianModel, t, sigma: Sequence[int]) -> float:
    """Time-resolved distinguishability function ``J(t; sigma)``.

    ``(pi S)^(-N/2) exp(-sum t_k^2 / S - eta^2 sum (t_k - t_sigma(k))^2 / S)``,
    equal to ``prod_k <t_k|rho|t_sigma(k)>``. At the identity it reduces to
    the detection-time density.
    """
    t = as_time_tuple(model, t)
    sig = _check_sigma(model, sigma)
    s = model.envelope_var
    log_val = log_time_density(model, t) - model.eta**2 * _sq_displacement(t, sig) / s
    return float(np.exp(log_val))


def j_b_proper(model: GaussianModel, t, sigma: Sequence[int]) -> float:
    """Proper time-resolved function ``J~(t; sigma) = J(t; sigma) / p(t)``.

    Evaluated in closed form, ``exp(-eta^2 sum (t_k - t_sigma(k))^2 / S)``.

    Raises
    ------
    NumericRangeError
        When ``p(t)`` underflows, i.e. the conditioning event has numerically
        zero density.
    """
    t = as_time_tuple(model, t)
    sig = _check_sigma(model, sigma)
    if log_time_density(model, t) < math.log(np.finfo(float).tiny):
        raise NumericRangeError("detection-time density underflows at this time tuple")
    return float(np.exp(-model.eta**2 * _sq_displacement(t, sig) / model.envelope_var))


def j_b_proper_table(model: GaussianModel, t) -> np.ndarray:
    """``J~(t; sigma)`` for all ``sigma`` in ``group_data(N)`` order.

    ``t`` may be one tuple ``(N,)`` or a batch ``(samples, N)``; the result
    has a trailing axis of length ``N!``.
    """
    perms, _ = group_data(model.n_photons)
    t = np.asarray(t, dtype=float)
    disp = np.sum((t[..., None, :] - t[..., perms]) ** 2, axis=-1)
    return np.exp(-model.eta**2 * disp / model.envelope_var)


def _chunks(total: int, size: int) -> Iterator[tuple[int, int]]:
    for lo in range(0, total, size):
        yield lo, min(total, lo + size)


def lambda_t(model: GaussianModel, t) -> float | np.ndarray:
    """Conditional indistinguishability ``lambda(t) = (1/N!) sum_sigma J~(t; sigma)``.

    Accepts one tuple or a ``(samples, N)`` batch.
    """
    n = model.n_photons
    if n > MAX_EXACT_N:
        raise SizeLimitError(f"lambda(t) needs a group sum; N={n} exceeds {MAX_EXACT_N}")
    t = np.asarray(t, dtype=float)
    if t.shape[-1] != n:
        raise DimensionError(f"time tuples must have length {n}")
    if t.ndim == 1:
        return float(np.mean(j_b_proper_table(model, t)))
    out = np.empty(t.shape[0])
    step = max(1, 2_000_000 // (math.factorial(n) * n))
    for lo, hi in _chunks(t.shape[0], step):
        out[lo:hi] = np.mean(j_b_proper_table(model, t[lo:hi]), axis=-1)
    return out


def _partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def ds_exact(model, n_photons: int | None = None, mode: str = "exact") -> float:
    """``d_s = (1/N!) sum_sigma J(sigma)`` with exact purities.

    ``J`` is a class function, so the sum runs over cycle types weighted by
    class size ``N! / prod n^{C_n} C_n!``.

    Parameters
    ----------
    model : GaussianModel or float
        Model, or ``eta`` (then ``n_photons`` is required).
    n_photons : int, optional
    mode : {"exact", "approx"}
    """
    eta = _eta_of(model)
    n = model.n_photons if isinstance(model, GaussianModel) else n_photons
    if n is None or n < 1:
        raise DomainError("n_photons must be >= 1")
    if n > MAX_EXACT_N:
        raise SizeLimitError(f"exact d_s limited to N <= {MAX_EXACT_N}; use ds_closed_form for N={n}")
    total = 0.0
    for part in _partitions(n):
        counts = [0] * (n + 1)
        for k in part:
            counts[k] += 1
        inv_class = 1.0  # |class| / N!
        for k, c in enumerate(counts):
            if c:
                inv_class /= k**c * math.factorial(c)
        total += inv_class * j_from_cycle_type(eta, counts, mode)
    return total


def ds_closed_form(n_photons: int, eta: float) -> float:
    """``exp(-eta^2 N) sum_{k=0}^{N} (e^{eta^2} - 1)^k / k!``.

    Uses the exponential purity approximation; cheap for any ``N``.
    """
    if n_photons < 1:
        raise DomainError("n_photons must be >= 1")
    eta = _eta_of(eta)
    e2 = eta * eta
    return math.exp(-e2 * n_photons) * permgroup.z_fixed_point_sum(n_photons, math.exp(e2))


def ds_monte_carlo(model: GaussianModel, seed: int, samples: int) -> tuple[float, float]:
    """Estimate ``d_s`` as the mean of ``lambda(t)`` over ``t ~ p(t)``.

    Returns
    -------
    estimate, std_error : float
        Sample mean and standard error of the mean.
    """
    n = model.n_photons
    if n > MAX_MC_N:
        raise SizeLimitError(f"Monte-Carlo d_s limited to N <= {MAX_MC_N}")
    if samples < 100:
        raise DomainError("need at least 100 samples")
    t = sample_times(model, seed, samples)
    lam = lambda_t(model, t)
    return float(np.mean(lam)), float(np.std(lam, ddof=1) / math.sqrt(samples))
