"""Gaussian single-photon model.

Each photon is a Gaussian pulse of width ``T`` whose arrival time is itself
Gaussian with standard deviation ``dtau``; all photons share ``(T, dtau)``
and may differ in central frequency. Time is measured in units of ``T``
by convention, so results depend only on ``eta = dtau / (2 T)`` and the
products ``omega_k * T``.

Position-basis kernel of the internal state, derived by averaging the pure
pulse over the arrival-time distribution, with ``S = T**2 + dtau**2``::

    <t|rho|t'> = (pi S)^(-1/2) exp(-(t^2 + t'^2) / (2 S) - eta^2 (t - t')^2 / S)

Products of this kernel along a permutation give the time-resolved
distinguishability function.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from .errors import DimensionError, DomainError

SAMPLE_BLOCK = 4096


@dataclass(frozen=True)
class GaussianModel:
    """Parameters shared by ``n_photons`` Gaussian single photons.

    Parameters
    ----------
    n_photons : int
    pulse_width : float
        ``T > 0``.
    arrival_spread : float
        ``dtau >= 0``, standard deviation of the arrival time.
    frequencies : sequence of float, optional
        Central frequencies, one per photon. Defaults to all zero.
    """

    n_photons: int
    pulse_width: float = 1.0
    arrival_spread: float = 0.0
    frequencies: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if int(self.n_photons) < 1:
            raise DomainError("n_photons must be >= 1")
        object.__setattr__(self, "n_photons", int(self.n_photons))
        if not (self.pulse_width > 0 and math.isfinite(self.pulse_width)):
            raise DomainError(f"pulse width must be positive and finite, got {self.pulse_width}")
        if not (self.arrival_spread >= 0 and math.isfinite(self.arrival_spread)):
            raise DomainError(f"arrival spread must be >= 0 and finite, got {self.arrival_spread}")
        freqs = tuple(float(w) for w in self.frequencies) or (0.0,) * self.n_photons
        if len(freqs) != self.n_photons:
            raise DimensionError(f"{len(freqs)} frequencies given for {self.n_photons} photons")
        if not all(math.isfinite(w) for w in freqs):
            raise DomainError("frequencies must be finite")
        object.__setattr__(self, "frequencies", freqs)

    @property
    def eta(self) -> float:
        return eta(self)

    @property
    def envelope_var(self) -> float:
        """``T**2 + dtau**2``."""
        return self.pulse_width**2 + self.arrival_spread**2

    @classmethod
    def from_config(cls, cfg: dict) -> "GaussianModel":
        """Build from ``{"N": int, "T": real, "dtau": real, "omega": [reals]}``.

        A ``"seed"`` key may be present; it belongs to the caller and is ignored here.
        """
        try:
            n = int(cfg["N"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DimensionError(f"model config needs an integer 'N': {exc}") from exc
        return cls(
            n_photons=n,
            pulse_width=float(cfg.get("T", 1.0)),
            arrival_spread=float(cfg.get("dtau", 0.0)),
            frequencies=tuple(cfg.get("omega") or ()),
        )

    def to_config(self, seed: int | None = None) -> dict:
        cfg = {
            "N": self.n_photons,
            "T": self.pulse_width,
            "dtau": self.arrival_spread,
            "omega": list(self.frequencies),
        }
        if seed is not None:
            cfg["seed"] = seed
        return cfg

    @classmethod
    def from_eta(cls, n_photons: int, eta: float, pulse_width: float = 1.0, frequencies=()):
        return cls(n_photons, pulse_width, 2.0 * eta * pulse_width, tuple(frequencies))


def load_model(path: str | PathLike) -> tuple[GaussianModel, int | None]:
    with open(path) as fh:
        cfg = json.load(fh)
    return GaussianModel.from_config(cfg), cfg.get("seed")


def eta(model: GaussianModel) -> float:
    """Relative arrival-time uncertainty ``dtau / (2 T)``."""
    return model.arrival_spread / (2.0 * model.pulse_width)


def x_squared(eta: float) -> tuple[float, float]:
    """``(X_+^2, X_-^2)`` of the closed-form purity.

    ``X_-^2`` is written without the ``1 - s`` cancellation so it stays
    accurate as ``eta -> 0``.
    """
    e2 = eta * eta
    a = 1.0 + 2.0 * e2
    r = math.sqrt(1.0 + 4.0 * e2)
    s = r / a
    xm2 = 2.0 * e2 * e2 / (a * (a + r))
    return 0.5 * (1.0 + s), xm2


def purity_order_n(eta: float, n: int) -> float:
    """Higher-order purity ``Tr(rho^n)`` of the Gaussian mixed state.

    ``(1 + 2 eta^2)^(-n/2) / (X_+^n - X_-^n)``, evaluated in log space with
    the ``X_+^n`` factor pulled out.
    """
    if n < 1:
        raise DomainError("purity order must be >= 1")
    if eta < 0 or not math.isfinite(eta):
        raise DomainError("eta must be finite and >= 0")
    if n == 1 or eta == 0.0:
        return 1.0
    xp2, xm2 = x_squared(eta)
    ratio_n = (xm2 / xp2) ** (n / 2.0)
    log_tr = -0.5 * n * math.log1p(2.0 * eta * eta) - 0.5 * n * math.log(xp2) - math.log1p(-ratio_n)
    return math.exp(log_tr)


def purity_approx(eta: float, n: int) -> float:
    """Exponential approximation ``exp(-n eta^2)`` of ``Tr(rho^n)``."""
    if n < 1:
        raise DomainError("purity order must be >= 1")
    return math.exp(-n * eta * eta)


def purity_circulant(eta: float, n: int) -> np.ndarray:
    """Generator of the circulant quadratic form whose determinant gives ``Tr(rho^n)^-2``.

    Diagonal ``1 + 2 eta^2`` and ``-eta^2`` on both cyclic neighbours. For
    ``n = 2`` the two neighbours coincide and merge into ``-2 eta^2``; for
    ``n = 1`` the form is just ``[1]``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    e2 = eta * eta
    a = np.zeros(n)
    if n == 1:
        a[0] = 1.0
    elif n == 2:
        a[:] = (1.0 + 2.0 * e2, -2.0 * e2)
    else:
        a[0] = 1.0 + 2.0 * e2
        a[1] = a[-1] = -e2
    return a


def rho_kernel(model: GaussianModel, t, t_prime):
    """Time-basis matrix element ``<t|rho|t'>`` (broadcasts over arrays)."""
    s = model.envelope_var
    t = np.asarray(t, dtype=float)
    tp = np.asarray(t_prime, dtype=float)
    e2 = eta(model) ** 2
    out = np.exp(-(t * t + tp * tp) / (2.0 * s) - e2 * (t - tp) ** 2 / s) / math.sqrt(math.pi * s)
    return out[()] if out.ndim == 0 else out


def chi(model: GaussianModel, k: int, t):
    """Envelope state of photon ``k`` (0-based) at time ``t``.

    ``(pi S)^(-1/4) exp(-i omega_k t - t^2 / (2 S))``; its squared modulus
    is the marginal detection-time density of one photon.
    """
    if not 0 <= k < model.n_photons:
        raise DimensionError(f"photon index {k} out of range for N={model.n_photons}")
    s = model.envelope_var
    t = np.asarray(t, dtype=float)
    out = (math.pi * s) ** -0.25 * np.exp(-1j * model.frequencies[k] * t - t * t / (2.0 * s))
    return out[()] if out.ndim == 0 else out


def chi_matrix(model: GaussianModel, t) -> np.ndarray:
    """``C[k, j] = chi_k(t_j)`` for a time tuple ``t`` of length N."""
    t = as_time_tuple(model, t)
    s = model.envelope_var
    w = np.asarray(model.frequencies)
    return (math.pi * s) ** -0.25 * np.exp(-1j * w[:, None] * t[None, :] - (t * t)[None, :] / (2.0 * s))


def as_time_tuple(model: GaussianModel, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.shape[0] != model.n_photons:
        raise DimensionError(f"time tuple must have length {model.n_photons}, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise DomainError("time tuple entries must be finite")
    return t


def log_time_density(model: GaussianModel, t):
    """Log of :func:`time_density`; accepts ``(N,)`` or ``(samples, N)``."""
    t = np.asarray(t, dtype=float)
    if t.shape[-1] != model.n_photons:
        raise DimensionError(f"time tuples must have length {model.n_photons}")
    s = model.envelope_var
    n = model.n_photons
    return -0.5 * n * math.log(math.pi * s) - np.sum(t * t, axis=-1) / s


def time_density(model: GaussianModel, t):
    """Joint detection-time density ``prod_k |chi_k(t_k)|^2``.

    Independent of the output ports and of the frequencies. Units ``T^-N``.
    """
    out = np.exp(log_time_density(model, t))
    return out[()] if np.ndim(out) == 0 else out


def sample_times(model: GaussianModel, seed: int, count: int, start: int = 0) -> np.ndarray:
    """Draw detection-time tuples from :func:`time_density`.

    Returns an array of shape ``(count, N)`` holding samples
    ``start .. start + count - 1`` of the stream for ``seed``. Samples are
    produced in fixed blocks, each from its own counter-based generator keyed
    on ``(seed, block)``, so sample ``i`` does not depend on how the stream is
    split across calls or workers.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if start < 0:
        raise DomainError("start must be >= 0")
    n = model.n_photons
    scale = math.sqrt(model.envelope_var / 2.0)
    out = np.empty((count, n))
    stop = start + count
    first, last = start // SAMPLE_BLOCK, (stop - 1) // SAMPLE_BLOCK
    for block in range(first, last + 1):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), block])))
        z = rng.standard_normal((SAMPLE_BLOCK, n))
        lo = max(start, block * SAMPLE_BLOCK)
        hi = min(stop, (block + 1) * SAMPLE_BLOCK)
        out[lo - start:hi - start] = z[lo - block * SAMPLE_BLOCK:hi - block * SAMPLE_BLOCK]
    return scale * out
