"""Brute-force references that share no closed form with the main paths.

* time-grid discretisation of the density operator (matrix powers and
  chained traces of the sampled kernel),
* tensor Gauss-Hermite quadrature over detection times,
* Gauss-Hermite averaging over photon arrival times of pure-state
  permanents, which rebuilds the mixed-state density from its definition.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import permgroup
from .errors import DimensionError, GridSpanWarning, SizeLimitError
from .interference import Experiment, _ports
from .photon_model import GaussianModel, as_time_tuple, rho_kernel

MAX_GRID_N = 3
MAX_QUAD_ORDER = 64
MAX_GRID_MATRIX = 4000


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on ``[t_min, t_max]`` with ``points`` nodes."""

    t_min: float
    t_max: float
    points: int = 400

    def __post_init__(self):
        if not self.t_max > self.t_min:
            raise DimensionError("t_max must exceed t_min")
        if self.points < 16:
            raise DimensionError("a time grid needs at least 16 points")
        if self.points > MAX_GRID_MATRIX:
            raise SizeLimitError(f"grid limited to {MAX_GRID_MATRIX} points")

    @property
    def step(self) -> float:
        return (self.t_max - self.t_min) / (self.points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.points)

    @classmethod
    def default(cls, envelope_var: float, points: int = 400) -> "TimeGrid":
        half = 8.0 * math.sqrt(envelope_var)
        return cls(-half, half, points)


def _check_span(grid: TimeGrid, envelope_var: float) -> None:
    sd = math.sqrt(envelope_var / 2.0)  # std of the diagonal <t|rho|t>
    if -grid.t_min < 3.0 * sd or grid.t_max < 3.0 * sd:
        warnings.warn(
            f"grid [{grid.t_min}, {grid.t_max}] spans fewer than 6 standard deviations ({sd:.3g} each)",
            GridSpanWarning,
            stacklevel=3,
        )


def kernel_matrix(model: GaussianModel, grid: TimeGrid) -> np.ndarray:
    """``K[i, j] = <t_i|rho|t_j> * step`` on the grid."""
    _check_span(grid, model.envelope_var)
    t = grid.nodes
    return rho_kernel(model, t[:, None], t[None, :]) * grid.step


def grid_purity(model: GaussianModel, n: int, grid: TimeGrid | None = None) -> float:
    """``Tr(rho^n)`` as the trace of the n-th power of the sampled kernel."""
    if n < 1:
        raise DimensionError("purity order must be >= 1")
    grid = grid or TimeGrid.default(model.envelope_var)
    k = kernel_matrix(model, grid)
    return float(np.trace(np.linalg.matrix_power(k, n)))


def quad_j_integral(model: GaussianModel, sigma: Sequence[int], order: int = 48) -> float:
    """``int dt J(t; sigma)`` over all of ``R^N`` by tensor Gauss-Hermite quadrature.

    Variables are scaled by ``sqrt(T^2 + dtau^2)`` so the Gaussian envelope of
    the integrand matches the Hermite weight; the integrand itself is built
    as the kernel product ``prod_k <t_k|rho|t_sigma(k)>``.
    """
    sigma = permgroup.validate(sigma)
    n = model.n_photons
    if len(sigma) != n:
        raise DimensionError("permutation size differs from photon number")
    if n > MAX_GRID_N:
        raise SizeLimitError(f"tensor quadrature limited to N <= {MAX_GRID_N}")
    if not 1 <= order <= MAX_QUAD_ORDER:
        raise SizeLimitError(f"quadrature order must be in 1..{MAX_QUAD_ORDER}")
    x, w = np.polynomial.hermite.hermgauss(order)
    scale = math.sqrt(model.envelope_var)
    axes = np.meshgrid(*([x] * n), indexing="ij")
    t = [scale * ax for ax in axes]
    integrand = np.ones_like(axes[0])
    for k in range(n):
        integrand = integrand * rho_kernel(model, t[k], t[sigma[k]])
    # undo the Hermite weight exp(-sum x^2) and the change of variables
    integrand = integrand * np.exp(sum(ax * ax for ax in axes)) * scale**n
    weights = np.ones_like(axes[0])
    for ax_w in np.meshgrid(*([w] * n), indexing="ij"):
        weights = weights * ax_w
    return float(np.sum(weights * integrand))


def grid_j_a_general(params: Sequence[tuple[float, float]], sigma: Sequence[int],
                     grid: TimeGrid | None = None) -> float:
    """``J(sigma) = Tr(P_sigma^dagger rho_1 x ... x rho_N)`` for per-photon ``(T_k, dtau_k)``.

    Factorises over the cycles of ``sigma``: a cycle ``(i, sigma(i), ...)``
    contributes ``Tr(K_i K_sigma(i) ...)``, with ``K_k`` the sampled kernel of
    photon ``k``.
    """
    sigma = permgroup.validate(sigma)
    if len(params) != len(sigma):
        raise DimensionError("need one (T, dtau) pair per photon")
    if len(sigma) > MAX_GRID_N:
        raise SizeLimitError(f"grid oracle limited to N <= {MAX_GRID_N}")
    models = [GaussianModel(1, float(tw), float(dt)) for tw, dt in params]
    if grid is None:
        grid = TimeGrid.default(max(m.envelope_var for m in models))
    kernels = [kernel_matrix(m, grid) for m in models]
    out = 1.0
    for cyc in permgroup.cycles(sigma):
        prod = kernels[cyc[0]]
        for k in cyc[1:]:
            prod = prod @ kernels[k]
        out *= float(np.trace(prod))
    return out


def mixture_prob_b(exp: Experiment, l: Sequence[int], t, order: int = 24) -> float:
    """Setup-(b) density from its definition as an arrival-time average.

    For fixed arrival times ``tau`` the photons are pure and the density is
    ``|per(B(tau))|^2 / N!`` with ``B[k, j] = U[k, l_j] Phi_{k, tau_k}(t_j)``;
    averaging over Gaussian ``tau`` by tensor Gauss-Hermite quadrature gives
    the mixed-state density with no distinguishability function involved.
    """
    l = _ports(exp, l)
    model = exp.model
    t = as_time_tuple(model, t)
    n = model.n_photons
    if n > 4:
        raise SizeLimitError("arrival-time quadrature limited to N <= 4")
    big_t = model.pulse_width
    if model.arrival_spread == 0.0:
        x, w = np.zeros(1), np.ones(1)
    else:
        x, w = np.polynomial.hermite.hermgauss(order)
        w = w / math.sqrt(math.pi)
    tau = model.arrival_spread * x  # (q,)
    omega = np.asarray(model.frequencies)
    # phi[k, j, q] = U[k, l_j] Phi_{k, tau_q}(t_j)
    phi = (
        exp.rows[:, l][:, :, None]
        * math.pi ** -0.25 / math.sqrt(big_t)
        * np.exp(-1j * omega[:, None, None] * t[None, :, None]
                 - (t[None, :, None] - tau[None, None, :]) ** 2 / (2.0 * big_t**2))
    )
    per = np.zeros((len(x),) * n, dtype=complex)
    for p in permgroup.iterate_group(n):
        slot_of = permgroup.inverse(p)  # photon k sits in slot slot_of[k]
        term = np.ones((), dtype=complex)
        for k in range(n):
            term = np.multiply.outer(term, phi[k, slot_of[k]])
        per += term
    weight = np.ones(())
    for _ in range(n):
        weight = np.multiply.outer(weight, w)
    return float(np.sum(weight * np.abs(per) ** 2)) / math.factorial(n)
