"""Output probabilities of N single photons on an M-port interferometer.

Photons enter ports ``0 .. N-1`` (0-based throughout the library; the CLI
speaks 1-based ports). An output event is an *ordered* tuple of ports
``l = (l_0, ..., l_{N-1})``; its probability is the rescaled one that sums
to 1 over all ``M**N`` tuples. Occupation-number probabilities follow by
multiplying with ``N! / m!``.

Every mixed-state probability has the same shape. With ``W[k, j]`` the
amplitude for photon ``k`` to land in detection slot ``j`` and
``a_sigma = prod_j W[sigma(j), j]``::

    p = (1/N!) sum_{s1, s2} F(s1^-1 s2) conj(a_s1) a_s2

For setup (a) ``W[k, j] = U[k, l_j]`` and ``F = J``; for setup (b)
``W[k, j] = U[k, l_j] chi_k(t_j)`` and ``F = J~(t; .)``. Note the relative
permutation is ``s1^-1 s2``: the time-resolved ``J~`` is not a class
function, so this ordering matters there. Re-indexing gives the grouped
form ``(1/N!) sum_nu F(nu) per(B_nu)`` with
``B_nu[i, j] = conj(W[i, j]) W[i, nu^-1(j)]``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from . import permgroup
from .distinguishability import group_data, j_a_table, j_b_proper_table
from .errors import DimensionError, SizeLimitError
from .linalg import check_unitary, permanent
from .photon_model import GaussianModel, as_time_tuple, chi_matrix, time_density

MAX_DIRECT_N = 6
MAX_GROUPED_N = 8
MAX_TABLE_CELLS = 2_000_000


@dataclass(frozen=True, eq=False)
class Experiment:
    """A photon model on a validated interferometer (inputs on ports ``0..N-1``)."""

    model: GaussianModel
    unitary: np.ndarray

    def __post_init__(self):
        u = check_unitary(self.unitary)
        if self.model.n_photons > u.shape[0]:
            raise DimensionError(f"{self.model.n_photons} photons do not fit on {u.shape[0]} ports")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def n_photons(self) -> int:
        return self.model.n_photons

    @property
    def n_modes(self) -> int:
        return self.unitary.shape[0]

    @property
    def rows(self) -> np.ndarray:
        """Input rows ``U[0:N, :]``."""
        return self.unitary[: self.n_photons]


def _ports(exp: Experiment, l: Sequence[int]) -> np.ndarray:
    l = np.asarray(l, dtype=np.intp)
    if l.ndim != 1 or l.shape[0] != exp.n_photons:
        raise DimensionError(f"output tuple must have {exp.n_photons} entries")
    if np.any(l < 0) or np.any(l >= exp.n_modes):
        raise DimensionError(f"output ports must lie in 0..{exp.n_modes - 1}, got {tuple(l)}")
    return l


_REL_CACHE: dict[int, np.ndarray] = {}


def _relative(n: int) -> np.ndarray:
    if n not in _REL_CACHE:
        perms, _ = group_data(n)
        rel = permgroup.relative_index(perms)
        rel.setflags(write=False)
        _REL_CACHE[n] = rel
    return _REL_CACHE[n]


def _slot_amplitudes(w: np.ndarray) -> np.ndarray:
    """``a_sigma = prod_j W[sigma(j), j]`` for every sigma."""
    n = w.shape[0]
    perms, _ = group_data(n)
    return np.prod(w[perms, np.arange(n)], axis=1)


def _double_sum(w: np.ndarray, f_weights: np.ndarray) -> float:
    a = _slot_amplitudes(w)
    f = f_weights[_relative(w.shape[0])]
    return float(np.real(np.conj(a) @ f @ a)) / math.factorial(w.shape[0])


def _grouped(w: np.ndarray, f_weights: np.ndarray) -> float:
    n = w.shape[0]
    perms, _ = group_data(n)
    inv = np.argsort(perms, axis=1)
    total = 0.0
    for nu_inv, f in zip(inv, f_weights):
        if f == 0.0:
            continue
        total += f * permanent(np.conj(w) * w[:, nu_inv]).real
    return total / math.factorial(n)


def _mixed(w: np.ndarray, f_weights: np.ndarray, method: str) -> float:
    n = w.shape[0]
    if method == "auto":
        method = "direct" if n <= MAX_DIRECT_N else "grouped"
    if method == "direct":
        if n > MAX_DIRECT_N:
            raise SizeLimitError(f"direct double sum limited to N <= {MAX_DIRECT_N}")
        return _double_sum(w, f_weights)
    if method == "grouped":
        if n > MAX_GROUPED_N:
            raise SizeLimitError(f"grouped permanent sum limited to N <= {MAX_GROUPED_N}")
        return _grouped(w, f_weights)
    raise ValueError(f"unknown method {method!r}")


def prob_a(exp: Experiment, l: Sequence[int], method: str = "auto", mode: str = "exact") -> float:
    """Setup-(a) probability of the ordered output tuple ``l``.

    Parameters
    ----------
    exp : Experiment
    l : sequence of int
        Output ports, 0-based.
    method : {"auto", "direct", "grouped"}
        ``direct`` is the double permutation sum (N <= 6); ``grouped`` sums
        ``J(nu) per(B_nu)`` (N <= 8).
    mode : {"exact", "approx"}
        Purities used in ``J``.
    """
    l = _ports(exp, l)
    w = exp.rows[:, l]
    return _mixed(w, j_a_table(exp.model, exp.n_photons, mode), method)


def prob_a_ideal(exp: Experiment, l: Sequence[int]) -> float:
    """Indistinguishable-photon probability ``|per(U[inputs | l])|^2 / N!``."""
    l = _ports(exp, l)
    return abs(permanent(exp.rows[:, l])) ** 2 / math.factorial(exp.n_photons)


def prob_a_classical(exp: Experiment, l: Sequence[int]) -> float:
    """Fully distinguishable limit ``per(|U[inputs | l]|^2) / N!``."""
    l = _ports(exp, l)
    return permanent(np.abs(exp.rows[:, l]) ** 2).real / math.factorial(exp.n_photons)


def occupation_to_tuple(m: Sequence[int]) -> tuple[int, ...]:
    """Canonical sorted port tuple realising occupation ``m``."""
    return tuple(port for port, c in enumerate(m) for _ in range(int(c)))


def occupation_factor(m: Sequence[int]) -> float:
    """``N! / m!`` converting an ordered-tuple probability to an occupation one."""
    n = sum(int(c) for c in m)
    return math.factorial(n) / math.prod(math.factorial(int(c)) for c in m)


def _check_occupation(exp: Experiment, m: Sequence[int]) -> list[int]:
    m = [int(c) for c in m]
    if len(m) != exp.n_modes or any(c < 0 for c in m):
        raise DimensionError(f"occupation must hold {exp.n_modes} non-negative counts")
    if sum(m) != exp.n_photons:
        raise DimensionError(f"occupation sums to {sum(m)}, expected {exp.n_photons}")
    return m


def prob_a_occupation(exp: Experiment, m: Sequence[int], mode: str = "exact") -> float:
    """Fock-basis probability of occupation numbers ``m`` in setup (a)."""
    m = _check_occupation(exp, m)
    return occupation_factor(m) * prob_a(exp, occupation_to_tuple(m), mode=mode)


def prob_a_ideal_occupation(exp: Experiment, m: Sequence[int]) -> float:
    m = _check_occupation(exp, m)
    return occupation_factor(m) * prob_a_ideal(exp, occupation_to_tuple(m))


def occupations(n_modes: int, n_photons: int):
    """All occupation vectors of ``n_photons`` over ``n_modes`` ports."""
    for combo in itertools.combinations_with_replacement(range(n_modes), n_photons):
        m = [0] * n_modes
        for port in combo:
            m[port] += 1
        yield tuple(m)


def _spatiotemporal(exp: Experiment, l: np.ndarray, t) -> np.ndarray:
    t = as_time_tuple(exp.model, t)
    return exp.rows[:, l] * chi_matrix(exp.model, t)


def prob_b(exp: Experiment, l: Sequence[int], t, method: str = "auto") -> float:
    """Setup-(b) joint density of ports ``l`` at detection times ``t``.

    Density in units of ``T^-N``. Integrating over ``t`` and summing over
    all ordered ``l`` gives 1.
    """
    l = _ports(exp, l)
    w = _spatiotemporal(exp, l, t)
    return _mixed(w, j_b_proper_table(exp.model, np.asarray(t, dtype=float)), method)


def prob_b_ideal(exp: Experiment, l: Sequence[int], t) -> float:
    """Ideal density ``|per(U~[inputs | (l, t)])|^2 / N!`` with ``U~[k, j] = U[k, l_j] chi_k(t_j)``."""
    l = _ports(exp, l)
    return abs(permanent(_spatiotemporal(exp, l, t))) ** 2 / math.factorial(exp.n_photons)


def prob_b_pure_permanent(exp: Experiment, l: Sequence[int], t) -> float:
    """``|per(B)|^2 / N!`` with ``B[j, k] = U[j, l_k] Phi_j(t_k)``, the pure pulse.

    Reference for the ``dtau = 0`` limit of :func:`prob_b`; built from the
    pulse width alone, never from the arrival-time spread.
    """
    l = _ports(exp, l)
    t = as_time_tuple(exp.model, t)
    big_t = exp.model.pulse_width
    w = np.asarray(exp.model.frequencies)
    phi = (math.pi ** -0.25 / math.sqrt(big_t)) * np.exp(
        -1j * w[:, None] * t[None, :] - (t * t)[None, :] / (2.0 * big_t**2)
    )
    return abs(permanent(exp.rows[:, l] * phi)) ** 2 / math.factorial(exp.n_photons)


# -- full tables over all M**N ordered tuples --------------------------------


def _check_table_size(exp: Experiment) -> None:
    n, m = exp.n_photons, exp.n_modes
    if n > MAX_DIRECT_N or math.factorial(n) * m**n > MAX_TABLE_CELLS:
        raise SizeLimitError(f"full output table too large for N={n}, M={m}")


def amplitude_table(exp: Experiment) -> np.ndarray:
    """``A[sigma, l] = prod_j U[sigma(j), l_j]`` over all ordered tuples ``l``.

    Shape ``(N!, M**N)``; ``l`` is flattened in C order of ``(M,) * N``.
    """
    _check_table_size(exp)
    perms, _ = group_data(exp.n_photons)
    u = exp.rows
    a = u[perms[:, 0], :]
    for j in range(1, exp.n_photons):
        a = (a[:, :, None] * u[perms[:, j], None, :]).reshape(a.shape[0], -1)
    return a


def _quadratic_table(a: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``Re sum_{s1, s2} f[.., s1, s2] conj(a[.., s1, l]) a[.., s2, l] / N!``."""
    n_fact = a.shape[-2]
    fa = np.matmul(f, a)
    return np.real(np.sum(np.conj(a) * fa, axis=-2)) / n_fact


def prob_a_table(exp: Experiment, mode: str = "exact", ideal: bool = False) -> np.ndarray:
    """Setup-(a) probabilities for every ordered tuple, shape ``(M,) * N``."""
    a = amplitude_table(exp)
    n = exp.n_photons
    if ideal:
        p = np.abs(np.sum(a, axis=0)) ** 2 / math.factorial(n)
    else:
        p = _quadratic_table(a, j_a_table(exp.model, n, mode)[_relative(n)])
    return p.reshape((exp.n_modes,) * n)


def _phases(exp: Experiment, t: np.ndarray) -> np.ndarray:
    """``exp(-i sum_j omega_sigma(j) t_j)`` per sample and permutation."""
    perms, _ = group_data(exp.n_photons)
    w = np.asarray(exp.model.frequencies)
    return np.exp(-1j * (t @ w[perms].T))


def conditional_tables(exp: Experiment, t, amplitudes: np.ndarray | None = None):
    """Setup-(b) tables divided by ``p(t)``, mixed and ideal.

    Parameters
    ----------
    t : array, shape (N,) or (samples, N)
    amplitudes : array, optional
        Precomputed :func:`amplitude_table`.

    Returns
    -------
    mixed, ideal : ndarray, shape (samples, M**N)
        ``p_l(t) / p(t)`` and ``p°_l(t) / p(t)``; each row sums to 1.
    """
    a = amplitude_table(exp) if amplitudes is None else amplitudes
    t = np.atleast_2d(np.asarray(t, dtype=float))
    n = exp.n_photons
    phase = _phases(exp, t)  # (S, N!)
    b = phase[:, :, None] * a[None, :, :]
    ideal = np.abs(np.sum(b, axis=1)) ** 2 / math.factorial(n)
    f = j_b_proper_table(exp.model, t)[:, _relative(n)]
    mixed = _quadratic_table(b, f)
    return mixed, ideal


def prob_b_table(exp: Experiment, t, ideal: bool = False) -> np.ndarray:
    """Setup-(b) densities at one time tuple for every ordered port tuple."""
    t = as_time_tuple(exp.model, t)
    mixed, pure = conditional_tables(exp, t)
    p = (pure if ideal else mixed)[0] * time_density(exp.model, t)
    return p.reshape((exp.n_modes,) * exp.n_photons)
