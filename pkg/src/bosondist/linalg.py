"""Complex linear-algebra kernels.

Matrix permanents (Glynn and Ryser, both with Gray-code updates, plus a
naive reference), Haar-random unitaries, unitarity validation, circulant
determinants, and the JSON wire format for interferometer matrices.
"""

from __future__ import annotations

import itertools
import json
import math
from os import PathLike

import numpy as np

from .errors import DimensionError, SizeLimitError, UnitarityError

UNITARITY_TOL = 1e-10
MAX_PERMANENT_SIZE = 30
MAX_NAIVE_SIZE = 9


def as_complex_matrix(m, name="matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array or raise."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} has non-finite entries")
    return arr


def _as_square(m) -> np.ndarray:
    arr = as_complex_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {arr.shape}")
    return arr


def unitarity_residual(u) -> float:
    """Max-norm of ``U^dagger U - I``."""
    u = as_complex_matrix(u, "unitary")
    if u.shape[0] != u.shape[1]:
        return math.inf
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def check_unitary(u, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Validate ``u`` as a unitary matrix and return it as a complex array.

    Matrices failing the check are rejected, never repaired.

    Raises
    ------
    UnitarityError
        If ``u`` is not square or ``max|U^dagger U - I| > tol``.
    """
    arr = as_complex_matrix(u, "unitary")
    if arr.shape[0] != arr.shape[1]:
        raise UnitarityError(f"unitary must be square, got shape {arr.shape}")
    res = unitarity_residual(arr)
    if res > tol:
        raise UnitarityError(f"matrix is not unitary: residual {res:.3e} > {tol:.0e}", res)
    return arr


def _glynn(a: np.ndarray) -> complex:
    n = a.shape[0]
    rows = [[complex(x) for x in row] for row in a]
    # delta starts at all +1, so the running vector holds the column sums
    v = [sum(rows[k][j] for k in range(n)) for j in range(n)]
    delta = [1] * n
    sign = 1
    total = 0j
    p = 1 + 0j
    for x in v:
        p *= x
    total += p
    for i in range(1, 1 << (n - 1)):
        k = (i & -i).bit_length()  # flipped row, row 0 stays fixed at +1
        rk = rows[k]
        if delta[k] == 1:
            for j in range(n):
                v[j] -= 2 * rk[j]
        else:
            for j in range(n):
                v[j] += 2 * rk[j]
        delta[k] = -delta[k]
        sign = -sign
        p = 1 + 0j
        for x in v:
            p *= x
        total += sign * p
    return total / (1 << (n - 1))


def _ryser(a: np.ndarray) -> complex:
    n = a.shape[0]
    cols = [[complex(a[i, j]) for i in range(n)] for j in range(n)]
    sums = [0j] * n  # row sums over the current column subset
    in_set = [False] * n
    total = 0j
    size = 0
    for i in range(1, 1 << n):
        j = (i & -i).bit_length() - 1
        cj = cols[j]
        if in_set[j]:
            for r in range(n):
                sums[r] -= cj[r]
            size -= 1
        else:
            for r in range(n):
                sums[r] += cj[r]
            size += 1
        in_set[j] = not in_set[j]
        p = 1 + 0j
        for x in sums:
            p *= x
        total += -p if size & 1 else p
    return total if n % 2 == 0 else -total


def permanent(m, method: str = "glynn") -> complex:
    """Permanent of a square complex matrix.

    Parameters
    ----------
    m : array_like, shape (N, N)
    method : {"glynn", "ryser"}
        Both run in O(2^N N) with Gray-code ordering. Glynn is the default;
        Ryser is kept as an independent fast path for cross-checks.

    Returns
    -------
    complex
    """
    a = _as_square(m)
    n = a.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise SizeLimitError(f"permanent size {n} exceeds {MAX_PERMANENT_SIZE}")
    if n == 1:
        return complex(a[0, 0])
    if method == "glynn":
        return _glynn(a)
    if method == "ryser":
        return _ryser(a)
    raise ValueError(f"unknown permanent method {method!r}")


def permanent_naive(m) -> complex:
    """Permanent by direct expansion over all N! permutations (N <= 9)."""
    a = _as_square(m)
    n = a.shape[0]
    if n > MAX_NAIVE_SIZE:
        raise SizeLimitError(f"naive permanent limited to N <= {MAX_NAIVE_SIZE}, got {n}")
    rows = np.arange(n)
    total = 0j
    for cols in itertools.permutations(range(n)):
        total += np.prod(a[rows, list(cols)])
    return complex(total)


def haar_unitary(m: int, seed=None) -> np.ndarray:
    """Haar-distributed ``m x m`` unitary.

    QR decomposition of a complex Ginibre matrix, with the phases of the
    diagonal of R moved into Q so the result is exactly Haar. The same
    ``(m, seed)`` always yields a bit-identical matrix.
    """
    if m < 1:
        raise DimensionError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def beam_splitter_50_50() -> np.ndarray:
    """Balanced beam splitter ``[[1, 1], [1, -1]] / sqrt(2)``.

    Real convention: the second diagonal entry carries the minus sign.
    """
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def circulant_matrix(a) -> np.ndarray:
    """Dense circulant with first column ``a`` (``A[i, j] = a[(i - j) mod n]``)."""
    a = np.asarray(a)
    n = a.shape[0]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return a[idx]


def circulant_det(a) -> float:
    """Determinant of the real circulant matrix generated by ``a``.

    Evaluates ``prod_j f(xi^j)`` with ``f(x) = sum_k a_k x^k`` and
    ``xi = exp(2 pi i / n)``. For real generators the product is real up to
    rounding; the imaginary residue is dropped.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.shape[0] < 1:
        raise DimensionError("circulant generator must be a non-empty vector")
    n = a.shape[0]
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    powers = roots[:, None] ** np.arange(n)[None, :]
    return float(np.prod(powers @ a).real)


def unitary_to_json(u) -> dict:
    """Wire form ``{"m": M, "re": [[...]], "im": [[...]]}``."""
    u = as_complex_matrix(u, "unitary")
    return {"m": int(u.shape[0]), "re": u.real.tolist(), "im": u.imag.tolist()}


def unitary_from_json(obj: dict, tol: float = UNITARITY_TOL) -> np.ndarray:
    """Parse the wire form produced by :func:`unitary_to_json` and validate it."""
    try:
        m = int(obj["m"])
        u = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed unitary JSON: {exc}") from exc
    if u.shape != (m, m):
        raise DimensionError(f"unitary JSON declares m={m} but holds shape {u.shape}")
    return check_unitary(u, tol)


def save_unitary(path: str | PathLike, u) -> None:
    with open(path, "w") as fh:
        json.dump(unitary_to_json(u), fh)


def load_unitary(path: str | PathLike, tol: float = UNITARITY_TOL) -> np.ndarray:
    with open(path) as fh:
        return unitary_from_json(json.load(fh), tol)
