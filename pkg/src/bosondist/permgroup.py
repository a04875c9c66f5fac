"""Permutations of N objects as plain tuples.

A permutation ``p`` is a tuple of targets: element in slot ``k`` goes to
``p[k]`` (0-based). Composition is right-to-left, ``compose(p, q)[k] ==
p[q[k]]``. Acting on a tuple of times, the permuted tuple has ``t[inv[k]]``
in slot ``k``::

    p = (1, 2, 0)              # 0 -> 1, 1 -> 2, 2 -> 0
    act(p, ("a", "b", "c"))    # ("c", "a", "b")
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence

import numpy as np

from .errors import DimensionError, DomainError, SizeLimitError

MAX_GROUP_SIZE = 10

Permutation = tuple[int, ...]


def validate(p: Sequence[int]) -> Permutation:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(len(p))):
        raise DimensionError(f"{p} is not a permutation of 0..{len(p) - 1}")
    return p


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """``p o q``: apply ``q`` first, then ``p``."""
    if len(p) != len(q):
        raise DimensionError(f"cannot compose permutations of sizes {len(p)} and {len(q)}")
    return tuple(p[q[k]] for k in range(len(q)))


def inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for k, target in enumerate(p):
        inv[target] = k
    return tuple(inv)


def act(p: Sequence[int], items: Sequence) -> tuple:
    """Move ``items[k]`` to slot ``p[k]``."""
    if len(p) != len(items):
        raise DimensionError("permutation and tuple differ in length")
    out = [None] * len(p)
    for k, target in enumerate(p):
        out[target] = items[k]
    return tuple(out)


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles ``(i, p[i], p[p[i]], ...)``, fixed points included."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        k = start
        while not seen[k]:
            seen[k] = True
            cyc.append(k)
            k = p[k]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    """Cycle counts ``c`` with ``c[n]`` the number of n-cycles, ``n = 1..N``.

    ``c[0]`` is always 0 so lengths index directly; ``sum(n * c[n]) == N``.
    """
    counts = [0] * (len(p) + 1)
    for cyc in cycles(p):
        counts[len(cyc)] += 1
    return tuple(counts)


def fixed_points(p: Sequence[int]) -> int:
    return sum(1 for k, target in enumerate(p) if k == target)


def iterate_group(n: int) -> Iterator[Permutation]:
    """Yield all ``n!`` permutations of ``n`` objects in lexicographic order."""
    if n < 1:
        raise DomainError("group size must be >= 1")
    if n > MAX_GROUP_SIZE:
        raise SizeLimitError(f"group iteration limited to n <= {MAX_GROUP_SIZE} ({n}! terms requested)")
    return itertools.permutations(range(n))


def group_array(n: int) -> np.ndarray:
    """All permutations of ``n`` as an ``(n!, n)`` integer array, lexicographic."""
    return np.array(list(iterate_group(n)), dtype=np.intp).reshape(math.factorial(n), n)


def relative_index(perms: np.ndarray) -> np.ndarray:
    """Table ``R[a, b]`` = row index of ``inverse(perms[a]) o perms[b]``.

    ``perms`` must list a whole group (as from :func:`group_array`).
    """
    n_perm, n = perms.shape
    if n > 8:
        raise SizeLimitError("relative-permutation table limited to n <= 8")
    weights = n ** np.arange(n - 1, -1, -1)
    lookup = np.full(n**n, -1, dtype=np.intp)
    lookup[perms @ weights] = np.arange(n_perm)
    inv = np.argsort(perms, axis=1)
    out = np.empty((n_perm, n_perm), dtype=np.intp)
    for a in range(n_perm):
        # (inv_a o p_b)[k] = inv_a[p_b[k]]
        out[a] = lookup[inv[a][perms] @ weights]
    return out


def z_fixed_point_sum(n: int, zeta: float) -> float:
    """Group average of ``zeta ** fixed_points(p)`` over all of ``S_n``.

    Closed form ``sum_{k=0}^{n} (zeta - 1)^k / k!``; no enumeration.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if zeta <= 0:
        raise DomainError("zeta must be positive")
    x = zeta - 1.0
    term = 1.0
    total = 1.0
    for k in range(1, n + 1):
        term *= x / k
        total += term
    return total
