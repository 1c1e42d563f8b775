"""Input validation helpers used at the public API boundaries."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import ArchitectureError


def check_even_wires(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 2 or n % 2 != 0:
        raise ArchitectureError(f"wire count must be a positive even integer, got {n!r}")
    return int(n)


def check_depth(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or d < 0:
        raise ArchitectureError(f"depth must be a non-negative integer, got {d!r}")
    return int(d)


def check_permutation(perm: Sequence[int], n: int) -> tuple[int, ...]:
    """Validate a 0-based permutation of range(n) and return it as a tuple."""
    p = tuple(int(v) for v in perm)
    if len(p) != n or sorted(p) != list(range(n)):
        raise ArchitectureError(f"not a permutation of 0..{n - 1}: {perm!r}")
    return p


def check_wire_index(i: int, n: int) -> int:
    if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
        raise ValueError(f"wire index must be in [0, {n}), got {i!r}")
    return int(i)


def check_bits(x, n: int) -> np.ndarray:
    """Coerce ``x`` to an n-bit array (dtype uint8), rejecting length or value mismatches."""
    if isinstance(x, str):
        if not set(x) <= {"0", "1"}:
            raise ValueError(f"bitstring may contain only 0/1, got {x!r}")
        x = [int(c) for c in x]
    bits = np.asarray(x)
    if bits.shape != (n,):
        raise ValueError(f"expected {n} bits, got shape {bits.shape}")
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("bits must be 0 or 1")
    return bits.astype(np.uint8)


def as_rng(seed) -> np.random.Generator:
    """Coerce None / int / Generator to a numpy Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
