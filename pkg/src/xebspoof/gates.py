"""Two-qubit gates: Haar sampling, Pauli basis, exact fourth-moment reference.

Gate matrices are 4x4 complex in the pair basis |00>, |01>, |10>, |11> with
the gate's first wire as the high bit.  Serialized form is a flat row-major
list of 16 [re, im] pairs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._validation import as_rng

__all__ = [
    "PAULI_LABELS",
    "PAULIS",
    "IDENTITY_GATE",
    "check_unitary",
    "haar_sample",
    "fourth_moment_reference",
    "unitary_to_pairs",
    "unitary_from_pairs",
]

PAULI_LABELS = ("I", "X", "Y", "Z")

# Y uses the +i-upper-right sign convention; every quantity in this package
# touches Y only through squared traces, which the sign does not affect.
PAULIS = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

IDENTITY_GATE = np.eye(4, dtype=complex)

UNITARITY_ATOL = 1e-12


def check_unitary(U, atol: float = UNITARITY_ATOL) -> np.ndarray:
    """Validate a 4x4 unitary (within ``atol``) and return it as complex ndarray."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (4, 4):
        raise ValueError(f"expected a 4x4 gate, got shape {U.shape}")
    if not np.allclose(U.conj().T @ U, np.eye(4), atol=atol, rtol=0):
        raise ValueError("gate is not unitary within tolerance")
    return U


def haar_sample(rng=None, size: int | None = None) -> np.ndarray:
    """Haar-random 4x4 unitaries: complex Ginibre, QR, then R-diagonal phase fix.

    Without the phase correction QR alone is not Haar distributed.  Returns a
    single (4, 4) array, or (size, 4, 4) when ``size`` is given.
    """
    rng = as_rng(rng)
    shape = (4, 4) if size is None else (size, 4, 4)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def fourth_moment_reference(xa, ya, xb, yb, xc, yc, xd, yd) -> Fraction:
    """Exact Haar fourth moment E[U_{xa,ya} U*_{xb,yb} U_{xc,yc} U*_{xd,yd}] for 4x4 U.

    All eight indices are 2-bit wire indices (0..3).  The value is the rational

        1/15 [d(xa,xb) d(xc,xd) d(ya,yb) d(yc,yd) + d(xa,xd) d(xb,xc) d(ya,yd) d(yb,yc)]
      - 1/60 [d(xa,xb) d(xc,xd) d(ya,yd) d(yb,yc) + d(xa,xd) d(xb,xc) d(ya,yb) d(yc,yd)]

    where d is the Kronecker delta; the imaginary part is exactly zero.
    """
    idx = (xa, ya, xb, yb, xc, yc, xd, yd)
    if not all(isinstance(v, (int, np.integer)) and 0 <= v <= 3 for v in idx):
        raise ValueError(f"indices must be 2-bit values in 0..3, got {idx}")

    def d(u, v):
        return 1 if u == v else 0

    plus = d(xa, xb) * d(xc, xd) * d(ya, yb) * d(yc, yd) + d(xa, xd) * d(xb, xc) * d(ya, yd) * d(yb, yc)
    minus = d(xa, xb) * d(xc, xd) * d(ya, yd) * d(yb, yc) + d(xa, xd) * d(xb, xc) * d(ya, yb) * d(yc, yd)
    return Fraction(plus, 15) - Fraction(minus, 60)


def unitary_to_pairs(U) -> list[list[float]]:
    """Flatten a gate to 16 row-major [re, im] pairs."""
    U = check_unitary(U)
    return [[float(v.real), float(v.imag)] for v in U.reshape(-1)]


def unitary_from_pairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (16, 2):
        raise ValueError(f"expected 16 [re, im] pairs, got shape {arr.shape}")
    return check_unitary((arr[:, 0] + 1j * arr[:, 1]).reshape(4, 4))
