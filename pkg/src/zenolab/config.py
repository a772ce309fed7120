"""Runtime limits for dense linear algebra.

Everything in this package is simulated with dense matrices, so total
Hilbert-space dimension is capped.  The cap is expressed as a qubit count:
dimension 2**cap.  Override with the ZENOLAB_DENSE_CAP environment variable.
"""

import os

DEFAULT_DENSE_CAP_QUBITS = 12


class DenseCapError(ValueError):
    """Requested Hilbert-space dimension exceeds the configured dense cap."""


def dense_cap_qubits() -> int:
    raw = os.environ.get("ZENOLAB_DENSE_CAP")
    if raw is None:
        return DEFAULT_DENSE_CAP_QUBITS
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"ZENOLAB_DENSE_CAP must be >= 1, got {cap}")
    return cap


def max_dense_dim() -> int:
    return 2 ** dense_cap_qubits()


def require_dense(dim: int) -> None:
    """Raise DenseCapError if a dim x dim dense matrix is over the cap."""
    limit = max_dense_dim()
    if dim > limit:
        raise DenseCapError(
            f"dense dimension {dim} exceeds cap {limit} "
            f"(set ZENOLAB_DENSE_CAP to raise it)"
        )
