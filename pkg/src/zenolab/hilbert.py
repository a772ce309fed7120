"""Dense state and operator numerics on labeled tensor factorizations.

Operators carry their ordered factor dimensions; when a bath is present it
is always the last factor, which keeps one partial-trace code path.  Matrix
exponentials go through exact eigendecomposition (dimensions are capped, so
exactness beats speed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .config import require_dense
from .pauli import PauliOperator, StabilizerCode, is_detection_code, pauli_to_matrix

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10

# Re-validate density matrices after every channel/evolution step.
DEBUG_CHECKS = True


class FactorizationError(ValueError):
    """Operator factorization does not support the requested operation."""


def _as_matrix(m: np.ndarray) -> np.ndarray:
    a = np.array(m, dtype=complex, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class ComplexOperator:
    """Dense complex operator on an ordered tensor factorization.

    `bath=True` marks the final factor as the traced-out environment.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray
    bath: bool = False

    def __post_init__(self) -> None:
        mat = _as_matrix(self.matrix)
        total = math.prod(self.dims)
        if mat.shape[0] != total:
            raise ValueError(
                f"matrix dimension {mat.shape[0]} != product of factors {total}"
            )
        require_dense(total)
        if self.bath and len(self.dims) < 2:
            raise FactorizationError("bath flag requires at least two factors")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def system_dims(self) -> tuple[int, ...]:
        return self.dims[:-1] if self.bath else self.dims

    @property
    def bath_dim(self) -> int:
        if not self.bath:
            raise FactorizationError("no bath factor marked")
        return self.dims[-1]

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= tol)

    @classmethod
    def from_pauli(cls, p: PauliOperator) -> "ComplexOperator":
        return cls((2,) * p.n, pauli_to_matrix(p))

    def to_json(self) -> str:
        """Complex-pair JSON form for fixtures."""
        return json.dumps(
            {
                "dims": list(self.dims),
                "bath": self.bath,
                "re": self.matrix.real.tolist(),
                "im": self.matrix.imag.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ComplexOperator":
        obj = json.loads(text)
        mat = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
        return cls(tuple(obj["dims"]), mat, obj["bath"])


@dataclass(frozen=True)
class DensityMatrix(ComplexOperator):
    """Hermitian, unit-trace, positive-semidefinite operator."""

    def __post_init__(self) -> None:
        super().__post_init__()
        validate_density(self.matrix, what="DensityMatrix")


def validate_density(mat: np.ndarray, what: str = "state") -> None:
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > HERMITIAN_TOL:
        raise ValueError(f"{what} not Hermitian: max asymmetry {herm:.3e}")
    tr = np.trace(mat)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{what} trace {tr} differs from 1")
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    if min_eig < PSD_TOL:
        raise ValueError(f"{what} not PSD: min eigenvalue {min_eig:.3e}")


def tensor_product(a: ComplexOperator, b: ComplexOperator) -> ComplexOperator:
    """Kronecker product with concatenated factor labels (b's bath stays last)."""
    if a.bath:
        raise FactorizationError("left operand already carries the bath factor")
    dims = a.dims + b.dims
    mat = np.kron(a.matrix, b.matrix)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(dims, mat, b.bath)
    return ComplexOperator(dims, mat, b.bath)


def partial_trace_bath(rho: ComplexOperator) -> DensityMatrix:
    """Trace out the trailing bath factor."""
    if not rho.bath:
        raise FactorizationError("state has no bath factor to trace out")
    ds = math.prod(rho.system_dims)
    db = rho.bath_dim
    t = rho.matrix.reshape(ds, db, ds, db)
    reduced = np.einsum("ijkj->ik", t)
    return DensityMatrix(rho.system_dims, reduced)


def trace_distance(r1: ComplexOperator, r2: ComplexOperator) -> float:
    """Half the trace norm of the difference (both inputs Hermitian)."""
    if r1.dims != r2.dims:
        raise ValueError(f"dimension mismatch: {r1.dims} vs {r2.dims}")
    return trace_distance_matrices(r1.matrix, r2.matrix)


def trace_distance_matrices(m1: np.ndarray, m2: np.ndarray) -> float:
    diff = m1 - m2
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def spectral_norm(h: ComplexOperator | np.ndarray) -> float:
    """Largest singular value (max |eigenvalue| for Hermitian input)."""
    mat = h.matrix if isinstance(h, ComplexOperator) else np.asarray(h)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def hermitian_exponential(h: np.ndarray, scale: complex) -> np.ndarray:
    """exp(scale * h) for Hermitian h, via eigendecomposition."""
    evals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(scale * evals)) @ vecs.conj().T


def evolve_unitary(rho: DensityMatrix, h: ComplexOperator, t: float) -> DensityMatrix:
    """Conjugate rho by exp(-i h t); trace and spectrum are preserved."""
    if rho.dims != h.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {h.dims}")
    if not h.is_hermitian():
        raise ValueError("evolution requires a Hermitian generator")
    u = hermitian_exponential(h.matrix, -1j * t)
    out = u @ rho.matrix @ u.conj().T
    return DensityMatrix(rho.dims, out, rho.bath)


def embed_system(sys_mat: np.ndarray, bath_dim: int) -> np.ndarray:
    """Extend a system operator by the identity on the bath factor."""
    return np.kron(sys_mat, np.eye(bath_dim, dtype=complex))


def encode_codeword(code: StabilizerCode, state_spec: str) -> DensityMatrix:
    """Pure codeword (|x> + |xbar>)/sqrt(2) of the detection code.

    `state_spec` is either a length-n physical bitstring of even weight, or a
    length-(n-2) logical bitstring selecting the logical-Z basis state (the
    canonical representative with the last physical bit 0).
    """
    if not is_detection_code(code):
        raise ValueError("codewords are defined for the detection code only")
    n = code.n
    spec = state_spec.strip()
    if any(c not in "01" for c in spec):
        raise ValueError(f"state spec must be a bitstring, got {state_spec!r}")
    if len(spec) == n:
        bits = [int(c) for c in spec]
        if sum(bits) % 2:
            raise ValueError(f"physical string {state_spec!r} has odd weight")
    elif len(spec) == n - 2:
        # logical Z_j reads (bit j+1) xor (bit n); pick bit n = 0 and fix
        # the first bit by even parity
        logical = [int(c) for c in spec]
        bits = [sum(logical) % 2] + logical + [0]
    else:
        raise ValueError(
            f"state spec length {len(spec)} is neither n={n} nor n-2={n - 2}"
        )
    require_dense(2**n)
    index = int("".join(map(str, bits)), 2)
    index_bar = (2**n - 1) ^ index
    vec = np.zeros(2**n, dtype=complex)
    vec[index] = 1 / math.sqrt(2)
    vec[index_bar] = 1 / math.sqrt(2)
    return DensityMatrix((2,) * n, np.outer(vec, vec.conj()))


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random full-rank (or rank-limited) density matrix."""
    r = dim if rank is None else rank
    a = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2
