"""Many-body weak measurement from two-qubit gates and one weak ancilla readout.

A weight-k Pauli observable is measured weakly by (i) preparing a k-qubit
cat-state register plus one extra ancilla in |0>, (ii) entangling the cat
with the data through controlled-Pauli gates, (iii) computing the cat's
X-basis parity into the extra ancilla with Hadamards and CXs, (iv) weakly
measuring Z on that single ancilla, and (v) uncomputing steps (iii) and (ii)
before discarding cat and ancilla.  The uncompute step is essential: without
it the discarded registers keep a record of the measured sector, which turns
the channel into the strong measurement for every strength (tracing out the
cat kills the coherences the weak channel must retain, scaled by zeta).
With it, the traced output equals the direct weak measurement exactly, for
arbitrary input states.

The circuit consists solely of 1- and 2-qubit unitaries plus the one-qubit
weak Z measurement; no many-body measurement operator is ever constructed
here.  For speed the simulator composes the gate sequence into one circuit
unitary per observable (cached) and realizes the uncompute as its inverse.

Qubit ordering: [extra ancilla | cat register | data (+ trailing bath)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from .config import require_dense
from .hilbert import DensityMatrix
from .measurement import MeasurementStrength, apply_weak_single
from .pauli import PauliOperator

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_XZ = _X @ _Z
_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

_CONTROLLED_TARGET = {"X": _X, "Z": _Z, "Y": _XZ}  # CY is realized as C(XZ)

# Conjugation table for the controlled gates and the Hadamard:
# how (control x target) Paulis propagate, written as letter pairs.
GATE_TABLE: dict[str, dict[str, str]] = {
    "CZ": {"IX": "ZX", "IZ": "IZ"},
    "CX": {"IX": "IX", "IZ": "ZZ"},
    "CY": {"IX": "ZX", "IZ": "ZZ"},
    "W": {"X": "Z", "Z": "X"},
}


@dataclass(frozen=True)
class CatRegister:
    """k-qubit cat state (|0...0> + sign |1...1>)/sqrt(2)."""

    k: int
    sign: Literal["+", "-"]
    state: np.ndarray

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("cat register needs k >= 1 qubits")
        self.state.setflags(write=False)


def make_cat_state(k: int, sign: Literal["+", "-"] = "+") -> CatRegister:
    require_dense(2**k)
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    vec = np.zeros(2**k, dtype=complex)
    vec[0] = 1 / math.sqrt(2)
    vec[-1] = (1 if sign == "+" else -1) / math.sqrt(2)
    return CatRegister(k, sign, vec)


def controlled_pauli_gate(letter: str) -> np.ndarray:
    """4x4 controlled gate on (control, target); CY applies XZ on the target."""
    v = _CONTROLLED_TARGET[letter.upper()]
    gate = np.zeros((4, 4), dtype=complex)
    gate[:2, :2] = np.eye(2)
    gate[2:, 2:] = v
    return gate


def _apply_unitary_positions(
    rho: np.ndarray, u: np.ndarray, positions: Sequence[int], dims: Sequence[int]
) -> np.ndarray:
    """U rho U^dag with U acting on the given tensor factors only."""
    n_fac = len(dims)
    sub = [dims[p] for p in positions]
    t = rho.reshape(tuple(dims) * 2)
    u_t = u.reshape(tuple(sub) * 2)
    n_pos = len(positions)
    # ket side
    t = np.tensordot(u_t, t, axes=(range(n_pos, 2 * n_pos), positions))
    t = np.moveaxis(t, range(n_pos), positions)
    # bra side
    bra_positions = [n_fac + p for p in positions]
    t = np.tensordot(t, u_t.conj(), axes=(bra_positions, range(n_pos, 2 * n_pos)))
    t = np.moveaxis(t, range(-n_pos, 0), bra_positions)
    dim = rho.shape[0]
    return t.reshape(dim, dim)


def apply_controlled_pauli(
    joint: np.ndarray,
    v_letter: str,
    control: int,
    target: int,
    dims: Sequence[int],
    dagger: bool = False,
) -> np.ndarray:
    """Apply a controlled Pauli between two factors of a joint density matrix."""
    for pos in (control, target):
        if not 0 <= pos < len(dims) or dims[pos] != 2:
            raise ValueError(f"position {pos} is not a qubit factor")
    gate = controlled_pauli_gate(v_letter)
    if dagger:
        gate = gate.conj().T
    return _apply_unitary_positions(joint, gate, (control, target), dims)


def apply_hadamard(joint: np.ndarray, pos: int, dims: Sequence[int]) -> np.ndarray:
    return _apply_unitary_positions(joint, _HAD, (pos,), dims)


def _left_apply(mat: np.ndarray, gate: np.ndarray, positions: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """gate (x) identity acting on the row index of `mat` (columns untouched)."""
    n_fac = len(dims)
    cols = mat.shape[1]
    t = mat.reshape(*dims, cols)
    t = np.moveaxis(t, positions, range(len(positions)))
    head = math.prod(dims[p] for p in positions)
    kept = t.shape[len(positions):]
    out = (gate @ t.reshape(head, -1)).reshape(*[dims[p] for p in positions], *kept)
    out = np.moveaxis(out, range(len(positions)), positions)
    return out.reshape(mat.shape[0], cols)


@lru_cache(maxsize=16)
def _circuit_unitary(letters: str, support: tuple[int, ...], dims: tuple[int, ...]) -> np.ndarray:
    """Composed forward circuit: controlled Paulis, cat Hadamards, parity CXs.

    Ordering of factors is [ancilla | cat | data...]; the gate list is 1- and
    2-qubit only, multiplied together in temporal order.
    """
    k = len(support)
    dim = math.prod(dims)
    u = np.eye(dim, dtype=complex)
    cat_pos = list(range(1, 1 + k))
    for idx, q in enumerate(support):
        gate = controlled_pauli_gate(letters[q])
        u = _left_apply(u, gate, (cat_pos[idx], 1 + k + q), dims)
    for c in cat_pos:
        u = _left_apply(u, _HAD, (c,), dims)
    for c in cat_pos:
        u = _left_apply(u, controlled_pauli_gate("X"), (c, 0), dims)
    u.setflags(write=False)
    return u


def _apply_weak_z_first_factor(
    rho: np.ndarray, s: MeasurementStrength, dims: Sequence[int]
) -> np.ndarray:
    """Weak Z measurement of the leading qubit factor (diagonal Kraus pair)."""
    rest = math.prod(dims[1:])
    out = np.zeros_like(rho)
    for sign in (+1, -1):
        a_plus, a_minus = s.alpha(sign)
        d = np.concatenate([np.full(rest, a_plus), np.full(rest, a_minus)])
        out += (d[:, None] * rho) * d[None, :]
    return out


def _uncompute_and_trace(sigma: np.ndarray, u: np.ndarray, lead: int, rest: int) -> np.ndarray:
    """Anc+cat-diagonal blocks of U^dag sigma U, summed: Tr_lead[U^dag sigma U]."""
    dim = sigma.shape[0]
    t = (sigma @ u).reshape(dim, lead, rest)
    uc = u.conj().reshape(dim, lead, rest)
    return np.einsum("pax,pay->xy", uc, t, optimize=True)


def _prepare(rho_data: DensityMatrix, v_hat: PauliOperator):
    n_sys = len(rho_data.system_dims)
    if v_hat.n != n_sys:
        raise ValueError(f"observable acts on {v_hat.n} qubits, data has {n_sys}")
    if any(d != 2 for d in rho_data.system_dims):
        raise ValueError("system factors must all be qubits")
    if v_hat.phase not in (1, -1):
        raise ValueError("measured observable must be Hermitian (phase +1 or -1)")
    support = tuple(
        q for q in range(v_hat.n) if v_hat.x_bits[q] or v_hat.z_bits[q]
    )
    if not support:
        raise ValueError("cannot measure the identity")
    k = len(support)
    dims = (2,) + (2,) * k + rho_data.dims
    require_dense(math.prod(dims))
    anc = np.zeros((2, 2), dtype=complex)
    anc[0, 0] = 1.0
    cat = make_cat_state(k, "+").state
    rho = np.kron(anc, np.kron(np.outer(cat, cat.conj()), rho_data.matrix))
    u = _circuit_unitary(v_hat.letters(), support, dims)
    return rho, u, dims, 2 ** (k + 1), math.prod(rho_data.dims)


def simulate_weak_many_body(
    rho_data: DensityMatrix, v_hat: PauliOperator, s: MeasurementStrength
) -> DensityMatrix:
    """Weak measurement of a many-body Pauli via the cat-ancilla circuit.

    The traced output equals apply_weak_single(rho_data, v_hat, s).  Inputs
    outside the protocol's usual setting (states not stabilized by v_hat
    before the noise) are accepted; the identity holds for them as well.
    """
    rho, u, dims, lead, rest = _prepare(rho_data, v_hat)
    forward = u @ rho @ u.conj().T
    damped = _apply_weak_z_first_factor(forward, s, dims)
    reduced = _uncompute_and_trace(damped, u, lead, rest)
    return DensityMatrix(rho_data.dims, reduced, rho_data.bath)


def simulate_weak_family(
    rho_data: DensityMatrix,
    v_hat: PauliOperator,
    strengths: Sequence[MeasurementStrength],
) -> list[DensityMatrix]:
    """simulate_weak_many_body for several strengths, sharing the circuit work.

    The ancilla damping acts linearly: it keeps the ancilla-diagonal part of
    the forward state and scales the off-diagonal part by zeta.  Both parts
    are pushed through the uncompute-and-trace step once; each strength is
    then the combination diag_part + zeta * offdiag_part.
    """
    rho, u, dims, lead, rest = _prepare(rho_data, v_hat)
    forward = u @ rho @ u.conj().T
    dim = forward.shape[0]
    half = dim // 2
    diag = forward.copy()
    diag[:half, half:] = 0
    diag[half:, :half] = 0
    off = forward - diag
    r_diag = _uncompute_and_trace(diag, u, lead, rest)
    r_off = _uncompute_and_trace(off, u, lead, rest)
    return [
        DensityMatrix(rho_data.dims, r_diag + s.zeta * r_off, rho_data.bath)
        for s in strengths
    ]


def direct_weak_many_body(
    rho_data: DensityMatrix, v_hat: PauliOperator, s: MeasurementStrength
) -> DensityMatrix:
    """Reference channel: the weak measurement applied as a many-body operator."""
    return apply_weak_single(rho_data, v_hat, s)
