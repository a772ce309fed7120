"""Exact Pauli-group and stabilizer-code arithmetic.

An n-qubit Pauli is stored in the symplectic binary representation: two
length-n bit vectors (x, z) plus a phase in {1, -1, i, -i}.  Per qubit the
dictionary is (x,z) = (0,0) -> I, (1,0) -> X, (1,1) -> Y, (0,1) -> Z, with
the convention Y = i X Z.  All group arithmetic (products, commutators,
group enumeration) is exact; dense matrices are only materialized on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .config import require_dense

_PHASES: tuple[complex, ...] = (1, 1j, -1, -1j)  # i**k for k = 0..3
_PHASE_LABEL = {1: "", -1: "-", 1j: "+i", -1j: "-i"}
_LABEL_PHASE = {"": 1, "+": 1, "-": -1, "+i": 1j, "i": 1j, "-i": -1j}

_SINGLE_QUBIT = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


class DimensionError(ValueError):
    """Operands act on different qubit counts."""


class InvalidCodeError(ValueError):
    """Generator set is not a valid stabilizer-code generating set."""


@dataclass(frozen=True)
class PauliOperator:
    """Phased n-qubit Pauli in symplectic form."""

    n: int
    x_bits: tuple[int, ...]
    z_bits: tuple[int, ...]
    phase: complex = 1

    def __post_init__(self) -> None:
        if len(self.x_bits) != self.n or len(self.z_bits) != self.n:
            raise ValueError("bit vectors must have length exactly n")
        if any(b not in (0, 1) for b in self.x_bits + self.z_bits):
            raise ValueError("bit vectors must be 0/1")
        if self.phase not in _PHASES:
            raise ValueError(f"phase must be a fourth root of unity, got {self.phase}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, (0,) * n, (0,) * n, 1)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, phase: complex = 1) -> "PauliOperator":
        """One non-identity letter at `qubit` (0-based), identity elsewhere."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        xb, zb = [0] * n, [0] * n
        xb[qubit], zb[qubit] = _LETTER_BITS[letter.upper()]
        return cls(n, tuple(xb), tuple(zb), phase)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Parse the text form: optional phase prefix then letters over IXYZ.

        Accepted prefixes: '+', '-', '+i', '-i', 'i' (and the unicode minus).
        Example: '-iXZIY'.
        """
        s = text.strip().replace("−", "-")
        prefix = ""
        while s and s[0] in "+-i":
            prefix += s[0]
            s = s[1:]
        if prefix not in _LABEL_PHASE:
            raise ValueError(f"bad phase prefix in {text!r}")
        letters = s.upper()
        if not letters or any(c not in "IXYZ" for c in letters):
            raise ValueError(f"bad Pauli letters in {text!r}")
        bits = [_LETTER_BITS[c] for c in letters]
        return cls(
            len(letters),
            tuple(b[0] for b in bits),
            tuple(b[1] for b in bits),
            _LABEL_PHASE[prefix],
        )

    # -- queries -----------------------------------------------------------

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors (the locality)."""
        return sum(x | z for x, z in zip(self.x_bits, self.z_bits))

    @property
    def is_identity(self) -> bool:
        return self.weight == 0

    def letters(self) -> str:
        return "".join(_BITS_LETTER[(x, z)] for x, z in zip(self.x_bits, self.z_bits))

    def __str__(self) -> str:
        return _PHASE_LABEL[self.phase] + self.letters()

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return pauli_multiply(self, other)

    def commutes_with(self, other: "PauliOperator") -> bool:
        return pauli_commutes(self, other)

    def to_matrix(self) -> np.ndarray:
        return pauli_to_matrix(self)


def _check_same_n(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")


def pauli_multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact product a*b with phase tracking.

    Per qubit, with P(x,z) = i**(x z) X**x Z**z, the product picks up
    i**(x1 z1 + x2 z2 + 2 z1 x2 - x3 z3) where (x3, z3) = (x1^x2, z1^z2).
    """
    _check_same_n(a, b)
    exp4 = 0
    xs, zs = [], []
    for x1, z1, x2, z2 in zip(a.x_bits, a.z_bits, b.x_bits, b.z_bits):
        x3, z3 = x1 ^ x2, z1 ^ z2
        exp4 += x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3
        xs.append(x3)
        zs.append(z3)
    phase = a.phase * b.phase * _PHASES[exp4 % 4]
    return PauliOperator(a.n, tuple(xs), tuple(zs), phase)


def pauli_commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff the symplectic inner product sum(ax*bz + az*bx) is even."""
    _check_same_n(a, b)
    acc = 0
    for x1, z1, x2, z2 in zip(a.x_bits, a.z_bits, b.x_bits, b.z_bits):
        acc ^= (x1 & z2) ^ (z1 & x2)
    return acc == 0


def _symplectic_rank(paulis: Sequence[PauliOperator]) -> int:
    """Rank over GF(2) of the [x|z] rows (ignores phases)."""
    if not paulis:
        return 0
    rows = np.array(
        [list(p.x_bits) + list(p.z_bits) for p in paulis], dtype=np.uint8
    )
    rank = 0
    ncols = rows.shape[1]
    for col in range(ncols):
        pivot = None
        for r in range(rank, rows.shape[0]):
            if rows[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[[rank, pivot]] = rows[[pivot, rank]]
        for r in range(rows.shape[0]):
            if r != rank and rows[r, col]:
                rows[r] ^= rows[rank]
        rank += 1
    return rank


def enumerate_stabilizer_group(
    generators: Sequence[PauliOperator], *, n: int | None = None, max_qbar: int = 20
) -> tuple[PauliOperator, ...]:
    """All 2**Qbar products of the generators, identity first.

    Subset r (an integer) maps to prod_nu gen[nu]**r_nu with r_nu = bit nu
    of r, so the ordering is the subset-integer ordering.  Phases of the
    products are tracked exactly; for commuting Hermitian generators every
    element is a Hermitian involution, hence has phase +1 or -1.

    Raises InvalidCodeError for anticommuting, dependent, or identity
    generators.
    """
    gens = tuple(generators)
    if not gens:
        if n is None:
            raise ValueError("n is required for an empty generator set")
        return (PauliOperator.identity(n),)
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise DimensionError("generators act on different qubit counts")
        if g.is_identity:
            raise InvalidCodeError("identity is not a valid generator")
    for a, b in itertools.combinations(gens, 2):
        if not pauli_commutes(a, b):
            raise InvalidCodeError(f"generators {a} and {b} anticommute")
    if _symplectic_rank(gens) != len(gens):
        raise InvalidCodeError("generators are dependent")
    if len(gens) > max_qbar:
        raise InvalidCodeError(f"group enumeration capped at Qbar <= {max_qbar}")

    group = [PauliOperator.identity(n)]
    for nu, g in enumerate(gens):
        # extend {products of gens[:nu]} by one generator
        group.extend(pauli_multiply(s, g) for s in group[: 1 << nu])
    return tuple(group)


@dataclass(frozen=True)
class StabilizerCode:
    """[[n, k]] stabilizer code: generator set plus the enumerated group."""

    n: int
    k: int
    generators: tuple[PauliOperator, ...]
    group: tuple[PauliOperator, ...]

    @classmethod
    def from_generators(
        cls, generators: Sequence[PauliOperator], *, n: int | None = None
    ) -> "StabilizerCode":
        group = enumerate_stabilizer_group(generators, n=n)
        n_val = group[0].n
        return cls(n_val, n_val - len(tuple(generators)), tuple(generators), group)

    @property
    def qbar(self) -> int:
        """Number of generators."""
        return len(self.generators)

    @property
    def q_cap(self) -> int:
        """Number of non-identity group elements (2**Qbar - 1)."""
        return len(self.group) - 1

    @property
    def q_group(self) -> int:
        """Anticommuting count (Q+1)/2 for any detectable error."""
        return (self.q_cap + 1) // 2


def anticommuting_count(
    p: PauliOperator,
    code: StabilizerCode,
    scope: Literal["group", "generators"] = "group",
) -> int:
    """How many elements of the chosen scope anticommute with p."""
    if p.n != code.n:
        raise DimensionError(f"operator on {p.n} qubits vs code on {code.n}")
    if scope not in ("group", "generators"):
        raise ValueError(f"scope must be 'group' or 'generators', got {scope!r}")
    members = code.group if scope == "group" else code.generators
    return sum(0 if pauli_commutes(p, s) else 1 for s in members)


def build_detection_code(n: int) -> StabilizerCode:
    """The [[n, n-2, 2]] error-detection code with generators X...X and Z...Z.

    Requires n even (the two all-qubit generators anticommute otherwise).
    Group elements carry exact signs: the Y...Y product has phase (-i)**n,
    i.e. -1 for n = 2 mod 4 and +1 for n = 0 mod 4.
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    all_x = PauliOperator(n, (1,) * n, (0,) * n)
    all_z = PauliOperator(n, (0,) * n, (1,) * n)
    return StabilizerCode.from_generators((all_x, all_z))


def is_detection_code(code: StabilizerCode) -> bool:
    if code.qbar != 2:
        return False
    all_x = PauliOperator(code.n, (1,) * code.n, (0,) * code.n)
    all_z = PauliOperator(code.n, (0,) * code.n, (1,) * code.n)
    return code.generators == (all_x, all_z)


def logical_operator(
    code: StabilizerCode, kind: Literal["X", "Z"], j: int
) -> PauliOperator:
    """Encoded single-qubit operator of the detection code, 1 <= j <= n-2.

    Logical X_j acts as x on physical qubits 1 and j+1; logical Z_j acts as
    z on physical qubits j+1 and n (1-based positions).
    """
    if not is_detection_code(code):
        raise ValueError("logical operators are defined for the detection code only")
    if not 1 <= j <= code.n - 2:
        raise ValueError(f"logical index {j} out of range 1..{code.n - 2}")
    n = code.n
    xb, zb = [0] * n, [0] * n
    if kind.upper() == "X":
        xb[0] = xb[j] = 1
    elif kind.upper() == "Z":
        zb[j] = zb[n - 1] = 1
    else:
        raise ValueError(f"kind must be 'X' or 'Z', got {kind!r}")
    return PauliOperator(n, tuple(xb), tuple(zb))


def pauli_to_matrix(p: PauliOperator) -> np.ndarray:
    """Dense 2**n x 2**n matrix: phase times the tensor product of factors."""
    require_dense(2**p.n)
    m = np.array([[p.phase]], dtype=complex)
    for x, z in zip(p.x_bits, p.z_bits):
        m = np.kron(m, _SINGLE_QUBIT[(x, z)])
    return m


def all_paulis_of_weight(n: int, weights: Iterable[int]) -> list[PauliOperator]:
    """Every phase-+1 Pauli on n qubits whose weight is in `weights`."""
    wanted = set(weights)
    out: list[PauliOperator] = []
    for w in sorted(wanted):
        for positions in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                xb, zb = [0] * n, [0] * n
                for q, letter in zip(positions, letters):
                    xb[q], zb[q] = _LETTER_BITS[letter]
                out.append(PauliOperator(n, tuple(xb), tuple(zb)))
    return out
