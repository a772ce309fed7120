"""Protocol composition: joint evolution interleaved with measurement rounds.

A run applies M rounds of [evolve by tau/M under H = H0 + HSB, then apply
the chosen measurement channel] to the joint system x bath state, and is
compared against the uncoupled, unmeasured reference evolution under H0.
The figure of merit is the trace distance between the two reduced system
states.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import bounds
from .hilbert import (
    ComplexOperator,
    DensityMatrix,
    embed_system,
    hermitian_exponential,
    maximally_mixed,
    partial_trace_bath,
    random_hermitian,
    spectral_norm,
    trace_distance,
    validate_density,
    DEBUG_CHECKS,
)
from .measurement import MeasurementStrength, channel_for_variant
from .pauli import (
    PauliOperator,
    StabilizerCode,
    build_detection_code,
    logical_operator,
    pauli_commutes,
    pauli_to_matrix,
)

Variant = Literal["group", "generators", "strong", "none"]

NORM_SLACK = 1e-9


@dataclass(frozen=True)
class HamiltonianModel:
    """System, bath, and coupling parts plus their norm bounds J0, J1.

    j0 and j1 are the bound inputs consumed downstream; the invariants
    2||H0|| <= j0 and 2||HSB|| <= j1 are enforced at construction (the
    convention throughout is J_mu = 2 ||H_mu||).
    """

    h_s: ComplexOperator
    h_b: ComplexOperator
    h_sb: ComplexOperator
    j0: float
    j1: float

    def __post_init__(self) -> None:
        for name, op in (("h_s", self.h_s), ("h_b", self.h_b), ("h_sb", self.h_sb)):
            if not op.is_hermitian():
                raise ValueError(f"{name} is not Hermitian")
        if self.h_sb.dims != self.h_s.dims + self.h_b.dims:
            raise ValueError("h_sb factors must be system dims + bath dims")
        if 2 * spectral_norm(self.h0_matrix()) > self.j0 + NORM_SLACK:
            raise ValueError("2||H0|| exceeds the declared j0")
        if 2 * spectral_norm(self.h_sb) > self.j1 + NORM_SLACK:
            raise ValueError("2||HSB|| exceeds the declared j1")

    @property
    def system_dim(self) -> int:
        return self.h_s.dim

    @property
    def bath_dim(self) -> int:
        return self.h_b.dim

    def h0_matrix(self) -> np.ndarray:
        return embed_system(self.h_s.matrix, self.bath_dim) + np.kron(
            np.eye(self.system_dim, dtype=complex), self.h_b.matrix
        )

    def total_matrix(self) -> np.ndarray:
        return self.h0_matrix() + self.h_sb.matrix

    def check_code_compatible(self, code: StabilizerCode) -> None:
        """H_S must commute with every stabilizer group element."""
        for s in code.group:
            sm = pauli_to_matrix(s)
            comm = self.h_s.matrix @ sm - sm @ self.h_s.matrix
            if np.max(np.abs(comm)) > 1e-12:
                raise ValueError(f"h_s does not commute with stabilizer {s}")


@dataclass(frozen=True)
class ProtocolConfig:
    code: StabilizerCode
    strength: MeasurementStrength
    tau: float
    m: int
    variant: Variant = "group"

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.variant not in ("group", "generators", "strong", "none"):
            raise ValueError(f"unknown variant {self.variant!r}")


def _conjugate(u: np.ndarray, mat: np.ndarray) -> np.ndarray:
    return u @ mat @ u.conj().T


def run_protocol(
    rho_sb: DensityMatrix, h: HamiltonianModel, cfg: ProtocolConfig
) -> DensityMatrix:
    """M rounds of (slice evolution, then measurement channel) on the joint state."""
    if rho_sb.dims != h.h_s.dims + h.h_b.dims:
        raise ValueError(f"state dims {rho_sb.dims} do not match the Hamiltonian")
    if not rho_sb.bath:
        raise ValueError("run_protocol expects a joint state with a bath factor")
    h.check_code_compatible(cfg.code)
    u_slice = hermitian_exponential(h.total_matrix(), -1j * cfg.tau / cfg.m)
    channel = channel_for_variant(cfg.code, cfg.strength, cfg.variant)
    bath_dim = rho_sb.bath_dim
    mat = rho_sb.matrix
    for _ in range(cfg.m):
        mat = _conjugate(u_slice, mat)
        if channel is not None:
            mat = channel.apply_matrix(mat, bath_dim)
        if DEBUG_CHECKS:
            validate_density(mat, what="protocol step output")
    return DensityMatrix(rho_sb.dims, mat, bath=True)


def ideal_evolve(
    rho_sb: DensityMatrix, h: HamiltonianModel, tau: float
) -> DensityMatrix:
    """Reference evolution: uncoupled (HSB = 0), no measurements."""
    u = hermitian_exponential(h.h0_matrix(), -1j * tau)
    return DensityMatrix(rho_sb.dims, _conjugate(u, rho_sb.matrix), bath=True)


def deviation(real_joint: DensityMatrix, ideal_joint: DensityMatrix) -> float:
    """Trace distance between the reduced system states."""
    return trace_distance(
        partial_trace_bath(real_joint), partial_trace_bath(ideal_joint)
    )


def decompose_hamiltonian(
    h_total: np.ndarray, omegas: Sequence[np.ndarray]
) -> dict[tuple[int, ...], np.ndarray]:
    """Split h_total into components with fixed (anti)commutation pattern.

    Each step halves a component into the part commuting (bit 0) and
    anticommuting (bit 1) with the next involution:

        H_{r, 0} = (H_r + W H_r W)/2,   H_{r, 1} = (H_r - W H_r W)/2.

    Returns a map from the bit pattern over `omegas` to the component; the
    components sum to h_total and every component norm is <= ||h_total||.
    """
    for i, w in enumerate(omegas):
        if np.max(np.abs(w @ w - np.eye(w.shape[0]))) > 1e-12:
            raise ValueError(f"omega {i} is not an involution")
    for i, a in enumerate(omegas):
        for b in omegas[i + 1 :]:
            if np.max(np.abs(a @ b - b @ a)) > 1e-12:
                raise ValueError("omegas must pairwise commute")
    parts: dict[tuple[int, ...], np.ndarray] = {(): np.asarray(h_total, dtype=complex)}
    for w in omegas:
        nxt: dict[tuple[int, ...], np.ndarray] = {}
        for pattern, mat in parts.items():
            flipped = w @ mat @ w
            nxt[pattern + (0,)] = (mat + flipped) / 2.0
            nxt[pattern + (1,)] = (mat - flipped) / 2.0
        parts = nxt
    return parts


def build_one_local_coupling(
    n: int, bath_dim: int, seed: int, j1_target: float
) -> ComplexOperator:
    """Seeded coupling sum_{i,a} sigma_i^a x B_i^a, rescaled to 2||HSB|| = j1.

    Every term anticommutes with at least one generator of the [[n, n-2, 2]]
    code, so the whole coupling is a 1-local detectable error Hamiltonian.
    """
    if bath_dim < 2:
        raise ValueError("bath_dim must be >= 2")
    rng = np.random.default_rng(seed)
    dim = 2**n * bath_dim
    total = np.zeros((dim, dim), dtype=complex)
    for qubit in range(n):
        for letter in "xyz":
            sys_mat = pauli_to_matrix(PauliOperator.single(n, qubit, letter.upper()))
            total += np.kron(sys_mat, random_hermitian(bath_dim, rng))
    norm = spectral_norm(total)
    if norm > 0 and j1_target > 0:
        total *= j1_target / (2 * norm)
    elif j1_target == 0:
        total[:] = 0
    return ComplexOperator((2,) * n + (bath_dim,), total, bath=True)


def suppression_factor(
    rho_codeword: DensityMatrix,
    error: PauliOperator,
    code: StabilizerCode,
    s: MeasurementStrength,
    j: int = 1,
    variant: Literal["group", "generators"] = "group",
    bath_state: np.ndarray | None = None,
    bath_op: np.ndarray | None = None,
) -> float:
    """Measured scale factor of the erred component under j channel rounds.

    Builds L = -i [E (x) B, rho (x) rho_B] (bath omitted when not supplied),
    applies the variant's channel j times, and fits the single scalar ratio
    between output and input.  For a codeword input the whole operator is
    rescaled uniformly; the fit checks this elementwise.
    """
    if rho_codeword.bath:
        raise ValueError("pass the system codeword; bath enters via bath_state")
    err_mat = pauli_to_matrix(error)
    if (bath_state is None) != (bath_op is None):
        raise ValueError("bath_state and bath_op must be supplied together")
    if bath_state is not None:
        joint_rho = np.kron(rho_codeword.matrix, bath_state)
        joint_err = np.kron(err_mat, bath_op)
        bath_dim = bath_state.shape[0]
    else:
        joint_rho = rho_codeword.matrix
        joint_err = err_mat
        bath_dim = None
    l_in = -1j * (joint_err @ joint_rho - joint_rho @ joint_err)
    peak = np.max(np.abs(l_in))
    if peak < 1e-14:
        raise ValueError("input operator -i[E x B, rho] is zero")
    channel = channel_for_variant(code, s, variant)
    assert channel is not None
    l_out = l_in
    for _ in range(j):
        l_out = channel.apply_matrix(l_out, bath_dim)
    mask = np.abs(l_in) > 1e-12 * peak
    ratios = l_out[mask] / l_in[mask]
    idx = int(np.argmax(np.abs(l_in[mask])))
    fitted = ratios[idx]
    if np.max(np.abs(ratios - fitted)) > 1e-10 * max(1.0, abs(fitted)):
        raise ValueError("channel did not rescale the erred component uniformly")
    if abs(fitted.imag) > 1e-10:
        raise ValueError(f"non-real suppression factor {fitted}")
    return float(fitted.real)


# -- experiment harness ------------------------------------------------------

SIM_CSV_HEADER = [
    "variant",
    "M",
    "epsilon",
    "zeta",
    "deviation",
    "bound",
    "bound_minus_deviation",
    "ok",
]


@dataclass(frozen=True)
class ExperimentSpec:
    """JSON-serializable description of a full simulation sweep."""

    n: int = 4
    bath_dim: int = 2
    seed: int = 7
    j0: float = 1.0
    j1: float = 0.1
    tau: float = 1.0
    m_list: tuple[int, ...] = (1, 2, 4, 8, 16, 32)
    epsilon_list: tuple[float, ...] = (1.0, 3.0, math.inf)
    variant_list: tuple[Variant, ...] = ("group", "generators", "strong")
    logical_state: str = "00"
    bath_share: float = 0.2  # fraction of j0/2 carried by ||H_B||

    def to_json(self) -> str:
        def enc(v: float) -> object:
            return "strong" if isinstance(v, float) and math.isinf(v) else v

        payload = {
            "n": self.n,
            "bath_dim": self.bath_dim,
            "seed": self.seed,
            "j0": self.j0,
            "j1": self.j1,
            "tau": self.tau,
            "m_list": list(self.m_list),
            "epsilon_list": [enc(e) for e in self.epsilon_list],
            "variant_list": list(self.variant_list),
            "logical_state": self.logical_state,
            "bath_share": self.bath_share,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        obj = json.loads(text)
        eps = tuple(
            math.inf if e == "strong" else float(e) for e in obj["epsilon_list"]
        )
        return cls(
            n=int(obj["n"]),
            bath_dim=int(obj["bath_dim"]),
            seed=int(obj["seed"]),
            j0=float(obj["j0"]),
            j1=float(obj["j1"]),
            tau=float(obj["tau"]),
            m_list=tuple(int(m) for m in obj["m_list"]),
            epsilon_list=eps,
            variant_list=tuple(obj["variant_list"]),
            logical_state=str(obj["logical_state"]),
            bath_share=float(obj.get("bath_share", 0.2)),
        )


@dataclass(frozen=True)
class SimRow:
    variant: str
    m: int
    epsilon: float
    zeta: float
    deviation: float
    bound: float | None

    @property
    def ok(self) -> bool | None:
        if self.bound is None:
            return None
        return self.deviation <= self.bound + 1e-9


def build_experiment_model(
    spec: ExperimentSpec,
) -> tuple[StabilizerCode, HamiltonianModel, DensityMatrix]:
    """Code, Hamiltonian, and initial joint state for an experiment spec.

    H_S is a logical X_1 rotation and H_B a seeded random bath term, scaled
    so that 2 (||H_S|| + ||H_B||) = j0 exactly (the two parts commute and
    H_S has a symmetric spectrum, so the norms add).  The coupling is the
    seeded 1-local error sum rescaled to 2||HSB|| = j1.
    """
    from .hilbert import encode_codeword, tensor_product

    code = build_detection_code(spec.n)
    rng = np.random.default_rng(spec.seed + 1)

    theta = (1.0 - spec.bath_share) * spec.j0 / 2.0
    h_s_mat = theta * pauli_to_matrix(logical_operator(code, "X", 1))
    h_s = ComplexOperator((2,) * spec.n, h_s_mat)

    hb_norm_target = spec.bath_share * spec.j0 / 2.0
    hb_raw = random_hermitian(spec.bath_dim, rng)
    raw_norm = spectral_norm(hb_raw)
    hb_mat = hb_raw * (hb_norm_target / raw_norm) if raw_norm > 0 else hb_raw * 0
    h_b = ComplexOperator((spec.bath_dim,), hb_mat)

    h_sb = build_one_local_coupling(spec.n, spec.bath_dim, spec.seed, spec.j1)
    model = HamiltonianModel(h_s=h_s, h_b=h_b, h_sb=h_sb, j0=spec.j0, j1=spec.j1)

    if spec.j0 <= spec.j1:
        warnings.warn(
            "j0 <= j1 violates the bound's stated hypothesis; results are exploratory",
            stacklevel=2,
        )

    rho_s = encode_codeword(code, spec.logical_state)
    rho_b = DensityMatrix((spec.bath_dim,), maximally_mixed(spec.bath_dim))
    rho_sb = tensor_product(rho_s, rho_b)
    rho_sb = DensityMatrix(rho_sb.dims, rho_sb.matrix, bath=True)
    return code, model, rho_sb


def bound_for_variant(
    variant: Variant, spec: ExperimentSpec, m: int, zeta: float, qbar: int
) -> float | None:
    if variant == "none":
        return None
    inputs = bounds.BoundInputs.for_variant(
        variant if variant != "strong" else "strong",
        j0=spec.j0,
        j1=spec.j1,
        tau=spec.tau,
        m=m,
        qbar=qbar,
        zeta=zeta,
    )
    return bounds.bound_exact(inputs) if variant != "strong" else bounds.bound_strong(inputs)


def run_experiment(spec: ExperimentSpec) -> list[SimRow]:
    """All (variant, M, epsilon) deviations with their matching bounds."""
    code, model, rho_sb = build_experiment_model(spec)
    ideal = ideal_evolve(rho_sb, model, spec.tau)
    rows = []
    for variant in spec.variant_list:
        eps_values = spec.epsilon_list if variant != "strong" else (math.inf,)
        for eps in eps_values:
            strength = MeasurementStrength(eps)
            for m in spec.m_list:
                cfg = ProtocolConfig(
                    code=code, strength=strength, tau=spec.tau, m=m, variant=variant
                )
                real = run_protocol(rho_sb, model, cfg)
                dev = deviation(real, ideal)
                zeta = 0.0 if variant == "strong" else strength.zeta
                rows.append(
                    SimRow(
                        variant=variant,
                        m=m,
                        epsilon=math.inf if variant == "strong" else eps,
                        zeta=zeta,
                        deviation=dev,
                        bound=bound_for_variant(variant, spec, m, zeta, code.qbar),
                    )
                )
    return rows


def write_sim_csv(rows: Sequence[SimRow], path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SIM_CSV_HEADER)
        for r in rows:
            eps = "strong" if math.isinf(r.epsilon) else repr(r.epsilon)
            bound = "" if r.bound is None else repr(r.bound)
            margin = "" if r.bound is None else repr(r.bound - r.deviation)
            ok = "" if r.ok is None else str(int(r.ok))
            writer.writerow(
                [r.variant, r.m, eps, repr(r.zeta), repr(r.deviation), bound, margin, ok]
            )
