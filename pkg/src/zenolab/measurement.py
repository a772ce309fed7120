"""Weak measurement operators, channels, and stabilizer Kraus sets.

A two-outcome weak measurement of an involution V with strength eps uses the
operator pair P_V(+eps), P_V(-eps), where

    P_V(eps) = a_plus(eps) P_{+V} + a_minus(eps) P_{-V},
    a_pm(eps) = sqrt((1 +- tanh(eps)) / 2),   P_{+-V} = (1 +- V) / 2.

The pair squares to a resolution of identity, so it is a valid measurement.
The channel is the convex combination (1 - zeta) * strong + zeta * identity
with zeta = sech(eps); eps = +inf is the exact strong-measurement marker
(zeta == 0.0 exactly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .hilbert import DensityMatrix, embed_system
from .pauli import PauliOperator, StabilizerCode, pauli_to_matrix

SUM_RULE_TOL = 1e-12


class ChannelError(ValueError):
    """Kraus operators do not form a trace-preserving channel."""


@dataclass(frozen=True)
class MeasurementStrength:
    """Strength eps >= 0 with derived zeta = sech(eps); eps=inf means strong."""

    epsilon: float
    zeta: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.epsilon >= 0):
            raise ValueError(f"epsilon must be >= 0 (or inf), got {self.epsilon}")
        z = 0.0 if math.isinf(self.epsilon) else 1.0 / math.cosh(self.epsilon)
        object.__setattr__(self, "zeta", z)

    @classmethod
    def strong(cls) -> "MeasurementStrength":
        return cls(math.inf)

    @property
    def is_strong(self) -> bool:
        return math.isinf(self.epsilon)

    def alpha(self, sign: int) -> tuple[float, float]:
        """(a_plus, a_minus) evaluated at sign*eps."""
        t = math.tanh(math.copysign(self.epsilon, sign)) if self.epsilon else 0.0
        return math.sqrt((1 + t) / 2), math.sqrt((1 - t) / 2)

    def __str__(self) -> str:
        return "strong" if self.is_strong else repr(self.epsilon)


def weak_projector(
    v: PauliOperator, s: MeasurementStrength, sign: int = +1
) -> np.ndarray:
    """Measurement operator P_V(sign*eps) as a dense system matrix."""
    vm = pauli_to_matrix(v)
    if np.max(np.abs(vm @ vm - np.eye(vm.shape[0]))) > 1e-12:
        raise ValueError(f"{v} does not square to identity")
    eye = np.eye(vm.shape[0], dtype=complex)
    a_plus, a_minus = s.alpha(sign)
    return a_plus * (eye + vm) / 2 + a_minus * (eye - vm) / 2


@dataclass(frozen=True)
class KrausSet:
    """Channel rho -> sum_b K_b rho K_b^dag over a system factor."""

    operators: tuple[np.ndarray, ...]
    label: Literal["single", "generators", "group"]

    def __post_init__(self) -> None:
        dim = self.operators[0].shape[0]
        acc = np.zeros((dim, dim), dtype=complex)
        for k in self.operators:
            acc += k.conj().T @ k
        defect = np.max(np.abs(acc - np.eye(dim)))
        if defect > SUM_RULE_TOL:
            raise ChannelError(f"sum rule violated by {defect:.3e}")
        for k in self.operators:
            k.setflags(write=False)

    @property
    def system_dim(self) -> int:
        return self.operators[0].shape[0]

    def apply_matrix(self, mat: np.ndarray, bath_dim: int | None = None) -> np.ndarray:
        """Apply the channel to an arbitrary operator (system or system x bath)."""
        ops = self.operators
        if bath_dim is not None and bath_dim > 1:
            ops = tuple(embed_system(k, bath_dim) for k in ops)
        out = np.zeros_like(mat, dtype=complex)
        for k in ops:
            out += k @ mat @ k.conj().T
        return out

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        bath_dim = rho.bath_dim if rho.bath else None
        out = self.apply_matrix(rho.matrix, bath_dim)
        return DensityMatrix(rho.dims, out, rho.bath)


def apply_weak_single(
    rho: DensityMatrix, v: PauliOperator, s: MeasurementStrength
) -> DensityMatrix:
    """Non-selective weak measurement of a single system observable."""
    return kraus_set_single(v, s).apply(rho)


def apply_kraus(rho: DensityMatrix, ks: KrausSet) -> DensityMatrix:
    return ks.apply(rho)


@lru_cache(maxsize=64)
def kraus_set_single(v: PauliOperator, s: MeasurementStrength) -> KrausSet:
    ops = (weak_projector(v, s, +1), weak_projector(v, s, -1))
    return KrausSet(ops, "single")


def _sign_product_operators(
    measured: tuple[PauliOperator, ...], s: MeasurementStrength
) -> tuple[np.ndarray, ...]:
    """K_b = prod_i P_{V_i}((-1)^{b_i} eps) with b_i = bit i of b.

    All measured operators commute, so the factor ordering is immaterial;
    we multiply in list order.
    """
    dim = 2 ** measured[0].n
    plus = [weak_projector(v, s, +1) for v in measured]
    minus = [weak_projector(v, s, -1) for v in measured]
    ops = []
    for b in range(1 << len(measured)):
        k = np.eye(dim, dtype=complex)
        for i in range(len(measured)):
            k = k @ (minus[i] if (b >> i) & 1 else plus[i])
        ops.append(k)
    return tuple(ops)


@lru_cache(maxsize=64)
def kraus_set_generators(code: StabilizerCode, s: MeasurementStrength) -> KrausSet:
    """2**Qbar Kraus operators from all sign patterns over the generators."""
    return KrausSet(_sign_product_operators(code.generators, s), "generators")


@lru_cache(maxsize=64)
def kraus_set_group(code: StabilizerCode, s: MeasurementStrength) -> KrausSet:
    """2**Q Kraus operators over the non-identity group elements.

    The identity element is excluded from the measured set: its projector
    pair is {1, 0}, so including it only doubles every sign branch without
    changing the channel.
    """
    measured = code.group[1:]
    return KrausSet(_sign_product_operators(measured, s), "group")


def channel_for_variant(
    code: StabilizerCode,
    s: MeasurementStrength,
    variant: Literal["group", "generators", "strong", "none"],
) -> KrausSet | None:
    """The per-round measurement channel, or None for the no-measurement run."""
    if variant == "none":
        return None
    if variant == "strong":
        return kraus_set_group(code, MeasurementStrength.strong())
    if variant == "group":
        return kraus_set_group(code, s)
    if variant == "generators":
        return kraus_set_generators(code, s)
    raise ValueError(f"unknown variant {variant!r}")
