"""Closed-form deviation bounds for the repeated-measurement protocols.

All quantities are scalar functions of (J0, J1, tau, M, Q, q, zeta):

    beta    = exp(tau J0/M) (Q exp(-tau J1/M) + exp(tau J1 Q/M))/(Q+1) - 1
    gamma_pm = (1+beta+(1+Q beta) z)/2
               +- sqrt((1+beta-(1+Q beta) z)^2 + 4 Q beta^2 z)/2,  z = zeta**q
    A_pm    = (Q beta z (gamma_pm + beta) + (1+beta)((1+beta) - gamma_mp))
              / (gamma_pm - gamma_mp)
    B       = A_+ gamma_+^{M-1} + A_- gamma_-^{M-1} - exp(J0 tau)

The group protocol uses q = (Q+1)/2, the generator protocol q = 1.  In the
strong limit (zeta = 0) both collapse to

    B_strong = exp(J0 tau) [((Q exp(-J1 tau/M) + exp(J1 tau Q/M))/(Q+1))^M - 1]

and bound_exact routes zeta == 0 through the same arithmetic so the collapse
is exact, not merely close.  beta and B_strong are evaluated expm1/log1p
style because beta -> 0 as M grows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Literal, Sequence

Variant = Literal["group", "generators", "strong"]

# Values in [-1e-12, 0) are roundoff from coincident surfaces.
NEG_ZERO_CLAMP = -1e-12
DEGENERATE_GAP = 1e-12


class DegenerateRootError(ArithmeticError):
    """gamma_+ and gamma_- coincide; the coefficient formula divides by zero."""


@dataclass(frozen=True)
class BoundInputs:
    """Scalar inputs: norms J0 >= J1 >= 0, time tau, rounds m, counts Q and q."""

    j0: float
    j1: float
    tau: float
    m: int
    q_cap: int
    q_small: int
    zeta: float

    def __post_init__(self) -> None:
        if self.j0 < 0 or self.j1 < 0 or self.tau < 0:
            raise ValueError("j0, j1, tau must be nonnegative")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.q_cap < 1 or self.q_small < 1:
            raise ValueError("q_cap and q_small must be >= 1")
        if not 0.0 <= self.zeta <= 1.0:
            raise ValueError(f"zeta must be in [0, 1], got {self.zeta}")

    @property
    def lam(self) -> float:
        """lambda = J1/J0."""
        if self.j0 <= 0:
            raise ValueError("lambda undefined for j0 = 0")
        return self.j1 / self.j0

    @classmethod
    def for_variant(
        cls,
        variant: Variant,
        *,
        j0: float,
        j1: float,
        tau: float,
        m: int,
        qbar: int,
        zeta: float,
    ) -> "BoundInputs":
        q_cap = 2**qbar - 1
        if variant == "group":
            q_small = 2 ** (qbar - 1)
        elif variant == "generators":
            q_small = 1
        elif variant == "strong":
            q_small, zeta = 2 ** (qbar - 1), 0.0
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return cls(j0, j1, tau, m, q_cap, q_small, zeta)


@dataclass(frozen=True)
class BoundResult:
    beta: float
    gamma_plus: float
    gamma_minus: float
    a_plus: float
    a_minus: float
    b_exact: float
    b_first_order: float | None
    b_strong: float

    def __post_init__(self) -> None:
        if self.b_exact < NEG_ZERO_CLAMP:
            raise ValueError(f"negative bound {self.b_exact}")
        if self.gamma_plus < self.gamma_minus:
            raise ValueError("gamma_plus < gamma_minus")


def _bracket_minus_one(c: float, q_cap: int) -> float:
    """(Q exp(-c) + exp(cQ))/(Q+1) - 1, accurate for small c."""
    return (q_cap * math.expm1(-c) + math.expm1(c * q_cap)) / (q_cap + 1)


def beta(inputs: BoundInputs) -> float:
    """Per-round growth factor; nonnegative, -> 0 as m -> inf."""
    a = inputs.tau * inputs.j0 / inputs.m
    c = inputs.tau * inputs.j1 / inputs.m
    if a > 700 or c * inputs.q_cap > 700:
        raise OverflowError("bound arguments overflow double precision")
    w1 = _bracket_minus_one(c, inputs.q_cap)
    # exp(a)(1 + w1) - 1 = expm1(a)(1 + w1) + w1
    return math.expm1(a) * (1.0 + w1) + w1


def gamma_pair(beta_val: float, zeta: float, q: int, q_cap: int) -> tuple[float, float]:
    """Both roots of the two-term recurrence; returns (gamma_+, gamma_-)."""
    z = zeta**q
    s = 1.0 + beta_val + (1.0 + q_cap * beta_val) * z
    disc = (1.0 + beta_val - (1.0 + q_cap * beta_val) * z) ** 2 + 4.0 * q_cap * beta_val**2 * z
    if disc < -1e-14:
        raise ArithmeticError(f"negative discriminant {disc} (analytically impossible)")
    root = math.sqrt(max(disc, 0.0))
    return (s + root) / 2.0, (s - root) / 2.0


def coefficient_pair(
    beta_val: float,
    zeta: float,
    q: int,
    q_cap: int,
    gammas: tuple[float, float],
) -> tuple[float, float]:
    """Expansion coefficients (A_+, A_-); raises on a degenerate root pair."""
    gp, gm = gammas
    gap = gp - gm
    if abs(gap) < DEGENERATE_GAP:
        raise DegenerateRootError(f"root gap {gap} below {DEGENERATE_GAP}")
    z = zeta**q
    one_b = 1.0 + beta_val
    a_plus = (q_cap * beta_val * z * (gp + beta_val) + one_b * (one_b - gm)) / gap
    a_minus = (q_cap * beta_val * z * (gm + beta_val) + one_b * (one_b - gp)) / -gap
    return a_plus, a_minus


def _clamp(b: float) -> float:
    return 0.0 if NEG_ZERO_CLAMP <= b < 0.0 else b


def _power_sum(inputs: BoundInputs) -> float:
    """A_+ gamma_+^{M-1} + A_- gamma_-^{M-1}, with the degenerate-root limit."""
    b = beta(inputs)
    gp, gm = gamma_pair(b, inputs.zeta, inputs.q_small, inputs.q_cap)
    m = inputs.m
    try:
        a_plus, a_minus = coefficient_pair(b, inputs.zeta, inputs.q_small, inputs.q_cap, (gp, gm))
    except DegenerateRootError:
        # l'Hopital limit of the pair sum at gamma_+ = gamma_- = g
        g = (gp + gm) / 2.0
        z = inputs.zeta**inputs.q_small
        one_b = 1.0 + b
        total = (inputs.q_cap * b * z + one_b) * g ** (m - 1)
        if m >= 2:
            num = inputs.q_cap * b * z * (g + b) + one_b * one_b
            total += (num - one_b * g) * (m - 1) * g ** (m - 2)
        return total
    return a_plus * gp ** (m - 1) + a_minus * gm ** (m - 1)


def bound_exact(inputs: BoundInputs) -> float:
    """The exact closed-form deviation bound B."""
    if inputs.zeta == 0.0:
        return bound_strong(inputs)
    return _clamp(_power_sum(inputs) - math.exp(inputs.j0 * inputs.tau))


def bound_first_order(inputs: BoundInputs) -> float:
    """Leading 1/M term of the exact bound's large-M expansion.

    Series-expanding the beta/gamma/A chain gives

        B = Q exp(tau J0) [tau^2 J1^2/2
            + (tau J0 + tau^2 J0^2) z/(1-z)] / M + O(1/M^2),  z = zeta**q,

    with prefactor Q (the residual against this term decays as M**-2,
    which the tests pin down; a Q/2 prefactor would leave an O(1/M)
    residual).
    """
    if inputs.zeta >= 1.0:
        raise ValueError("first-order bound diverges at zeta = 1")
    z = inputs.zeta**inputs.q_small
    t, j0, j1 = inputs.tau, inputs.j0, inputs.j1
    coeff = (
        inputs.q_cap
        * math.exp(t * j0)
        * (t**2 * j1**2 / 2.0 + (t * j0 + t**2 * j0**2) * z / (1.0 - z))
    )
    return coeff / inputs.m


def bound_strong(inputs: BoundInputs) -> float:
    """Strong-measurement (zeta -> 0) limit of the bound."""
    c = inputs.tau * inputs.j1 / inputs.m
    if c * inputs.q_cap > 700 or inputs.j0 * inputs.tau > 700:
        raise OverflowError("bound arguments overflow double precision")
    w1 = _bracket_minus_one(c, inputs.q_cap)
    return _clamp(math.exp(inputs.j0 * inputs.tau) * math.expm1(inputs.m * math.log1p(w1)))


def evaluate(inputs: BoundInputs) -> BoundResult:
    """All intermediate quantities plus the three bound flavors."""
    b = beta(inputs)
    gp, gm = gamma_pair(b, inputs.zeta, inputs.q_small, inputs.q_cap)
    try:
        a_plus, a_minus = coefficient_pair(b, inputs.zeta, inputs.q_small, inputs.q_cap, (gp, gm))
    except DegenerateRootError:
        a_plus = a_minus = math.nan
    first = None if inputs.zeta >= 1.0 else bound_first_order(inputs)
    return BoundResult(
        beta=b,
        gamma_plus=gp,
        gamma_minus=gm,
        a_plus=a_plus,
        a_minus=a_minus,
        b_exact=bound_exact(inputs),
        b_first_order=first,
        b_strong=bound_strong(replace(inputs, zeta=0.0)),
    )


# -- sweeps ----------------------------------------------------------------

SWEEP_CSV_HEADER = ["variant", "M", "lambda", "zeta", "J0tau", "Qbar", "B"]


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid over M and one of lambda/zeta, the other held fixed."""

    j0tau: float
    qbar: int
    m_values: tuple[int, ...]
    axis: Literal["lambda", "zeta"]
    axis_values: tuple[float, ...]
    fixed_lambda: float | None = None
    fixed_zeta: float | None = None

    def __post_init__(self) -> None:
        if not self.m_values or not self.axis_values:
            raise ValueError("sweep grid is empty")
        if self.axis == "lambda" and self.fixed_zeta is None:
            raise ValueError("lambda axis needs fixed_zeta")
        if self.axis == "zeta" and self.fixed_lambda is None:
            raise ValueError("zeta axis needs fixed_lambda")

    @classmethod
    def surface_left(cls) -> "SweepGrid":
        """lambda in {0, 0.05, ..., 1}, M in 1..60, at J0 tau = 1, Qbar = 4, zeta = 0.5."""
        return cls(
            j0tau=1.0,
            qbar=4,
            m_values=tuple(range(1, 61)),
            axis="lambda",
            axis_values=tuple(round(0.05 * i, 10) for i in range(21)),
            fixed_zeta=0.5,
        )

    @classmethod
    def surface_right(cls) -> "SweepGrid":
        """zeta in {0, 0.05, ..., 0.95}, M in 1..60, at J0 tau = 1, Qbar = 4, lambda = 0.1."""
        return cls(
            j0tau=1.0,
            qbar=4,
            m_values=tuple(range(1, 61)),
            axis="zeta",
            axis_values=tuple(round(0.05 * i, 10) for i in range(20)),
            fixed_lambda=0.1,
        )


@dataclass(frozen=True)
class SweepPoint:
    m: int
    lam: float
    zeta: float
    b_generators: float
    b_group: float
    b_strong: float


def sweep_bounds(grid: SweepGrid) -> list[SweepPoint]:
    """Evaluate all three bound flavors over the grid, M-major order."""
    rows = []
    for m in grid.m_values:
        for val in grid.axis_values:
            lam = val if grid.axis == "lambda" else grid.fixed_lambda
            zeta = grid.fixed_zeta if grid.axis == "lambda" else val
            common = dict(
                j0=grid.j0tau, j1=lam * grid.j0tau, tau=1.0, m=m, qbar=grid.qbar
            )
            rows.append(
                SweepPoint(
                    m=m,
                    lam=lam,
                    zeta=zeta,
                    b_generators=bound_exact(
                        BoundInputs.for_variant("generators", zeta=zeta, **common)
                    ),
                    b_group=bound_exact(
                        BoundInputs.for_variant("group", zeta=zeta, **common)
                    ),
                    b_strong=bound_strong(
                        BoundInputs.for_variant("strong", zeta=zeta, **common)
                    ),
                )
            )
    return rows


def write_sweep_csv(rows: Sequence[SweepPoint], grid: SweepGrid, path: str) -> None:
    """Long-format CSV, variant-major then M-major; deterministic bytes."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_CSV_HEADER)
        for variant in ("generators", "group", "strong"):
            for row in rows:
                b = {
                    "generators": row.b_generators,
                    "group": row.b_group,
                    "strong": row.b_strong,
                }[variant]
                writer.writerow(
                    [variant, row.m, repr(row.lam), repr(row.zeta), repr(grid.j0tau), grid.qbar, repr(b)]
                )
