"""The inclusion matrix C_pq and finite-horizon inclusion diagnostics.

``C_pq`` is the lower-triangular matrix with ``N^q r = C_pq (N^p r)``; its
entries are ``c_{m,n} = k_{m-n} P_n / Q_m`` where ``k`` solves ``q = k * p``.
Conservative inclusion of (N,p) in (N,q) is decided from

* condition one: ``rho_m = (|k_0| P_m + ... + |k_m| P_0) / Q_m`` stays bounded;
* the column limits ``eps_n = lim k_{m-n} / Q_m``, which either all vanish
  (regular inclusion) or are ``eps_0 * beta**n`` with
  ``beta = lim Q_{m-1} / Q_m``.

All verdicts hold only up to the horizon ``M`` of the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .numerics import (
    BOUNDED,
    GROWING,
    LimitConfig,
    LimitEstimate,
    NumericsError,
    detect_growth,
    detect_limit,
    detect_vanishing,
    render_rational,
    to_float,
)
from .transform import HorizonMismatch, KernelSequence, common_denominator, solve_kernel
from .weights import WeightSequence

REGULAR_INCLUSION = "regular-inclusion"
CONSERVATIVE_NONREGULAR = "conservative-nonregular-inclusion"
NO_INCLUSION = "no-inclusion-detected"
INCONCLUSIVE = "inconclusive"

REGULAR_AT_HORIZON = "regular-at-horizon"
NOT_REGULAR_AT_HORIZON = "not-regular-at-horizon"


class InvariantViolation(RuntimeError):
    """An identity that must hold exactly in rational arithmetic failed."""


# --------------------------------------------------------------------------
# The matrix
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class InclusionMatrix:
    p: WeightSequence
    q: WeightSequence
    k: KernelSequence
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def horizon(self) -> int:
        return len(self.rows) - 1

    def entry(self, m: int, n: int) -> Fraction:
        return self.rows[m][n] if n <= m else Fraction(0)

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.rows]

    def abs_row_sums(self) -> list[Fraction]:
        return [sum((abs(c) for c in row), Fraction(0)) for row in self.rows]

    def column(self, n: int) -> list[Fraction]:
        """``(c_{m,n} : n <= m <= M)``."""
        return [self.rows[m][n] for m in range(n, len(self.rows))]

    def check_row_sums(self) -> None:
        for m, total in enumerate(self.row_sums()):
            if total != 1:
                raise InvariantViolation(f"row {m} of C_pq sums to {render_rational(total)}, not 1")

    def csv_records(self):
        """Yield ``(m, n, numerator, denominator)`` for every stored entry."""
        for m, row in enumerate(self.rows):
            for n, c in enumerate(row):
                yield m, n, c.numerator, c.denominator


def inclusion_matrix(p: WeightSequence, q: WeightSequence) -> InclusionMatrix:
    k = solve_kernel(p, q)
    P, Q = p.partial_sums, q.partial_sums
    rows = tuple(
        tuple(k[m - n] * P[n] / Q[m] for n in range(m + 1))
        for m in range(len(k))
    )
    return InclusionMatrix(p, q, k, rows)


def apply_inclusion_matrix(C: InclusionMatrix, s: Sequence) -> tuple:
    if len(s) != len(C.rows):
        raise HorizonMismatch(f"horizon mismatch: matrix has {len(C.rows)} rows, sequence {len(s)} terms")
    s = [Fraction(x) for x in s]
    return tuple(sum((c * s[n] for n, c in enumerate(row)), Fraction(0)) for row in C.rows)


# --------------------------------------------------------------------------
# Condition one
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundednessVerdict:
    status: str
    sup_value: Fraction
    witness_index: int
    rho: tuple[Fraction, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        return {"status": self.status, "sup": render_rational(self.sup_value), "witness": self.witness_index}


def _bounded_verdict(rho: Sequence[Fraction], cfg: LimitConfig) -> BoundednessVerdict:
    sup = max(rho)
    witness = next(i for i, v in enumerate(rho) if v == sup)
    return BoundednessVerdict(detect_growth(rho, cfg), sup, witness, tuple(rho))


def riesz_condition_one(p: WeightSequence, q: WeightSequence, k: KernelSequence | None = None,
                        cfg: LimitConfig = LimitConfig()) -> BoundednessVerdict:
    """Check ``|k_0| P_m + ... + |k_m| P_0 <= H Q_m`` up to the horizon."""
    if k is None:
        k = solve_kernel(p, q)
    if not len(p) == len(q) == len(k):
        raise HorizonMismatch("p, q and k must share a horizon")
    # integer sums over common denominators: rho_m = Dq * sum|K_j| A_{m-j} / (Dk Dp B_m)
    K, dk = common_denominator(k)
    A, dp = common_denominator(p.partial_sums)
    B, dq = common_denominator(q.partial_sums)
    absK = [abs(x) for x in K]
    rho = [
        Fraction(dq * sum(absK[j] * A[m - j] for j in range(m + 1)), dk * dp * B[m])
        for m in range(len(k))
    ]
    return _bounded_verdict(rho, cfg)


# --------------------------------------------------------------------------
# Limits
# --------------------------------------------------------------------------


def _partial_sums(Q) -> Sequence[Fraction]:
    return Q.partial_sums if isinstance(Q, WeightSequence) else Q


def epsilon_sequence(k: KernelSequence, Q, n: int) -> list[Fraction]:
    """``(k_{m-n} / Q_m : n <= m <= M)``."""
    Q = _partial_sums(Q)
    return [k[m - n] / Q[m] for m in range(n, len(Q))]


def epsilon_estimates(k: KernelSequence, Q, n_max: int,
                      cfg: LimitConfig = LimitConfig()) -> list[LimitEstimate]:
    Q = _partial_sums(Q)
    horizon = len(Q) - 1
    if not n_max < horizon / 2:
        raise NumericsError(f"n_max={n_max} must be below half the horizon {horizon}")
    return [detect_limit(epsilon_sequence(k, Q, n), cfg) for n in range(n_max + 1)]


def beta_sequence(Q) -> list[Fraction]:
    Q = _partial_sums(Q)
    return [Q[m - 1] / Q[m] for m in range(1, len(Q))]


def beta_estimate(Q, cfg: LimitConfig = LimitConfig()) -> LimitEstimate:
    """Estimate ``lim Q_{m-1} / Q_m``."""
    return detect_limit(beta_sequence(Q), cfg)


@dataclass(frozen=True)
class RegularityVerdict:
    """Whether (N,q) looks regular, i.e. ``Q_{m-1}/Q_m -> 1``."""

    verdict: str
    estimate: LimitEstimate
    defect_vanishing: bool

    @property
    def regular(self) -> bool:
        return self.verdict == REGULAR_AT_HORIZON

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "defect_vanishing": self.defect_vanishing, **self.estimate.to_dict()}


def regularity_of_method(q: WeightSequence, cfg: LimitConfig = LimitConfig()) -> RegularityVerdict:
    """Regular iff the ratio settles at 1, or its defect ``q_m / Q_m`` decays.

    ``1 - Q_{m-1}/Q_m = q_m/Q_m``; the decay route is needed for methods whose
    ratio creeps to 1 algebraically (Cesàro weights), which no Cauchy window
    at a small tolerance can certify.
    """
    est = beta_estimate(q, cfg)
    defect = [q.values[m] / q.partial_sums[m] for m in range(1, len(q))]
    vanishing = detect_vanishing(defect, cfg)
    if (est.converged and abs(est.value - 1) <= cfg.tolerance) or vanishing:
        verdict = REGULAR_AT_HORIZON
    elif est.converged:
        verdict = NOT_REGULAR_AT_HORIZON
    else:
        verdict = INCONCLUSIVE
    return RegularityVerdict(verdict, est, vanishing)


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------


def _effective_n_max(horizon: int, cfg: LimitConfig) -> int:
    # n < M/2 and every epsilon tail must still fill a window
    return max(0, min(cfg.n_max, (horizon - 1) // 2, horizon + 1 - cfg.window))


def _check_horizon(p: WeightSequence, q: WeightSequence, cfg: LimitConfig) -> int:
    if len(p) != len(q):
        raise HorizonMismatch(f"horizon mismatch: p has {p.horizon}, q has {q.horizon}")
    if p.horizon < cfg.window:
        raise NumericsError(f"horizon {p.horizon} is shorter than window {cfg.window}")
    return p.horizon


@dataclass(frozen=True)
class DiagnosticsReport:
    p_label: str
    q_label: str
    horizon: int
    config: LimitConfig
    kernel: KernelSequence = field(repr=False)
    condition_one: BoundednessVerdict
    epsilon: tuple[LimitEstimate, ...]
    epsilon0_vanishing: bool
    beta: LimitEstimate
    q_regular: RegularityVerdict
    classification: str

    @property
    def epsilon0(self) -> LimitEstimate:
        return self.epsilon[0]

    def to_dict(self) -> dict:
        return {
            "p": self.p_label,
            "q": self.q_label,
            "horizon": self.horizon,
            "classification": self.classification,
            "condition_one": self.condition_one.to_dict(),
            "epsilon": [{"n": n, **e.to_dict()} for n, e in enumerate(self.epsilon)],
            "epsilon0_vanishing": self.epsilon0_vanishing,
            "beta": self.beta.to_dict(),
            "q_regular": self.q_regular.to_dict(),
            "config": self.config.to_dict(),
        }


def decide(condition_one: BoundednessVerdict, eps0: LimitEstimate, eps0_vanishing: bool,
           beta: LimitEstimate, cfg: LimitConfig) -> str:
    """The decision table; ``inconclusive`` whenever a needed limit is missing."""
    if condition_one.status == GROWING:
        return NO_INCLUSION
    if condition_one.status != BOUNDED:
        return INCONCLUSIVE
    if eps0_vanishing:
        return REGULAR_INCLUSION
    if eps0.converged and abs(eps0.value) > cfg.zero_threshold and beta.converged:
        return CONSERVATIVE_NONREGULAR
    return INCONCLUSIVE


def classify_inclusion(p: WeightSequence, q: WeightSequence,
                       cfg: LimitConfig = LimitConfig()) -> DiagnosticsReport:
    horizon = _check_horizon(p, q, cfg)
    k = solve_kernel(p, q)
    cond = riesz_condition_one(p, q, k, cfg)
    Q = q.partial_sums
    eps = epsilon_estimates(k, Q, _effective_n_max(horizon, cfg), cfg)
    eps0_vanishing = detect_vanishing(epsilon_sequence(k, Q, 0), cfg, eps[0])
    beta = beta_estimate(Q, cfg)
    q_reg = regularity_of_method(q, cfg)
    return DiagnosticsReport(
        p_label=p.label, q_label=q.label, horizon=horizon, config=cfg, kernel=k,
        condition_one=cond, epsilon=tuple(eps), epsilon0_vanishing=eps0_vanishing,
        beta=beta, q_regular=q_reg,
        classification=decide(cond, eps[0], eps0_vanishing, beta, cfg),
    )


# --------------------------------------------------------------------------
# Generic matrix view
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnLimit:
    n: int
    epsilon: LimitEstimate
    delta: float | None  # eps_n * P_n
    vanishing: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "delta": self.delta, "vanishing": self.vanishing, "epsilon": self.epsilon.to_dict()}


@dataclass(frozen=True)
class KojimaSchurReport:
    row_abs_sum: BoundednessVerdict
    columns: tuple[ColumnLimit, ...]
    row_sum: LimitEstimate
    row_sums_exactly_one: bool
    conservative: str
    regular: str

    def to_dict(self) -> dict:
        return {
            "row_abs_sum": self.row_abs_sum.to_dict(),
            "columns": [c.to_dict() for c in self.columns],
            "row_sum": self.row_sum.to_dict(),
            "row_sums_exactly_one": self.row_sums_exactly_one,
            "conservative": self.conservative,
            "regular": self.regular,
        }


def kojima_schur_report(C: InclusionMatrix, cfg: LimitConfig = LimitConfig()) -> KojimaSchurReport:
    """Row absolute sums, column limits and row-sum limit of ``C``."""
    horizon = C.horizon
    if horizon < cfg.window:
        raise NumericsError(f"horizon {horizon} is shorter than window {cfg.window}")
    row_abs = _bounded_verdict(C.abs_row_sums(), cfg)
    sums = C.row_sums()
    row_sum = detect_limit(sums, cfg)
    P, Q = C.p.partial_sums, C.q.partial_sums
    columns = []
    for n in range(_effective_n_max(horizon, cfg) + 1):
        seq = epsilon_sequence(C.k, Q, n)
        est = detect_limit(seq, cfg)
        delta = None if est.value is None else est.value * to_float(P[n])
        columns.append(ColumnLimit(n, est, delta, detect_vanishing(seq, cfg, est)))

    columns_exist = all(c.epsilon.converged or c.vanishing for c in columns)
    if row_abs.status == GROWING:
        conservative = "not-conservative"
    elif row_abs.status == BOUNDED and columns_exist and row_sum.converged:
        conservative = "conservative"
    else:
        conservative = INCONCLUSIVE
    if conservative != "conservative":
        regular = conservative if conservative == INCONCLUSIVE else "not-regular"
    elif abs(row_sum.value - 1) <= cfg.tolerance and all(c.vanishing for c in columns):
        regular = "regular"
    else:
        regular = "not-regular"
    return KojimaSchurReport(
        row_abs_sum=row_abs, columns=tuple(columns), row_sum=row_sum,
        row_sums_exactly_one=all(s == 1 for s in sums),
        conservative=conservative, regular=regular,
    )
