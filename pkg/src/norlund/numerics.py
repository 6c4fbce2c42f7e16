"""Scalar arithmetic helpers and finite-horizon limit/growth detectors.

Every quantity in the package is computed with exact :class:`fractions.Fraction`
arithmetic.  Floats only appear when a finished exact sequence is handed to a
detector, and they are always produced by a single conversion per entry.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[Fraction, int, float]

CONVERGED = "converged"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

BOUNDED = "bounded-at-horizon"
GROWING = "growing-at-horizon"

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[+-]?\d+)?$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


class NumericsError(ValueError):
    """Raised for malformed numeric input or detector misuse."""


# --------------------------------------------------------------------------
# Rationals
# --------------------------------------------------------------------------


def parse_rational(token: str, *, allow_decimal: bool = False) -> Fraction:
    """Parse ``a`` or ``a/b`` (optionally signed) into a reduced Fraction.

    Decimal notation is rejected unless ``allow_decimal`` is set, in which
    case it is converted exactly (``"0.1"`` becomes ``1/10``).
    """
    text = token.strip()
    if _RATIONAL_RE.match(text):
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise NumericsError(f"zero denominator in {token!r}")
        return Fraction(int(num), int(den) if den else 1)
    if allow_decimal and _DECIMAL_RE.match(text):
        return Fraction(text)
    raise NumericsError(f"not a rational number: {token!r}")


def render_rational(x: Fraction | int) -> str:
    """Canonical rendering: ``a/b`` with ``b > 0``, or just ``a`` when b == 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_float(x: Number) -> float:
    """Correctly rounded float of an exact value; out-of-range maps to +-inf."""
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf


def to_floats(xs: Iterable[Number]) -> list[float]:
    return [to_float(x) for x in xs]


def render_value(x: Number, mode: str = "exact") -> str:
    """Render a value in ``exact`` (rational string) or ``float`` mode."""
    if mode == "exact":
        return render_rational(x)
    if mode == "float":
        return repr(to_float(x))
    raise NumericsError(f"unknown arithmetic mode {mode!r}")


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitConfig:
    """Parameters that turn ideal limits into finite-horizon verdicts."""

    horizon: int = 64
    window: int = 8
    tolerance: float = 1e-9
    zero_threshold: float = 1e-6
    growth_factor: Fraction = Fraction(3, 2)
    n_max: int = 8

    def __post_init__(self):
        if not isinstance(self.horizon, int) or self.horizon < 0:
            raise NumericsError(f"horizon must be a nonnegative integer, got {self.horizon!r}")
        if not isinstance(self.window, int) or self.window < 2:
            raise NumericsError(f"window must be an integer >= 2, got {self.window!r}")
        if self.window > self.horizon:
            raise NumericsError(f"window {self.window} exceeds horizon {self.horizon}")
        if not self.tolerance > 0:
            raise NumericsError(f"tolerance must be positive, got {self.tolerance!r}")
        if not self.zero_threshold >= 0:
            raise NumericsError(f"zero_threshold must be nonnegative, got {self.zero_threshold!r}")
        object.__setattr__(self, "growth_factor", Fraction(self.growth_factor))
        if not self.growth_factor > 1:
            raise NumericsError(f"growth_factor must exceed 1, got {self.growth_factor}")
        if not isinstance(self.n_max, int) or self.n_max < 0:
            raise NumericsError(f"n_max must be a nonnegative integer, got {self.n_max!r}")

    def with_horizon(self, horizon: int) -> "LimitConfig":
        return replace(self, horizon=horizon)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["growth_factor"] = render_rational(self.growth_factor)
        return d


# --------------------------------------------------------------------------
# Detectors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitEstimate:
    """Finite-horizon estimate of ``lim x_m``.

    ``value`` is the mean of the last ``window`` terms.  It is filled whenever
    the tail is finite but is only a limit when ``status == "converged"``.
    """

    status: str
    value: float | None
    horizon: int
    window: int
    tolerance: float
    note: str | None = None

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def to_dict(self) -> dict:
        d = {
            "status": self.status,
            "value": self.value,
            "horizon": self.horizon,
            "window": self.window,
            "tolerance": self.tolerance,
        }
        if self.note is not None:
            d["note"] = self.note
        return d


def _mid_index(length: int) -> int:
    # ceil((length - 1) / 2)
    return length // 2


def _check_length(x: Sequence, window: int) -> None:
    if len(x) < window:
        raise NumericsError(f"sequence of length {len(x)} is shorter than window {window}")


def detect_limit(x: Sequence[Number], cfg: LimitConfig = LimitConfig()) -> LimitEstimate:
    """Cauchy-window limit test on the tail of ``x``.

    Converged when every pair among the last ``window`` terms differs by at most
    ``cfg.tolerance``; diverging when ``|x|`` strictly increases over the window
    and its last term exceeds ``growth_factor`` times the mid-horizon term.
    """
    w = cfg.window
    _check_length(x, w)
    xs = to_floats(x)
    horizon = len(xs) - 1
    tail = xs[-w:]
    if not all(math.isfinite(t) for t in tail):
        return LimitEstimate(INCONCLUSIVE, None, horizon, w, cfg.tolerance, note="overflow")
    value = math.fsum(tail) / w
    # pairwise spread of a finite set is max - min
    if max(tail) - min(tail) <= cfg.tolerance:
        return LimitEstimate(CONVERGED, value, horizon, w, cfg.tolerance)
    mags = [abs(t) for t in tail]
    increasing = all(a < b for a, b in zip(mags, mags[1:]))
    mid = abs(xs[_mid_index(len(xs))])
    if increasing and mags[-1] > float(cfg.growth_factor) * mid:
        return LimitEstimate(DIVERGING, value, horizon, w, cfg.tolerance)
    return LimitEstimate(INCONCLUSIVE, value, horizon, w, cfg.tolerance)


def detect_growth(x: Sequence[Number], cfg: LimitConfig = LimitConfig()) -> str:
    """Classify a nonnegative sequence as bounded, growing, or inconclusive.

    Works on exact values when given Fractions.
    """
    w = cfg.window
    _check_length(x, w)
    horizon = len(x) - 1
    tail = x[-w:]
    if all(a < b for a, b in zip(tail, tail[1:])) and x[-1] > cfg.growth_factor * x[_mid_index(len(x))]:
        return GROWING
    top = max(x)
    first_max = next(i for i, v in enumerate(x) if v == top)
    if first_max <= horizon - w:
        return BOUNDED
    return INCONCLUSIVE


def detect_vanishing(x: Sequence[Number], cfg: LimitConfig = LimitConfig(),
                     estimate: LimitEstimate | None = None) -> bool:
    """Finite-horizon evidence that ``x_m -> 0``.

    A converged tail vanishes iff its value is within ``zero_threshold``.  A tail
    that has not settled still counts as vanishing when ``|x|`` is nonincreasing
    over the window and has shrunk by more than ``growth_factor`` since
    mid-horizon (the mirror image of the divergence rule), which catches
    algebraic decay such as ``1/m`` that no Cauchy window can certify.
    """
    est = estimate if estimate is not None else detect_limit(x, cfg)
    if est.converged:
        return abs(est.value) <= cfg.zero_threshold
    if est.status == DIVERGING or est.value is None:
        return False
    mags = [abs(to_float(t)) for t in x]
    tail = mags[-cfg.window:]
    if not all(a >= b for a, b in zip(tail, tail[1:])):
        return False
    return float(cfg.growth_factor) * tail[-1] < mags[_mid_index(len(mags))]
