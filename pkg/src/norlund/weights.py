"""Nörlund weight sequences: a tiny spec language and exact generation.

Grammar::

    u | cesaro:<int> | const:<rat> | geom:<rat> | list:<rat>,<rat>,...

where ``<rat>`` is ``a`` or ``a/b`` with an optional sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from math import comb

from .numerics import NumericsError, parse_rational, render_rational

FAMILIES = ("unit", "cesaro", "constant", "geometric", "explicit")


class WeightSpecError(ValueError):
    """Invalid weight spec; ``token`` names the offending piece of input."""

    def __init__(self, message: str, token: str):
        super().__init__(f"{message} (at {token!r})")
        self.token = token


@dataclass(frozen=True)
class WeightSpec:
    family: str
    order: int | None = None
    value: Fraction | None = None
    values: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise WeightSpecError("unknown weight family", self.family)
        if self.family == "cesaro":
            if not isinstance(self.order, int) or self.order < 1:
                raise WeightSpecError("cesaro order must be a positive integer", str(self.order))
        elif self.family == "constant":
            if self.value is None or self.value <= 0:
                raise WeightSpecError("constant weight must be positive", str(self.value))
        elif self.family == "geometric":
            if self.value is None or self.value <= 0:
                raise WeightSpecError("geometric ratio must be positive", str(self.value))
        elif self.family == "explicit":
            if not self.values:
                raise WeightSpecError("explicit weight list is empty", "")
            if self.values[0] <= 0:
                raise WeightSpecError("first weight must be positive", render_rational(self.values[0]))
            for v in self.values[1:]:
                if v < 0:
                    raise WeightSpecError("weights after the first must be nonnegative", render_rational(v))

    def __str__(self) -> str:
        if self.family == "unit":
            return "u"
        if self.family == "cesaro":
            return f"cesaro:{self.order}"
        if self.family == "constant":
            return f"const:{render_rational(self.value)}"
        if self.family == "geometric":
            return f"geom:{render_rational(self.value)}"
        return "list:" + ",".join(render_rational(v) for v in self.values)


def _rat(token: str) -> Fraction:
    try:
        return parse_rational(token)
    except NumericsError:
        raise WeightSpecError("expected a rational a or a/b", token) from None


def parse_weight_spec(text: str) -> WeightSpec:
    """Parse a weight spec string, e.g. ``"cesaro:2"`` or ``"list:1,1/2,0"``."""
    text = text.strip()
    if text == "u":
        return WeightSpec("unit")
    head, sep, arg = text.partition(":")
    if not sep:
        raise WeightSpecError("unrecognised weight spec", text)
    if head == "cesaro":
        if not arg.strip().lstrip("+").isdigit():
            raise WeightSpecError("cesaro order must be a positive integer", arg)
        return WeightSpec("cesaro", order=int(arg))
    if head == "const":
        return WeightSpec("constant", value=_rat(arg))
    if head == "geom":
        return WeightSpec("geometric", value=_rat(arg))
    if head == "list":
        tokens = arg.split(",")
        if not arg.strip():
            raise WeightSpecError("explicit weight list is empty", text)
        return WeightSpec("explicit", values=tuple(_rat(t) for t in tokens))
    raise WeightSpecError("unknown weight family", head)


@dataclass(frozen=True)
class WeightSequence:
    """Weights ``p_0..p_M`` with their partial sums ``P_0..P_M``."""

    values: tuple[Fraction, ...]
    partial_sums: tuple[Fraction, ...]
    label: str = ""

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)


def weight_sequence(values, label: str = "") -> WeightSequence:
    """Wrap raw values, validating ``p_0 > 0`` and ``p_n >= 0``."""
    vals = tuple(Fraction(v) for v in values)
    if not vals:
        raise WeightSpecError("weight sequence is empty", label)
    if vals[0] <= 0:
        raise WeightSpecError("first weight must be positive", render_rational(vals[0]))
    for v in vals[1:]:
        if v < 0:
            raise WeightSpecError("weights after the first must be nonnegative", render_rational(v))
    return WeightSequence(vals, tuple(accumulate(vals)), label)


def generate_weights(spec: WeightSpec | str, horizon: int) -> WeightSequence:
    """Materialise ``p_0..p_M`` for ``M = horizon``."""
    if isinstance(spec, str):
        spec = parse_weight_spec(spec)
    if horizon < 0:
        raise ValueError(f"horizon must be nonnegative, got {horizon}")
    n = horizon + 1
    if spec.family == "unit":
        vals = [Fraction(1)] + [Fraction(0)] * horizon
    elif spec.family == "cesaro":
        a = spec.order
        vals = [Fraction(comb(k + a - 1, a - 1)) for k in range(n)]
    elif spec.family == "constant":
        vals = [spec.value] * n
    elif spec.family == "geometric":
        t = spec.value
        vals = [t**k for k in range(n)]
    else:
        vals = list(spec.values[:n]) + [Fraction(0)] * max(0, n - len(spec.values))
    return weight_sequence(vals, label=str(spec))
