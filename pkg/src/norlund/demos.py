"""Bundled scenarios for the ``demo`` command."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .inclusion import (
    CONSERVATIVE_NONREGULAR,
    NO_INCLUSION,
    REGULAR_INCLUSION,
    apply_inclusion_matrix,
    classify_inclusion,
    inclusion_matrix,
)
from .numerics import GROWING, LimitConfig, detect_limit, render_rational
from .weights import WeightSpec, generate_weights, parse_weight_spec

# Fixed pairs whose verdicts are known in closed form.
CORPUS_PAIRS = [
    ("cesaro:1", "cesaro:2"),
    ("u", "geom:2"),
    ("cesaro:1", "u"),
    ("u", "cesaro:1"),
    ("u", "cesaro:3"),
    ("cesaro:2", "cesaro:3"),
    ("geom:2", "geom:2"),
    ("const:3", "cesaro:1"),
    ("u", "geom:3"),
    ("geom:1/2", "u"),
    ("u", "list:1,1,1"),
]

_RATIOS = [Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]


def random_weight_spec(rng: random.Random) -> WeightSpec:
    """Draw a weight spec from a mix of all families."""
    family = rng.choice(["unit", "cesaro", "constant", "geometric", "explicit", "explicit"])
    if family == "unit":
        return WeightSpec("unit")
    if family == "cesaro":
        return WeightSpec("cesaro", order=rng.randint(1, 4))
    if family == "constant":
        return WeightSpec("constant", value=Fraction(rng.randint(1, 9), rng.randint(1, 4)))
    if family == "geometric":
        return WeightSpec("geometric", value=rng.choice(_RATIOS))
    n = rng.randint(1, 6)
    values = [Fraction(rng.randint(1, 5), rng.randint(1, 3))]
    values += [Fraction(rng.randint(0, 5), rng.randint(1, 3)) for _ in range(n - 1)]
    return WeightSpec("explicit", values=tuple(values))


def random_pairs(count: int, seed: int = 0) -> list[tuple[WeightSpec, WeightSpec]]:
    rng = random.Random(seed)
    return [(random_weight_spec(rng), random_weight_spec(rng)) for _ in range(count)]


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    run: Callable[[LimitConfig], dict]


def _classify(p: str, q: str, cfg: LimitConfig):
    return classify_inclusion(generate_weights(p, cfg.horizon), generate_weights(q, cfg.horizon), cfg)


def _cesaro_chain(cfg: LimitConfig) -> dict:
    report = _classify("cesaro:1", "cesaro:2", cfg)
    H = report.condition_one.sup_value
    return {
        "expected": {"classification": REGULAR_INCLUSION, "H": "1"},
        "observed": {"classification": report.classification, "H": render_rational(H)},
        "passed": report.classification == REGULAR_INCLUSION and H == 1,
        "report": report.to_dict(),
    }


def _geometric_conservative(cfg: LimitConfig) -> dict:
    p = generate_weights("u", cfg.horizon)
    q = generate_weights("geom:2", cfg.horizon)
    report = classify_inclusion(p, q, cfg)
    e0 = [Fraction(1)] + [Fraction(0)] * cfg.horizon
    image = apply_inclusion_matrix(inclusion_matrix(p, q), e0)
    before, after = detect_limit(e0, cfg), detect_limit(image, cfg)
    passed = (
        report.classification == CONSERVATIVE_NONREGULAR
        and before.converged and before.value == 0
        and after.converged and abs(after.value - 0.5) <= cfg.tolerance
    )
    return {
        "expected": {"classification": CONSERVATIVE_NONREGULAR, "input_limit": 0.0, "transformed_limit": 0.5},
        "observed": {
            "classification": report.classification,
            "input_limit": before.value,
            "transformed_limit": after.value,
        },
        "passed": passed,
        "report": report.to_dict(),
    }


def _no_inclusion(cfg: LimitConfig) -> dict:
    report = _classify("cesaro:1", "u", cfg)
    rho = report.condition_one.rho
    closed_form = all(r == 2 * m + 1 for m, r in enumerate(rho))
    return {
        "expected": {"classification": NO_INCLUSION, "rho": "2m+1", "condition_one": GROWING},
        "observed": {
            "classification": report.classification,
            "rho": [render_rational(r) for r in rho],
            "condition_one": report.condition_one.status,
        },
        "passed": report.classification == NO_INCLUSION and closed_form and report.condition_one.status == GROWING,
        "report": report.to_dict(),
    }


def consistency_violations(pairs, cfg: LimitConfig) -> tuple[list[dict], dict]:
    """Reports pairing a conservative-nonregular verdict with a regular q."""
    violations, tally = [], {}
    for p_spec, q_spec in pairs:
        p = generate_weights(p_spec, cfg.horizon)
        q = generate_weights(q_spec, cfg.horizon)
        report = classify_inclusion(p, q, cfg)
        tally[report.classification] = tally.get(report.classification, 0) + 1
        if report.classification == CONSERVATIVE_NONREGULAR and report.q_regular.regular:
            violations.append({"p": str(p_spec), "q": str(q_spec)})
    return violations, tally


def _consistency_reflection(cfg: LimitConfig, trials: int = 500, seed: int = 0) -> dict:
    pairs = [(parse_weight_spec(a), parse_weight_spec(b)) for a, b in CORPUS_PAIRS]
    pairs += random_pairs(trials, seed)
    violations, tally = consistency_violations(pairs, cfg)
    return {
        "expected": {"violations": 0},
        "observed": {"violations": len(violations), "pairs": len(pairs), "classifications": tally},
        "passed": not violations,
        "report": {"violations": violations, "seed": seed, "config": cfg.to_dict()},
    }


CATALOG = {
    s.name: s
    for s in [
        Scenario("cesaro-chain", "(C,1) is regularly included in (C,2); condition one holds with H = 1",
                 _cesaro_chain),
        Scenario("geometric-conservative", "u -> geom:2 is conservative but shifts the limit of e0 from 0 to 1/2",
                 _geometric_conservative),
        Scenario("no-inclusion", "(C,1) -> u fails condition one: rho_m = 2m+1", _no_inclusion),
        Scenario("consistency-reflection",
                 "randomized search: no conservative-nonregular verdict with a regular q", _consistency_reflection),
    ]
}


def demo_catalog() -> list[Scenario]:
    return list(CATALOG.values())


def run_demo(name: str, cfg: LimitConfig = LimitConfig()) -> dict:
    try:
        scenario = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; choose from {', '.join(CATALOG)}") from None
    return {"demo": name, "description": scenario.description, **scenario.run(cfg)}
