import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from norlund.demos import CORPUS_PAIRS, random_pairs
from norlund.inclusion import (
    CONSERVATIVE_NONREGULAR,
    INCONCLUSIVE,
    NO_INCLUSION,
    NOT_REGULAR_AT_HORIZON,
    REGULAR_AT_HORIZON,
    REGULAR_INCLUSION,
    apply_inclusion_matrix,
    beta_estimate,
    classify_inclusion,
    decide,
    epsilon_estimates,
    inclusion_matrix,
    kojima_schur_report,
    regularity_of_method,
    riesz_condition_one,
)
from norlund.numerics import BOUNDED, GROWING, LimitConfig, LimitEstimate, NumericsError
from norlund.transform import HorizonMismatch, norlund_mean, solve_kernel
from norlund.weights import generate_weights

from conftest import real_sequences, weight_sequences

W = generate_weights


def test_identity_matrix():
    p = W("geom:3/2", 10)
    C = inclusion_matrix(p, p)
    for m in range(11):
        for n in range(11):
            assert C.entry(m, n) == (1 if m == n else 0)


def test_matrix_rows():
    assert inclusion_matrix(W("cesaro:1", 5), W("cesaro:2", 5)).rows[2] == (F(1, 6), F(1, 3), F(1, 2))
    assert inclusion_matrix(W("u", 5), W("geom:2", 5)).rows[2] == (F(4, 7), F(2, 7), F(1, 7))


def test_apply_examples():
    C = inclusion_matrix(W("u", 12), W("geom:2", 12))
    assert apply_inclusion_matrix(C, [1] * 13) == (1,) * 13
    image = apply_inclusion_matrix(C, [1] + [0] * 12)
    assert image == tuple(F(2**m, 2 ** (m + 1) - 1) for m in range(13))
    with pytest.raises(HorizonMismatch):
        apply_inclusion_matrix(C, [1, 2])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 64).flatmap(lambda M: st.tuples(weight_sequences(M), weight_sequences(M), real_sequences(M))))
def test_transform_identity_and_row_sums(case):
    p, q, r = case
    C = inclusion_matrix(p, q)
    assert apply_inclusion_matrix(C, norlund_mean(p, r)) == norlund_mean(q, r)
    assert all(s == 1 for s in C.row_sums())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 40).flatmap(weight_sequences))
def test_self_inclusion_is_identity(p):
    C = inclusion_matrix(p, p)
    assert all(row[-1] == 1 and not any(row[:-1]) for row in C.rows)


@settings(max_examples=40, deadline=None)
@given(st.integers(8, 40).flatmap(lambda M: st.tuples(weight_sequences(M), weight_sequences(M))))
def test_rho_matches_matrix_abs_row_sums(pq):
    # integer route in riesz_condition_one vs Fraction route through C
    p, q = pq
    verdict = riesz_condition_one(p, q)
    assert list(verdict.rho) == inclusion_matrix(p, q).abs_row_sums()
    assert verdict.sup_value == max(verdict.rho)
    assert verdict.rho[verdict.witness_index] == verdict.sup_value


@settings(max_examples=40, deadline=None)
@given(st.integers(8, 40).flatmap(lambda M: st.tuples(weight_sequences(M), weight_sequences(M))))
def test_nonnegative_kernel_gives_rho_one(pq):
    p, q = pq
    k = solve_kernel(p, q)
    if all(x >= 0 for x in k):
        assert set(riesz_condition_one(p, q, k).rho) == {1}


def test_condition_one_examples():
    v = riesz_condition_one(W("cesaro:1", 64), W("cesaro:2", 64))
    assert v.status == BOUNDED and v.sup_value == 1 and set(v.rho) == {1}
    v = riesz_condition_one(W("cesaro:1", 64), W("u", 64))
    assert v.status == GROWING and list(v.rho) == [2 * m + 1 for m in range(65)]
    v = riesz_condition_one(W("u", 64), W("geom:2", 64))
    assert v.status == BOUNDED and v.sup_value == 1


def test_epsilon_examples():
    p, q = W("cesaro:1", 64), W("cesaro:2", 64)
    eps = epsilon_estimates(solve_kernel(p, q), q.partial_sums, 3)
    # k_m / Q_m = 2/((m+1)(m+2)) has not settled at tol 1e-9 but is small
    assert eps[0].value == pytest.approx(sum(2 / ((m + 1) * (m + 2)) for m in range(57, 65)) / 8)
    assert eps[0].value < 1e-3

    p, q = W("u", 64), W("geom:2", 64)
    eps = epsilon_estimates(solve_kernel(p, q), q, 2)
    assert [e.converged for e in eps] == [True] * 3
    assert eps[0].value == pytest.approx(0.5, abs=1e-12)
    assert eps[1].value == pytest.approx(0.25, abs=1e-12)

    p = W("cesaro:3", 64)
    eps = epsilon_estimates(solve_kernel(p, p), p, 0)
    assert eps[0].converged and eps[0].value == 0

    with pytest.raises(NumericsError):
        epsilon_estimates(solve_kernel(p, p), p, 32)


@pytest.mark.parametrize("spec, beta", [("geom:2", 0.5), ("u", 1.0), ("geom:1/2", 1.0), ("geom:3", 1 / 3)])
def test_beta_converged(spec, beta):
    est = beta_estimate(W(spec, 64))
    assert est.converged and est.value == pytest.approx(beta, abs=1e-12)


def test_beta_cesaro_needs_loose_tolerance():
    Q = W("cesaro:1", 64)
    assert not beta_estimate(Q).converged
    est = beta_estimate(Q, LimitConfig(tolerance=1e-2))
    assert est.converged and est.value == pytest.approx(1, abs=0.05)


@pytest.mark.parametrize(
    "spec, verdict",
    [
        ("cesaro:2", REGULAR_AT_HORIZON),
        ("cesaro:1", REGULAR_AT_HORIZON),
        ("u", REGULAR_AT_HORIZON),
        ("const:5", REGULAR_AT_HORIZON),
        ("geom:1/2", REGULAR_AT_HORIZON),
        ("geom:2", NOT_REGULAR_AT_HORIZON),
        ("geom:3/2", NOT_REGULAR_AT_HORIZON),
    ],
)
def test_regularity_of_method(spec, verdict):
    assert regularity_of_method(W(spec, 64)).verdict == verdict


@pytest.mark.parametrize(
    "p, q, expected",
    [
        ("cesaro:1", "cesaro:2", REGULAR_INCLUSION),
        ("u", "geom:2", CONSERVATIVE_NONREGULAR),
        ("cesaro:1", "u", NO_INCLUSION),
        ("u", "cesaro:1", REGULAR_INCLUSION),
        ("cesaro:2", "cesaro:3", REGULAR_INCLUSION),
        ("geom:2", "geom:2", REGULAR_INCLUSION),
        ("u", "geom:3", CONSERVATIVE_NONREGULAR),
    ],
)
def test_classify(p, q, expected):
    report = classify_inclusion(W(p, 64), W(q, 64))
    assert report.classification == expected


def test_classify_geometric_details():
    report = classify_inclusion(W("u", 64), W("geom:2", 64))
    assert report.epsilon0.value == pytest.approx(0.5, abs=1e-12)
    assert report.beta.value == pytest.approx(0.5, abs=1e-12)
    assert report.q_regular.verdict == NOT_REGULAR_AT_HORIZON


def test_classify_small_horizon_clamps_n_max():
    report = classify_inclusion(W("u", 10), W("geom:2", 10))
    assert len(report.epsilon) == 4  # n <= M + 1 - window = 3
    with pytest.raises(NumericsError):
        classify_inclusion(W("u", 5), W("geom:2", 5))


def _est(status, value):
    return LimitEstimate(status, value, 64, 8, 1e-9)


@pytest.mark.parametrize(
    "cond, eps0, vanishing, beta, expected",
    [
        (GROWING, _est("converged", 0.5), False, _est("converged", 0.5), NO_INCLUSION),
        (INCONCLUSIVE, _est("converged", 0.0), True, _est("converged", 1.0), INCONCLUSIVE),
        (BOUNDED, _est("converged", 0.0), True, _est("inconclusive", 0.9), REGULAR_INCLUSION),
        (BOUNDED, _est("converged", 0.3), False, _est("converged", 0.5), CONSERVATIVE_NONREGULAR),
        (BOUNDED, _est("converged", 0.3), False, _est("inconclusive", 0.5), INCONCLUSIVE),
        (BOUNDED, _est("inconclusive", 0.3), False, _est("converged", 0.5), INCONCLUSIVE),
    ],
)
def test_decision_table(cond, eps0, vanishing, beta, expected):
    from norlund.inclusion import BoundednessVerdict

    verdict = BoundednessVerdict(cond, F(1), 0)
    assert decide(verdict, eps0, vanishing, beta, LimitConfig()) == expected


def _geometric_relation_holds(report, cfg):
    eps = report.epsilon
    if not (eps[0].converged and eps[1].converged and eps[0].value != 0):
        return True
    ratio = eps[1].value / eps[0].value
    return all(
        abs(e.value - eps[0].value * ratio**n) <= cfg.tolerance * n
        for n, e in enumerate(eps) if e.converged
    )


@pytest.mark.parametrize("pair", CORPUS_PAIRS)
def test_geometric_epsilon_relation_corpus(pair):
    cfg = LimitConfig()
    assert _geometric_relation_holds(classify_inclusion(W(pair[0], 64), W(pair[1], 64), cfg), cfg)


def test_geometric_epsilon_relation_random():
    cfg = LimitConfig()
    for p_spec, q_spec in random_pairs(150, seed=11):
        report = classify_inclusion(W(p_spec, 64), W(q_spec, 64), cfg)
        assert _geometric_relation_holds(report, cfg), (str(p_spec), str(q_spec))


def test_consistency_reflection_random():
    cfg = LimitConfig()
    for p_spec, q_spec in random_pairs(200, seed=random.Random(3).randint(0, 10**6)):
        report = classify_inclusion(W(p_spec, 64), W(q_spec, 64), cfg)
        assert not (report.classification == CONSERVATIVE_NONREGULAR and report.q_regular.regular)


def test_kojima_schur_identity():
    ks = kojima_schur_report(inclusion_matrix(W("cesaro:2", 64), W("cesaro:2", 64)))
    assert ks.row_sums_exactly_one and ks.row_sum.value == 1
    assert all(c.vanishing and c.delta == 0 for c in ks.columns)
    assert (ks.conservative, ks.regular) == ("conservative", "regular")


def test_kojima_schur_geometric():
    ks = kojima_schur_report(inclusion_matrix(W("u", 64), W("geom:2", 64)))
    assert ks.row_sums_exactly_one
    for c in ks.columns:
        assert c.epsilon.converged and c.delta == pytest.approx(2.0 ** (-c.n - 1), abs=1e-12)
    assert (ks.conservative, ks.regular) == ("conservative", "not-regular")


def test_kojima_schur_cesaro():
    p, q = W("cesaro:1", 64), W("cesaro:2", 64)
    ks = kojima_schur_report(inclusion_matrix(p, q))
    assert ks.row_abs_sum.status == BOUNDED and ks.row_abs_sum.sup_value == 1
    for c in ks.columns:
        assert c.vanishing
        assert c.delta == pytest.approx(c.epsilon.value * (c.n + 1))
    assert (ks.conservative, ks.regular) == ("conservative", "regular")


def test_kojima_schur_not_conservative():
    ks = kojima_schur_report(inclusion_matrix(W("cesaro:1", 64), W("u", 64)))
    assert ks.conservative == "not-conservative"
