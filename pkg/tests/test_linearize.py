import math
from fractions import Fraction

import pytest

from conftest import F3, Q5, QT, attracting_tail, quadratic, repelling_tail
from ultradisc.errors import (
    IndifferentMultiplier,
    InsufficientTailInformation,
    UndeterminedTail,
    WrongRegime,
)
from ultradisc.linearize import (
    AffineRuleTail,
    MapSpec,
    Regime,
    Status,
    UnknownTail,
    Verdict,
    all_radii,
    check_bound_attracting,
    check_bound_repelling,
    lemma1_check,
    radius_delta,
    radius_gamma,
    radius_Rf,
    radius_rho,
    sandwich_holds,
    schroder_solve,
)
from ultradisc.series import TruncatedSeries

# b_k for f = 5x + x^2 over Q_5, from the partition-enumeration recursion (tests/test_oracle.py)
QUADRATIC_Q5_B = ["1", "-1/20", "1/240", "-21/49600", "37/773760", "-69709/12086131200"]


def exps(m):
    return {k: (None if r is None else r.exponent) for k, r in all_radii(m).items()}


def test_quadratic_radii():
    m = quadratic(Q5)
    assert radius_rho(m).exponent == 0
    assert radius_gamma(m).exponent == -1
    assert radius_delta(m).exponent == -1
    assert radius_Rf(m).exponent == math.inf
    assert radius_rho(m).status is Status.ATTAINED


def test_attracting_tail_radii(any_field):
    r = all_radii(attracting_tail(any_field))
    assert r["Rf"].exponent == -1 and r["Rf"].status is Status.ATTAINED
    assert r["rho"].exponent == -2
    assert r["gamma"].exponent == -3
    assert r["delta"].exponent == -3


def test_repelling_tail_radii(any_field):
    r = all_radii(repelling_tail(any_field))
    assert r["rho"].exponent == r["Rf"].exponent == r["delta"].exponent == 1
    assert r["gamma"].status is Status.LIMIT
    # tie between Rf and gamma keeps Rf's status
    assert r["delta"].status is Status.ATTAINED


def test_affine_tail_with_offset():
    # a_i = 5^(2i - 1) from i = 3: v/(i-1) = 2 + 1/(i-1) decreases to 2
    m = MapSpec(Q5, Q5.from_int(5), (Q5.zero(),), AffineRuleTail(2, -1, 3))
    assert radius_rho(m).exponent == 2 and radius_rho(m).status is Status.LIMIT
    assert radius_Rf(m).status is Status.LIMIT


def test_unknown_tail():
    m = MapSpec(Q5, Q5.from_int(5), (Q5.one(),), UnknownTail())
    assert radius_rho(m).status is Status.TRUNCATION
    with pytest.raises(UndeterminedTail):
        radius_Rf(m)
    assert exps(m)["delta"] is None
    with pytest.raises(UndeterminedTail):
        m.realize(8)


def test_indifferent_rejected():
    with pytest.raises(IndifferentMultiplier):
        MapSpec(Q5, Q5.from_int(2))


def test_sandwich_relations():
    assert sandwich_holds(Regime.ATTRACTING, 1, 0, math.inf, -1)
    assert not sandwich_holds(Regime.ATTRACTING, 1, 0, math.inf, 1)
    assert sandwich_holds(Regime.REPELLING, -1, 1, 1, 1)


def test_solver_matches_frozen_oracle():
    r = schroder_solve(quadratic(Q5), 6)
    for got, want in zip(r.b, QUADRATIC_Q5_B):
        assert (got - Q5.parse(want)).is_zero()
    assert r.b[1].valuation() == -1 and r.b[2].valuation() == -1


def test_linear_map_has_trivial_conjugacy(any_field):
    m = MapSpec(any_field, any_field.uniformizer_power(1))
    r = schroder_solve(m, 10)
    assert all(b.is_exact_zero for b in r.b[1:])
    assert r.g.polynomial
    assert r.all_pass


def test_quadratic_bound_tight_at_powers_of_two():
    r = schroder_solve(quadratic(Q5), 16)
    assert r.all_pass
    tight = [v.k for v in r.bound_check if v.tight]
    assert 2 in tight
    assert set(tight) <= {2, 4, 8, 16}


def test_bound_checkers_refuse_wrong_regime():
    r = schroder_solve(quadratic(Q5), 4)
    with pytest.raises(WrongRegime):
        check_bound_repelling(r, -1, 1)
    with pytest.raises(WrongRegime):
        check_bound_attracting(r, 0, -1)


def test_bound_failure_detected():
    r = schroder_solve(quadratic(Q5), 6)
    # pretending rho is larger makes the bound false
    verdicts = check_bound_attracting(r, 1, 1)
    assert verdicts[0].verdict is Verdict.FAIL


def test_repelling_bound():
    r = schroder_solve(repelling_tail(Q5), 20)
    assert r.regime is Regime.REPELLING
    assert r.all_pass
    # v(b_k) >= (k-1)(e_gamma - v(lam)) = 2(k-1)
    assert all(v.linear == 2 * (v.k - 1) for v in r.bound_check)


def test_identities_hold(any_field):
    r = schroder_solve(quadratic(any_field), 16)
    semi = r.semiconjugacy_check()
    full = r.conjugacy_check()
    assert semi.vanishes and full.vanishes
    assert semi.min_digits >= 8 and full.min_digits >= 8


def test_grouping_choice_keeps_digits():
    r = schroder_solve(repelling_tail(Q5), 64)
    assert r.default_grouping() == "right"
    assert r.conjugacy_check().min_digits >= 8
    assert r.conjugacy_check("left").min_digits < 8


def test_delta_g_bounds():
    r = schroder_solve(quadratic(Q5), 32)
    assert r.radii["Rg_lower"].exponent == 0
    assert r.radii["delta_g_lower"].exponent == -1
    assert r.radii["delta_g_empirical"].exponent == -1
    assert r.radii["delta_g_empirical"].status is Status.TRUNCATION
    assert r.delta_g_consistent


def test_g_inverse_has_model():
    r = schroder_solve(quadratic(Q5), 8)
    assert r.g_inverse.tail_model.c1 == -1


def test_lemma1_examples():
    h = TruncatedSeries.from_literals(F3, ["1", "1"], polynomial=True)
    rep = lemma1_check(h, 0)
    assert rep.injective_on_open_disc and rep.d == 2
    # on a larger disc the x^2 term dominates
    assert not lemma1_check(h, 1).injective_on_open_disc


def test_lemma1_for_f_on_injectivity_disc():
    m = quadratic(Q5)
    rep = lemma1_check(m.realize(8), radius_delta(m).exponent)
    assert rep.injective_on_open_disc and rep.d == 2


def test_lemma1_model_tail():
    m = attracting_tail(QT)
    f = m.realize(12)
    rep = lemma1_check(f, radius_delta(m).exponent)
    assert rep.injective_on_open_disc and rep.basis == "model"


def test_lemma1_unknown_tail():
    h = TruncatedSeries.from_literals(Q5, ["1", "1"])
    with pytest.raises(InsufficientTailInformation):
        lemma1_check(h, 0)


@pytest.mark.parametrize("field", [Q5, F3, QT], ids=str)
def test_scale_covariance(field):
    m = MapSpec(field, field.uniformizer_power(1), (field.one(), field.from_int(2)))
    c = field.uniformizer_power(2)
    m2 = m.rescaled(c.inverse())
    b, b2 = schroder_solve(m, 10).b, schroder_solve(m2, 10).b
    for k in range(2, 11):
        if not b[k - 1].is_zero():
            assert b2[k - 1].valuation() == b[k - 1].valuation() - (k - 1) * 2
    assert radius_rho(m2).exponent == radius_rho(m).exponent - 2


def test_affine_rescale_by_uniformizer():
    m = attracting_tail(Q5)
    m2 = m.rescaled(Q5.from_int(5))
    assert m2.tail == AffineRuleTail(0, -1, 2)
    assert radius_rho(m2).exponent == radius_rho(m).exponent + 1


def test_affine_tail_validation():
    with pytest.raises(ValueError):
        AffineRuleTail(Fraction(1, 2), 0, 2)
    with pytest.raises(ValueError):
        MapSpec(Q5, Q5.from_int(5), (Q5.one(),), AffineRuleTail(1, 0, 2))
