import math

import pytest
from hypothesis import given, settings, strategies as st

from cpsim.errors import AssumptionViolated, DomainError
from cpsim.numerics import finite_diff
from cpsim.typemodels import (DiscreteModel, ExponentialModel, TwoPartPayment,
                              UniformModel, WpModel, model_from_dict,
                              model_to_dict, validate)

# ---------------------------------------------------------------- strategies

wp_models = st.builds(WpModel,
                      w=st.floats(0.01, 100.0),
                      p=st.floats(0.01, 0.99))

uniform_models = st.builds(lambda a1, frac: UniformModel(a1, frac * a1),
                           a1=st.floats(0.1, 100.0),
                           frac=st.floats(0.01, 0.99))

exponential_models = st.builds(lambda inv_lam, frac: ExponentialModel(frac * inv_lam, 1.0 / inv_lam),
                               inv_lam=st.floats(0.1, 100.0),
                               frac=st.floats(0.01, 0.99))

any_continuous = st.one_of(wp_models, uniform_models, exponential_models)

EX3_AGENT1 = DiscreteModel([(100.0, 0.2), (-20.0, 0.4)], 0.4)
EX3_AGENT2 = DiscreteModel([(40.0, 0.4), (-10.0, 0.4)], 0.2)


# ---------------------------------------------------------------- validation

def test_validation_rejects_bad_parameters():
    assert WpModel(0.0, 0.5).violations()
    assert WpModel(1.0, 1.0).violations()
    assert UniformModel(1.0, 1.0).violations()      # needs a2 < a1
    assert UniformModel(1.0, 0.0).violations()      # needs a2 > 0
    assert ExponentialModel(2.0, 1.0).violations()  # w * lambda >= 1
    assert ExponentialModel(-1.0, 1.0).violations()


def test_validate_reports_codes():
    tags = validate(ExponentialModel(2.0, 1.0))
    assert any(t.startswith("A3") for t in tags)
    assert validate(WpModel(1.0, 0.5)) == []


def test_discrete_validation():
    assert not EX3_AGENT1.violations()
    assert DiscreteModel([(1.0, 0.5)], 0.0).violations()          # mass sums to 0.5
    assert DiscreteModel([(-1.0, 0.5)], 0.5).violations()         # no positive value
    assert DiscreteModel([(5.0, 0.5), (-1.0, 0.5)], 0.0).violations()  # E[V] >= 0
    bad_inf = DiscreteModel([(math.inf, 0.5), (-9.0, 0.5)], 0.0)
    assert any(v.startswith("A2") for v in bad_inf.violations())


def test_invalid_model_blocks_derived_quantities():
    with pytest.raises(AssumptionViolated):
        WpModel(1.0, 1.5).zero_crossing()
    with pytest.raises(AssumptionViolated):
        UniformModel(1.0, 2.0).bid_sp()


# ---------------------------------------------------------------- golden values

def test_wp_closed_forms():
    m = WpModel(10.0, 0.5)
    assert m.ev_plus() == pytest.approx(5.0, abs=1e-12)
    assert m.zero_crossing() == pytest.approx(10.0, abs=1e-12)  # wp/(1-p)
    assert m.utilization(0.0) == 0.5
    assert m.utilization(1000.0) == 0.5          # penalties cannot exceed p
    assert m.first_best()[1] == 0.5
    assert math.isinf(m.first_best()[0].z)


def test_discrete_tail_segment_golden():
    # 12 - 0.4 z on the last segment: crossing at 30
    assert EX3_AGENT1.u(20.0) == pytest.approx(4.0, abs=1e-12)
    assert EX3_AGENT1.zero_crossing() == pytest.approx(30.0, abs=1e-9)
    assert EX3_AGENT2.zero_crossing() == pytest.approx(60.0, abs=1e-9)
    assert EX3_AGENT1.bid_sp() == pytest.approx(20.0, abs=1e-12)
    assert EX3_AGENT2.bid_sp() == pytest.approx(16.0, abs=1e-12)
    assert EX3_AGENT2.utilization(30.0) == pytest.approx(0.8, abs=1e-12)
    assert EX3_AGENT2.utilization(60.0) == pytest.approx(0.8, abs=1e-12)


def test_discrete_agent_welfare_golden():
    # 16 + (-10)(0.4) = 12 once the -10 atom is inside the show region
    assert EX3_AGENT2.agent_welfare(30.0) == pytest.approx(12.0, abs=1e-12)


def test_uniform_closed_forms():
    m = UniformModel(2.0, 1.0)
    assert m.zero_crossing() == pytest.approx(2.0 - math.sqrt(3.0), abs=1e-12)
    pay, ut = m.first_best()
    assert pay.z == pytest.approx(1.0)
    assert pay.y == pytest.approx(1.0 * (1.0 - 2.0) / 3.0)
    assert ut == pytest.approx(2.0 / 3.0)
    # first-best payment is exactly zero-profit and zero-revenue
    assert m.u2(pay) == pytest.approx(0.0, abs=1e-12)
    assert m.revenue(pay) == pytest.approx(0.0, abs=1e-12)


def test_exponential_closed_forms():
    m = ExponentialModel(10.0, 0.08)
    assert m.zero_crossing() == pytest.approx(10.117973905426258, abs=1e-9)
    assert m.bid_sp() == pytest.approx(10.0 + (math.exp(-0.8) - 1.0) / 0.08, abs=1e-12)
    pay, ut = m.first_best()
    assert pay.z == pytest.approx(23.25499, abs=1e-4)
    # the first-best penalty zeroes out the created value beyond z0
    assert m.agent_welfare(pay.z) == pytest.approx(0.0, abs=1e-9)
    assert pay.y == pytest.approx(m.u(pay.z), abs=1e-12)
    assert ut == pytest.approx(m.utilization(pay.z))


def test_discrete_first_best():
    # both agents keep positive welfare through their negative atoms, so the
    # penalty is unbounded and everyone but the never-show mass uses the resource
    pay1, ut1 = EX3_AGENT1.first_best()
    assert math.isinf(pay1.z)
    assert ut1 == pytest.approx(0.6, abs=1e-12)
    pay2, ut2 = EX3_AGENT2.first_best()
    assert math.isinf(pay2.z)
    assert ut2 == pytest.approx(0.8, abs=1e-12)
    # welfare turns negative past the -50 atom: the supremum penalty 50 is not
    # attained, the returned payment sits just below it and is IR and ND
    m = DiscreteModel([(10.0, 0.3), (-50.0, 0.5)], 0.2)
    pay, ut = m.first_best()
    assert pay.z == pytest.approx(50.0, rel=1e-6)
    assert pay.z < 50.0
    assert ut == pytest.approx(0.3, abs=1e-12)
    assert m.u2(pay) >= 0.0
    assert m.revenue(pay) >= -1e-12


# ---------------------------------------------------------------- identities

@given(any_continuous, st.floats(0.0, 200.0))
@settings(max_examples=300, deadline=None)
def test_u_is_decreasing_and_u0_is_ev_plus(m, z):
    assert m.u(0.0) == pytest.approx(m.ev_plus(), abs=1e-12)
    assert m.u(z + 1.0) <= m.u(z) + 1e-12


@given(any_continuous)
@settings(max_examples=300, deadline=None)
def test_zero_crossing_properties(m):
    z0 = m.zero_crossing()
    assert z0 >= m.ev_plus() - 1e-9          # contingent bid at least the up-front bid
    assert abs(m.u(z0)) <= 1e-9 * max(1.0, z0)
    assert m.zero_crossing_numeric() == pytest.approx(z0, abs=1e-9 * max(1.0, z0))


@given(any_continuous, st.floats(0.0, 1.0))
@settings(max_examples=300, deadline=None)
def test_u_convexity(m, frac):
    z0 = m.zero_crossing()
    a, b = frac * z0, z0
    mid = 0.5 * (a + b)
    assert m.u(mid) <= 0.5 * (m.u(a) + m.u(b)) + 1e-9


@given(st.one_of(uniform_models, exponential_models), st.floats(0.01, 0.99))
@settings(max_examples=200, deadline=None)
def test_marginal_utility_is_utilization_minus_one(m, frac):
    z = frac * m.zero_crossing()
    h = 1e-6 * max(1.0, z)
    assert finite_diff(m.u, z, h) == pytest.approx(m.utilization(z) - 1.0, abs=1e-5)


@given(any_continuous, st.floats(0.0, 2.0))
@settings(max_examples=200, deadline=None)
def test_u_inverse_round_trip(m, scale):
    z = scale * m.zero_crossing()
    t = m.u(z)
    assert m.u(m.u_inverse(t)) == pytest.approx(t, abs=1e-9 * max(1.0, abs(t)))


@given(any_continuous, st.floats(0.0, 50.0), st.floats(-10.0, 10.0))
@settings(max_examples=200, deadline=None)
def test_u2_and_revenue_identities(m, z, y):
    pay = TwoPartPayment(z, y)
    assert m.u2(pay) == pytest.approx(m.u(z) - y, abs=1e-12)
    assert m.revenue(pay) == pytest.approx(y + z * m.prob_below(-z), abs=1e-12)
    # welfare split: what the agent creates = her utility + mechanism revenue
    assert m.agent_welfare(z) == pytest.approx(m.u2(pay) + m.revenue(pay), abs=1e-9)


@given(any_continuous, st.floats(0.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_bid_spc_clipping(m, C):
    clipped = m.bid_spc(C)
    raw = m.bid_spc(C, allow_negative=True)
    assert raw == pytest.approx(m.u(C), abs=1e-12)
    assert clipped == max(raw, 0.0)


def test_bid_spc_rejects_negative_C():
    with pytest.raises(DomainError):
        WpModel(1.0, 0.5).bid_spc(-1.0)


@given(any_continuous, st.floats(0.0, 1.0))
@settings(max_examples=300, deadline=None)
def test_gamma_bid_closed_form_matches_root_finder(m, gamma):
    closed = m.bid_gamma_csp(gamma)
    numeric = m.bid_gamma_csp_numeric(gamma)
    assert closed == pytest.approx(numeric, abs=1e-9 * max(1.0, closed))


@given(any_continuous)
@settings(max_examples=200, deadline=None)
def test_gamma_bid_endpoints_and_monotonicity(m):
    assert m.bid_gamma_csp(0.0) == m.zero_crossing()
    assert m.bid_gamma_csp(1.0) == m.bid_sp()
    grid = [m.bid_gamma_csp(g) for g in (0.0, 0.25, 0.5, 0.75, 1.0)]
    for lo, hi in zip(grid[1:], grid):
        assert lo <= hi + 1e-9 * max(1.0, hi)


@given(st.one_of(uniform_models, exponential_models))
@settings(max_examples=200, deadline=None)
def test_first_best_is_ir_and_nd(m):
    pay, ut = m.first_best()
    assert m.u2(pay) >= -1e-9
    assert m.revenue(pay) >= -1e-9
    assert ut == pytest.approx(m.utilization(pay.z))
    assert ut >= m.utilization(m.zero_crossing()) - 1e-9


# ---------------------------------------------------------------- serialization

@given(st.one_of(any_continuous,
                 st.just(EX3_AGENT1), st.just(EX3_AGENT2)))
@settings(max_examples=200, deadline=None)
def test_model_dict_round_trip(m):
    assert model_from_dict(model_to_dict(m)) == m


def test_model_from_dict_errors():
    with pytest.raises(DomainError):
        model_from_dict({"type": "nope"})
    with pytest.raises(DomainError):
        model_from_dict({"type": "wp", "w": 1.0})  # missing p
