import pytest

from app.core.exceptions import VariableMismatchError, ZeroDiscriminantError
from app.core.polyring import RatPoly
from app.models.kodaira import OrderTriple
from app.models.weierstrass import IsolationMode, PointOnChart
from app.services.weierstrass import discriminant, twist_multiplicity
from tests.conftest import VARS, p


def test_discriminant():
    assert discriminant(p("s"), p("t")) == p("4*s^3 + 27*t^2")


def test_zero_discriminant(weierstrass):
    zero = RatPoly.zero(VARS)
    with pytest.raises(ZeroDiscriminantError):
        weierstrass.make_model(zero, zero, VARS)
    # f = -3c^2, g = 2c^3 makes 4f^3 + 27g^2 vanish identically
    with pytest.raises(ZeroDiscriminantError):
        weierstrass.make_model(p("-3*s^2"), p("2*s^3"), VARS)


def test_make_model_checks_universe(weierstrass):
    with pytest.raises(VariableMismatchError):
        weierstrass.make_model(p("s"), p("u", ("s", "u")), VARS)


def test_orders_at_and_along(weierstrass, model, origin):
    chart = model("s^2*t^2", "s^3*t^3")
    assert weierstrass.orders_at(chart, origin) == OrderTriple(4, 6, 12)
    assert weierstrass.orders_along(chart, p("s")) == OrderTriple(2, 3, 6)
    assert weierstrass.orders_at(chart, PointOnChart.from_mapping({"s": 0, "t": 1}, VARS)) == OrderTriple(2, 3, 6)


def test_twist_multiplicity():
    assert twist_multiplicity(OrderTriple(4, 6, 12)) == 1
    assert twist_multiplicity(OrderTriple(9, 12, 24)) == 2
    assert twist_multiplicity(OrderTriple(3, 6, 9)) == 0


def test_minimalize_along(weierstrass, model):
    chart = model("s^4", "s^6")
    twisted, k = weierstrass.minimalize_along(chart, p("s"), "D")
    assert k == 1
    assert twisted.f == p("1") and twisted.g == p("1")
    assert twisted.delta == p("31")
    assert twisted.twist_log[-1].k == 1


def test_minimalize_keeps_minimal_model(weierstrass, model):
    chart = model("s^2", "s^3 + t")
    twisted, k = weierstrass.minimalize_along(chart, p("s"), "D")
    assert k == 0
    assert twisted is chart


def test_twist_discrepancy_of_base_divisor(weierstrass, model):
    entry = weierstrass.twist_discrepancy(model("s^4*t", "s^6"), p("s"), "s")
    assert entry.base_discrepancy == 0
    assert entry.net == -1


def test_is_minimal(weierstrass, model):
    assert weierstrass.is_minimal(model("s^2*t^2", "s^3*t^3")).minimal
    verdict = weierstrass.is_minimal(model("s^4*(t + 1)", "s^6"))
    assert not verdict.minimal
    assert verdict.witness == p("s")


def test_normal_crossing_point_is_isolated(weierstrass, model, origin):
    verdict = weierstrass.is_isolated_46_12(model("s^2*t^2", "s^3*t^3"), origin, [p("s"), p("t")])
    assert verdict.isolated
    assert [str(d.triple) for d in verdict.diagnostics] == ["(2,3,6)", "(2,3,6)"]
    assert all(d.source == "user" and d.through_point for d in verdict.diagnostics)


def test_only_divisors_reaching_46_block_isolation(weierstrass, model, origin):
    verdict = weierstrass.is_isolated_46_12(model("s^4", "s^6 + t^7"), origin)
    assert verdict.isolated
    verdict = weierstrass.is_isolated_46_12(model("s^4*(t + 1)", "s^6"), origin)
    assert verdict.meets_46_threshold
    assert not verdict.isolated
    assert "carries orders" in verdict.reason


def test_smooth_point_is_not_isolated(weierstrass, model):
    verdict = weierstrass.is_isolated_46_12(
        model("s^2*t^2", "s^3*t^3"), PointOnChart.from_mapping({"s": 1, "t": 1}, VARS)
    )
    assert not verdict.isolated
    assert not verdict.in_46_12_class


def test_threshold_mode_admits_higher_discriminant_order(weierstrass, model, origin):
    singular = model("-3*s^2*t^2 + t^5", "2*s^3*t^3 + s^7")
    verdict = weierstrass.is_isolated_46_12(singular, origin)
    assert verdict.triple == OrderTriple(4, 6, 13)
    assert verdict.meets_46_threshold and not verdict.in_46_12_class
    assert not verdict.isolated
    assert verdict.mode == IsolationMode.CLASS
    verdict = weierstrass.is_isolated_46_12(singular, origin, mode=IsolationMode.THRESHOLD)
    assert verdict.isolated
    assert verdict.mode == IsolationMode.THRESHOLD
    assert "threshold mode" in verdict.reason
    assert all(d.below_threshold for d in verdict.diagnostics)


def test_threshold_mode_still_rejects_large_orders(weierstrass, model, origin):
    verdict = weierstrass.is_isolated_46_12(model("s^8 + t^8", "s^12 + t^13"), origin, mode=IsolationMode.THRESHOLD)
    assert verdict.triple.a == 8
    assert not verdict.isolated
    assert "nor in the range" in verdict.reason


def test_canonical_bound(weierstrass):
    assert weierstrass.canonical_bound_check([OrderTriple(4, 6, 12), OrderTriple(7, 11, 21)]).met
    verdict = weierstrass.canonical_bound_check([OrderTriple(8, 12, 24)])
    assert not verdict.met
    assert verdict.offending == OrderTriple(8, 12, 24)
