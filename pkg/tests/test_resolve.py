import pytest

from app.core.exceptions import NotIsolatedError
from app.models.kodaira import OrderTriple
from app.models.resolution import ResolutionStatus
from app.models.surface import FiberLocation, FiberPlace, LocationKind
from app.models.weierstrass import IsolationMode, PointOnChart
from app.services.resolve import STATUS_EXIT_CODES, ResolutionService, chart_overlap_consistent, fresh_name
from tests.conftest import VARS, p

TWIN_F = "(s - t^2)^2*(s + t^2)^2"
TWIN_G = "(s - t^2)^3*(s + t^2)^3"
# orders (4,6,13) at the origin
SINGULAR_F = "-3*s^2*t^2 + t^5"
SINGULAR_G = "2*s^3*t^3 + s^7"


def test_fresh_name():
    assert fresh_name("u", ("s", "t")) == "u"
    assert fresh_name("u", ("u", "u1")) == "u2"


class TestBlowUp:
    def test_normal_crossing_charts(self, resolver, model, origin):
        step = resolver.blow_up(model("s^2*t^2", "s^3*t^3"), origin)
        assert step.twist_k == 1
        assert step.chart_u.variables == ("u", "t")
        assert step.chart_u.f == p("u^2", ("u", "t"))
        assert step.chart_u.g == p("u^3", ("u", "t"))
        assert step.chart_v.variables == ("s", "v")
        assert step.chart_v.f == p("v^2", ("s", "v"))
        assert step.overlap_consistent

    def test_twin_curves_first_chart(self, resolver, model, origin):
        step = resolver.blow_up(model(TWIN_F, TWIN_G), origin)
        chart = ("u", "t")
        assert step.chart_u.f == p("(u - t)^2*(u + t)^2", chart)
        assert step.chart_u.g == p("(u - t)^3*(u + t)^3", chart)
        assert step.chart_u.twist_log[-1].k == 1

    def test_blow_up_away_from_origin(self, resolver, model):
        center = PointOnChart.from_mapping({"s": 1, "t": -2}, VARS)
        step = resolver.blow_up(model("(s - 1)^2*(t + 2)^2", "(s - 1)^3*(t + 2)^3"), center)
        assert step.twist_k == 1
        assert step.chart_u.f == p("u^2", ("u", "t"))

    def test_overlap_detects_mismatch(self, resolver, model, origin):
        step = resolver.blow_up(model("s^2*t^2", "s^3*t^3"), origin)
        assert not chart_overlap_consistent(step.chart_u, step.chart_v, step.twist_k + 1)


class TestResolveIsolated:
    def test_twin_curves_need_two_blow_ups(self, resolver, model, origin):
        divisors = [p("s - t^2"), p("s + t^2")]
        tree = resolver.resolve_isolated(model(TWIN_F, TWIN_G), origin, divisors)
        assert tree.status == ResolutionStatus.RESOLVED
        assert tree.depth == 2
        assert [step.label for step in tree.steps] == ["E1", "E2"]
        assert tree.steps[1].parent_label == "E1"
        assert tree.ledger.nets == (0, 0)
        assert tree.ledger.crepant
        first, second = tree.surfaces
        assert first.has_46_12_point and not first.rational
        assert first.isotrivial
        assert second.rational
        assert second.config.symbols() == ("I0*", "I0*")
        assert [surface.step_label for surface in tree.final_surfaces] == ["E2"]

    def test_normal_crossing_resolves_in_one_step(self, resolver, model, origin):
        tree = resolver.resolve_isolated(model("s^2*t^2", "s^3*t^3"), origin, [p("s"), p("t")])
        assert tree.depth == 1
        assert tree.surfaces[0].config.symbols() == ("I0*", "I0*")
        assert resolver.ledger_of(tree).total_discrepancy == 0

    def test_recursion_limit(self, resolver, model, origin):
        tree = resolver.resolve_isolated(model(TWIN_F, TWIN_G), origin, recursion_limit=1)
        assert tree.status == ResolutionStatus.RECURSION_LIMIT
        assert STATUS_EXIT_CODES[tree.status] == 4
        assert len(tree.steps) == 1
        assert "exceeds the limit of 1" in tree.detail
        assert "reach depth 2" in tree.detail

    def test_limit_equal_to_depth_resolves(self, resolver, model, origin):
        tree = resolver.resolve_isolated(model(TWIN_F, TWIN_G), origin, recursion_limit=2)
        assert tree.status == ResolutionStatus.RESOLVED
        assert tree.depth == 2
        assert tree.detail == ""

    def test_not_isolated(self, resolver, model, origin):
        with pytest.raises(NotIsolatedError) as info:
            resolver.resolve_isolated(model("s^4*(t + 1)", "s^6"), origin)
        assert info.value.exit_code == 3
        assert "s" in info.value.diagnostics["divisors"]

    def test_orders_below_threshold_are_not_isolated(self, resolver, model, origin):
        with pytest.raises(NotIsolatedError):
            resolver.resolve_isolated(model("s^2*t^2", "s^3*t^3"), PointOnChart.from_mapping({"s": 0, "t": 1}, VARS))

    def test_irrational_center_stops_recursion(self, resolver, kodaira, model, origin):
        step = resolver.blow_up(model("s^2*t^2", "s^3*t^3"), origin)
        location = FiberLocation(LocationKind.FACTOR, "u", factor=p("u^2 - 2", ("u", "t")))
        place = FiberPlace(location, kodaira.classify(OrderTriple(4, 6, 12)))
        status, detail, follow_up = resolver._next_center(step, place)
        assert status == ResolutionStatus.NON_RATIONAL_CENTER
        assert follow_up is None
        assert "root_of(u^2 - 2)" in detail

    def test_center_at_infinity_moves_to_chart_v(self, resolver, kodaira, model, origin):
        step = resolver.blow_up(model("s^2*t^2", "s^3*t^3"), origin)
        place = FiberPlace(FiberLocation(LocationKind.INFINITY, "u"), kodaira.classify(OrderTriple(4, 6, 12)))
        status, detail, _ = resolver._next_center(step, place)
        # orders on chart V at its origin are (2,3,6), so the center is not isolated
        assert status == ResolutionStatus.UNRESOLVED_CENTER
        assert "on E1" in detail


class TestThresholdMode:
    def test_class_mode_rejects_higher_discriminant_order(self, resolver, model, origin):
        with pytest.raises(NotIsolatedError) as info:
            resolver.resolve_isolated(model(SINGULAR_F, SINGULAR_G), origin)
        assert info.value.diagnostics["orders"] == "(4,6,13)"
        assert info.value.exit_code == 3

    def test_threshold_mode_reaches_singular_generic_fiber(self, resolver, surface, model, origin):
        tree = resolver.resolve_isolated(model(SINGULAR_F, SINGULAR_G), origin, mode=IsolationMode.THRESHOLD)
        assert tree.status == ResolutionStatus.RESOLVED
        assert tree.depth == 1
        assert tree.steps[0].twist_k == 1
        assert tree.ledger.crepant
        (exceptional,) = tree.surfaces
        assert exceptional.generic_fiber_singular
        assert not exceptional.rational
        assert exceptional.f_restricted == p("-3*u^2", ("u",))
        assert exceptional.delta_restricted.is_zero
        assert exceptional.offending_places == ()
        assert not surface.rationality_verdict(exceptional).rational

    def test_mode_defaults_to_settings(self, settings, weierstrass, surface, model, origin):
        threshold = settings.model_copy(update={"ISOLATION_MODE": IsolationMode.THRESHOLD})
        tree = ResolutionService(threshold, weierstrass, surface).resolve_isolated(model(SINGULAR_F, SINGULAR_G), origin)
        assert tree.surfaces[0].generic_fiber_singular
