from fractions import Fraction

import pytest

from app.core.exceptions import RestrictedDeltaZeroError
from app.models.surface import LocationKind
from app.services.surface import exceptional_variable, restrict
from tests.conftest import p

CHART_U = ("u", "t")


@pytest.fixture
def exceptional_chart(weierstrass):
    def build(f: str, g: str):
        return weierstrass.make_model(
            p(f, CHART_U), p(g, CHART_U), CHART_U, "E1.U", exceptional_divisors=((p("t", CHART_U), "E1"),)
        )

    return build


def test_restrict_to_exceptional_line(exceptional_chart):
    chart = exceptional_chart("u^2 + t*u", "u^3 - t")
    assert exceptional_variable(chart) == "t"
    f_e, g_e, var = restrict(chart, "t")
    assert var == "u"
    assert f_e == p("u^2", ("u",))
    assert g_e == p("u^3", ("u",))


def test_normal_crossing_surface(resolver, surface, model, origin):
    report = surface.extract_surface(resolver.blow_up(model("s^2*t^2", "s^3*t^3"), origin))
    assert report.variable == "u"
    assert report.delta_restricted == p("31*u^6", ("u",))
    kinds = [place.location.kind for place in report.config.places]
    assert kinds == [LocationKind.POINT, LocationKind.INFINITY]
    assert report.config.places[0].location.value == 0
    assert report.config.symbols() == ("I0*", "I0*")
    assert report.config.total_delta_degree == 12
    assert report.rational and not report.infinity_inferred
    assert report.degrees.n_f == 4 and report.degrees.n_g == 6 and report.degrees.n_delta == 12
    assert surface.euler_check(report.config)
    assert report.charts_agree


def test_pencil_surface_has_a_degree_twelve_place(resolver, surface, model, origin):
    report = surface.extract_surface(resolver.blow_up(model("s^4", "t^6"), origin))
    assert report.delta_restricted == p("4*u^12 + 27", ("u",))
    (place,) = report.config.places
    assert place.location.kind == LocationKind.FACTOR
    assert place.multiplicity_of_places == 12
    assert place.fiber.symbol == "I1"
    assert report.config.total_delta_degree == 12
    assert report.rational
    assert not report.isotrivial
    assert any("treated as prime" in warning for warning in report.warnings)


def test_twin_curve_surface_keeps_a_46_12_point(resolver, surface, model, origin):
    step = resolver.blow_up(model("(s - t^2)^2*(s + t^2)^2", "(s - t^2)^3*(s + t^2)^3"), origin)
    report = surface.extract_surface(step)
    assert report.delta_restricted == p("31*u^12", ("u",))
    assert report.has_46_12_point
    assert report.offending_point.value == Fraction(0)
    assert report.config.symbols() == ("non-Kodaira",)
    assert report.isotrivial
    verdict = surface.rationality_verdict(report)
    assert not verdict.rational
    assert "(4,6,12) point" in verdict.reason


def test_infinity_inferred_without_chart_v(surface, exceptional_chart):
    report = surface.analyze_restriction("E1", exceptional_chart("u^2", "u^3"))
    assert report.infinity_inferred
    assert report.config.symbols() == ("I0*", "I0*")
    assert any("chart V unavailable" in warning for warning in report.warnings)


def test_rational_points_off_origin(surface, exceptional_chart):
    report = surface.analyze_restriction("E1", exceptional_chart("(u^2 - 1)^2", "(u^2 - 1)^3"))
    values = [place.location.value for place in report.config.places]
    assert values == [-1, 1]
    assert report.config.symbols() == ("I0*", "I0*")


def test_singular_generic_fiber(surface, exceptional_chart):
    report = surface.analyze_restriction("E1", exceptional_chart("-3*u^2 + t", "2*u^3"))
    assert report.generic_fiber_singular
    assert not report.rational
    assert surface.rationality_verdict(report).reason == "generic fiber over E is singular"


def test_both_restrictions_vanish(surface, exceptional_chart):
    with pytest.raises(RestrictedDeltaZeroError):
        surface.analyze_restriction("E1", exceptional_chart("t", "t^2"))


def test_non_coordinate_exceptional_divisor(weierstrass):
    chart = weierstrass.make_model(
        p("u", CHART_U), p("t", CHART_U), CHART_U, exceptional_divisors=((p("u + t", CHART_U), "E1"),)
    )
    with pytest.raises(RestrictedDeltaZeroError):
        exceptional_variable(chart)
