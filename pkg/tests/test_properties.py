"""Randomized property suites over small polynomials; fixed seeds keep them reproducible."""
import pytest

from app.core.parser import parse
from app.core.polyring import RatPoly
from app.core.sampling import PolynomialSampler
from app.models.resolution import ResolutionStatus
from app.models.weierstrass import PointOnChart
from app.services.resolve import chart_overlap_consistent
from app.services.weierstrass import discriminant
from tests.conftest import VARS

INSTANCES = 200
SEED = 20240611


@pytest.fixture
def sampler() -> PolynomialSampler:
    return PolynomialSampler(SEED, VARS)


def test_ring_axioms(sampler):
    for _ in range(INSTANCES):
        p, q, r = sampler.poly(), sampler.poly(), sampler.poly()
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r
        assert (p - p).is_zero
        assert p * 1 == p


def test_ord_at_point_is_additive(sampler):
    for _ in range(INSTANCES):
        p, q = sampler.nonzero_poly(), sampler.nonzero_poly()
        point = sampler.point()
        assert (p * q).ord_at_point(point) == p.ord_at_point(point) + q.ord_at_point(point)


def test_ord_along_is_additive(sampler):
    for _ in range(INSTANCES):
        d = sampler.linear_form()
        p = sampler.nonzero_poly() * d ** sampler.rng.randint(0, 3)
        q = sampler.nonzero_poly() * d ** sampler.rng.randint(0, 3)
        assert (p * q).ord_along(d) == p.ord_along(d) + q.ord_along(d)


def test_parse_print_round_trip(sampler):
    for _ in range(INSTANCES):
        p = sampler.poly(max_degree=5, max_terms=6)
        assert parse(p.format(), VARS) == p


def test_exact_division_inverts_multiplication(sampler):
    for _ in range(INSTANCES):
        p, q = sampler.poly(), sampler.nonzero_poly()
        assert (p * q).exact_divide(q) == p


def test_square_free_recomposition(sampler):
    for _ in range(INSTANCES):
        p = sampler.nonconstant_poly(2, 3) * sampler.nonconstant_poly(2, 3) ** sampler.rng.randint(1, 3)
        content, parts = p.squarefree_decompose()
        rebuilt = RatPoly.constant(content, VARS)
        for part, multiplicity in parts:
            rebuilt = rebuilt * part**multiplicity
        assert rebuilt == p
        multiplicities = [multiplicity for _, multiplicity in parts]
        assert multiplicities == sorted(set(multiplicities))
        for index, (part, _) in enumerate(parts):
            for other, _ in parts[index + 1:]:
                assert part.gcd(other).is_constant


def test_gcd_divides_both(sampler):
    for _ in range(INSTANCES):
        p, q = sampler.nonzero_poly(), sampler.nonzero_poly()
        common = p.gcd(q)
        assert common.divides(p) and common.divides(q)


def test_gcd_of_common_multiples(sampler):
    for _ in range(INSTANCES):
        p, q, r = sampler.nonzero_poly(), sampler.nonzero_poly(), sampler.nonzero_poly()
        assert (p * r).gcd(q * r) == (p.gcd(q) * r).normalized()


def test_minimality_is_monotone_in_candidates(sampler, weierstrass):
    for _ in range(INSTANCES):
        d = sampler.linear_form()
        f, g = sampler.nonzero_poly(2, 3), sampler.nonzero_poly(2, 3)
        if sampler.rng.random() < 0.5:
            f, g = f * d**4, g * d**6
        if discriminant(f, g).is_zero:
            continue
        model = weierstrass.make_model(f, g, VARS)
        fewer = [sampler.linear_form()]
        more = fewer + [d, sampler.linear_form()]
        if weierstrass.is_minimal(model, more).minimal:
            assert weierstrass.is_minimal(model, fewer).minimal


def test_twist_equivariance(sampler, weierstrass):
    for _ in range(INSTANCES):
        d = sampler.linear_form()
        k = sampler.rng.randint(1, 2)
        f = sampler.nonzero_poly(2, 3) * d ** (4 * k)
        g = sampler.nonzero_poly(2, 3) * d ** (6 * k)
        if discriminant(f, g).is_zero:
            continue
        model = weierstrass.make_model(f, g, VARS)
        twisted, twist = weierstrass.minimalize_along(model, d, "D")
        assert twist >= k
        assert twisted.delta * d ** (12 * twist) == model.delta


def test_blow_up_charts_agree_on_overlap(sampler, resolver, weierstrass):
    for _ in range(INSTANCES):
        f, g = sampler.poly(4, 4), sampler.poly(6, 4)
        if discriminant(f, g).is_zero:
            continue
        model = weierstrass.make_model(f, g, VARS)
        step = resolver.blow_up(model, PointOnChart.from_mapping(sampler.point(), VARS))
        assert step.overlap_consistent
        assert chart_overlap_consistent(step.chart_u, step.chart_v, step.twist_k)


@pytest.mark.slow
def test_resolutions_of_isolated_points_are_crepant(sampler, resolver, weierstrass, origin):
    for _ in range(INSTANCES):
        f, g = sampler.isolated_46_12_model()
        model = weierstrass.make_model(f, g, VARS)
        verdict = weierstrass.is_isolated_46_12(model, origin)
        assert verdict.isolated, verdict.reason
        tree = resolver.resolve_isolated(model, origin)
        assert tree.ledger.crepant
        if tree.status == ResolutionStatus.RESOLVED:
            assert all(surface.rational for surface in tree.final_surfaces)
