import pytest

from app.core.config import Settings
from app.core.parser import parse
from app.models.weierstrass import PointOnChart
from app.services.kodaira import KodairaService
from app.services.mwflop import MordellWeilService
from app.services.resolve import ResolutionService
from app.services.surface import SurfaceService
from app.services.weierstrass import WeierstrassService

VARS = ("s", "t")


@pytest.fixture
def settings() -> Settings:
    return Settings(_env_file=None)


@pytest.fixture
def kodaira() -> KodairaService:
    return KodairaService()


@pytest.fixture
def weierstrass() -> WeierstrassService:
    return WeierstrassService()


@pytest.fixture
def surface(kodaira) -> SurfaceService:
    return SurfaceService(kodaira)


@pytest.fixture
def resolver(settings, weierstrass, surface) -> ResolutionService:
    return ResolutionService(settings, weierstrass, surface)


@pytest.fixture
def mordell_weil(settings, kodaira) -> MordellWeilService:
    return MordellWeilService(settings, kodaira)


@pytest.fixture
def origin() -> PointOnChart:
    return PointOnChart.origin(VARS)


@pytest.fixture
def model(weierstrass):
    def build(f: str, g: str):
        return weierstrass.make_model(parse(f, VARS), parse(g, VARS), VARS)

    return build


def p(text: str, variables=VARS):
    return parse(text, variables)
