from pathlib import Path

from pydantic_settings import BaseSettings

from app.models.weierstrass import IsolationMode


DATA_DIR = Path(__file__).resolve().parent.parent / "data"


class Settings(BaseSettings):
    # App
    APP_NAME: str = "WeierstrassLab"
    VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Resolution
    RECURSION_LIMIT: int = 16
    CHART_U_NAME: str = "u"
    CHART_V_NAME: str = "v"
    ISOLATION_MODE: IsolationMode = IsolationMode.CLASS

    # Mordell-Weil / flop bounds
    EXTREMAL_TABLE_PATH: str = str(DATA_DIR / "extremal_configurations.txt")

    # Jobs
    MAX_WORKERS: int = 4

    # Selftest
    SELFTEST_SEED: int = 20240611
    SELFTEST_INSTANCES: int = 200

    @property
    def extremal_table_path(self) -> Path:
        return Path(self.EXTREMAL_TABLE_PATH)

    class Config:
        env_file = ".env"
        case_sensitive = True


settings = Settings()
