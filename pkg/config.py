"""
Application configuration using environment variables.
"""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    ENVIRONMENT: str = "development"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Parallelism (results never depend on the thread count)
    UNIFORMITY_THREADS: int = 1
    PARALLEL_CHUNK: int = 16

    # Guards
    FEASIBILITY_MAX_OPS: float = 1e9
    MAX_CUBES: int = 250_000

    # Numerics
    DEFAULT_GRID_FACTOR: int = 8
    TERNARY_TOLERANCE: float = 1e-12
    INEQUALITY_SLACK: float = 1e-9

    # Pair averages: exhaustive below this M, sampled above
    EXACT_PAIR_MODE_MAX_M: int = 64
    MONTE_CARLO_PAIRS: int = 256

    # Density increment
    ITERATION_FLOOR: int = 100

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()
