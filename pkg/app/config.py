from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings

DEFAULT_OUTPUT_DIR = "out"


class Settings(BaseSettings):
    app_name: str = "nomacop"
    environment: str = Field(
        default="development",
        validation_alias=AliasChoices("ENV", "ENVIRONMENT"),
    )
    log_level: str = Field(default="INFO", json_schema_extra={"env": "LOG_LEVEL"})
    output_dir: str = Field(
        default=DEFAULT_OUTPUT_DIR, json_schema_extra={"env": "OUTPUT_DIR"}
    )
    default_trials: int = Field(
        default=1_000_000, json_schema_extra={"env": "DEFAULT_TRIALS"}
    )
    chunk_size: int = Field(default=100_000, json_schema_extra={"env": "CHUNK_SIZE"})
    workers: int = Field(default=1, json_schema_extra={"env": "WORKERS"})
    min_validation_trials: int = Field(
        default=10_000, json_schema_extra={"env": "MIN_VALIDATION_TRIALS"}
    )
    validation_rel_tol: float = Field(
        default=0.05, json_schema_extra={"env": "VALIDATION_REL_TOL"}
    )
    # Points below this analytic value do not count towards the aggregate verdict.
    validation_min_probability: float = Field(
        default=1e-3, json_schema_extra={"env": "VALIDATION_MIN_PROBABILITY"}
    )

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "allow"  # Allow extra environment variables


def get_settings() -> Settings:
    """Get application settings with optional environment overrides."""
    return Settings()
