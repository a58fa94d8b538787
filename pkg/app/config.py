from pydantic import Field
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    app_name: str = "Matching Book Workbench"
    app_version: str = "0.3.0"
    debug: bool = False
    log_level: str = "INFO"

    # Default directory for search checkpoints (CHECKPOINT_DIR)
    checkpoint_dir: str = "checkpoints"

    # Search budgets
    search_node_budget: int = Field(1_000_000, gt=0)
    search_time_budget: float = Field(600.0, gt=0)
    search_checkpoint_interval: int = Field(100_000, gt=0)
    search_workers: int = Field(1, ge=1)

    # mbt_exact refuses larger graphs
    mbt_max_vertices: int = Field(10, ge=1)

    model_config = {"env_file": ".env", "extra": "ignore"}


@lru_cache
def get_settings() -> Settings:
    return Settings()
