import hashlib
from typing import Literal

from pydantic import BaseModel, Field, model_validator

LayoutMode = Literal["fixed", "all", "en_bloc"]


class SearchConfig(BaseModel):
    """Budgets and mode of a single search run."""
    k: int | None = Field(None, ge=1, description="Page budget; color_search takes it as an argument.")
    layout_mode: LayoutMode = Field(
        "fixed",
        description="fixed: one given layout; all: every layout up to rotation/reflection; "
                    "en_bloc: block-contiguous product layouts only.",
    )
    require_extensible: bool = Field(False, description="Witness must pass is_extensible.")
    node_budget: int | None = Field(None, gt=0, description="Expanded nodes, cumulative across resumes.")
    time_budget: float | None = Field(None, gt=0, description="Wall-clock seconds for this invocation.")
    checkpoint_interval: int | None = Field(None, gt=0, description="Write a checkpoint every N nodes.")
    workers: int = Field(1, ge=1, description="Process pool width; 1 runs deterministically in-process.")
    h: int | None = Field(None, ge=1, description="Vertices of the row factor H (en bloc mode).")
    s: int | None = Field(None, ge=3, description="Length of the cycle factor C_s (en bloc mode).")
    checkpoint_path: str | None = Field(None, description="Checkpoint file; defaults into CHECKPOINT_DIR.")

    @model_validator(mode="after")
    def check_en_bloc(self) -> "SearchConfig":
        if self.layout_mode == "en_bloc" and (self.h is None or self.s is None):
            raise ValueError("en_bloc layout mode requires both h and s")
        if self.layout_mode == "en_bloc":
            self.require_extensible = True
        return self

    def config_hash(self, problem_key: str) -> str:
        """Identity of the search tree; budgets and worker count do not change it."""
        semantic = self.model_dump_json(include={"k", "layout_mode", "require_extensible", "h", "s"})
        return hashlib.sha256(f"{problem_key}|{semantic}".encode()).hexdigest()

    model_config = {
        "json_schema_extra": {
            "examples": [
                {"k": 5, "layout_mode": "en_bloc", "h": 3, "s": 3, "node_budget": 1_000_000},
            ]
        }
    }
