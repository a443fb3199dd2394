# common/config/settings.py
from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, AliasChoices


class Settings(BaseSettings):
    # Config de pydantic v2
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # ===== Workers =====
    threads: int = Field(
        default=1,
        ge=1,
        validation_alias=AliasChoices("V2VC_THREADS", "threads"),
    )

    # ===== Exact solvers =====
    exact_backend: str = Field(
        default="auto",
        pattern="^(auto|bb|milp)$",
        validation_alias=AliasChoices("V2VC_EXACT_BACKEND", "exact_backend"),
    )

    budget_nodes: int = Field(
        default=2_000_000,
        ge=1,
        validation_alias=AliasChoices("V2VC_BUDGET_NODES", "budget_nodes"),
    )

    # auto backend uses branch-and-bound up to this fleet size
    bb_max_evs: int = Field(
        default=3,
        validation_alias=AliasChoices("V2VC_BB_MAX_EVS", "bb_max_evs"),
    )

    brute_path_cap: int = Field(
        default=5_000,
        validation_alias=AliasChoices("V2VC_BRUTE_PATH_CAP", "brute_path_cap"),
    )

    brute_combo_cap: int = Field(
        default=2_000_000,
        validation_alias=AliasChoices("V2VC_BRUTE_COMBO_CAP", "brute_combo_cap"),
    )

    milp_time_limit: float = Field(
        default=300.0,
        validation_alias=AliasChoices("V2VC_MILP_TIME_LIMIT", "milp_time_limit"),
    )

    # ===== Bench =====
    exact_max_cols: int = Field(
        default=50_000,
        validation_alias=AliasChoices("V2VC_EXACT_MAX_COLS", "exact_max_cols"),
    )

    bench_runs: int = Field(
        default=5,
        ge=1,
        validation_alias=AliasChoices("V2VC_BENCH_RUNS", "bench_runs"),
    )

    # ===== R-V2VC =====
    g2vc_edges: bool = Field(
        default=False,
        validation_alias=AliasChoices("V2VC_G2VC_EDGES", "g2vc_edges"),
    )

    # ===== Misc =====
    log_level: str = Field(
        default="INFO",
        validation_alias=AliasChoices("V2VC_LOG_LEVEL", "log_level"),
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
