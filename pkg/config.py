"""
Configuration settings for the qudit amplitude-damping code toolkit
"""
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List, Literal
from pathlib import Path


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_prefix="QADC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",  # Ignore extra fields in .env
    )

    # Application
    app_name: str = "Qudit AD Codes"
    app_version: str = "1.0.0"
    log_level: str = "INFO"

    # Numerical tolerances
    pruning_floor: float = 1e-15  # amplitudes below this are dropped from sparse states
    orthonormality_tol: float = 1e-10
    completeness_tol: float = 1e-12

    # Approximate Knill-Laflamme verification
    slope_tol: float = 0.15
    absolute_floor: float = 1e-13
    gamma_grid: List[float] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4]
    pair_filter: Literal["correctable", "total_order"] = "correctable"
    max_error_operators: int = 200_000

    # Search
    node_cap: int = 10**8  # QADC_NODE_CAP
    default_seed: int = 2014
    greedy_restarts: int = 32
    checkpoint_every: int = 1_000_000

    # Constructions
    brute_force_verify_max_words: int = 5000
    max_materialized_words: int = 1_000_000  # larger codes are only counted

    # Execution
    threads: int = 1
    results_dir: Path = Path("./results")

    @field_validator("gamma_grid")
    @classmethod
    def _grid_strictly_decreasing(cls, grid: List[float]) -> List[float]:
        if len(grid) < 2:
            raise ValueError("gamma_grid needs at least two points")
        if any(g <= 0 for g in grid):
            raise ValueError("gamma_grid values must be positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise ValueError("gamma_grid must be strictly decreasing")
        return grid


# Create settings instance
settings = Settings()
