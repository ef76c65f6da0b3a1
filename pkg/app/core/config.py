import os

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="FREEPROB_", extra="ignore")

    # runtime
    threads: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    log_file: str | None = None

    # matrix engine
    singularity_floor: float = 1e-10
    max_resamples: int = 5
    unitary_tol: float = 1e-10
    projection_tol: float = 1e-10
    partition_tol: float = 1e-8
    commutant_rtol: float = 1e-9

    # measures engine
    atom_schedule: tuple[float, ...] = (1e-2, 1e-3, 1e-4)
    atom_stability_tol: float = 0.1
    atom_floor: float = 1e-3
    mass_tolerance: float = 1e-2
    moment_residual_tol: float = 1e-8
    contour_points: int = 64

    # two-projection engine
    node_count: int = 256
    max_word_length: int = 12
    calibration_tol: float = 1e-5
    weight_tol: float = 1e-8

    # verdict rule: mean |trace| <= max(abs_floor, z_mult * stderr + bias_term / N)
    abs_floor: float = 0.04
    z_mult: float = 4.0
    bias_term: float = 10.0


settings = Settings()

# caps every worker pool; FREEPROB_THREADS is read by Settings as well
MAX_THREADS = max(1, min(settings.threads, os.cpu_count() or 1))
