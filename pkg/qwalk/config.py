import os
import logging
from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)


# ============================================================================
# Tolerance ladder
# ============================================================================

class Tolerances(BaseModel):
    """Numerical thresholds separating floating error from structural failure."""
    construction: float = 1e-12
    magic: float = 1e-9
    spectral: float = 1e-6
    positivity: float = 1e-10

# ============================================================================
# Resource caps
# ============================================================================

class ResourceCaps(BaseModel):
    """Desk-scale limits; exceeding one raises ResourceCapExceeded."""
    transfer_rows: int = 20000
    transfer_entries: int = 50_000_000
    cesaro_rows: int = 200_000
    walk_enumeration: int = 100_000_000
    phase_sum_terms: int = 10_000_000
    nc_size: int = 12

# ============================================================================
# Sampling
# ============================================================================

class SamplingPolicy(BaseModel):
    """Monte Carlo and Cesaro iteration settings."""
    threads: int = Field(default=1, ge=1)
    mc_chunk_size: int = Field(default=4096, ge=1)
    cesaro_rounds: int = Field(default=2000, ge=1)
    cesaro_samples: int = Field(default=16, ge=2)

# ============================================================================
# Combined Policy
# ============================================================================

class NumericPolicy(BaseModel):
    """All numeric settings in one object."""
    tolerances: Tolerances = Field(default_factory=Tolerances)
    caps: ResourceCaps = Field(default_factory=ResourceCaps)
    sampling: SamplingPolicy = Field(default_factory=SamplingPolicy)

# ============================================================================
# Main Configuration
# ============================================================================

class Config(BaseSettings):
    """Configuration settings for qwalk, read from QWALK_* environment variables."""

    model_config = SettingsConfigDict(
        env_file=os.path.join(
            os.path.dirname(os.path.abspath(__file__)), "../.env"
        ),
        env_prefix="QWALK_",
        case_sensitive=True,
        extra="ignore"
    )

    THREADS: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    LOG_DIR: str = Field(default="qwalk_logs")

    TOL_CONSTRUCTION: float = Field(default=1e-12)
    TOL_MAGIC: float = Field(default=1e-9)
    TOL_SPECTRAL: float = Field(default=1e-6)
    TOL_POSITIVITY: float = Field(default=1e-10)

    CAP_TRANSFER_ROWS: int = Field(default=20000)
    CAP_TRANSFER_ENTRIES: int = Field(default=50_000_000)
    CAP_CESARO_ROWS: int = Field(default=200_000)
    CAP_WALK_ENUMERATION: int = Field(default=100_000_000)
    CAP_PHASE_SUM_TERMS: int = Field(default=10_000_000)
    CAP_NC_SIZE: int = Field(default=12)

    MC_CHUNK_SIZE: int = Field(default=4096)
    CESARO_ROUNDS: int = Field(default=2000)
    CESARO_SAMPLES: int = Field(default=16)

    @property
    def current_policy(self) -> NumericPolicy:
        """Returns the structured numeric policy.

        Returns:
            NumericPolicy containing tolerances, caps and sampling settings
        """
        tolerances = Tolerances(
            construction=self.TOL_CONSTRUCTION,
            magic=self.TOL_MAGIC,
            spectral=self.TOL_SPECTRAL,
            positivity=self.TOL_POSITIVITY
        )

        caps = ResourceCaps(
            transfer_rows=self.CAP_TRANSFER_ROWS,
            transfer_entries=self.CAP_TRANSFER_ENTRIES,
            cesaro_rows=self.CAP_CESARO_ROWS,
            walk_enumeration=self.CAP_WALK_ENUMERATION,
            phase_sum_terms=self.CAP_PHASE_SUM_TERMS,
            nc_size=self.CAP_NC_SIZE
        )

        sampling = SamplingPolicy(
            threads=self.THREADS,
            mc_chunk_size=self.MC_CHUNK_SIZE,
            cesaro_rounds=self.CESARO_ROUNDS,
            cesaro_samples=self.CESARO_SAMPLES
        )

        return NumericPolicy(tolerances=tolerances, caps=caps, sampling=sampling)


@lru_cache(maxsize=1)
def get_config() -> Config:
    """Get the process-wide configuration instance."""
    return Config()


def get_policy() -> NumericPolicy:
    """Shortcut for get_config().current_policy."""
    return get_config().current_policy
