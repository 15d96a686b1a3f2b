# capcalc/core/config.py
from pydantic_settings import BaseSettings
from typing import Optional, List
import json
import logging
from pydantic import field_validator

_LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class Settings(BaseSettings):
    # ======================================================
    # ENVIRONNEMENT
    # ======================================================
    ENV: str = "production"

    # ======================================================
    # PARALLÉLISME
    # ======================================================
    # worker cap for a-level and per-k parallelism
    CAPCALC_THREADS: int = 1

    # ======================================================
    # LOGGING
    # ======================================================
    CAPCALC_LOG_LEVEL: str = "WARNING"
    CAPCALC_LOG_FILE: Optional[str] = None

    # ======================================================
    # CALCUL EXACT
    # ======================================================
    REDUCE_ITERATION_FACTOR: int = 10
    REDUCE_MIN_ITERATIONS: int = 64
    WEIGHT_EXPANSION_MAX_STEPS: int = 10000
    TROPICAL_WORK_LIMIT: int = 2000000

    # ======================================================
    # CLI
    # ======================================================
    PLOT_DEFAULT_SAMPLES: int = 64
    VERIFY_MAX_K: int = 20
    # comma separated or JSON list, e.g. "T(1),unit square"
    VERIFY_POLYGONS: Optional[str] = None

    # ======================================================
    # VALIDATION
    # ======================================================
    @field_validator("CAPCALC_THREADS")
    @classmethod
    def _check_threads(cls, value: int) -> int:
        if value < 1:
            raise ValueError("CAPCALC_THREADS must be >= 1")
        return value

    @field_validator("CAPCALC_LOG_LEVEL")
    @classmethod
    def _check_log_level(cls, value: str) -> str:
        value = value.strip().upper()
        if value not in _LOG_LEVELS:
            raise ValueError(f"unknown log level: {value}")
        return value

    @field_validator(
        "REDUCE_ITERATION_FACTOR", "REDUCE_MIN_ITERATIONS", "WEIGHT_EXPANSION_MAX_STEPS", "TROPICAL_WORK_LIMIT"
    )
    @classmethod
    def _check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value

    @field_validator("PLOT_DEFAULT_SAMPLES")
    @classmethod
    def _check_samples(cls, value: int) -> int:
        if value < 2:
            raise ValueError("PLOT_DEFAULT_SAMPLES must be >= 2")
        return value

    # ======================================================
    # PROPRIÉTÉS CALCULÉES
    # ======================================================
    @property
    def parallel(self) -> bool:
        return self.CAPCALC_THREADS > 1

    @property
    def log_level(self) -> int:
        return getattr(logging, self.CAPCALC_LOG_LEVEL)

    @property
    def verify_polygons_list(self) -> List[str]:
        """Parse VERIFY_POLYGONS en liste (vide = tout le corpus)"""
        if not self.VERIFY_POLYGONS:
            return []
        return self._parse_string_to_list(self.VERIFY_POLYGONS)

    # ======================================================
    # MÉTHODES UTILITAIRES
    # ======================================================
    def _parse_string_to_list(self, value: str) -> List[str]:
        """Parse une string (JSON ou CSV) en liste"""
        if not value:
            return []

        if value.startswith("[") and value.endswith("]"):
            try:
                return json.loads(value)
            except json.JSONDecodeError:
                pass

        return [item.strip() for item in value.split(",") if item.strip()]

    # ======================================================
    # CONFIG PYDANTIC
    # ======================================================
    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"


# ======================================================
# INSTANCE
# ======================================================
settings = Settings()


if __name__ == "__main__":
    print("=" * 60)
    print("✅ CONFIGURATION CHARGÉE AVEC SUCCÈS")
    print("=" * 60)
    print(f"📱 ENVIRONNEMENT: {settings.ENV}")
    print(f"🧵 CAPCALC_THREADS: {settings.CAPCALC_THREADS}")
    print(f"📝 LOG LEVEL: {settings.CAPCALC_LOG_LEVEL}")
    print(f"📄 LOG FILE: {settings.CAPCALC_LOG_FILE or '❌'}")
    print(f"🔁 REDUCE_ITERATION_FACTOR: {settings.REDUCE_ITERATION_FACTOR} (min {settings.REDUCE_MIN_ITERATIONS})")
    print(f"🌴 TROPICAL_WORK_LIMIT: {settings.TROPICAL_WORK_LIMIT}")
    print(f"📋 VERIFY_POLYGONS: {settings.verify_polygons_list or 'corpus complet'}")
