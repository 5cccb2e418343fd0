# © 2025 Visa.
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated documentation files (the "Software"), to deal in the Software without restriction, including without limitation the rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import os
from functools import lru_cache
from typing import Optional

from pydantic import BaseModel, Field, ValidationError

from app.errors import ConfigurationError
from app.models import Rational


class Settings(BaseModel):
    """Runtime settings, read from the environment (a .env file is loaded by app.main)"""

    precision: int = Field(128, ge=8)
    max_precision: int = Field(1024, ge=8)
    guard: int = Field(3, ge=1)
    max_steps: int = Field(1_000_000, ge=1)
    decimal_places: int = Field(10, ge=0, le=200)
    log_level: str = "INFO"
    # unset means drift widths are not checked
    drift_tolerance: Optional[Rational] = None

    @classmethod
    def from_env(cls) -> "Settings":
        raw = {
            "precision": os.getenv("PIERCE_PRECISION", "128"),
            "max_precision": os.getenv("PIERCE_MAX_PRECISION", "1024"),
            "guard": os.getenv("PIERCE_GUARD", "3"),
            "max_steps": os.getenv("PIERCE_MAX_STEPS", "1000000"),
            "decimal_places": os.getenv("PIERCE_DECIMAL_PLACES", "10"),
            "log_level": os.getenv("LOG_LEVEL", "INFO").upper(),
            "drift_tolerance": os.getenv("PIERCE_DRIFT_TOLERANCE") or None,
        }
        try:
            settings = cls(**raw)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid environment configuration: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}")
        if settings.max_precision < settings.precision:
            raise ConfigurationError(
                f"PIERCE_MAX_PRECISION ({settings.max_precision}) is below PIERCE_PRECISION ({settings.precision})"
            )
        if settings.drift_tolerance is not None and settings.drift_tolerance <= 0:
            raise ConfigurationError(f"PIERCE_DRIFT_TOLERANCE must be positive, got {settings.drift_tolerance}")
        return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get the process-wide settings"""
    return Settings.from_env()
