# =============================================================================
# KIRCHHOFF LAB CONFIGURATION
# Run configuration models, environment settings and logging setup
# =============================================================================
"""
Configuration for command-line runs.

A run is described by one JSON document validated into ``RunConfig``:

    {
      "domain": {"a": 0, "b": 3.141592653589793, "n": 2001},
      "M": {"family": "power_shift", "a": 1, "b": 1, "c": 0, "p": 1},
      "model": {"kind": "sublinear", "lambda": 1, "q": 0.5},
      "solver": {"scheme": "picard", "max_iter": 500},
      "output": {"path": "u.csv", "format": "csv"}
    }

Unknown keys are rejected at every level. Environment settings are read after
``load_dotenv()``:

- KIRCHHOFF_LOG: quiet | info | debug (default info)
- KIRCHHOFF_VERBOSE: "true" prints tracebacks for unexpected failures
"""

from __future__ import annotations

import json
import logging
import math
import os
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, model_validator

from kirchhoff_lab.errors import ConfigError
from kirchhoff_lab.grid import Interval
from kirchhoff_lab.kirchhoff import DEFAULT_SAMPLES, DEFAULT_SCAN_MAX
from kirchhoff_lab.solver import SolveConfig

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


# =============================================================================
# ENUMS
# =============================================================================

class LogLevel(str, Enum):
    """Values of KIRCHHOFF_LOG."""
    QUIET = "quiet"
    INFO = "info"
    DEBUG = "debug"


class MFamily(str, Enum):
    """Kirchhoff families selectable from configuration."""
    POWER_SHIFT = "power_shift"
    CONSTANT = "constant"


class ModelKind(str, Enum):
    """Reaction models selectable from configuration."""
    SUBLINEAR = "sublinear"
    CONCAVE_CONVEX = "concave_convex"
    LOGISTIC = "logistic"
    CONSTANT = "constant"


class UpperKind(str, Enum):
    """Shape of a user-supplied upper function."""
    TORSION = "torsion"
    CONSTANT = "constant"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# =============================================================================
# RUN CONFIGURATION
# =============================================================================

class DomainConfig(BaseModel):
    """Interval and node count."""

    model_config = ConfigDict(extra="forbid")

    a: float = Field(0.0, description="Left endpoint")
    b: float = Field(math.pi, description="Right endpoint")
    n: int = Field(2001, ge=3, description="Nodes including both endpoints")

    @model_validator(mode="after")
    def _check_order(self) -> "DomainConfig":
        if not self.b > self.a:
            raise ValueError(f"domain needs a < b, got a={self.a}, b={self.b}")
        return self

    def to_interval(self) -> Interval:
        return Interval(a=self.a, b=self.b, n=self.n)


class KirchhoffConfig(BaseModel):
    """M(t) = a + b (t + c)^p, or the constant m."""

    model_config = ConfigDict(extra="forbid")

    family: MFamily = Field(MFamily.POWER_SHIFT, description="power_shift or constant")
    a: float = Field(1.0, description="Offset of power_shift")
    b: float = Field(1.0, description="Coefficient of power_shift")
    c: float = Field(0.0, description="Shift of power_shift")
    p: float = Field(1.0, description="Exponent of power_shift")
    m: float = Field(1.0, description="Value of the constant family")
    scan_max: float = Field(DEFAULT_SCAN_MAX, gt=0, description="Upper end of the classification scan")
    samples: int = Field(DEFAULT_SAMPLES, ge=2, description="Classification samples")

    @model_validator(mode="after")
    def _check_family(self) -> "KirchhoffConfig":
        if self.family is MFamily.CONSTANT:
            if not self.m > 0:
                raise ValueError("constant family needs m > 0")
            return self
        if self.a < 0 or self.b <= 0 or self.c < 0:
            raise ValueError("power_shift needs a >= 0, b > 0, c >= 0")
        if self.p < 0 and self.c <= 0:
            raise ValueError("power_shift with p < 0 needs c > 0")
        return self


class ModelConfig(BaseModel):
    """Reaction model; ``lambda`` is accepted as the key for ``lambda_``."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: ModelKind = Field(ModelKind.SUBLINEAR, description="Reaction model")
    lambda_: float = Field(1.0, alias="lambda", description="Model parameter lambda")
    q: float = Field(0.5, description="Concave exponent")
    p: float = Field(2.0, description="Convex or logistic exponent")
    value: float = Field(1.0, description="Right-hand side of the constant model")

    @model_validator(mode="before")
    @classmethod
    def _normalize_kind(cls, data: Any) -> Any:
        if isinstance(data, dict) and isinstance(data.get("kind"), str):
            data = {**data, "kind": data["kind"].replace("-", "_")}
        return data

    @model_validator(mode="after")
    def _check_exponents(self) -> "ModelConfig":
        if self.kind is ModelKind.SUBLINEAR and not 0 < self.q < 1:
            raise ValueError("sublinear model needs 0 < q < 1")
        if self.kind is ModelKind.CONCAVE_CONVEX and not 0 < self.q < 1 < self.p:
            raise ValueError("concave_convex model needs 0 < q < 1 < p")
        if self.kind is ModelKind.LOGISTIC and not self.p > 1:
            raise ValueError("logistic model needs p > 1")
        if self.kind is ModelKind.CONSTANT and not self.value > 0:
            raise ValueError("constant model needs value > 0")
        return self


class PairConfig(BaseModel):
    """User-chosen pair (epsilon phi1, K e) or (epsilon phi1, K)."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    epsilon: float = Field(..., ge=0, description="Scale of the principal eigenfunction")
    K: float = Field(..., gt=0, description="Scale of the upper function")
    upper: UpperKind = Field(UpperKind.TORSION, description="torsion or constant")


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: Optional[str] = Field(None, description="Solution file")
    format: OutputFormat = Field(OutputFormat.CSV, description="csv or json")
    report: Optional[str] = Field(None, description="Copy of the JSON report")


class RunConfig(BaseModel):
    """Complete description of a solve or verify-pair run."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    domain: DomainConfig = Field(default_factory=DomainConfig)
    kirchhoff: KirchhoffConfig = Field(default_factory=KirchhoffConfig, alias="M")
    model: ModelConfig = Field(default_factory=ModelConfig)
    solver: SolveConfig = Field(default_factory=SolveConfig)
    pair: Optional[PairConfig] = None
    output: OutputConfig = Field(default_factory=OutputConfig)


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON configuration document; validation happens in RunConfig."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"configuration file not found: {path}", {"path": path}) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration file is not valid JSON: {exc.msg}",
                          {"path": path, "line": exc.lineno, "column": exc.colno}) from exc
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a JSON object", {"path": path})
    return data


def validation_message(exc) -> str:
    """Flatten a pydantic ValidationError into 'dotted.location: message' lines."""
    parts = []
    for err in exc.errors():
        loc = ".".join(str(item) for item in err.get("loc", ()))
        parts.append(f"{loc}: {err.get('msg', '')}" if loc else err.get("msg", ""))
    return "; ".join(parts)


# =============================================================================
# ENVIRONMENT
# =============================================================================

class Settings(BaseModel):
    """Environment-derived settings."""

    log_level: LogLevel = LogLevel.INFO
    verbose: bool = False


def load_settings() -> Settings:
    """Load .env, then read KIRCHHOFF_LOG and KIRCHHOFF_VERBOSE."""
    load_dotenv()
    raw_level = os.getenv("KIRCHHOFF_LOG", LogLevel.INFO.value).strip().lower()
    try:
        level = LogLevel(raw_level)
    except ValueError as exc:
        raise ConfigError(
            f"KIRCHHOFF_LOG must be one of quiet, info, debug; got {raw_level!r}",
            {"variable": "KIRCHHOFF_LOG"},
        ) from exc
    verbose = os.getenv("KIRCHHOFF_VERBOSE", "false").strip().lower() == "true"
    return Settings(log_level=level, verbose=verbose)


def configure_logging(level: LogLevel = LogLevel.INFO) -> None:
    """Single stderr handler; stdout stays reserved for reports."""
    numeric = {
        LogLevel.QUIET: logging.ERROR,
        LogLevel.INFO: logging.INFO,
        LogLevel.DEBUG: logging.DEBUG,
    }[level]
    logging.basicConfig(level=numeric, format=LOG_FORMAT, stream=sys.stderr, force=True)


__all__ = [
    "LogLevel",
    "MFamily",
    "ModelKind",
    "UpperKind",
    "OutputFormat",
    "DomainConfig",
    "KirchhoffConfig",
    "ModelConfig",
    "PairConfig",
    "OutputConfig",
    "RunConfig",
    "Settings",
    "load_config_file",
    "validation_message",
    "load_settings",
    "configure_logging",
]
