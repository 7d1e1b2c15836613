"""
Configuration Module - Run configuration for the qcg3 commands.

Holds the backend choice, the deformation parameter, precision, output
format and the size guards. Everything a command needs to build a scalar
backend comes from here.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import ConfigError, DomainError
from .qscalar import ExactBackend, NumericBackend, ScalarBackend
from .utils import parse_fraction

BACKENDS = ("exact", "numeric")
FORMATS = ("json", "csv", "text")

DEFAULT_MAX_N = 6
WEIGHTS_MAX = 12
MIN_PRECISION = 30
MAX_N_ENV = "QCG3_MAX_N"


def max_n_from_env(environ: Optional[Mapping[str, str]] = None) -> int:
    """
    The table/verify size guard, overridable through QCG3_MAX_N.

    Raises:
        ConfigError: If the variable is not a non-negative integer
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(MAX_N_ENV)
    if raw is None or raw == "":
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{MAX_N_ENV} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ConfigError(f"{MAX_N_ENV} must be non-negative, got {value}")
    return value


@dataclass
class RunConfig:
    """
    Configuration of one command invocation.

    Attributes:
        backend: "exact" or "numeric"
        q: Deformation parameter as a rational string
        precision: Decimal digits (numeric arithmetic, exact zero tests)
        format: "json", "csv" or "text"
        max_n: Largest factor label accepted by table and verify
        tolerance: Verification tolerance exponent (residuals <= 10^-tolerance)
    """

    backend: str = "exact"
    q: str = "9/10"
    precision: int = 60
    format: str = "json"
    max_n: int = DEFAULT_MAX_N
    tolerance: int = 40

    @classmethod
    def from_env(cls, **overrides) -> RunConfig:
        """Defaults, with max_n read from the environment, then overrides."""
        values = {"max_n": max_n_from_env()}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def q_value(self) -> Fraction:
        try:
            return parse_fraction(self.q)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def tolerance_value(self) -> Fraction:
        return Fraction(1, 10**self.tolerance)

    def validate(self) -> RunConfig:
        """
        Check the configuration.

        Raises:
            ConfigError: On an unknown backend or format, q <= 0 or q == 1,
                a precision below 30 (either backend), or a negative guard
        """
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}; choose from {', '.join(BACKENDS)}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}; choose from {', '.join(FORMATS)}")
        q = self.q_value
        if q <= 0:
            raise ConfigError(f"q must be positive, got {q}")
        if q == 1:
            raise ConfigError("q = 1 is the classical point; use a generic q")
        if self.precision < MIN_PRECISION:
            raise ConfigError(f"precision must be at least {MIN_PRECISION}, got {self.precision}")
        if self.max_n < 0:
            raise ConfigError(f"max_n must be non-negative, got {self.max_n}")
        if self.tolerance < 1:
            raise ConfigError(f"tolerance exponent must be positive, got {self.tolerance}")
        return self

    def check_size(self, *labels: int) -> None:
        """
        Raises:
            ConfigError: If a factor label is negative or above max_n
        """
        for label in labels:
            if label < 0:
                raise ConfigError(f"factor labels must be non-negative, got {label}")
            if label > self.max_n:
                raise ConfigError(
                    f"factor label {label} exceeds the limit {self.max_n} (set {MAX_N_ENV} to raise it)"
                )

    def make_backend(self) -> ScalarBackend:
        """The scalar backend at (q, precision)."""
        self.validate()
        backend_class = ExactBackend if self.backend == "exact" else NumericBackend
        return backend_class(q=self.q_value, precision=self.precision)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        """
        Build a configuration from a dictionary, ignoring unknown keys.

        Raises:
            ConfigError: On values of the wrong type
        """
        known = {name: data[name] for name in cls.__dataclass_fields__ if name in data}
        try:
            for name in ("precision", "max_n", "tolerance"):
                if name in known:
                    known[name] = int(known[name])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad configuration value: {exc}") from exc
        return cls(**known)
