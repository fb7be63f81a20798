"""The run configuration: every effective constant the bounds leave open.

The source material fixes none of gamma0, xi0, a, A, c0 numerically (they
are absolute-but-unspecified constants), so they live here as explicit,
report-echoed configuration.  Defaults are desk-scale stand-ins.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

__all__ = ["RunConfig", "DEFAULT_CONFIG"]


@dataclass(frozen=True)
class RunConfig:
    epsilon: Fraction = Fraction(1, 200)
    gamma0: int = 2
    xi0: float = 1e-4
    c0: float = 1.0
    a: float = 1.0
    A: float = 1.0
    b: float = 2.4          # zero-density exponent (the 12/5 default)
    korobov_residual_constant: float = 10.0
    work_budget: float = 1e9
    seed: int = 20260809
    threads: int = 1
    output_format: str = "json"

    def __post_init__(self):
        for name in ("xi0", "c0", "a", "A", "b", "korobov_residual_constant",
                     "work_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.gamma0 < 1 or self.threads < 1:
            raise ValueError("gamma0 and threads must be >= 1")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be json or csv")

    def as_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "gamma0": self.gamma0,
            "xi0": self.xi0,
            "c0": self.c0,
            "a": self.a,
            "A": self.A,
            "b": self.b,
            "korobov_residual_constant": self.korobov_residual_constant,
            "work_budget": self.work_budget,
            "seed": self.seed,
            "threads": self.threads,
        }

    def with_overrides(self, **kwargs) -> "RunConfig":
        clean = {k: v for k, v in kwargs.items() if v is not None}
        if "epsilon" in clean and not isinstance(clean["epsilon"], Fraction):
            clean["epsilon"] = Fraction(clean["epsilon"])
        return replace(self, **clean)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        """Parse a key=value file (blank lines and # comments ignored)."""
        values: dict = {}
        casts = {
            "epsilon": Fraction, "gamma0": int, "xi0": float, "c0": float,
            "a": float, "A": float, "b": float,
            "korobov_residual_constant": float, "work_budget": float,
            "seed": int, "threads": int, "output_format": str,
        }
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in casts:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = casts[key](val)
        return cls(**values)


DEFAULT_CONFIG = RunConfig()
