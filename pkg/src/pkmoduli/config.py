"""Run configuration: defaults, JSON config file, command-line overrides (in that order)."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields, replace

from .kahler import REGISTRY, DeformationFunction, deformation

TOL_SCALE_ENV = "PKMODULI_TOL_SCALE"
PERTURB_TARGETS = ("metric",)


@dataclass(frozen=True)
class LabConfig:
    f_name: str = "linear"
    f_params: tuple = ()
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    sample_count: int = 100
    flow_steps: int = 2000
    perturb: tuple | None = None

    def __post_init__(self):
        if self.f_name not in REGISTRY:
            raise ValueError(f"unknown deformation function {self.f_name!r}")
        object.__setattr__(self, "f_params", tuple(float(a) for a in self.f_params))
        for name, tol in self.tolerances.items():
            if not float(tol) > 0:
                raise ValueError(f"tolerance for {name!r} must be positive")
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if self.flow_steps < 1:
            raise ValueError("flow_steps must be at least 1")
        if self.perturb is not None:
            target, eps = self.perturb
            if target not in PERTURB_TARGETS:
                raise ValueError(f"unknown perturbation target {target!r}")
            object.__setattr__(self, "perturb", (str(target), float(eps)))

    def deformation(self) -> DeformationFunction:
        return deformation(self.f_name, *self.f_params)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["f_params"] = list(self.f_params)
        d["perturb"] = None if self.perturb is None else list(self.perturb)
        return d


def load_config(path: str | None = None, **overrides) -> LabConfig:
    """Defaults, then the JSON file at ``path``, then non-None keyword overrides."""
    cfg = LabConfig()
    known = {f.name for f in fields(LabConfig)}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if data.get("perturb") is not None:
            data["perturb"] = tuple(data["perturb"])
        cfg = replace(cfg, **data)
    given = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(given) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return replace(cfg, **given)


def tolerance_scale() -> float:
    raw = os.environ.get(TOL_SCALE_ENV)
    if raw is None or raw == "":
        return 1.0
    scale = float(raw)
    if not scale > 0:
        raise ValueError(f"{TOL_SCALE_ENV} must be positive")
    return scale
