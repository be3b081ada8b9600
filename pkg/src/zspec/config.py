"""Run configuration: a JSON file and/or command-line flags, validated up front."""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, PositiveInt, ValidationError, field_validator


class ConfigError(ValueError):
    pass


class GroupSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    l: Literal[1, 3]
    a: NonNegativeInt
    b: NonNegativeInt


class BlockSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lam: float = Field(alias="lambda", gt=0)
    k: PositiveInt

    @field_validator("k")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("block dimension k must be even")
        return v


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    group: Optional[GroupSpec] = None
    blocks: Optional[list[BlockSpec]] = None
    k: PositiveInt = 2
    lam: float = Field(1.0, alias="lambda", gt=0)
    zone: Union[NonNegativeInt, Literal["global"]] = 0
    kind: Literal["wk", "df"] = "wk"
    method: Literal["closed-form", "eigen-sum"] = "closed-form"
    t: Optional[float] = None
    t_grid: Optional[str] = None
    x: Optional[list[float]] = None
    y: Optional[list[float]] = None
    e_max: float = Field(20.0, gt=0)
    degree_max: NonNegativeInt = 10
    degree: PositiveInt = 6
    p_max: PositiveInt = 40
    family: Optional[str] = None
    zgamma: Optional[list[float]] = None
    suite: str = "all"
    tol: Optional[float] = Field(None, gt=0)
    quad_order: Optional[PositiveInt] = None
    format: Optional[Literal["csv", "json"]] = None  # per-command default
    include_constant: bool = False
    constant_mode: Literal["derived", "per-paper"] = "derived"
    seed: int = 0

    @field_validator("k")
    @classmethod
    def _even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("k must be even")
        return v

    @property
    def dimension(self) -> int:
        if self.group is not None:
            return (2 if self.group.l == 1 else 4) * (self.group.a + self.group.b)
        if self.blocks:
            return sum(b.k for b in self.blocks)
        return self.k

    def t_values(self) -> list[float]:
        if self.t_grid is None:
            if self.t is None:
                raise ConfigError("need --t or --t-grid")
            return [self.t]
        return parse_grid(self.t_grid)


def parse_grid(spec: str) -> list[float]:
    """'start:stop:step', stop inclusive."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"t-grid must be start:stop:step, got {spec!r}")
    try:
        a, b, h = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"t-grid has a non-numeric entry: {spec!r}") from exc
    if h <= 0 or b < a:
        raise ConfigError(f"t-grid needs step > 0 and stop >= start: {spec!r}")
    n = int(round((b - a) / h)) + 1
    return [a + i * h for i in range(n)]


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"' + re.escape(str(key)) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def format_validation_error(exc: ValidationError, text: str | None, source: str) -> str:
    msgs = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"])
        line = _line_of(text, err["loc"][0]) if (text and err["loc"]) else None
        where = f"{source}:{line}: " if line else f"{source}: "
        msgs.append(f"{where}{loc}: {err['msg']}")
    return "\n".join(msgs)


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge a JSON config file with command-line overrides (flags win)."""
    data: dict = {}
    text = None
    source = path or "<command line>"
    if path:
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}:1: top level must be a JSON object")
    file_keys = set(data)
    # flags arrive under field names; files use aliases ("lambda"), so merge on the alias
    fields = RunConfig.model_fields
    data.update({(fields[k].alias if k in fields and fields[k].alias else k): v
                 for k, v in overrides.items() if v is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        from_file = all(e["loc"] and e["loc"][0] in file_keys for e in exc.errors())
        raise ConfigError(format_validation_error(exc, text if from_file else None, source)) from exc
