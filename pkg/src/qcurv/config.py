"""Run configuration: profile selectors, quadrature overrides, TOML loading.

The config file reader understands the TOML subset this tool emits and
documents ([section] headers, key = number/string/bool, # comments), which
keeps Python 3.10 support without a third-party TOML dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .dimension import DimensionContext, make_context
from .errors import ProfileError
from .profiles import RadialProfile, catalog_counterexample, catalog_sphere_family, numeric_profile
from .quadrature import QuadratureSpec

__all__ = ["RunConfig", "load_config_file", "resolve_profile", "build_spec"]


@dataclass(frozen=True)
class RunConfig:
    n: int = 4
    profile: str = "sphere:0.5"
    rel_tol: float | None = None
    abs_tol: float | None = None
    tail_cut: float | None = None
    sphere_nodes: int | None = None
    r_min: float = 0.5
    r_max: float = 50.0
    points_per_decade: int = 4
    output_format: str = "json"
    eps: float = 0.1


def _parse_scalar(raw: str):
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    if raw in ("true", "false"):
        return raw == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"cannot parse TOML value {raw!r}")


def load_config_file(path: str | Path) -> dict:
    """Parse the supported TOML subset into {section: {key: value}}."""
    sections: dict[str, dict] = {}
    current = sections.setdefault("", {})
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            current = sections.setdefault(stripped[1:-1].strip(), {})
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, raw = stripped.split("=", 1)
        current[key.strip()] = _parse_scalar(raw)
    return sections


def build_spec(cfg: RunConfig, file_sections: dict | None = None) -> QuadratureSpec:
    """QuadratureSpec from defaults, then [quadrature] table, then CLI flags."""
    spec = QuadratureSpec()
    table = (file_sections or {}).get("quadrature", {})
    allowed = {"rel_tol", "abs_tol", "max_subdivisions", "tail_cut", "sphere_nodes"}
    unknown = set(table) - allowed
    if unknown:
        raise ValueError(f"unknown [quadrature] keys: {sorted(unknown)}")
    if table:
        spec = replace(spec, **table)
    overrides = {
        k: v
        for k, v in (
            ("rel_tol", cfg.rel_tol),
            ("abs_tol", cfg.abs_tol),
            ("tail_cut", cfg.tail_cut),
            ("sphere_nodes", cfg.sphere_nodes),
        )
        if v is not None
    }
    return replace(spec, **overrides) if overrides else spec


def resolve_profile(ctx: DimensionContext, selector: str) -> RadialProfile:
    """Selector syntax: sphere:<alpha> | counterexample | file:<csv path>."""
    if selector == "counterexample":
        return catalog_counterexample(ctx)
    if selector.startswith("sphere:"):
        try:
            alpha = float(selector.split(":", 1)[1])
        except ValueError:
            raise ProfileError(f"bad alpha in profile selector {selector!r}")
        return catalog_sphere_family(ctx, alpha)
    if selector.startswith("file:"):
        path = Path(selector.split(":", 1)[1])
        if not path.exists():
            raise ProfileError(f"profile file not found: {path}")
        rows = []
        for line in path.read_text().splitlines():
            line = line.strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except (IndexError, ValueError):
                if not rows:
                    continue  # header line
                raise ProfileError(f"bad sample row in {path}: {line!r}")
        return numeric_profile(np.asarray(rows), max_order=2 * ctx.m)
    raise ProfileError(f"unknown profile selector {selector!r}")


def make_grid(r_min: float, r_max: float, points: int | None = None, per_decade: int = 4) -> np.ndarray:
    """Geometric radius grid; point count defaults to per_decade per decade."""
    if r_min <= 0 or r_max <= r_min:
        raise ValueError("need 0 < r_min < r_max")
    if points is None:
        decades = np.log10(r_max / r_min)
        points = max(2, int(round(decades * per_decade)) + 1)
    return np.geomspace(r_min, r_max, points)


def context_for(cfg: RunConfig) -> DimensionContext:
    return make_context(cfg.n)
