"""Run configuration and context assembly.

A RunConfig mirrors the command-line flags one to one; a flat key = value
config file may seed it, with flags winning.  build_algebra / build_series
turn a config into the working objects, optionally loading the basis table
from a content-addressed cache file.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from dataclasses import dataclass, field, asdict

from .gf import FieldCtx, is_prime
from .freelie import LieAlgebra
from .series import SeriesCtx, AutSpec, POLICIES


@dataclass
class RunConfig:
    p: int = 3
    n0: int = 1
    c0: int = 3
    a_max: int | None = None          # default (p-1) c0
    alphas: list = field(default_factory=lambda: [[1]])
    depth: int | None = None          # default: stabilization probe
    policy: str = "m1"
    cache_dir: str | None = None
    out: str = "json"
    seed: int = 0

    def validate(self) -> None:
        if not is_prime(self.p) or self.p <= 2:
            raise ConfigError("p must be an odd prime > 2")
        if self.n0 < 1:
            raise ConfigError("n0 must be a positive integer")
        if self.c0 <= 0 or self.c0 % self.p:
            raise ConfigError("c0 must be a positive multiple of p")
        if self.a_max is not None and not (1 <= self.a_max <= self.p * self.c0):
            raise ConfigError("a_max must lie in [1, p*c0]")
        if self.policy not in POLICIES:
            raise ConfigError(f"policy must be one of {POLICIES}")
        if self.out not in ("json", "text"):
            raise ConfigError("out must be 'json' or 'text'")
        alphas = [tuple(a) for a in self.alphas]
        if any(len(a) != self.n0 for a in alphas):
            raise ConfigError("each alpha needs n0 coordinates")
        nonzero = [a for a in alphas if any(c % self.p for c in a)]
        if nonzero and not any(c % self.p for c in alphas[0]):
            raise ConfigError(
                "alphas[0] must be nonzero unless all alphas vanish "
                "(identity-automorphism mode)")

    @property
    def a_max_eff(self) -> int:
        return self.a_max if self.a_max is not None else (self.p - 1) * self.c0

    def key(self) -> str:
        data = dict(asdict(self))
        data["a_max"] = self.a_max_eff
        data.pop("cache_dir")
        data.pop("out")
        blob = json.dumps(data, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def basis_key(self) -> str:
        """Content key of the basis table alone (independent of alphas,
        depth, seed and output options)."""
        blob = json.dumps([self.p, self.n0, self.c0, self.a_max_eff,
                           self.p - 1]).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


class ConfigError(ValueError):
    pass


def load_config_file(path: str) -> dict:
    """Flat key = value lines; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = val
    return out


def parse_alphas(text: str, n0: int) -> list:
    """Semicolon-separated field elements, comma-separated coordinates:
    '1,0;2,1' gives two elements of a degree-2 field."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        coords = [int(v) for v in chunk.split(",")]
        if len(coords) != n0:
            raise ConfigError(f"alpha {chunk!r} needs {n0} coordinates")
        out.append(coords)
    return out


def build_field(cfg: RunConfig) -> FieldCtx:
    return FieldCtx(cfg.p, cfg.n0)


def build_algebra(cfg: RunConfig, fieldctx: FieldCtx | None = None,
                  a_max: int | None = None) -> LieAlgebra:
    cfg.validate()
    f = fieldctx or build_field(cfg)
    alg = LieAlgebra(f, c0=cfg.c0, a_max=a_max or cfg.a_max_eff)
    if cfg.cache_dir:
        _load_basis_cache(cfg, alg)
    return alg


def build_series(cfg: RunConfig, alg: LieAlgebra | None = None) -> SeriesCtx:
    alg = alg or build_algebra(cfg)
    return SeriesCtx(alg, cfg.policy)


def build_aut(cfg: RunConfig, fieldctx: FieldCtx) -> AutSpec:
    alphas = tuple(tuple(int(v) % cfg.p for v in a) for a in cfg.alphas)
    return AutSpec(fieldctx, cfg.c0, alphas)


def _cache_path(cfg: RunConfig) -> str:
    name = f"basis_{cfg.p}_{cfg.n0}_{cfg.c0}_{cfg.a_max_eff}_{cfg.basis_key()}.json"
    return os.path.join(cfg.cache_dir, name)


def _load_basis_cache(cfg: RunConfig, alg: LieAlgebra) -> None:
    path = _cache_path(cfg)
    if not os.path.exists(path):
        return
    try:
        with open(path) as fh:
            data = json.load(fh)
        alg.load_table(data)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        warnings.warn(f"basis cache at {path} unusable ({exc}); rebuilding")
        try:
            os.remove(path)
        except OSError:
            pass


def save_basis_cache(cfg: RunConfig, alg: LieAlgebra) -> str | None:
    if not cfg.cache_dir:
        return None
    os.makedirs(cfg.cache_dir, exist_ok=True)
    path = _cache_path(cfg)
    with open(path, "w") as fh:
        json.dump(alg.table_to_json(), fh, sort_keys=True)
    return path
