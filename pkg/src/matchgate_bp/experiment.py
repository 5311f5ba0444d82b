"""Parameter sweeps comparing closed forms, exact variances and Monte-Carlo estimates."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .circuit import CircuitSpec, estimate_variance
from .config import dense_limit
from .states import as_density, computational_zero, magic, named_observable, named_state, superposition, z_string
from .variance import closed_form, variance_exact

COLUMNS = ["experiment", "n", "param", "var_closed", "var_exact", "var_mc", "stderr", "samples", "layers", "seed"]
EXPERIMENTS = ("gaussian", "magic", "nonfermionic", "custom")
MC_LIMIT = 8


@dataclass
class ExperimentConfig:
    experiment: str
    n: list
    grid: list | None = None
    samples: int = 10_000
    layers: int | None = None
    layer_factor: int = 1
    seed: int = 0
    output: str | None = None
    format: str = "csv"
    workers: int = 1
    alpha: float = 2**-0.5
    beta: float = 2**-0.5
    state: str | None = None
    observable: str | None = None
    mc_limit: int = MC_LIMIT

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if isinstance(self.n, int):
            self.n = [self.n]
        self.n = [int(v) for v in self.n]
        if not self.n:
            raise ValueError("n list is empty")
        if self.grid is not None and not list(self.grid):
            raise ValueError("parameter grid is empty")
        if self.experiment == "magic" and any(v % 4 for v in self.n):
            raise ValueError("magic experiment needs every n divisible by 4")
        if self.experiment == "custom" and not (self.state and self.observable):
            raise ValueError("custom experiment needs both state and observable")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.layer_factor < 1:
            raise ValueError("layer_factor must be a positive integer")
        if self.samples and self.samples < 100:
            raise ValueError("samples must be 0 (skip Monte Carlo) or at least 100")

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))

    def points(self):
        """Grid points sorted by (n, param)."""
        out = []
        for n in sorted(set(self.n)):
            if self.experiment == "custom":
                params = [self.grid[0] if self.grid else ""]
            elif self.grid is not None:
                params = sorted(self.grid)
            elif self.experiment == "magic":
                params = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]
            elif self.experiment == "gaussian":
                # m = n gives the parity operator, whose loss is constant
                params = list(range(1, n))
            else:
                params = list(range(1, n + 1))
            out.extend((n, p) for p in params)
        return out


def _setup(cfg, n, param):
    """``(state, observable, closed value or None)`` for one grid point."""
    if cfg.experiment == "gaussian":
        m = int(param)
        return computational_zero(n), z_string(n, m), closed_form("gaussian", n=n, m=m)
    if cfg.experiment == "magic":
        tau = float(param)
        return magic(n, tau), named_observable("Z:1", n), closed_form("magic", n=n, tau=tau)
    if cfg.experiment == "nonfermionic":
        j = int(param)
        value = closed_form("nonfermionic", n=n, j=j, alpha=cfg.alpha, beta=cfg.beta)
        return superposition(n, cfg.alpha, cfg.beta), named_observable(f"X:{j}", n), value
    return named_state(cfg.state, n), named_observable(cfg.observable, n), None


def run_point(cfg, n, param):
    row = dict.fromkeys(COLUMNS, "")
    row.update(experiment=cfg.experiment, n=n, param=param, seed=cfg.seed)
    layers = cfg.layers if cfg.layers is not None else cfg.layer_factor * n * n
    row["layers"] = layers
    notes = []
    try:
        state, obs, closed = _setup(cfg, n, param)
    except ValueError as exc:
        notes.append(f"setup: {exc}")
        return row, notes
    if closed is not None:
        row["var_closed"] = closed
    if n <= dense_limit():
        try:
            row["var_exact"] = variance_exact(as_density(state), obs).variance
        except (ValueError, ArithmeticError) as exc:
            notes.append(f"exact: {exc}")
    else:
        notes.append("exact: n above dense limit")
    if cfg.samples and n <= cfg.mc_limit:
        est = estimate_variance(state, obs, CircuitSpec(n, layers, cfg.seed), cfg.samples, workers=1)
        row.update(var_mc=est.var_hat, stderr=est.stderr_var, samples=est.samples)
    elif cfg.samples:
        notes.append("mc: n above Monte-Carlo limit")
    return row, notes


def run_experiment(cfg: ExperimentConfig):
    """Rows ordered by (n, param); grid points run on ``cfg.workers`` threads."""
    points = cfg.points()
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda p: run_point(cfg, *p), points))
    else:
        results = [run_point(cfg, *p) for p in points]
    return [r for r, _ in results], [(p, notes) for p, (_, notes) in zip(points, results) if notes]


def _fmt(value):
    if value == "" or value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(rows, fmt="csv", timestamp=None):
    timestamp = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    if fmt == "json":
        clean = [{k: (None if v == "" else v) for k, v in r.items()} for r in rows]
        return json.dumps({"generated": timestamp, "rows": clean}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# generated {timestamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in COLUMNS])
    return buf.getvalue()


def default_config(name):
    """Shipped sweep ``name`` in {gaussian, magic, nonfermionic}."""
    text = resources.files(__package__).joinpath("configs", f"{name}.json").read_text()
    return ExperimentConfig.from_dict(json.loads(text))


def default_config_names():
    return sorted(p.name[:-5] for p in resources.files(__package__).joinpath("configs").iterdir() if p.name.endswith(".json"))


def config_dict(cfg):
    return asdict(cfg)


