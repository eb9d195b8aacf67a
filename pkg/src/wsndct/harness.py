"""Seeded Monte Carlo trials over the full collection pipeline.

One trial = deploy, read, add noise, cluster, split the coefficient budget,
compress every cluster, route, charge energy, reconstruct, score. All
randomness for trial ``t`` comes from child streams of
``child_seed(master, "trial", t)``, so a trial is a pure function of
``(config, t)``. Cells of a sweep that differ only in ``n_c``, ``K``, ``sigma``
or route reuse the same deployment, field and noise draw (common random
numbers), which is what keeps the trend comparisons tight at 20 trials.
"""
from __future__ import annotations

import configparser
import csv
import dataclasses
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, clustering, energy, rng, routing, signals, transform
from .clustering import Algorithm
from .deployment import AreaGeometry, AreaKind, deploy
from .energy import EnergyModel, EnergyReport, MultihopCost
from .errors import ConfigError, InvalidArgument, NoStatistics
from .routing import Strategy
from .signals import FieldKind, FieldModel, NoiseSpec
from .transform import SelectionMode, SortMode

DIRECT = "direct"
MULTIHOP = "multihop"

AGGREGATE_COLUMNS = [
    "scenario", "n_c", "sigma", "K", "route", "algorithm", "trials",
    "mean_intra", "sd_intra", "mean_tobs", "sd_tobs", "mean_total", "sd_total",
    "mean_hops", "mean_error", "sd_error", "unreachable_rate",
]
TRIAL_COLUMNS = [
    "trial", "n_clusters", "algorithm", "route", "intra", "to_bs", "total",
    "n_c", "sigma", "K", "range_R", "error", "mean_hops", "chandler_hops",
    "unreachable", "partial", "analytic_intra", "analytic_to_bs", "analytic_total", "seed",
]


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "custom"
    geometry: AreaGeometry = AreaGeometry.square(100.0)
    n_nodes: int = 2000
    bs_Li: float | None = 300.0
    algorithms: tuple[Algorithm, ...] = (Algorithm.LEACH,)
    n_c: tuple[int, ...] = (100,)
    K: tuple[int, ...] = (200,)
    sort_mode: SortMode = SortMode.DESCENDING
    selection_mode: SelectionMode = SelectionMode.TOP_K_MAGNITUDE
    routes: tuple[str, ...] = (DIRECT,)
    range_R: tuple[float, ...] = ()
    strategy: Strategy = Strategy.BFS_MIN_HOP
    fallback_direct: bool = False
    energy: EnergyModel = EnergyModel()
    field_model: FieldModel = FieldModel()
    trace_path: str | None = None
    trace_epoch: int = 0
    sigma: tuple[float, ...] = (0.0,)
    channel_sigma: float = 0.0
    trials: int = 20
    seed: int = 0
    kmeans_max_iters: int = 300

    def __post_init__(self):
        tup = lambda v, f: tuple(f(x) for x in (v if isinstance(v, (list, tuple)) else (v,)))  # noqa: E731
        object.__setattr__(self, "algorithms", tup(self.algorithms, Algorithm))
        object.__setattr__(self, "n_c", tup(self.n_c, int))
        object.__setattr__(self, "K", tup(self.K, int))
        object.__setattr__(self, "routes", tup(self.routes, str))
        object.__setattr__(self, "range_R", tup(self.range_R, float))
        object.__setattr__(self, "sigma", tup(self.sigma, float))
        object.__setattr__(self, "sort_mode", SortMode(self.sort_mode))
        object.__setattr__(self, "selection_mode", SelectionMode(self.selection_mode))
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        self.validate()

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n_nodes < 1:
            raise ConfigError("n_nodes must be >= 1")
        if not self.algorithms or not self.n_c or not self.K or not self.routes or not self.sigma:
            raise ConfigError("algorithms, n_c, K, routes and sigma must be non-empty")
        for r in self.routes:
            if r not in (DIRECT, MULTIHOP):
                raise ConfigError(f"unknown route {r!r}; use {DIRECT!r} or {MULTIHOP!r}")
        if MULTIHOP in self.routes and len(self.range_R) != len(self.n_c):
            raise ConfigError("multihop needs one transmission range per n_c entry")
        if any(not 1 <= n <= self.n_nodes for n in self.n_c):
            raise ConfigError("every n_c must lie in [1, n_nodes]")
        if any(not 1 <= k <= self.n_nodes for k in self.K):
            raise ConfigError("every K must lie in [1, n_nodes]")
        if any(not s >= 0 for s in self.sigma) or self.channel_sigma < 0:
            raise ConfigError("noise levels must be >= 0")
        if any(not r > 0 for r in self.range_R):
            raise ConfigError("transmission ranges must be positive")
        if (self.geometry.kind is AreaKind.SQUARE) != (self.bs_Li is not None):
            raise ConfigError("bs_Li is required for square areas and must be absent for disks")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def range_for(self, n_c: int) -> float | None:
        if not self.range_R:
            return None
        return self.range_R[self.n_c.index(n_c)]


@dataclass(frozen=True)
class TrialResult:
    scenario: str
    trial: int
    seed: int
    algorithm: Algorithm
    n_c: int
    sigma: float
    K: int
    route: str
    range_R: float | None
    realized_n_c: int
    cluster_sizes: tuple[int, ...] = field(repr=False)
    energy: EnergyReport = field(repr=False)
    error: float
    mean_hops: float | None = None
    chandler_hops: float | None = None
    unreachable: int = 0
    partial: bool = False
    analytic_intra: float | None = None
    analytic_to_bs: float | None = None
    analytic_total: float | None = None

    @property
    def cell(self) -> tuple:
        return (self.algorithm.value, self.n_c, self.sigma, self.K, self.route)


def trial_seed(config: ExperimentConfig, trial_index: int) -> int:
    return rng.child_seed(config.seed, "trial", trial_index)


def load_readings(config: ExperimentConfig, dep, seed: int) -> np.ndarray:
    if config.trace_path is not None:
        ids, values = signals.load_trace_csv(config.trace_path, config.trace_epoch)
        if ids.size != dep.n or not np.array_equal(ids, np.arange(dep.n)):
            raise InvalidArgument(f"trace has {ids.size} nodes at epoch {config.trace_epoch}, deployment has {dep.n}")
        return values
    model = dataclasses.replace(config.field_model, seed=rng.child_seed(seed, "field"))
    return signals.sample_field(model, dep)


def _analytic(config, n_c, K, route, range_R, chandler):
    if config.energy.alpha != 2:
        return None, None, None
    n = config.n_nodes
    if config.geometry.kind is AreaKind.SQUARE:
        intra = energy.analytic_intra_square(n, n_c, config.geometry.side_L)
    else:
        intra = energy.analytic_intra_disk(n, n_c, config.geometry.radius_R0)
    if route == MULTIHOP:
        if chandler is None:
            return intra, None, None
        total = energy.analytic_total_multihop(intra, chandler, range_R, K)
        return intra, total - intra, total
    if config.geometry.kind is AreaKind.SQUARE:
        to_bs = K * energy.analytic_e_d2_square(config.geometry.side_L, config.bs_Li)
    else:
        to_bs = K * energy.analytic_e_d2_disk(config.geometry.radius_R0)
    return intra, to_bs, intra + to_bs


def _reconstruct(config, cs, readings, k_alloc, clean, noise_seed):
    estimate = np.zeros_like(readings)
    for ci, (c, k) in enumerate(zip(cs.clusters, k_alloc)):
        if k == 0:
            continue
        payload = transform.compress_cluster(
            c.members, readings[c.members], int(k), config.sort_mode, config.selection_mode
        )
        if config.channel_sigma > 0:
            z = rng.stream(noise_seed, "channel", ci).standard_normal(payload.k)
            payload = dataclasses.replace(payload, values=payload.values + config.channel_sigma * z)
        ids, vals = transform.reconstruct_cluster(payload)
        estimate[ids] = vals
    return transform.normalized_error(clean, estimate)


def trial_results(config: ExperimentConfig, trial_index: int) -> list[TrialResult]:
    """Every cell of the config evaluated for one trial index."""
    seed = trial_seed(config, trial_index)
    dep = deploy(config.geometry, config.n_nodes, config.bs_Li, rng.child_seed(seed, "deploy"))
    clean = load_readings(config, dep, seed)
    noise_seed = rng.child_seed(seed, "noise")
    noisy = {s: signals.add_noise(clean, NoiseSpec(s, noise_seed)) for s in config.sigma}
    cluster_seed = rng.child_seed(seed, "cluster")
    out = []
    for alg in config.algorithms:
        for n_c in config.n_c:
            cs = clustering.cluster(dep, alg, n_c, cluster_seed, config.kmeans_max_iters)
            sizes = cs.sizes
            heads_xy = dep.xy[cs.heads]
            bs_d2 = ((heads_xy - dep.bs_xy) ** 2).sum(axis=1)
            range_R = config.range_for(n_c)
            trees = {}
            if MULTIHOP in config.routes:
                trees[MULTIHOP] = routing.build_routing_tree(cs.heads, heads_xy, dep.bs_xy, range_R, config.strategy)
            for K in config.K:
                k_alloc = transform.allocate_coefficients(sizes, K, priority=bs_d2)
                errors = {s: _reconstruct(config, cs, noisy[s], k_alloc, clean, noise_seed) for s in config.sigma}
                for route in config.routes:
                    tree = trees.get(route)
                    mean_hops = chandler = None
                    if tree is not None:
                        try:
                            mean_hops, cdf = routing.hop_statistics(tree)
                            chandler = routing.expected_hops_chandler(cdf)
                        except NoStatistics:
                            pass
                    rep = energy.empirical_energy(dep, cs, k_alloc, config.energy, tree, fallback_direct=True)
                    unreachable = len(tree.unreachable) if tree is not None else 0
                    partial = unreachable > 0 and not config.fallback_direct
                    a_intra, a_bs, a_total = _analytic(config, n_c, K, route, range_R, chandler)
                    for s in config.sigma:
                        out.append(TrialResult(
                            scenario=config.scenario, trial=trial_index, seed=seed, algorithm=Algorithm(alg),
                            n_c=n_c, sigma=s, K=K, route=route, range_R=range_R if route == MULTIHOP else None,
                            realized_n_c=cs.n_clusters, cluster_sizes=tuple(sizes.tolist()), energy=rep,
                            error=errors[s], mean_hops=mean_hops, chandler_hops=chandler,
                            unreachable=unreachable, partial=partial,
                            analytic_intra=a_intra, analytic_to_bs=a_bs, analytic_total=a_total,
                        ))
    return out


def _restrict(config: ExperimentConfig, **cell) -> ExperimentConfig:
    changes = {}
    if cell.get("algorithm") is not None:
        changes["algorithms"] = (Algorithm(cell["algorithm"]),)
    if cell.get("n_c") is not None:
        n_c = int(cell["n_c"])
        if n_c not in config.n_c:
            raise ConfigError(f"n_c={n_c} is not part of the sweep {config.n_c}")
        changes["n_c"] = (n_c,)
        if config.range_R:
            changes["range_R"] = (config.range_for(n_c),)
    if cell.get("K") is not None:
        changes["K"] = (int(cell["K"]),)
    if cell.get("sigma") is not None:
        changes["sigma"] = (float(cell["sigma"]),)
    if cell.get("route") is not None:
        changes["routes"] = (cell["route"],)
    return dataclasses.replace(config, **changes)


def run_trial(config: ExperimentConfig, trial_index: int, *, algorithm=None, n_c=None, sigma=None,
              K=None, route=None) -> TrialResult:
    """One cell of one trial. Unspecified axes take their first configured value."""
    cfg = _restrict(
        config,
        algorithm=algorithm if algorithm is not None else config.algorithms[0],
        n_c=n_c if n_c is not None else config.n_c[0],
        sigma=sigma if sigma is not None else config.sigma[0],
        K=K if K is not None else config.K[0],
        route=route if route is not None else config.routes[0],
    )
    return trial_results(cfg, trial_index)[0]


def _mean_sd(values):
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return math.nan, math.nan
    mean = math.fsum(v.tolist()) / v.size
    if v.size < 2:
        return mean, math.nan
    return mean, math.sqrt(math.fsum(((v - mean) ** 2).tolist()) / (v.size - 1))


def aggregate(results: list[TrialResult]) -> list[dict]:
    """Per-cell mean and sample sd; order of ``results`` does not matter.

    Energy statistics use complete trials only (partial trials are those that
    left a head unconnected with fallback disabled); ``unreachable_rate`` is the
    share of realised heads that could not reach the BS.
    """
    cells: dict[tuple, list[TrialResult]] = {}
    for r in results:
        key = (r.scenario,) + r.cell
        cells.setdefault(key, []).append(r)
    rows = []
    for key in sorted(cells, key=lambda k: (k[0], k[1], k[2], k[3], k[4], k[5])):
        rs = sorted(cells[key], key=lambda r: r.trial)
        ok = [r for r in rs if not r.partial]
        mi, si = _mean_sd([r.energy.intra_cluster for r in ok])
        mb, sb = _mean_sd([r.energy.to_bs for r in ok])
        mt, st = _mean_sd([r.energy.total for r in ok])
        me, se = _mean_sd([r.error for r in rs])
        hops = [r.mean_hops for r in rs if r.mean_hops is not None]
        mh = _mean_sd(hops)[0] if hops else None
        heads = sum(r.realized_n_c for r in rs)
        rows.append({
            "scenario": key[0], "n_c": key[2], "sigma": key[3], "K": key[4], "route": key[5],
            "algorithm": key[1], "trials": len(rs),
            "mean_intra": mi, "sd_intra": si, "mean_tobs": mb, "sd_tobs": sb,
            "mean_total": mt, "sd_total": st, "mean_hops": mh, "mean_error": me, "sd_error": se,
            "unreachable_rate": sum(r.unreachable for r in rs) / heads if heads else 0.0,
        })
    return rows


@dataclass
class SweepResult:
    config: ExperimentConfig
    trials: list[TrialResult]
    aggregate: list[dict]

    @property
    def partial_trials(self) -> int:
        return sum(1 for r in self.trials if r.partial)

    def cell(self, **match) -> dict:
        found = [row for row in self.aggregate if all(row[k] == v for k, v in match.items())]
        if len(found) != 1:
            raise KeyError(f"{len(found)} aggregate rows match {match}")
        return found[0]


def run_sweep(config: ExperimentConfig, threads: int | None = None) -> SweepResult:
    """All cells times all trials. Thread count never changes the output."""
    threads = threads or os.cpu_count() or 1
    idx = range(config.trials)
    if threads == 1 or config.trials == 1:
        per_trial = [trial_results(config, t) for t in idx]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_trial = list(pool.map(lambda t: trial_results(config, t), idx))
    flat = [r for rs in per_trial for r in rs]
    flat.sort(key=lambda r: (r.cell, r.trial))
    return SweepResult(config, flat, aggregate(flat))


# ------------------------------------------------------------------ output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    if hasattr(v, "value"):
        return str(v.value)
    return str(v)


def aggregate_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGGREGATE_COLUMNS)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in AGGREGATE_COLUMNS])
    return buf.getvalue()


def trials_csv(results: list[TrialResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario"] + TRIAL_COLUMNS)
    for r in results:
        e = r.energy
        w.writerow([_fmt(v) for v in (
            r.scenario, r.trial, r.realized_n_c, r.algorithm, r.route, e.intra_cluster, e.to_bs, e.total,
            r.n_c, r.sigma, r.K, r.range_R, r.error, r.mean_hops, r.chandler_hops, r.unreachable,
            r.partial, r.analytic_intra, r.analytic_to_bs, r.analytic_total, r.seed,
        )])
    return buf.getvalue()


def histogram_csv(results: list[TrialResult], bin_width: int = 1) -> str:
    """Cluster-size histogram per (algorithm, n_c), pooled over trials."""
    seen = {}
    for r in results:
        seen.setdefault((r.algorithm.value, r.n_c, r.trial), r.cluster_sizes)
    pooled: dict[tuple, list[int]] = {}
    for (alg, n_c, _), sizes in sorted(seen.items()):
        pooled.setdefault((alg, n_c), []).extend(sizes)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "n_c", "bin_lo", "bin_hi", "count"])
    for (alg, n_c), sizes in sorted(pooled.items()):
        bins, counts = np.unique(np.asarray(sizes) // bin_width, return_counts=True)
        for b, c in zip(bins.tolist(), counts.tolist()):
            w.writerow([alg, n_c, b * bin_width, b * bin_width + bin_width - 1, c])
    return buf.getvalue()


def _join(values) -> str:
    return ",".join(_fmt(float(v)) if isinstance(v, float) else _fmt(v) for v in values)


def manifest_text(config: ExperimentConfig) -> str:
    """Key-value manifest; also the accepted config-file format."""
    g = config.geometry
    f = config.field_model
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp["run"] = {
        "software": f"wsndct {__version__}",
        "rng": rng.STREAM_VERSION,
        "seed": str(config.seed),
        "trials": str(config.trials),
        "sort_per_round": "true",
    }
    cp["scenario"] = {"name": config.scenario}
    cp["geometry"] = {"kind": g.kind.value}
    if g.kind is AreaKind.SQUARE:
        cp["geometry"]["side_L"] = repr(g.side_L)
        cp["geometry"]["bs_Li"] = repr(float(config.bs_Li))
    else:
        cp["geometry"]["radius_R0"] = repr(g.radius_R0)
    cp["network"] = {"n_nodes": str(config.n_nodes)}
    cp["clustering"] = {
        "algorithms": _join(config.algorithms),
        "n_c": _join(config.n_c),
        "kmeans_max_iters": str(config.kmeans_max_iters),
    }
    cp["compression"] = {
        "K": _join(config.K),
        "sort_mode": config.sort_mode.value,
        "selection_mode": config.selection_mode.value,
        "channel_sigma": repr(float(config.channel_sigma)),
    }
    cp["routing"] = {
        "routes": _join(config.routes),
        "range_R": _join(config.range_R),
        "strategy": config.strategy.value,
        "fallback_direct": str(config.fallback_direct).lower(),
    }
    cp["energy"] = {
        "alpha": str(config.energy.alpha),
        "multihop_cost": config.energy.multihop_cost.value,
        "index_overhead": str(config.energy.index_overhead).lower(),
    }
    if config.trace_path is not None:
        cp["signal"] = {"source": "trace", "trace_path": config.trace_path, "trace_epoch": str(config.trace_epoch)}
    else:
        sig = {
            "source": "field",
            "kind": f.kind.value,
            "n_bumps": str(f.n_bumps),
            "width_frac": repr(f.width_frac),
            "amp_min": repr(f.amp_min),
            "amp_max": repr(f.amp_max),
            "cutoff": str(f.cutoff),
            "amplitude": repr(f.amplitude),
            "offset": repr(f.offset),
        }
        if f.centers is not None:
            sig["centers"] = _join(float(v) for v in np.ravel(f.centers))
            sig["amplitudes"] = _join(float(v) for v in f.amplitudes)
            sig["widths"] = _join(float(v) for v in f.widths)
        cp["signal"] = sig
    cp["noise"] = {"sigma": _join(config.sigma)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _split(text: str, conv):
    text = text.strip()
    return tuple(conv(t.strip()) for t in text.split(",")) if text else ()


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_manifest(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
        get = lambda sec, key, default=None: cp.get(sec, key, fallback=default)  # noqa: E731
        kind = AreaKind(get("geometry", "kind", "square"))
        if kind is AreaKind.SQUARE:
            geometry = AreaGeometry.square(float(get("geometry", "side_L", "100")))
            bs_Li = float(get("geometry", "bs_Li", "300"))
        else:
            geometry = AreaGeometry.disk(float(get("geometry", "radius_R0", "50")))
            bs_Li = None
        trace_path = None
        field_model = FieldModel()
        if get("signal", "source", "field") == "trace":
            trace_path = get("signal", "trace_path")
        else:
            centers = get("signal", "centers")
            field_model = FieldModel(
                kind=FieldKind(get("signal", "kind", "gaussian_bumps")),
                n_bumps=int(get("signal", "n_bumps", "5")),
                width_frac=float(get("signal", "width_frac", "0.25")),
                amp_min=float(get("signal", "amp_min", "10.0")),
                amp_max=float(get("signal", "amp_max", "30.0")),
                cutoff=int(get("signal", "cutoff", "3")),
                amplitude=float(get("signal", "amplitude", "10.0")),
                offset=float(get("signal", "offset", "20.0")),
                centers=None if centers is None else tuple(np.reshape(_split(centers, float), (-1, 2)).tolist()),
                amplitudes=None if centers is None else _split(get("signal", "amplitudes"), float),
                widths=None if centers is None else _split(get("signal", "widths"), float),
            )
        return ExperimentConfig(
            scenario=get("scenario", "name", "custom"),
            geometry=geometry,
            n_nodes=int(get("network", "n_nodes", "2000")),
            bs_Li=bs_Li,
            algorithms=_split(get("clustering", "algorithms", "leach"), Algorithm),
            n_c=_split(get("clustering", "n_c", "100"), int),
            K=_split(get("compression", "K", "200"), int),
            sort_mode=SortMode(get("compression", "sort_mode", "descending")),
            selection_mode=SelectionMode(get("compression", "selection_mode", "top_k_magnitude")),
            channel_sigma=float(get("compression", "channel_sigma", "0.0")),
            routes=_split(get("routing", "routes", DIRECT), str),
            range_R=_split(get("routing", "range_R", ""), float),
            strategy=Strategy(get("routing", "strategy", "bfs_min_hop")),
            fallback_direct=_bool(get("routing", "fallback_direct", "false")),
            energy=EnergyModel(
                alpha=int(get("energy", "alpha", "2")),
                multihop_cost=MultihopCost(get("energy", "multihop_cost", "fixed_range")),
                index_overhead=_bool(get("energy", "index_overhead", "false")),
            ),
            field_model=field_model,
            trace_path=trace_path,
            trace_epoch=int(get("signal", "trace_epoch", "0")),
            sigma=_split(get("noise", "sigma", "0.0"), float),
            trials=int(get("run", "trials", "20")),
            seed=int(get("run", "seed", "0")),
            kmeans_max_iters=int(get("clustering", "kmeans_max_iters", "300")),
        )
    except ConfigError:
        raise
    except (configparser.Error, ValueError, TypeError, InvalidArgument) as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    return parse_manifest(text)


def write_results(sweep: SweepResult, out_dir) -> dict[str, Path]:
    """Write trials.csv, aggregate.csv, histogram.csv and manifest.ini into ``out_dir``."""
    out = Path(out_dir)
    files = {
        "trials": (out / "trials.csv", trials_csv(sweep.trials)),
        "aggregate": (out / "aggregate.csv", aggregate_csv(sweep.aggregate)),
        "histogram": (out / "histogram.csv", histogram_csv(sweep.trials)),
        "manifest": (out / "manifest.ini", manifest_text(sweep.config)),
    }
    written = {}
    for name, (path, text) in files.items():
        try:
            out.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
        written[name] = path
    return written


# --------------------------------------------------------------- scenarios

NC_SWEEP = (10, 50, 100, 200, 300)
R_SCHEDULE = (50.0, 30.0, 25.0, 22.0, 18.0)
K_SWEEP = (50, 100, 200, 400, 800)


def _square(**kw):
    base = dict(geometry=AreaGeometry.square(100.0), bs_Li=300.0, n_nodes=2000, K=(200,))
    base.update(kw)
    return ExperimentConfig(**base)


def _disk(**kw):
    base = dict(geometry=AreaGeometry.disk(50.0), bs_Li=None, n_nodes=2000, K=(200,))
    base.update(kw)
    return ExperimentConfig(**base)


SCENARIOS = {
    # cluster-size spread, intra cost and total at L_i = 3L in the 100 x 100 square
    "fig3": lambda: _square(scenario="fig3", algorithms=("kmeans", "leach"), n_c=NC_SWEEP),
    "fig4": lambda: _square(scenario="fig4", algorithms=("kmeans", "leach"), n_c=NC_SWEEP),
    "fig5": lambda: _square(scenario="fig5", algorithms=("kmeans", "leach"), n_c=NC_SWEEP),
    # disk of radius 50, BS at the centre
    "fig6": lambda: _disk(scenario="fig6", algorithms=("kmeans", "leach"), n_c=NC_SWEEP),
    "fig7": lambda: _disk(scenario="fig7", algorithms=("leach",), n_c=NC_SWEEP, range_R=R_SCHEDULE,
                          routes=(DIRECT, MULTIHOP), fallback_direct=True),
    # one 2000-node cluster: raw and sorted spectra
    "fig9": lambda: _square(scenario="fig9", algorithms=("kmeans",), n_c=(1,), K=K_SWEEP, sort_mode="none"),
    "fig11": lambda: _square(scenario="fig11", algorithms=("kmeans",), n_c=(1,), K=K_SWEEP),
    "fig12": lambda: _square(scenario="fig12", n_c=NC_SWEEP, K=K_SWEEP),
    "fig12-ascending": lambda: _square(scenario="fig12-ascending", n_c=NC_SWEEP, K=K_SWEEP, sort_mode="ascending"),
    "fig12-unsorted": lambda: _square(scenario="fig12-unsorted", n_c=NC_SWEEP, K=K_SWEEP, sort_mode="none"),
    "fig13": lambda: _square(scenario="fig13", n_c=NC_SWEEP, K=(100, 200, 400)),
    "fig14": lambda: _square(scenario="fig14", n_c=(100,), K=K_SWEEP, sigma=(0.0, 0.5, 2.0)),
}


def scenario(name: str) -> ExperimentConfig:
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise ConfigError(f"unknown scenario {name!r}; available: {', '.join(SCENARIOS)}") from None
