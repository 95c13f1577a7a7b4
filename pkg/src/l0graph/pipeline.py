"""End-to-end clustering runs and parameter sweeps."""

from __future__ import annotations

import csv
import dataclasses
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import io
from .core import SolverConfig, lipschitz_constant, normalize_columns
from .metrics import accuracy, nmi
from .regularized import solve_regularized_l0
from .solver import l1_initialize, omp_sparse_code, solve_l0
from .spectral import gaussian_affinity, graph_from_affinity, kmeans, spectral_cluster, spectral_from_graph, symmetrize
from .synth import SubspaceSpec, generate, subspace_preserving_rate

logger = logging.getLogger(__name__)

METHODS = ("l0graph", "rl0graph", "ompgraph", "l1graph", "kmeans", "spectral-gaussian")
SWEEP_PARAMS = {"lambda": "lam", "gamma": "gamma", "knn_k": "knn_k", "T": "omp_t"}


def parse_synth(text, seed=0):
    """Parse ``"K=3,d=30,dk=3,nk=20,mode=distinct,sigma=0"``.

    ``dk`` and ``nk`` take a single value (repeated K times) or a
    colon-separated list. Optional keys: ``seed``, ``overlap``.
    """
    fields = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ValueError(f"bad synth field {part!r}; expected key=value")
        k, v = part.split("=", 1)
        fields[k.strip()] = v.strip()
    unknown = set(fields) - {"K", "d", "dk", "nk", "mode", "sigma", "seed", "overlap"}
    if unknown:
        raise ValueError(f"unknown synth keys: {sorted(unknown)}")
    try:
        K = int(fields.get("K", 1))
        d = int(fields["d"])

        def per_subspace(key):
            vals = [int(v) for v in fields[key].split(":")]
            if len(vals) == 1:
                vals = vals * K
            if len(vals) != K:
                raise ValueError(f"{key} needs 1 or K={K} values")
            return tuple(vals)

        return SubspaceSpec(
            ambient_dim=d,
            dims=per_subspace("dk"),
            counts=per_subspace("nk"),
            mode=fields.get("mode", "distinct"),
            noise_sigma=float(fields.get("sigma", 0.0)),
            seed=int(fields.get("seed", seed)),
            overlap_dim=int(fields.get("overlap", 1)),
        )
    except KeyError as exc:
        raise ValueError(f"synth spec missing {exc.args[0]!r}") from None


@dataclass(frozen=True)
class RunConfig:
    method: str = "l0graph"
    data: str | None = None
    labels_col: str | int | None = None
    synth: SubspaceSpec | None = None
    clusters: int | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    omp_t: int = 3
    normalize: bool = True
    seed: int = 0
    restarts: int = 10
    out: str | None = None
    export_graph: str | None = None
    export_codes: str | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if (self.data is None) == (self.synth is None):
            raise ValueError("exactly one of data path and synth spec is required")
        if self.method == "ompgraph" and self.omp_t < 1:
            raise ValueError("ompgraph needs T >= 1")
        if self.clusters is not None and self.clusters < 1:
            raise ValueError("clusters must be >= 1")


@dataclass
class RunReport:
    method: str
    parameters: dict
    n_features: int
    n_samples: int
    clusters: int
    labels: np.ndarray
    codes: np.ndarray | None = None
    accuracy: float | None = None
    nmi: float | None = None
    avg_nnz: float | None = None
    subspace_preserving_rate: float | None = None
    iterations: int | None = None
    initial_objective: float | None = None
    final_objective: float | None = None
    wall_time: float = 0.0

    def to_text(self):
        """Line-oriented ``key=value`` document; only wall_time varies between
        identical runs."""
        fmt = lambda v: repr(float(v)) if isinstance(v, float) else str(v)
        lines = [f"method={self.method}"]
        for k in sorted(self.parameters):
            lines.append(f"param.{k}={fmt(self.parameters[k])}")
        lines += [f"n_features={self.n_features}", f"n_samples={self.n_samples}", f"clusters={self.clusters}"]
        for key in ("accuracy", "nmi", "avg_nnz", "subspace_preserving_rate", "iterations", "initial_objective", "final_objective"):
            value = getattr(self, key)
            if value is not None:
                lines.append(f"{key}={fmt(value)}")
        lines.append("labels=" + " ".join(str(int(v)) for v in self.labels))
        lines.append(f"wall_time={self.wall_time:.6f}")
        return "\n".join(lines) + "\n"


def parse_report(text):
    """Inverse of :meth:`RunReport.to_text` as a plain dict of strings."""
    out = {}
    for line in text.splitlines():
        if line:
            k, v = line.split("=", 1)
            out[k] = v
    return out


def load_data(config):
    if config.synth is not None:
        ds = generate(config.synth)
        return ds.X, ds.truth
    return io.load_csv(config.data, config.labels_col)


def _parameters(config):
    cfg = config.solver
    p = {"normalize": config.normalize, "seed": config.seed, "restarts": config.restarts}
    if config.method in ("l0graph", "rl0graph"):
        p.update(lam=cfg.lam, lambda_l1=cfg.lambda_l1, tau=cfg.tau, max_iter=cfg.max_iter, tol=cfg.tol)
    if config.method == "rl0graph":
        p.update(gamma=cfg.gamma, knn_k=cfg.knn_k, outer_iter=cfg.reg_outer_iter, inner_iter=cfg.reg_inner_iter)
    if config.method == "l1graph":
        p.update(lambda_l1=cfg.lambda_l1, tau=cfg.tau, max_iter=cfg.l1_max_iter, tol=cfg.l1_tol)
    if config.method == "ompgraph":
        p.update(T=config.omp_t)
    return p


def run(config, X=None, truth=None):
    """Execute one clustering run.

    ``X``/``truth`` may be passed directly to skip loading (used by sweeps).
    """
    t0 = time.perf_counter()
    if X is None:
        X, truth = load_data(config)
    if config.normalize:
        X, _ = normalize_columns(X)
    d, n = X.shape
    c = config.clusters
    if c is None:
        if truth is None:
            raise ValueError("cluster count required when no labels are available")
        c = int(np.unique(truth).size)
    cfg = config.solver
    method = config.method

    codes, trace = None, None
    try:
        if method in ("l0graph", "rl0graph", "l1graph"):
            s = lipschitz_constant(X)
            codes = l1_initialize(X, cfg.lambda_l1, cfg.l1_max_iter, cfg.l1_tol, cfg.tau, s=s)
            if method != "l1graph":
                codes, trace = solve_l0(X, cfg, codes, s=s)
            if method == "rl0graph":
                codes, trace = solve_regularized_l0(X, cfg, codes, s=s)
        elif method == "ompgraph":
            codes = omp_sparse_code(X, config.omp_t)

        if codes is not None:
            graph = symmetrize(codes)
            result = spectral_cluster(codes, c, seed=config.seed, restarts=config.restarts)
            labels = result.labels
        elif method == "kmeans":
            graph = None
            labels, _ = kmeans(X.T, c, restarts=config.restarts, seed=config.seed)
        else:
            graph = graph_from_affinity(gaussian_affinity(X))
            labels = spectral_from_graph(graph, c, seed=config.seed, restarts=config.restarts).labels
    except Exception as exc:
        logger.error("method %s failed: %s", method, exc)
        raise

    report = RunReport(
        method=method,
        parameters=_parameters(config),
        n_features=d,
        n_samples=n,
        clusters=c,
        labels=labels,
        codes=codes,
    )
    if codes is not None:
        report.avg_nnz = np.count_nonzero(codes) / n
    if trace is not None:
        report.iterations = len(trace.values)
        report.initial_objective = trace.initial
        report.final_objective = trace.final
    if truth is not None:
        report.accuracy = float(accuracy(labels, truth))
        report.nmi = float(nmi(labels, truth))
        if codes is not None:
            report.subspace_preserving_rate = subspace_preserving_rate(codes, truth)
    report.wall_time = time.perf_counter() - t0

    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_text())
    if config.export_graph:
        if graph is None:
            raise ValueError(f"method {method!r} builds no graph to export")
        io.write_edge_list(config.export_graph, graph.W)
    if config.export_codes:
        if codes is None:
            raise ValueError(f"method {method!r} produces no code matrix")
        io.write_matrix_csv(config.export_codes, codes)
    return report


def with_parameter(config, parameter, value):
    if parameter not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {sorted(SWEEP_PARAMS)}")
    attr = SWEEP_PARAMS[parameter]
    if attr == "omp_t":
        return dataclasses.replace(config, omp_t=int(value))
    if attr == "knn_k":
        value = int(value)
    return dataclasses.replace(config, solver=dataclasses.replace(config.solver, **{attr: value}))


def sweep(config, parameter, values, csv_path=None):
    """One run per value with the shared seed; optionally write
    ``value,accuracy,nmi`` rows to ``csv_path``."""
    if parameter not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {sorted(SWEEP_PARAMS)}")
    X, truth = load_data(config)
    base = dataclasses.replace(config, out=None, export_graph=None, export_codes=None)
    reports = [run(with_parameter(base, parameter, v), X=X, truth=truth) for v in values]
    if csv_path:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow([parameter, "accuracy", "nmi"])
            for v, r in zip(values, reports):
                w.writerow([v, "" if r.accuracy is None else format(r.accuracy, ".17g"), "" if r.nmi is None else format(r.nmi, ".17g")])
    return reports
