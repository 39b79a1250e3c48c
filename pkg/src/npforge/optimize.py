"""Continuous optimization experiments on the boolean encodings.

All randomness flows through numpy's PCG64 generator seeded explicitly, so
identical seeds give identical reports on every platform.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, UnsupportedDegree
from .polynomial import SparsePolynomial, univariate_minima
from .sat_encode import CnfFormula

ZERO_FOUND = "ZeroFound"
LOCAL_MIN = "LocalMin"
BUDGET = "Budget"
DIVERGED = "Diverged"


@dataclass
class OptimizerConfig:
    step: float = 0.05
    max_iters: int = 2000
    grad_tol: float = 1e-7
    vertex_tol: float = 1e-3
    seed: int = 0
    lambda_schedule: List[float] = field(default_factory=lambda: [0.0])

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if not (0 < self.vertex_tol < 0.5):
            raise ValueError("vertex_tol must lie in (0, 1/2)")
        if not self.lambda_schedule or self.lambda_schedule[-1] != 0.0:
            raise ValueError("lambda schedule must end at 0")

    @classmethod
    def from_file(cls, path: str) -> "OptimizerConfig":
        with open(path) as fh:
            raw = json.load(fh)
        return cls(**raw)

    def to_dict(self) -> dict:
        return {
            "step": self.step, "max_iters": self.max_iters,
            "grad_tol": self.grad_tol, "vertex_tol": self.vertex_tol,
            "seed": self.seed, "lambda_schedule": list(self.lambda_schedule),
        }


@dataclass
class RunReport:
    final_point: List[float]
    final_value: float
    iters: int
    verdict: str
    rounded_assignment: Optional[List[bool]] = None
    trace: Optional[List[Tuple[int, float, float]]] = None  # (iter, value, grad norm)

    def to_dict(self) -> dict:
        d = {
            "final_point": self.final_point,
            "final_value": self.final_value,
            "iters": self.iters,
            "verdict": self.verdict,
        }
        if self.rounded_assignment is not None:
            d["rounded_assignment"] = [int(b) for b in self.rounded_assignment]
        return d


def _near_vertex(x: np.ndarray, tol: float) -> bool:
    return bool(np.all(np.minimum(np.abs(x), np.abs(x - 1.0)) < tol))


def _grad(p: SparsePolynomial, grads: List[SparsePolynomial], x: np.ndarray) -> np.ndarray:
    return np.array([g.evaluate(x) for g in grads])


def _descend(value_fn: Callable[[np.ndarray], float],
             grad_fn: Callable[[np.ndarray], np.ndarray],
             x: np.ndarray, cfg: OptimizerConfig,
             keep_trace: bool = False):
    """Fixed-step descent; the step halves whenever a move would increase the
    value.  Returns (x, value, iters, verdict, trace)."""
    val = value_fn(x)
    trace = [(0, val, float("nan"))] if keep_trace else None
    if not np.isfinite(val):
        return x, val, 0, DIVERGED, trace
    step = cfg.step
    it = 0
    while it < cfg.max_iters:
        g = grad_fn(x)
        gn = float(np.linalg.norm(g))
        if keep_trace:
            trace[-1] = (it, val, gn)
        if not np.isfinite(gn):
            return x, val, it, DIVERGED, trace
        if gn < cfg.grad_tol:
            break
        it += 1
        while True:
            cand = x - step * g
            cval = value_fn(cand)
            if np.isfinite(cval) and cval <= val:
                x, val = cand, cval
                break
            step *= 0.5
            if step < 1e-16:
                # no descent direction at this resolution; treat as converged
                if keep_trace:
                    trace.append((it, val, gn))
                return x, val, it, LOCAL_MIN, trace
        if keep_trace:
            trace.append((it, val, float("nan")))
        # vertex proximity is checked after moving so a descent launched
        # from a vertex of a smooth objective still gets to leave it
        if _near_vertex(x, cfg.vertex_tol):
            break
    verdict = LOCAL_MIN if it < cfg.max_iters else BUDGET
    return x, val, it, verdict, trace


def _finish(p, x, val, it, verdict, trace, formula: Optional[CnfFormula]) -> RunReport:
    rounded = None
    if formula is not None:
        bits = round_point(x[: formula.num_vars])
        if formula.satisfied(bits):
            rounded = bits
    if verdict != DIVERGED:
        if val < 1e-9 or rounded is not None:
            verdict = ZERO_FOUND
    return RunReport(list(map(float, x)), float(val), it, verdict,
                     rounded_assignment=rounded, trace=trace)


def gradient_descent(p: SparsePolynomial, start: Sequence[float],
                     cfg: OptimizerConfig,
                     formula: Optional[CnfFormula] = None,
                     keep_trace: bool = False) -> RunReport:
    if len(start) != p.num_vars:
        raise DimensionMismatch(f"start has {len(start)} coords, polynomial has {p.num_vars}")
    grads = p.gradient()
    x = np.asarray(start, dtype=float).copy()
    out = _descend(p.evaluate, lambda y: _grad(p, grads, y), x, cfg, keep_trace)
    return _finish(p, *out, formula)


def smoothed_descent(p: SparsePolynomial, start: Sequence[float],
                     cfg: OptimizerConfig,
                     formula: Optional[CnfFormula] = None,
                     keep_trace: bool = False) -> RunReport:
    """Descend p + lambda * laplacian(p), stepping lambda down the schedule;
    the final phase always runs at lambda = 0."""
    if len(start) != p.num_vars:
        raise DimensionMismatch(f"start has {len(start)} coords, polynomial has {p.num_vars}")
    lap = p.laplacian()
    p_grads = p.gradient()
    lap_grads = lap.gradient()
    x = np.asarray(start, dtype=float).copy()
    total_it = 0
    full_trace: List[Tuple[int, float, float]] = []
    out = None
    for lam in cfg.lambda_schedule:
        def value_fn(y, lam=lam):
            return p.evaluate(y) + lam * lap.evaluate(y) if lam else p.evaluate(y)

        def grad_fn(y, lam=lam):
            g = _grad(p, p_grads, y)
            if lam:
                g = g + lam * _grad(lap, lap_grads, y)
            return g

        out = _descend(value_fn, grad_fn, x, cfg, keep_trace)
        x, _, it, verdict, trace = out
        total_it += it
        if keep_trace and trace:
            full_trace.extend(trace)
        if verdict == DIVERGED:
            break
    x, val, _, verdict, _ = out
    # report the true (unsmoothed) value at the end point
    val = p.evaluate(x)
    return _finish(p, x, val, total_it, verdict,
                   full_trace if keep_trace else None, formula)


def line_minima_step(p: SparsePolynomial, pt: Sequence[float],
                     direction: Sequence[float]) -> Tuple[np.ndarray, float]:
    """Global minimum of p restricted to the line pt + t*direction, via the
    explicit univariate restriction.  Degree above 6 is refused."""
    if p.degree() > 6:
        raise UnsupportedDegree(f"degree {p.degree()} restriction not supported")
    coeffs = p.restrict_to_line(pt, direction)
    minima = univariate_minima(coeffs)
    pt = np.asarray(pt, dtype=float)
    d = np.asarray(direction, dtype=float)
    best_t, best_v = 0.0, p.evaluate(pt)
    for t, v in minima:
        if v < best_v:
            best_t, best_v = t, v
    return pt + best_t * d, float(best_v)


def multi_start(p: SparsePolynomial, k: int, cfg: OptimizerConfig,
                formula: Optional[CnfFormula] = None,
                strategy: str = "fixed") -> Tuple[List[RunReport], dict]:
    """k descents from seeded uniform starts in [0,1]^N, collected in start
    order.  strategy "line" replaces each gradient move by an exact line
    minimization along the negative gradient (degree <= 6 only)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = np.random.default_rng(np.random.PCG64(cfg.seed))
    starts = rng.random((k, p.num_vars))
    reports = []
    for s in starts:
        if strategy == "line":
            reports.append(_line_search_run(p, s, cfg, formula))
        else:
            reports.append(gradient_descent(p, s, cfg, formula))
    reps = _dedupe([r.final_point for r in reports], 2 * cfg.vertex_tol)
    best = min(r.final_value for r in reports)
    summary = {
        "runs": k,
        "best_value": best,
        "distinct_minima": len(reps),
        "zero_found": any(r.verdict == ZERO_FOUND for r in reports),
    }
    return reports, summary


def _line_search_run(p, start, cfg, formula) -> RunReport:
    grads = p.gradient()
    x = np.asarray(start, dtype=float).copy()
    val = p.evaluate(x)
    it = 0
    verdict = BUDGET
    while it < cfg.max_iters:
        g = _grad(p, grads, x)
        gn = float(np.linalg.norm(g))
        if gn < cfg.grad_tol or _near_vertex(x, cfg.vertex_tol):
            verdict = LOCAL_MIN
            break
        nxt, nval = line_minima_step(p, x, -g)
        it += 1
        if nval >= val - 1e-15:
            verdict = LOCAL_MIN
            break
        x, val = nxt, nval
    return _finish(p, x, val, it, verdict, None, formula)


def _dedupe(points: List[Sequence[float]], radius: float) -> List[np.ndarray]:
    reps: List[np.ndarray] = []
    for pt in points:
        a = np.asarray(pt, dtype=float)
        if all(np.max(np.abs(a - r)) >= radius for r in reps):
            reps.append(a)
    return reps


def local_minima_census(p: SparsePolynomial, samples: int,
                        cfg: OptimizerConfig) -> Tuple[int, List[np.ndarray]]:
    """Count distinct local minima reached by multi-start descent.

    Each surviving representative is certified by directional probes: p must
    not decrease along any of the 2N axis directions nor along the downhill
    gradient direction, at radii vertex_tol and vertex_tol/100.  A gradient
    norm cutoff is deliberately not used: at a degenerate zero of a high
    degree polynomial the value bottoms out at floating point noise while
    the gradient is still above any fixed tolerance, and the probe along
    the gradient direction already rejects points with a usable descent
    direction.
    """
    if p.num_vars > 12:
        raise ValueError("census limited to 12 variables")
    reports, _ = multi_start(p, samples, cfg)
    reps = _dedupe([r.final_point for r in reports
                    if r.verdict in (LOCAL_MIN, ZERO_FOUND)], 2 * cfg.vertex_tol)
    grads = p.gradient()
    # runs that stopped on vertex proximity have not driven the gradient
    # down yet; polish each representative without the vertex stop
    refine = OptimizerConfig(step=cfg.step, max_iters=cfg.max_iters,
                             grad_tol=cfg.grad_tol, vertex_tol=1e-12,
                             seed=cfg.seed, lambda_schedule=[0.0])
    refined = []
    for x in reps:
        x, _, _, _, _ = _descend(p.evaluate, lambda y: _grad(p, grads, y),
                                 x, refine)
        refined.append(x)
    verified = []
    for x in _dedupe(refined, 2 * cfg.vertex_tol):
        base = p.evaluate(x)
        dirs = []
        for i in range(p.num_vars):
            e = np.zeros(p.num_vars)
            e[i] = 1.0
            dirs.extend((e, -e))
        g = _grad(p, grads, x)
        gn = float(np.linalg.norm(g))
        if gn > 0:
            dirs.append(-g / gn)
        ok = all(p.evaluate(x + r * d) >= base - 1e-12
                 for d in dirs
                 for r in (cfg.vertex_tol, cfg.vertex_tol / 100))
        if ok:
            verified.append(x)
    return len(verified), verified


def round_point(pt: Sequence[float]) -> List[bool]:
    """Nearest of {0,1} per coordinate; a tie at exactly 0.5 rounds up."""
    return [v >= 0.5 for v in pt]


def round_and_test(pt: Sequence[float], f: CnfFormula) -> Optional[List[bool]]:
    if len(pt) < f.num_vars:
        raise DimensionMismatch(f"point has {len(pt)} coords, formula needs {f.num_vars}")
    bits = round_point(pt[: f.num_vars])
    return bits if f.satisfied(bits) else None


def write_run_csv(path: str, report: RunReport):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "value", "grad_norm"])
        for it, val, gn in report.trace or []:
            w.writerow([it, repr(val), "" if np.isnan(gn) else repr(gn)])
