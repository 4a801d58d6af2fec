"""Maximize the gate success probability over the discrete set of admissible T.

The feasible transmissions are the roots of det(a(T)) — p is only defined
where the homogeneous system has a nontrivial solution — so optimization is
root enumeration followed by evaluation, not gradient ascent.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .determinants import NodeSet
from .gate_solver import (
    PRECISION_CAP,
    BeamSplitter,
    DegenerateSystemError,
    GateSolution,
    SearchConfig,
    build_coefficient_matrix,
    find_transmission,
    success_probability,
)

__all__ = ["ScanEntry", "ScanReport", "SweepRow", "scan_nodes", "sweep", "max_workers"]


@dataclass(frozen=True)
class ScanEntry:
    T: complex
    p: float
    det_residual: float
    solution: GateSolution


@dataclass(frozen=True)
class ScanReport:
    nodes: NodeSet
    entries: tuple  # ScanEntry, ordered by T (real roots first, ascending)
    skipped: tuple  # (T, reason) for roots where the weights are undetermined
    search: SearchConfig
    best: Optional[ScanEntry] = field(default=None)

    def to_dict(self) -> dict:
        d = {
            "nodes": list(self.nodes),
            "entries": [
                {"T_re": complex(e.T).real, "T_im": complex(e.T).imag, "p": e.p, "det_residual": e.det_residual}
                for e in self.entries
            ],
            "skipped": [{"T_re": complex(t).real, "T_im": complex(t).imag, "reason": r} for t, r in self.skipped],
            "search": {k: getattr(self.search, k) for k in self.search.__dataclass_fields__},
        }
        d["best"] = None
        if self.best is not None:
            d["best"] = {"T_re": complex(self.best.T).real, "T_im": complex(self.best.T).imag, "p": self.best.p}
        return d


def scan_nodes(nodes: NodeSet, search: Optional[SearchConfig] = None) -> ScanReport:
    """Enumerate the roots of det(a) for this node set and evaluate p at each."""
    if len(nodes) > PRECISION_CAP:
        raise ValueError(f"N={len(nodes)} exceeds the double-precision cap {PRECISION_CAP}")
    cfg = search or SearchConfig()
    roots = find_transmission(nodes, cfg)
    entries = []
    skipped = []
    for t in roots:
        matrix = build_coefficient_matrix(nodes, BeamSplitter(t))
        try:
            sol = success_probability(matrix)
        except DegenerateSystemError as exc:
            skipped.append((t, str(exc)))
            continue
        entries.append(ScanEntry(T=t, p=sol.p, det_residual=sol.det_residual, solution=sol))
    best = None
    for e in entries:
        if best is None or e.p > best.p:
            best = e
    return ScanReport(nodes=nodes, entries=tuple(entries), skipped=tuple(skipped), search=cfg, best=best)


@dataclass(frozen=True)
class SweepRow:
    N: int
    T: complex
    p: float
    det_residual: float


def max_workers() -> int:
    """Parallelism cap: NSS_THREADS env var, else the CPU count."""
    env = os.environ.get("NSS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sweep(n_min: int, n_max: int, node_strategy: str = "minimal", search: Optional[SearchConfig] = None) -> list:
    """Scaling table (N, best T, best p, residual) for N = n_min..n_max.

    Independent N values run concurrently; the table is assembled in N order
    so output is deterministic.
    """
    if not 1 <= n_min <= n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    if n_max > PRECISION_CAP:
        raise ValueError(f"n_max exceeds the double-precision cap {PRECISION_CAP}")
    if node_strategy != "minimal":
        raise ValueError("only the 'minimal' node strategy is implemented")

    def one(N: int) -> Optional[SweepRow]:
        report = scan_nodes(NodeSet.minimal(N), search)
        if report.best is None:
            return None
        e = report.best
        return SweepRow(N=N, T=e.T, p=e.p, det_residual=e.det_residual)

    ns = list(range(n_min, n_max + 1))
    with ThreadPoolExecutor(max_workers=min(max_workers(), len(ns))) as pool:
        rows = list(pool.map(one, ns))
    return [r for r in rows if r is not None]
