"""Coefficient matrix of the conditional sign-shift gate, its roots and cofactors.

The gate exists at transmission values T where the N x N coefficient matrix
a = a1 + a2 becomes singular; the ancilla/projection weights then come from
the null space, and the post-selection success probability is

    p = |sum_l A_l a2[row, l]|^2 / (sum_l |A_l|)^2

with A_l the cofactors of the chosen row.  For the minimal photon numbers
{0..N-1} everything is known in closed form: det(a) =
(T^2-1)^{N(N-1)/2} [2-(1-T)^N], the root T = 1-2^{1/N}, and p = 1/N^2.

Matrix rows are indexed k = 1..N but stored 0-based, so row index kk
corresponds to photon level k = kk+1 and a2[kk, l] is the beam-splitter
diagonal element for photon level kk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .determinants import NodeSet, dense_det, exact_det

__all__ = [
    "BeamSplitter",
    "AncillaSpec",
    "CoefficientMatrix",
    "GateSolution",
    "SearchConfig",
    "DegenerateSystemError",
    "bs_diagonal_element",
    "bs_diagonal_element_exact",
    "build_coefficient_matrix",
    "coefficient_matrix_exact",
    "det_closed_form",
    "optimal_transmission",
    "find_transmission",
    "cofactors",
    "cofactor_closed_form",
    "success_probability",
    "numerator_closed_form",
    "denominator_closed_form",
]

# double precision runs out of dynamic range in (T^2-1)^{N(N-1)} around here
PRECISION_CAP = 14


class DegenerateSystemError(ValueError):
    """Raised when the coefficient matrix has a null space of dimension > 1
    (or all cofactors vanish), so the gate weights are not determined."""


@dataclass(frozen=True)
class BeamSplitter:
    """Active beam splitter with (possibly complex) transmission T."""

    T: complex

    def __post_init__(self):
        if abs(self.T) > 1.0 + 1e-12:
            raise ValueError("|T| must not exceed 1")

    @property
    def P(self) -> float:
        """Jacobi-polynomial argument 2|T|^2 - 1."""
        return 2.0 * abs(self.T) ** 2 - 1.0

    @property
    def r(self) -> float:
        """Reflection magnitude sqrt(1 - |T|^2)."""
        return math.sqrt(max(0.0, 1.0 - abs(self.T) ** 2))

    @property
    def is_real(self) -> bool:
        return abs(complex(self.T).imag) == 0.0


@dataclass(frozen=True)
class AncillaSpec:
    """N-term ancilla: photon numbers n_l with real weights gamma_l."""

    nodes: NodeSet
    gammas: tuple

    def __post_init__(self):
        if len(self.gammas) != len(self.nodes):
            raise ValueError("one weight per photon number required")
        norm = sum(g * g for g in self.gammas)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError("weights must satisfy sum gamma^2 = 1")

    @property
    def N(self) -> int:
        return len(self.nodes)


def bs_diagonal_element(k: int, n: int, bs: BeamSplitter) -> complex:
    """Fock-diagonal beam-splitter amplitude <k, n| U |k, n>.

    Equal to (T*)^{n-k} P_k^{(0,n-k)}(2|T|^2-1), but evaluated through the
    fused combinatorial sum

        sum_j (-1)^j C(k,j) C(n,j) T^{k-j} (T*)^{n-j} (1-|T|^2)^j

    which avoids the severe cancellation of the power-times-Jacobi route.
    """
    if k < 0 or n < 0:
        raise ValueError("photon counts must be non-negative")
    T = complex(bs.T)
    if T == 0 and n < k:
        raise ValueError("element has a pole at T = 0 for n < k")
    if T.imag == 0.0:
        t = T.real
        u = 1.0 - t * t
        total = 0.0
        for j in range(min(k, n) + 1):
            total += (-1) ** j * math.comb(k, j) * math.comb(n, j) * t ** (k + n - 2 * j) * u**j
        return total
    tc = T.conjugate()
    u = 1.0 - abs(T) ** 2
    total = 0.0 + 0.0j
    for j in range(min(k, n) + 1):
        total += (-1) ** j * math.comb(k, j) * math.comb(n, j) * T ** (k - j) * tc ** (n - j) * u**j
    return total


def bs_diagonal_element_exact(k: int, n: int, T) -> Fraction:
    """Exact-rational version of bs_diagonal_element for real T."""
    t = Fraction(T)
    u = 1 - t * t
    total = Fraction(0)
    for j in range(min(k, n) + 1):
        total += (-1) ** j * math.comb(k, j) * math.comb(n, j) * t ** (k + n - 2 * j) * u**j
    return total


@dataclass(frozen=True)
class CoefficientMatrix:
    """a = a1 + a2 with the split parts stored separately (a1 is constant in k)."""

    nodes: NodeSet
    bs: BeamSplitter
    a1: np.ndarray
    a2: np.ndarray

    @property
    def N(self) -> int:
        return len(self.nodes)

    @property
    def matrix(self) -> np.ndarray:
        return self.a1 + self.a2


def build_coefficient_matrix(nodes: NodeSet, bs: BeamSplitter) -> CoefficientMatrix:
    """Assemble a1[kk, l] = <N, n_l|U|N, n_l> and a2[kk, l] = <kk, n_l|U|kk, n_l>
    for stored row index kk = 0..N-1 (photon level k-1 of the 1-based row k)."""
    if complex(bs.T) == 0:
        raise ValueError("T = 0 is excluded (poles in the matrix elements)")
    N = len(nodes)
    real = bs.is_real
    dtype = np.float64 if real else np.complex128
    a1 = np.empty((N, N), dtype=dtype)
    a2 = np.empty((N, N), dtype=dtype)
    for l, n in enumerate(nodes):
        top = bs_diagonal_element(N, n, bs)
        a1[:, l] = top.real if real else top
        for kk in range(N):
            el = bs_diagonal_element(kk, n, bs)
            a2[kk, l] = el.real if real else el
    return CoefficientMatrix(nodes=nodes, bs=bs, a1=a1, a2=a2)


def coefficient_matrix_exact(nodes: NodeSet, T):
    """Exact-rational (a1, a2) row lists for real rational T; oracle path."""
    N = len(nodes)
    a1 = [[bs_diagonal_element_exact(N, n, T) for n in nodes] for _ in range(N)]
    a2 = [[bs_diagonal_element_exact(kk, n, T) for n in nodes] for kk in range(N)]
    return a1, a2


def det_closed_form(N: int, T: float) -> float:
    """det(a) = (T^2-1)^{N(N-1)/2} [2 - (1-T)^N] for minimal nodes {0..N-1}."""
    return (T * T - 1.0) ** (N * (N - 1) // 2) * (2.0 - (1.0 - T) ** N)


def optimal_transmission(N: int) -> float:
    """The analytic root T = 1 - 2^{1/N} of the minimal-node determinant."""
    return 1.0 - 2.0 ** (1.0 / N)


@dataclass(frozen=True)
class SearchConfig:
    """Root-search parameters for find_transmission."""

    grid_points: int = 2000
    t_exclude: float = 1e-6  # half-width of the excluded band around T = 0
    bisect_tol: float = 1e-13
    det_tol: float = 1e-10  # |det| <= det_tol * |T^2-1|^{N(N-1)/2}
    dedupe_tol: float = 1e-9
    complex_search: bool = False
    complex_grid_points: int = 61
    newton_iters: int = 50


def _element_tables(nodes: NodeSet):
    """Per-entry (coef, power-of-T, power-of-(1-T^2)) tables for vectorized builds."""
    N = len(nodes)
    tables = []
    for kk in range(N):
        row = []
        for n in nodes:
            terms = [
                ((-1) ** j * math.comb(kk, j) * math.comb(n, j), kk + n - 2 * j, j)
                for j in range(min(kk, n) + 1)
            ]
            row.append(terms)
        tables.append(row)
    top = []
    for n in nodes:
        top.append(
            [
                ((-1) ** j * math.comb(N, j) * math.comb(n, j), N + n - 2 * j, j)
                for j in range(min(N, n) + 1)
            ]
        )
    return tables, top


def _grid_determinants(nodes: NodeSet, ts: np.ndarray) -> np.ndarray:
    """det(a(T)) for a whole grid of real T at once."""
    N = len(nodes)
    tables, top = _element_tables(nodes)
    us = 1.0 - ts * ts
    a = np.zeros((len(ts), N, N))
    for l in range(N):
        col1 = np.zeros_like(ts)
        for coef, e, j in top[l]:
            col1 += coef * ts**e * us**j
        for kk in range(N):
            acc = np.zeros_like(ts)
            for coef, e, j in tables[kk][l]:
                acc += coef * ts**e * us**j
            a[:, kk, l] = acc + col1
    return np.linalg.det(a)


def _det_at(nodes: NodeSet, T: float) -> float:
    m = build_coefficient_matrix(nodes, BeamSplitter(T))
    return float(dense_det(m.matrix))


def _bisect_root(nodes: NodeSet, lo: float, hi: float, flo: float, fhi: float, tol: float) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = _det_at(nodes, mid)
        if fmid == 0.0:
            return mid
        if (flo < 0) != (fmid < 0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _residual_scale(N: int, T: complex) -> float:
    return abs(T * T - 1.0) ** (N * (N - 1) / 2.0) if N > 1 else 1.0


def find_transmission(nodes: NodeSet, search: Optional[SearchConfig] = None) -> list:
    """Real roots of det(a(T)) on (-1, 0) u (0, 1), plus the endpoints T = +-1.

    Grid scan for sign changes, bisection refinement, then a residual gate
    |det| <= det_tol * |T^2-1|^{N(N-1)/2}.  With search.complex_search the
    list also carries complex roots from a 2D grid + Newton polish.
    """
    cfg = search or SearchConfig()
    N = len(nodes)
    half = cfg.grid_points // 2
    left = np.linspace(-1.0 + 1e-9, -cfg.t_exclude, half)
    right = np.linspace(cfg.t_exclude, 1.0 - 1e-9, cfg.grid_points - half)
    roots: list = []
    for ts in (left, right):
        dets = _grid_determinants(nodes, ts)
        for i in range(len(ts) - 1):
            f0, f1 = dets[i], dets[i + 1]
            if f0 == 0.0:
                if 1.0 - abs(ts[i]) > 1e-6:  # exact zeros hugging |T|=1 are underflow; the
                    roots.append(float(ts[i]))  # endpoints are handled separately below
            elif (f0 < 0) != (f1 < 0):
                roots.append(_bisect_root(nodes, float(ts[i]), float(ts[i + 1]), f0, f1, cfg.bisect_tol))
        if dets[-1] == 0.0 and 1.0 - abs(ts[-1]) > 1e-6:
            roots.append(float(ts[-1]))
    # endpoint candidates: |T| = 1 makes every off-balance term vanish
    for t_end in (-1.0, 1.0):
        if abs(_det_at(nodes, t_end)) <= cfg.det_tol * _residual_scale(N, t_end):
            roots.append(t_end)
    good = []
    for t in sorted(roots):
        if abs(_det_at(nodes, t)) > cfg.det_tol * max(_residual_scale(N, t), 1e-300):
            continue
        if good and abs(t - good[-1]) <= cfg.dedupe_tol:
            continue
        good.append(t)
    if cfg.complex_search:
        good.extend(_complex_roots(nodes, cfg, good))
    return good


def _complex_roots(nodes: NodeSet, cfg: SearchConfig, real_roots: Sequence[float]) -> list:
    """Flag-gated 2D search; the matrix depends on both T and T*, so the
    refinement is a real 2-variable Newton on (Re det, Im det)."""
    N = len(nodes)

    def det_c(T: complex) -> complex:
        m = build_coefficient_matrix(nodes, BeamSplitter(T))
        return complex(dense_det(m.matrix))

    g = cfg.complex_grid_points
    res, ims = np.linspace(-0.98, 0.98, g), np.linspace(-0.98, 0.98, g)
    found = []
    vals = np.empty((g, g))
    for i, re in enumerate(res):
        for j, im in enumerate(ims):
            T = complex(re, im)
            vals[i, j] = abs(det_c(T)) if 1e-3 < abs(T) < 0.999 else np.inf
    # local minima as Newton seeds
    for i in range(1, g - 1):
        for j in range(1, g - 1):
            v = vals[i, j]
            if not np.isfinite(v) or v > vals[i - 1 : i + 2, j - 1 : j + 2].min():
                continue
            T = complex(res[i], ims[j])
            h = 1e-7
            for _ in range(cfg.newton_iters):
                f = det_c(T)
                fx = (det_c(T + h) - det_c(T - h)) / (2 * h)
                fy = (det_c(T + 1j * h) - det_c(T - 1j * h)) / (2 * h)
                jac = np.array([[fx.real, fy.real], [fx.imag, fy.imag]])
                try:
                    step = np.linalg.solve(jac, [f.real, f.imag])
                except np.linalg.LinAlgError:
                    break
                T = complex(T.real - step[0], T.imag - step[1])
                if abs(complex(step[0], step[1])) < 1e-14:
                    break
            if abs(T) >= 1.0 or abs(T.imag) < 1e-8:
                continue
            if abs(det_c(T)) > cfg.det_tol * max(_residual_scale(N, T), 1e-300):
                continue
            if any(abs(T - w) <= 1e-6 for w in found):
                continue
            found.append(T)
    return found


def cofactors(matrix, row: int, method: str = "adjugate"):
    """Cofactor row A_{row, l} (row is 0-based, 0..N-1).

    method "adjugate": SVD-based adjugate, robust when det(a) ~ 0;
    method "minors":   signed minors via dense_det;
    method "exact":    signed minors in rational arithmetic (real entries).
    """
    a = matrix.matrix if isinstance(matrix, CoefficientMatrix) else np.asarray(matrix)
    N = a.shape[0]
    if a.shape != (N, N):
        raise ValueError("matrix must be square")
    if not 0 <= row < N:
        raise ValueError("row out of range")
    if N == 1:
        return np.array([1.0])
    if method == "exact":
        rows = [[Fraction(v) for v in r] for r in np.asarray(a, dtype=float)]
        out = []
        for l in range(N):
            minor = [[rows[i][j] for j in range(N) if j != l] for i in range(N) if i != row]
            out.append((-1) ** (row + l) * float(exact_det(minor)))
        return np.array(out)
    if method == "minors" or np.iscomplexobj(a):
        out = []
        for l in range(N):
            keep_r = [i for i in range(N) if i != row]
            keep_c = [j for j in range(N) if j != l]
            out.append((-1) ** (row + l) * dense_det(a[np.ix_(keep_r, keep_c)]))
        return np.array(out)
    if method != "adjugate":
        raise ValueError(f"unknown method {method!r}")
    u, s, vt = np.linalg.svd(a)
    sgn = np.sign(np.linalg.det(u)) * np.sign(np.linalg.det(vt))
    pi = np.array([np.prod(np.delete(s, i)) for i in range(len(s))])
    cof = sgn * (u * pi) @ vt  # cofactor matrix = adj(a)^T
    return cof[row]


def cofactor_closed_form(N: int, l: int, T: float) -> float:
    """Last-row cofactor A_{N-1,l} (0-based) for minimal nodes.

    General-T form; the second term carries the factor [2-(1-T)^N] and is
    dropped once that bracket is below 1e-8 (at the optimal T the cancellation
    is exact and the remaining term is the whole answer).
    """
    if not 0 <= l <= N - 1:
        raise ValueError("l out of range")
    if T == 0.0 or (T == -1.0 and N > 1):
        raise ValueError("closed form has poles at T = 0 and T = -1")
    # sum_p C(p,l) (T/(T+1))^p, p=0 term split off; for N=1 only that term
    # survives, which keeps the T = -1 limit finite (A = -T = 1, matching the
    # 1x1 cofactor convention)
    ssum = 1.0 if l == 0 else 0.0
    if N > 1:
        w = T / (T + 1.0)
        ssum += sum(math.comb(p, l) * w**p for p in range(max(l, 1), N))
    term1 = N * (T * T - 1.0) ** (N * (N - 1) // 2) * (-1.0) ** (1 - l) * T ** (1 - l) * ssum
    bracket = 2.0 - (1.0 - T) ** N
    if abs(bracket) < 1e-8:
        return term1
    term2 = (
        (-1.0) ** (N - l + 1)
        * (T * T - 1.0) ** ((N - 2) * (N - 1) // 2)
        * bracket
        * math.comb(N - 1, l)
        * T ** (N - l - 1)
    )
    return term1 + term2


@dataclass(frozen=True)
class GateSolution:
    """Fully solved gate: weights, probability and diagnostics."""

    N: int
    T: complex
    nodes: NodeSet
    alphas: tuple
    gammas: tuple
    p: float
    cofactors: tuple
    det_residual: float
    row_used: int

    def ancilla(self) -> AncillaSpec:
        return AncillaSpec(nodes=self.nodes, gammas=self.gammas)


def success_probability(matrix: CoefficientMatrix, row: Optional[int] = None) -> GateSolution:
    """Maximal post-selection probability and the weights achieving it.

    At a true root of det(a) every cofactor row is proportional to the right
    null vector of a, so the weights are taken from that null vector (smallest
    singular direction); this keeps the row dependence at roundoff level even
    for N around 10, where the individually computed cofactor rows pick up the
    amplified sensitivity of the near-singular matrix.  `row` selects which
    a2 row enters the numerator; default is the last (0-based N-1).
    """
    a = matrix.matrix
    N = matrix.N
    k = N - 1 if row is None else row
    if not 0 <= k < N:
        raise ValueError("row out of range")
    u, s, vt = np.linalg.svd(a)
    if N >= 2 and s[0] > 0 and s[-2] <= 1e-12 * s[0]:
        raise DegenerateSystemError("null space dimension exceeds 1")
    v = vt[-1].conj()  # right null vector: a @ v ~ 0
    cof = cofactors(matrix, k)
    if float(np.max(np.abs(cof))) == 0.0:
        raise DegenerateSystemError("all cofactors vanish")
    # align the null vector's global phase with the cofactor row
    dot = np.vdot(cof, v)
    if abs(dot) > 0:
        if np.iscomplexobj(a):
            v = v * (dot / abs(dot)).conjugate()
        elif dot.real < 0:
            v = -v
    total = float(np.sum(np.abs(v)))
    num = np.sum(v * matrix.a2[k])
    p = float(abs(num) ** 2 / total**2)
    p = min(max(p, 0.0), 1.0)
    mags = np.sqrt(np.abs(v) / total)
    if np.iscomplexobj(a):
        phases = np.where(np.abs(v) > 0, v / np.where(np.abs(v) > 0, np.abs(v), 1.0), 1.0)
        alphas = tuple(phases * mags)
    else:
        alphas = tuple(np.sign(v) * mags)
    gammas = tuple(float(m) for m in mags)
    residual = abs(dense_det(a))
    return GateSolution(
        N=N,
        T=complex(matrix.bs.T),
        nodes=matrix.nodes,
        alphas=alphas,
        gammas=gammas,
        p=p,
        cofactors=tuple(cof),
        det_residual=float(residual),
        row_used=k,
    )


def numerator_closed_form(N: int, T: float) -> float:
    """sum_l a2[N-1, l] A_{N-1,l} = N T (T^2-1)^{N(N-1)/2} at the optimal T
    (magnitude; the overall sign depends on the row-index convention)."""
    return N * T * (T * T - 1.0) ** (N * (N - 1) // 2)


def denominator_closed_form(N: int, T: float) -> float:
    """(sum_l |A_{N-1,l}|)^2 = N^4 T^2 (T^2-1)^{N(N-1)} at the optimal T."""
    return N**4 * T * T * (T * T - 1.0) ** (N * (N - 1))
