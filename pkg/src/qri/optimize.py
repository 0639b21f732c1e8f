"""Maximize Q over the second observable B for a fixed state and A.

Qubit path: exhaustive grid over the Bloch angles (beta, gamma) of B's
first basis vector, then Nelder-Mead refinement from the best three cells.
General path: Haar-random bases followed by a shrinking random local search.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .incompat import EQUAL_TOL, ZERO_PROB, log_base, marginal_first, quantumness_batch
from .linalg import gram_schmidt, haar_unitary
from .states import DensityMatrix, ObservableBasis, qubit_basis

TWO_PI = 2.0 * math.pi

# Nelder-Mead coefficients
REFLECT, EXPAND, CONTRACT, SHRINK = 1.0, 2.0, 0.5, 0.5


@dataclass(frozen=True)
class BasisParams:
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.beta <= math.pi:
            raise ValidationError(f"beta={self.beta} outside [0, pi]")
        if not 0.0 <= self.gamma < TWO_PI:
            raise ValidationError(f"gamma={self.gamma} outside [0, 2pi)")

    def basis(self) -> ObservableBasis:
        return qubit_basis(self.beta, self.gamma)


@dataclass(frozen=True, eq=False)
class MaxQResult:
    q_max: float
    argmax: BasisParams | None
    grid_resolution: int
    refine_iterations: int
    trace: list = field(default_factory=list)
    basis: ObservableBasis | None = None
    method: str = "grid+simplex"


def canonical_params(beta: float, gamma: float) -> tuple[float, float]:
    """Fold (beta, gamma) into [0, pi] x [0, 2pi) without changing B.

    beta -> 2pi - beta together with gamma -> gamma + pi maps the basis onto
    itself up to phases and ordering, and beta has period 2pi.
    """
    beta = math.fmod(beta, TWO_PI)
    if beta < 0.0:
        beta += TWO_PI
    if beta > math.pi:
        beta = TWO_PI - beta
        gamma += math.pi
    gamma = math.fmod(gamma, TWO_PI)
    if gamma < 0.0:
        gamma += TWO_PI
    if gamma >= TWO_PI:
        gamma = 0.0
    return beta, gamma


def _qubit_objective(rho: DensityMatrix, a: ObservableBasis, base):
    """Scalar Q(beta, gamma) for a fixed qubit state and A, in plain floats."""
    p = [float(x) for x in marginal_first(rho, a)]
    r00 = float(rho.mat[0, 0].real)
    r11 = float(rho.mat[1, 1].real)
    r01 = complex(rho.mat[0, 1])
    a0c = complex(a.matrix[0, 0]).conjugate()
    a1c = complex(a.matrix[1, 0]).conjugate()
    scale = 1.0 / log_base(base)
    log = math.log

    def q(beta: float, gamma: float) -> float:
        c = math.cos(0.5 * beta)
        s = math.sin(0.5 * beta)
        e = cmath.exp(1j * gamma)
        w0 = c * c * r00 + s * s * r11 + 2.0 * c * s * (e * r01).real
        t = abs(a0c * c + a1c * e * s) ** 2
        q0 = w0 * t + (1.0 - w0) * (1.0 - t)
        if abs(q0 - p[0]) <= EQUAL_TOL:
            return 0.0
        total = 0.0
        for pi, qi in ((p[0], q0), (p[1], 1.0 - q0)):
            if pi > 0.0:
                # qi cannot vanish where pi > 0 for a valid state
                total += pi * log(pi / max(qi, ZERO_PROB))
        return max(total * scale, 0.0)

    return q


def _qubit_basis_stack(beta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    c = np.cos(beta / 2)
    s = np.sin(beta / 2)
    e = np.exp(1j * gamma)
    u = np.empty(beta.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 0] = e * s
    u[..., 0, 1] = -s / e
    u[..., 1, 1] = c
    return u


def _nelder_mead_max(f, x0: tuple[float, float], step: tuple[float, float], iters: int):
    """Maximize f over the plane; returns (best_x, best_f, path, n_iter)."""
    pts = [x0, (x0[0] + step[0], x0[1]), (x0[0], x0[1] + step[1])]
    vals = [f(*p) for p in pts]
    path = []
    n = 0
    for n in range(1, iters + 1):
        order = sorted(range(3), key=lambda k: -vals[k])
        pts = [pts[k] for k in order]
        vals = [vals[k] for k in order]
        path.append((pts[0], vals[0]))
        spread = vals[0] - vals[2]
        size = max(abs(pts[1][0] - pts[0][0]) + abs(pts[1][1] - pts[0][1]),
                   abs(pts[2][0] - pts[0][0]) + abs(pts[2][1] - pts[0][1]))
        if spread <= 1e-15 and size <= 1e-10:
            break
        cx = 0.5 * (pts[0][0] + pts[1][0])
        cy = 0.5 * (pts[0][1] + pts[1][1])
        wx, wy = pts[2]
        xr = (cx + REFLECT * (cx - wx), cy + REFLECT * (cy - wy))
        fr = f(*xr)
        if fr > vals[0]:
            xe = (cx + EXPAND * (xr[0] - cx), cy + EXPAND * (xr[1] - cy))
            fe = f(*xe)
            pts[2], vals[2] = (xe, fe) if fe > fr else (xr, fr)
            continue
        if fr > vals[1]:
            pts[2], vals[2] = xr, fr
            continue
        if fr > vals[2]:
            xc = (cx + CONTRACT * (xr[0] - cx), cy + CONTRACT * (xr[1] - cy))
        else:
            xc = (cx + CONTRACT * (wx - cx), cy + CONTRACT * (wy - cy))
        fc = f(*xc)
        if fc > max(fr, vals[2]):
            pts[2], vals[2] = xc, fc
            continue
        bx, by = pts[0]
        for k in (1, 2):
            pts[k] = (bx + SHRINK * (pts[k][0] - bx), by + SHRINK * (pts[k][1] - by))
            vals[k] = f(*pts[k])
    k = max(range(3), key=lambda j: vals[j])
    return pts[k], vals[k], path, n


def max_q_over_b(rho: DensityMatrix, a: ObservableBasis, grid_n: int = 64, refine_iters: int = 200,
                 base=2, seed: int = 0) -> MaxQResult:
    """Qubit maximization of Q over B by grid search plus simplex refinement.

    beta takes ``grid_n`` values on [0, pi], gamma ``grid_n`` values on
    [0, 2pi). The search is deterministic, so ``seed`` only exists for
    interface symmetry with :func:`max_q_over_b_general`.
    """
    if rho.dim != 2 or a.dim != 2:
        raise DimensionMismatch("max_q_over_b handles qubits; use max_q_over_b_general")
    if grid_n < 8:
        raise ValidationError("grid_n must be >= 8")
    if refine_iters < 0:
        raise ValidationError("refine_iters must be >= 0")

    betas = np.linspace(0.0, math.pi, grid_n)
    gammas = np.arange(grid_n) * (TWO_PI / grid_n)
    bb, gg = np.meshgrid(betas, gammas, indexing="ij")
    grid_q = quantumness_batch(rho.mat, a.matrix, _qubit_basis_stack(bb, gg), base).ravel()
    flat_b, flat_g = bb.ravel(), gg.ravel()
    # best value first; ties by smaller beta, then smaller gamma
    order = np.lexsort((flat_g, flat_b, -grid_q))
    top = order[:3]

    best_val = float(grid_q[order[0]])
    best_x = (float(flat_b[order[0]]), float(flat_g[order[0]]))
    best_path: list = []
    if refine_iters > 0:
        f_raw = _qubit_objective(rho, a, base)

        def f(beta, gamma):
            return f_raw(*canonical_params(beta, gamma))

        step = (betas[1] - betas[0], gammas[1] - gammas[0])
        for k in top:
            x0 = (float(flat_b[k]), float(flat_g[k]))
            x, val, path, _ = _nelder_mead_max(f, x0, step, refine_iters)
            if val > best_val:
                best_val, best_x, best_path = val, x, path

    beta, gamma = canonical_params(*best_x)
    trace = [(canonical_params(*x), v) for x, v in best_path]
    params = BasisParams(beta, gamma)
    return MaxQResult(
        q_max=max(best_val, 0.0),
        argmax=params,
        grid_resolution=grid_n,
        refine_iterations=refine_iters,
        trace=trace,
        basis=params.basis(),
    )


def max_q_over_b_general(rho: DensityMatrix, a: ObservableBasis, samples: int = 256, refine_iters: int = 2000,
                         base=2, seed: int = 0, step: float = 0.3, decay: float = 0.7,
                         patience: int = 20) -> MaxQResult:
    """Random-search maximization of Q over B for any dimension.

    Draws ``samples`` Haar bases, keeps the best, then proposes
    orthonormalized perturbations U + step * G. Rejections multiply the step
    by ``decay``; ``patience`` consecutive rejections end the search.
    """
    d = rho.dim
    if a.dim != d:
        raise DimensionMismatch(f"state dimension {d}, basis dimension {a.dim}")
    if samples < 32:
        raise ValidationError("samples must be >= 32")
    if refine_iters < 0:
        raise ValidationError("refine_iters must be >= 0")
    rng = np.random.default_rng(seed)

    cands = np.stack([haar_unitary(d, rng) for _ in range(samples)])
    vals = quantumness_batch(rho.mat, a.matrix, cands, base)
    k = int(np.argmax(vals))
    best_u, best_val = cands[k], float(vals[k])
    trace = [(None, best_val)]

    misses = 0
    for _ in range(refine_iters):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        prop = np.column_stack(gram_schmidt((best_u + step * g / math.sqrt(2 * d)).T))
        val = float(quantumness_batch(rho.mat, a.matrix, prop, base))
        if val > best_val:
            best_u, best_val = prop, val
            trace.append((None, val))
            misses = 0
        else:
            step *= decay
            misses += 1
            if misses >= patience:
                break

    return MaxQResult(
        q_max=max(best_val, 0.0),
        argmax=None,
        grid_resolution=samples,
        refine_iterations=refine_iters,
        trace=trace,
        basis=ObservableBasis(best_u, "optimized"),
        method="haar+local",
    )
