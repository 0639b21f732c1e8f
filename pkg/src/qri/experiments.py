"""Figure datasets and randomized checks of the measure's defining properties."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import AbsoluteContinuityViolation, ValidationError
from .incompat import (
    coherence_rel_ent,
    joint_dist,
    marginal_first,
    quantumness,
    quantumness_batch,
    quantumness_composite,
    base_tag,
    quantumness_composite_direct,
)
from .linalg import haar_unitary
from .optimize import max_q_over_b
from .states import (
    MixtureSpec,
    ObservableBasis,
    bloch_pure,
    depolarized,
    maximally_mixed,
    mix,
    named_basis,
    random_density_matrix,
    random_pure_state,
)

SIG_DIGITS = 12


def fmt(x: float) -> str:
    """Locale-independent 12-significant-digit rendering (no negative zero)."""
    return format(float(x) + 0.0, f".{SIG_DIGITS}g")


def round_sig(x: float) -> float:
    return float(fmt(x))


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int
    endpoint: bool = True

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps, endpoint=self.endpoint)


@dataclass(eq=False)
class SweepGrid:
    """Rectangular parameter grid; one row per grid point, last axis fastest."""

    axes: list[Axis]
    columns: list[str]
    values: np.ndarray  # shape (n_rows, len(columns))
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = math.prod(ax.steps for ax in self.axes)
        if self.values.shape != (n, len(self.columns)):
            raise ValidationError(f"grid has {self.values.shape} values, expected ({n}, {len(self.columns)})")

    def params(self) -> np.ndarray:
        mesh = np.meshgrid(*[ax.values() for ax in self.axes], indexing="ij")
        return np.column_stack([m.ravel() for m in mesh])

    def column(self, name: str) -> np.ndarray:
        if name in self.columns:
            return self.values[:, self.columns.index(name)]
        names = [ax.name for ax in self.axes]
        return self.params()[:, names.index(name)]

    def reshaped(self, name: str) -> np.ndarray:
        return self.column(name).reshape([ax.steps for ax in self.axes])

    def header(self) -> list[str]:
        return [ax.name for ax in self.axes] + list(self.columns)

    def meta_lines(self) -> list[tuple[str, str]]:
        lines = [(k, str(v)) for k, v in self.metadata.items()]
        for ax in self.axes:
            kind = "closed" if ax.endpoint else "half-open"
            lines.append((f"axis.{ax.name}", f"{fmt(ax.lo)},{fmt(ax.hi)},{ax.steps},{kind}"))
        return lines

    def to_csv(self) -> str:
        out = [f"# {k}: {v}" for k, v in self.meta_lines()]
        out.append(",".join(self.header()))
        for prow, vrow in zip(self.params(), self.values):
            out.append(",".join(fmt(x) for x in (*prow, *vrow)))
        return "\n".join(out) + "\n"

    def to_json(self) -> str:
        rows = [[round_sig(x) for x in (*p, *v)] for p, v in zip(self.params(), self.values)]
        doc = {
            "metadata": dict(self.meta_lines()),
            "columns": self.header(),
            "rows": rows,
        }
        return json.dumps(doc, sort_keys=True) + "\n"


def row_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint32)[0])


def _pmap(fn, items: list, workers: int | None):
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


def _meta(figure: str, base, seed: int | None = None, **extra) -> dict:
    meta = {"figure": figure, "base": base_tag(base), "version": __version__}
    if seed is not None:
        meta["seed"] = seed
    meta.update(extra)
    return meta


def fig1_sweep(steps: int = 181, base=2) -> SweepGrid:
    """Q and C along cos(t/2)|0> + sin(t/2)|1>, A computational, B sigma_y."""
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    axis = Axis("theta", 0.0, math.pi, steps)
    a = named_basis("computational")
    b = named_basis("pauli-y")
    vals = []
    for theta in axis.values():
        rho = bloch_pure(theta, 0.0)
        vals.append((quantumness(rho, a, b, base), coherence_rel_ent(rho, a, base)))
    return SweepGrid([axis], ["q", "c"], np.array(vals), _meta("fig1", base, steps=steps))


def _real_basis_stack(x: np.ndarray) -> np.ndarray:
    r = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    u = np.empty(x.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = x
    u[..., 1, 0] = r
    u[..., 0, 1] = r
    u[..., 1, 1] = -x
    return u


def _fig2_q(alpha: np.ndarray, a: np.ndarray, b: np.ndarray, base) -> np.ndarray:
    psi = np.stack([alpha, np.sqrt(np.clip(1.0 - alpha * alpha, 0.0, None))], axis=-1)
    rho = np.einsum("...i,...j->...ij", psi, psi).astype(complex)
    return quantumness_batch(rho, _real_basis_stack(a), _real_basis_stack(b), base)


def fig2_value(alpha: float, a: float, b: float, base=2) -> float:
    """Single point of the fig2 surface, through the same kernel as the sweep."""
    for name, v in (("alpha", alpha), ("a", a), ("b", b)):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"{name}={v} outside [0, 1]")
    return float(_fig2_q(np.array(alpha), np.array(a), np.array(b), base))


def fig2_sweep(steps: int = 41, base=2) -> SweepGrid:
    """Q on the cube of real state amplitude alpha and basis parameters a, b."""
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    axes = [Axis(n, 0.0, 1.0, steps) for n in ("alpha", "a", "b")]
    x = axes[0].values()
    q = _fig2_q(x[:, None, None], x[None, :, None], x[None, None, :], base)
    return SweepGrid(axes, ["q"], q.reshape(-1, 1), _meta("fig2", base, steps=steps))


def _maxq_row(args) -> tuple[float, float, float]:
    theta, phi, p, grid_n, refine_iters, base, seed = args
    psi = bloch_pure(theta, phi)
    rho = psi if p == 1.0 else depolarized(psi, p)
    res = max_q_over_b(rho, named_basis("computational"), grid_n, refine_iters, base, seed)
    return res.q_max, res.argmax.beta, res.argmax.gamma


def fig3_sweep(theta_steps: int = 61, phi_steps: int = 61, grid_n: int = 32, refine_iters: int = 200,
               seed: int = 0, workers: int | None = None, base=2) -> SweepGrid:
    """Max over B of Q for pure qubits on the (theta, phi) sphere, A computational."""
    if theta_steps < 2 or phi_steps < 2:
        raise ValidationError("steps must be >= 2")
    axes = [Axis("theta", 0.0, math.pi, theta_steps), Axis("phi", 0.0, 2 * math.pi, phi_steps)]
    pts = [(t, f) for t in axes[0].values() for f in axes[1].values()]
    jobs = [(t, f, 1.0, grid_n, refine_iters, base, row_seed(seed, i)) for i, (t, f) in enumerate(pts)]
    vals = np.array(_pmap(_maxq_row, jobs, workers))
    meta = _meta("fig3", base, seed, grid_n=grid_n, refine_iters=refine_iters)
    return SweepGrid(axes, ["q_max", "beta_opt", "gamma_opt"], vals, meta)


def fig4_sweep(theta_steps: int = 61, p_steps: int = 51, grid_n: int = 32, refine_iters: int = 200,
               seed: int = 0, workers: int | None = None, base=2) -> SweepGrid:
    """Max over B of Q for p|psi><psi| + (1-p) I/2 with phi = 0."""
    if theta_steps < 2 or p_steps < 2:
        raise ValidationError("steps must be >= 2")
    axes = [Axis("theta", 0.0, math.pi, theta_steps), Axis("p", 0.0, 1.0, p_steps)]
    pts = [(t, p) for t in axes[0].values() for p in axes[1].values()]
    jobs = [(t, 0.0, float(p), grid_n, refine_iters, base, row_seed(seed, i)) for i, (t, p) in enumerate(pts)]
    vals = np.array(_pmap(_maxq_row, jobs, workers))
    meta = _meta("fig4", base, seed, grid_n=grid_n, refine_iters=refine_iters)
    return SweepGrid(axes, ["q_max", "beta_opt", "gamma_opt"], vals, meta)


# --- axiom suites -----------------------------------------------------------

AXIOMS = ("Q1", "Q2", "Q3", "Q4", "COMP", "FINITE", "MARGINAL-NOTE")

DEFAULT_TOL = {
    "Q1": 1e-10,
    "Q2": 1e-10,
    "Q3": 1e-10,
    "Q4": 1e-9,
    "COMP": 1e-9,
    "FINITE": 0.0,
    "MARGINAL-NOTE": 1e-12,
}

DIMS = (2, 3, 4)


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    trials: int
    failures: int
    max_violation: float
    seed: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "trials": self.trials,
            "failures": self.failures,
            "max_violation": self.max_violation,
            "seed": self.seed,
            "tol": self.tol,
        }


def _random_basis(d: int, rng) -> ObservableBasis:
    return ObservableBasis(haar_unitary(d, rng), "haar")


def _trial_q1(rng, d):
    return quantumness(maximally_mixed(d), _random_basis(d, rng), _random_basis(d, rng))


def _trial_q2(rng, d):
    rho = random_density_matrix(d, rng)
    a = _random_basis(d, rng)
    perm = rng.permutation(d)
    phases = np.exp(2j * np.pi * rng.random(d))
    b = ObservableBasis(a.matrix[:, perm] * phases, "permuted")
    return quantumness(rho, a, b)


def _trial_q3(rng, d):
    k = int(rng.integers(2, 5))
    weights = rng.dirichlet(np.ones(k))
    weights = weights / math.fsum(weights)
    comps = [random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(k)]
    a, b = _random_basis(d, rng), _random_basis(d, rng)
    mixed = quantumness(mix(MixtureSpec(tuple(weights), tuple(comps))), a, b)
    average = math.fsum(w * quantumness(c, a, b) for w, c in zip(weights, comps))
    return mixed - average


def _trial_q4(rng, d):
    rho1 = random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
    rho2 = random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
    a, b = _random_basis(d, rng), _random_basis(d, rng)
    parts = quantumness(rho1, a, b) + quantumness(rho2, a, b)
    prod = quantumness_composite(rho1, rho2, a, b)
    direct = quantumness_composite_direct(rho1, rho2, a, b)
    return max(abs(prod - parts), abs(direct - parts))


def _trial_comp(rng, d):
    psi = random_pure_state(2, rng)
    a = named_basis("computational")
    b = named_basis("pauli-x" if rng.random() < 0.5 else "pauli-y")
    return abs(quantumness(psi, a, b) + coherence_rel_ent(psi, a) - 1.0)


def _trial_finite(rng, d):
    rho = random_density_matrix(d, rng, rank=int(rng.integers(1, d)))
    try:
        q = quantumness(rho, _random_basis(d, rng), _random_basis(d, rng))
    except AbsoluteContinuityViolation:
        return 1.0
    return 0.0 if math.isfinite(q) else 1.0


def _trial_marginal(rng, d):
    rho = random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
    a, b = _random_basis(d, rng), _random_basis(d, rng)
    rows = joint_dist(rho, a, b).first_marginal()
    return float(np.max(np.abs(rows - marginal_first(rho, a))))


_TRIALS = {
    "Q1": _trial_q1,
    "Q2": _trial_q2,
    "Q3": _trial_q3,
    "Q4": _trial_q4,
    "COMP": _trial_comp,
    "FINITE": _trial_finite,
    "MARGINAL-NOTE": _trial_marginal,
}


def normalize_axiom(axiom: str) -> str:
    key = axiom.strip().upper().replace("_", "-")
    if key == "MARGINAL":
        key = "MARGINAL-NOTE"
    if key not in _TRIALS:
        raise ValidationError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}")
    return key


def run_axiom_suite(axiom: str, trials: int = 1000, seed: int = 0, tol: float | None = None) -> AxiomReport:
    """Run ``trials`` randomized instances of one property check.

    Dimensions cycle through 2, 3, 4 (COMP is qubit-only). Trial ``i`` draws
    from its own stream seeded by ``(seed, i)``. A trial fails when its
    violation exceeds ``tol``; FINITE scores 1 for a raised or infinite Q.
    """
    key = normalize_axiom(axiom)
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    tol = DEFAULT_TOL[key] if tol is None else float(tol)
    fn = _TRIALS[key]
    failures = 0
    worst = 0.0
    for i in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        v = fn(rng, DIMS[i % len(DIMS)])
        worst = max(worst, v)
        if v > tol:
            failures += 1
    return AxiomReport(key, trials, failures, worst, seed, tol)
