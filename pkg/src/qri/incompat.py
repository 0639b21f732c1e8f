"""Sequential-measurement distributions and the quantumness measure.

For a state rho and two projective measurements A = {|x_i>} and
B = {|y_j>}:

* ``marginal_first``  p_i  = <x_i|rho|x_i>                      (A measured first)
* ``marginal_after``  p'_i = sum_j <y_j|rho|y_j> |<x_i|y_j>|^2   (A measured after B)
* ``quantumness``     Q    = D(p || p')

Q is always the divergence of the A-first marginal from the A-after-B
marginal, in that argument order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AbsoluteContinuityViolation, DimensionMismatch, ValidationError
from .linalg import dagger, hermitian_eig
from .states import DensityMatrix, ObservableBasis, product_basis, product_state

NEG_CLAMP = 1e-10
ZERO_PROB = 1e-15
SUPPORT_TOL = 1e-12
EQUAL_TOL = 1e-12
SUM_TOL = 1e-9
PURE_TOL = 1e-8


def log_base(base) -> float:
    """Natural log of the base tag: 2 (bits, the default) or 'e' (nats)."""
    if base in (2, 2.0, "2", "bits"):
        return math.log(2.0)
    if base in ("e", "E", "nats") or base == math.e:
        return 1.0
    raise ValidationError(f"unsupported log base {base!r} (use 2 or 'e')")


def base_tag(base) -> str:
    return "2" if log_base(base) != 1.0 else "e"


def clean_probs(p) -> np.ndarray:
    """Clamp round-off negatives and sub-1e-15 entries to zero and validate."""
    arr = np.array(p, dtype=float)
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise ValidationError("probability vector must be a finite 1-D array")
    if np.any(arr < -NEG_CLAMP):
        raise ValidationError("negative probability")
    arr[arr < ZERO_PROB] = 0.0
    if abs(arr.sum() - 1.0) > SUM_TOL:
        raise ValidationError(f"probabilities sum to {arr.sum():.12g}, not 1")
    return arr


def _check_dims(rho: DensityMatrix, *bases: ObservableBasis) -> None:
    for b in bases:
        if b.dim != rho.dim:
            raise DimensionMismatch(f"state has dimension {rho.dim}, basis {b.label or ''} has {b.dim}")


def overlaps(a: ObservableBasis, b: ObservableBasis) -> np.ndarray:
    """Matrix of |<a_i|b_j>|^2 (doubly stochastic)."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"bases of dimension {a.dim} and {b.dim}")
    return np.abs(dagger(a.matrix) @ b.matrix) ** 2


def marginal_first(rho: DensityMatrix, a: ObservableBasis) -> np.ndarray:
    _check_dims(rho, a)
    u = a.matrix
    return clean_probs(np.real(np.einsum("ki,kl,li->i", np.conj(u), rho.mat, u)))


def marginal_after(rho: DensityMatrix, a: ObservableBasis, b: ObservableBasis) -> np.ndarray:
    _check_dims(rho, a, b)
    return clean_probs(overlaps(a, b) @ marginal_first(rho, b))


@dataclass(frozen=True, eq=False)
class JointDist:
    """Outcome distribution of two sequential measurements.

    ``probs[i, j]`` is the probability of outcome i of the first measurement
    followed by outcome j of the second.
    """

    probs: np.ndarray
    first: str = "A"
    second: str = "B"

    @property
    def order(self) -> str:
        return f"{self.first}-then-{self.second}"

    def first_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def second_marginal(self) -> np.ndarray:
        return self.probs.sum(axis=0)


def joint_dist(rho: DensityMatrix, first: ObservableBasis, second: ObservableBasis,
               labels: tuple[str, str] = ("A", "B")) -> JointDist:
    """p_ij = Tr[P_j (P_i rho P_i) P_j] = <x_i|rho|x_i> |<y_j|x_i>|^2."""
    _check_dims(rho, first, second)
    probs = marginal_first(rho, first)[:, None] * overlaps(first, second)
    return JointDist(probs, *labels)


def kl_divergence(p, q, base=2) -> float:
    """D(p||q) = sum p_i log(p_i/q_i) with 0 log(0/q) = 0.

    Exactly 0 when p and q agree entrywise within 1e-12 (the divergence is
    then below 1e-20 and only round-off would remain). Raises
    AbsoluteContinuityViolation if q_i vanishes where p_i does not.
    """
    scale = log_base(base)
    p = clean_probs(p)
    q = clean_probs(q)
    if p.shape != q.shape:
        raise DimensionMismatch(f"distributions of length {p.size} and {q.size}")
    if np.max(np.abs(p - q)) <= EQUAL_TOL:
        return 0.0
    bad = (p > SUPPORT_TOL) & (q <= ZERO_PROB)
    if np.any(bad):
        raise AbsoluteContinuityViolation(f"q vanishes where p > 0 at outcomes {np.flatnonzero(bad).tolist()}")
    support = (p > 0) & (q > 0)
    terms = p[support] * np.log(p[support] / q[support])
    return max(0.0, math.fsum(terms) / scale)


def shannon_entropy(p, base=2) -> float:
    p = clean_probs(p)
    nz = p[p > 0]
    return max(0.0, -math.fsum(nz * np.log(nz)) / log_base(base))


def von_neumann_entropy(rho: DensityMatrix, base=2) -> float:
    w = np.clip(hermitian_eig(rho.mat)[0], 0.0, None)
    nz = w[w > 0]
    return max(0.0, -math.fsum(nz * np.log(nz)) / log_base(base))


def quantumness(rho: DensityMatrix, a: ObservableBasis, b: ObservableBasis, base=2) -> float:
    """Q_{A,B}(rho) = D(p^A || p'^A)."""
    return kl_divergence(marginal_first(rho, a), marginal_after(rho, a, b), base)


def quantumness_batch(rho, a, b, base=2) -> np.ndarray:
    """Vectorized Q over stacked inputs.

    ``rho`` has shape (..., d, d); ``a`` and ``b`` hold basis vectors as
    columns with shape (..., d, d). Leading axes broadcast. No validation
    beyond the absolute-continuity check; callers pass well-formed arrays.
    """
    rho = np.asarray(rho, dtype=complex)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    p = np.real(np.einsum("...ki,...kl,...li->...i", np.conj(a), rho, a))
    w = np.real(np.einsum("...ki,...kl,...li->...i", np.conj(b), rho, b))
    ov = np.abs(np.einsum("...ki,...kj->...ij", np.conj(a), b)) ** 2
    q = np.einsum("...ij,...j->...i", ov, w)
    p = np.where(p < ZERO_PROB, 0.0, p)
    q = np.where(q < ZERO_PROB, 0.0, q)
    if np.any((p > SUPPORT_TOL) & (q <= ZERO_PROB)):
        raise AbsoluteContinuityViolation("q vanishes where p > 0")
    support = (p > 0) & (q > 0)
    ratio = np.where(support, p / np.where(support, q, 1.0), 1.0)
    terms = np.where(support, p * np.log(ratio), 0.0)
    out = np.maximum(terms.sum(axis=-1) / log_base(base), 0.0)
    return np.where(np.max(np.abs(p - q), axis=-1) <= EQUAL_TOL, 0.0, out)


def coherence_rel_ent(rho: DensityMatrix, basis: ObservableBasis, base=2) -> float:
    """Relative entropy of coherence S(rho_diag) - S(rho) in ``basis``."""
    _check_dims(rho, basis)
    diag = marginal_first(rho, basis)
    return max(0.0, shannon_entropy(diag, base) - von_neumann_entropy(rho, base))


@dataclass(frozen=True, eq=False)
class QReport:
    q: float
    coherence_c: float
    d_term: float | None
    p_first: np.ndarray
    p_after: np.ndarray
    base: str = "2"

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "coherence_c": self.coherence_c,
            "d_term": self.d_term,
            "p_first": self.p_first.tolist(),
            "p_after": self.p_after.tolist(),
            "base": self.base,
        }


def cross_term(x, z, base=2) -> float:
    """D = -sum_i x_i log z_i (terms with x_i = 0 dropped)."""
    x = clean_probs(x)
    z = clean_probs(z)
    s = x > 0
    if np.any(s & (z <= ZERO_PROB)):
        raise AbsoluteContinuityViolation("z vanishes where x > 0")
    return -math.fsum(x[s] * np.log(z[s])) / log_base(base)


def report(rho: DensityMatrix, a: ObservableBasis, b: ObservableBasis, base=2) -> QReport:
    """Q, coherence in basis ``a`` and both marginals; D only for pure states."""
    p = marginal_first(rho, a)
    pp = marginal_after(rho, a, b)
    d_term = cross_term(p, pp, base) if rho.is_pure(PURE_TOL) else None
    return QReport(
        q=kl_divergence(p, pp, base),
        coherence_c=coherence_rel_ent(rho, a, base),
        d_term=d_term,
        p_first=p,
        p_after=pp,
        base=base_tag(base),
    )


def complementarity_report(psi: DensityMatrix, a: ObservableBasis, b: ObservableBasis, base=2) -> QReport:
    """Decompose Q for a pure state as Q = D - C, with C measured in basis ``a``."""
    if not psi.is_pure(PURE_TOL):
        raise ValidationError(f"state is not pure (purity {psi.purity():.12g})")
    return report(psi, a, b, base)


def quantumness_composite(rho1: DensityMatrix, rho2: DensityMatrix, a: ObservableBasis,
                          b: ObservableBasis, base=2) -> float:
    """Q of rho1 (x) rho2 under A (x) A and B (x) B, from products of marginals."""
    _check_dims(rho1, a, b)
    _check_dims(rho2, a, b)
    p = np.kron(marginal_first(rho1, a), marginal_first(rho2, a))
    pp = np.kron(marginal_after(rho1, a, b), marginal_after(rho2, a, b))
    return kl_divergence(p, pp, base)


def quantumness_composite_direct(rho1: DensityMatrix, rho2: DensityMatrix, a: ObservableBasis,
                                 b: ObservableBasis, base=2) -> float:
    """Same quantity evaluated on the full product state and product bases."""
    _check_dims(rho1, a, b)
    _check_dims(rho2, a, b)
    return quantumness(product_state(rho1, rho2), product_basis(a, a), product_basis(b, b), base)
