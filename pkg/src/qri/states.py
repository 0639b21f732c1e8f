"""Validated density matrices, measurement bases and their constructors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .linalg import as_cmat, as_cvec, dagger, hermitian_eig, tensor

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
WEIGHT_TOL = 1e-12


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A d x d Hermitian, positive semidefinite, unit-trace matrix.

    Construction validates all three invariants; the stored array is
    read-only.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.mat)
        if m.shape[0] < 1:
            raise ValidationError("empty matrix")
        if np.max(np.abs(m - dagger(m))) > HERMITIAN_TOL:
            raise ValidationError("not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace != 1 (trace = {np.trace(m).real:.12g})")
        w, _ = hermitian_eig(m)
        if w[-1] < -PSD_TOL:
            raise ValidationError(f"not positive semidefinite (min eigenvalue {w[-1]:.3g})")
        object.__setattr__(self, "mat", _freeze(0.5 * (m + dagger(m))))

    @classmethod
    def _trusted(cls, m: np.ndarray) -> "DensityMatrix":
        # for products/mixtures of already-valid states: PSD is inherited
        obj = object.__new__(cls)
        object.__setattr__(obj, "mat", _freeze(m))
        return obj

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def eigenvalues(self) -> np.ndarray:
        """Spectrum in descending order, tiny negatives clamped to zero."""
        w, _ = hermitian_eig(self.mat)
        return np.clip(w, 0.0, None)

    def is_pure(self, tol: float = 1e-8) -> bool:
        return self.purity() >= 1.0 - tol


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """Ordered orthonormal basis of a projective measurement.

    ``matrix`` holds the basis vectors as columns; outcome ``i`` is the
    projector onto column ``i``. Eigenvalues of the observable are not
    stored since nothing here depends on them.
    """

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        u = as_cmat(self.matrix)
        d = u.shape[0]
        gram = dagger(u) @ u
        if np.max(np.abs(gram - np.eye(d))) > ORTHONORMAL_TOL:
            raise ValidationError("basis vectors are not orthonormal")
        if np.max(np.abs(u @ dagger(u) - np.eye(d))) > COMPLETENESS_TOL:
            raise ValidationError("basis projectors do not sum to the identity")
        object.__setattr__(self, "matrix", _freeze(u))

    @classmethod
    def from_vectors(cls, vecs, label: str = "") -> "ObservableBasis":
        cols = [as_cvec(v) for v in vecs]
        if len({c.shape[0] for c in cols}) != 1 or len(cols) != cols[0].shape[0]:
            raise ValidationError("need exactly d vectors of dimension d")
        return cls(np.column_stack(cols), label)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vecs(self) -> list[np.ndarray]:
        return [self.matrix[:, i] for i in range(self.dim)]

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(v, np.conj(v)) for v in self.vecs]


@dataclass(frozen=True)
class MixtureSpec:
    weights: tuple[float, ...]
    components: tuple[DensityMatrix, ...] = field(default=())

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        comps = tuple(self.components)
        if len(w) != len(comps) or not comps:
            raise ValidationError("need one weight per component")
        if any(x < 0 for x in w):
            raise ValidationError("negative mixture weight")
        if abs(math.fsum(w) - 1.0) > WEIGHT_TOL:
            raise ValidationError("mixture weights do not sum to 1")
        if len({c.dim for c in comps}) != 1:
            raise DimensionMismatch("mixture components have different dimensions")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    # global phase: first non-negligible amplitude real and positive
    for x in v:
        if abs(x) > 1e-14:
            return v * (abs(x) / x)
    return v


def pure_state(amplitudes) -> DensityMatrix:
    """|psi><psi| for the normalized ``amplitudes``."""
    psi = as_cvec(amplitudes)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValidationError("zero vector is not a state")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, np.conj(psi)))


def bloch_pure(theta: float, phi: float) -> DensityMatrix:
    return pure_state([math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)])


def maximally_mixed(d: int) -> DensityMatrix:
    if d < 2:
        raise ValidationError("maximally_mixed: d must be >= 2")
    return DensityMatrix(np.eye(d) / d)


def depolarized(psi: DensityMatrix, p: float) -> DensityMatrix:
    """p * psi + (1 - p) * I/d."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"mixing parameter p={p} outside [0, 1]")
    d = psi.dim
    return DensityMatrix(p * psi.mat + (1.0 - p) * np.eye(d) / d)


def mix(spec: MixtureSpec) -> DensityMatrix:
    m = sum(w * c.mat for w, c in zip(spec.weights, spec.components))
    return DensityMatrix(np.asarray(m))


def product_state(rho1: DensityMatrix, rho2: DensityMatrix) -> DensityMatrix:
    return DensityMatrix._trusted(tensor(rho1.mat, rho2.mat))


def product_basis(a: ObservableBasis, b: ObservableBasis) -> ObservableBasis:
    """Basis {|a_i> (x) |b_j>} ordered with i major."""
    return ObservableBasis(tensor(a.matrix, b.matrix), f"{a.label}*{b.label}")


def qubit_basis(beta: float, gamma: float) -> ObservableBasis:
    """{(c, e^{i gamma} s), (-e^{-i gamma} s, c)} with c, s = cos, sin of beta/2."""
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    e = complex(math.cos(gamma), math.sin(gamma))
    b = _phase_fix(np.array([c, e * s]))
    b_perp = _phase_fix(np.array([-s / e, c]))
    return ObservableBasis(np.column_stack([b, b_perp]), f"qubit(beta={beta:.6g},gamma={gamma:.6g})")


def real_basis(a: float) -> ObservableBasis:
    """{(a, sqrt(1-a^2)), (sqrt(1-a^2), -a)} for real a in [0, 1]."""
    if not 0.0 <= a <= 1.0:
        raise ValidationError(f"basis parameter a={a} outside [0, 1]")
    r = math.sqrt(max(0.0, 1.0 - a * a))
    return ObservableBasis(np.array([[a, r], [r, -a]], dtype=complex), f"real(a={a:.6g})")


def fourier_basis(d: int) -> ObservableBasis:
    k = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)
    return ObservableBasis(f, "fourier")


def named_basis(name: str, d: int = 2) -> ObservableBasis:
    """Standard bases: computational, fourier (any d), pauli-x/y/z (d=2)."""
    key = name.lower()
    if d < 2:
        raise ValidationError("basis dimension must be >= 2")
    if key in ("computational", "pauli-z", "z"):
        if key != "computational" and d != 2:
            raise DimensionMismatch(f"{name} is a qubit basis, requested d={d}")
        return ObservableBasis(np.eye(d, dtype=complex), "computational")
    if key in ("fourier", "dft"):
        return fourier_basis(d)
    if key in ("pauli-x", "pauli-y", "x", "y"):
        if d != 2:
            raise DimensionMismatch(f"{name} is a qubit basis, requested d={d}")
        h = 1 / math.sqrt(2)
        if key in ("pauli-x", "x"):
            return ObservableBasis(np.array([[h, h], [h, -h]], dtype=complex), "pauli-x")
        return ObservableBasis(np.array([[h, h], [1j * h, -1j * h]]), "pauli-y")
    raise ValidationError(f"unknown basis name {name!r}")


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """G G^dag / tr(G G^dag) for a d x rank complex Gaussian G."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ dagger(g)
    return DensityMatrix._trusted(m / np.trace(m).real)


def random_pure_state(d: int, rng: np.random.Generator) -> DensityMatrix:
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return DensityMatrix._trusted(np.outer(psi, np.conj(psi)))


def _parse_complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise ValidationError(f"expected a number or [re, im] pair, got {x!r}")


def _num(spec: dict, key: str) -> float:
    if key not in spec:
        raise ValidationError(f"missing field {key!r}")
    val = spec[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ValidationError(f"field {key!r} must be a number")
    return float(val)


def state_from_json(spec) -> DensityMatrix:
    """Build a state from its JSON description (see README for the schema)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValidationError("state must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "pure":
        amps = spec.get("amps")
        if not isinstance(amps, list) or not amps:
            raise ValidationError("pure state needs a non-empty 'amps' list")
        return pure_state([_parse_complex(x) for x in amps])
    if kind == "mixed":
        rows = spec.get("matrix")
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise ValidationError("mixed state needs a 'matrix' list of rows")
        if any(len(r) != len(rows) for r in rows):
            raise ValidationError("density matrix must be square")
        return DensityMatrix(np.array([[_parse_complex(x) for x in r] for r in rows]))
    if kind == "bloch":
        return bloch_pure(_num(spec, "theta"), _num(spec, "phi"))
    if kind == "depolarized":
        psi = bloch_pure(_num(spec, "theta"), _num(spec, "phi"))
        return depolarized(psi, _num(spec, "p"))
    if kind == "maximally_mixed":
        return maximally_mixed(int(_num(spec, "d")))
    raise ValidationError(f"unknown state kind {kind!r}")


def observable_from_json(spec, dim: int = 2) -> ObservableBasis:
    """Build a basis from JSON; named bases without ``d`` get dimension ``dim``."""
    if isinstance(spec, str):
        return named_basis(spec, dim)
    if not isinstance(spec, dict):
        raise ValidationError("observable must be an object")
    if "name" in spec:
        d = int(_num(spec, "d")) if "d" in spec else dim
        return named_basis(str(spec["name"]), d)
    if "beta" in spec or "gamma" in spec:
        return qubit_basis(_num(spec, "beta"), _num(spec, "gamma"))
    if "a" in spec:
        return real_basis(_num(spec, "a"))
    if "vectors" in spec:
        vecs = spec["vectors"]
        if not isinstance(vecs, list) or not all(isinstance(v, list) for v in vecs):
            raise ValidationError("'vectors' must be a list of vectors")
        return ObservableBasis.from_vectors([[_parse_complex(x) for x in v] for v in vecs], "custom")
    raise ValidationError("observable needs one of 'name', 'beta'/'gamma', 'a', 'vectors'")
