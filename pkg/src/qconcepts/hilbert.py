"""Finite-dimensional complex Hilbert space primitives.

State vectors, projectors, spectral families, Born probabilities, collapse,
tensor products, and a two-sector (single + pair) composition used by the
interference models. Everything is dense numpy; the dimensions in play stay
well below the point where sparsity would pay off.

Two default tolerances are used throughout: a structural tolerance (1e-9)
for normalization, idempotence and completeness checks, and a tighter
algebraic tolerance (1e-12) for identities that hold to rounding error.
Both can be overridden per call or per object.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollapseImpossible, DimensionMismatch, ModelError

STRUCTURAL_TOL = 1e-9
ALGEBRAIC_TOL = 1e-12


def _as_complex_array(components) -> np.ndarray:
    arr = np.asarray(components, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ModelError("state components must form a nonempty 1-d array")
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """A vector in C^dim, normalized unless explicitly built otherwise."""

    components: np.ndarray
    normalized: bool = True
    tol: float = STRUCTURAL_TOL

    def __post_init__(self):
        arr = _as_complex_array(self.components)
        object.__setattr__(self, "components", arr)
        if self.normalized:
            nrm = np.linalg.norm(arr)
            if abs(nrm - 1.0) > self.tol:
                raise ModelError(
                    f"state vector not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}"
                )

    @property
    def dim(self) -> int:
        return self.components.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


class Projector:
    """Orthogonal projector, either dense Hermitian-idempotent or diagonal.

    Diagonal projectors are stored as a set of basis indices and promoted to
    a dense matrix only on demand.
    """

    def __init__(self, matrix=None, basis_indices=None, dim=None, tol=STRUCTURAL_TOL):
        if (matrix is None) == (basis_indices is None):
            raise ModelError("provide exactly one of matrix or basis_indices")
        self.tol = tol
        if matrix is not None:
            m = np.asarray(matrix, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ModelError("projector matrix must be square")
            if np.max(np.abs(m - m.conj().T)) > tol:
                raise ModelError("projector matrix is not Hermitian")
            if np.max(np.abs(m @ m - m)) > tol:
                raise ModelError("projector matrix is not idempotent")
            self._matrix = m
            self._indices = None
            self._dim = m.shape[0]
        else:
            if dim is None:
                raise ModelError("diagonal projector needs an explicit dim")
            idx = sorted(int(i) for i in basis_indices)
            if len(set(idx)) != len(idx):
                raise ModelError("basis indices must be distinct")
            if idx and (idx[0] < 0 or idx[-1] >= dim):
                raise ModelError(f"basis index out of range for dim {dim}")
            self._matrix = None
            self._indices = tuple(idx)
            self._dim = int(dim)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def is_diagonal(self) -> bool:
        return self._indices is not None

    @property
    def basis_indices(self):
        return self._indices

    @property
    def matrix(self) -> np.ndarray:
        """Dense representation (promotes a diagonal projector on demand)."""
        if self._matrix is None:
            m = np.zeros((self._dim, self._dim), dtype=complex)
            for i in self._indices:
                m[i, i] = 1.0
            self._matrix = m
        return self._matrix

    def apply(self, components: np.ndarray) -> np.ndarray:
        if components.shape[0] != self._dim:
            raise DimensionMismatch(
                f"projector dim {self._dim} vs state dim {components.shape[0]}"
            )
        if self._indices is not None:
            out = np.zeros_like(components)
            if self._indices:
                sel = np.array(self._indices)
                out[sel] = components[sel]
            return out
        return self.matrix @ components

    def complement(self) -> "Projector":
        if self._indices is not None:
            rest = [i for i in range(self._dim) if i not in set(self._indices)]
            return Projector(basis_indices=rest, dim=self._dim, tol=self.tol)
        return Projector(matrix=np.eye(self._dim) - self.matrix, tol=self.tol)


@dataclass(frozen=True)
class SpectralFamily:
    """A list of projectors intended to be orthogonal and complete."""

    projectors: tuple
    dim: int

    def __post_init__(self):
        for p in self.projectors:
            if p.dim != self.dim:
                raise DimensionMismatch("spectral family members disagree on dim")

    def __len__(self):
        return len(self.projectors)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    orthogonality_violations: tuple   # ((i, j, max_abs_entry), ...)
    completeness_defect: float


@dataclass(frozen=True)
class FockState:
    """Two-sector state: a single vector (dim d) plus a pair vector (dim d^2).

    n and m are the sector weights (n^2 + m^2 = 1); gamma and delta the
    sector phases, kept in radians.
    """

    sector1: StateVector
    sector2: StateVector
    n: float
    m: float
    gamma: float = 0.0
    delta: float = 0.0
    tol: float = STRUCTURAL_TOL

    def __post_init__(self):
        d = self.sector1.dim
        if self.sector2.dim != d * d:
            raise DimensionMismatch(
                f"sector 2 must have dim {d * d}, got {self.sector2.dim}"
            )
        if abs(self.n ** 2 + self.m ** 2 - 1.0) > self.tol:
            raise ModelError("sector weights must satisfy n^2 + m^2 = 1")


def inner_product(a, b) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    ca = a.components if isinstance(a, StateVector) else _as_complex_array(a)
    cb = b.components if isinstance(b, StateVector) else _as_complex_array(b)
    if ca.shape != cb.shape:
        raise DimensionMismatch(f"dims {ca.size} vs {cb.size}")
    return complex(np.vdot(ca, cb))


def born_probability(state, projector: Projector, tol: float = STRUCTURAL_TOL) -> float:
    """<s|M|s> for a projector M; validated real and inside [0, 1]."""
    comps = state.components if isinstance(state, StateVector) else _as_complex_array(state)
    proj = projector.apply(comps)
    val = complex(np.vdot(comps, proj))
    if abs(val.imag) > ALGEBRAIC_TOL:
        raise ModelError(f"Born probability not real: imag = {val.imag:.3e}")
    p = val.real
    if p < -tol or p > 1.0 + tol:
        raise ModelError(f"Born probability outside [0, 1]: {p!r}")
    return min(max(p, 0.0), 1.0)


def collapse(state, projector: Projector, tol: float = STRUCTURAL_TOL) -> StateVector:
    """Normalized projection M|s> / ||M|s>||."""
    comps = state.components if isinstance(state, StateVector) else _as_complex_array(state)
    proj = projector.apply(comps)
    nrm = np.linalg.norm(proj)
    if nrm ** 2 <= ALGEBRAIC_TOL:
        raise CollapseImpossible("collapse impossible: outcome has zero probability")
    return StateVector(proj / nrm, tol=tol)


def tensor_product(a, b) -> StateVector:
    """Kronecker product, row-major: the first factor's index varies slowest."""
    ca = a.components if isinstance(a, StateVector) else _as_complex_array(a)
    cb = b.components if isinstance(b, StateVector) else _as_complex_array(b)
    return StateVector(np.kron(ca, cb), normalized=False)


def schmidt_rank(state, dims, tol: float = STRUCTURAL_TOL) -> int:
    """Number of Schmidt coefficients above tol for a state in C^(da*db)."""
    da, db = int(dims[0]), int(dims[1])
    comps = state.components if isinstance(state, StateVector) else _as_complex_array(state)
    if comps.size != da * db:
        raise DimensionMismatch(f"state dim {comps.size} != {da}*{db}")
    s = np.linalg.svd(comps.reshape(da, db), compute_uv=False)
    return int(np.sum(s > tol))


def validate_spectral_family(family: SpectralFamily, tol: float = STRUCTURAL_TOL) -> ValidationReport:
    """Check pairwise orthogonality and completeness; report violating pairs."""
    violations = []
    mats = [p.matrix for p in family.projectors]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = float(np.max(np.abs(mats[i] @ mats[j])))
            if worst > tol:
                violations.append((i, j, worst))
    total = sum(mats) if mats else np.zeros((family.dim, family.dim))
    defect = float(np.max(np.abs(total - np.eye(family.dim))))
    ok = not violations and defect <= tol
    return ValidationReport(ok, tuple(violations), defect)


def fock_compose(sector1: StateVector, sector2: StateVector, n: float, m: float,
                 gamma: float = 0.0, delta: float = 0.0) -> FockState:
    return FockState(sector1, sector2, float(n), float(m), float(gamma), float(delta))


# ---------------------------------------------------------------------------
# JSON-friendly serialization: components as [re, im] pairs, diagonal
# projectors as basis index lists.

def state_to_dict(state: StateVector) -> dict:
    return {
        "dim": state.dim,
        "components": [[float(c.real), float(c.imag)] for c in state.components],
    }


def state_from_dict(d: dict, normalized: bool = True) -> StateVector:
    comps = np.array([complex(re, im) for re, im in d["components"]])
    if len(comps) != d["dim"]:
        raise ModelError(f"dim field {d['dim']} != component count {len(comps)}")
    return StateVector(comps, normalized=normalized)


def projector_to_dict(p: Projector) -> dict:
    if p.is_diagonal:
        return {"dim": p.dim, "basis_indices": list(p.basis_indices)}
    return {
        "dim": p.dim,
        "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in p.matrix],
    }


def projector_from_dict(d: dict) -> Projector:
    if "basis_indices" in d:
        return Projector(basis_indices=d["basis_indices"], dim=d["dim"])
    m = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
    return Projector(matrix=m)
