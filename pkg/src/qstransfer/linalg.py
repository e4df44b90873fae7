"""Dense complex linear algebra for small qubit registers.

State vectors and density matrices are stored as flat numpy arrays of
dimension 2**n.  Qubit 0 is the leftmost tensor factor, i.e. the most
significant bit of the basis index; the top wire of a circuit diagram is
qubit 0.  Registers are capped at 13 qubits (statevector) which bounds
every dense object handled here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 13
MAX_DIM = 2**MAX_QUBITS

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
EIG_FLOOR = -1e-10


class DimensionError(ValueError):
    """Operand dimensions exceed the configured qubit cap or do not match."""


class SiteError(ValueError):
    """Qubit site indices are out of range or repeated."""


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with an overflow guard at the qubit cap."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[0] * b.shape[0] > MAX_DIM or a.shape[-1] * b.shape[-1] > MAX_DIM:
        raise DimensionError(
            f"kron result exceeds the {MAX_QUBITS}-qubit cap: "
            f"{a.shape} x {b.shape}"
        )
    return np.kron(a, b)


def kron_all(*mats: np.ndarray) -> np.ndarray:
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = kron(out, m)
    return out


def is_unitary(u: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    u = np.asarray(u)
    return np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol


def _check_sites(sites, n: int, op_dim: int) -> tuple[int, ...]:
    sites = tuple(int(s) for s in sites)
    if len(set(sites)) != len(sites):
        raise SiteError(f"duplicate sites {sites}")
    if any(s < 0 or s >= n for s in sites):
        raise SiteError(f"sites {sites} out of range for {n} qubits")
    if op_dim != 2 ** len(sites):
        raise DimensionError(
            f"operator dim {op_dim} does not match {len(sites)} sites"
        )
    return sites


def apply_on_axes(arr: np.ndarray, mat: np.ndarray, axes) -> np.ndarray:
    """Left-multiply ``mat`` onto the given tensor axes of ``arr``.

    Each listed axis must have dimension 2; ``mat`` must be 2**k x 2**k
    for k listed axes.  Other axes (including any leading batch axis)
    are untouched.
    """
    axes = list(axes)
    k = len(axes)
    arr = np.moveaxis(arr, axes, range(k))
    shape = arr.shape
    arr = mat @ arr.reshape(2**k, -1)
    arr = arr.reshape((2,) * k + shape[k:])
    return np.moveaxis(arr, range(k), axes)


def apply_unitary_state(psi: np.ndarray, op: np.ndarray, sites, n: int) -> np.ndarray:
    """op acting on the given sites of an n-qubit statevector."""
    sites = _check_sites(sites, n, op.shape[0])
    out = apply_on_axes(psi.reshape((2,) * n), op, sites)
    return out.reshape(-1)


def apply_unitary_dm(rho: np.ndarray, op: np.ndarray, sites, n: int) -> np.ndarray:
    """U rho U^dagger on the given sites of an n-qubit density matrix."""
    sites = _check_sites(sites, n, op.shape[0])
    t = rho.reshape((2,) * (2 * n))
    t = apply_on_axes(t, op, sites)
    t = apply_on_axes(t, op.conj(), [n + s for s in sites])
    return t.reshape(2**n, 2**n)


def partial_trace(rho: np.ndarray, keep, n: int) -> np.ndarray:
    """Trace out every qubit not listed in ``keep`` (order preserved)."""
    keep = tuple(int(s) for s in keep)
    if not keep:
        raise SiteError("keep set must be non-empty")
    _check_sites(keep, n, 2 ** len(keep))
    t = rho.reshape((2,) * (2 * n))
    traced = [s for s in range(n) if s not in keep]
    # contract row axis s with col axis n+s, collapsing axes as we go
    offset = n
    for s in sorted(traced, reverse=True):
        t = np.trace(t, axis1=s, axis2=offset + s)
        offset -= 1
    k = len(keep)
    # remaining axes are in ascending site order; permute to match `keep`
    order = sorted(keep)
    perm = [order.index(s) for s in keep]
    t = np.transpose(t, perm + [k + p for p in perm])
    return t.reshape(2**k, 2**k)


def min_eigenvalue(rho: np.ndarray, herm_tol: float = 1e-10) -> float:
    """Smallest eigenvalue of a Hermitian matrix (positivity audit)."""
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return float(np.linalg.eigvalsh(rho)[0])


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    return psi


@dataclass(frozen=True)
class StateVector:
    """Pure n-qubit state; amplitudes indexed with qubit 0 as the MSB."""

    amplitudes: np.ndarray
    n_qubits: int = field(default=0)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        n = int(np.log2(amps.size))
        if 2**n != amps.size or n > MAX_QUBITS:
            raise DimensionError(f"bad statevector length {amps.size}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        return cls(zero_state(n))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check(self, tol: float = NORM_TOL) -> None:
        if abs(self.norm() - 1.0) > tol:
            raise ValueError(f"statevector norm {self.norm()} != 1")

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed n-qubit state; ``subnormalized`` tags measurement branches
    whose trace carries the branch probability instead of 1."""

    entries: np.ndarray
    subnormalized: bool = False
    n_qubits: int = field(default=0)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        n = int(np.log2(m.shape[0]))
        if m.ndim != 2 or m.shape[0] != m.shape[1] or 2**n != m.shape[0]:
            raise DimensionError(f"bad density matrix shape {m.shape}")
        if n > MAX_QUBITS:
            raise DimensionError(f"{n} qubits exceeds the cap")
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def zero(cls, n: int) -> "DensityMatrix":
        return StateVector.zero(n).density()

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def check(self, tol: float = HERMITICITY_TOL) -> None:
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("density matrix is not Hermitian")
        if not self.subnormalized and abs(self.trace() - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {self.trace()} != 1")
        if min_eigenvalue(m) < EIG_FLOOR:
            raise ValueError("density matrix has a negative eigenvalue")


def _unwrap(state):
    if isinstance(state, StateVector):
        return state.amplitudes, state.n_qubits, "state"
    if isinstance(state, DensityMatrix):
        return state.entries, state.n_qubits, "dm"
    return None


def apply_local(state, op: np.ndarray, sites):
    """Embed ``op`` on ``sites`` and apply it to a state of either kind.

    Accepts StateVector/DensityMatrix wrappers or bare arrays (1-D for
    pure states, 2-D for density matrices); returns the same kind.
    """
    op = np.asarray(op, dtype=complex)
    wrapped = _unwrap(state)
    if wrapped is not None:
        arr, n, kind = wrapped
        if kind == "state":
            return StateVector(apply_unitary_state(arr, op, sites, n))
        return DensityMatrix(
            apply_unitary_dm(arr, op, sites, n), subnormalized=state.subnormalized
        )
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        n = int(np.log2(arr.size))
        return apply_unitary_state(arr, op, sites, n)
    n = int(np.log2(arr.shape[0]))
    return apply_unitary_dm(arr, op, sites, n)
