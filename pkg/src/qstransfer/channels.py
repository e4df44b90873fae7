"""Gate constructors, Kraus noise channels and the classical readout model.

Flip-probability convention: ``bit_flip``/``phase_flip`` take the
probability of the flip *event*; the no-flip weight is its complement.
The depolarizing channel uses the per-Pauli weight p/3, so p = 3/4 is
completely depolarizing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import apply_unitary_dm, kron

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)

COMPLETENESS_TOL = 1e-12


class ProbabilityError(ValueError):
    """A probability argument lies outside [0, 1]."""


class ChannelError(ValueError):
    """Kraus operators violate completeness or do not fit the target."""


def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ProbabilityError(f"{name}={p} outside [0, 1]")
    return p


def u_gate(theta: float, phi: float, lam: float = 0.0) -> np.ndarray:
    """General single-qubit rotation; the protocol initializer at lam=0.

    u_gate(theta, phi, 0)|0> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>,
    and the disentangler is its conjugate transpose.
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class KrausChannel:
    """Operator-sum channel; completeness is enforced at construction."""

    operators: tuple
    arity: int

    def __post_init__(self):
        ops = tuple(np.asarray(e, dtype=complex) for e in self.operators)
        dim = 2**self.arity
        if any(e.shape != (dim, dim) for e in ops):
            raise ChannelError(f"Kraus operators must be {dim}x{dim}")
        s = sum(e.conj().T @ e for e in ops)
        if np.max(np.abs(s - np.eye(dim))) > COMPLETENESS_TOL:
            raise ChannelError("Kraus completeness sum E^dag E != I")
        object.__setattr__(self, "operators", ops)


def depolarizing_1q(p: float) -> KrausChannel:
    """Single-qubit depolarizing channel with per-Pauli weight p/3."""
    p = _check_prob(p)
    ops = (
        math.sqrt(1 - p) * I2,
        math.sqrt(p / 3) * X,
        math.sqrt(p / 3) * Y,
        math.sqrt(p / 3) * Z,
    )
    return KrausChannel(ops, 1)


def depolarizing_2q(p: float) -> KrausChannel:
    """Tensor product of two independent single-qubit depolarizers.

    This is deliberately not the uniform 16-dimensional depolarizer: the
    two-qubit gate noise acts as independent per-qubit channels.
    """
    one = depolarizing_1q(p)
    ops = tuple(kron(a, b) for a in one.operators for b in one.operators)
    return KrausChannel(ops, 2)


def bit_flip(flip_prob: float) -> KrausChannel:
    f = _check_prob(flip_prob, "flip_prob")
    return KrausChannel((math.sqrt(1 - f) * I2, math.sqrt(f) * X), 1)


def phase_flip(flip_prob: float) -> KrausChannel:
    f = _check_prob(flip_prob, "flip_prob")
    return KrausChannel((math.sqrt(1 - f) * I2, math.sqrt(f) * Z), 1)


def apply_channel(rho: np.ndarray, ch: KrausChannel, sites) -> np.ndarray:
    """Sum_i E_i rho E_i^dagger with the channel embedded on ``sites``."""
    sites = tuple(sites)
    if ch.arity != len(sites):
        raise ChannelError(f"channel arity {ch.arity} != {len(sites)} sites")
    rho = np.asarray(rho, dtype=complex)
    n = int(np.log2(rho.shape[0]))
    out = np.zeros_like(rho)
    for e in ch.operators:
        out += apply_unitary_dm(rho, e, sites, n)
    return out


@dataclass(frozen=True)
class ReadoutModel:
    """Classical 2x2 response model: q0 = P(1|0), q1 = P(0|1).

    The single-parameter family used throughout sets q0 = kappa*q and
    q1 = q; kappa < 1 biases recorded outcomes toward 0, reflecting that
    |0> is the lower-energy state.
    """

    q0: float
    q1: float

    def __post_init__(self):
        _check_prob(self.q0, "q0")
        _check_prob(self.q1, "q1")

    @classmethod
    def symmetric_offset(cls, q: float, kappa: float = 0.5) -> "ReadoutModel":
        return cls(q0=kappa * q, q1=q)

    def response_matrix(self) -> np.ndarray:
        return np.array(
            [[1 - self.q0, self.q1], [self.q0, 1 - self.q1]], dtype=float
        )


def apply_readout(true_probs, model: ReadoutModel) -> np.ndarray:
    """Map true outcome probabilities to recorded ones via the response
    matrix (column-stochastic, so the output still sums to 1)."""
    v = np.asarray(true_probs, dtype=float)
    if v.shape != (2,) or v.min() < -1e-12 or abs(v.sum() - 1.0) > 1e-9:
        raise ProbabilityError(f"invalid probability vector {v}")
    return model.response_matrix() @ v
