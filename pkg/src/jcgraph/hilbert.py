"""Dense numerics on the truncated qubit-oscillator product space.

The product basis |n, s> (photon number n = 0..N, qubit level s in {g, e})
is flattened to index 2n + s with g = 0 and e = 1, so the truncated space
has dimension 2(N + 1).  States are complex vectors of that length and
operators are dense complex matrices; both are plain numpy arrays.

Besides the indexing helpers this module provides the two averaging
primitives used throughout the verification suite: the analytic Bohr mean
of a quasi-periodic operator family (diagonal extraction) and its
brute-force counterpart, a finite-time average, plus Gaussian quadrature
rules for the radial integrals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_laguerre, roots_legendre

QUBIT_LEVELS = ("g", "e")
_LEVEL_INDEX = {"g": 0, "e": 1, 0: 0, 1: 1}


class ValidationError(ValueError):
    """A state or operator failed a structural precondition."""


@dataclass(frozen=True)
class TruncationConfig:
    """Photon cutoff N together with the admissible neglected tail mass."""

    n_fock: int
    tail_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.n_fock < 2:
            raise ValueError(f"n_fock must be >= 2, got {self.n_fock}")
        if not 0.0 < self.tail_tol < 1.0:
            raise ValueError(f"tail_tol must lie in (0, 1), got {self.tail_tol}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_fock + 1)


def basis_index(n: int, s, trunc: TruncationConfig | None = None) -> int:
    """Flattened index of the product basis state |n, s>.

    ``s`` is 'g' or 'e' (0 and 1 are accepted as aliases).  When ``trunc``
    is given the photon number is checked against the cutoff.
    """
    try:
        level = _LEVEL_INDEX[s]
    except (KeyError, TypeError):
        raise IndexError(f"unknown qubit level {s!r}; expected 'g' or 'e'") from None
    n = int(n)
    if n < 0:
        raise IndexError(f"photon number must be >= 0, got {n}")
    if trunc is not None and n > trunc.n_fock:
        raise IndexError(f"photon number {n} exceeds the cutoff N = {trunc.n_fock}")
    return 2 * n + level


def basis_vector(n: int, s, trunc: TruncationConfig) -> np.ndarray:
    """Unit vector for |n, s> in the truncated space."""
    v = np.zeros(trunc.dim, dtype=complex)
    v[basis_index(n, s, trunc)] = 1.0
    return v


def projector_onto(vectors: Sequence[np.ndarray], dim: int | None = None,
                   tol: float = 1e-10) -> np.ndarray:
    """Orthogonal projector onto the span of pairwise orthonormal vectors.

    The inputs are validated: every pair must be orthonormal within ``tol``
    (a failed pair is named in the error).  An empty list with an explicit
    ``dim`` yields the zero operator.
    """
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    if not vecs:
        if dim is None:
            raise ValueError("projector_onto needs dim when no vectors are given")
        return np.zeros((dim, dim), dtype=complex)
    d = vecs[0].shape[0]
    if dim is not None and dim != d:
        raise ValueError(f"vector length {d} does not match dim = {dim}")
    v_mat = np.column_stack(vecs)
    gram = v_mat.conj().T @ v_mat
    dev = np.abs(gram - np.eye(len(vecs)))
    if dev.max() > tol:
        i, j = np.unravel_index(int(dev.argmax()), dev.shape)
        raise ValidationError(
            f"vectors {i} and {j} are not orthonormal: <v{i}|v{j}> = {gram[i, j]:.3e}"
        )
    return v_mat @ v_mat.conj().T


def conjugate(u: np.ndarray, a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Return U A U+ after checking that U is unitary within ``tol``."""
    u = np.asarray(u, dtype=complex)
    a = np.asarray(a, dtype=complex)
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if dev > tol:
        raise ValidationError(f"operator is not unitary: max |U+U - I| = {dev:.3e}")
    return u @ a @ u.conj().T


def bohr_mean_diagonal(h: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Exact Bohr mean of t -> e^{-iHt} M e^{iHt} for H = diag(h).

    With strictly increasing h every off-diagonal phase e^{-i(h_j - h_k)t}
    averages to zero, so the mean is the diagonal part of M.  Repeated
    h values would leave surviving off-diagonal terms, so they are rejected.
    """
    h = np.asarray(h, dtype=float)
    m = np.asarray(m, dtype=complex)
    if h.ndim != 1 or m.shape != (h.size, h.size):
        raise ValueError("shape mismatch between h and M")
    gaps = np.diff(h)
    if h.size > 1 and gaps.min() <= 0:
        i = int(np.argmin(gaps))
        raise ValidationError(
            f"h must be strictly increasing; h[{i + 1}] - h[{i}] = {gaps[i]:.3e}"
        )
    return np.diag(np.diag(m)).astype(complex)


def finite_time_mean(f: Callable[[float], np.ndarray], t_max: float,
                     samples: int) -> np.ndarray:
    """Brute-force average (1/2T) int_{-T}^{T} f(y) dy by the trapezoid rule.

    ``f`` maps a scalar time to an operator.  Convergence to the Bohr mean
    is O(1/(T * gap)) for quasi-periodic families, so this is only a
    cross-check oracle, never the production path.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    ys = np.linspace(-t_max, t_max, samples)
    acc = 0.5 * (np.asarray(f(ys[0]), dtype=complex) + np.asarray(f(ys[-1]), dtype=complex))
    for y in ys[1:-1]:
        acc = acc + f(y)
    return acc * ((ys[1] - ys[0]) / (2.0 * t_max))


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights approximating int f(x) w(x) dx over the support.

    ``kind`` records the support: "interval" for a plain rule on [a, b]
    (weight 1) or "half_line_exp" for Gauss-Laguerre, whose weights absorb
    the factor e^{-x} on [0, inf).
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "interval"

    def __post_init__(self) -> None:
        if self.nodes.ndim != 1 or self.nodes.shape != self.weights.shape:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if self.nodes.size < 2:
            raise ValueError("a quadrature rule needs at least 2 nodes")
        if np.any(self.weights < 0):
            raise ValueError("quadrature weights must be nonnegative")

    @staticmethod
    def gauss_legendre(a: float, b: float, n: int) -> "QuadratureRule":
        """Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n - 1."""
        x, w = roots_legendre(n)
        half = 0.5 * (b - a)
        return QuadratureRule(nodes=a + half * (x + 1.0), weights=half * w,
                              kind="interval")

    @staticmethod
    def gauss_laguerre(n: int) -> "QuadratureRule":
        """Gauss-Laguerre rule: sum w_i f(x_i) ~ int_0^inf e^{-x} f(x) dx."""
        x, w = roots_laguerre(n)
        return QuadratureRule(nodes=x, weights=w, kind="half_line_exp")


def quadrature_integrate(rule: QuadratureRule, g: Callable) -> np.ndarray | float:
    """Sum w_i g(x_i) for a scalar- or operator-valued integrand."""
    acc = rule.weights[0] * g(rule.nodes[0])
    for x, w in zip(rule.nodes[1:], rule.weights[1:]):
        acc = acc + w * g(x)
    return acc
