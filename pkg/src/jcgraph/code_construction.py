"""Minimal code dimension and the invariant-subspace decomposition.

The lower dressed branch S_k = E_{k,-} (with S_0 the ground energy) is
eventually strictly increasing.  M0 is the smallest index from which the
consecutive gaps stay positive, characterized by the strict inequality

    1 / (sqrt(delta^2 + kappa^2 (M0+1)) + sqrt(delta^2 + kappa^2 M0))
        < 2 omega_f / kappa^2,

equivalently, in terms of the rates gamma_f = kappa/omega_f and
gamma_s = kappa/omega_s,

    sqrt(d^2 + M0 + 1) + sqrt(d^2 + M0) > gamma_f / 2,   d = 1/gamma_f - 1/gamma_s.

A cut index k0 >= max(3, M0) splits the truncated space into the upper
branch H1, the increasing part of the lower branch H2 = span{|n,->, n >= k0},
and the protected remainder H3 = span{|0,g>, |1,->, ..., |k0-1,->}, which
hosts a code of dimension k0 - 1 (always at least 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import TruncationConfig, projector_onto
from .jc_spectrum import JCParams, dressed_basis, eigenenergy

_SCAN_CAP = 10 ** 8


class CutConstraintError(ValueError):
    """The requested cut index violates k0 >= max(3, M0) or the cutoff."""


def s_sequence(params: JCParams, k: int) -> float:
    """Lower-branch energy ladder: S_0 = E_{0,g}, S_k = E_{k,-} for k >= 1."""
    if k < 0:
        raise ValueError(f"sequence index must be >= 0, got {k}")
    if k == 0:
        return eigenenergy(params, 0, "ground")
    return eigenenergy(params, k, "minus")


def _gap_condition(params: JCParams, m: int) -> bool:
    # S_{m+1} - S_m > 0 written as the strict closed-form inequality.
    lhs = 1.0 / (math.sqrt(params.delta ** 2 + params.kappa ** 2 * (m + 1))
                 + math.sqrt(params.delta ** 2 + params.kappa ** 2 * m))
    return lhs < 2.0 * params.omega_f / params.kappa ** 2


def minimal_m0(params: JCParams) -> int:
    """Smallest M0 >= 1 from which the lower-branch gaps are all positive."""
    if params.kappa == 0.0:
        return 1
    m = 1
    while not _gap_condition(params, m):
        m += 1
        if m > _SCAN_CAP:  # pragma: no cover - unreachable for finite rates
            raise RuntimeError("monotonicity threshold scan did not terminate")
    return m


def minimal_m0_from_rates(gamma_f: float, gamma_s: float) -> int:
    """Same threshold evaluated purely from the dimensionless rates."""
    if gamma_f <= 0 or gamma_s <= 0:
        raise ValueError("rates must be positive")
    d = 1.0 / gamma_f - 1.0 / gamma_s
    m = 1
    while not (math.sqrt(d * d + m + 1) + math.sqrt(d * d + m) > 0.5 * gamma_f):
        m += 1
        if m > _SCAN_CAP:  # pragma: no cover
            raise RuntimeError("monotonicity threshold scan did not terminate")
    return m


def minimal_k0(m0: int) -> int:
    """Smallest admissible cut index K0* = max(3, M0)."""
    if m0 < 1:
        raise ValueError(f"M0 must be >= 1, got {m0}")
    return max(3, m0)


@dataclass(frozen=True)
class CodeSpec:
    """Cut data: projectors for the three invariant blocks and the code.

    ``code_dim_paper`` is the dimension k0 - 1 of the default code span,
    one less than the k0 basis vectors spanning H3.  ``h3_basis`` and
    ``code_basis`` keep the spanning vectors as columns, ordered |0,g>,
    |1,->, ..., so downstream callers can prepare code states directly.
    """

    params: JCParams
    trunc: TruncationConfig
    m0: int
    k0: int
    code_dim_paper: int
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    code_projector: np.ndarray
    h3_basis: np.ndarray
    code_basis: np.ndarray


def decompose(params: JCParams, k0: int, trunc: TruncationConfig,
              code_dim: int | None = None) -> CodeSpec:
    """Split the truncated space along the cut k0 and build the code.

    Requires k0 >= max(3, M0) so that H2 carries a strictly increasing
    energy ladder, and k0 < N so the cut lies inside the truncation.  The
    code spans the first ``code_dim`` (default k0 - 1, always >= 2) basis
    vectors of H3.
    """
    m0 = minimal_m0(params)
    k_min = minimal_k0(m0)
    if k0 < k_min:
        raise CutConstraintError(
            f"k0 = {k0} below the admissible minimum max(3, M0) = {k_min} (M0 = {m0})")
    if k0 >= trunc.n_fock:
        raise CutConstraintError(
            f"k0 = {k0} must be smaller than the photon cutoff N = {trunc.n_fock}")
    d = k0 - 1 if code_dim is None else code_dim
    if not 2 <= d <= k0:
        raise ValueError(f"code dimension must lie in [2, k0], got {d}")

    basis = dressed_basis(params, trunc)
    plus_cols = [basis.vectors[:, basis.index_of("plus", n)]
                 for n in range(1, trunc.n_fock + 1)]
    lower_cols = [basis.vectors[:, basis.index_of("minus", n)]
                  for n in range(k0, trunc.n_fock + 1)]
    h3_cols = [basis.vectors[:, basis.index_of("ground", 0)]]
    h3_cols += [basis.vectors[:, basis.index_of("minus", n)] for n in range(1, k0)]

    h3_basis = np.column_stack(h3_cols)
    code_basis = h3_basis[:, :d]
    return CodeSpec(
        params=params, trunc=trunc, m0=m0, k0=k0, code_dim_paper=k0 - 1,
        p1=projector_onto(plus_cols),
        p2=projector_onto(lower_cols),
        p3=projector_onto(h3_cols),
        code_projector=projector_onto(list(code_basis.T)),
        h3_basis=h3_basis,
        code_basis=code_basis,
    )


@dataclass(frozen=True)
class SweepRow:
    """One grid point of the minimal-dimension sweep."""

    gamma_s: float
    gamma_f: float
    m0: int
    k0_star: int
    d_min: int


def _row(gamma_f: float, gamma_s: float) -> SweepRow:
    m0 = minimal_m0_from_rates(gamma_f, gamma_s)
    k0_star = minimal_k0(m0)
    return SweepRow(gamma_s=gamma_s, gamma_f=gamma_f, m0=m0,
                    k0_star=k0_star, d_min=k0_star - 1)


def dmin_sweep(gamma_f_range: tuple, gamma_s_range: tuple, steps) -> list:
    """Minimal code data over a rate grid, rows in row-major order.

    ``steps`` is the number of grid points per axis (a single int applies
    to both).  The outer loop runs over gamma_f, the inner over gamma_s.
    """
    try:
        steps_f, steps_s = steps
    except TypeError:
        steps_f = steps_s = steps
    if steps_f < 1 or steps_s < 1:
        raise ValueError("steps must be >= 1")
    if gamma_f_range[0] <= 0 or gamma_s_range[0] <= 0:
        raise ValueError("rate ranges must be positive")
    if gamma_f_range[1] < gamma_f_range[0] or gamma_s_range[1] < gamma_s_range[0]:
        raise ValueError("rate ranges must be increasing")
    gfs = np.linspace(gamma_f_range[0], gamma_f_range[1], steps_f)
    gss = np.linspace(gamma_s_range[0], gamma_s_range[1], steps_s)
    return [_row(float(gf), float(gs)) for gf in gfs for gs in gss]


def resonant_sweep(gamma_range: tuple, steps: int) -> list:
    """Sweep along the resonant line gamma_s = gamma_f."""
    if steps < 2:
        raise ValueError("a resonant sweep needs at least 2 points")
    if gamma_range[0] <= 0:
        raise ValueError("rate range must be positive")
    if gamma_range[1] < gamma_range[0]:
        raise ValueError("rate range must be increasing")
    gfs = np.linspace(gamma_range[0], gamma_range[1], steps)
    return [_row(float(gf), float(gf)) for gf in gfs]
