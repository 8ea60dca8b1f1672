"""Operator-graph verification: anticliques, identity membership, transmission.

The verified structure is the span V of the time-translated projector
family {U_t P^j_x U_t+}, where P^1_x and P^2_x are coherent-state
projectors on the two increasing Jaynes-Cummings ladders and P^3 is the
projector onto the protected block H3.  Because H3 is spanned by energy
eigenvectors orthogonal to both ladders, P^3 A P^3 = alpha(A) P^3 for
every generator A, which is the Knill-Laflamme condition making H3 an
anticlique of the graph: errors in V are not merely correctable but
undetectable-free, so states in H3 pass through unchanged.

Membership of the identity in V is certified constructively through the
weighted element

    Q_x = P^1_x + (tau2/tau1)(x) P^2_x + (R tau1(x))^{-1} P^3,

whose integral int tau1(x) BohrMean_t[U_t Q_x U_t+] dx reproduces the
identity on the truncated space (minus the decoupled |N, e> direction).
The third coefficient carries the extra 1/R so that its radial integral
is exactly one; this requires a finite convergence radius, hence the
built-in "uniform_moment" family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .code_construction import CodeSpec
from .gk_states import GKFamilySpec, _coefficients, moment_diagonals
from .hilbert import QuadratureRule, TruncationConfig, ValidationError, basis_index
from .jc_spectrum import JCParams, evolution_operator


class UnsupportedFamilyError(ValueError):
    """Identity membership requested with an unsuitable weight family."""


class FamilyMismatchError(ValueError):
    """The lower-branch family was built for a different cut than the code."""


class InvalidAnticliqueError(ValueError):
    """Anticlique verification needs a projector of rank at least 2."""


class InvalidDensityError(ValueError):
    """Channel input is not a density operator within tolerance."""


class CodeLeakageError(ValueError):
    """Transmission input has support outside the code subspace."""

    def __init__(self, message: str, leakage: float):
        super().__init__(message)
        self.leakage = leakage


@dataclass(frozen=True)
class CheckRecord:
    """One named numerical check: residual against tolerance, optional alpha."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    alpha: complex | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
            "alpha_re": None if self.alpha is None else float(self.alpha.real),
            "alpha_im": None if self.alpha is None else float(self.alpha.imag),
        }


@dataclass
class VerificationReport:
    """A list of check records with an aggregate verdict."""

    checks: list = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, record: CheckRecord) -> None:
        self.checks.append(record)

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def to_dict(self) -> dict:
        return {"checks": [c.to_dict() for c in self.checks],
                "overall_pass": self.overall_pass}


@dataclass(frozen=True)
class GraphGenerator:
    """Realized graph generator U_t P^j_x U_t+ with its sample point."""

    j: int
    x: float
    t: float
    operator: np.ndarray


def _ladder_projector(spec: GKFamilySpec, x: float, t: float) -> np.ndarray:
    # Rank-1 projector on the truncated coherent state; the truncated
    # coefficients are renormalized so the realized operator is an exact
    # projector for every x in [0, R), not only where the tail is small.
    c = _coefficients(spec, x, t)
    v = spec.embedding @ c
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def generator(params: JCParams, code: CodeSpec, families: Sequence[GKFamilySpec],
              j: int, x: float, t: float, trunc: TruncationConfig) -> GraphGenerator:
    """Build the graph generator for index j in {1, 2, 3} at sample (x, t).

    j = 3 returns the H3 projector itself (it is invariant under the
    evolution); j = 1, 2 return the coherent-state projector of the
    corresponding ladder at phase time t, using the covariance
    U_t P^j_x U_t+ = |x, t><x, t|.
    """
    if j not in (1, 2, 3):
        raise ValueError(f"generator index must be 1, 2 or 3, got {j}")
    if families[1].start_index != code.k0:
        raise FamilyMismatchError(
            f"lower-branch family starts at {families[1].start_index}, "
            f"code cut is k0 = {code.k0}")
    if j == 3:
        op = code.p3.astype(complex)
    else:
        op = _ladder_projector(families[j - 1], x, t)
    return GraphGenerator(j=j, x=x, t=t, operator=op)


def q_operator(x: float, families: Sequence[GKFamilySpec],
               code: CodeSpec) -> np.ndarray:
    """Weighted graph element Q_x combining both ladders and the H3 block.

    Coefficients: 1 on the first ladder projector, tau2/tau1 on the
    second, 1/(R tau1(x)) on P3.  Requires the first family to have a
    finite convergence radius R (otherwise the H3 coefficient vanishes
    identically and membership fails).
    """
    fam1 = families[0].family
    fam2 = families[1].family
    if not math.isfinite(fam1.radius):
        raise UnsupportedFamilyError(
            f"family {fam1.name!r} has infinite convergence radius; identity "
            "membership needs a finite-radius family such as 'uniform_moment'")
    if not 0.0 <= x < min(fam1.radius, fam2.radius):
        raise ValueError(f"x = {x} outside both family domains")
    tau1 = float(fam1.tau(x))
    ratio = float(fam2.tau(x)) / tau1
    third = 1.0 / (fam1.radius * tau1)
    return (_ladder_projector(families[0], x, 0.0)
            + ratio * _ladder_projector(families[1], x, 0.0)
            + third * code.p3)


def identity_reconstruction(code: CodeSpec, families: Sequence[GKFamilySpec],
                            rule: QuadratureRule) -> np.ndarray:
    """Radial integral of tau1(x) times the Bohr mean of U_t Q_x U_t+.

    The Bohr mean is taken analytically per ladder (each ladder is
    strictly increasing, so only diagonal terms in its embedded basis
    survive), which turns the integral into moment form: the ladder
    diagonals become int rho_i(x) x^k dx / c_k and the H3 term integrates
    tau1(x)/(R tau1(x)) = 1/R exactly.
    """
    fam1 = families[0].family
    fam2 = families[1].family
    if not math.isfinite(fam1.radius) or fam2.radius != fam1.radius:
        raise UnsupportedFamilyError(
            "identity membership needs matching finite convergence radii; "
            f"got R1 = {fam1.radius}, R2 = {fam2.radius}")
    recon = np.zeros((code.trunc.dim, code.trunc.dim), dtype=complex)
    for spec in families:
        fam = spec.family
        eff = QuadratureRule(nodes=rule.nodes,
                             weights=rule.weights * np.asarray(fam.rho(rule.nodes),
                                                               dtype=float),
                             kind=rule.kind)
        diag = moment_diagonals(fam, np.arange(spec.terms), eff)
        recon += (spec.embedding * diag) @ spec.embedding.conj().T
    recon += (rule.weights.sum() / fam1.radius) * code.p3
    return recon


def verify_identity_membership(params: JCParams, code: CodeSpec,
                               families: Sequence[GKFamilySpec],
                               trunc: TruncationConfig,
                               rule: QuadratureRule | None = None,
                               nodes: int = 200) -> float:
    """Max entrywise deviation of the reconstructed identity from I.

    The decoupled |N, e> direction is excluded: no generator has support
    there, so the reconstruction is structurally zero on that row and
    column of the truncated space.
    """
    if rule is None:
        rule = QuadratureRule.gauss_legendre(0.0, families[0].family.radius, nodes)
    recon = identity_reconstruction(code, families, rule)
    target = np.eye(trunc.dim, dtype=complex)
    keep = np.arange(trunc.dim) != basis_index(trunc.n_fock, "e", trunc)
    diff = np.abs(recon - target)[np.ix_(keep, keep)]
    return float(diff.max())


def knill_laflamme_check(p: np.ndarray, ops: Sequence, tol: float = 1e-8,
                         names: Sequence[str] | None = None) -> VerificationReport:
    """Check P A P = alpha(A) P for each operator, fitting alpha by trace.

    alpha(A) = trace(P A P) / rank(P); the residual is the max entrywise
    deviation of P A P from alpha P.
    """
    p = np.asarray(p, dtype=complex)
    idem = np.abs(p @ p - p).max()
    if idem > 1e-9:
        raise ValidationError(f"P is not a projector: max |P^2 - P| = {idem:.3e}")
    rank = round(float(np.trace(p).real))
    if rank < 1:
        raise ValidationError("P has rank 0")
    report = VerificationReport()
    for i, a in enumerate(ops):
        a = np.asarray(getattr(a, "operator", a), dtype=complex)
        pap = p @ a @ p
        alpha = complex(np.trace(pap)) / rank
        residual = float(np.abs(pap - alpha * p).max())
        name = names[i] if names is not None else f"op[{i}]"
        report.add(CheckRecord(name=name, residual=residual, tolerance=tol,
                               passed=residual < tol, alpha=alpha))
    return report


def verify_anticlique(code: CodeSpec, generators: Sequence, tol: float = 1e-8,
                      projector: np.ndarray | None = None) -> VerificationReport:
    """Knill-Laflamme verification of the H3 block (or a sub-projector of it).

    Accepts GraphGenerator samples or raw operators; linear combinations
    of generators may be included directly since the condition is linear.
    """
    p = code.p3 if projector is None else np.asarray(projector, dtype=complex)
    rank = round(float(np.trace(p).real))
    if rank < 2:
        raise InvalidAnticliqueError(
            f"anticlique projector must have rank >= 2, got rank {rank}")
    names = []
    for i, g in enumerate(generators):
        if isinstance(g, GraphGenerator):
            names.append(f"generator[j={g.j},x={g.x:.6g},t={g.t:.6g}]")
        else:
            names.append(f"sample[{i}]")
    return knill_laflamme_check(p, generators, tol=tol, names=names)


@dataclass(frozen=True)
class Channel:
    """Projective (von Neumann) channel rho -> sum_k P_k rho P_k."""

    projectors: tuple

    def __post_init__(self) -> None:
        total = np.zeros_like(np.asarray(self.projectors[0], dtype=complex))
        for i, p in enumerate(self.projectors):
            p = np.asarray(p, dtype=complex)
            if np.abs(p - p.conj().T).max() > 1e-9:
                raise ValidationError(f"channel projector {i} is not Hermitian")
            if np.abs(p @ p - p).max() > 1e-9:
                raise ValidationError(f"channel projector {i} is not idempotent")
            total = total + p
        dev = np.abs(total - np.eye(total.shape[0])).max()
        if dev > 1e-9:
            raise ValidationError(
                f"channel projectors do not sum to identity: max dev {dev:.3e}")


def projective_channel(projectors: Sequence[np.ndarray]) -> Channel:
    """Validate and wrap a complete family of orthogonal projectors."""
    return Channel(projectors=tuple(np.asarray(p, dtype=complex)
                                    for p in projectors))


def dephasing_channel(params: JCParams, code: CodeSpec,
                      families: Sequence[GKFamilySpec], x: float, t: float,
                      trunc: TruncationConfig) -> Channel:
    """The measurement channel induced by the graph at sample (x, t).

    Kraus projectors: the two time-translated ladder projectors and the
    complement U_t (I - P^1_x - P^2_x) U_t+.
    """
    p1 = _ladder_projector(families[0], x, t)
    p2 = _ladder_projector(families[1], x, t)
    rest = np.eye(trunc.dim, dtype=complex) - p1 - p2
    return projective_channel((p1, p2, rest))


def channel_apply(channel: Channel, rho: np.ndarray) -> np.ndarray:
    """Apply the projective channel to a density operator (validated)."""
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - rho.conj().T).max() > 1e-9:
        raise InvalidDensityError("rho is not Hermitian within 1e-9")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 1e-9:
        raise InvalidDensityError(f"rho has trace {tr}, expected 1")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if lo < -1e-9:
        raise InvalidDensityError(f"rho has negative eigenvalue {lo:.3e}")
    out = np.zeros_like(rho)
    for p in channel.projectors:
        out = out + p @ rho @ p
    return out


def _sqrtm_psd(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (a + a.conj().T))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    When either argument is pure the overlap formula tr(rho sigma) is
    used instead; the general square-root route loses ~sqrt(eps) of
    accuracy near eigenvalue zero, which matters when fidelities must be
    resolved against 1 - 1e-8.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    for a, b in ((rho, sigma), (sigma, rho)):
        purity = float(np.trace(a @ a).real)
        if abs(purity - 1.0) < 1e-12:
            return float(min(1.0, np.trace(a @ b).real))
    s = _sqrtm_psd(rho)
    inner = s @ sigma @ s
    vals = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    return float(min(1.0, np.sqrt(vals).sum() ** 2))


def transmit_demo(params: JCParams, code: CodeSpec,
                  families: Sequence[GKFamilySpec], x: float, t: float,
                  rho_code: np.ndarray,
                  trunc: TruncationConfig | None = None) -> float:
    """Send a code-supported state through the graph channel; return fidelity.

    States supported on the code subspace are fixed points of every
    channel in the family, so the fidelity is 1 up to rounding.  Input
    with support outside the code subspace is rejected, reporting the
    leakage magnitude.
    """
    trunc = code.trunc if trunc is None else trunc
    rho = np.asarray(rho_code, dtype=complex)
    pc = code.code_projector
    leak = float(np.abs(pc @ rho @ pc - rho).max())
    if leak >= 1e-10:
        raise CodeLeakageError(
            f"input state leaks outside the code subspace: max residual {leak:.3e}",
            leakage=leak)
    channel = dephasing_channel(params, code, families, x, t, trunc)
    return fidelity(rho, channel_apply(channel, rho))


def leak_probe(code: CodeSpec, families: Sequence[GKFamilySpec], x: float,
               t: float, weight: float = 0.5) -> np.ndarray:
    """Deliberately leaked pure state: code vector mixed with a ladder state.

    Used as the negative control: the ladder component is measured out by
    the channel, so the transmission fidelity drops well below 1.
    """
    c = _coefficients(families[0], x, t)
    ladder = families[0].embedding @ c
    ladder = ladder / np.linalg.norm(ladder)
    v = math.sqrt(1.0 - weight) * code.code_basis[:, 0] + math.sqrt(weight) * ladder
    return v / np.linalg.norm(v)
