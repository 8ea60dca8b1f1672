"""Command line interface: mindim, sweep, verify, demo and gk-dump.

System parameters come either as the frequency triple (--omega-f,
--omega-s, --kappa) or as the dimensionless rate pair (--gamma-f,
--gamma-s, optionally --reference-omega-f); exactly one group must be
given.  A key = value config file (INI sections, any section names) can
supply the same keys, with command line flags taking precedence.

Exit codes: 0 on success, 1 when a numerical check fails, 2 on usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import code_construction as cc
from . import gk_states as gk
from . import graph_verify as gv
from .hilbert import QuadratureRule, TruncationConfig
from .jc_spectrum import JCParams, dressed_basis, hamiltonian_matrix

_FLOAT_KEYS = {"omega_f", "omega_s", "kappa", "gamma_f", "gamma_s",
               "reference_omega_f", "tail_tol", "tol", "x", "t",
               "gamma_f_min", "gamma_f_max", "gamma_s_min", "gamma_s_max"}
_INT_KEYS = {"k0", "n_fock", "nodes", "seed", "gamma_f_steps", "gamma_s_steps"}
_BOOL_KEYS = {"hz", "resonant", "allow_leak"}
_STR_KEYS = {"family1", "family2", "state", "which", "xs", "ys", "out"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS


class UsageError(Exception):
    """Bad flags or config; reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters shared by all subcommands."""

    params: JCParams
    k0: int
    n_fock: int
    tail_tol: float
    family1: gk.WeightFamily
    family2: gk.WeightFamily
    nodes: int
    tol: float
    seed: int

    @property
    def trunc(self) -> TruncationConfig:
        return TruncationConfig(n_fock=self.n_fock, tail_tol=self.tail_tol)


def _fmt(value: float) -> str:
    """12 significant digits, plain decimal point."""
    return f"{value:.12g}"


def load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise UsageError(f"cannot parse config file {path}: {exc}") from exc
    if not read:
        raise UsageError(f"config file not found: {path}")
    values: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            key = key.replace("-", "_")
            if key not in _ALL_KEYS:
                raise UsageError(f"unknown config key {key!r} in [{section}]")
            values[key] = raw
    return values


def _coerce(key: str, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {exc}") from exc
    return raw


def _merged(args: argparse.Namespace) -> dict:
    """Config-file values overridden by explicitly given flags."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key, val in vars(args).items():
        if key in _ALL_KEYS and val is not None:
            values[key] = val
    return {k: _coerce(k, v) for k, v in values.items()}


def resolve_run_config(values: dict) -> RunConfig:
    freq = [k for k in ("omega_f", "omega_s", "kappa") if k in values]
    rates = [k for k in ("gamma_f", "gamma_s") if k in values]
    if freq and rates:
        raise UsageError("give either the frequency triple or the rate pair, not both")
    if len(freq) == 3:
        scale = 2.0 * math.pi if values.get("hz") else 1.0
        try:
            params = JCParams(omega_f=scale * values["omega_f"],
                              omega_s=scale * values["omega_s"],
                              kappa=scale * values["kappa"])
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif len(rates) == 2:
        try:
            params = JCParams.from_rates(values["gamma_f"], values["gamma_s"],
                                         omega_f=values.get("reference_omega_f", 1.0))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif freq or rates:
        missing = ({"omega_f", "omega_s", "kappa"} - set(freq)) if freq else \
            ({"gamma_f", "gamma_s"} - set(rates))
        raise UsageError(f"incomplete parameter group; missing {sorted(missing)}")
    else:
        raise UsageError("system parameters required: --omega-f/--omega-s/--kappa "
                         "or --gamma-f/--gamma-s")

    k0_star = cc.minimal_k0(cc.minimal_m0(params))
    k0 = values.get("k0", k0_star)
    if k0 < 1:
        raise UsageError(f"k0 must be >= 1, got {k0}")
    n_fock = values.get("n_fock", 60)
    if n_fock < k0 + 10:
        raise UsageError(
            f"n_fock = {n_fock} leaves no truncation headroom; need N >= k0 + 10 "
            f"= {k0 + 10}")
    tail_tol = values.get("tail_tol", 1e-9)
    try:
        fam1 = gk.builtin_family(values.get("family1", "uniform_moment"))
        fam2 = gk.builtin_family(values.get("family2", "uniform_moment"))
        trunc_check = TruncationConfig(n_fock=n_fock, tail_tol=tail_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    del trunc_check
    nodes = values.get("nodes", 200)
    if nodes < 2:
        raise UsageError(f"nodes must be >= 2, got {nodes}")
    return RunConfig(params=params, k0=k0, n_fock=n_fock, tail_tol=tail_tol,
                     family1=fam1, family2=fam2, nodes=nodes,
                     tol=values.get("tol", 1e-8), seed=values.get("seed", 7))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def cmd_mindim(cfg: RunConfig) -> dict:
    m0 = cc.minimal_m0(cfg.params)
    k0_star = cc.minimal_k0(m0)
    return {"m0": m0, "k0_star": k0_star, "d_min": k0_star - 1,
            "dim_h3": k0_star}


def cmd_sweep(values: dict) -> str:
    needed = ("gamma_f_min", "gamma_f_max", "gamma_f_steps")
    if any(k not in values for k in needed):
        raise UsageError("sweep needs --gamma-f-min/--gamma-f-max/--gamma-f-steps")
    f_range = (values["gamma_f_min"], values["gamma_f_max"])
    try:
        if values.get("resonant"):
            rows = cc.resonant_sweep(f_range, values["gamma_f_steps"])
        else:
            s_needed = ("gamma_s_min", "gamma_s_max", "gamma_s_steps")
            if any(k not in values for k in s_needed):
                raise UsageError("grid sweep needs --gamma-s-min/--gamma-s-max/"
                                 "--gamma-s-steps (or --resonant)")
            rows = cc.dmin_sweep(f_range,
                                 (values["gamma_s_min"], values["gamma_s_max"]),
                                 (values["gamma_f_steps"], values["gamma_s_steps"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    lines = ["gamma_s,gamma_f,m0,k0_star,d_min"]
    for r in rows:
        lines.append(f"{_fmt(r.gamma_s)},{_fmt(r.gamma_f)},{r.m0},{r.k0_star},{r.d_min}")
    return "\n".join(lines) + "\n"


def _stability_grid(cfg: RunConfig, spec: gk.GKFamilySpec, points: int = 10):
    xmax = gk.tail_safe_xmax(spec.family, spec.terms - 1, budget=1e-12)
    xs = np.linspace(0.0, xmax, points)
    ts = np.linspace(0.0, 10.0 / cfg.params.omega_f, points)
    return xs, ts


def run_verification(cfg: RunConfig) -> gv.VerificationReport:
    """The full numerical battery for one configuration."""
    report = gv.VerificationReport()
    params, trunc = cfg.params, cfg.trunc
    rng = np.random.default_rng(cfg.seed)

    basis = dressed_basis(params, trunc)
    h = hamiltonian_matrix(params, trunc)
    eig_res = float(np.linalg.norm(h @ basis.vectors
                                   - basis.vectors * basis.energies, axis=0).max())
    report.add(gv.CheckRecord("spectrum.eigen_residual", eig_res, 1e-10,
                              eig_res < 1e-10))
    gram = float(np.abs(basis.vectors.conj().T @ basis.vectors
                        - np.eye(trunc.dim)).max())
    report.add(gv.CheckRecord("spectrum.gram_identity", gram, 1e-10, gram < 1e-10))

    try:
        families = gk.jc_families(params, cfg.k0, cfg.family1, cfg.family2, trunc)
    except gk.EnergyOrderError as exc:
        report.add(gv.CheckRecord("gk.energy_order", abs(exc.gap), 0.0, False))
        return report
    try:
        code = cc.decompose(params, cfg.k0, trunc)
    except (cc.CutConstraintError, ValueError) as exc:
        report.add(gv.CheckRecord("code.cut_constraint", 1.0, 0.0, False))
        return report

    gap_min = min(float(np.diff(spec.energies).min()) for spec in families)
    report.add(gv.CheckRecord("gk.ladder_increasing", max(0.0, -gap_min), 1e-12,
                              gap_min > 0))

    for spec in families:
        fam = spec.family
        ks = np.arange(min(41, spec.terms))
        dev = float(np.abs(gk.moment_diagonals(fam, ks, fam.moment_rule(cfg.nodes))
                           - 1.0).max())
        report.add(gv.CheckRecord(f"gk.moments.{spec.label}.{fam.name}", dev, 1e-8,
                                  dev < 1e-8))
        res = gk.verify_resolution(spec, fam.moment_rule(cfg.nodes), trunc)
        report.add(gv.CheckRecord(f"gk.resolution.{spec.label}.{fam.name}",
                                  res.residual, 1e-6, res.residual < 1e-6))
        xs, ts = _stability_grid(cfg, spec)
        worst = 0.0
        for t in ts:
            for x in xs:
                fid = gk.verify_temporal_stability(spec, params, float(x),
                                                  float(t), trunc)
                worst = max(worst, 1.0 - fid)
        report.add(gv.CheckRecord(f"gk.temporal_stability.{spec.label}", worst,
                                  1e-9, worst < 1e-9))

    # Identity membership always runs on the finite-radius built-in family.
    if math.isfinite(cfg.family1.radius) and cfg.family2.radius == cfg.family1.radius:
        mem_families = families
    else:
        uni = gk.builtin_family("uniform_moment")
        mem_families = gk.jc_families(params, cfg.k0, uni, uni, trunc)
    mem = gv.verify_identity_membership(params, code, mem_families, trunc,
                                        nodes=cfg.nodes)
    report.add(gv.CheckRecord("graph.identity_membership", mem, 1e-6, mem < 1e-6))

    xmax = gk.tail_safe_xmax(cfg.family1, families[0].terms - 1, budget=1e-6)
    x_hi = min(xmax, 0.95 * cfg.family1.radius) if math.isfinite(cfg.family1.radius) \
        else xmax
    samples = []
    for _ in range(40):
        j = int(rng.integers(1, 4))
        x = float(rng.uniform(0.0, x_hi))
        t = float(rng.uniform(0.0, 10.0 / params.omega_f))
        samples.append(gv.generator(params, code, families, j, x, t, trunc))
    combos = []
    for _ in range(8):
        coeffs = rng.normal(size=len(samples))
        combos.append(sum(c * g.operator for c, g in zip(coeffs, samples)))
    ops = samples + combos + [np.eye(trunc.dim, dtype=complex)]
    kl = gv.verify_anticlique(code, ops, tol=cfg.tol)
    worst_kl = kl.max_residual()
    report.add(gv.CheckRecord("graph.anticlique", worst_kl, cfg.tol,
                              all(c.passed for c in kl.checks)))
    alpha_zero = max(abs(c.alpha) for c, g in zip(kl.checks, samples)
                     if g.j in (1, 2))
    report.add(gv.CheckRecord("graph.anticlique_alpha_zero", alpha_zero, 1e-10,
                              alpha_zero < 1e-10))
    alpha_id = abs(kl.checks[-1].alpha - 1.0)
    report.add(gv.CheckRecord("graph.anticlique_alpha_identity", alpha_id, 1e-10,
                              alpha_id < 1e-10, alpha=kl.checks[-1].alpha))

    dim_code = code.code_basis.shape[1]
    worst_fid, worst_tr, worst_neg = 0.0, 0.0, 0.0
    leak_slack = 0.0
    for i in range(5):
        amps = rng.normal(size=dim_code) + 1j * rng.normal(size=dim_code)
        amps /= np.linalg.norm(amps)
        v = code.code_basis @ amps
        rho = np.outer(v, v.conj())
        x = float(rng.uniform(0.0, x_hi))
        t = float(rng.uniform(0.0, 10.0 / params.omega_f))
        channel = gv.dephasing_channel(params, code, families, x, t, trunc)
        out = gv.channel_apply(channel, rho)
        worst_tr = max(worst_tr, abs(float(np.trace(out).real) - 1.0))
        worst_neg = max(worst_neg, -float(np.linalg.eigvalsh(out).min()))
        worst_fid = max(worst_fid, 1.0 - gv.fidelity(rho, out))
        if i == 0:
            probe = gv.leak_probe(code, families, x, t)
            rho_l = np.outer(probe, probe.conj())
            f_leak = gv.fidelity(rho_l, gv.channel_apply(channel, rho_l))
            leak_slack = max(0.0, f_leak - (1.0 - 1e-3))
    report.add(gv.CheckRecord("channel.trace_preservation", worst_tr, 1e-10,
                              worst_tr < 1e-10))
    report.add(gv.CheckRecord("channel.positivity", worst_neg, 1e-9,
                              worst_neg < 1e-9))
    report.add(gv.CheckRecord("channel.code_fidelity", worst_fid, 1e-8,
                              worst_fid < 1e-8))
    report.add(gv.CheckRecord("channel.leak_control", leak_slack, 1e-12,
                              leak_slack < 1e-12))
    return report


def cmd_demo(cfg: RunConfig, values: dict) -> tuple:
    trunc = cfg.trunc
    code = cc.decompose(cfg.params, cfg.k0, trunc)
    families = gk.jc_families(cfg.params, cfg.k0, cfg.family1, cfg.family2, trunc)
    x = values.get("x", 0.5 * cfg.family1.radius
                   if math.isfinite(cfg.family1.radius) else 1.0)
    t = values.get("t", 1.0 / cfg.params.omega_f)
    rng = np.random.default_rng(cfg.seed)
    state = values.get("state", "random")
    dim_code = code.code_basis.shape[1]
    if values.get("allow_leak"):
        v = gv.leak_probe(code, families, x, t)
    else:
        if state == "random":
            amps = rng.normal(size=dim_code) + 1j * rng.normal(size=dim_code)
        elif state.startswith("basis"):
            try:
                idx = int(state[5:] or 0)
            except ValueError as exc:
                raise UsageError(f"cannot parse state {state!r}") from exc
            if not 0 <= idx < dim_code:
                raise UsageError(f"basis index {idx} outside code dimension {dim_code}")
            amps = np.zeros(dim_code, dtype=complex)
            amps[idx] = 1.0
        else:
            try:
                amps = np.array([complex(part) for part in state.split(",")])
            except ValueError as exc:
                raise UsageError(f"cannot parse state {state!r}: {exc}") from exc
            if amps.size != dim_code:
                raise UsageError(
                    f"state needs {dim_code} amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise UsageError("state must be nonzero")
        v = code.code_basis @ (amps / norm)
    rho = np.outer(v, v.conj())
    if values.get("allow_leak"):
        channel = gv.dephasing_channel(cfg.params, code, families, x, t, trunc)
        fid = gv.fidelity(rho, gv.channel_apply(channel, rho))
    else:
        fid = gv.transmit_demo(cfg.params, code, families, x, t, rho, trunc)
    return fid, 0 if fid >= 1.0 - 1e-8 else 1


def cmd_gk_dump(cfg: RunConfig, values: dict) -> dict:
    families = gk.jc_families(cfg.params, cfg.k0, cfg.family1, cfg.family2,
                              cfg.trunc)
    which = values.get("which", "J").upper()
    if which not in ("J", "S"):
        raise UsageError(f"--which must be J or S, got {which!r}")
    spec = families[0] if which == "J" else families[1]
    try:
        xs = [float(p) for p in values.get("xs", "0,0.25,0.5").split(",")]
        ys = [float(p) for p in values.get("ys", "0").split(",")]
    except ValueError as exc:
        raise UsageError(f"bad grid list: {exc}") from exc
    for x in xs:
        if not 0.0 <= x < spec.family.radius:
            raise UsageError(f"x = {x} outside [0, {spec.family.radius})")
    return gk.dump_family(spec, xs, ys)


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    grp = common.add_argument_group("system parameters")
    grp.add_argument("--omega-f", type=float, dest="omega_f")
    grp.add_argument("--omega-s", type=float, dest="omega_s")
    grp.add_argument("--kappa", type=float)
    grp.add_argument("--gamma-f", type=float, dest="gamma_f")
    grp.add_argument("--gamma-s", type=float, dest="gamma_s")
    grp.add_argument("--reference-omega-f", type=float, dest="reference_omega_f")
    grp.add_argument("--hz", action="store_const", const=True,
                     help="interpret frequencies as Hz (multiplied by 2 pi)")
    com = common.add_argument_group("construction")
    com.add_argument("--k0", type=int)
    com.add_argument("--n-fock", type=int, dest="n_fock")
    com.add_argument("--tail-tol", type=float, dest="tail_tol")
    com.add_argument("--family1")
    com.add_argument("--family2")
    com.add_argument("--nodes", type=int)
    com.add_argument("--tol", type=float)
    com.add_argument("--seed", type=int)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--out", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="jcgraph",
        description="Qubit-oscillator zero-error codes from Jaynes-Cummings "
                    "operator graphs")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("mindim", parents=[common],
                   help="report M0, the minimal cut and the code dimension")
    sw = sub.add_parser("sweep", parents=[common],
                        help="sweep the minimal code dimension over rate grids")
    sw.add_argument("--gamma-f-min", type=float, dest="gamma_f_min")
    sw.add_argument("--gamma-f-max", type=float, dest="gamma_f_max")
    sw.add_argument("--gamma-f-steps", type=int, dest="gamma_f_steps")
    sw.add_argument("--gamma-s-min", type=float, dest="gamma_s_min")
    sw.add_argument("--gamma-s-max", type=float, dest="gamma_s_max")
    sw.add_argument("--gamma-s-steps", type=int, dest="gamma_s_steps")
    sw.add_argument("--resonant", action="store_const", const=True,
                    help="sweep along gamma_s = gamma_f")
    sub.add_parser("verify", parents=[common],
                   help="run the full verification battery, emit a JSON report")
    de = sub.add_parser("demo", parents=[common],
                        help="transmit a code state through the graph channel")
    de.add_argument("--x", type=float)
    de.add_argument("--t", type=float)
    de.add_argument("--state", help="'random', 'basisK', or comma amplitudes")
    de.add_argument("--allow-leak", action="store_const", const=True,
                    dest="allow_leak",
                    help="send a deliberately leaked probe state instead")
    du = sub.add_parser("gk-dump", parents=[common],
                        help="dump coherent-state data as JSON")
    du.add_argument("--which", help="J (upper ladder) or S (lower ladder)")
    du.add_argument("--xs", help="comma separated x grid")
    du.add_argument("--ys", help="comma separated y grid")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = _merged(args)
        out = values.get("out")
        if args.command == "sweep":
            _emit(cmd_sweep(values), out)
            return 0
        cfg = resolve_run_config(values)
        if args.command == "mindim":
            _emit(json.dumps(cmd_mindim(cfg), indent=2) + "\n", out)
            return 0
        if args.command == "verify":
            report = run_verification(cfg)
            _emit(json.dumps(report.to_dict(), indent=2) + "\n", out)
            return 0 if report.overall_pass else 1
        if args.command == "demo":
            fid, rc = cmd_demo(cfg, values)
            _emit(f"{fid:.12f}\n", out)
            return rc
        if args.command == "gk-dump":
            _emit(json.dumps(cmd_gk_dump(cfg, values), indent=2) + "\n", out)
            return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (cc.CutConstraintError, gk.EnergyOrderError, gk.DomainError,
            gk.TruncationTooSmallError, gv.CodeLeakageError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable command dispatch")


def entry() -> None:  # console entry point
    sys.exit(main())


if __name__ == "__main__":
    entry()
