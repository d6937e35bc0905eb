"""Command-line entry point: run verification suites and emit JSON or CSV reports.

Exit status is 0 iff every asserted property passes, 1 if any fails and 2 for
bad input (malformed files, invalid options, guards such as the enumeration
cap). Reports carry no timestamps and all randomness comes from ``--seed``, so
identical invocations give byte-identical output.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .ar1 import (
    ar1_ned_certificate,
    generate_ar1,
    geometric_sum,
    power_decay_check,
    random_noise,
    tail_bound,
)
from .errors import CertificateRejected, ParseError, RieszError
from .io import (
    DEFECT_COLUMNS,
    MIXING_COLUMNS,
    VERIFICATION_COLUMNS,
    Ar1Scenario,
    Instance,
    dumps,
    generate_random_instance,
    mixingale_certificate_to_obj,
    ned_certificate_to_obj,
    parse_instance,
    parse_scenario,
    serialize_instance,
    write_csv,
)
from .lattice import sqrt_dyadic, sqrt_exact
from .mixing import (
    DEFAULT_CAP,
    alpha,
    alpha_brute,
    enumerate_band_projections,
    phi,
    verify_strong_mixing_inequality,
    verify_uniform_mixing_inequality,
)
from .norms import sweep_inequalities, verify_norm_axioms
from .process import (
    defect_rows,
    lln_check,
    mixingale_from_ned,
    ned_defect,
    ned_product_certificate,
    ned_shift_certificate,
    ned_sum_certificate,
    verify_ned,
)
from .report import Report, SlackTracker, combine
from .sampling import random_block_constant

COMMANDS = ("validate", "norms", "mixing", "ned", "ar1-demo", "lln", "all")
DEFAULT_WINDOWS = {"ned": 32, "ar1-demo": 64, "lln": 8192}
LLN_SCHEDULE = (64, 256, 1024, 4096)
LLN_RATIO = 0.9
LLN_FINAL = 0.05
SQRT_LEVEL = 20


@dataclass(frozen=True)
class RunConfig:
    command: str
    instance_path: str | None = None
    seed: int = 0
    cap: int = DEFAULT_CAP
    window: int | None = None
    out_path: str | None = None
    format: str = "json"
    trials: int = 100

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")
        if self.window is not None and self.window < 2:
            raise ValueError("window must be >= 2")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


@dataclass
class SuiteResult:
    suite: str
    instance: str
    reports: list[Report]
    values: dict[str, Any] = field(default_factory=dict)
    tables: dict[str, list[dict]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.reports) and all(r.passed for r in self.reports)


# ---- input loading -------------------------------------------------------


def _load_instance(cfg: RunConfig, atoms: int = 6, partitions: int = 3) -> tuple[Instance, str]:
    if cfg.instance_path is None:
        return generate_random_instance(cfg.seed, atoms, partitions), f"random(seed={cfg.seed})"
    return parse_instance(cfg.instance_path), Path(cfg.instance_path).name


def _load_scenario(cfg: RunConfig, command: str, use_file: bool) -> tuple[Ar1Scenario, str]:
    window = cfg.window or DEFAULT_WINDOWS[command]
    if use_file and cfg.instance_path is not None:
        scen = parse_scenario(cfg.instance_path)
        if cfg.window is not None:
            scen = Ar1Scenario(scen.theta, cfg.window, scen.noise_seed, scen.noise_scale,
                               scen.noise_levels, scen.weights, scen.T)
        return scen, Path(cfg.instance_path).name
    return Ar1Scenario((0.5,), window, cfg.seed), f"ar1(theta=0.5,steps={window},seed={cfg.seed})"


def _build_ar1(scen: Ar1Scenario, theta_scale: float = 1.0):
    T = scen.base()
    noise = random_noise(T, scen.steps, seed=scen.noise_seed, scale=scen.noise_scale, levels=scen.noise_levels)
    return generate_ar1(scen.theta_vector() * theta_scale, noise, T)


def _block_values(T, v) -> list[float]:
    return [float(x) for x in T.block_values(v)]


# ---- suites --------------------------------------------------------------


def suite_validate(cfg: RunConfig) -> SuiteResult:
    if cfg.instance_path is None:
        raise ParseError("validate needs --instance")
    inst, name = _load_instance(cfg)
    tr = SlackTracker("validate.instance")
    tr.update(0.0, 0.0, {"check": "parsed"})
    T = inst.operator("T" if "T" in inst.partitions else None)
    compat = {}
    for pname, p in sorted(inst.partitions.items()):
        compat[pname] = bool(p.refines(T.partition))
        tr.update(0.0, 0.0, {"partition": pname})
    values = {
        "atoms": inst.space.size,
        "partitions": {k: v.n_blocks for k, v in sorted(inst.partitions.items())},
        "compatible_with_T": compat,
        "vectors": sorted(inst.vectors),
    }
    return SuiteResult("validate", name, [tr.report()], values)


def _sqrt_report(vectors: list[np.ndarray]) -> Report:
    tr = SlackTracker(f"lattice.sqrt_dyadic[n={SQRT_LEVEL}]")
    for k, f in enumerate(vectors):
        exact = sqrt_exact(f)
        approx = sqrt_dyadic(f, SQRT_LEVEL)
        tr.update(approx, exact, {"vector": k, "side": "below"})
        tr.update(exact - approx, np.full_like(exact, 2.0**-10), {"vector": k, "side": "gap"})
    return tr.report()


def suite_norms(cfg: RunConfig) -> SuiteResult:
    inst, name = _load_instance(cfg)
    rng = np.random.default_rng(cfg.seed)
    base_name = "T" if "T" in inst.partitions else None
    T = inst.operator(base_name)
    reports = []
    names = [None] + sorted(inst.partitions)
    for k, pname in enumerate(names):
        op = inst.operator(pname)
        label = pname or "global"
        reports.append(combine(f"norm.axioms[T={label}]", verify_norm_axioms(op, cfg.trials, cfg.seed + k)))
    compatible = [inst.operator(p) for p in sorted(inst.partitions) if inst.partitions[p].refines(T.partition)]
    reports.append(sweep_inequalities(T, compatible, cfg.trials, cfg.seed))
    vecs = [np.abs(v) for _, v in sorted(inst.vectors.items())]
    vecs += [rng.uniform(0.0, 20.0, size=inst.space.size) for _ in range(cfg.trials)]
    reports.append(_sqrt_report(vecs))
    return SuiteResult("norms", name, reports, {"T": base_name or "global"})


def suite_mixing(cfg: RunConfig, inst: Instance | None = None, name: str | None = None) -> SuiteResult:
    if inst is None:
        inst, name = _load_instance(cfg)
    for key in ("U", "V"):
        if key not in inst.partitions:
            raise ParseError("mixing needs partitions U and V", field=f"partitions.{key}")
    T = inst.operator("T" if "T" in inst.partitions else None)
    U, V = inst.operator("U"), inst.operator("V")
    a = alpha(U, V, T, cfg.cap)
    ph = phi(U, V, T, cfg.cap)
    order = SlackTracker("mixing.alpha_le_phi")
    order.update(a, ph)
    reports = [order.report()]
    if U.n_blocks + V.n_blocks <= 16:
        brute = SlackTracker("mixing.alpha_brute_agrees")
        dev = np.abs(a - alpha_brute(U, V, T, cfg.cap))
        brute.update(dev, np.zeros_like(dev))
        reports.append(brute.report())
    rng = np.random.default_rng(cfg.seed)
    vs = [Q(T.space.e) for Q in enumerate_band_projections(V, cfg.cap)]
    vs += [random_block_constant(rng, V, 3.0) for _ in range(cfg.trials)]
    strong = [verify_strong_mixing_inequality(U, V, T, f, cfg.cap, alpha_value=a) for f in vs]
    uniform = [verify_uniform_mixing_inequality(U, V, T, f, cfg.cap, phi_value=ph) for f in vs]
    reports.append(combine("mixing.strong_inequality", strong))
    reports.append(combine("mixing.uniform_inequality", uniform))
    rows = []
    for kind, v in (("alpha", a), ("phi", ph)):
        for b, val in enumerate(_block_values(T, v)):
            rows.append({"instance": name, "m": None, "kind": kind, "block": b, "value": val})
    values = {"alpha": _block_values(T, a), "phi": _block_values(T, ph), "cap": cfg.cap}
    return SuiteResult("mixing", name, reports, values, {"mixing": rows})


def suite_ned(cfg: RunConfig, use_file: bool = True) -> SuiteResult:
    scen, name = _load_scenario(cfg, "ned", use_file)
    inst = _build_ar1(scen)
    half = _build_ar1(scen, 0.5)
    fam = inst.family()
    T = inst.T
    f, g = inst.process, half.process
    reports = []
    certs = {}
    for p in (1, 2, np.inf):
        cert = ar1_ned_certificate(inst, p)
        certs[p] = cert
        reports.append(verify_ned(f, fam, cert))
    cf, cg = certs[2], ar1_ned_certificate(half, 2)
    rep = verify_ned(f + g, fam, ned_sum_certificate(cf, cg))
    rep.property = "ned.sum"
    reports.append(rep)
    rep = verify_ned(f * g, fam, ned_product_certificate(cf, cg, f, g, T))
    rep.property = "ned.product[2,2]"
    reports.append(rep)
    rep = verify_ned(f * g, fam, ned_product_certificate(cf, certs[np.inf], f, f, T))
    rep.property = "ned.product[2,inf]"
    reports.append(rep)
    shifted = ned_shift_certificate(cf, 1, f, T)
    tail = f.shifted(1)
    rep = verify_ned(tail, fam, shifted)
    rep.property = "ned.shift[1]"
    reports.append(rep)
    values: dict[str, Any] = {
        "window": [f.start, f.stop],
        "certificate": ned_certificate_to_obj(cf),
    }
    try:
        mix = mixingale_from_ned(f, fam, certs[np.inf], cfg.cap)
        rep = mix.info["report"]
        values["mixingale"] = mixingale_certificate_to_obj(mix)
    except CertificateRejected as exc:
        rep = exc.report
    rep.property = "mixingale_from_ned"
    reports.append(rep)
    return SuiteResult("ned", name, reports, values, {"defects": defect_rows(f, fam, cf)})


def suite_ar1(cfg: RunConfig, use_file: bool = True) -> SuiteResult:
    scen, name = _load_scenario(cfg, "ar1-demo", use_file)
    inst = _build_ar1(scen)
    fam = inst.family()
    f = inst.process
    cert = ar1_ned_certificate(inst, 2)
    reports = [verify_ned(f, fam, cert)]
    bridge = SlackTracker("ar1.optimality_bridge")
    closed = SlackTracker("ar1.tail_within_closed_form")
    for n in f.indices():
        for m in range(cert.gaps):
            tb = tail_bound(inst, n, m)
            bridge.update(ned_defect(f, fam, n, m, 2), tb, {"n": n, "m": m})
            closed.update(tb, cert.bound(n, m), {"n": n, "m": m})
    reports += [bridge.report(), closed.report()]
    a = np.abs(inst.theta)
    geo = SlackTracker("ar1.geometric_sum")
    for terms in range(32):
        partial, limit = geometric_sum(a, terms)
        geo.update(np.abs(partial - limit), a ** (terms + 1) / (1.0 - a), {"terms": terms})
    reports.append(geo.report())
    values = {
        "theta": [float(x) for x in inst.theta],
        "g_bound": _block_values(inst.T, inst.g_bound),
        "power_decay_m[tol=1e-3]": power_decay_check(a, 1e-3),
        "certificate": ned_certificate_to_obj(cert),
    }
    return SuiteResult("ar1-demo", name, reports, values, {"defects": defect_rows(f, fam, cert)})


def suite_lln(cfg: RunConfig, use_file: bool = True) -> SuiteResult:
    scen, name = _load_scenario(cfg, "lln", use_file)
    schedule = [m for m in LLN_SCHEDULE if m <= scen.steps]
    if not schedule:
        raise ParseError(f"window {scen.steps} is shorter than every schedule entry {list(LLN_SCHEDULE)}")
    inst = _build_ar1(scen)
    rep = lln_check(inst.process, inst.T, schedule, LLN_RATIO, LLN_FINAL)
    return SuiteResult("lln", name, [rep], {"ratio_bound": LLN_RATIO, "final_bound": LLN_FINAL})


def run_suites(cfg: RunConfig) -> list[SuiteResult]:
    cmd = cfg.command
    if cmd == "validate":
        return [suite_validate(cfg)]
    if cmd == "norms":
        return [suite_norms(cfg)]
    if cmd == "mixing":
        return [suite_mixing(cfg)]
    if cmd == "ned":
        return [suite_ned(cfg)]
    if cmd == "ar1-demo":
        return [suite_ar1(cfg)]
    if cmd == "lln":
        return [suite_lln(cfg)]
    # all: the instance feeds the lattice suites, process suites use defaults
    out = []
    if cfg.instance_path is not None:
        out.append(suite_validate(cfg))
    out.append(suite_norms(cfg))
    inst, name = _load_instance(cfg)
    if not {"U", "V"} <= set(inst.partitions):
        inst, name = generate_random_instance(cfg.seed, 6, 3), f"random(seed={cfg.seed})"
    out.append(suite_mixing(cfg, inst, name))
    out.append(suite_ned(cfg, use_file=False))
    out.append(suite_ar1(cfg, use_file=False))
    lln_cfg = RunConfig("lln", seed=cfg.seed, cap=cfg.cap, trials=cfg.trials)
    out.append(suite_lln(lln_cfg, use_file=False))
    return out


# ---- output --------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    return v


def _walk(rep: Report):
    yield rep
    for part in rep.parts:
        yield from _walk(part)


def verification_rows(results: list[SuiteResult]) -> list[dict]:
    rows = []
    for res in results:
        for top in res.reports:
            for rep in _walk(top):
                loc = rep.location or {}
                rows.append(
                    {
                        "suite": res.suite,
                        "property": rep.property,
                        "instance": res.instance,
                        "n": loc.get("n"),
                        "m": loc.get("m"),
                        "block": loc.get("block"),
                        "lhs": loc.get("lhs"),
                        "rhs": loc.get("rhs"),
                        "slack": rep.worst_slack,
                        "pass": rep.passed,
                    }
                )
    return rows


def render(cfg: RunConfig, results: list[SuiteResult]) -> tuple[str, dict[str, str]]:
    """Main report text plus extra CSV tables keyed by name."""
    passed = bool(results) and all(r.passed for r in results)
    if cfg.format == "csv":
        extra = {}
        for res in results:
            for tname, rows in res.tables.items():
                cols = MIXING_COLUMNS if tname == "mixing" else DEFECT_COLUMNS
                extra[f"{res.suite}.{tname}"] = write_csv(rows, cols)
        return write_csv(verification_rows(results), VERIFICATION_COLUMNS), extra
    doc = {
        "command": cfg.command,
        "config": {"seed": cfg.seed, "cap": cfg.cap, "window": cfg.window, "trials": cfg.trials},
        "pass": passed,
        "suites": [
            {
                "suite": r.suite,
                "instance": r.instance,
                "pass": r.passed,
                "reports": [rep.to_dict() for rep in r.reports],
                "values": r.values,
                "tables": r.tables,
            }
            for r in results
        ],
    }
    return dumps(_jsonable(doc)), {}


def error_record(cfg_command: str, exc: Exception) -> dict:
    return {
        "command": cfg_command,
        "pass": False,
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "line": getattr(exc, "line", None),
            "field": getattr(exc, "field", None),
        },
    }


def _emit(text: str, out_path: str | None, extra: dict[str, str] | None = None):
    if out_path is None:
        sys.stdout.write(text)
        return
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    for name, body in (extra or {}).items():
        out.with_name(f"{out.stem}.{name}.csv").write_text(body, encoding="utf-8")


def run(cfg: RunConfig) -> int:
    try:
        results = run_suites(cfg)
    except (RieszError, ValueError, OSError) as exc:
        rec = error_record(cfg.command, exc)
        if cfg.format == "csv":
            row = {"suite": cfg.command, "property": rec["error"]["type"], "instance": cfg.instance_path, "pass": False}
            text = write_csv([row], VERIFICATION_COLUMNS)
        else:
            text = dumps(_jsonable(rec))
        _emit(text, cfg.out_path)
        print(f"error: {rec['error']['type']}: {exc}", file=sys.stderr)
        return 2
    text, extra = render(cfg, results)
    _emit(text, cfg.out_path, extra)
    failed = [(r.suite, rep.property) for r in results for rep in r.reports if not rep.passed]
    if not results or any(not r.reports for r in results):
        print("error: empty suite", file=sys.stderr)
        return 1
    for suite, prop in failed:
        print(f"FAIL {suite} {prop}", file=sys.stderr)
    return 1 if failed else 0


def _generate(args) -> int:
    try:
        inst = generate_random_instance(args.seed, args.atoms, args.partitions)
    except RieszError as exc:
        _emit(dumps(_jsonable(error_record("generate", exc))), args.out)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit(serialize_instance(inst), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rieszned", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--instance", help="instance JSON (AR(1) scenario JSON for ned, ar1-demo, lln)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max blocks per operator in enumerations")
        p.add_argument("--window", type=int, default=None, help="process length (ned 32, ar1-demo 64, lln 8192)")
        p.add_argument("--out", default=None, help="report path (stdout if omitted)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--trials", type=int, default=100)
    g = sub.add_parser("generate", help="write a random instance file")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--atoms", type=int, default=6)
    g.add_argument("--partitions", type=int, default=3)
    g.add_argument("--out", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "generate":
        return _generate(args)
    try:
        cfg = RunConfig(
            command=args.command,
            instance_path=args.instance,
            seed=args.seed,
            cap=args.cap,
            window=args.window,
            out_path=args.out,
            format=args.format,
            trials=args.trials,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
