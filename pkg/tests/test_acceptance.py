"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines bypass output capture).
"""
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from rieszned.ar1 import (
    ar1_ned_certificate,
    generate_ar1,
    geometric_sum,
    power_decay_check,
    random_noise,
)
from rieszned.io import parse_instance, parse_scenario
from rieszned.lattice import cond_exp, global_mean, sqrt_dyadic, sqrt_exact, uniform_space
from rieszned.mixing import (
    alpha,
    alpha_brute,
    enumerate_band_projections,
    phi,
    verify_strong_mixing_inequality,
    verify_uniform_mixing_inequality,
)
from rieszned.norms import sweep_inequalities, verify_norm_axioms
from rieszned.process import (
    lln_check,
    mixingale_from_ned,
    ned_defect,
    ned_product_certificate,
    ned_shift_certificate,
    ned_sum_certificate,
    verify_mixingale,
    verify_ned,
    verify_two_sided_projection_bound,
)
from rieszned.sampling import (
    random_block_constant,
    random_coarsening,
    random_partition,
    random_refinement,
    random_space,
)

ROOT = Path(__file__).resolve().parents[1]
FIX = ROOT / "fixtures"
SLACK_FLOOR = -1e-9
INF = np.inf


@pytest.fixture
def announce(capsys):
    def emit(number: int, ok: bool, summary: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {summary}")
        assert ok, summary

    return emit


def coarse_T(atoms=8):
    half = atoms // 2
    return cond_exp(uniform_space(atoms), [list(range(half)), list(range(half, atoms))])


def test_c01_dyadic_square_root(announce):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_err, monotone, below = 0.0, True, True
    for _ in range(100):
        f = rng.uniform(0.0, 20.0, size=8)
        exact = sqrt_exact(f)
        levels = [sqrt_dyadic(f, n) for n in (4, 8, 12, 16, 20)]
        worst_err = max(worst_err, float(np.max(np.abs(levels[-1] - exact))))
        monotone &= all(np.all(a <= b) for a, b in zip(levels, levels[1:]))
        below &= all(np.all(v <= exact) for v in levels)
    dt = time.perf_counter() - t0
    ok = worst_err <= 2.0**-10 and monotone and below and dt < 5.0
    announce(1, ok, f"max |sqrt_dyadic(f,20) - sqrt(f)| = {worst_err:.3e} (<= {2**-10:.3e}), "
             f"monotone={monotone}, below exact={below}, {dt:.2f}s (< 5s)")


def test_c02_norm_inequalities(announce):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst, checked = np.inf, 0
    for i in range(500):
        atoms = int(rng.integers(1, 9))
        sp = random_space(rng, atoms)
        T_part = random_partition(rng, atoms, int(rng.integers(1, min(4, atoms) + 1)))
        T = cond_exp(sp, T_part)
        S = cond_exp(sp, random_refinement(rng, T_part))
        reports = verify_norm_axioms(T, trials=3, seed=i)
        reports.append(sweep_inequalities(T, [S, T], trials=3, seed=i))
        worst = min(worst, min(r.worst_slack for r in reports))
        checked += len(reports)
    dt = time.perf_counter() - t0
    ok = worst >= SLACK_FLOOR and dt < 10.0
    announce(2, ok, f"500 instances, {checked} reports, worst slack {worst:.3e} (>= -1e-9), {dt:.2f}s (< 10s)")


def test_c03_worked_mixing_values(announce):
    t0 = time.perf_counter()
    inst = parse_instance(FIX / "mixing_4atom.json")
    T, U, V = (inst.operator(k) for k in "TUV")
    a, ph = alpha_brute(U, V, T), phi(U, V, T)
    worked = np.allclose(a, 0.125, rtol=0, atol=1e-12) and np.allclose(ph, 0.25, rtol=0, atol=1e-12)
    ind = parse_instance(FIX / "mixing_independent.json")
    Ti, Ui, Vi = (ind.operator(k) for k in "TUV")
    zero = np.allclose(alpha_brute(Ui, Vi, Ti), 0, atol=1e-12) and np.allclose(phi(Ui, Vi, Ti), 0, atol=1e-12)
    rng = np.random.default_rng(3)
    ordered = True
    for _ in range(200):
        atoms = int(rng.integers(2, 11))
        sp = random_space(rng, atoms)
        T_part = random_partition(rng, atoms, int(rng.integers(1, 4)))
        Ur, Vr = (cond_exp(sp, random_refinement(rng, T_part)) for _ in range(2))
        Tr = cond_exp(sp, T_part)
        ordered &= bool(np.all(alpha(Ur, Vr, Tr, cap=12) <= phi(Ur, Vr, Tr, cap=12) + 1e-12))
    dt = time.perf_counter() - t0
    ok = worked and zero and ordered and dt < 30.0
    announce(3, ok, f"fixture alpha={a[0]:.15g} phi={ph[0]:.15g}; independent fixture zero={zero}; "
             f"alpha<=phi on 200 random instances={ordered}; {dt:.2f}s (< 30s)")


def test_c04_mixing_inequalities(announce):
    rng = np.random.default_rng(4)
    worst, checks = np.inf, 0
    for _ in range(40):
        atoms = int(rng.integers(2, 9))
        sp = random_space(rng, atoms)
        T_part = random_partition(rng, atoms, int(rng.integers(1, 4)))
        T = cond_exp(sp, T_part)
        U, V = (cond_exp(sp, random_refinement(rng, T_part)) for _ in range(2))
        a, ph = alpha(U, V, T), phi(U, V, T)
        fs = [Q.indicator for Q in enumerate_band_projections(V)]
        fs += [random_block_constant(rng, V, 5.0) for _ in range(100)]
        for f in fs:
            r1 = verify_strong_mixing_inequality(U, V, T, f, alpha_value=a)
            r2 = verify_uniform_mixing_inequality(U, V, T, f, phi_value=ph)
            worst = min(worst, r1.worst_slack, r2.worst_slack)
            checks += 2
    announce(4, worst >= SLACK_FLOOR, f"{checks} inequality checks over 40 instances, worst slack {worst:.3e} (>= -1e-9)")


def test_c05_ned_closure(announce):
    T = coarse_T()
    thetas = (0.25, 0.5, 0.75)
    failures, worst, nontrivial = [], np.inf, 0
    for seed in range(50):
        noise = random_noise(T, 10, seed=seed, levels=2)
        f = generate_ar1(thetas[seed % 3], noise, T)
        g = generate_ar1(-thetas[(seed + 1) % 3], noise, T)
        fam = f.family()
        fp, gp = f.process, g.process
        cf, cg, cg_inf = ar1_ned_certificate(f), ar1_ned_certificate(g), ar1_ned_certificate(g, INF)
        cases = {
            "sum": (fp + gp, ned_sum_certificate(cf, cg)),
            "product[2,2]": (fp * gp, ned_product_certificate(cf, cg, fp, gp, T)),
            "product[2,inf]": (fp * gp, ned_product_certificate(cf, cg_inf, fp, gp, T)),
        }
        for s in (1, 3):
            cases[f"shift[{s}]"] = (fp.shifted(s), ned_shift_certificate(cf, s, fp, T))
        for name, (proc, cert) in cases.items():
            r = verify_ned(proc, fam, cert)
            if not r.passed:
                failures.append((seed, name))
            worst = min(worst, r.worst_slack)
        nontrivial += int(np.max(ned_defect(fp, fam, 5, 1)) > 0)
    announce(5, not failures, f"50 AR(1) pairs x sum/product/shift: {len(failures)} failures, "
             f"worst slack {worst:.3e}, pairs with nonzero defects {nontrivial}/50")


def test_c06_two_sided_projection(announce):
    rng = np.random.default_rng(6)
    worst = np.inf
    for _ in range(200):
        atoms = int(rng.integers(2, 9))
        sp = random_space(rng, atoms)
        T_part = random_partition(rng, atoms, int(rng.integers(1, 4)))
        mid = random_refinement(rng, T_part)
        U_part = random_coarsening(rng, mid).join(T_part)
        V_part = random_refinement(rng, mid)
        f = rng.normal(size=atoms) * 3
        for p in (1, 2, INF):
            r = verify_two_sided_projection_bound(f, cond_exp(sp, U_part), cond_exp(sp, V_part), cond_exp(sp, T_part), p)
            worst = min(worst, r.worst_slack)
    inst = parse_instance(FIX / "two_sided_factor_one.json")
    stored = verify_two_sided_projection_bound(
        inst.vectors["f"], inst.operator("U"), inst.operator("V"), inst.operator("T"), INF
    )
    factor_one = stored.details["factor_one_slack"]
    ok = worst >= SLACK_FLOOR and stored.passed and factor_one < 0
    announce(6, ok, f"200 nested triples x 3 exponents, worst slack {worst:.3e}; "
             f"stored instance factor-1 slack {factor_one:.3g} (< 0)")


def test_c07_mixingale_pipeline(announce):
    t0 = time.perf_counter()
    T = coarse_T()
    failures, worst, max_alpha = [], np.inf, 0.0
    for seed in range(20):
        theta = (0.25, 0.5, 0.75)[seed % 3]
        inst = generate_ar1(theta, random_noise(T, 32, seed=seed, levels=2), T)
        fam = inst.family()
        cert = mixingale_from_ned(inst.process, fam, ar1_ned_certificate(inst, INF), cap=10)
        r = verify_mixingale(inst.process, fam.filtration(), cert)
        if not r.passed:
            failures.append(seed)
        worst = min(worst, r.worst_slack)
        max_alpha = max(max_alpha, float(cert.info["alpha"][1:].max()))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 60.0
    announce(7, ok, f"20 AR(1) instances, window 32, cap 10: {len(failures)} rejected, worst slack {worst:.3g}, "
             f"largest alpha at gap >= 1 = {max_alpha:.3g}; {dt:.2f}s (< 60s)")


def test_c08_ar1_closed_form(announce):
    insts = []
    scen = parse_scenario(FIX / "ar1_theta05.json")
    T = scen.base()
    insts.append(generate_ar1(scen.theta_vector(), random_noise(T, scen.steps, seed=scen.noise_seed), T))
    Tc = coarse_T()
    for seed, theta in enumerate((0.25, 0.5, 0.75, -0.5)):
        insts.append(generate_ar1(theta, random_noise(Tc, 16, seed=seed, levels=3), Tc))
    within, worst = True, np.inf
    for inst in insts:
        fam = inst.family()
        a = np.abs(inst.theta)
        for n in inst.process.indices():
            for m in range(len(inst.process)):
                bound = inst.g_bound * a ** (m + 1) / (1.0 - a)
                d = ned_defect(inst.process, fam, n, m)
                within &= bool(np.all(d <= bound + 1e-12))
                worst = min(worst, float(np.min(bound - d)))
    xi = ar1_ned_certificate(insts[0]).xi
    exact_half = all(np.array_equal(xi[m], np.full(8, 0.5**m)) for m in range(len(xi)))
    theta = np.array([0.5, 0.25, 0.9])
    geo = True
    for terms in (0, 1, 5, 20, 60):
        partial, closed = geometric_sum(theta, terms)
        geo &= bool(np.all(np.abs(partial - closed) <= theta ** (terms + 1) / (1 - theta) + 1e-15))
    decay = power_decay_check(np.full(8, 0.5), 1e-3)
    ok = within and exact_half and geo and decay == 10
    announce(8, ok, f"defect <= g|theta|^(m+1)/(e-|theta|) everywhere={within} (worst slack {worst:.3g}); "
             f"xi_m == 0.5^m exactly={exact_half}; geometric_sum tail={geo}; power_decay_check={decay}")


def test_c09_law_of_large_numbers(announce):
    t0 = time.perf_counter()
    T = global_mean(uniform_space(8))
    schedule = [64, 256, 1024, 4096]
    lines, ok = [], True
    for seed in range(5):
        inst = generate_ar1(0.5, random_noise(T, 8192, seed=seed), T)
        r = lln_check(inst.process, T, schedule, 0.9, 0.05)
        ok &= r.passed and r.details["monotone"]
        lines.append(f"seed {seed}: gm ratio {r.details['geometric_mean_ratio']:.3f}, final {r.details['values'][-1]:.4f}")
    dt = time.perf_counter() - t0
    ok &= dt < 30.0
    announce(9, ok, f"strictly decreasing, ratio <= 0.9, final <= 0.05 on 5 seeds ({'; '.join(lines)}); {dt:.2f}s (< 30s)")


def _cli(*args) -> bytes:
    proc = subprocess.run([sys.executable, "-m", "rieszned.cli", *args], capture_output=True, cwd=ROOT, check=False)
    return proc.stdout


def test_c10_determinism(announce, tmp_path):
    invocations = [
        ("norms", "--seed", "5", "--trials", "20"),
        ("mixing", "--instance", str(FIX / "mixing_4atom.json"), "--seed", "5"),
        ("mixing", "--seed", "9", "--format", "csv"),
        ("ned", "--instance", str(FIX / "ar1_coarse.json")),
        ("ar1-demo", "--seed", "7"),
        ("lln", "--seed", "3", "--format", "csv"),
    ]
    same = []
    for args in invocations:
        first, second = _cli(*args), _cli(*args)
        same.append(bool(first) and first == second)
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}" / "report.csv"
        subprocess.run([sys.executable, "-m", "rieszned.cli", "ned", "--seed", "2", "--window", "12",
                        "--format", "csv", "--out", str(out)], cwd=ROOT, check=False)
        outs.append(out.read_bytes() + out.with_name("report.ned.defects.csv").read_bytes())
    same.append(outs[0] == outs[1])
    announce(10, all(same), f"{sum(same)}/{len(same)} repeated CLI invocations byte-identical")
