"""Acceptance suite: one test per headline claim, each printing a
[PASS]/[FAIL] line (run with -s to see them on success)."""

import math
import textwrap

import numpy as np

from qotto.cavity import (
    CavityParams,
    cavity_affine_map,
    evolve_occupation,
    max_cycle_work_bound,
    occupation_bounds,
    rabi_sum,
    thermal_baseline_work,
)
from qotto.cli import main
from qotto.core import (
    BathSpec,
    GapSchedule,
    carnot_efficiency,
    gibbs_upper,
    otto_efficiency,
)
from qotto.stochastic import (
    CycleParams,
    observed_run_frequency,
    run_daemon,
    run_ensemble,
    violation_run_probability,
    work_cycle_flags,
)

GAPS = GapSchedule(2.0, 1.0)
KT1 = 2.0 / math.log(4.0 / 3.0)  # mean photon number 3 at delta1 = 2
KT2 = 1.0 / math.log(2.0)        # mean photon number 1 at delta2 = 1


def report(criterion: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_c1_otto_efficiency_and_carnot_threshold():
    rng = np.random.default_rng(101)
    worst_rel = 0.0
    worst_carnot = 0.0
    for _ in range(500):
        d2 = rng.uniform(0.05, 3.0)
        d1 = d2 * rng.uniform(1.01, 6.0)
        gaps = GapSchedule(d1, d2)
        expected = 1.0 - d2 / d1
        got = otto_efficiency(gaps)
        worst_rel = max(worst_rel, abs(got - expected) / expected)
        t2 = rng.uniform(0.1, 4.0)
        threshold_bath1 = BathSpec(t2 * d1 / d2)
        worst_carnot = max(
            worst_carnot,
            abs(otto_efficiency(gaps) - carnot_efficiency(threshold_bath1, BathSpec(t2))),
        )
    report(
        "criterion 1: otto efficiency exact and meets carnot at threshold",
        worst_rel <= 1e-15 and worst_carnot <= 1e-12,
        f"max rel err {worst_rel:.2e}, max carnot gap {worst_carnot:.2e}",
    )


def test_c2_thermal_work_formula_and_monte_carlo():
    params = CycleParams.from_baths(GAPS, BathSpec(KT1), BathSpec(KT2))
    analytic_ok = abs(params.mean_work - 2.0 / 21.0) <= 1e-12
    failures = 0
    for seed in range(100):
        stats = run_ensemble(seed, 10**6, params)
        if abs(stats.mean_work - params.mean_work) >= 3.0 * stats.stderr_work:
            failures += 1
    report(
        "criterion 2: analytic work 2/21 and Monte Carlo within 3 stderr",
        analytic_ok and failures <= 1,
        f"z >= 3 on {failures}/100 seeds",
    )


def test_c3_violation_statistics():
    # hot bath no hotter than the cold one
    params = CycleParams.from_baths(GAPS, BathSpec(1.0), BathSpec(1.0))
    n = 10**7
    stats = run_ensemble(20260809, n, params)
    flags = work_cycle_flags(20260809, n, params)
    target = params.work_cycle_probability
    sigma = math.sqrt(target * (1.0 - target) / n)
    freq_ok = abs(stats.violation_frequency - target) < 3.0 * sigma
    zs = [abs(stats.violation_frequency - target) / sigma]
    runs_ok = True
    for n_c in (2, 3):
        law = violation_run_probability(params.p_excite, params.p_deexcite_complement, n_c)
        freq, blocks = observed_run_frequency(flags, n_c)
        sigma_run = math.sqrt(law * (1.0 - law) / blocks)
        zs.append(abs(freq - law) / sigma_run)
        runs_ok = runs_ok and abs(freq - law) < 3.0 * sigma_run
    report(
        "criterion 3: violation frequency and run-length product law within 3 sigma",
        freq_ok and runs_ok,
        "z scores " + ", ".join(f"{z:.2f}" for z in zs),
    )


def test_c4_containment_and_series_accuracy():
    rng = np.random.default_rng(404)
    eps = 1e-12
    excess = 0.0
    for _ in range(10_000):
        n_bar = rng.uniform(1e-3, 5.0)
        params = CavityParams.from_mean_photon(float(n_bar), trunc_eps=eps)
        p0 = float(rng.uniform(0.0, 1.0))
        t = float(rng.uniform(0.0, 100.0))
        lo, hi = occupation_bounds(p0, params)
        value = evolve_occupation(p0, t, params)
        excess = max(excess, lo - value, value - hi)
    contained = excess <= eps

    params = CavityParams.from_mean_photon(1.0, trunc_eps=eps)
    n = np.arange(10_000)
    weights = 0.5 ** (n + 1)
    omegas = np.sqrt(n + 1.0)
    series_err = 0.0
    for t in rng.uniform(0.0, 80.0, size=60):
        oracle = float(np.sum(weights * np.cos(omegas * t) ** 2))
        series_err = max(series_err, abs(rabi_sum(float(t), params) - oracle))
    report(
        "criterion 4: exit bounds contain the evolution and the series matches an oversummed oracle",
        contained and series_err < 1e-11,
        f"max bound excess {excess:.2e}, max series err {series_err:.2e}",
    )


def test_c5_fixed_point_is_gibbs():
    worst = 0.0
    for delta in np.linspace(0.25, 3.0, 20):
        for kt in np.linspace(0.25, 3.0, 20):
            params = CavityParams(float(delta), float(kt))
            fixed = cavity_affine_map(1.3, params).fixed_point()
            gibbs = float(gibbs_upper(float(delta), BathSpec(float(kt))))
            worst = max(worst, abs(fixed - gibbs))
    report(
        "criterion 5: cavity fixed point equals the Gibbs weight on a 20x20 grid",
        worst <= 1e-12,
        f"max deviation {worst:.2e}",
    )


def test_c6_threshold_geometry():
    temperatures = np.linspace(0.2, 4.0, 30)
    ratio = GAPS.delta1 / GAPS.delta2
    checked = 0
    agree = True
    for t1 in temperatures:
        for t2 in temperatures:
            if abs(t1 - t2 * ratio) <= 1e-9:
                continue
            checked += 1
            hot = CavityParams(GAPS.delta1, float(t1))
            cold = CavityParams(GAPS.delta2, float(t2))
            positive = max_cycle_work_bound(hot, cold, GAPS) > 0.0
            agree = agree and positive == (t1 > t2 * ratio)
    report(
        "criterion 6: positive work bound exactly where T1 > T2 delta1/delta2",
        agree and checked > 800,
        f"{checked} grid cells",
    )


def test_c7_above_thermal_extraction():
    hot = CavityParams.from_mean_photon(3.0, delta=2.0)
    cold = CavityParams.from_mean_photon(1.0, delta=1.0)
    closed_form = max_cycle_work_bound(hot, cold, GAPS)

    # masked 2d grid search at 1e-4 resolution, chunked to bound memory
    r1, r2 = 3.0 / 4.0, 1.0 / 2.0
    grid = np.linspace(0.0, 1.0, 10_001)
    best = 0.0
    step = 250
    for start in range(0, grid.size, step):
        p_a = grid[start : start + step][:, None]
        p_b = grid[None, :]
        feasible = (p_b <= r1 * (1.0 - p_a) + 1e-12) & (p_a >= r2 * (1.0 - p_b) - 1e-12)
        work = np.where(feasible, (p_b - p_a) * (GAPS.delta1 - GAPS.delta2), -np.inf)
        best = max(best, float(work.max()))

    baseline = thermal_baseline_work(BathSpec(KT1), BathSpec(KT2), GAPS)
    report(
        "criterion 7: work bound 0.4 beats the thermal 2/21, grid oracle agrees",
        abs(closed_form - 0.4) <= 1e-12
        and abs(best - closed_form) <= 1e-6
        and baseline < closed_form,
        f"bound {closed_form:.12f}, oracle {best:.12f}, thermal {baseline:.12f}",
    )


def test_c8_daemon_and_landauer():
    params = CycleParams.from_baths(GAPS, BathSpec(0.9), BathSpec(1.3))
    ledger = run_daemon(77, 300_000, params, erase_temperature=1.3)
    gross_exact = ledger.gross_work == ledger.completed_cycles * (
        GAPS.delta1 - GAPS.delta2
    )
    analytic_bits = 1.0 / params.p_excite + 1.0 / (1.0 - params.p_deexcite_complement)
    bit_variance = (1.0 - params.p_excite) / params.p_excite**2 + (
        params.p_deexcite_complement / (1.0 - params.p_deexcite_complement) ** 2
    )
    observed_bits = ledger.measurement_bits / ledger.completed_cycles
    bits_z = abs(observed_bits - analytic_bits) / math.sqrt(
        bit_variance / ledger.completed_cycles
    )

    worst_net = -math.inf
    for t2 in np.linspace(0.5, 3.0, 20):
        for fraction in np.linspace(0.2, 1.0, 20):
            cold_bath = BathSpec(float(t2))
            hot_bath = BathSpec(float(t2 * fraction))
            point = CycleParams.from_baths(GAPS, hot_bath, cold_bath)
            grid_ledger = run_daemon(5, 1_000, point, erase_temperature=float(t2))
            worst_net = max(worst_net, grid_ledger.net_work)
    report(
        "criterion 8: daemon gross work exact, bit count matches, erasure kills the profit",
        gross_exact and bits_z < 3.0 and worst_net <= 0.0,
        f"bits z {bits_z:.2f}, worst grid net {worst_net:.3f}",
    )


def test_c9_determinism_across_workers(tmp_path, monkeypatch):
    configs = {
        "montecarlo": f"""
            kind = "montecarlo"
            seed = 42
            n_cycles = 1000000

            [gaps]
            delta1 = 2.0
            delta2 = 1.0

            [bath1]
            temperature = {KT1!r}

            [bath2]
            temperature = {KT2!r}
        """,
        "daemon": f"""
            kind = "daemon"
            seed = 9
            n_attempts = 200000

            [gaps]
            delta1 = 2.0
            delta2 = 1.0

            [bath1]
            temperature = 1.0

            [bath2]
            temperature = {KT2!r}
        """,
    }
    all_identical = True
    for kind, text in configs.items():
        path = tmp_path / f"{kind}.toml"
        path.write_text(textwrap.dedent(text), encoding="utf-8")
        outputs = []
        for threads in ("1", "2", "8"):
            monkeypatch.setenv("QOTTO_THREADS", threads)
            out = tmp_path / f"{kind}-{threads}"
            code = main([kind, "--config", str(path), "--out-dir", str(out)])
            assert code == 0
            outputs.append((out / f"{kind}.csv").read_bytes())
        all_identical = all_identical and outputs[0] == outputs[1] == outputs[2]
    report(
        "criterion 9: stochastic experiments byte-identical across 1/2/8 workers",
        all_identical,
    )
