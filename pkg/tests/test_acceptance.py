"""The ten acceptance criteria, one test each; a summary line per criterion is printed at the end."""
import functools
import time

import numpy as np

from ordfix import (
    FiniteSpace,
    GeneratorParams,
    ScalarGauge,
    SuiteParams,
    brute_picard_check,
    build_maia_metric,
    chain_components,
    check_bounds_and_directedness,
    check_monotone,
    classify_picard,
    gamma_beta,
    gen_random_space,
    gen_theorem_instance,
    get_instance,
    half_map_analytic,
    hlm,
    iterate,
    progressive_sets,
    run_picard,
    run_variable_exponent,
    theorem_suite,
    verify_maia_properties,
)
from ordfix.cli import falsify
from ordfix.compfn import beta_is_valid
from ordfix.instances import library_names

from conftest import full_corpus, record_acceptance

SUITE_TARGETS = ("T2", "T4", "T9")
PER_TARGET = 500


def _params(target, seed):
    return GeneratorParams(
        seed=seed,
        n=1 + seed % 8,
        target=target,
        quasi=target != "T2" and seed % 2 == 1,
        gauge="rational" if seed % 3 == 0 else "linear",
        alpha=(0.3, 0.5, 0.7, 0.9)[seed % 4],
    )


@functools.lru_cache(maxsize=None)
def _suite_run():
    """Generate and judge PER_TARGET instances per theorem; returns (results, seconds)."""
    start = time.perf_counter()
    results = {}
    for target in SUITE_TARGETS:
        rows = []
        for seed in range(PER_TARGET):
            spec = gen_theorem_instance(_params(target, seed))
            rows.append((spec, theorem_suite(spec.space, target, spec.suite_params())))
        results[target] = rows
    return results, time.perf_counter() - start


def _check(number, ok, detail):
    record_acceptance(number, ok, detail)
    assert ok, detail


def test_criterion_01_series_metric_closed_form():
    inst = half_map_analytic()
    start = time.perf_counter()
    dm = build_maia_metric(inst.space, 0.5, 1.5)
    rep = verify_maia_properties(dm)
    elapsed = time.perf_counter() - start
    pts = np.array(inst.space.points)
    err = float(np.max(np.abs(dm.table - 4.0 * np.abs(pts[:, None] - pts[None, :]))))
    ok = err <= 1e-9 and rep.identity and rep.subordination and rep.contraction_mu and elapsed < 1.0
    _check(1, ok, f"max |e - 4d| = {err:.2e}, properties {rep.ok}, tail {dm.tail_bound:.1e}, {elapsed:.3f}s")


def test_criterion_02_suite_soundness():
    results, elapsed = _suite_run()
    parts, ok = [], elapsed < 60.0
    for target, rows in results.items():
        hyp = [v for _, v in rows if v.hypotheses_hold]
        respected = sum(v.implication_respected for v in hyp)
        sizes = max(s.space.n for s, _ in rows)
        ok = ok and len(rows) >= 500 and len(hyp) > 0 and respected == len(hyp) and sizes <= 8
        parts.append(f"{target} {respected}/{len(hyp)}")
    _check(2, ok, f"{', '.join(parts)} respected; {elapsed:.1f}s total")


def test_criterion_03_necessity():
    b03 = falsify("T2", ["b03"], trials=1000, seed=7)
    c05 = falsify("T4", ["c05"], trials=1000, seed=7)
    two = get_instance("two-components")
    curated = theorem_suite(two.space, "T2", SuiteParams(alpha=0.5), drop=["b03"])
    ok = (
        b03 is not None
        and c05 is not None
        and curated.counterexample
        and not b03[2].hypotheses["b03"].passed
        and not c05[2].hypotheses["c05"].passed
    )
    detail = (
        f"b03 at trial {b03[0] if b03 else None}, c05 at trial {c05[0] if c05 else None}, "
        f"two-components counterexample {curated.counterexample}"
    )
    _check(3, ok, detail)


def test_criterion_04_orbit_decay_bound():
    results, _ = _suite_run()
    orbits = worst = 0
    ok = True
    for spec, _ in results["T4"]:
        phi = spec.phi
        for x in sorted(progressive_sets(spec.space).leq):
            tr = run_picard(spec.space, x, phi=phi, mode="modulo-C-leq").trace
            orbits += 1
            e0 = tr.step_distances[0] if tr.step_distances else 0.0
            for k, step in enumerate(tr.step_distances):
                excess = step - iterate(phi, e0, k)
                worst = max(worst, excess)
                ok = ok and excess <= 1e-12
    _check(4, ok, f"{orbits} orbits on {len(results['T4'])} instances, largest excess {worst:.1e}")


def test_criterion_05_gamma_beta():
    phi = ScalarGauge.rational(1.0)
    parts, ok = [], True
    for gamma in (0.1, 0.25, 0.5, 0.9):
        beta = gamma_beta(phi, gamma)
        closed = gamma * gamma / (1 - gamma)
        good = beta is not None and beta_is_valid(phi, gamma, beta, 256) and beta_is_valid(phi, gamma, closed, 256)
        ok = ok and good
        parts.append(f"g={gamma}: b={beta:.4g}")
    _check(5, ok, "; ".join(parts) + "; closed form valid")


def test_criterion_06_hlm_identity():
    pairs = 0
    ok = True
    for name in library_names():
        space = get_instance(name).space
        for x in space.points:
            tx = space.T(x)
            ttx = space.T(tx)
            ok = ok and hlm(space, x, tx).M == max(space.d(x, tx), space.d(tx, ttx))
            pairs += 1
    _check(6, ok, f"exact on {pairs} points across {len(library_names())} library instances")


def test_criterion_07_variable_exponent_engine():
    chain = get_instance("variable-exponent-chain")
    v = run_variable_exponent(chain.space, 0, chain.family, max_steps=200)
    tail_ok = v.tail_step < 1e-6 and len(v.orbit) - 1 <= 200
    dominated = True
    for k, bound in enumerate(v.composite_bounds):
        x = v.block_points[k + 1]
        m_from = v.cumulative[k]
        for y in v.orbit[m_from:]:
            dominated = dominated and chain.space.d(x, y) <= bound
    ok = v.ascending and v.cauchy and tail_ok and dominated and v.bounds_respected
    _check(7, ok, f"blocks {v.exponents}, t0 {v.t0:.4f}, bounds {[round(b, 4) for b in v.composite_bounds]}")


def _phi_for(spec):
    return spec.phi or ScalarGauge.linear(spec.alpha or 0.5)


def test_criterion_08_maximality():
    results, _ = _suite_run()
    specs = list(full_corpus()) + [s for s, _ in results["T4"]]
    instances = fixed = 0
    ok = True
    for spec in specs:
        space = spec.space
        if not isinstance(space, FiniteSpace):
            continue
        v = theorem_suite(space, "T4", spec.suite_params(phi=_phi_for(spec)))
        if not v.hypotheses_hold:
            continue
        instances += 1
        rep = classify_picard(space, "modulo-C-leq")
        prog = progressive_sets(space).leq
        for z in rep.fix_set:
            fixed += 1
            exhaustive = all(not space.leq(z, u) or space.leq(u, z) for u in prog)
            ok = ok and rep.maximality[z] and exhaustive
        ok = ok and rep.maximality == brute_picard_check(space, "modulo-C-leq").maximality
    _check(8, ok and fixed > 0, f"{fixed} fixed points on {instances} instances meeting the ordered hypotheses")


def test_criterion_09_reduction_pipeline():
    candidates = list(full_corpus())
    candidates += [gen_theorem_instance(GeneratorParams(seed=s, n=1 + s % 8, target="T2")) for s in range(200)]
    passed = carried = 0
    failures = []
    for spec in candidates:
        space = spec.space
        if not isinstance(space, FiniteSpace):
            continue
        alpha = spec.alpha or 0.5
        if not theorem_suite(space, "T2", SuiteParams(alpha=alpha)).hypotheses_hold:
            continue
        passed += 1
        dm = build_maia_metric(space, alpha)
        v = theorem_suite(space, "T3", SuiteParams(alpha=alpha, mu=dm.mu, metric=dm))
        if v.hypotheses_hold:
            carried += 1
        else:
            failures.append((spec.name, v.failed_hypotheses()))
    _check(9, passed > 0 and carried == passed, f"{carried}/{passed} instances carried over; failures {failures[:3]}")


def _antecedent_pool():
    pool = [s.space for s in full_corpus() if isinstance(s.space, FiniteSpace)]
    rng = np.random.default_rng(2024)
    for seed in range(1500):
        base = gen_random_space(GeneratorParams(seed=seed, n=1 + seed % 8, order_density=(0.2, 0.5, 0.8)[seed % 3]))
        pool.append(base.with_selfmap(rng.integers(0, base.n, size=base.n)))
    return pool


def test_criterion_10_bounds_imply_connectivity():
    seen = 0
    ok = True
    for space in _antecedent_pool():
        if not (check_monotone(space, "leq").monotone and check_bounds_and_directedness(space).a05):
            continue
        seen += 1
        b02 = check_monotone(space, "comparability").increasing
        b03 = len(chain_components(space)) == 1
        ok = ok and b02 and b03
    _check(10, ok and seen > 0, f"consequent holds on all {seen} instances meeting the antecedent")
