"""Acceptance suite.

One test per acceptance criterion, each printing a single summary line
(run pytest with -s to watch them).  Criteria 1/2/9 share one full campaign
run through a module-scoped fixture.
"""

import itertools
import time

import numpy as np
import pytest

from coherence_lab import (
    CampaignConfig,
    DensityMatrix,
    Permutation,
    PureState,
    RoofSettings,
    apply_channel,
    classify_kraus,
    convex_roof_g,
    fsio_to_kraus,
    g_coherence,
    g_coherence_pure,
    gad_channel,
    geometric_mean_kernel,
    l1_coherence,
    make_rng,
    maximally_coherent_state,
    projector,
    random_fsio,
    random_mixed_state,
    random_pure_state,
    records_to_csv,
    run_campaign,
    sampled_roof_bound,
    verify_gad,
    verify_t4,
    verify_t6,
)
from coherence_lab.harness import (
    draw_trial_inputs,
    fsio_reference_factor,
    random_fio_probe,
    trial_seed,
)
from coherence_lab.roof import _spectral_root
from conftest import build_colliding_fio_kraus, build_swap12_fsio_kraus, random_cptp_kraus

MASTER_SEED = 20240 + 817


def report(criterion: str, ok: bool, detail: str):
    print(f"[acceptance] criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def full_campaign():
    cfg = CampaignConfig(master_seed=MASTER_SEED)  # dims 2..5, 500 trials each
    start = time.perf_counter()
    result = run_campaign(cfg)
    elapsed = time.perf_counter() - start
    return cfg, result, elapsed


def test_criterion_1_exact_theorem_monte_carlo(full_campaign):
    cfg, result, elapsed = full_campaign
    by_id = result.summary["per_theorem"]
    fails = {tid: by_id[tid]["fail"] for tid in ("T1", "T3", "T5")}
    counts = {tid: sum(by_id[tid][s] for s in ("pass", "fail", "inconclusive")) for tid in fails}
    ok = all(v == 0 for v in fails.values()) and all(v == 2000 for v in counts.values())
    worst = max(by_id[tid]["max_deviation"] for tid in ("T3", "T5"))
    report(
        "1",
        ok,
        f"2000 trials/theorem over d=2..5, fails={fails}, "
        f"max equality deviation={worst:.2e}, runtime={elapsed:.1f}s",
    )


def test_criterion_2_closed_form_cross_check(full_campaign):
    cfg, result, _ = full_campaign
    worst = 0.0
    trials = 0
    for dim in cfg.dims:
        for trial in range(cfg.trials_per_dim):
            seed = trial_seed(cfg.master_seed, dim, trial)
            _, channel, _ = draw_trial_inputs(seed, dim, cfg.n_kraus_min, cfg.n_kraus_max)
            evolved = g_coherence(
                apply_channel(fsio_to_kraus(channel), projector(maximally_coherent_state(dim)))
            )
            worst = max(worst, abs(evolved - fsio_reference_factor(channel)))
            trials += 1
    report("2", worst <= 1e-10, f"{trials} trials, max |evolved - closed form| = {worst:.2e}")


def test_criterion_3_kernel_bound():
    rng = make_rng(MASTER_SEED + 3)
    worst = -np.inf
    total = 0
    for d in range(2, 7):
        for n in range(1, 7):
            batch = 10_000 // 6 + (1 if n <= 10_000 % 6 else 0)
            fac = rng.standard_normal((batch, n, d)) + 1j * rng.standard_normal((batch, n, d))
            fac /= np.sqrt(np.sum(np.abs(fac) ** 2, axis=1, keepdims=True))
            kernels = np.prod(np.abs(fac) ** (2.0 / d), axis=2).sum(axis=1)
            worst = max(worst, float(kernels.max()))
            total += batch
    report("3", worst <= 1.0 + 1e-12, f"{total} factor sets per d in 2..6, max kernel = {worst:.15f}")


def test_criterion_4_qubit_identity():
    worst = 0.0
    for i in range(10_000):
        rho = random_mixed_state(2, 1 + i % 2, MASTER_SEED + 40_000 + i)
        worst = max(worst, abs(g_coherence(rho) - l1_coherence(rho)))
    report("4", worst <= 1e-12, f"10000 qubit states, max |g - l1| = {worst:.2e}")


def test_criterion_5_normalization_anchors():
    worst_plus = 0.0
    worst_diag = 0.0
    worst_perm = 0.0
    for d in range(2, 9):
        worst_plus = max(worst_plus, abs(g_coherence(projector(maximally_coherent_state(d))) - 1.0))
        rng = make_rng(MASTER_SEED + d)
        weights = rng.uniform(0.05, 1.0, d)
        diag = DensityMatrix(np.diag(weights / weights.sum()).astype(complex))
        worst_diag = max(worst_diag, g_coherence(diag))
        rho = random_mixed_state(d, d, rng)
        base = g_coherence(rho)
        for images in itertools.permutations(range(d)):
            conj = Permutation(np.array(images)).conjugate(rho)
            worst_perm = max(worst_perm, abs(g_coherence(conj) - base))
    ok = worst_plus <= 1e-12 and worst_diag == 0.0 and worst_perm <= 1e-12
    report(
        "5",
        ok,
        f"d=2..8: |G(uniform)-1|<={worst_plus:.2e}, G(diagonal)={worst_diag}, "
        f"permutation deviation<={worst_perm:.2e} over all d! relabelings",
    )


def test_criterion_6_classifier_fixtures_and_lattice():
    fsio_cls = classify_kraus(build_swap12_fsio_kraus())
    fio_cls = classify_kraus(build_colliding_fio_kraus())
    fixtures_ok = (
        fsio_cls.most_specific == "FSIO"
        and fsio_cls.certificate["pi"] == [2, 1, 3]
        and fio_cls.most_specific == "FIO"
        and not fio_cls.fsio
    )
    rng = make_rng(MASTER_SEED + 6)
    lattice_ok = True
    for k in range(1000):
        d = int(rng.integers(2, 5))
        kind = k % 5
        if kind == 0:
            kraus = fsio_to_kraus(random_fsio(d, int(rng.integers(1, 6)), rng))
        elif kind == 1:
            kraus = random_cptp_kraus(d, int(rng.integers(1, 4)), rng)
        elif kind == 2:
            kraus = gad_channel(float(rng.uniform()), float(rng.uniform()))
        elif kind == 3:
            kraus = random_fio_probe(d, int(rng.integers(2, 5)), rng)
        else:
            from coherence_lab import FsioChannel

            base = random_fsio(d, int(rng.integers(1, 4)), rng)
            kraus = fsio_to_kraus(
                FsioChannel(Permutation.identity(d), base.diagonal_factors)
            )
        cls = classify_kraus(kraus)
        lattice_ok = lattice_ok and (
            (not cls.gio or cls.fsio)
            and (not cls.fsio or (cls.fio and cls.sio))
            and (not cls.fio or cls.io)
            and (not cls.sio or cls.io)
            and (not cls.io or cls.mio)
        )
    report(
        "6",
        fixtures_ok and lattice_ok,
        f"fixture certificates ok={fixtures_ok}, lattice consistent on 1000 mixed-provenance sets={lattice_ok}",
    )


def _eigen_ensemble_average(rho: DensityMatrix) -> float:
    root = _spectral_root(rho)
    total = 0.0
    for j in range(root.shape[1]):
        weight = float(np.sum(np.abs(root[:, j]) ** 2))
        total += weight * g_coherence_pure(PureState(root[:, j] / np.sqrt(weight)))
    return total


def test_criterion_7_convex_roof_suite():
    roof = RoofSettings(restarts=20)
    start = time.perf_counter()
    rank1_dev = 0.0
    eigen_gap = -np.inf
    oracle_gap = -np.inf
    t4_dev = 0.0
    t6_fails = 0
    qubit_dev = 0.0
    n_rank1 = 0
    for d in (2, 3):
        for i in range(50):
            rng = make_rng(trial_seed(MASTER_SEED + 7, d, i))
            rank = 1 if i % 5 == 0 else 2
            rho = random_mixed_state(d, rank, rng)
            result = convex_roof_g(rho, restarts=roof.restarts, tol=roof.tol, seed=rng)

            if rank == 1:
                root = _spectral_root(rho)
                rank1_dev = max(rank1_dev, abs(result.value - g_coherence_pure(PureState(root[:, 0]))))
                n_rank1 += 1

            eigen_gap = max(eigen_gap, result.value - _eigen_ensemble_average(rho))
            oracle = sampled_roof_bound(rho, 10_000, seed=rng)
            oracle_gap = max(oracle_gap, result.value - oracle)

            if d == 2:
                qubit_dev = max(qubit_dev, abs(result.value - l1_coherence(rho)))

            # factorization checks with output ranks kept at <= 2
            psi = random_pure_state(d, rng)
            ch_pure = random_fsio(d, int(rng.integers(1, 3)), rng)
            t4 = verify_t4(psi, ch_pure, roof, seed=int(rng.integers(0, 2**63)))
            assert t4.status == "pass", f"T4 record failed at d={d} instance {i}"
            t4_dev = max(t4_dev, t4.deviation)

            n6 = 1 if (d >= 3 and rank == 2) else int(rng.integers(1, 3))
            ch_mixed = random_fsio(d, n6, rng)
            t6 = verify_t6(rho, ch_mixed, roof, seed=int(rng.integers(0, 2**63)))
            if t6.status == "fail":
                t6_fails += 1
    elapsed = time.perf_counter() - start
    ok = (
        rank1_dev <= 1e-10
        and eigen_gap <= 1e-10
        and oracle_gap <= 1e-6
        and t4_dev <= 1e-6
        and t6_fails == 0
        and qubit_dev <= 1e-6
    )
    report(
        "7",
        ok,
        f"100 instances (d=2,3; rank<=2; {n_rank1} rank-1): "
        f"(a) rank-1 dev={rank1_dev:.2e}; (b) eigen gap={eigen_gap:.2e}, "
        f"oracle gap={oracle_gap:.2e}; (c) T4 dev={t4_dev:.2e}, T6 hard violations={t6_fails}; "
        f"(d) qubit |roof-l1|={qubit_dev:.2e}; runtime={elapsed:.0f}s",
    )


def test_criterion_8_gad_grid():
    worst = 0.0
    checks = 0
    for p in np.linspace(0.0, 1.0, 5):
        for eps in np.linspace(0.0, 1.0, 5):
            for i in range(100):
                psi = random_pure_state(2, trial_seed(MASTER_SEED + 8, int(100 * p + 1), i))
                for rec in verify_gad(psi, float(p), float(eps)):
                    assert rec.status == "pass"
                    worst = max(worst, rec.deviation / max(1.0, abs(rec.rhs)))
                    checks += 1
                rho = random_mixed_state(2, 2, trial_seed(MASTER_SEED + 88, int(100 * eps + 1), i))
                rec = verify_gad(rho, float(p), float(eps))[0]
                assert rec.status == "pass"
                worst = max(worst, rec.deviation / max(1.0, abs(rec.rhs)))
                checks += 1

    anchor = verify_gad(
        PureState(np.array([np.sqrt(0.8), np.sqrt(0.2)])), p=1.0, eps=0.36
    )[0]
    anchor_ok = abs(anchor.lhs - 0.64) <= 1e-12 and abs(anchor.rhs - 0.64) <= 1e-12
    report(
        "8",
        worst <= 1e-8 and anchor_ok,
        f"5x5 (p,eps) grid, {checks} checks, max relative deviation={worst:.2e}, "
        f"anchor lhs=rhs=0.64 ok={anchor_ok}",
    )


def test_criterion_9_campaign_determinism(full_campaign):
    cfg, result, _ = full_campaign
    second = run_campaign(cfg)
    first_csv = records_to_csv(result.records)
    second_csv = records_to_csv(second.records)
    ok = first_csv.encode() == second_csv.encode()
    report("9", ok, f"two runs, {len(first_csv)} CSV bytes, byte-identical={ok}")
