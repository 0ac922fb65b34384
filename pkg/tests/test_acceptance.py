"""Acceptance criteria, one test each.

Every test prints a single ``[ACCEPT n] PASS|FAIL ...`` line (visible
with or without ``-s``) and then asserts. Tolerances and runtime limits
are the published ones; nothing here is loosened to make a case pass.
Run just this file with ``pytest tests/test_acceptance.py -v``.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from monogamy import harness as hs
from monogamy.bounds import (
    BoundSpec,
    EntanglementProfile,
    Family,
    chain_new,
    coefficient_M,
    lemma1_gap,
    tripartite_family,
    tripartite_new,
)
from monogamy.gsd import SchmidtParams, gsd_analytic_measures, make_gsd_state
from monogamy.harness import CampaignConfig
from monogamy.measures import tripartite_measures

from oracles import M_direct, chain_recursion


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[ACCEPT {n}] {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return emit


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _ordering_ok(row):
    _, ylm, fei, tao, new, truth = row
    return (new - tao >= -1e-12 and tao - fei >= -1e-12 and new - ylm >= -1e-12
            and truth - new >= -1e-12)


def test_criterion_01_example1(report):
    lam = (0.5, 0.0, math.sqrt(2) / 2, 0.5, 0.0)
    expected = {"AB": 0.5, "AC": 0.353553390593, "A|BC": 0.707106781187}

    def run():
        return tripartite_measures(make_gsd_state(SchmidtParams(lam)))

    got, dt = _timed(run)
    err = max(abs(got[key] - v) for key, v in expected.items())
    ok = err <= 1e-9 and dt < 1.0
    report(1, ok, f"Example 1 measures AB={got['AB']:.12f} AC={got['AC']:.12f} "
                  f"A|BC={got['A|BC']:.12f} max_err={err:.3e} (tol 1e-9) t={dt:.3f}s")
    assert ok


def test_criterion_02_example2(report):
    lam = (math.sqrt(2) / 3, math.sqrt(2) / 3, math.sqrt(2) / 3, 1 / math.sqrt(6), 1 / math.sqrt(6))
    expected = {"AB": 4 / 9, "AC": 2 * math.sqrt(3) / 9, "A|BC": 2 * math.sqrt(10) / 9}

    def run():
        return tripartite_measures(make_gsd_state(SchmidtParams(lam)), "negativity")

    got, dt = _timed(run)
    err = max(abs(got[key] - v) for key, v in expected.items())
    ok = err <= 1e-9 and dt < 1.0
    report(2, ok, f"Example 2 negativities max_err={err:.3e} (tol 1e-9) t={dt:.3f}s")
    assert ok


def test_criterion_03_figure1(report):
    rows, dt = _timed(lambda: hs.reproduce_figure("fig1", 0.8, (4, 12, 0.05)))
    order = all(_ordering_ok(r) for r in rows)
    new, tao = rows[0][4], rows[0][3]
    spot = abs(new - 0.123281250) <= 5e-10 and abs(tao - 0.121093750) <= 5e-10
    ok = order and spot and len(rows) == 161 and dt < 1.0
    report(3, ok, f"fig1 ordering over {len(rows)} betas={order}; beta=4 NEW={new:.9f} TAO={tao:.9f} t={dt:.3f}s")
    assert ok


def test_criterion_04_figure2(report):
    rows, dt = _timed(lambda: hs.reproduce_figure("fig2", 0.8, (4, 12, 0.05)))
    order = all(_ordering_ok(r) for r in rows)
    new, tao = rows[0][4], rows[0][3]
    # listed spot values are given to seven decimals
    new_ok = abs(new - 0.1175368) <= 5e-8
    tao_ok = abs(tao - 0.1156446) <= 5e-8
    ok = order and new_ok and tao_ok and dt < 1.0
    report(4, ok, f"fig2 ordering={order}; beta=4 NEW={new:.7f} (listed 0.1175368, ok={new_ok}) "
                  f"TAO={tao:.7f} (listed 0.1156446, ok={tao_ok}) t={dt:.3f}s")
    assert ok


def test_criterion_05_lemma_scan(report):
    res, dt = _timed(lambda: hs.run_lemma_scan(CampaignConfig(x_grid=(2, 12, 0.1), t_points=101),
                                               k_grid=(0.01, 1.0, 0.01)))
    # endpoints checked independently of the campaign bookkeeping
    xs = np.array(hs.grid((2, 12, 0.1)))
    ks = np.array(hs.grid((0.01, 1.0, 0.01)))
    ends = max(float(np.max(np.abs(lemma1_gap(np.array([0.0, k]), k, xs[:, None])))) for k in ks)
    ok = res.violations == 0 and res.min_slack >= -1e-12 and ends <= 1e-12 and dt < 30
    report(5, ok, f"Lemma 1 grid: {res.checked} points, violations={res.violations}, "
                  f"min_gap={res.min_slack:.3e}, endpoint max|gap|={ends:.3e} t={dt:.2f}s")
    assert ok


def test_criterion_06_coefficient_collapse(report):
    betas = hs.grid((4, 12, 0.05))
    ks = hs.grid((0.01, 1.0, 0.01))
    collapse = max(abs(coefficient_M(1.0, b) - 2 ** (b / 2)) for b in betas)
    floor = min(coefficient_M(k, b) - 2 ** (b / 2) for k in ks for b in betas)
    oracle = max(abs(coefficient_M(k, b) - M_direct(k, b)) / M_direct(k, b) for k in ks for b in betas)
    ok = collapse <= 1e-12 and floor >= -1e-12 and oracle <= 1e-13
    report(6, ok, f"max|M(1,b)-2^(b/2)|={collapse:.3e}, min M(k,b)-2^(b/2)={floor:.3e}")
    assert ok


def test_criterion_07_ckw(report):
    res, dt = _timed(lambda: hs.run_ckw_campaign(CampaignConfig(seed=7, sample_count=1000, tolerance=1e-9)))
    ok = res.checked == 1000 and res.violations == 0 and dt < 10
    report(7, ok, f"CKW on 1000 Haar states: violations={res.violations}, "
                  f"min_slack={res.min_slack:.3e} t={dt:.2f}s")
    assert ok


def test_criterion_08_validity(report):
    cfg = CampaignConfig(seed=8, sample_count=1000, betas=(4, 6, 8), ks=(0.2, 0.5, 0.8, 1.0), tolerance=1e-9)
    res, dt = _timed(lambda: hs.run_bound_validity(cfg, Family.NEW))
    ok = res.violations == 0 and res.checked > 0 and dt < 30
    report(8, ok, f"NEW validity on 1000 GSD states: {res.checked} checks, violations={res.violations}, "
                  f"min_slack={res.min_slack:.3e} t={dt:.2f}s")
    assert ok


def test_criterion_09_chain_oracle(report):
    def run():
        rng = np.random.default_rng(9)
        worst = 0.0
        for n in (4, 5, 6):
            for _ in range(200):
                k = float(rng.uniform(0.05, 1.0))
                beta = float(rng.uniform(4, 12))
                prof, m = hs.random_feasible_profile(rng, n, k)
                val = chain_new(prof, BoundSpec(Family.NEW, beta, k, m)).value
                worst = max(worst, abs(val - chain_recursion(prof.pairwise, prof.tails, M_direct(k, beta), beta, m)))
        exact = True
        for _ in range(200):
            e_ab, e_ac = rng.uniform(0.01, 1, 2)
            k, beta = float(rng.uniform(0.05, 1)), float(rng.uniform(4, 12))
            prof = EntanglementProfile.tripartite(e_ab, e_ac)
            exact &= chain_new(prof, BoundSpec(Family.NEW, beta, k, 1)).value == tripartite_new(e_ab, e_ac, k, beta).value
        return worst, exact

    (worst, exact), dt = _timed(run)
    ok = worst <= 1e-12 and exact and dt < 5
    report(9, ok, f"chain vs recursion max|diff|={worst:.3e} (tol 1e-12); N=3 exact={exact} t={dt:.2f}s")
    assert ok


def test_criterion_10_determinism(report, tmp_path):
    def cli(*args):
        return subprocess.run([sys.executable, "-m", "monogamy", *args], capture_output=True, check=False)

    blobs = {"reproduce": [], "campaign": []}
    for i, workers in enumerate(("1", "3")):
        fig = tmp_path / "fig1.csv"
        camp = tmp_path / "dominance.json"
        r1 = cli("reproduce", "fig1", "--out", str(fig))
        r2 = cli("campaign", "--kind", "dominance", "--seed", "10", "--samples", "100",
                 "--beta-grid", "4,12,1", "--workers", workers, "--out", str(camp))
        assert r1.returncode == 0 and r2.returncode == 0
        blobs["reproduce"].append(fig.read_bytes())
        blobs["campaign"].append(camp.read_bytes())
    ok = all(v[0] == v[1] and v[0] for v in blobs.values())
    report(10, ok, f"byte-identical reproduce fig1={blobs['reproduce'][0] == blobs['reproduce'][1]}, "
                   f"campaign (1 vs 3 workers)={blobs['campaign'][0] == blobs['campaign'][1]}")
    assert ok


def test_spot_value_oracles():
    """Independent arithmetic behind criteria 3 and 4, kept next to them for audit."""
    assert tripartite_new(0.5, 1 / (2 * math.sqrt(2)), 0.8, 4).value == pytest.approx(1 / 16 + 3.89 / 64, abs=1e-15)
    e_ab, e_ac = 4 / 9, 2 * math.sqrt(3) / 9
    tao = tripartite_family(e_ab, e_ac, BoundSpec(Family.TAO, 4)).value
    assert tao == pytest.approx((4 / 9) ** 4 + (4 - 9 / 16) * (2 * math.sqrt(3) / 9) ** 4, abs=1e-15)
    g = gsd_analytic_measures(SchmidtParams((0.5, 0.0, math.sqrt(2) / 2, 0.5, 0.0)))
    assert (g.ab, g.ac, g.a_bc) == pytest.approx((math.sqrt(2) / 2, 0.5, math.sqrt(3) / 2), abs=1e-15)
