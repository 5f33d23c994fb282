"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even when
output is captured) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import logging
import time

import numpy as np
import pytest

from mixbelief import make_game
from mixbelief.belief import BeliefModel, LambdaSchedule
from mixbelief.cli import main as cli_main
from mixbelief.evaluation import Experiment, exploit_sweep, heatmap_sweep, lambda_grid, match_sweep, tssr_evaluate, tssr_sweep
from mixbelief.policy import uniform_policy
from mixbelief.search import Expectiminimax, Pimc
from mixbelief.tree import game_tree

from oracles import brute_force_br, direct_pimc_scores, lp_best_response, minimax_value
from test_eval import public_constant_policy, random_policy, revealing_policy
from test_fosg import random_playout

EXACT = 1e-12
ORACLE_TOL = 1e-9
TSSR_TOL = 1e-9
BUDGET = 1000
SEED = 0
TSSR_GRID = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
FULL_GRID = lambda_grid(0.0, 1.0, 0.1)
INTERIOR = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
MATCH_GRID = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
N_GAMES = 1000

log = logging.getLogger("acceptance")


@pytest.fixture
def say(capsys):
    def emit(criterion: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")

    return emit


class Lab:
    """Experiments shared across criteria so each policy is stabilised once."""

    def __init__(self):
        self.games = {
            "LD 1x2": make_game("liars_dice", faces=2),
            "LD 1x3": make_game("liars_dice", faces=3),
            "Leduc": make_game("leduc"),
        }
        self.exps: dict[tuple[str, str], Experiment] = {}

    def exp(self, game: str, algorithm: str) -> Experiment:
        key = (game, algorithm)
        if key not in self.exps:
            self.exps[key] = Experiment(self.games[game], algorithm, BUDGET, SEED)
        return self.exps[key]


@pytest.fixture(scope="module")
def lab():
    return Lab()


# -- 1 ----------------------------------------------------------------------
def test_c1_belief_identities(say):
    t0 = time.perf_counter()
    ld = make_game("liars_dice", faces=2)
    model = BeliefModel(ld)
    w = {n: ld.replay(a) for n, a in {"w1": [0, 0], "w2": [0, 1], "w3": [1, 1], "w4": [1, 0]}.items()}
    s1 = ld.infostate(w["w1"], 0)
    got = {
        "private": [model.private_belief(s1).mass(w[n]) for n in ("w1", "w2", "w3", "w4")],
        "public": [model.public_belief(s1.public_key).mass(w[n]) for n in ("w1", "w2", "w3", "w4")],
        "mix": [model.mixture_belief(s1, 0.5).mass(w[n]) for n in ("w1", "w2", "w3", "w4")],
    }
    private = model.private_belief(s1)
    own_point = private.marginals[0] == {s1.key: 1.0}
    opp_half = sorted(private.marginals[1].values()) == [0.5, 0.5]
    elapsed = time.perf_counter() - t0
    ok = (
        got["private"] == [0.5, 0.5, 0.0, 0.0]
        and got["public"] == [0.25] * 4
        and got["mix"] == [0.375, 0.375, 0.125, 0.125]
        and own_point
        and opp_half
        and elapsed < 1.0
    )
    say("C1 belief identities", ok, f"{got}, runtime {elapsed:.2f}s")
    assert ok


# -- 2 ----------------------------------------------------------------------
def _decision_infostates(game):
    tree = game_tree(game)
    out = []
    for seat in (0, 1):
        for key in tree.decision_infostates(seat):
            out.append(game.infostate(tree.nodes[tree.by_info[seat][key][0]], seat))
    return out


def test_c2_endpoint_reduction(say):
    t0 = time.perf_counter()
    games = [make_game("liars_dice", faces=2), make_game("leduc"), make_game("trick", cards=6, hidden=2, suits=2)]
    worst = 0.0
    checked = mismatched = 0
    for game in games:
        model = BeliefModel(game)
        pimc = Pimc(game, BUDGET)
        for k, s in enumerate(_decision_infostates(game)):
            for lam, ref in ((0.0, model.private_belief(s)), (1.0, model.public_belief(s.public_key))):
                mix = model.mixture_belief(s, lam)
                if mix.worlds != ref.worlds:
                    worst = np.inf
                else:
                    worst = max(worst, float(np.max(np.abs(mix.masses - ref.masses))))
            seed = [SEED, k]
            ours = pimc.decide(s, LambdaSchedule.constant(0.0), np.random.default_rng(seed)).scores
            direct = direct_pimc_scores(game, s, BUDGET, np.random.default_rng(seed))
            mismatched += ours != {a: v / BUDGET for a, v in direct.items()}
            checked += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= EXACT and mismatched == 0 and elapsed < 60
    say("C2 endpoint reduction", ok, f"{checked} infostates, max endpoint gap {worst:.1e}, PIMC mismatches {mismatched}, {elapsed:.1f}s")
    assert ok


# -- 3 ----------------------------------------------------------------------
def test_c3_oracle_equivalence(say):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    games = [
        make_game("liars_dice", faces=2),
        make_game("liars_dice", faces=3),
        make_game("leduc"),
        make_game("trick", cards=6, hidden=2, suits=2),
        make_game("trick"),
    ]
    emm_bad = emm_checked = 0
    for game in games:
        solver = Expectiminimax(game)
        n = 0
        while n < 100:
            _, states = random_playout(game, rng)
            for w in states:
                if w.player >= 0:
                    emm_bad += solver.value(w, 0) != minimax_value(game, w.payload)
                    n += 1
        emm_checked += n
    br_gap = 0.0
    ld2, ld3 = games[0], games[1]
    for seat in (0, 1):
        for pol in (uniform_policy(ld2, seat), random_policy(ld2, seat, 1), revealing_policy(ld2, seat)):
            from mixbelief.evaluation import best_response_value

            br_gap = max(br_gap, abs(best_response_value(pol, ld2).utility - brute_force_br(ld2, pol, 1 - seat)))
        for pol in (uniform_policy(ld3, seat), random_policy(ld3, seat, 2)):
            br_gap = max(br_gap, abs(best_response_value(pol, ld3).utility - lp_best_response(ld3, pol, 1 - seat)))
    elapsed = time.perf_counter() - t0
    ok = emm_bad == 0 and br_gap <= ORACLE_TOL and elapsed < 300
    say(
        "C3 oracle equivalence",
        ok,
        f"{emm_checked} worlds, {emm_bad} alpha-beta mismatches; BR vs brute force (LD 1x2) and LP (LD 1x3) max gap {br_gap:.1e}; {elapsed:.1f}s",
    )
    assert ok


# -- 4 ----------------------------------------------------------------------
def test_c4_tssr_identities(say):
    ld2, ld3, leduc = make_game("liars_dice", faces=2), make_game("liars_dice", faces=3), make_game("leduc")
    uni = [tssr_evaluate(uniform_policy(g, 0), uniform_policy(g, 1), g).average for g in (ld2, ld3, leduc)]
    pub = [tssr_evaluate(public_constant_policy(g, 0, 3), random_policy(g, 1, 4), g).average for g in (ld3, leduc)]
    rev = tssr_evaluate(revealing_policy(ld2, 0), uniform_policy(ld2, 1), ld2).average
    ok = all(abs(v - 1) <= TSSR_TOL for v in uni + pub) and abs(rev - 2) <= TSSR_TOL
    say("C4 TSSR identities", ok, f"uniform {uni}, public-constant {pub}, revealing {rev}")
    assert ok


# -- 5 ----------------------------------------------------------------------
def _trend(rows):
    vals = [r[1] for r in rows]
    cis = [r[2] for r in rows]
    non_increasing = all(vals[k + 1] <= vals[k] + cis[k] + cis[k + 1] for k in range(len(vals) - 1))
    return non_increasing, vals[0] > 2 * vals[-1]


def test_c5_tssr_trend(say, lab):
    t0 = time.perf_counter()
    rows = tssr_sweep(lab.exp("LD 1x2", "pimc"), TSSR_GRID)
    mono, ratio = _trend(rows)
    elapsed = time.perf_counter() - t0
    ok = mono and ratio and elapsed < 600
    detail = ", ".join(f"{lam}: {v:.4f}+-{ci:.4f}" for lam, v, ci in rows)
    say("C5 TSSR trend (LD 1x2, PIMC)", ok, f"{detail}; non-increasing {mono}; TSSR(0) > 2 TSSR(1) {ratio}; {elapsed:.0f}s")
    assert ok


def test_c5_supplementary_three_faces(say, lab):
    rows = tssr_sweep(lab.exp("LD 1x3", "pimc"), TSSR_GRID)
    mono, ratio = _trend(rows)
    detail = ", ".join(f"{lam}: {v:.4f}+-{ci:.4f}" for lam, v, ci in rows)
    say("C5 supplementary (LD 1x3, PIMC)", mono and ratio, f"{detail}; non-increasing {mono}; TSSR(0) > 2 TSSR(1) {ratio}")
    assert mono and ratio


# -- 6 ----------------------------------------------------------------------
C6_PAIRS = [
    ("LD 1x2", "pimc", FULL_GRID),
    ("LD 1x3", "pimc", FULL_GRID),
    ("Leduc", "pimc", [0.0, 1.0]),
    ("LD 1x2", "ismcts", [0.0, 1.0]),
    ("Leduc", "ismcts", [0.0, 1.0]),
]


def test_c6_exploitability_endpoints(say, lab):
    results = []
    ok = True
    for game, alg, grid in C6_PAIRS:
        vals = dict(exploit_sweep(lab.exp(game, alg), grid))
        endpoint = vals[0.0] < vals[1.0]
        line = f"{game}/{alg} BR(0)={vals[0.0]:.4f} BR(1)={vals[1.0]:.4f} {'<' if endpoint else 'not <'}"
        pair_ok = endpoint
        if alg == "pimc" and game.startswith("LD"):
            best = min(vals[l] for l in INTERIOR)
            interior = best <= min(vals[0.0], vals[1.0])
            line += f", best interior {best:.4f} {'<=' if interior else '>'} endpoints"
            pair_ok = pair_ok and interior
        ok = ok and pair_ok
        results.append(line)
    say("C6 exploitability endpoints", ok, "; ".join(results))
    assert ok


# -- 7 ----------------------------------------------------------------------
def test_c7_heatmap_asymmetry(say, lab):
    cells = {(a, b): v for a, b, v in heatmap_sweep(lab.exp("Leduc", "ismcts"), [0.0, 1.0], [0.0, 1.0])}
    ok = cells[(0.0, 1.0)] < cells[(1.0, 0.0)]
    say("C7 heatmap asymmetry (Leduc, IS-MCTS)", ok, f"{{0,1}}={cells[(0.0, 1.0)]:.4f} vs {{1,0}}={cells[(1.0, 0.0)]:.4f}; all cells {cells}")
    assert ok


# -- 8 ----------------------------------------------------------------------
def test_c8_win_rate_robustness(say, lab):
    rows = match_sweep(lab.exp("LD 1x3", "pimc"), MATCH_GRID + [1.0], n_games=N_GAMES)
    p = {lam: (wr, ci) for lam, wr, ci in rows}
    mutual = all(abs(p[a][0] - p[b][0]) <= p[a][1] + p[b][1] for a in MATCH_GRID for b in MATCH_GRID)
    worse = p[0.0][0] - p[1.0][0] > p[0.0][1] + p[1.0][1]
    ok = mutual and worse
    detail = ", ".join(f"{lam}: {wr:.3f}+-{ci:.3f}" for lam, wr, ci in rows)
    say("C8 win-rate robustness (LD 1x3, PIMC vs lambda-0 PIMC)", ok, f"{detail}; 0..0.5 mutually within CI {mutual}; lambda 1 significantly worse {worse}")
    assert ok


# -- 9 ----------------------------------------------------------------------
def test_c9_stabilization(say, lab):
    produced = [(f"{g}/{a}/{name}", sp) for (g, a), exp in lab.exps.items() for name, sp in exp.produced.items()]
    for name, sp in produced:
        log.info("%s converged after %d batches, variation %.5f", name, sp.batches, sp.variation)
    ok = bool(produced) and all(sp.variation < 0.01 and sp.batches <= 200 for _, sp in produced)
    worst = max(produced, key=lambda x: x[1].batches)
    say("C9 stabilization", ok, f"{len(produced)} policies converged; most batches {worst[1].batches} ({worst[0]}); max variation {max(sp.variation for _, sp in produced):.5f}")
    assert ok


# -- 10 ---------------------------------------------------------------------
def test_c10_reproducibility(say, tmp_path):
    runs = {
        "exploit": ["exploit", "--faces", "3", "--lambdas", "0:1:0.1"],
        "tssr": ["tssr", "--faces", "2", "--lambdas", "0,0.6,1"],
        "heatmap": ["heatmap", "--algorithm", "ismcts", "--lambda0s", "0,1", "--lambda1s", "0,1"],
        "match": ["match", "--faces", "3", "--lambdas", "0,1", "--n-games", "500"],
    }
    same = {}
    for name, args in runs.items():
        blobs = []
        for k, workers in enumerate((1, 1, 2)):
            out = tmp_path / f"{name}{k}" / f"{name}.csv"
            assert cli_main(args + ["--workers", str(workers), "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        same[name] = blobs[0] == blobs[1] == blobs[2]
    ok = all(same.values())
    say("C10 reproducibility", ok, f"byte-identical across reruns and 1 vs 2 workers: {same}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
