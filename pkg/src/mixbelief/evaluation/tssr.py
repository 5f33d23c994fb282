"""True State Sampling Ratio.

At each decision node of the opponent, the opponent's Bayesian posterior over
the evaluated seat's infostates is formed from chance priors and the evaluated
policy's action probabilities.  TSSR there is the posterior mass on the true
infostate times the number of candidates, so a value of one means the policy
leaked nothing beyond uniform guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fosg import TERMINAL, Game, GameError
from ..policy import TabularPolicy
from ..tree import game_tree
from .best_response import policy_reach


@dataclass
class TssrRecord:
    opponent_key: str
    true_key: str
    candidates: int
    eta: float
    tssr: float
    weight: float


@dataclass
class TssrReport:
    records: list[TssrRecord]
    average: float
    ci: float
    schedule: str = ""


def tssr_evaluate(policy: TabularPolicy, opponent: TabularPolicy, game: Game, first_only: bool = False) -> TssrReport:
    """Reach-weighted average TSSR of ``policy`` over the opponent's decision nodes."""
    seat = policy.seat
    opp = opponent.seat
    if opp == seat:
        raise GameError("policy and opponent must belong to different seats")
    tree = game_tree(game)
    own = policy_reach(tree, {seat: policy})  # chance x evaluated-seat likelihood
    full = policy_reach(tree, {seat: policy, opp: opponent})
    posterior_cache: dict[str, tuple[dict[str, float], float]] = {}
    records = []
    for idx, w in enumerate(tree.nodes):
        if w.player != opp or full[idx] <= 0:
            continue
        if first_only and w.decisions[opp] != 0:
            continue
        key = w.info_keys[opp]
        cached = posterior_cache.get(key)
        if cached is None:
            mass: dict[str, float] = {}
            for h in tree.by_info[opp][key]:
                k = tree.nodes[h].info_keys[seat]
                mass[k] = mass.get(k, 0.0) + own[h]
            cached = posterior_cache[key] = (mass, math.fsum(mass.values()))
        mass, total = cached
        true_key = w.info_keys[seat]
        eta = mass[true_key] / total
        records.append(TssrRecord(key, true_key, len(mass), eta, eta * len(mass), float(full[idx])))
    if not records:
        raise GameError("the opponent never acts with positive reach")
    weights = np.array([r.weight for r in records])
    values = np.array([r.tssr for r in records])
    avg, ci = weighted_mean_ci(values, weights)
    return TssrReport(records, avg, ci, str(policy.metadata.get("schedule", "")))


def weighted_mean_ci(values: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    """Weighted mean and a 95% half-width using the Kish effective sample size."""
    wsum = weights.sum()
    mean = float(np.dot(weights, values) / wsum)
    var = float(np.dot(weights, (values - mean) ** 2) / wsum)
    n_eff = wsum**2 / float(np.dot(weights, weights))
    return mean, 1.96 * math.sqrt(var / n_eff)
