"""Exact best response against a fixed tabular policy.

Counterfactual reach of a history for the responder is its chance reach times
the evaluated seat's action probabilities along the path.  At a responder
infostate the chosen action maximises the counterfactual-reach-weighted sum of
child values; ties go to the lowest action id.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from ..fosg import CHANCE, TERMINAL, Game
from ..policy import TabularPolicy
from ..tree import GameTree, game_tree


@dataclass
class BestResponseReport:
    responder: int
    utility: float
    actions: dict[str, int]


def policy_reach(tree: GameTree, policies: dict[int, TabularPolicy]) -> np.ndarray:
    """Reach of every history under chance and the given seats' policies.

    Seats without an entry in ``policies`` contribute a factor of one.
    """
    reach = np.empty(len(tree))
    reach[0] = 1.0
    for idx, w in enumerate(tree.nodes):
        if w.player == TERMINAL:
            continue
        pol = policies.get(w.player)
        row = pol.row(w.info_keys[w.player]) if pol is not None else None
        for a, c, p in tree.children[idx]:
            if w.player == CHANCE:
                reach[c] = reach[idx] * p
            elif row is not None:
                acts, probs = row
                reach[c] = reach[idx] * probs[acts.index(a)]
            else:
                reach[c] = reach[idx]
    return reach


def best_response_value(policy: TabularPolicy, game: Game, responder: int | None = None) -> BestResponseReport:
    tree = game_tree(game)
    seat = policy.seat
    if responder is None:
        responder = 1 - seat
    if responder == seat:
        raise ValueError("the responder must be the other seat")
    cf = policy_reach(tree, {seat: policy})
    value = np.full(len(tree), np.nan)
    choice: dict[str, int] = {}

    def best(key: str) -> int:
        a = choice.get(key)
        if a is None:
            members = tree.by_info[responder][key]
            totals: dict[int, float] = {}
            for h in members:
                if tree.nodes[h].player != responder:
                    continue
                for act, c, _ in tree.children[h]:
                    totals[act] = totals.get(act, 0.0) + cf[h] * node_value(c)
            a = max(sorted(totals), key=lambda x: (totals[x], -x))
            choice[key] = a
        return a

    def node_value(idx: int) -> float:
        v = value[idx]
        if v == v:
            return v
        w = tree.nodes[idx]
        kids = tree.children[idx]
        if w.player == TERMINAL:
            v = game.returns(w)[responder]
        elif w.player == CHANCE:
            v = sum(p * node_value(c) for _, c, p in kids)
        elif w.player == seat:
            acts, probs = policy.row(w.info_keys[seat])
            v = sum(probs[acts.index(a)] * node_value(c) for a, c, _ in kids)
        else:
            a = best(w.info_keys[responder])
            v = node_value(next(c for act, c, _ in kids if act == a))
        value[idx] = v
        return v

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        root = node_value(0)
        for key in tree.decision_infostates(responder):
            best(key)
    finally:
        sys.setrecursionlimit(limit)
    return BestResponseReport(responder, float(root), choice)


def expected_utility(game: Game, policies: dict[int, TabularPolicy], seat: int) -> float:
    """Exact expected utility for ``seat`` when both seats follow ``policies``."""
    tree = game_tree(game)
    reach = policy_reach(tree, policies)
    total = 0.0
    for idx, w in enumerate(tree.nodes):
        if w.player == TERMINAL and reach[idx] > 0:
            total += reach[idx] * game.returns(w)[seat]
    return total
