"""Head-to-head simulation between two tabular policies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fosg import CHANCE, TERMINAL, Game, GameError
from ..policy import TabularPolicy


@dataclass
class MatchReport:
    games: int
    wins: int
    draws: int
    losses: int
    draw_weight: float = 0.5

    @property
    def win_rate(self) -> float:
        return (self.wins + self.draw_weight * self.draws) / self.games

    @property
    def ci_halfwidth(self) -> float:
        p = self.win_rate
        return 1.96 * math.sqrt(p * (1.0 - p) / self.games)


def play_game(game: Game, policies: dict[int, TabularPolicy], rng: np.random.Generator) -> tuple[float, float]:
    w = game.initial_state()
    while w.player != TERMINAL:
        if w.player == CHANCE:
            outcomes = game.chance_outcomes(w)
            probs = np.array([p for _, p in outcomes])
            a = outcomes[int(rng.choice(len(outcomes), p=probs / probs.sum()))][0]
        else:
            actions, probs = policies[w.player].row(w.info_keys[w.player])
            a = actions[int(rng.choice(len(actions), p=probs / probs.sum()))]
        w = game.child(w, a)
    return game.returns(w)


def play_matches(
    policy_a: TabularPolicy,
    policy_b: TabularPolicy,
    game: Game,
    n_games: int,
    seed: int,
    draw_weight: float = 0.5,
) -> MatchReport:
    """``policy_a`` keeps its own seat for every game; game ``g`` uses stream ``(seed, g)``."""
    if policy_a.seat == policy_b.seat:
        raise GameError("the two policies must sit in different seats")
    if n_games < 1:
        raise GameError("need at least one game")
    seats = {policy_a.seat: policy_a, policy_b.seat: policy_b}
    wins = draws = losses = 0
    for g in range(n_games):
        u = play_game(game, seats, np.random.default_rng([seed, g]))[policy_a.seat]
        if u > 0:
            wins += 1
        elif u < 0:
            losses += 1
        else:
            draws += 1
    return MatchReport(n_games, wins, draws, losses, draw_weight)
