"""Perfect Information Monte Carlo over a mixture belief.

Sampled worlds are routed to the score table of the acting seat's infostate
in that world.  With a private belief every sample lands in the true
infostate's table and the decider is plain PIMC; otherwise the tables of all
sibling infostates are merged, weighted by how often each was visited.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..belief import BeliefModel, LambdaSchedule, sample_indices
from ..fosg import Game, GameError, Infostate
from .expectiminimax import Expectiminimax


@dataclass
class ScoreTable:
    visits: int = 0
    sums: dict[int, float] = field(default_factory=dict)
    counts: dict[int, int] = field(default_factory=dict)

    def mean(self, a: int) -> float:
        return self.sums[a] / self.counts[a]


@dataclass
class PimcReport:
    infostate: Infostate
    lam: float
    tables: dict[str, ScoreTable]
    scores: dict[int, float]
    recommended: int

    @property
    def total_visits(self) -> int:
        return sum(t.visits for t in self.tables.values())

    def visit_shares(self) -> dict[str, float]:
        total = self.total_visits
        return {k: t.visits / total for k, t in self.tables.items()}


def aggregate_scores(tables: dict[str, ScoreTable], actions: tuple[int, ...]) -> dict[int, float]:
    """Visit-weighted mean score per action, renormalised over tables where the action was legal."""
    scores = {}
    for a in actions:
        rows = [t for t in tables.values() if t.counts.get(a)]
        weight = sum(t.visits for t in rows)
        if weight == 0:
            continue
        scores[a] = sum((t.visits / weight) * t.mean(a) for t in rows)
    return scores


def best_action(scores: dict[int, float]) -> int:
    best = None
    for a in sorted(scores):
        if best is None or scores[a] > scores[best]:
            best = a
    if best is None:
        raise GameError("no scored action")
    return best


class Pimc:
    """PIMC decider.  ``budget`` is the number of sampled worlds per decision."""

    name = "pimc"

    def __init__(self, game: Game, budget: int = 1000, beliefs: BeliefModel | None = None):
        if budget < 1:
            raise GameError("budget must be at least 1")
        self.game = game
        self.budget = budget
        self.beliefs = beliefs or BeliefModel(game)
        self.evaluator = Expectiminimax(game)
        self._values: dict = {}

    def world_values(self, w) -> dict[int, float]:
        """Perfect-information value of every legal action in ``w`` for the seat to act."""
        vals = self._values.get(w.payload)
        if vals is None:
            vals = self._values[w.payload] = self.evaluator.action_values(w, w.player)
        return vals

    def decide(self, s: Infostate, schedule: LambdaSchedule, rng: np.random.Generator) -> PimcReport:
        lam = schedule.at(s.decision_index)
        belief = self.beliefs.mixture_belief(s, lam)
        counts = np.bincount(sample_indices(belief, rng, self.budget), minlength=len(belief))
        tables: dict[str, ScoreTable] = {}
        for idx in np.flatnonzero(counts):
            w = belief.worlds[idx]
            n = int(counts[idx])
            table = tables.setdefault(w.info_keys[s.seat], ScoreTable())
            table.visits += n
            # every value is a dyadic rational here, so n * v equals n repeated additions
            for a, v in self.world_values(w).items():
                table.sums[a] = table.sums.get(a, 0.0) + n * v
                table.counts[a] = table.counts.get(a, 0) + n
        own_world = next(w for w in belief.worlds if w.info_keys[s.seat] == s.key)
        own_actions = self.game._legal(own_world.payload)
        scores = aggregate_scores(tables, own_actions)
        return PimcReport(s, lam, tables, scores, best_action(scores))

    def policy_row(self, report: PimcReport, actions: tuple[int, ...]) -> np.ndarray:
        row = np.zeros(len(actions))
        row[actions.index(report.recommended)] = 1.0
        return row
