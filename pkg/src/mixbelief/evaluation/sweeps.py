"""Lambda sweeps that stabilise policies and score them.

Policies are cached per (algorithm, seat, resolved schedule), so a heatmap
diagonal reuses the single-lambda policies and the same seed always gives the
same numbers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from ..belief import LambdaSchedule
from ..fosg import Game
from ..policy import StabilizationConfig, StabilizedPolicy, stabilize
from ..search import make_searcher
from .best_response import best_response_value
from .matches import play_matches
from .tssr import tssr_evaluate


def lambda_grid(start: float, stop: float, step: float) -> list[float]:
    n = int(round((stop - start) / step))
    return [round(start + k * step, 10) for k in range(n + 1)]


@dataclass
class Experiment:
    game: Game
    algorithm: str = "pimc"
    budget: int = 1000
    seed: int = 0
    stabilization: StabilizationConfig = field(default_factory=StabilizationConfig)
    workers: int = 1
    produced: dict[str, StabilizedPolicy] = field(default_factory=dict)

    def __post_init__(self):
        self._deciders = {}
        self._cache: dict[tuple, StabilizedPolicy] = {}

    def decider(self, algorithm: str):
        d = self._deciders.get(algorithm)
        if d is None:
            d = self._deciders[algorithm] = make_searcher(algorithm, self.game, self.budget)
        return d

    def policy(self, seat: int, schedule: LambdaSchedule, algorithm: str | None = None) -> StabilizedPolicy:
        algorithm = algorithm or self.algorithm
        resolved = tuple(schedule.at(k) for k in range(self.game.max_depth + 1))
        key = (algorithm, seat, resolved)
        sp = self._cache.get(key)
        if sp is None:
            sp = stabilize(self.decider(algorithm), seat, schedule, self.seed, self.stabilization, self.workers)
            self._cache[key] = sp
            self.produced[f"{algorithm}_seat{seat}_lam{schedule}"] = sp
        return sp


def tssr_sweep(exp: Experiment, lambdas, seat: int = 0, opponent: str = "same", first_only: bool = False):
    """Rows ``(lambda, avg_tssr, ci)``.  ``opponent`` is ``same`` or an algorithm name played at lambda 0."""
    rows = []
    for lam in lambdas:
        sched = LambdaSchedule.constant(lam)
        pol = exp.policy(seat, sched).policy
        if opponent == "same":
            opp = exp.policy(1 - seat, sched).policy
        else:
            opp = exp.policy(1 - seat, LambdaSchedule.constant(0.0), opponent).policy
        rep = tssr_evaluate(pol, opp, exp.game, first_only)
        rows.append((lam, rep.average, rep.ci))
    return rows


def exploit_sweep(exp: Experiment, lambdas, seat: int = 0):
    """Rows ``(lambda, br_utility)`` for the responder in the other seat."""
    return [(lam, best_response_value(exp.policy(seat, LambdaSchedule.constant(lam)).policy, exp.game).utility) for lam in lambdas]


def heatmap_sweep(exp: Experiment, grid0, grid1, seat: int = 0):
    """Rows ``(lambda0, lambda1, br_utility)``; the schedule is ``[lambda0, lambda1]`` then ``lambda1``."""
    rows = []
    for l0 in grid0:
        for l1 in grid1:
            sp = exp.policy(seat, LambdaSchedule((l0, l1)))
            rows.append((l0, l1, best_response_value(sp.policy, exp.game).utility))
    return rows


def match_sweep(
    exp: Experiment,
    lambdas,
    seat: int = 0,
    n_games: int = 1000,
    opponent: str = "pimc",
    opponent_lambda: float = 0.0,
    draw_weight: float = 0.5,
):
    """Rows ``(lambda, win_rate, ci_halfwidth)`` against a fixed opponent policy."""
    opp = exp.policy(1 - seat, LambdaSchedule.constant(opponent_lambda), opponent).policy
    rows = []
    for lam in lambdas:
        pol = exp.policy(seat, LambdaSchedule.constant(lam)).policy
        rep = play_matches(pol, opp, exp.game, n_games, exp.seed, draw_weight)
        rows.append((lam, rep.win_rate, rep.ci_halfwidth))
    return rows


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


CSV_HEADERS = {
    "tssr": ("lambda", "avg_tssr", "ci"),
    "exploit": ("lambda", "br_utility"),
    "heatmap": ("lambda0", "lambda1", "br_utility"),
    "match": ("lambda", "win_rate", "ci_halfwidth"),
}
