from .best_response import BestResponseReport, best_response_value, expected_utility, policy_reach
from .matches import MatchReport, play_game, play_matches
from .sweeps import (
    CSV_HEADERS,
    Experiment,
    exploit_sweep,
    heatmap_sweep,
    lambda_grid,
    match_sweep,
    tssr_sweep,
    write_csv,
)
from .tssr import TssrRecord, TssrReport, tssr_evaluate, weighted_mean_ci

__all__ = [
    "BestResponseReport",
    "CSV_HEADERS",
    "Experiment",
    "MatchReport",
    "TssrRecord",
    "TssrReport",
    "best_response_value",
    "expected_utility",
    "exploit_sweep",
    "heatmap_sweep",
    "lambda_grid",
    "match_sweep",
    "play_game",
    "play_matches",
    "policy_reach",
    "tssr_evaluate",
    "tssr_sweep",
    "weighted_mean_ci",
    "write_csv",
]
