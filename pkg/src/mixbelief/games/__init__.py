"""Benchmark games and a name-based factory used by the CLI and policy files."""

from __future__ import annotations

from typing import Any

from ..fosg import Game, GameError
from .leduc import Leduc
from .liars_dice import LiarsDice
from .trick import TrickGame

__all__ = ["Leduc", "LiarsDice", "TrickGame", "make_game", "GAME_PARAMS"]

GAME_PARAMS: dict[str, dict[str, Any]] = {
    "liars_dice": {"dice": 1, "faces": 2},
    "leduc": {},
    "trick": {"cards": 10, "hidden": 2, "suits": 2},
}


def make_game(name: str, **params: Any) -> Game:
    """Build a game from its registry name and parameter map.

    >>> make_game("liars_dice", faces=3).describe()
    'liars_dice(dice=1,faces=3)'
    """
    if name not in GAME_PARAMS:
        raise GameError(f"unknown game {name!r}; expected one of {sorted(GAME_PARAMS)}")
    unknown = set(params) - set(GAME_PARAMS[name])
    if unknown:
        raise GameError(f"unknown parameters for {name}: {sorted(unknown)}")
    merged = {**GAME_PARAMS[name], **params}
    if name == "liars_dice":
        return LiarsDice(dice_per_player=int(merged["dice"]), faces=int(merged["faces"]))
    if name == "trick":
        return TrickGame(int(merged["cards"]), int(merged["hidden"]), int(merged["suits"]))
    return Leduc()
