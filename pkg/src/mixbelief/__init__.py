"""Determinization search (PIMC, IS-MCTS) over private, public and mixture beliefs."""

from .fosg import CHANCE, TERMINAL, Game, GameError, Infostate, Observation, WorldState
from .games import Leduc, LiarsDice, TrickGame, make_game

__version__ = "0.1.0"
