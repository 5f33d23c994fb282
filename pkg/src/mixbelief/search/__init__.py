from .expectiminimax import Expectiminimax
from .ismcts import Ismcts, IsmctsReport
from .pimc import Pimc, PimcReport

ALGORITHMS = {"pimc": Pimc, "ismcts": Ismcts}


def make_searcher(name: str, game, budget: int = 1000, **kwargs):
    try:
        cls = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}") from None
    return cls(game, budget=budget, **kwargs)


__all__ = ["ALGORITHMS", "Expectiminimax", "Ismcts", "IsmctsReport", "Pimc", "PimcReport", "make_searcher"]
