"""Recompute the published intersection games and certify every discrepancy.

Run:  python3 scripts/game_discrepancies.py --max-degree 8 --out report.json
"""

import time
from dataclasses import asdict, dataclass

from _common import parse_config, write_json
from frlim import frlang, magnus
from frlim.freegrp import Presentation


@dataclass
class GameConfig:
    max_degree: int = 8
    generations: int = 5
    out: str = "-"


def main(cfg):
    P = Presentation.from_strings(["x", "y"], ["x^2"])
    games = []
    for origin, published in frlang.PUBLISHED_GAMES.items():
        t = time.perf_counter()
        report = magnus.game_report(origin, published[: cfg.generations], P, cfg.max_degree)
        report["seconds"] = round(time.perf_counter() - t, 2)
        games.append(report)
    return {"config": asdict(cfg), "games": games}


if __name__ == "__main__":
    cfg = parse_config(GameConfig, __doc__.splitlines()[0])
    write_json(main(cfg), cfg.out)
