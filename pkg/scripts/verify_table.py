"""Evaluate every table row on a set of finite groups along independent routes.

Run:  python3 scripts/verify_table.py --groups z2,z3,z4,klein,s3
"""

from dataclasses import asdict, dataclass

from _common import parse_config, write_json
from frlim import frceval
from frlim.freegrp import cyclic, klein_four, symmetric3

GROUPS = {
    "z2": lambda: cyclic(2),
    "z3": lambda: cyclic(3),
    "z4": lambda: cyclic(4),
    "z6": lambda: cyclic(6),
    "klein": klein_four,
    "s3": symmetric3,
}


@dataclass
class TableConfig:
    groups: tuple = ("z2", "z3", "z4", "klein", "s3")
    max_lim: int = 4
    degrees: tuple = ("4", "5", "6")
    no_game_chain: bool = False
    out: str = "-"


def main(cfg):
    unknown = [g for g in cfg.groups if g not in GROUPS]
    if unknown:
        raise SystemExit(f"unknown groups {unknown}; choose from {sorted(GROUPS)}")
    report = frceval.verify_table([GROUPS[g]() for g in cfg.groups], max_lim=cfg.max_lim,
                                  game_degrees=tuple(int(N) for N in cfg.degrees),
                                  game_chain=not cfg.no_game_chain)
    return {"config": asdict(cfg), "summary": frceval.summarize(report), "cells": report}


if __name__ == "__main__":
    cfg = parse_config(TableConfig, __doc__.splitlines()[0])
    write_json(main(cfg), cfg.out)
