"""Sweep the truncation degree N for consecutive game generations.

For each group the quotient gen_i / gen_{i+1} is computed inside Z[F]/f^N
for every N in the range, next to the homology group it should stabilize to.

Run:  python3 scripts/stabilization_sweep.py --n-min 3 --n-max 7
"""

from dataclasses import asdict, dataclass

from _common import parse_config, write_json
from frlim import frceval, magnus
from frlim.freegrp import cyclic, klein_four, symmetric3
from frlim.gruenberg import group_homology

GROUPS = {"z2": lambda: cyclic(2), "z4": lambda: cyclic(4),
          "klein": klein_four, "s3": symmetric3}


@dataclass
class SweepConfig:
    groups: tuple = ("z2", "z4", "klein", "s3")
    n_min: int = 3
    n_max: int = 7
    out: str = "-"


def main(cfg):
    rows = []
    chain = frceval.GAME_CHAIN
    for name in cfg.groups:
        P = GROUPS[name]()
        for i, (upper, lower) in enumerate(zip(chain, chain[1:])):
            target = group_homology(P, i + 2)
            q = magnus.generation_quotient(upper, lower, P, range(cfg.n_min, cfg.n_max + 1))
            values = {N: str(g) for N, g in q.values.items()}
            rows.append({"group": name, "quotient": f"{'+'.join(upper)} / {'+'.join(lower)}",
                         "homology_degree": i + 2, "homology": str(target),
                         "by_degree": values, "stable": q.stable,
                         "matches_homology": q.stable and q.value == target})
    return {"config": asdict(cfg), "rows": rows}


if __name__ == "__main__":
    cfg = parse_config(SweepConfig, __doc__.splitlines()[0])
    write_json(main(cfg), cfg.out)
