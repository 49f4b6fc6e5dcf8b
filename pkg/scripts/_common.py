"""Shared plumbing for the research scripts."""

import argparse
import dataclasses
import json
import sys


def parse_config(cls, description):
    """Build an argparse front end from a dataclass of scalar fields."""
    p = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            p.add_argument(flag, action="store_true", default=default)
        elif isinstance(default, tuple):
            p.add_argument(flag, default=",".join(map(str, default)))
        else:
            p.add_argument(flag, type=type(default), default=default)
    ns = vars(p.parse_args())
    for f in dataclasses.fields(cls):
        if isinstance(f.default, tuple):
            ns[f.name] = tuple(x.strip() for x in ns[f.name].split(",") if x.strip())
    return cls(**ns)


def write_json(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path in ("", "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
