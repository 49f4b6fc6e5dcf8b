"""Command-line front end.

Exit codes: 0 success, 1 computation error (or failed verification),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import catlim, frceval, frlang, gruenberg, magnus
from .exactalg import AbGroup
from .freegrp import Presentation


class UsageError(Exception):
    pass


@dataclass
class Config:
    degrees: tuple = (4, 5, 6)
    coset_bound: int = 10_000
    max_degree: int = 12
    fmt: str = "text"
    seed: int = 0
    threads: int = field(default_factory=lambda: int(os.environ.get("FRLIM_THREADS", "1") or 1))

    def __post_init__(self):
        self.degrees = tuple(self.degrees)
        if not self.degrees or any(N < 1 for N in self.degrees):
            raise UsageError("truncation degrees must be positive")
        if list(self.degrees) != sorted(self.degrees):
            raise UsageError("truncation degrees must be ascending")
        if self.coset_bound < 1 or self.max_degree < 1 or self.threads < 1:
            raise UsageError("bounds must be positive")
        if self.fmt not in ("text", "json"):
            raise UsageError("format must be text or json")


_GROUP_RE = re.compile(r"^(Z|Z\^\d+|Z/\d+|0)$")


def parse_abgroup(text):
    """``"Z^2 + Z/2"``, ``"Z/4"``, ``"0"`` and the like."""
    rank, orders = 0, []
    for part in text.replace(" ", "").split("+"):
        if not _GROUP_RE.match(part):
            raise UsageError(f"cannot read abelian group {text!r}")
        if part == "Z":
            rank += 1
        elif part.startswith("Z^"):
            rank += int(part[2:])
        elif part.startswith("Z/"):
            orders.append(int(part[2:]))
    return AbGroup.from_orders(orders, rank)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_presentation(path):
    try:
        return Presentation.from_json(_load_json(path))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{path}: bad presentation: {exc}") from None


def _emit(out, cfg, payload, text):
    if cfg.fmt == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_parse(args, cfg, out):
    node = frlang.parse(args.code)
    words = frlang.expand_sentence(node)
    sentence = list(frlang.normalize(words)) if words is not None else None
    payload = {"ast": frlang.ast_repr(node), "text": str(node), "sentence": sentence}
    lines = [frlang.ast_repr(node)]
    if sentence is not None:
        lines.append("normalized: " + frlang.sentence_str(sentence))
    _emit(out, cfg, payload, "\n".join(lines))
    return 0


def _origin(text):
    words = frlang.expand_sentence(frlang.parse(text))
    if words is None:
        raise UsageError("the origin must be a sum of monomials")
    return frlang.normalize(words)


def cmd_game(args, cfg, out):
    if args.generations < 1:
        raise UsageError("--generations must be at least 1")
    origin = _origin(args.origin)
    gens = frlang.game(origin, args.generations)
    payload = {"origin": list(origin), "generations": [list(g) for g in gens]}
    lines = [f"{k + 1}: {', '.join(g)}" for k, g in enumerate(gens)]
    if args.compare:
        published = next((col for key, col in frlang.PUBLISHED_GAMES.items()
                          if frlang.normalize(key) == origin), None)
        if published is None:
            raise UsageError(f"no published column for origin {', '.join(origin)}")
        P = Presentation.from_strings(["x", "y"], ["x^2"])
        report = magnus.game_report(origin, published[: args.generations], P, args.max_n)
        payload["comparison"] = report
        for row in report["generations"]:
            for mode in ("chain", "from_published"):
                m = row[mode]
                status = "match" if m["match"] else "DIFFERS"
                lines.append(f"gen {row['generation']} [{mode}]: {status}")
                for item in m["missing"]:
                    lines.append(f"  published {item['word']}: {item['reason']}"
                                 f" (certified={item['certified']})")
                for item in m["extra"]:
                    lines.append(f"  computed {item['word']}: {item['reason']}"
                                 f" (certified={item['certified']})")
    _emit(out, cfg, payload, "\n".join(lines))
    return 0


def cmd_homology(args, cfg, out):
    P = _load_presentation(args.presentation)
    if args.degree < 0 or args.degree + 1 > cfg.max_degree:
        raise UsageError(f"--degree must lie in 0..{cfg.max_degree - 1}")
    A = parse_abgroup(args.coefficients) if args.coefficients else None
    H = gruenberg.group_homology(P, args.degree, A, coset_bound=cfg.coset_bound)
    _emit(out, cfg, H.to_json(), str(H))
    return 0


def cmd_eval(args, cfg, out):
    P = _load_presentation(args.presentation)
    code = frceval.FrCode.of(args.code, args.lim)
    fv = frceval.evaluate(code, P)
    lines = [str(fv.group)] + [f"  {p}" for p in fv.provenance]
    lines += [f"  route {name}: {g}" for name, g in fv.routes]
    _emit(out, cfg, fv.to_json(), "\n".join(lines))
    return 0 if fv.agrees else 1


def _verify_one(job):
    P, max_lim, degrees, chain = job
    return frceval.verify_table([P], max_lim=max_lim, game_degrees=degrees, game_chain=chain)


def cmd_verify_table(args, cfg, out):
    groups = [_load_presentation(p) for p in args.presentations]
    jobs = [(P, args.max_lim, cfg.degrees, not args.no_game_chain) for P in groups]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as ex:
            parts = list(ex.map(_verify_one, jobs))
    else:
        parts = [_verify_one(j) for j in jobs]
    report = [cell for part in parts for cell in part]
    counts = frceval.summarize(report)
    lines = []
    for c in report:
        val = str(AbGroup.from_json(c["value"])) if c["value"] is not None else "-"
        lines.append(f"{c['status']:>14}  {c['group']:<10} lim^{c['lim_degree']} "
                     f"{c['code']:<20} {c['expected_tag']:<28} {val}")
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    _emit(out, cfg, report, "\n".join(lines))
    return 1 if counts.get("fail") else 0


def _load_category(obj):
    try:
        return catlim.FiniteCategory.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad category: {exc}") from None


def cmd_catlim(args, cfg, out):
    obj = _load_json(args.category)
    C = _load_category(obj.get("category", obj))
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    if "representation" in obj:
        rep = catlim.Representation.from_json(C, obj["representation"])
        M = None
    else:
        M = parse_abgroup(args.coefficients)
        rep = catlim.Representation.constant(C, M)
    D = args.chain_bound if args.chain_bound is not None else args.n + 2
    if D < args.n + 1:
        raise UsageError("--chain-bound must be at least n + 1")
    lim = catlim.higher_lim(rep, args.n, D)
    payload = {"n": args.n, "lim": lim.to_json()}
    lines = [f"lim^{args.n} = {lim}"]
    if M is not None:
        nerve = catlim.nerve_cohomology(C, M, args.n, D)
        payload["nerve_cohomology"] = nerve.to_json()
        lines.append(f"H^{args.n}(BC; {M}) = {nerve}")
    _emit(out, cfg, payload, "\n".join(lines))
    return 0


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="frlim", description="fr-codes, intersection games and higher limits")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--degrees", default="4,5,6", help="ascending truncation degrees N")
    p.add_argument("--coset-bound", type=int, default=10_000)
    p.add_argument("--max-degree", type=int, default=12, help="resolution degree cap")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("parse", help="show the syntax tree of a code")
    s.add_argument("code")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("game", help="run the intersection game")
    s.add_argument("origin")
    s.add_argument("--generations", type=int, default=5)
    s.add_argument("--compare", action="store_true",
                   help="compare against the published column with Magnus evidence")
    s.add_argument("--max-n", type=int, default=8, help="largest truncation for evidence")
    s.set_defaults(func=cmd_game)

    s = sub.add_parser("homology", help="integral homology of a finite presented group")
    s.add_argument("presentation")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--coefficients", default=None, help='trivial coefficients, e.g. "Z/2"')
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("eval", help="evaluate an fr-code on a group")
    s.add_argument("code")
    s.add_argument("presentation")
    s.add_argument("--lim", type=int, default=1)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("verify-table", help="check the built-in table on groups")
    s.add_argument("presentations", nargs="+")
    s.add_argument("--max-lim", type=int, default=4)
    s.add_argument("--no-game-chain", action="store_true")
    s.set_defaults(func=cmd_verify_table)

    s = sub.add_parser("catlim", help="higher limits over a finite category")
    s.add_argument("category")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--coefficients", default="Z", help="constant value when no representation is given")
    s.add_argument("--chain-bound", type=int, default=None)
    s.set_defaults(func=cmd_catlim)
    return p


def _config(ns):
    try:
        degrees = tuple(int(x) for x in ns.degrees.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad --degrees {ns.degrees!r}") from None
    return Config(degrees, ns.coset_bound, ns.max_degree, ns.format, ns.seed)


COMPUTATION_ERRORS = (ArithmeticError, MemoryError, RuntimeError, ValueError, KeyError)


def run(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    fmt = "text"
    try:
        ns = build_parser().parse_args(argv)
        fmt = ns.format
        if ns.command is None:
            raise UsageError("a subcommand is required")
        cfg = _config(ns)
        return ns.func(ns, cfg, out)
    except UsageError as exc:
        err.write(f"frlim: usage error: {exc}\n")
        return 2
    except frlang.FrSyntaxError as exc:
        err.write(f"frlim: syntax error: {exc}\n")
        return 2
    except COMPUTATION_ERRORS as exc:
        if fmt == "json":
            out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                                 sort_keys=True) + "\n")
        err.write(f"frlim: {type(exc).__name__}: {exc}\n")
        return 1


def main():
    sys.exit(run())
