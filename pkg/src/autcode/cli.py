"""Command line entry point.

    autcode perm --expr '(0 1)' --eval 0
    autcode code2 --set evens --nmax 8
    autcode code3 --pred lt --stages 1600
    autcode gsl --expr 'swapadj' --field GF4 --window 8
    autcode ba --expr '(0 1)' --elem '[-1,1/2)'
    autcode pipeline --set evens --target both
    autcode suite acceptance

Every command prints a report (``--machine`` for key=value records) and
exits 0 only when all of its checks pass.  Settings come from flags, then
``--config FILE`` (``key=value`` lines), then built-in defaults.
"""
from __future__ import annotations

import argparse
import random
import shlex
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import coding_ce, coding_pi2, intalg, permlang, pipeline, suites, vspace
from .errors import AutcodeError
from .fields import get_field
from .permcore import (Window, classify, cycle_profile, eval_at,
                       eval_inverse, window_image)
from .report import Report


@dataclass
class RunConfig:
    window: int = 64
    horizon: int = 200
    stages: int = 1600
    threshold: int = 10
    set: str = "evens"
    pred: str = "always"
    field: str = "Q"
    seed: int = 0
    nmax: int = 8
    family: str = "ce"
    target: str = "both"
    out: Optional[str] = None
    machine: bool = False

    def validate(self):
        for k in ("window", "horizon", "stages", "threshold", "nmax"):
            if getattr(self, k) < 1:
                raise ValueError(f"{k} must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be natural")
        if self.family not in ("ce", "pi2"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.target not in ("gsl", "ba", "both"):
            raise ValueError(f"unknown target {self.target!r}")


_INT_KEYS = {"window", "horizon", "stages", "threshold", "seed", "nmax"}


def read_config(path) -> dict:
    out = {}
    names = {f.name for f in fields(RunConfig)}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or key not in names:
            raise ValueError(f"{path}:{lineno}: bad config line {line!r}")
        if key in _INT_KEYS:
            out[key] = int(val)
        elif key == "machine":
            out[key] = val.lower() in ("1", "true", "yes")
        else:
            out[key] = val
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """flag > config file > default."""
    cfg = RunConfig()
    if args.config:
        for k, v in read_config(args.config).items():
            setattr(cfg, k, v)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and v is not False:
            setattr(cfg, f.name, v)
    cfg.validate()
    return cfg


def resolve_enumerator(spec: str, horizon: int) -> coding_ce.Enumerator:
    if spec.startswith("@"):
        return coding_ce.Enumerator.from_file(spec[1:], horizon)
    return coding_ce.Enumerator.from_rule(spec, horizon)


def vocabulary(cfg: RunConfig) -> permlang.Vocabulary:
    if cfg.family == "ce":
        return permlang.Vocabulary("ce", enumerator=resolve_enumerator(cfg.set, cfg.horizon))
    return permlang.Vocabulary("pi2", predicate=coding_pi2.resolve_predicate(cfg.pred),
                               max_stage=cfg.stages)


def _echo(argv) -> str:
    return "autcode " + shlex.join(argv)


def _map_text(m: dict) -> str:
    return " ".join(f"{k}->{v}" for k, v in sorted(m.items()))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_perm(args, cfg: RunConfig, rep: Report):
    if not args.expr:
        raise ValueError("perm needs --expr")
    e = permlang.parse(args.expr, vocabulary(cfg))
    text = permlang.to_text(e)
    acted = False
    if args.eval is not None:
        rep.add("perm/eval", f"{text} at {args.eval}", "-", eval_at(e, args.eval), True)
        acted = True
    if args.inverse is not None:
        rep.add("perm/inverse", f"{text} at {args.inverse}", "-",
                eval_inverse(e, args.inverse), True)
        acted = True
    if args.image is not None:
        rep.add("perm/image", f"{text} window={args.image}", "-",
                _map_text(window_image(e, Window(args.image))), True)
        acted = True
    if args.profile is not None:
        prof = cycle_profile(e, Window(args.profile))
        counts = " ".join(f"{k}:{v}" for k, v in prof.counts.items())
        rep.add("perm/profile", f"{text} window={args.profile}", "-",
                f"counts={{{counts}}} escapes={prof.escapes}", True)
        acted = True
    if args.classify is not None or not acted:
        n = args.classify or cfg.window
        rep.add("perm/classify", f"{text} window={n} threshold={cfg.threshold}", "-",
                classify(e, Window(n), cfg.threshold), True)


def cmd_code2(args, cfg: RunConfig, rep: Report):
    e = resolve_enumerator(cfg.set, cfg.horizon)
    c = coding_ce.build(e)
    w = Window(args.window) if args.window else None
    for n in range(cfg.nmax):
        v = coding_ce.decode_membership(n, c.scheme, e, w, construction=c)
        truth = coding_ce.in_ground_truth(e.name, n)
        if truth is None:
            truth = n in e.enumerated()
            expected = ("In" if truth else "NotByHorizon") + " (by table)"
        else:
            expected = "In" if truth else "NotByHorizon"
        rep.add(f"code2/n={n:03d}", f"set={cfg.set} horizon={cfg.horizon}", expected, v,
                v.member == truth)


def _milestones(S: int) -> list[int]:
    return sorted({max(1, S // 16), max(1, S // 4), S})


def cmd_code3(args, cfg: RunConfig, rep: Report):
    R = coding_pi2.resolve_predicate(cfg.pred)
    S = cfg.stages
    b = coding_pi2.build_b(coding_pi2.default_scheme_2(), R, S)
    bl = coding_pi2.builder_of(b)
    marks = _milestones(S)
    counts: dict[int, list[int]] = {n: [] for n in range(cfg.nmax)}
    for m in marks:
        bl.advance_to(m)
        for n in counts:
            counts[n].append(bl.case1.get(n, 0))
    for n in range(cfg.nmax):
        v = coding_pi2.decode_at_horizon(n, R, S, cfg.threshold)
        truth = R.truth_class(n)
        want = {True: "InfEvidence", False: "FinTwoCycles", None: "?"}[truth]
        ok = truth is None or v.kind == want
        trail = ",".join(f"{m}:{k}" for m, k in zip(marks, counts[n]))
        rep.add(f"code3/n={n:03d}", f"pred={cfg.pred} counts={trail}", want, v, ok)


def cmd_gsl(args, cfg: RunConfig, rep: Report):
    if not args.expr:
        raise ValueError("gsl needs --expr")
    F = get_field(cfg.field)
    e = permlang.parse(args.expr, vocabulary(cfg))
    sigma = F.aut(args.twist)
    m = vspace.PermInduced(e, F, sigma)
    g = vspace.GslElement.of(m)
    n = min(cfg.window, 16)
    w = Window(n)
    imgs = " ".join(f"e{i}->{vspace.format_vector(g.rep.image(i))}" for i in range(n))
    rep.add("gsl/images", f"{permlang.to_text(e)} field={F.name} twist={sigma.name}", "-",
            imgs, True)
    rep.add("gsl/nsim_identity", f"window={n}", "-", vspace.nsim_identity(g.rep, w), True)
    rng = random.Random(cfg.seed)
    bad = 0
    for _ in range(100):
        a, b = F.random(rng), F.random(rng)
        u, v = vspace.random_vector(F, rng, n), vspace.random_vector(F, rng, n)
        bad += m.apply(u.scale(a) + v.scale(b)) != (m.apply(u).scale(sigma(a))
                                                     + m.apply(v).scale(sigma(b)))
    rep.add("gsl/semilinear", f"seed={cfg.seed} samples=100", "0 violations",
            f"{bad} violations", bad == 0)
    if args.vector:
        x = vspace.parse_vector(args.vector, F)
        rep.add("gsl/apply", vspace.format_vector(x), "-", vspace.format_vector(m.apply(x)), True)


def cmd_ba(args, cfg: RunConfig, rep: Report):
    if not args.expr:
        raise ValueError("ba needs --expr")
    e = permlang.parse(args.expr, vocabulary(cfg))
    text = permlang.to_text(e)
    if args.elem:
        x = intalg.parse_belem(args.elem)
        rep.add("ba/apply", f"{text} on {x}", "-", intalg.apply_H(e, x), True)
    try:
        c = intalg.PhiClass.of(e)
    except AutcodeError as exc:
        rep.notes.append(f"no Phi class for {text}: {exc}")
        return
    region, partial = intalg.moved_region(c, Window(cfg.window))
    rep.add("ba/moved_region", f"{text} window={cfg.window}", "-",
            f"{region}{' (partial)' if partial else ''}", True)
    v = intalg.psi_check(c, Window(cfg.window))
    rep.add("ba/psi", f"{text} window={cfg.window}", "verified", v, v.verified)


def cmd_pipeline(args, cfg: RunConfig, rep: Report):
    e = resolve_enumerator(cfg.set, cfg.horizon)
    c = coding_ce.build(e)
    F = get_field(cfg.field)
    for n in range(cfg.nmax):
        direct = coding_ce.decode_membership(n, c.scheme, e, construction=c)
        want = "In" if direct.member else "NotByHorizon"
        if cfg.target in ("gsl", "both"):
            g = pipeline.decode_via_gsl(n, c, field=F)
            rep.add(f"pipeline/gsl/n={n:03d}", f"set={cfg.set} field={F.name}", want, g,
                    g.member == direct.member)
        if cfg.target in ("ba", "both"):
            b = pipeline.decode_via_ba(n, c)
            rep.add(f"pipeline/ba/n={n:03d}", f"set={cfg.set}", want, b,
                    b.member == direct.member)


def cmd_suite(args, cfg: RunConfig, rep: Report):
    if args.name not in suites.SUITES:
        raise ValueError(f"unknown suite {args.name!r}; choose from {sorted(suites.SUITES)}")
    rep.extend(suites.SUITES[args.name](cfg.seed, rep.command))


COMMANDS = {"perm": cmd_perm, "code2": cmd_code2, "code3": cmd_code3, "gsl": cmd_gsl,
            "ba": cmd_ba, "pipeline": cmd_pipeline, "suite": cmd_suite}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--window", type=int)
    common.add_argument("--horizon", type=int)
    common.add_argument("--stages", type=int)
    common.add_argument("--threshold", type=int)
    common.add_argument("--set", help="evens | empty | primes25 | @file")
    common.add_argument("--pred", help="always | never | lt | even | @file")
    common.add_argument("--field", help="Q | GF<p> | GF4")
    common.add_argument("--seed", type=int)
    common.add_argument("--nmax", type=int, help="decode n = 0 .. nmax-1")
    common.add_argument("--family", choices=("ce", "pi2"), help="which w and b atoms to use")
    common.add_argument("--out", help="also write the report here")
    common.add_argument("--machine", action="store_true", help="key=value records")

    ap = argparse.ArgumentParser(prog="autcode", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("perm", parents=[common], help="evaluate a permutation expression")
    p.add_argument("--expr")
    p.add_argument("--eval", type=int, metavar="X")
    p.add_argument("--inverse", type=int, metavar="Y")
    p.add_argument("--image", type=int, metavar="N")
    p.add_argument("--profile", type=int, metavar="N")
    p.add_argument("--classify", type=int, metavar="N")
    sub.add_parser("code2", parents=[common], help="decode an enumerated set")
    sub.add_parser("code3", parents=[common], help="stage counts and verdicts for a predicate")
    p = sub.add_parser("gsl", parents=[common], help="lift a permutation to a semilinear map")
    p.add_argument("--expr")
    p.add_argument("--twist", default="id", help="field automorphism (id, or frob over GF4)")
    p.add_argument("--vector", help="e.g. 'Q[0:1/2, 3:-1/1]'")
    p = sub.add_parser("ba", parents=[common], help="act on the interval algebra")
    p.add_argument("--expr")
    p.add_argument("--elem", help="e.g. '[0,1);[2,5/2)'")
    p = sub.add_parser("pipeline", parents=[common], help="decode through the lifted images")
    p.add_argument("--target", choices=("gsl", "ba", "both"))
    p = sub.add_parser("suite", parents=[common], help="run a check suite")
    p.add_argument("name", help="acceptance | properties")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        rep = Report(_echo(argv))
        COMMANDS[args.cmd](args, cfg, rep)
    except (AutcodeError, ValueError, KeyError, OSError) as exc:
        print(f"autcode: error: {exc}", file=sys.stderr)
        return 2
    text = rep.render_machine() if cfg.machine else rep.render()
    sys.stdout.write(text)
    if cfg.out:
        Path(cfg.out).write_text(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
