"""``cruxkit`` command line.

Every run prints (or writes to ``--out``) one record: the resolved
configuration, the package version, the wall time and the command's result.
JSON records are validated against ``schema/run_record.schema.json`` before
they are emitted.  Exit codes: 0 success, 1 internal error, 2 usage or
precondition error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

import jsonschema

from . import __version__
from . import generators as gen
from .crux import crux_exact, crux_upper_heuristic, EXACT_LIMIT
from .cycles import (
    cycle_via_crux_pipeline,
    dfs_stack_cycle,
    greedy_min_degree_cycle,
    longest_cycle_kernel,
    posa_rotation_cycle,
)
from .errors import CruxkitError, EdgeListParseError, PreconditionError
from .expander import ExpanderParams, extract_expander, verify_expander
from .graph import Graph, read_edge_list, write_edge_list
from .percolation import c4free_cycle_experiment, hypercube_cycle_experiment
from .selftest import run_selftest, selftest_csv
from .separators import separability_decompose

VERSION = f"v{__version__}"
TIMING_KEYS = ("wall_ms", "runtime_ms")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    """``"5,7,11"`` or ``"10..14"`` (inclusive) or a mix of both."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return out


def _float_list(text: str) -> list[float]:
    vals = [float(p) for p in text.split(",") if p.strip()]
    if not vals:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return vals


def _host_hint(text: str) -> tuple:
    kind, _, rest = text.partition(":")
    if kind == "hypercube":
        return ("hypercube",)
    if kind == "hamming":
        return ("hamming", int(rest))
    if kind == "kst":
        s, t = rest.split(",")
        return ("kst_free", int(s), int(t))
    raise argparse.ArgumentTypeError("host must be hypercube, hamming:R or kst:S,T")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $CRUXKIT_THREADS, else available cores)")
    p.add_argument("--out", default=None, help="write the record here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "edgelist"), default=None)
    p.add_argument("--config", default=None, help="key = value file; explicit flags win")
    return p


def _input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", default="-", help="edge-list file ('-' for stdin)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cruxkit", description="Crux, expanders, long cycles and separators.")
    parser.add_argument("--version", action="version", version=f"cruxkit {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="build a host graph")
    g.add_argument("--kind", required=True, choices=gen.HostSpec.kinds())
    for name in ("m", "r", "n", "a", "b", "q"):
        g.add_argument(f"--{name}", type=int)

    p = sub.add_parser("percolate", parents=[common], help="keep each edge with probability p")
    _input(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trial", type=int, default=0)

    c = sub.add_parser("crux", parents=[common], help="bound or compute c_alpha")
    _input(c)
    c.add_argument("--alpha", type=float, required=True)
    cm = c.add_mutually_exclusive_group()
    cm.add_argument("--exact", dest="mode", action="store_const", const="exact")
    cm.add_argument("--heuristic", dest="mode", action="store_const", const="heuristic")
    c.set_defaults(mode="auto")
    c.add_argument("--host", type=_host_hint, default=None)

    e = sub.add_parser("expander", help="verify or extract sublinear expanders")
    esub = e.add_subparsers(dest="action", required=True)
    ev = esub.add_parser("verify", parents=[common])
    _input(ev)
    ev.add_argument("--epsilon", "--eps", dest="eps", type=float, required=True)
    ev.add_argument("--t", type=float, required=True)
    ev.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    ev.add_argument("--k", type=int, default=200)
    ex = esub.add_parser("extract", parents=[common])
    _input(ex)
    ex.add_argument("--epsilon", "--eps", dest="eps", type=float, required=True)
    ex.add_argument("--t", type=float, required=True)
    ex.add_argument("--C", type=float, default=40.0)

    y = sub.add_parser("cycle", parents=[common], help="find a long cycle")
    _input(y)
    y.add_argument("--method", choices=("greedy", "posa", "pipeline", "dfs-stack", "kernel"), default="posa")
    y.add_argument("--alpha", type=float, default=0.5)
    y.add_argument("--epsilon", "--eps", dest="eps", type=float, default=None)
    y.add_argument("--t", type=float, default=None)
    y.add_argument("--restarts", type=int, default=None)

    s = sub.add_parser("separate", parents=[common], help="(s, t)-separability decomposition")
    _input(s)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--mode", choices=("auto", "exact", "heuristic"), default="auto")

    x = sub.add_parser("experiment", help="percolation experiments")
    xsub = x.add_subparsers(dest="action", required=True)
    xc = xsub.add_parser("c4free", parents=[common])
    xc.add_argument("--q", type=_int_list, required=True)
    xc.add_argument("--c", type=_float_list, required=True)
    xc.add_argument("--trials", type=int, default=10)
    xc.add_argument("--restarts", type=int, default=None)
    xh = xsub.add_parser("hypercube", parents=[common])
    xh.add_argument("--m", type=_int_list, required=True)
    xh.add_argument("--eps", type=float, default=0.5)
    xh.add_argument("--trials", type=int, default=10)
    xh.add_argument("--psi", type=float, default=None, help="default m^8")
    xh.add_argument("--restarts", type=int, default=None)

    t = sub.add_parser("selftest", parents=[common], help="brute-force cross-checks on small graphs")
    t.add_argument("--scale", type=int, default=1)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _subparser_for(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.ArgumentParser:
    node = parser
    for tok in argv:
        acts = [a for a in node._actions if isinstance(a, argparse._SubParsersAction)]
        if not acts:
            break
        if tok in acts[0].choices:
            node = acts[0].choices[tok]
    return node


def parse(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        leaf = _subparser_for(parser, argv)
        known = {a.dest: a for a in leaf._actions}
        cfg = _read_config(args.config)
        for key, value in cfg.items():
            if key not in known or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r}")
            flag = known[key].option_strings[0]
            # config values act as defaults: re-parse with them in front of the real flags
            argv = _inject(argv, leaf, flag, value)
        args = parser.parse_args(argv)
    if args.threads is None:
        env = os.environ.get("CRUXKIT_THREADS")
        args.threads = int(env) if env else (os.cpu_count() or 1)
    if args.threads < 1:
        raise UsageError("--threads must be at least 1")
    return args


def _inject(argv: list[str], leaf: argparse.ArgumentParser, flag: str, value: str) -> list[str]:
    if any(tok == flag or tok.startswith(flag + "=") for tok in argv):
        return argv
    # insert right after the subcommand tokens so the leaf parser sees it
    idx = 0
    node = build_parser()
    for i, tok in enumerate(argv):
        acts = [a for a in node._actions if isinstance(a, argparse._SubParsersAction)]
        if acts and tok in acts[0].choices:
            node = acts[0].choices[tok]
            idx = i + 1
    return argv[:idx] + [flag, value] + argv[idx:]


def _load(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return read_edge_list(text)


def _config_echo(args: argparse.Namespace) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("out", "config"):
            continue
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def _command(args: argparse.Namespace) -> tuple[str, object, str]:
    """Run the command; returns ``(name, result, default format)``."""
    cmd = args.command
    if cmd == "gen":
        names = gen.HostSpec.parameter_names(args.kind)
        params = {k: getattr(args, k) for k in names}
        missing = [k for k, v in params.items() if v is None]
        if missing:
            raise UsageError(f"{args.kind} needs --{' --'.join(missing)}")
        return "gen", gen.HostSpec(args.kind, params).build(), "edgelist"
    if cmd == "percolate":
        host = _load(args.input)
        return "percolate", gen.sample_subgraph(host, gen.PercolationConfig(args.p, args.seed, args.trial)), "edgelist"
    if cmd == "crux":
        g = _load(args.input)
        mode = args.mode if args.mode != "auto" else ("exact" if g.n <= EXACT_LIMIT else "heuristic")
        cert = crux_exact(g, args.alpha) if mode == "exact" else crux_upper_heuristic(g, args.alpha, args.host)
        return "crux", cert.to_dict(), "json"
    if cmd == "expander":
        g = _load(args.input)
        if args.action == "verify":
            rep = verify_expander(g, ExpanderParams(args.eps, args.t), mode=args.mode, k=args.k, seed=args.seed)
        else:
            rep = extract_expander(g, args.eps, args.t, args.C, seed=args.seed)
        return f"expander {args.action}", rep.to_dict(), "json"
    if cmd == "cycle":
        g = _load(args.input)
        extra = {}
        if args.method == "greedy":
            res = greedy_min_degree_cycle(g)
        elif args.method == "posa":
            res = posa_rotation_cycle(g, target_t=args.t, restarts=args.restarts, seed=args.seed)
        elif args.method == "kernel":
            res = longest_cycle_kernel(g)
            if res is None:
                raise PreconditionError("graph too dense for the exact kernel search; use --method posa")
        elif args.method == "pipeline":
            res, bounds = cycle_via_crux_pipeline(g, args.alpha, args.eps, seed=args.seed)
            extra["bounds"] = bounds.to_dict()
        else:
            eps = 1 / 500 if args.eps is None else args.eps
            t = 1.0 if args.t is None else args.t
            res = dfs_stack_cycle(g, eps, t, seed=args.seed)
        return "cycle", {**res.to_dict(), **extra}, "json"
    if cmd == "separate":
        g = _load(args.input)
        return "separate", separability_decompose(g, args.s, args.t, mode=args.mode, seed=args.seed).to_dict(), "json"
    if cmd == "experiment":
        if args.action == "c4free":
            tab = c4free_cycle_experiment(args.q, args.c, args.trials, args.seed, args.restarts, args.threads)
        else:
            tab = hypercube_cycle_experiment(args.m, args.eps, args.trials, args.seed, psi=args.psi,
                                             restarts=args.restarts, workers=args.threads)
        return f"experiment {args.action}", tab, "csv"
    if cmd == "selftest":
        return "selftest", run_selftest(args.seed, args.scale), "csv"
    raise UsageError(f"unknown command {cmd}")


def _schema() -> dict:
    text = resources.files("cruxkit").joinpath("schema/run_record.schema.json").read_text()
    return json.loads(text)


def _as_json_result(name: str, result) -> object:
    if isinstance(result, Graph):
        return {"n": result.n, "edges": [list(e) for e in result.edges]}
    if name == "selftest":
        return {"checks": [r.__dict__ | {"passed": r.passed} for r in result]}
    if hasattr(result, "rows"):
        return {"rows": result.rows, "summary": {str(k): v for k, v in result.summary.items()}}
    return result


def _render(name: str, result, fmt: str, echo: dict, wall_ms: float) -> str:
    header = {"tool": "cruxkit", "version": VERSION, "command": name, "config": echo}
    if fmt == "json":
        record = {**header, "result": _as_json_result(name, result), "wall_ms": wall_ms}
        jsonschema.validate(record, _schema())
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    comments = [f"# cruxkit {VERSION} {name}"] + [f"# {k} = {v}" for k, v in echo.items()]
    comments.append(f"# wall_ms = {wall_ms}")
    if fmt == "edgelist":
        if not isinstance(result, Graph):
            raise UsageError(f"{name} cannot be written as an edge list")
        return "\n".join(comments) + "\n" + write_edge_list(result)
    if name == "selftest":
        body = selftest_csv(result)
    elif hasattr(result, "csv_lines"):
        body = result.csv_lines()
    else:
        raise UsageError(f"{name} has no CSV form; use --format json")
    return "\n".join(comments + body) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (UsageError, OSError, ValueError) as exc:
        print(f"cruxkit: error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        name, result, default_fmt = _command(args)
        fmt = args.format or default_fmt
        text = _render(name, result, fmt, _config_echo(args), round((time.perf_counter() - t0) * 1000, 3))
    except (PreconditionError, EdgeListParseError, UsageError, OSError) as exc:
        print(f"cruxkit: error: {exc}", file=sys.stderr)
        return 2
    except CruxkitError as exc:
        print(f"cruxkit: internal error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything unexpected is an internal error
        print(f"cruxkit: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if name == "selftest" and not all(r.passed for r in result):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
