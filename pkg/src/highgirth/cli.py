"""Command-line surface tying the modules into reproducible experiments.

Subcommands: gen, solve, sample, events, lll-check, params, scan, search,
certify, export.  Exit codes: 0 for success or a holding verdict, 2 when
a verdict fails or a certification is rejected, 1 for usage and I/O
errors.

Every randomized command takes ``--seed`` (default 0, echoed in the
output) and is deterministic end to end.  A ``--config`` file may supply
defaults as flat ``key = value`` lines mirroring the flags; explicit
flags win.  The environment variable ``HIGHGIRTH_OUT`` sets the default
output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .dimacs import DimacsError, dump_json, read_dimacs, write_dimacs, write_vertex_json
from .graphs import EdgeSubset, SizeGuardError, build_base_graph
from .lll import (
    InfeasibleParameters,
    LLLAssignment,
    check_bollobas_lll,
    check_general_lll,
    choose_parameters,
    feasible_gamma_interval,
    verify_sys1_finite,
)
from .model import (
    EventSpec,
    EventSystem,
    ModelParams,
    derive_seed,
    enumerate_cycle_events,
    enumerate_independent_set_events,
    sample_subgraph,
)
from .search import (
    CertificationError,
    GirthCertificate,
    SearchFailure,
    certify,
    deletion_method,
    moser_tardos_search,
)
from .solvers import (
    SolveBudget,
    chromatic_number,
    count_cycles,
    girth,
    independence_number,
)

OUTPUT_DIR_VAR = "HIGHGIRTH_OUT"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _output_dir(args) -> Path:
    explicit = getattr(args, "out_dir", None)
    path = Path(explicit or os.environ.get(OUTPUT_DIR_VAR, "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(doc: dict, args) -> None:
    dump_json(doc, sys.stdout)
    out = getattr(args, "out", None)
    if out:
        dump_json(doc, out)


def _resolve_seed(args) -> int:
    if args.seed is None:
        print("seed not given; using default seed 0", file=sys.stderr)
        return 0
    return args.seed


def _model_params(args, n: int) -> ModelParams:
    if args.p is None and args.gamma is None:
        raise _UsageError("one of --gamma or --p is required")
    return ModelParams(n=n, gamma=args.gamma, seed=_resolve_seed(args), p_override=args.p)


def _budget(args) -> SolveBudget:
    return SolveBudget(
        node_limit=getattr(args, "node_limit", 0),
        time_limit=getattr(args, "time_limit", 0.0),
    )


def cmd_gen(args) -> int:
    graph = build_base_graph(args.n, allow_large=args.allow_large)
    out = _output_dir(args)
    dimacs_path = out / f"g{graph.dimension}.dimacs"
    vertices_path = out / f"g{graph.dimension}.vertices.json"
    write_dimacs(graph, dimacs_path)
    write_vertex_json(graph, vertices_path)
    print(dimacs_path)
    print(vertices_path)
    return 0


def cmd_solve(args) -> int:
    g = read_dimacs(args.graph)
    if args.what == "cycles":
        counts = count_cycles(g, args.s)
        doc = {"labeled": counts.labeled, "distinct": counts.distinct, "s": args.s}
    elif args.what == "girth":
        doc = girth(g).to_json()
    elif args.what == "alpha":
        doc = independence_number(g, _budget(args)).to_json()
    else:
        doc = chromatic_number(g, _budget(args)).to_json()
    _emit(doc, args)
    return 0


def cmd_sample(args) -> int:
    g = build_base_graph(args.n, allow_large=args.allow_large)
    params = _model_params(args, args.n)
    sub = sample_subgraph(g, params)
    out = _output_dir(args)
    prefix = f"sample-n{args.n}-seed{params.seed}"
    dimacs_path = out / f"{prefix}.dimacs"
    write_dimacs(sub.to_graph(), dimacs_path)
    doc = {
        "n": args.n,
        "seed": params.seed,
        "gamma": params.gamma,
        "p": params.p,
        "num_edges": sub.num_edges,
        "edge_mask_hex": sub.mask_hex(),
        "dimacs": str(dimacs_path),
    }
    dump_json(doc, out / f"{prefix}.json")
    _emit(doc, args)
    return 0


def cmd_events(args) -> int:
    g = build_base_graph(args.n, allow_large=args.allow_large)
    if args.p is None and args.gamma is None:
        raise _UsageError("one of --gamma or --p is required")
    p = args.p if args.p is not None else args.gamma ** (4 * args.n)
    events = []
    if args.l is not None:
        events.extend(enumerate_independent_set_events(g, args.l, p))
    events.extend(enumerate_cycle_events(g, args.k, p))
    system = EventSystem.from_events(events)
    doc = {"n": args.n, "p": p, "l": args.l, "k": args.k, **system.to_json()}
    _emit(doc, args)
    return 0


def _load_event_system(path: str) -> tuple[EventSystem, dict]:
    with open(path) as fh:
        doc = json.load(fh)
    if "events" not in doc or not isinstance(doc["events"], list):
        raise _UsageError(f"{path}: expected an object with an 'events' array")
    events = []
    for i, entry in enumerate(doc["events"]):
        try:
            events.append(
                EventSpec(
                    kind=entry["kind"],
                    variable_set=tuple(entry["variable_set"]),
                    meta=entry.get("meta", len(entry["variable_set"])),
                    probability=entry["probability"],
                    members=tuple(entry.get("members", ())),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise _UsageError(f"{path}: events[{i}]: {exc}") from None
    return EventSystem.from_events(events), doc


def cmd_lll_check(args) -> int:
    system, doc = _load_event_system(args.events)
    if args.recipe_multipliers:
        p = args.p if args.p is not None else doc.get("p")
        if p is None:
            raise _UsageError("--recipe-multipliers needs --p or a 'p' field in the events file")
        report = verify_sys1_finite(system, p, args.f)
        out_doc = {"style": "recipe", **report.to_json()}
        holds = report.holds
    else:
        if not args.assignment:
            raise _UsageError("either --assignment or --recipe-multipliers is required")
        with open(args.assignment) as fh:
            assignment_doc = json.load(fh)
        try:
            assignment = LLLAssignment(
                style=assignment_doc["style"],
                multipliers=tuple(assignment_doc["multipliers"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise _UsageError(f"{args.assignment}: {exc}") from None
        probs = system.probabilities
        if assignment.style == "general":
            report = check_general_lll(probs, system.neighbors, assignment.multipliers)
        else:
            report = check_bollobas_lll(probs, system.neighbors, assignment.multipliers)
        out_doc = report.to_json()
        out_doc["infeasible"] = not system.feasible
        holds = report.holds and system.feasible
    _emit(out_doc, args)
    return 0 if holds else 2


def cmd_params(args) -> int:
    try:
        params = choose_parameters(args.k, args.delta, n=args.n)
    except InfeasibleParameters as exc:
        _emit({"feasible": False, "reason": str(exc)}, args)
        return 2
    _emit({"feasible": True, **params.to_json()}, args)
    return 0


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"bad grid {text!r}; expected comma-separated floats") from None


def cmd_scan(args) -> int:
    epsilons = _parse_grid(args.epsilon_grid)
    fs = _parse_grid(args.f_grid)
    rows = []
    for k in range(args.k_min, args.k_max + 1):
        for eps in epsilons:
            for f in fs:
                if not 0 < f < k - 1:
                    continue
                window = feasible_gamma_interval(k, eps, args.delta, f)
                rows.append(
                    {
                        "k": k, "epsilon": eps, "f": f, "delta": args.delta,
                        "lower": window.lower, "upper": window.upper,
                        "nonempty": window.nonempty, "recipe": False,
                    }
                )
        try:
            params = choose_parameters(k, args.delta)
            window = params.interval()
            rows.append(
                {
                    "k": k, "epsilon": params.epsilon, "f": params.f,
                    "delta": args.delta, "lower": window.lower,
                    "upper": window.upper, "nonempty": window.nonempty,
                    "recipe": True, "gamma": params.gamma,
                }
            )
        except InfeasibleParameters:
            pass
    _emit({"delta": args.delta, "rows": rows}, args)
    return 0


def _search_once(job: dict):
    """One search restart; module-level so process pools can run it."""
    g = build_base_graph(job["n"], allow_large=job["allow_large"])
    params = ModelParams(
        n=job["n"], gamma=job["gamma"], seed=job["seed"],
        p_override=job["p"],
    )
    budget = SolveBudget(job["node_limit"], job["time_limit"])
    if job["method"] == "delete":
        try:
            return deletion_method(g, params, job["k"], alpha_budget=budget)
        except CertificationError as exc:
            return SearchFailure(
                reason=str(exc), n=job["n"], k=job["k"], l=0, seed=job["seed"]
            )
    return moser_tardos_search(
        g, params, job["k"], job["l"],
        max_resamples=job["max_resamples"],
        subset_events=job["subset_events"],
        alpha_budget=budget,
    )


def cmd_search(args) -> int:
    if args.method == "mt" and args.l is None:
        raise _UsageError("--l is required for the mt method")
    if args.p is None and args.gamma is None:
        raise _UsageError("one of --gamma or --p is required")
    base_seed = _resolve_seed(args)
    subset_mode = {"auto": "auto", "on": True, "off": False}[args.subset_events]
    jobs = []
    for replica in range(max(args.restarts, 1)):
        seed = base_seed if replica == 0 else derive_seed(base_seed, replica)
        jobs.append({
            "n": args.n, "k": args.k, "l": args.l, "gamma": args.gamma,
            "p": args.p, "seed": seed, "method": args.method,
            "max_resamples": args.max_resamples, "subset_events": subset_mode,
            "allow_large": args.allow_large,
            "node_limit": args.node_limit, "time_limit": args.time_limit,
        })
    if args.jobs > 1 and len(jobs) > 1:
        # run every restart, then keep the first certificate in seed order:
        # the winner is independent of scheduling
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_search_once, jobs))
        outcome = next(
            (o for o in outcomes if isinstance(o, GirthCertificate)), outcomes[-1]
        )
    else:
        outcome = None
        for job in jobs:
            outcome = _search_once(job)
            if isinstance(outcome, GirthCertificate):
                break
    _emit(outcome.to_json(), args)
    return 0 if isinstance(outcome, GirthCertificate) else 2


def _subset_from_args(args, g) -> EdgeSubset:
    if args.mask_hex:
        return EdgeSubset.from_hex(g, args.mask_hex)
    if not args.graph:
        raise _UsageError("one of --graph or --mask-hex is required")
    sub_graph = read_dimacs(args.graph)
    if sub_graph.num_vertices != g.num_vertices:
        raise _UsageError(
            f"subgraph has {sub_graph.num_vertices} vertices, base has {g.num_vertices}"
        )
    indices = []
    for u, v in sub_graph.edge_list:
        try:
            indices.append(g.edge_index(u, v))
        except KeyError:
            raise _UsageError(f"edge ({u + 1}, {v + 1}) is not a base edge") from None
    return EdgeSubset.from_edge_indices(g, indices)


def cmd_certify(args) -> int:
    g = build_base_graph(args.n, allow_large=args.allow_large)
    sub = _subset_from_args(args, g)
    try:
        cert = certify(sub, args.k, args.l, alpha_budget=_budget(args))
    except CertificationError as exc:
        _emit({"certified": False, "reason": exc.reason, "witness": exc.witness}, args)
        return 2
    _emit(cert.to_json(), args)
    return 0


def cmd_export(args) -> int:
    with open(args.certificate) as fh:
        cert = GirthCertificate.from_json(json.load(fh))
    g = build_base_graph(cert.n, allow_large=True)
    sub = cert.subgraph(g)
    out = _output_dir(args)
    if args.format == "dimacs":
        path = out / f"certificate-n{cert.n}-k{cert.k}.dimacs"
        write_dimacs(sub.to_graph(), path)
    else:
        path = out / f"certificate-n{cert.n}-k{cert.k}.json"
        dump_json(cert.to_json(), path)
    print(path)
    return 0


def _add_budget_flags(p: _Parser) -> None:
    p.add_argument("--node-limit", type=int, default=0,
                   help="search-node limit for exact solvers (0 = unlimited)")
    p.add_argument("--time-limit", type=float, default=0.0,
                   help="time limit in seconds for exact solvers (0 = unlimited)")


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="highgirth", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, _Parser] = {}

    def sub(name: str, help_text: str) -> _Parser:
        p = subs.add_parser(name, help=help_text)
        p.add_argument("--config", default=None,
                       help="key = value file of flag defaults")
        registry[name] = p
        return p

    p = sub("gen", "write a base graph as DIMACS plus a vertex JSON")
    p.add_argument("--n", type=int, required=True, help="quarter-dimension")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub("solve", "run an exact solver on a DIMACS graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--what", choices=["girth", "alpha", "chi", "cycles"], required=True)
    p.add_argument("--s", type=int, default=3, help="cycle length for --what cycles")
    p.add_argument("--out", default=None)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub("sample", "draw a random spanning subgraph of a base graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--p", type=float, default=None, help="explicit edge probability")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub("events", "enumerate bad events and their dependencies")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, default=None, help="independent-subset size")
    p.add_argument("--k", type=int, required=True, help="max forbidden cycle length")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_events)

    p = sub("lll-check", "check a Local Lemma condition on an event system")
    p.add_argument("--events", required=True, help="event-system JSON file")
    p.add_argument("--assignment", default=None, help="assignment JSON file")
    p.add_argument("--recipe-multipliers", action="store_true",
                   help="use the built-in multiplier recipe")
    p.add_argument("--f", type=float, default=0.01,
                   help="recipe exponent offset (with --recipe-multipliers)")
    p.add_argument("--p", type=float, default=None,
                   help="edge probability override for the recipe")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lll_check)

    p = sub("params", "choose a valid parameter tuple for (k, delta)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_params)

    p = sub("scan", "tabulate gamma windows over a parameter grid")
    p.add_argument("--k-min", type=int, default=3)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--epsilon-grid", default="0.25,0.5,1.0")
    p.add_argument("--f-grid", default="0.01,0.1")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub("search", "search for a certified high-girth subgraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, default=None,
                   help="independence bound (mt only; delete derives it "
                        "from the exact independence number)")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=["mt", "delete"], default="mt")
    p.add_argument("--max-resamples", type=int, default=None)
    p.add_argument("--subset-events", choices=["auto", "on", "off"], default="auto")
    p.add_argument("--restarts", type=int, default=1,
                   help="independent restarts with derived seeds")
    p.add_argument("--jobs", type=int, default=1,
                   help="restart parallelism (restarts stay seed-ordered)")
    p.add_argument("--out", default=None)
    p.add_argument("--allow-large", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub("certify", "re-verify a subgraph against girth and independence bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", default=None, help="subgraph in DIMACS format")
    p.add_argument("--mask-hex", default=None, help="edge mask as hex")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--allow-large", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub("export", "re-materialize a certificate's subgraph")
    p.add_argument("--certificate", required=True)
    p.add_argument("--format", choices=["dimacs", "json"], default="dimacs")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_export)

    return parser, registry


def _load_config(path: str) -> dict[str, str]:
    config: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" in line:
                key, _, value = line.partition("=")
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise _UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, value = parts
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def _apply_config(parser: _Parser, config: dict[str, str]) -> None:
    """Install config values as typed defaults; explicit flags still win."""
    for action in parser._actions:
        if action.dest in config:
            raw = config[action.dest]
            if isinstance(action, argparse._StoreTrueAction):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                value = action.type(raw)
            else:
                value = raw
            parser.set_defaults(**{action.dest: value})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    try:
        if argv and argv[0] in registry and "--config" in argv:
            idx = argv.index("--config")
            if idx + 1 < len(argv):
                _apply_config(registry[argv[0]], _load_config(argv[idx + 1]))
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return 0 if exc.code in (0, None) else 1
    except (ValueError, OSError, DimacsError, SizeGuardError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
