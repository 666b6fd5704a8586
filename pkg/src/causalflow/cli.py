"""Command-line front end.

Exit codes: 0 flow found or check passed, 1 no flow or check failed (the
witness is still written), 2 invalid input, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import geometry as geo
from .dot import geometry_dot, influence_dot
from .failures import FlowFailure, NoCover, ViciousCircuit
from .fixtures import BadParams, generate_fixture
from .flowcore import find_flow
from .pattern import derive_pattern, pattern_violations, signal_shift
from .simverify import (
    ResourceLimit,
    check_determinism_unitarity,
    extract_map,
    oracle_flows,
    oracle_path_families,
    phase_distance,
)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_LIMIT = 0, 1, 2, 3


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_angles(source: str | None, g: geo.Geometry) -> dict[int, float] | None:
    if source is None:
        return None
    if source == "zero":
        return {v: 0.0 for v in g.non_outputs}
    raw = json.loads(Path(source).read_text())
    return {g.index(k): float(a) for k, a in raw.items()}


def _failure_json(g: geo.Geometry, failure: FlowFailure) -> dict:
    return failure.to_json(g.names)


def cmd_find(g, args) -> tuple[int, str]:
    if args.format == "dot":
        return cmd_dot(g, args)
    result = find_flow(g)
    if result:
        return EXIT_OK, _dumps({"flow": result.to_json()})
    return EXIT_FAIL, _dumps({"failure": _failure_json(g, result)})


def cmd_order(g, args) -> tuple[int, str]:
    result = find_flow(g)
    if not result:
        return EXIT_FAIL, _dumps({"failure": _failure_json(g, result)})
    full = result.to_json()
    return EXIT_OK, _dumps({k: full[k] for k in ("chains", "closure", "layers")})


def cmd_pattern(g, args) -> tuple[int, str]:
    result = find_flow(g)
    if not result:
        return EXIT_FAIL, _dumps({"failure": _failure_json(g, result)})
    p = derive_pattern(g, result, _load_angles(args.angles, g), raw_corrections=args.raw_corrections)
    if args.shift:
        p = signal_shift(p)
    return EXIT_OK, p.to_jsonl()


def cmd_verify(g, args) -> tuple[int, str]:
    result = find_flow(g)
    if not result:
        return EXIT_FAIL, _dumps({"failure": _failure_json(g, result)})
    angles = _load_angles(args.angles, g)
    p = derive_pattern(g, result, angles, raw_corrections=args.raw_corrections)
    report = check_determinism_unitarity(g, p, tol=args.tol, max_qubits=args.max_qubits)
    out = report.to_json()
    shifted_dev = phase_distance(
        extract_map(g, signal_shift(p), args.max_qubits), extract_map(g, p, args.max_qubits)
    )
    wellformed = pattern_violations(p)
    out["checks"]["signal_shift_equivalence"] = shifted_dev <= args.tol
    out["checks"]["well_formed"] = not wellformed
    out["signal_shift_deviation"] = shifted_dev
    out["violations"] = out["violations"] + wellformed
    if shifted_dev > args.tol:
        out["violations"].append(f"signal-shifted pattern deviates by {shifted_dev:.3g}")
    out["passed"] = not out["violations"]
    return (EXIT_OK if out["passed"] else EXIT_FAIL), _dumps(out)


def cmd_dot(g, args) -> tuple[int, str]:
    result = find_flow(g)
    if result:
        return EXIT_OK, influence_dot(g, result.cover, result.digraph)
    if isinstance(result, ViciousCircuit):
        return EXIT_FAIL, influence_dot(g, result.cover, result.digraph)
    if isinstance(result, NoCover):
        return EXIT_FAIL, geometry_dot(g, result.uncovered)
    return EXIT_FAIL, geometry_dot(g)


def cmd_oracle(g, args) -> tuple[int, str]:
    flows = oracle_flows(g)
    families = oracle_path_families(g)
    name = g.name
    out = {
        "flows": [{name(x): name(y) for x, y in sorted(f.items())} for f in flows],
        "families": [sorted([name(v) for v in p] for p in fam) for fam in families],
    }
    return (EXIT_OK if flows else EXIT_FAIL), _dumps(out)


COMMANDS = {
    "find": cmd_find,
    "order": cmd_order,
    "pattern": cmd_pattern,
    "verify": cmd_verify,
    "dot": cmd_dot,
    "oracle": cmd_oracle,
}


def _run_file(command: str, path: str, args) -> tuple[int, str]:
    try:
        g = geo.load(path)
        return COMMANDS[command](g, args)
    except geo.GeometryError as e:
        return EXIT_INVALID, f"{path}: {e}\n"
    except (OSError, ValueError) as e:
        return EXIT_INVALID, f"{path}: {e}\n"
    except ResourceLimit as e:
        return EXIT_LIMIT, f"{path}: resource limit: {e}\n"


def _worker(job):
    command, path, args = job
    return _run_file(command, path, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multi=True):
        p.add_argument("inputs", nargs="+" if multi else 1, metavar="GEOMETRY")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        p.add_argument("--format", choices=["json", "dot"], default="json")
        p.add_argument("--angles", help="angle file (JSON object) or 'zero'")
        p.add_argument("--raw-corrections", action="store_true",
                       help="interleave byproduct corrections instead of adapting angles")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--max-qubits", type=int, default=14)
        return p

    common(sub.add_parser("find", help="find the flow or a failure witness"))
    common(sub.add_parser("order", help="print the causal order of the flow"))
    pat = common(sub.add_parser("pattern", help="derive the measurement pattern"), multi=False)
    pat.add_argument("--shift", action="store_true", help="apply signal shifting")
    common(sub.add_parser("verify", help="simulate every branch of the pattern"))
    common(sub.add_parser("dot", help="influence digraph in Graphviz DOT"), multi=False)
    common(sub.add_parser("oracle", help="brute-force flows and path families"))

    gen = sub.add_parser("gen", help="generate a fixture geometry")
    gen.add_argument("family", choices=["line", "ladder", "cycle", "random"])
    gen.add_argument("params", nargs="*", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output")
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        try:
            g = generate_fixture(args.family, *args.params, seed=args.seed)
        except BadParams as e:
            print(f"gen: {e}", file=sys.stderr)
            return EXIT_INVALID
        _emit(_dumps(geo.serialize(g)), args.output)
        return EXIT_OK

    paths = list(args.inputs)
    jobs = [(args.command, p, args) for p in paths]
    if len(paths) == 1:
        code, text = _run_file(args.command, paths[0], args)
        if code == EXIT_INVALID or code == EXIT_LIMIT:
            sys.stderr.write(text)
        else:
            _emit(text, args.output)
        return code

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]
    lines = []
    for path, (code, text) in zip(paths, results):
        try:
            body = json.loads(text)
        except json.JSONDecodeError:
            body = text.strip()
        lines.append(json.dumps({"file": path, "exit": code, "result": body}))
    _emit("\n".join(lines) + "\n", args.output)
    return max(code for code, _ in results)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
