"""Command-line entry point.

Every subcommand writes one canonical JSON document (sorted keys, no spaces)
to stdout or ``--out`` and a human-readable listing to stderr.  Exit codes:
0 success, 1 failed check or failed self-validation, 2 invalid input,
3 resource limit, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .colorings import BLUE, RED, Coloring, is_complement_symmetric, lubell_mass
from .constructions import (
    antichain_extract_blue,
    antichain_lower_coloring,
    algebra_from_layered,
    halfslice_strategy,
    halfslice_success_rate,
    strategy_q2qn,
    strategy_qnqn,
    symmetric_chain_partition,
)
from .detect import (
    DEFAULT_NODE_BUDGET,
    count_mono_qn,
    find_boolean_algebra,
    find_layered_subcube,
    find_mono_qn,
    find_poset_copy,
)
from .embeddings import DEFAULT_BUDGET, count_embeddings_bounds, count_embeddings_exact, enumerate_embeddings
from .errors import InvalidInputError, NotApplicableError, ResourceLimitError, ValidationFailure
from .lattice import Poset, format_mask, mask_of
from .ramsey import (
    DEFAULT_ANNEAL_BUDGET,
    DEFAULT_SCAN_BUDGET,
    AnnealConfig,
    multicolor_ramsey,
    ramsey_scan,
    witness_search,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _say(*lines):
    for line in lines:
        print(line, file=sys.stderr)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from None


def _load_coloring(path) -> Coloring:
    return Coloring.from_json(_read_json(path))


def _load_poset(path) -> Poset:
    return Poset.from_json(_read_json(path))


def _load_family(path) -> list[int]:
    """A JSON list whose items are masks or lists of (1-based) elements."""
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("family")
    if not isinstance(data, list):
        raise InvalidInputError("family file must hold a list of sets")
    out = []
    for item in data:
        if isinstance(item, int) and not isinstance(item, bool):
            out.append(item)
        elif isinstance(item, list):
            out.append(mask_of(item))
        else:
            raise InvalidInputError(f"cannot read {item!r} as a set")
    return out


def _load_fixed(path) -> dict[int, int]:
    """Pinned cells: a JSON list of [mask, color] pairs."""
    data = _read_json(path)
    try:
        return {int(S): int(col) for S, col in data}
    except (TypeError, ValueError):
        raise InvalidInputError("fixed-cell file must list [mask, color] pairs") from None


def _budget(a, default: int) -> int:
    if a.budget is None:
        return default
    if a.budget < 1:
        raise InvalidInputError("--budget must be positive")
    return a.budget


def _color_name(color: int) -> str:
    return {RED: "red", BLUE: "blue"}.get(color, f"color {color}")


def _list_sets(masks) -> str:
    return " ".join(format_mask(m) for m in masks)


# ---------------------------------------------------------------------------
# Subcommands; each returns (result, exit code)


def cmd_count(a):
    exact = count_embeddings_exact(a.n, a.N)
    if not a.bounds:
        _say(f"e({a.n},{a.N}) = {exact}")
        return exact, EXIT_OK
    lo, hi = count_embeddings_bounds(a.n, a.N)
    _say(f"{lo} <= e({a.n},{a.N}) = {exact} <= {hi}")
    return {"n": a.n, "N": a.N, "exact": exact, "lower": lo, "upper": hi}, EXIT_OK


def cmd_enumerate(a):
    out = []
    for f in enumerate_embeddings(a.n, a.N, start=a.start, stop=a.stop, budget=_budget(a, DEFAULT_BUDGET)):
        out.append(f.to_json())
        _say(_list_sets(f.image))
    return out, EXIT_OK


def cmd_detect(a):
    if a.family is not None:
        if a.algebra is None:
            raise InvalidInputError("--family needs --algebra DIM")
        w = find_boolean_algebra(_load_family(a.family), a.algebra, budget=_budget(a, DEFAULT_NODE_BUDGET))
        _say("no Boolean algebra found" if w is None else w.describe())
        return None if w is None else w.to_json(), EXIT_OK
    if a.file is None:
        raise InvalidInputError("detect needs --file COLORING or --family FILE")
    c = _load_coloring(a.file)
    if a.layered is not None:
        S = find_layered_subcube(c, a.layered)
        _say("no layered sub-cube" if S is None else f"layered on {format_mask(S)}")
        return S, EXIT_OK
    colors = range(c.k) if a.color is None else [a.color]
    result = {}
    for col in colors:
        if a.poset is not None:
            imgs = find_poset_copy(c, _load_poset(a.poset), col, budget=_budget(a, DEFAULT_NODE_BUDGET))
            found = imgs
        elif a.qn is not None:
            f = find_mono_qn(c, a.qn, col, budget=_budget(a, DEFAULT_NODE_BUDGET))
            imgs = None if f is None else list(f.image)
            found = None if f is None else f.to_json()
        else:
            raise InvalidInputError("detect needs --poset, --qn, --layered or --algebra")
        result[str(col)] = found
        _say(f"{_color_name(col)}: " + ("none" if imgs is None else _list_sets(imgs)))
    return result, EXIT_OK


def cmd_verify(a):
    c = _load_coloring(a.file)
    n = a.no_mono_q
    report = {"N": c.N, "n": n, "complement_symmetric": c.k == 2 and is_complement_symmetric(c)}
    try:
        red, blue = count_mono_qn(c, n)
        report.update(red=red, blue=blue)
        clean = red == 0 and blue == 0
    except ResourceLimitError:
        # copy table too large; existence search is still exact
        hits = [find_mono_qn(c, n, col, budget=_budget(a, DEFAULT_NODE_BUDGET)) for col in (RED, BLUE)]
        report.update(red=None, blue=None, mono_found=any(h is not None for h in hits))
        clean = not report["mono_found"]
    report["ok"] = clean
    _say(f"monochromatic Q_{n}: " + ("none" if clean else "present"))
    return report, EXIT_OK if clean else EXIT_CHECK_FAILED


def cmd_strategy(a):
    c = _load_coloring(a.file)
    if a.name == "qnqn":
        color, f = strategy_qnqn(c, a.n)
    elif a.name == "q2qn":
        color, f = strategy_q2qn(c, a.n)
    elif a.name == "antichain":
        color, f = BLUE, antichain_extract_blue(c)
    else:
        color, f = RED, halfslice_strategy(c, a.n, a.m)
        if f is None:
            _say("half-slice strategy failed: some candidate family is all blue")
            return None, EXIT_CHECK_FAILED
    _say(f"{_color_name(color)} Q_{f.n}: {_list_sets(f.image)}", "validated: embedding, monochromatic")
    return {"color": color, "embedding": f.to_json(), "validated": True}, EXIT_OK


def cmd_ramsey(a):
    if a.mode == "exact":
        if a.p is None or a.q is None:
            raise InvalidInputError("ramsey exact needs --p and --q")
        P, Q = _load_poset(a.p), _load_poset(a.q)
        verdicts = ramsey_scan(
            P, Q, a.nmax, budget=_budget(a, DEFAULT_SCAN_BUDGET), workers=a.workers,
            permutation_reduction=a.permutations, checkpoint=a.checkpoint,
        )
        for v in verdicts:
            _say(f"N={v.N}: " + ("arrows" if v.holds else "counterexample " + v.counterexample.to_json()["cells_hex"]))
        if a.verdicts:
            Path(a.verdicts).write_text(canonical_json([v.to_json() for v in verdicts]) + "\n")
        return verdicts[-1].N, EXIT_OK
    return _witness_search(a)


def _witness_search(a):
    cfg = AnnealConfig.from_file(a.config) if a.config else AnnealConfig()
    budget = _budget(a, DEFAULT_ANNEAL_BUDGET)
    fixed = _load_fixed(a.fixed) if a.fixed else None
    c = witness_search(a.N, a.n, budget=budget, seed=a.seed, symmetric=a.symmetric, config=cfg, fixed=fixed)
    if c is None:
        raise ResourceLimitError(f"no witness within {budget} annealing steps")
    if find_mono_qn(c, a.n, RED) is not None or find_mono_qn(c, a.n, BLUE) is not None:
        raise ValidationFailure("witness failed the independent re-check")
    _say(f"witness for Q_{a.N} without monochromatic Q_{a.n}", "red: " + _list_sets(c.color_class(RED)))
    return c.to_json(), EXIT_OK


def cmd_witness(a):
    if a.kind == "antichain":
        c = antichain_lower_coloring(a.n)
    elif a.kind == "multicolor":
        c = multicolor_ramsey(Poset.boolean_lattice(1), a.k, 0, lower_bound_only=True).counterexample
    else:
        return _witness_search(a)
    for col in range(c.k):
        _say(f"{_color_name(col)}: {_list_sets(c.color_class(col))}")
    return c.to_json(), EXIT_OK


def cmd_chains(a):
    chains = symmetric_chain_partition(a.N)
    for ch in chains:
        _say(" < ".join(format_mask(x) for x in ch))
    return chains, EXIT_OK


def cmd_algebra(a):
    c = _load_coloring(a.file)
    found = algebra_from_layered(c, a.n)
    if found is None:
        _say(f"no monochromatic Hilbert cube of dimension {a.n} among sizes 0..{c.N}")
        return None, EXIT_OK
    color, w = found
    _say(f"{_color_name(color)}: {w.describe()}")
    return {"color": color, **w.to_json()}, EXIT_OK


def cmd_lubell(a):
    if a.family is not None:
        if a.N is None:
            raise InvalidInputError("--family needs --N")
        mass = lubell_mass(_load_family(a.family), a.N)
        _say(f"mass = {mass}")
        return {"N": a.N, "mass": str(mass)}, EXIT_OK
    if a.file is None:
        raise InvalidInputError("lubell needs --family or --file")
    c = _load_coloring(a.file)
    masses = [lubell_mass(c.color_class(col), c.N) for col in range(c.k)]
    for col, m in enumerate(masses):
        _say(f"{_color_name(col)}: {m}")
    return {"N": c.N, "masses": [str(m) for m in masses], "total": str(sum(masses))}, EXIT_OK


def cmd_montecarlo(a):
    res = halfslice_success_rate(a.n, a.m, a.trials, a.seed)
    _say(f"{res['successes']}/{res['trials']} colorings of Q_{res['N']} handled")
    return res, EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--record", help="write a run record (parameters, versions, digest) here")

    p = _Parser(prog="posetramsey", description="Ramsey problems for Boolean lattices.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("count", parents=[common], help="number of embeddings Q_n -> Q_N")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--bounds", action="store_true", help="also report the sandwich bounds")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("enumerate", parents=[common], help="list embeddings Q_n -> Q_N by rank")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--stop", type=int, default=None)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("detect", parents=[common], help="search a coloring or family for structure")
    s.add_argument("--file", help="coloring file")
    s.add_argument("--poset", help="poset JSON file")
    s.add_argument("--qn", type=int, help="dimension of the Boolean lattice to find")
    s.add_argument("--color", type=int, help="only this color (default: all)")
    s.add_argument("--layered", type=int, help="size of a layered sub-cube to find")
    s.add_argument("--family", help="family file for --algebra")
    s.add_argument("--algebra", type=int, help="dimension of a Boolean algebra to find")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("verify-coloring", parents=[common], help="check a coloring has no monochromatic Q_n")
    s.add_argument("--file", required=True)
    s.add_argument("--no-mono-q", type=int, required=True, metavar="N")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("strategy", parents=[common], help="run a constructive strategy on a coloring")
    s.add_argument("name", choices=["qnqn", "q2qn", "antichain", "halfslice"])
    s.add_argument("--file", required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--m", type=int, default=2, help="block size for halfslice")
    s.set_defaults(func=cmd_strategy)

    s = sub.add_parser("ramsey", parents=[common], help="exact Ramsey numbers or witness colorings")
    s.add_argument("mode", choices=["exact", "witness"])
    s.add_argument("--p", help="poset JSON for red")
    s.add_argument("--q", help="poset JSON for blue")
    s.add_argument("--nmax", type=int, default=5)
    s.add_argument("--checkpoint")
    s.add_argument("--permutations", action="store_true", help="also reduce by ground-set permutations")
    s.add_argument("--verdicts", help="write every per-N verdict here")
    s.add_argument("--N", type=int, default=6)
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--symmetric", action="store_true")
    s.add_argument("--config", help="annealing parameters (JSON)")
    s.add_argument("--fixed", help="cells pinned during the search, JSON list of [mask, color]")
    s.set_defaults(func=cmd_ramsey)

    s = sub.add_parser("witness", parents=[common], help="lower-bound colorings")
    s.add_argument("kind", choices=["anneal", "antichain", "multicolor"])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--N", type=int, default=6)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--symmetric", action="store_true")
    s.add_argument("--config")
    s.add_argument("--fixed")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("chains", parents=[common], help="symmetric chain partition of Q_N")
    s.add_argument("--N", type=int, required=True)
    s.set_defaults(func=cmd_chains)

    s = sub.add_parser("algebra", parents=[common], help="Boolean algebra in a layered coloring")
    s.add_argument("--file", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_algebra)

    s = sub.add_parser("lubell", parents=[common], help="exact Lubell masses")
    s.add_argument("--file", help="coloring file (mass of each color class)")
    s.add_argument("--family", help="family file")
    s.add_argument("--N", type=int)
    s.set_defaults(func=cmd_lubell)

    s = sub.add_parser("montecarlo", parents=[common], help="half-slice strategy success rate")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--trials", type=int, default=100)
    s.set_defaults(func=cmd_montecarlo)
    return p


def _run_record(args, argv, text, wall) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "record")}
    return {
        "subcommand": args.command,
        "parameters": params,
        "argv": list(argv),
        "seed": args.seed,
        "versions": {"posetramsey": __version__, "python": platform.python_version(), "numpy": np.__version__},
        "wall_seconds": round(wall, 6),
        "digest": hashlib.sha256(text.encode()).hexdigest(),
    }


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _say(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        result, code = args.func(args)
    except InvalidInputError as exc:
        _say(f"invalid input: {exc}")
        return EXIT_INVALID
    except NotApplicableError as exc:
        _say(f"not applicable: {exc}")
        return EXIT_INVALID
    except ResourceLimitError as exc:
        _say(f"resource limit: {exc}")
        return EXIT_RESOURCE
    except ValidationFailure as exc:
        _say(f"validation failed: {exc}")
        return EXIT_CHECK_FAILED
    text = canonical_json(result) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.record:
        rec = _run_record(args, argv, text, time.perf_counter() - t0)
        Path(args.record).write_text(canonical_json(rec) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
