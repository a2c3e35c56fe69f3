"""Command-line front end: validate, homology, spectral, verify."""

from __future__ import annotations

import argparse
import os
import sys

from . import reports
from .chains import DEFAULT_MEMORY_BUDGET, MemoryBudgetExceeded, PartError, parse_part
from .homology import homology_of
from .modules import ModuleError, load_module, parse_weights, trivial_module, validate_action
from .rings import Ring
from .spectral import SpectralSequence, degenerate_filtration
from .structures import AxiomError, StructureParseError, fixtures, load_structure
from .verify import CHECKS, UnknownSelector, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MEMORY = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, msg, code=EXIT_USAGE):
        super().__init__(msg)
        self.code = code


def _read_structure(name):
    """A structure from a JSON file path or a built-in fixture name."""
    if os.path.exists(name):
        with open(name, "rb") as fh:
            return load_structure(fh.read())
    fx = fixtures()
    if name in fx:
        return fx[name]
    raise CliError(f"{name}: no such file or built-in fixture (built-ins: {', '.join(fx)})")


def _inputs(args):
    try:
        X = _read_structure(args.structure)
        ring = Ring.parse(args.ring)
        if args.module:
            with open(args.module, "rb") as fh:
                M = load_module(fh.read(), os.path.dirname(args.module) or ".", structure=X)
            if M.ring != ring:
                raise CliError(f"module is over {M.ring} but --ring is {ring}")
        else:
            M = trivial_module(X, args.rank, ring)
        w = args.weights if args.weights is not None else ",".join(
            ["1"] + ["0"] * (X.nops - 1))
        w = parse_weights(w, ring, X.nops)
    except (StructureParseError, AxiomError, ModuleError, ValueError, OSError) as e:
        raise CliError(str(e)) from None
    return X, M, w


def _emit(text):
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_validate(args) -> int:
    results = []
    try:
        X = _read_structure(args.structure)
        results.append({"kind": "validation", "what": "structure", "ok": True, "error": None,
                        "witness": None, "levels": list(X.levels)})
    except StructureParseError as e:
        raise CliError(f"parse error: {e}") from None
    except AxiomError as e:
        results.append({"kind": "validation", "what": "structure", "ok": False, "error": str(e),
                        "witness": list(e.witness) if e.witness else None})
        X = None
    except OSError as e:
        raise CliError(str(e)) from None
    if args.module and X is not None:
        try:
            with open(args.module, "rb") as fh:
                M = load_module(fh.read(), os.path.dirname(args.module) or ".", structure=X)
        except (ModuleError, ValueError, OSError) as e:
            raise CliError(f"module: {e}") from None
        ok, wit = validate_action(M)
        results.append({"kind": "validation", "what": "module", "ok": ok,
                        "error": None if ok else "action axioms fail",
                        "witness": list(wit) if wit else None})
    if args.format == "records":
        _emit(reports.records(results))
    else:
        _emit(reports.validation_table(results))
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_FAIL


def cmd_homology(args) -> int:
    X, M, w = _inputs(args)
    try:
        part = parse_part(args.part)
        H = homology_of(X, M, w, part, args.max_degree, args.augmented, args.memory_budget)
    except PartError as e:
        raise CliError(str(e), EXIT_FAIL) from None
    except ValueError as e:
        raise CliError(str(e)) from None
    if args.format == "records":
        meta = {"structure": str(X), "ring": str(M.ring), "rank": M.rank, "weights": list(w),
                "part": args.part, "augmented": args.augmented, "max_degree": args.max_degree}
        _emit(reports.records(reports.homology_records(H, meta)))
    else:
        _emit(reports.homology_table(H))
    return EXIT_OK


def cmd_spectral(args) -> int:
    X, M, w = _inputs(args)
    if not M.ring.is_field:
        raise CliError("spectral pages are computed over Q or a prime field")
    N = args.max_degree
    F = degenerate_filtration(X, M, w, N + 1, args.memory_budget)
    S = SpectralSequence(F, track=False)

    def cut(d):
        return {k: v for k, v in d.items() if v and k[0] + k[1] <= N}

    top = max(S.stable_page, 2)
    pages = {r: cut(S.dims(r)) for r in range(1, top + 1)}
    pages["inf"] = cut(S.infinity())
    if args.format == "records":
        meta = {"structure": str(X), "ring": str(M.ring), "rank": M.rank, "weights": list(w),
                "max_degree": N, "stable_page": S.stable_page}
        _emit(reports.records(reports.spectral_records(pages, meta)))
    else:
        _emit(reports.spectral_table(pages))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        entries = run_verify(args.selectors, args.max_degree, args.seed, args.fixture)
    except (UnknownSelector, KeyError) as e:
        raise CliError(e.args[0] if e.args else str(e)) from None
    if args.format == "records":
        _emit(reports.records(reports.verify_records(entries)))
    else:
        _emit(reports.verify_table(entries))
    return EXIT_OK if all(e.ok for e in entries) else EXIT_FAIL


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="spindlehom",
                                description="Homology of multispindles: splittings, spectral "
                                            "sequences and filtered isomorphisms.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, computing=True):
        sp.add_argument("--format", choices=("table", "records"), default="table")
        if not computing:
            return
        sp.add_argument("structure", help="structure JSON file or built-in fixture name")
        sp.add_argument("--module", help="module JSON file (default: trivial module)")
        sp.add_argument("--rank", type=_nonneg, default=1, help="rank of the default trivial module")
        sp.add_argument("--weights", help="comma-separated weights, one per operation")
        sp.add_argument("--ring", default="Z", help="Z, Q or Fp:<p>")
        sp.add_argument("--max-degree", type=_nonneg, default=3)
        sp.add_argument("--memory-budget", type=_nonneg, default=DEFAULT_MEMORY_BUDGET)

    sp = sub.add_parser("validate", help="check structure (and module) axioms")
    sp.add_argument("structure")
    sp.add_argument("--module")
    common(sp, computing=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("homology", help="homology table of a part")
    common(sp)
    sp.add_argument("--part", default="full",
                    help="full, degenerate, normalized, late or filtration:<p>")
    sp.add_argument("--augmented", action="store_true")
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("spectral", help="pages of the degenerate spectral sequence")
    common(sp)
    sp.set_defaults(func=cmd_spectral)

    sp = sub.add_parser("verify", help="run theorem checks on the built-in fixtures")
    sp.add_argument("selectors", nargs="*", metavar="selector",
                    help=f"any of: {', '.join(CHECKS)} (default: all)")
    sp.add_argument("--fixture", action="append", help="restrict to a built-in fixture")
    sp.add_argument("--max-degree", type=_nonneg, default=None,
                    help="override each check's degree bound")
    sp.add_argument("--seed", type=_nonneg, default=0, help="first seed of the random lemma instances")
    common(sp, computing=False)
    sp.set_defaults(func=cmd_verify)
    return p


def _glue_weights(argv):
    """Let ``--weights -1,1`` through: argparse would read -1,1 as an option."""
    out, it = [], iter(argv)
    for a in it:
        if a == "--weights":
            out.append(f"--weights={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_weights(argv))
    try:
        return args.func(args)
    except CliError as e:
        print(f"spindlehom {args.command}: {e}", file=sys.stderr)
        return e.code
    except MemoryBudgetExceeded as e:
        print(f"spindlehom {args.command}: refused, {e}", file=sys.stderr)
        return EXIT_MEMORY


if __name__ == "__main__":
    sys.exit(main())
