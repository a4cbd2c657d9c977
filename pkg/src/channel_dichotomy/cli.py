"""Command-line surface: sample, analyze, make, experiment.

Exit codes: 0 success, 1 usage error, 2 invalid input or parameters,
3 numerical failure.  analyze and experiment write exactly one JSON
document to stdout (experiments only when no --out file is given); all
logging goes to stderr.
"""

import argparse
import json
import logging
import secrets
import sys

import numpy as np

from .channel import (
    depolarizing_holevo,
    from_holevo,
    load_channel,
    save_channel,
)
from .errors import DimensionMismatch, InvalidInput, NumericalFailure, SizeGuardExceeded
from .experiments import (
    ExperimentConfig,
    ExperimentKind,
    dumps_result,
    result_to_json_dict,
    run_critical_rank_scan,
    run_cyclicity_density,
    run_ep_probability,
    run_extremal_fraction,
    run_rank_concentration,
    run_zero_one,
    write_experiment_csv,
    write_scan_csv,
)
from .linalg import Tolerance
from .report import analyze_channel, report_to_json_dict
from .sampling import SeedSpec, make_extremal, sample_holevo, sample_vr

logger = logging.getLogger("channel_dichotomy")


def _tol(args) -> Tolerance:
    return Tolerance(rel_eps=args.tol)


def _seed_spec(args) -> SeedSpec:
    """Explicit --seed when given, otherwise a fresh one (recorded in output)."""
    if getattr(args, "seed", None) is not None:
        return SeedSpec(args.seed)
    seed = SeedSpec(secrets.randbits(64))
    logger.info("no --seed given; generated master_seed=%d", seed.master_seed)
    return seed


def cmd_sample(args) -> int:
    seed = _seed_spec(args)
    phi = sample_vr(args.n, args.m, args.rank, seed)
    save_channel(phi, args.out, seed=seed)
    logger.info(
        "wrote rank-%d channel (n=%d, m=%d, master_seed=%d) to %s",
        args.rank, args.n, args.m, seed.master_seed, args.out,
    )
    return 0


def cmd_analyze(args) -> int:
    phi = load_channel(args.channel, _tol(args))
    report = analyze_channel(phi, _tol(args))
    print(json.dumps(report_to_json_dict(report), sort_keys=True, indent=2))
    return 0


def cmd_make(args) -> int:
    if args.kind == "extremal":
        if args.rank is None:
            raise InvalidInput("make --kind extremal requires --rank")
        phi = make_extremal(args.n, args.m, args.rank)
        save_channel(phi, args.out)
    else:  # holevo
        if args.depolarizing:
            phi = from_holevo(depolarizing_holevo(args.n, args.m), _tol(args))
            save_channel(phi, args.out)
        else:
            seed = _seed_spec(args)
            holevo = sample_holevo(args.n, args.m, args.terms, seed)
            phi = from_holevo(holevo, _tol(args))
            save_channel(phi, args.out, seed=seed)
    logger.info("wrote %s channel to %s", args.kind, args.out)
    return 0


def _emit_result(args, result) -> None:
    doc = dumps_result(result)
    if args.csv:
        write_experiment_csv(result, args.csv)
        logger.info("wrote CSV to %s", args.csv)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
        logger.info("wrote JSON result to %s", args.out)
    else:
        sys.stdout.write(doc)


def cmd_experiment_ep(args) -> int:
    config = ExperimentConfig(
        ExperimentKind.EP_PROBABILITY,
        n=args.n, m=args.m, r=args.rank, trials=args.trials,
        seed=_seed_spec(args), tol=_tol(args),
    )
    _emit_result(args, run_ep_probability(config))
    return 0


def cmd_experiment_zeroone(args) -> int:
    phi = load_channel(args.channel, _tol(args))
    result = run_zero_one(phi, args.trials, _seed_spec(args), _tol(args))
    _emit_result(args, result)
    return 0


def cmd_experiment_extremal(args) -> int:
    config = ExperimentConfig(
        ExperimentKind.EXTREMAL_FRACTION,
        n=args.n, m=args.m, r=args.rank, trials=args.trials,
        seed=_seed_spec(args), tol=_tol(args),
    )
    _emit_result(args, run_extremal_fraction(config))
    return 0


def cmd_experiment_cyclicity(args) -> int:
    result = run_cyclicity_density(args.n, args.trials, _seed_spec(args), _tol(args))
    _emit_result(args, result)
    return 0


def cmd_experiment_rankconc(args) -> int:
    config = ExperimentConfig(
        ExperimentKind.RANK_CONCENTRATION,
        n=args.n, m=args.m, r=args.rank, trials=args.trials,
        seed=_seed_spec(args), tol=_tol(args),
    )
    _emit_result(args, run_rank_concentration(config))
    return 0


def cmd_experiment_scan(args) -> int:
    results = run_critical_rank_scan(
        args.n, args.m, args.trials, _seed_spec(args), _tol(args)
    )
    doc = {
        "kind": ExperimentKind.CRITICAL_RANK_SCAN.value,
        "rows": [result_to_json_dict(res) for res in results],
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.csv:
        write_scan_csv(results, args.csv)
        logger.info("wrote scan CSV to %s", args.csv)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info("wrote scan JSON to %s", args.out)
    else:
        sys.stdout.write(text)
    return 0


def _add_tol(parser) -> None:
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="relative tolerance rel_eps (default 1e-9)")


def _add_experiment_io(parser) -> None:
    parser.add_argument("--trials", type=int, required=True)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--csv", default=None, help="write per-outcome CSV here")
    parser.add_argument("--out", default=None, help="write JSON result here instead of stdout")
    _add_tol(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="channel-dichotomy",
        description="Sample, analyze and classify unital quantum channels given as Kraus tuples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a uniform random rank-r channel")
    p.add_argument("--n", type=int, required=True, help="dim H (codomain side)")
    p.add_argument("--m", type=int, required=True, help="dim K (domain side)")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("analyze", help="rank, extremality, wedge ranks and verdict")
    p.add_argument("--channel", required=True)
    _add_tol(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("make", help="construct a reference channel")
    p.add_argument("--kind", choices=["extremal", "holevo"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank", type=int, default=None, help="extremal only")
    p.add_argument("--terms", type=int, default=1, help="holevo only: number of terms")
    p.add_argument("--depolarizing", action="store_true",
                   help="holevo only: the deterministic depolarizing form")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    _add_tol(p)
    p.set_defaults(func=cmd_make)

    exp = sub.add_parser("experiment", help="seeded Monte Carlo runs")
    esub = exp.add_subparsers(dest="experiment_kind", required=True)

    p = esub.add_parser("ep", help="entanglement-preserving fraction of random channels")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    _add_experiment_io(p)
    p.set_defaults(func=cmd_experiment_ep)

    p = esub.add_parser("zeroone", help="entangled fraction over random pure inputs")
    p.add_argument("--channel", required=True)
    _add_experiment_io(p)
    p.set_defaults(func=cmd_experiment_zeroone)

    p = esub.add_parser("extremal", help="extremal fraction of random channels")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    _add_experiment_io(p)
    p.set_defaults(func=cmd_experiment_extremal)

    p = esub.add_parser("cyclicity", help="marginally cyclic fraction of random unit vectors")
    p.add_argument("--n", type=int, required=True)
    _add_experiment_io(p)
    p.set_defaults(func=cmd_experiment_cyclicity)

    p = esub.add_parser("rankconc", help="fraction of samples attaining the nominal rank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    _add_experiment_io(p)
    p.set_defaults(func=cmd_experiment_rankconc)

    p = esub.add_parser("scan", help="EP fraction for every rank 1..mn")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_experiment_io(p)
    p.set_defaults(func=cmd_experiment_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems and 0 on --help; our contract is 1 for usage.
        return 0 if exc.code == 0 else 1
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                            format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        logger.error("could not parse JSON: %s", exc)
        return 2
    except FileNotFoundError as exc:
        logger.error("file not found: %s", exc)
        return 2
    except (InvalidInput, DimensionMismatch, SizeGuardExceeded) as exc:
        logger.error("%s", exc)
        return 2
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        logger.error("numerical failure: %s", exc)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
