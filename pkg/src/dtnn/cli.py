"""Command-line front end: synth, mask, complete, evaluate.

Heavy imports happen inside the command handlers so that ``--threads`` can
pin the BLAS thread pools through environment variables before numpy loads
(``--threads 1`` is the reproducibility mode).  Progress goes to stderr;
machine-readable output only to files.

Exit codes: 0 success, 1 usage error, 2 file format error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import os
import sys


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _parse_dims(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"dims must look like N1xN2xN3, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be integers, got {text!r}") from None
    if any(n < 1 for n in dims):
        raise argparse.ArgumentTypeError(f"dims must be positive, got {text!r}")
    return dims  # type: ignore[return-value]


def build_parser() -> _Parser:
    p = _Parser(prog="dtnn", description="Third-order tensor completion toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("synth", help="generate a low-rank-coded synthetic tensor")
    sp.add_argument("--dims", type=_parse_dims, required=True, metavar="N1xN2xN3")
    sp.add_argument("--d", type=int, required=True, help="number of dictionary atoms")
    sp.add_argument("--rank", type=int, required=True, help="rank of each coefficient slice")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-tensor", required=True)
    sp.add_argument("--out-dict", required=True)
    sp.add_argument("--out-z", required=True)

    mp = sub.add_parser("mask", help="generate an observation mask")
    mp.add_argument("--dims", type=_parse_dims, required=True, metavar="N1xN2xN3")
    mp.add_argument("--sr", type=float, required=True, help="sampling rate in (0, 1]")
    mp.add_argument("--missing-slices", type=int, default=0, help="adjacent frontal slices to knock out")
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--out", required=True)

    cp = sub.add_parser("complete", help="run a completion solver")
    cp.add_argument("--method", choices=("dtnn", "tnn", "dctnn"), required=True)
    cp.add_argument("--tensor", required=True)
    cp.add_argument("--mask", required=True)
    cp.add_argument("--d", type=int, default=None, help="atom count (dtnn only; default 5*n3)")
    cp.add_argument("--beta", type=float, default=None, help="initial penalty weight")
    cp.add_argument("--rho-z", type=float, default=None, help="coefficient proximal weight (dtnn only)")
    cp.add_argument("--rho-d", type=float, default=None, help="dictionary proximal weight (dtnn only)")
    cp.add_argument("--rho-x", type=float, default=None, help="data proximal weight (dtnn only)")
    cp.add_argument("--tol", type=float, default=None, help="relative-change stopping tolerance")
    cp.add_argument("--max-iters", type=int, default=None)
    cp.add_argument("--seed", type=int, default=0)
    cp.add_argument("--threads", type=int, default=1, help="BLAS thread budget; 1 is reproducible")
    cp.add_argument("--out", required=True)
    cp.add_argument("--report", required=True)

    ep = sub.add_parser("evaluate", help="score a reconstruction against ground truth")
    ep.add_argument("--gt", required=True)
    ep.add_argument("--rec", required=True)
    ep.add_argument("--dict-gt", default=None)
    ep.add_argument("--dict-est", default=None)
    ep.add_argument("--peak", type=float, default=1.0)
    ep.add_argument("--report", required=True)

    return p


def _set_threads(n: int) -> None:
    for var in ("OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS", "OMP_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ[var] = str(n)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _cmd_synth(args) -> int:
    from .datagen import SynthSpec, synth_low_rank_coded
    from .io_formats import write_dictionary, write_tensor

    spec = SynthSpec(dims=args.dims, d=args.d, slice_rank=args.rank, seed=args.seed)
    x, z, d_mat = synth_low_rank_coded(spec)
    write_tensor(args.out_tensor, x)
    write_dictionary(args.out_dict, d_mat)
    write_tensor(args.out_z, z)
    _info(f"synth: wrote {args.out_tensor} {x.shape}, dictionary {d_mat.shape}, coefficients {z.shape}")
    return 0


def _cmd_mask(args) -> int:
    from .datagen import random_mask, slice_missing_mask
    from .io_formats import write_mask

    if args.missing_slices > 0:
        mask = slice_missing_mask(args.dims, args.sr, args.missing_slices, args.seed)
    else:
        mask = random_mask(args.dims, args.sr, args.seed)
    write_mask(args.out, mask)
    _info(f"mask: wrote {args.out} with {int(mask.sum())} observed of {mask.size} entries")
    return 0


def _cmd_complete(args) -> int:
    _set_threads(args.threads)
    from .baseline import BaselineConfig, solve_tnn
    from .io_formats import read_mask, read_tensor, write_report, write_tensor
    from .solver import SolverConfig, solve

    o = read_tensor(args.tensor)
    mask = read_mask(args.mask)
    _info(f"complete: method={args.method} tensor={o.shape} observed={int(mask.sum())}/{mask.size}")
    if args.method == "dtnn":
        cfg = SolverConfig(seed=args.seed)
        if args.d is not None:
            cfg.d = args.d
        if args.beta is not None:
            cfg.beta = args.beta
        if args.rho_z is not None:
            cfg.rho_z = args.rho_z
        if args.rho_d is not None:
            cfg.rho_d = args.rho_d
        if args.rho_x is not None:
            cfg.rho_x = args.rho_x
        if args.tol is not None:
            cfg.stop_tol = args.tol
        if args.max_iters is not None:
            cfg.max_iters = args.max_iters
        result = solve(o, mask, cfg)
    else:
        cfg = BaselineConfig(transform="dft" if args.method == "tnn" else "dct")
        if args.beta is not None:
            cfg.beta0 = args.beta
        if args.tol is not None:
            cfg.stop_tol = args.tol
        if args.max_iters is not None:
            cfg.max_iters = args.max_iters
        result = solve_tnn(o, mask, cfg)
    write_tensor(args.out, result.x)
    config = dict(result.config)
    config.update(threads=args.threads, tensor=args.tensor, mask=args.mask)
    write_report(args.report, trace=result.trace, config=config)
    final_obj = result.trace[-1].objective if result.trace else float("nan")
    _info(f"complete: {result.iterations} iterations, final objective {final_obj:.6g}")
    return 0


def _cmd_evaluate(args) -> int:
    from .io_formats import read_dictionary, read_tensor, write_report
    from .metrics import compute_metrics

    if (args.dict_gt is None) != (args.dict_est is None):
        raise _UsageError("--dict-gt and --dict-est must be given together")
    gt = read_tensor(args.gt)
    rec = read_tensor(args.rec)
    dict_gt = read_dictionary(args.dict_gt) if args.dict_gt else None
    dict_est = read_dictionary(args.dict_est) if args.dict_est else None
    report = compute_metrics(gt, rec, peak=args.peak, dict_est=dict_est, dict_gt=dict_gt)
    config = {"command": "evaluate", "gt": args.gt, "rec": args.rec, "peak": args.peak}
    write_report(args.report, metrics=report, config=config)
    _info(
        f"evaluate: psnr={report.psnr_mean:.4f} dB ssim={report.ssim_mean:.4f} rmse={report.rmse:.6g}"
    )
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "mask": _cmd_mask,
    "complete": _cmd_complete,
    "evaluate": _cmd_evaluate,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    from .errors import FormatError, InvalidProblemError, MetricUndefinedError, NumericError, ShapeError

    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, MetricUndefinedError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (InvalidProblemError, ShapeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
