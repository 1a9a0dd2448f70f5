"""Command-line front end: SNR sweeps, EXIT curves, signatures, trellis dumps."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .exit_charts import emsd_transfer_curve, etcmd_transfer_curve
from .harness import SimConfig, sweep
from .shaping import make_signatures, min_pairwise_distance, select_params
from .superposition import SuperConstellation
from .trellis import FOUR_STATE, TWO_STATE, build_trellis

_CODES = {"four_state": FOUR_STATE, "two_state": TWO_STATE}

# SimConfig keys settable from a --config file, with their value parsers.
_CONFIG_PARSERS = {
    "num_streams": int,
    "length": int,
    "code": str,
    "signature_design": str,
    "interleaver_design": str,
    "n_it": int,
    "snr_start": float,
    "snr_stop": float,
    "snr_step": float,
    "max_blocks": int,
    "min_block_errors": int,
    "master_seed": int,
    "noiseless": lambda v: v.lower() in ("1", "true", "yes"),
    "batch_size": int,
}


def read_config_file(path: str) -> dict:
    """Parse a flat UTF-8 key=value file (one pair per line, # comments)."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown key '{key}'")
            values[key] = _CONFIG_PARSERS[key](value)
    return values


def _resolve_code(name):
    if name is None or name == "auto":
        return None
    if name not in _CODES:
        raise ValueError(f"unknown code '{name}' (choose from {sorted(_CODES)})")
    return _CODES[name]


def _build_sim_config(args) -> SimConfig:
    values = read_config_file(args.config) if args.config else {}
    for key in _CONFIG_PARSERS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    if "code" in values:
        values["code"] = _resolve_code(values["code"])
    if values.get("signature_design") == "auto":
        values["signature_design"] = None
    if "num_streams" not in values:
        raise ValueError("num_streams is required (flag or config file)")
    return SimConfig(**values)


def _add_simulate_parser(sub):
    p = sub.add_parser("simulate", help="run an SNR sweep and emit CSV")
    p.add_argument("--config", help="flat key=value file; flags override it")
    p.add_argument("--num-streams", "-k", dest="num_streams", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--code", choices=sorted(_CODES) + ["auto"])
    p.add_argument("--signature-design", dest="signature_design")
    p.add_argument("--interleaver-design", dest="interleaver_design")
    p.add_argument("--n-it", dest="n_it", type=int)
    p.add_argument("--snr-start", dest="snr_start", type=float)
    p.add_argument("--snr-stop", dest="snr_stop", type=float)
    p.add_argument("--snr-step", dest="snr_step", type=float)
    p.add_argument("--max-blocks", dest="max_blocks", type=int)
    p.add_argument("--min-block-errors", dest="min_block_errors", type=int)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--noiseless", action="store_const", const=True, default=None)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o", help="CSV path (default: stdout)")


def _add_exit_parser(sub):
    p = sub.add_parser("exit", help="measure EXIT transfer curves")
    p.add_argument("--num-streams", "-k", dest="num_streams", type=int, required=True)
    p.add_argument("--snr-db", dest="snr_db", type=float, required=True,
                   help="aggregate SNR for the detector curve")
    p.add_argument("--code", choices=sorted(_CODES) + ["auto"], default="auto")
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--length", type=int, default=4800)
    p.add_argument("--num-blocks", dest="num_blocks", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", help="CSV path (default: stdout)")


def _add_signatures_parser(sub):
    p = sub.add_parser("signatures", help="emit signature designs and d_min")
    p.add_argument("--num-streams", "-k", dest="num_streams", type=int, required=True)
    p.add_argument("--design", default="auto")
    p.add_argument("--length", type=int, default=240)
    p.add_argument("--seed", type=int, default=0)


def _add_trellis_parser(sub):
    p = sub.add_parser("trellis", help="dump a code's trellis table")
    p.add_argument("--code", choices=sorted(_CODES), required=True)


def _write_output(path, writer) -> int:
    """Run ``writer(sink)`` against the path (or stdout); map OSError to rc 1."""
    if path is None:
        sink, owns = sys.stdout, False
    else:
        try:
            sink, owns = open(path, "w", encoding="utf-8", newline=""), True
        except OSError as exc:
            print(f"error: cannot open {path} ({exc})", file=sys.stderr)
            return 1
    try:
        writer(sink)
    except OSError as exc:
        target = path or "<stdout>"
        print(f"error: writing {target} failed ({exc}); the file may be partial",
              file=sys.stderr)
        return 1
    finally:
        if owns:
            sink.close()
    return 0


def _cmd_simulate(args) -> int:
    config = _build_sim_config(args)
    return _write_output(
        args.output, lambda sink: sweep(config, out=sink, workers=args.workers))


def _cmd_exit(args) -> int:
    if args.points < 2:
        raise ValueError("need at least two grid points")
    grid = np.linspace(0.0, 2.0, args.points)
    code = _resolve_code(args.code)
    if code is None:
        code = select_params(args.num_streams).code
    emsd = emsd_transfer_curve(args.num_streams, args.snr_db, grid,
                               length=args.length, num_blocks=args.num_blocks,
                               seed=args.seed)
    etcmd = etcmd_transfer_curve(code, grid, length=args.length,
                                 num_blocks=args.num_blocks, seed=args.seed)

    def write_rows(sink):
        sink.write("component,K,snr_db,i_in,i_out\n")
        for curve, name in ((emsd, "emsd"), (etcmd, "etcmd")):
            for i_in, i_out in zip(curve.i_in, curve.i_out):
                sink.write(f"{name},{args.num_streams},{args.snr_db!r},"
                           f"{float(i_in)!r},{float(i_out)!r}\n")

    return _write_output(args.output, write_rows)


def _cmd_signatures(args) -> int:
    design = args.design
    if design == "auto":
        design = select_params(args.num_streams).signature_design
    sigs = make_signatures(design, args.num_streams, args.length, seed=args.seed)
    sc = SuperConstellation(sigs, length=args.length)
    print(f"design={design} K={args.num_streams} length={args.length}")
    if all(s.is_constant for s in sigs):
        d = min_pairwise_distance(sc.points(0))
        print(f"d_min={d!r}")
    else:
        dmins = [min_pairwise_distance(sc.points(l)) for l in range(args.length)]
        print(f"d_min_l0={min_pairwise_distance(sc.points(0))!r} "
              f"d_min_worst={min(dmins)!r} d_min_best={max(dmins)!r}")
    for k, sig in enumerate(sigs):
        if sig.is_constant:
            c = complex(sig.values)
            print(f"k={k} c={c.real:+.12f}{c.imag:+.12f}j")
        else:
            head = ",".join(f"{c.real:+.6f}{c.imag:+.6f}j"
                            for c in sig.sequence(args.length)[:4])
            print(f"k={k} time-varying first4=[{head}]")
    return 0


def _cmd_trellis(args) -> int:
    code = _CODES[args.code]
    trellis = build_trellis(code)
    print(f"code=({code.g1:o},{code.g2:o})_8 states={code.num_states} "
          f"memory={code.memory}")
    print("state,input,next_state,coded_first,coded_second,symbol_index")
    for s in range(code.num_states):
        for u in (0, 1):
            c1, c2 = trellis.coded_bits[s, u]
            print(f"{s},{u},{trellis.next_state[s, u]},{c1},{c2},"
                  f"{trellis.symbol[s, u]}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="etcma",
        description="Link-level simulation of overloaded trellis-coded "
                    "multiple access on the AWGN channel.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate_parser(sub)
    _add_exit_parser(sub)
    _add_signatures_parser(sub)
    _add_trellis_parser(sub)
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "exit": _cmd_exit,
        "signatures": _cmd_signatures,
        "trellis": _cmd_trellis,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
