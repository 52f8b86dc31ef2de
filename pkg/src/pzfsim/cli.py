"""Command-line front end.

Three subcommands: ``sweep`` runs a Monte Carlo spectral-efficiency sweep
and writes CSV, ``bound`` tabulates the closed-form rate expressions, and
``stats`` runs the coupling-moment measurement.  Exit codes: 0 success,
1 validation error (single-line diagnostic on stderr), 2 runtime failure
(I/O, or a sweep aborting on singular trials).
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

from ._version import __version__
from .analysis import SystemScale, fczf_asymptotic_rate, pzf_rate_bound
from .channels import MmWaveParams
from .errors import ConfigError, HarnessError, PzfSimError
from .harness import SimulationConfig, coupling_statistics, run_sweep, write_csv


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports flag problems as exit code 1.

    Also widens the negative-number matcher so grid values such as
    ``--snr -10:2:10`` parse as arguments rather than flags.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d+[\d.,:eE+-]*$")

    def error(self, message):
        raise _UsageError(message)


_SWEEP_DEFAULTS = {
    "antennas": 128,
    "users": 4,
    "channel": "rayleigh",
    "snr_db": "-10:2:10",
    "trials": 1000,
    "seed": 0,
    "schemes": "pzf,fczf",
    "quant_bits": None,
    "quant_circular": True,
    "emit_closed_form": False,
    "paths": 10,
    "spacing": 0.5,
    "bmimo_on_rayleigh": False,
}

# config-file key -> value converter
_CONVERTERS = {
    "antennas": int,
    "users": int,
    "channel": str,
    "snr_db": str,
    "trials": int,
    "seed": int,
    "schemes": str,
    "quant_bits": int,
    "quant_circular": None,  # bool
    "emit_closed_form": None,
    "paths": int,
    "spacing": float,
    "bmimo_on_rayleigh": None,
}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _load_config_file(path: str) -> dict:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    settings = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONVERTERS:
                raise ConfigError(f"{path}:{lineno}: unknown config key: {key}")
            convert = _CONVERTERS[key]
            try:
                settings[key] = _parse_bool(value) if convert is None else convert(value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return settings


def _parse_snr_grid(text: str) -> tuple:
    """``start:step:stop`` (inclusive), a comma list, or a single value."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("snr range must be start:step:stop")
        try:
            start, step, stop = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad snr range: {text!r}") from exc
        if step <= 0:
            raise ConfigError("snr range step must be positive")
        if stop < start:
            raise ConfigError("snr range stop must not precede start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(count))
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad snr grid: {text!r}") from exc


def _parse_schemes(text: str):
    """Expand scheme tokens; ``pzf_q<B>`` selects the quantized scheme at B bits."""
    schemes = set()
    quant_bits = None
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if token in ("pzf", "fczf", "bmimo", "pzf_quantized"):
            schemes.add(token)
        elif token.startswith("pzf_q") and token[5:].isdigit():
            bits = int(token[5:])
            if quant_bits is not None and quant_bits != bits:
                raise ConfigError("conflicting quantization bit widths in schemes")
            quant_bits = bits
            schemes.add("pzf_quantized")
        else:
            raise ConfigError(f"unknown scheme: {token}")
    return schemes, quant_bits


def _resolve_workers(threads) -> int:
    if threads is None:
        threads = int(os.environ.get("PZFSIM_THREADS", "1"))
    if threads < 0:
        raise ConfigError("threads must be nonnegative")
    return threads


def _open_sink(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _cmd_sweep(args) -> int:
    settings = dict(_SWEEP_DEFAULTS)
    if args.config:
        settings.update(_load_config_file(args.config))
    overrides = {
        "antennas": args.antennas,
        "users": args.users,
        "channel": args.channel,
        "snr_db": args.snr,
        "trials": args.trials,
        "seed": args.seed,
        "schemes": args.schemes,
        "quant_bits": args.quant_bits,
        "paths": args.paths,
        "spacing": args.spacing,
    }
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    if args.literal_quantization:
        settings["quant_circular"] = False
    if args.closed_form:
        settings["emit_closed_form"] = True
    if args.bmimo_on_rayleigh:
        settings["bmimo_on_rayleigh"] = True

    schemes, token_bits = _parse_schemes(settings["schemes"])
    quant_bits = settings["quant_bits"]
    if token_bits is not None:
        if quant_bits is not None and quant_bits != token_bits:
            raise ConfigError("quant_bits conflicts with the pzf_q<B> scheme token")
        quant_bits = token_bits

    channel = settings["channel"]
    config = SimulationConfig(
        antennas=settings["antennas"],
        users=settings["users"],
        channel=channel,
        snr_grid_db=_parse_snr_grid(str(settings["snr_db"])),
        trials=settings["trials"],
        seed=settings["seed"],
        schemes=tuple(schemes),
        mmwave=MmWaveParams(settings["paths"], settings["spacing"])
        if channel == "mmwave" else None,
        quant_bits=quant_bits,
        quant_circular=settings["quant_circular"],
        emit_closed_form=settings["emit_closed_form"],
        bmimo_on_rayleigh=settings["bmimo_on_rayleigh"],
    )
    result = run_sweep(config, workers=_resolve_workers(args.threads))
    sink, owned = _open_sink(args.out)
    try:
        write_csv(result, sink)
    finally:
        if owned:
            sink.close()
    return 0


def _cmd_bound(args) -> int:
    grid = _parse_snr_grid(args.snr)
    if not grid:
        raise ConfigError("snr grid must not be empty")
    lines = ["snr_db pzf_bound_bps_hz fczf_asymptotic_bps_hz"]
    for snr in grid:
        scale = SystemScale(args.antennas, args.users, 10.0 ** (snr / 10.0))
        lines.append(" ".join((
            format(snr, ".10g"),
            format(pzf_rate_bound(scale), ".10g"),
            format(fczf_asymptotic_rate(scale), ".10g"),
        )))
    sink, owned = _open_sink(args.out)
    try:
        sink.write("\n".join(lines) + "\n")
    finally:
        if owned:
            sink.close()
    return 0


def _cmd_stats(args) -> int:
    stats = coupling_statistics(args.antennas, args.trials, args.seed)
    reference = {
        "diagonal_mean": math.sqrt(math.pi * args.antennas) / 2.0,
        "diagonal_variance": 1.0 - math.pi / 4.0,
        "offdiagonal_mean_real": 0.0,
        "offdiagonal_mean_imag": 0.0,
        "offdiagonal_variance": 1.0,
    }
    measured = {
        "diagonal_mean": stats.diagonal_mean,
        "diagonal_variance": stats.diagonal_variance,
        "offdiagonal_mean_real": stats.offdiagonal_mean.real,
        "offdiagonal_mean_imag": stats.offdiagonal_mean.imag,
        "offdiagonal_variance": stats.offdiagonal_variance,
    }
    lines = ["statistic,value,large_array_reference"]
    for name, value in measured.items():
        lines.append(f"{name},{format(value, '.10g')},{format(reference[name], '.10g')}")
    sink, owned = _open_sink(args.out)
    try:
        sink.write("\n".join(lines) + "\n")
    finally:
        if owned:
            sink.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pzfsim",
        description="Hybrid phase-aligned precoding simulator for massive "
                    "multiuser MIMO downlinks.",
    )
    parser.add_argument("--version", action="version", version=f"pzfsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{sweep,bound,stats}")

    sweep = sub.add_parser(
        "sweep",
        help="Monte Carlo spectral-efficiency sweep over an SNR grid",
        description="Average instantaneous sum spectral efficiency over "
                    "seeded channel realizations shared by every scheme and "
                    "SNR point; emits CSV.",
    )
    sweep.add_argument("--config", metavar="FILE",
                       help="flat 'key = value' settings file; flags override it")
    sweep.add_argument("--antennas", type=int, help="transmit antennas (default 128)")
    sweep.add_argument("--users", type=int,
                       help="single-antenna users, equal to RF chains (default 4)")
    sweep.add_argument("--channel", choices=("rayleigh", "mmwave"),
                       help="channel model (default rayleigh)")
    sweep.add_argument("--snr", metavar="GRID",
                       help="SNR grid in dB: start:step:stop, comma list, or one "
                            "value (default -10:2:10)")
    sweep.add_argument("--trials", type=int, help="channel realizations (default 1000)")
    sweep.add_argument("--seed", type=int, help="master seed (default 0)")
    sweep.add_argument("--schemes", metavar="LIST",
                       help="comma list from pzf, pzf_q<B>, fczf, bmimo "
                            "(default pzf,fczf)")
    sweep.add_argument("--quant-bits", type=int, dest="quant_bits", metavar="B",
                       help="phase bits for the quantized scheme (a pzf_q<B> "
                            "token sets this too)")
    sweep.add_argument("--literal-quantization", action="store_true",
                       help="quantize by plain |phase - candidate| distance over "
                            "[0, 2pi) instead of the default circular "
                            "(wrap-around) distance")
    sweep.add_argument("--paths", type=int,
                       help="propagation paths per user for mmwave (default 10)")
    sweep.add_argument("--spacing", type=float,
                       help="antenna spacing in wavelengths for mmwave (default 0.5)")
    sweep.add_argument("--closed-form", action="store_true", dest="closed_form",
                       help="fill the closed-form rate columns of the CSV")
    sweep.add_argument("--bmimo-on-rayleigh", action="store_true",
                       dest="bmimo_on_rayleigh",
                       help="allow the DFT-beam baseline on the rayleigh channel "
                            "(off-label)")
    sweep.add_argument("--out", metavar="PATH", help="output CSV path (default stdout)")
    sweep.add_argument("--threads", type=int,
                       help="worker processes, 0 = all cores "
                            "(default $PZFSIM_THREADS or 1)")
    sweep.set_defaults(func=_cmd_sweep)

    bound = sub.add_parser(
        "bound",
        help="closed-form rate table",
        description="Print the hybrid-scheme rate upper bound and the "
                    "full-ZF large-array rate per SNR point.",
    )
    bound.add_argument("--antennas", type=int, default=128,
                       help="transmit antennas (default 128)")
    bound.add_argument("--users", type=int, default=4, help="users (default 4)")
    bound.add_argument("--snr", default="0", metavar="GRID",
                       help="SNR grid in dB, same syntax as sweep (default 0)")
    bound.add_argument("--out", metavar="PATH", help="output path (default stdout)")
    bound.set_defaults(func=_cmd_bound)

    stats = sub.add_parser(
        "stats",
        help="coupling-moment measurement",
        description="Sample moments of the aligned (diagonal) and residual "
                    "(off-diagonal) channel/RF-precoder couplings under "
                    "Rayleigh fading, as CSV with large-array references.",
    )
    stats.add_argument("--antennas", type=int, default=256,
                       help="transmit antennas (default 256)")
    stats.add_argument("--trials", type=int, default=100_000,
                       help="Rayleigh draws (default 100000)")
    stats.add_argument("--seed", type=int, default=0, help="seed (default 0)")
    stats.add_argument("--out", metavar="PATH", help="output CSV path (default stdout)")
    stats.set_defaults(func=_cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"pzfsim: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except HarnessError as exc:
        print(f"pzfsim: error: {exc}", file=sys.stderr)
        return 2
    except PzfSimError as exc:
        print(f"pzfsim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"pzfsim: error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
