"""Deterministic Monte Carlo sweep engine.

Each trial draws one channel realization from a generator keyed by
``(seed, trial)``; all schemes and all SNR points share that realization, so
scheme curves are paired and adding a scheme never perturbs the others.
Zero-forcing directions do not depend on the transmit power, so one precoder
per (scheme, trial) serves the whole SNR grid exactly.

Trials are independent units of work: with ``workers > 1`` they are spread
over processes, and because the randomness is keyed by trial index rather
than execution order, any worker count reproduces the serial result byte for
byte.  Trials whose Gram systems are numerically singular are counted and
excluded (resampling would bias the fading distribution); a sweep aborts if
they exceed 1% of the total, which signals a configuration bug rather than
bad luck.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat

import numpy as np

from . import _kernels
from ._version import __version__
from .analysis import SystemScale, fczf_asymptotic_rate, pzf_rate_bound
from .channels import MmWaveParams, mmwave_channel, rayleigh_channel
from .errors import ConfigError, DomainError, HarnessError, SingularMatrixError
from .numerics import rng_from_seed
from .precoders import (
    QuantizationSpec,
    baseband_zf,
    bmimo_precoder,
    effective_channel,
    full_zf,
    pzf_rf,
    quantize_rf,
)

SCHEMES = ("pzf", "pzf_quantized", "fczf", "bmimo")

CSV_HEADER = ("scheme,snr_db,trials,se_mean_bps_hz,se_stderr,"
              "pzf_bound_bps_hz,fczf_asymptotic_bps_hz")


@dataclass(frozen=True)
class SimulationConfig:
    """Complete description of one sweep experiment."""

    antennas: int
    users: int
    channel: str = "rayleigh"
    snr_grid_db: tuple = (0.0,)
    trials: int = 1000
    seed: int = 0
    schemes: tuple = ("pzf",)
    mmwave: MmWaveParams | None = None
    quant_bits: int | None = None
    quant_circular: bool = True
    emit_closed_form: bool = False
    bmimo_on_rayleigh: bool = False

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(s) for s in self.snr_grid_db))
        seen = set(self.schemes)
        object.__setattr__(self, "schemes", tuple(s for s in SCHEMES if s in seen))

    def validate(self) -> None:
        """Raise ConfigError on any invariant violation."""
        if self.users < 1 or self.antennas < 1:
            raise ConfigError("users and antennas must be positive")
        if self.users > self.antennas:
            raise ConfigError("users must not exceed antennas")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.channel not in ("rayleigh", "mmwave"):
            raise ConfigError(f"unknown channel kind: {self.channel!r}")
        if not self.snr_grid_db:
            raise ConfigError("snr grid must not be empty")
        if any(b <= a for a, b in zip(self.snr_grid_db, self.snr_grid_db[1:])):
            raise ConfigError("snr grid must be strictly increasing")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ConfigError(f"unknown schemes: {sorted(unknown)}")
        if "pzf_quantized" in self.schemes:
            if self.quant_bits is None:
                raise ConfigError("quant_bits is required for the quantized scheme")
            if not 1 <= self.quant_bits <= 16:
                raise ConfigError("quant_bits must be between 1 and 16")
        if self.channel == "mmwave" and self.mmwave is None:
            raise ConfigError("mmwave parameters are required for the mmwave channel")
        if self.channel == "rayleigh" and self.mmwave is not None:
            raise ConfigError("mmwave parameters are only valid for the mmwave channel")
        if "bmimo" in self.schemes and self.channel != "mmwave" and not self.bmimo_on_rayleigh:
            raise ConfigError(
                "bmimo is designed for the mmwave channel; "
                "set bmimo_on_rayleigh to run it off-label"
            )
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")

    def scheme_label(self, scheme: str) -> str:
        """CSV label: the quantized scheme encodes its bit width."""
        if scheme == "pzf_quantized":
            return f"pzf_q{self.quant_bits}"
        return scheme


@dataclass(frozen=True)
class SweepCell:
    """Aggregated statistics for one (scheme, SNR) pair."""

    scheme: str
    snr_db: float
    trials: int
    se_mean: float
    se_stderr: float
    pzf_bound: float | None = None
    fczf_asymptotic: float | None = None


@dataclass(frozen=True)
class SweepResult:
    """Sweep output: one cell per (scheme, SNR), sorted, plus provenance."""

    cells: tuple
    config: SimulationConfig
    version: str = __version__
    singular_trials: int = 0


def _trial_channel(config: SimulationConfig, trial: int) -> np.ndarray:
    rng = rng_from_seed(config.seed, trial)
    if config.channel == "rayleigh":
        return rayleigh_channel(rng, config.users, config.antennas)
    return mmwave_channel(rng, config.users, config.antennas, config.mmwave)


def _total_precoder(config: SimulationConfig, scheme: str, h: np.ndarray) -> np.ndarray:
    if scheme == "fczf":
        return full_zf(h)
    if scheme == "bmimo":
        f, w = bmimo_precoder(h, config.mmwave.spacing if config.mmwave else 0.5)
        return f @ w
    f = pzf_rf(h)
    if scheme == "pzf_quantized":
        f = quantize_rf(f, QuantizationSpec(config.quant_bits, config.quant_circular))
    w = baseband_zf(effective_channel(h, f), f)
    return f @ w


def _run_trials(config: SimulationConfig, powers: tuple, indices) -> list:
    """Evaluate a block of trials; an entry is (t, None) when singular."""
    parr = np.asarray(powers, dtype=np.float64)
    out = []
    for t in indices:
        h = _trial_channel(config, t)
        per_scheme = {}
        try:
            for scheme in config.schemes:
                gains = np.ascontiguousarray(h @ _total_precoder(config, scheme, h))
                per_scheme[scheme] = np.asarray(
                    _kernels.sum_se_over_powers(gains, parr)
                )
        except SingularMatrixError:
            out.append((t, None))
            continue
        out.append((t, per_scheme))
    return out


def run_sweep(config: SimulationConfig, workers: int = 1) -> SweepResult:
    """Run the Monte Carlo sweep described by ``config``.

    ``workers`` caps the number of worker processes (0 means all cores); the
    result is identical for any worker count.  Raises HarnessError when more
    than 1% of trials hit singular Gram systems.
    """
    config.validate()
    powers = tuple(10.0 ** (s / 10.0) for s in config.snr_grid_db)

    if workers == 0:
        workers = os.cpu_count() or 1
    if workers < 0:
        raise ConfigError("workers must be nonnegative")

    if workers == 1 or config.trials == 1:
        results = _run_trials(config, powers, range(config.trials))
    else:
        chunk = max(1, math.ceil(config.trials / (workers * 4)))
        blocks = [range(lo, min(lo + chunk, config.trials))
                  for lo in range(0, config.trials, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [item for block in
                       pool.map(_run_trials, repeat(config), repeat(powers), blocks)
                       for item in block]

    se = {s: np.full((config.trials, len(powers)), np.nan) for s in config.schemes}
    singular = 0
    for t, outcome in results:
        if outcome is None:
            singular += 1
        else:
            for scheme, values in outcome.items():
                se[scheme][t] = values
    if singular > 0.01 * config.trials:
        raise HarnessError(
            f"{singular} of {config.trials} trials were singular (>1%); "
            "this signals a configuration bug"
        )

    valid = ~np.isnan(next(iter(se.values()))[:, 0]) if se else np.array([], bool)
    n = int(valid.sum()) if se else 0

    closed = {}
    if config.emit_closed_form:
        for snr, power in zip(config.snr_grid_db, powers):
            scale = SystemScale(config.antennas, config.users, power)
            closed[snr] = (pzf_rate_bound(scale), fczf_asymptotic_rate(scale))

    cells = []
    for scheme in config.schemes:
        label = config.scheme_label(scheme)
        kept = se[scheme][valid]
        means = kept.mean(axis=0)
        if n > 1:
            stderrs = kept.std(axis=0, ddof=1) / math.sqrt(n)
        else:
            stderrs = np.zeros(len(powers))
        for i, snr in enumerate(config.snr_grid_db):
            bound, asym = closed.get(snr, (None, None))
            cells.append(SweepCell(label, snr, n, float(means[i]),
                                   float(stderrs[i]), bound, asym))
    cells.sort(key=lambda c: (c.scheme, c.snr_db))
    return SweepResult(tuple(cells), config, __version__, singular)


def _fmt(value) -> str:
    return "" if value is None else format(value, ".10g")


def write_csv(result: SweepResult, destination) -> None:
    """Emit the sweep as CSV (UTF-8, Unix newlines, 10 significant digits).

    ``destination`` is a path or a writable text sink.  Rows are sorted by
    (scheme, snr_db); the closed-form columns are blank unless the config
    requested them.
    """
    lines = [CSV_HEADER]
    for cell in result.cells:
        lines.append(",".join((
            cell.scheme,
            _fmt(cell.snr_db),
            str(cell.trials),
            _fmt(cell.se_mean),
            _fmt(cell.se_stderr),
            _fmt(cell.pzf_bound),
            _fmt(cell.fczf_asymptotic),
        )))
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as sink:
            sink.write(text)


@dataclass(frozen=True)
class CouplingStats:
    """Sample moments of the channel/RF-precoder inner products.

    The diagonal product is the phase-aligned gain a user obtains from its
    own RF column; the off-diagonal product is the residual coupling onto
    another user's column.  Variances use the ddof=1 sample convention; the
    off-diagonal variance is the total complex variance E|z - mean|^2.
    """

    antennas: int
    trials: int
    diagonal_mean: float
    diagonal_variance: float
    offdiagonal_mean: complex
    offdiagonal_variance: float


def coupling_statistics(antennas: int, trials: int, seed: int) -> CouplingStats:
    """Measure coupling moments over Rayleigh draws with phase-aligned RF.

    Two users suffice because couplings are pairwise: each trial draws a
    fresh 2 x antennas Rayleigh channel, builds the RF precoder, and records
    the first user's own gain and its coupling onto the second user's
    column.  Runs serially on one generator keyed by ``(seed,)``.
    """
    if antennas < 2:
        raise DomainError("antennas must be at least 2")
    if trials < 1000:
        raise DomainError("need at least 1000 trials for stable moments")
    rng = rng_from_seed(seed)
    diag = np.empty(trials)
    off = np.empty(trials, dtype=np.complex128)
    for t in range(trials):
        h = rayleigh_channel(rng, 2, antennas)
        gains = h @ pzf_rf(h)
        diag[t] = gains[0, 0].real
        off[t] = gains[0, 1]
    return CouplingStats(
        antennas=antennas,
        trials=trials,
        diagonal_mean=float(diag.mean()),
        diagonal_variance=float(diag.var(ddof=1)),
        offdiagonal_mean=complex(off.mean()),
        offdiagonal_variance=float(off.var(ddof=1)),
    )
