"""Declarative outage experiments: JSON config, SNR sweep runner and CSV output."""

import csv
import io
import json
import math
import numbers
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from . import analysis
from .analysis import GainReport
from .channel import HopParams, SystemConfig
from .montecarlo import McConfig, RELIABILITY_EVENTS, simulate_outage_sweep

CSV_COLUMNS = ["snr_db", "outage_low", "outage_high", "outage_mc", "mc_stderr", "asymptote"]
WORST_HOP_COLUMNS = ["outage_low_worst_hop", "outage_high_worst_hop"]

DEFAULT_THRESHOLD_DB = 0.0
DEFAULT_POWER_DB = 0.0
DEFAULT_MOD_CONST = 2.0


class ConfigError(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def db_to_linear(x_db):
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class HopSpec:
    alpha: float
    beta: float
    inr_db: float
    snr_offset_db: float = 0.0


@dataclass(frozen=True)
class SeriesSpec:
    label: str
    hops: Tuple[HopSpec, ...]

    @property
    def is_symmetric(self):
        return all(h == self.hops[0] for h in self.hops)


@dataclass(frozen=True)
class Experiment:
    name: str
    series: Tuple[SeriesSpec, ...]
    sweep_db: Tuple[float, ...]
    threshold_db: float = DEFAULT_THRESHOLD_DB
    power_db: float = DEFAULT_POWER_DB
    mod_const: float = DEFAULT_MOD_CONST
    mc: Optional[McConfig] = None
    output: Optional[str] = None
    output_format: str = "csv"

    def system(self, series: SeriesSpec, snr_db=0.0) -> SystemConfig:
        """Linear-scale chain for ``series`` with the desired SNRs raised by ``snr_db``."""
        hops = tuple(
            HopParams(h.alpha, h.beta, db_to_linear(snr_db + h.snr_offset_db), db_to_linear(h.inr_db))
            for h in series.hops
        )
        return SystemConfig(hops, db_to_linear(self.power_db), self.mod_const)

    def to_dict(self):
        d = {
            "name": self.name,
            "power_db": self.power_db,
            "mod_const": self.mod_const,
            "threshold_db": self.threshold_db,
            "sweep_db": list(self.sweep_db),
            "series": [
                {
                    "label": s.label,
                    "hops": [
                        {"alpha": h.alpha, "beta": h.beta, "inr_db": h.inr_db,
                         "snr_offset_db": h.snr_offset_db}
                        for h in s.hops
                    ],
                }
                for s in self.series
            ],
        }
        if self.mc is not None:
            d["mc"] = {"trials": self.mc.trials, "seed": self.mc.seed, "chunk": self.mc.chunk}
        if self.output is not None:
            d["output"] = {"path": self.output, "format": self.output_format}
        return d


# -- parsing ---------------------------------------------------------------

def _get(d, key, path, kind, default=None, required=True):
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}".lstrip("."), "missing required field")
        return default
    value = d[key]
    where = f"{path}.{key}".lstrip(".")
    if kind == "number":
        if not isinstance(value, numbers.Real) or isinstance(value, bool) or not math.isfinite(value):
            raise ConfigError(where, f"expected a finite number, got {value!r}")
        return float(value)
    if kind == "positive":
        value = _get(d, key, path, "number")
        if value <= 0:
            raise ConfigError(where, f"must be > 0, got {value!r}")
        return value
    if kind == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(where, f"expected an integer, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(where, f"expected a string, got {value!r}")
        return value
    if kind == "dict":
        if not isinstance(value, dict):
            raise ConfigError(where, f"expected an object, got {type(value).__name__}")
        return value
    if kind == "list":
        if not isinstance(value, list):
            raise ConfigError(where, f"expected a list, got {type(value).__name__}")
        return value
    raise AssertionError(kind)


def _parse_hop(d, path):
    if not isinstance(d, dict):
        raise ConfigError(path, "expected an object")
    return HopSpec(
        alpha=_get(d, "alpha", path, "positive"),
        beta=_get(d, "beta", path, "positive"),
        inr_db=_get(d, "inr_db", path, "number"),
        snr_offset_db=_get(d, "snr_offset_db", path, "number", 0.0, required=False),
    )


def _parse_series(d, path, index):
    if not isinstance(d, dict):
        raise ConfigError(path, "expected an object")
    label = _get(d, "label", path, "str", f"series{index}", required=False)
    if "symmetric" in d and "hops" in d:
        raise ConfigError(path, "give either 'symmetric' or 'hops', not both")
    if "symmetric" in d:
        sym = _get(d, "symmetric", path, "dict")
        spath = f"{path}.symmetric"
        n = _get(sym, "hops", spath, "int")
        if n < 1:
            raise ConfigError(f"{spath}.hops", f"must be >= 1, got {n}")
        hop = _parse_hop({k: v for k, v in sym.items() if k != "hops"}, spath)
        return SeriesSpec(label, (hop,) * n)
    hops = _get(d, "hops", path, "list")
    if not hops:
        raise ConfigError(f"{path}.hops", "must contain at least one hop")
    return SeriesSpec(label, tuple(_parse_hop(h, f"{path}.hops[{i}]") for i, h in enumerate(hops)))


def parse_experiment(d) -> Experiment:
    """Validate a config mapping and build an :class:`Experiment`.

    A single ``system`` entry is accepted in place of a ``series`` list.
    The ``symmetric`` shorthand expands to identical hops.
    """
    if not isinstance(d, dict):
        raise ConfigError("", "config must be a JSON object")
    if "series" in d and "system" in d:
        raise ConfigError("", "give either 'series' or 'system', not both")
    if "system" in d:
        raw_series = [_get(d, "system", "", "dict")]
        series = (_parse_series(raw_series[0], "system", 0),)
    else:
        raw_series = _get(d, "series", "", "list")
        if not raw_series:
            raise ConfigError("series", "must contain at least one entry")
        series = tuple(_parse_series(s, f"series[{i}]", i) for i, s in enumerate(raw_series))

    sweep = _get(d, "sweep_db", "", "list")
    if not sweep:
        raise ConfigError("sweep_db", "must be a non-empty list")
    sweep_vals = []
    for i, v in enumerate(sweep):
        if not isinstance(v, numbers.Real) or isinstance(v, bool) or not math.isfinite(v):
            raise ConfigError(f"sweep_db[{i}]", f"expected a finite number, got {v!r}")
        sweep_vals.append(float(v))
    if any(b <= a for a, b in zip(sweep_vals, sweep_vals[1:])):
        raise ConfigError("sweep_db", "must be strictly increasing")

    mc = None
    if "mc" in d:
        m = _get(d, "mc", "", "dict")
        trials = _get(m, "trials", "mc", "int")
        seed = _get(m, "seed", "mc", "int", 0, required=False)
        chunk = _get(m, "chunk", "mc", "int", None, required=False)
        try:
            mc = McConfig.with_default_chunk(trials, seed) if chunk is None else McConfig(trials, seed, chunk)
        except ValueError as exc:
            raise ConfigError("mc", str(exc)) from None

    output, fmt = None, "csv"
    if "output" in d:
        o = _get(d, "output", "", "dict")
        output = _get(o, "path", "output", "str")
        fmt = _get(o, "format", "output", "str", "csv", required=False)
        if fmt != "csv":
            raise ConfigError("output.format", f"unsupported format {fmt!r}; only 'csv'")

    return Experiment(
        name=_get(d, "name", "", "str", "experiment", required=False),
        series=series,
        sweep_db=tuple(sweep_vals),
        threshold_db=_get(d, "threshold_db", "", "number", DEFAULT_THRESHOLD_DB, required=False),
        power_db=_get(d, "power_db", "", "number", DEFAULT_POWER_DB, required=False),
        mod_const=_get(d, "mod_const", "", "positive", DEFAULT_MOD_CONST, required=False),
        mc=mc,
        output=output,
        output_format=fmt,
    )


def load_experiment(path) -> Experiment:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"{path} is not valid JSON: {exc}") from None
    return parse_experiment(raw)


# -- running ---------------------------------------------------------------

@dataclass
class ReportRow:
    snr_db: float
    outage_low: float
    outage_high: float
    asymptote: float
    outage_mc: Optional[float] = None
    mc_stderr: Optional[float] = None
    outage_low_worst_hop: Optional[float] = None
    outage_high_worst_hop: Optional[float] = None
    flagged: bool = False


@dataclass
class SeriesReport:
    label: str
    gains: GainReport
    symmetric: bool
    rows: List[ReportRow] = field(default_factory=list)


@dataclass
class OutageReport:
    experiment: Experiment
    series: List[SeriesReport]

    @property
    def violations(self):
        return [(s.label, r.snr_db) for s in self.series for r in s.rows if r.flagged]

    @property
    def has_worst_hop_columns(self):
        return any(not s.symmetric for s in self.series)


def _flag(row: ReportRow, trials):
    # MC claims are only checked where the closed-form floor gives >= 100 events.
    if row.outage_mc is None or row.outage_low < RELIABILITY_EVENTS / trials:
        return False
    band = 3.0 * row.mc_stderr
    return row.outage_mc < row.outage_low - band or row.outage_mc > row.outage_high + band


def run(experiment: Experiment, mc: Optional[McConfig] = None) -> OutageReport:
    """Closed-form bounds at every sweep point, plus Monte-Carlo outage if ``mc`` is given."""
    threshold = db_to_linear(experiment.threshold_db)
    reports = []
    for spec in experiment.series:
        base = experiment.system(spec)
        rows = []
        for snr_db in experiment.sweep_db:
            cfg = experiment.system(spec, snr_db)
            low, high = analysis.outage_bounds(cfg, threshold)
            row = ReportRow(snr_db, low, high, analysis.asymptotic_outage(cfg, threshold))
            if not spec.is_symmetric:
                row.outage_low_worst_hop, row.outage_high_worst_hop = analysis.outage_bounds(
                    cfg, threshold, method="worst_hop"
                )
            rows.append(row)
        if mc is not None:
            scales = [db_to_linear(s) for s in experiment.sweep_db]
            for row, est in zip(rows, simulate_outage_sweep(base, threshold, scales, mc)):
                row.outage_mc, row.mc_stderr = est.mean, est.stderr
                row.flagged = _flag(row, mc.trials)
        reports.append(SeriesReport(spec.label, analysis.config_gains(base), spec.is_symmetric, rows))
    return OutageReport(experiment, reports)


# -- output ----------------------------------------------------------------

def _fmt(v):
    return "" if v is None else repr(float(v))


def report_to_csv(report: OutageReport) -> str:
    columns = CSV_COLUMNS + (WORST_HOP_COLUMNS if report.has_worst_hop_columns else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for s in report.series:
        for r in s.rows:
            writer.writerow([_fmt(getattr(r, c)) for c in columns])
    return buf.getvalue()


def emit_csv(report: OutageReport, path):
    path = Path(path)
    try:
        path.write_text(report_to_csv(report))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV to {path}: {exc.strerror}") from None
    return path


def read_csv(path):
    """Rows of an emitted CSV as dicts of float (None for empty cells)."""
    with open(path, newline="") as fh:
        return [
            {k: (float(v) if v != "" else None) for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]
