"""Figure-reproduction sweeps, config files and CSV output.

Config files are flat ``key = value`` text with dotted keys and ``#``
comments. Rates are in units of gamma_c (which is 1 internally), detunings
``Delta`` in units of ``G``, delays ``tau`` in units of ``2 pi / gamma_c``.
Values may be simple arithmetic with ``sqrt`` and ``pi``, e.g.
``base.Delta = sqrt(2)``; list-valued keys are comma separated.

Recognised keys::

    base.G  base.Delta  base.Delta_m  base.epsilon  base.gamma_c  base.gamma_m
    base.n_th  base.cutoff_photon  base.cutoff_phonon
    derivation.omega0 / J / g0 / omega_m / Omega / Delta_a   (sets base.G)
    constraint.Delta_m = Delta/2 | fixed
    sweep.variable = Delta | n_th | tau
    sweep.min  sweep.max  sweep.points  sweep.spacing = linear | log
    sweep.values                      (explicit grid, overrides min/max/points)
    series.variable = n_th | Delta    series.values
    outputs                           (observable names)
    solver.layout = factorized | full
    solver.cutoff_policy = fixed | converge
    solver.tolerance  solver.max_photon  solver.max_phonon
    solver.method = expm | bdf        solver.rtol
    converge.Delta                    (check points for cutoff certification)
    predict.max_pair
"""

from __future__ import annotations

import ast
import csv
import datetime as _dt
import hashlib
import io
import logging
import math
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .dressed import prediction_set, resonance_detunings
from .errors import BlockadeError, ConfigurationError
from .liouvillian import converge_cutoffs
from .model import DerivationParams, SystemParams
from .observables import OBSERVABLES, g2_tau, solve_port, transport

__all__ = [
    "SweepConfig",
    "SweepResult",
    "PredictionReport",
    "parse_config",
    "load_config",
    "load_preset",
    "list_presets",
    "run_sweep",
    "run_g2_delay",
    "predict_resonances",
    "certify_cutoffs",
    "find_extrema",
]

log = logging.getLogger(__name__)

TAU_OUTPUTS = ("g2_21_tau", "g2_12_tau")
SWEEP_VARIABLES = ("Delta", "n_th", "tau")
SERIES_VARIABLES = ("n_th", "Delta")

SWEEP_COLUMNS = (
    "sweep_value", "series_value", "T21", "T12", "isolation_db", "g2_21_zero",
    "g2_12_zero", "n_L", "n_R", "cutoff_photon", "cutoff_phonon", "residual_21",
    "residual_12", "amp_L", "amp_R", "status", "error",
)
TAU_COLUMNS = (
    "sweep_value", "series_value", "g2_21_tau", "g2_12_tau", "cutoff_photon",
    "cutoff_phonon", "status", "error",
)

_DEFAULTS = {
    "base.G": "3",
    "base.Delta": "0",
    "base.Delta_m": "0",
    "base.epsilon": "0.1",
    "base.gamma_c": "1",
    "base.gamma_m": "0.01",
    "base.n_th": "0",
    "base.cutoff_photon": "5",
    "base.cutoff_phonon": "12",
    "constraint.Delta_m": "Delta/2",
    "sweep.spacing": "linear",
    "outputs": ",".join(OBSERVABLES),
    "solver.layout": "factorized",
    "solver.cutoff_policy": "fixed",
    "solver.tolerance": "1e-6",
    "solver.max_photon": "10",
    "solver.max_phonon": "24",
    "solver.method": "expm",
    "solver.rtol": "1e-8",
    "predict.max_pair": "4",
}

_KNOWN_KEYS = set(_DEFAULTS) | {
    "sweep.variable", "sweep.min", "sweep.max", "sweep.points", "sweep.values",
    "series.variable", "series.values", "converge.Delta",
    "derivation.omega0", "derivation.J", "derivation.g0", "derivation.omega_m",
    "derivation.Omega", "derivation.Delta_a",
}

# ------------------------------------------------------------------ parsing

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt, "exp": math.exp, "log10": math.log10}
_NAMES = {"pi": math.pi, "inf": math.inf}


def _number(text: str) -> float:
    """Evaluate a restricted arithmetic expression."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
            return _FUNCS[node.func.id](ev(node.args[0]))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        raise ValueError(f"unsupported expression element {ast.dump(node)}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigurationError(f"cannot parse number {text!r}: {exc}") from None


def _numbers(text: str) -> list:
    return [_number(t) for t in text.split(",") if t.strip()]


def _int(text: str, key: str) -> int:
    v = _number(text)
    if v != int(v):
        raise ConfigurationError(f"{key} must be an integer, got {text!r}")
    return int(v)


def parse_config(text: str, overrides=()) -> "SweepConfig":
    """Parse config text, then apply ``key=value`` overrides in order."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {line!r}")
        k, v = line.split("=", 1)
        raw[k.strip()] = v.strip()
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(f"override must be key=value, got {item!r}")
        k, v = item.split("=", 1)
        raw[k.strip()] = v.strip()
    return SweepConfig.from_mapping(raw)


def load_config(path, overrides=()) -> "SweepConfig":
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, overrides)


def list_presets() -> list:
    files = resources.files("nrblockade") / "presets"
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".cfg"))


def preset_text(name: str) -> str:
    f = resources.files("nrblockade") / "presets" / f"{name}.cfg"
    if not f.is_file():
        raise ConfigurationError(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
    return f.read_text(encoding="utf-8")


def load_preset(name: str, overrides=()) -> "SweepConfig":
    return parse_config(preset_text(name), overrides)


# ------------------------------------------------------------------ config

@dataclass(frozen=True)
class SweepConfig:
    """Validated sweep description. ``base.Delta`` is stored in gamma_c units."""

    base: SystemParams
    sweep_variable: str
    values: tuple
    series_variable: str | None = None
    series_values: tuple = (None,)
    lock_mechanics: bool = True
    outputs: tuple = OBSERVABLES
    layout: str = "factorized"
    cutoff_policy: str = "fixed"
    tolerance: float = 1e-6
    max_cutoffs: tuple = (10, 24)
    method: str = "expm"
    rtol: float = 1e-8
    converge_points: tuple = ()
    max_pair: int = 4
    raw: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_mapping(cls, raw: dict) -> "SweepConfig":
        unknown = [k for k in raw if k not in _KNOWN_KEYS]
        if unknown:
            raise ConfigurationError(f"unrecognised config keys: {', '.join(sorted(unknown))}")
        cfg = dict(_DEFAULTS)
        cfg.update(raw)

        G = _number(cfg["base.G"])
        deriv_keys = [k for k in cfg if k.startswith("derivation.")]
        if deriv_keys:
            try:
                deriv = DerivationParams(
                    **{k.split(".", 1)[1]: _number(cfg[k]) for k in deriv_keys},
                    gamma_c=_number(cfg["base.gamma_c"]),
                )
            except TypeError as exc:
                raise ConfigurationError(f"incomplete derivation block: {exc}") from None
            G = deriv.G

        constraint = cfg["constraint.Delta_m"].replace(" ", "")
        if constraint not in ("Delta/2", "fixed"):
            raise ConfigurationError(f"constraint.Delta_m must be 'Delta/2' or 'fixed', got {constraint!r}")
        lock = constraint == "Delta/2"
        Delta = _number(cfg["base.Delta"]) * G
        try:
            base = SystemParams(
                Delta=Delta,
                Delta_m=Delta / 2 if lock else _number(cfg["base.Delta_m"]),
                G=G,
                epsilon=_number(cfg["base.epsilon"]),
                gamma_c=_number(cfg["base.gamma_c"]),
                gamma_m=_number(cfg["base.gamma_m"]),
                n_th=_number(cfg["base.n_th"]),
                cutoff_photon=_int(cfg["base.cutoff_photon"], "base.cutoff_photon"),
                cutoff_phonon=_int(cfg["base.cutoff_phonon"], "base.cutoff_phonon"),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc)) from None

        var = cfg.get("sweep.variable")
        if var not in SWEEP_VARIABLES:
            raise ConfigurationError(f"sweep.variable must be one of {SWEEP_VARIABLES}, got {var!r}")
        if "sweep.values" in cfg:
            values = tuple(_numbers(cfg["sweep.values"]))
            if len(values) < 1:
                raise ConfigurationError("sweep.values is empty")
        else:
            for k in ("sweep.min", "sweep.max", "sweep.points"):
                if k not in cfg:
                    raise ConfigurationError(f"missing {k}")
            lo, hi = _number(cfg["sweep.min"]), _number(cfg["sweep.max"])
            n = _int(cfg["sweep.points"], "sweep.points")
            if n < 2:
                raise ConfigurationError(f"sweep.points must be >= 2, got {n}")
            if not lo < hi:
                raise ConfigurationError(f"sweep.min must be < sweep.max, got {lo} and {hi}")
            spacing = cfg["sweep.spacing"]
            if spacing == "linear":
                values = tuple(float(v) for v in np.linspace(lo, hi, n))
            elif spacing == "log":
                if lo <= 0:
                    raise ConfigurationError("log spacing needs sweep.min > 0")
                values = tuple(float(v) for v in np.geomspace(lo, hi, n))
            else:
                raise ConfigurationError(f"sweep.spacing must be linear or log, got {spacing!r}")
        if var in ("n_th", "tau") and min(values) < 0:
            raise ConfigurationError(f"{var} values must be non-negative")

        series_var = cfg.get("series.variable")
        series_values = (None,)
        if series_var is not None:
            if series_var not in SERIES_VARIABLES or series_var == var:
                raise ConfigurationError(f"invalid series.variable {series_var!r}")
            if "series.values" not in cfg:
                raise ConfigurationError("series.variable given without series.values")
            series_values = tuple(_numbers(cfg["series.values"]))
            if not series_values:
                raise ConfigurationError("series.values is empty")

        outputs = tuple(s.strip() for s in cfg["outputs"].split(",") if s.strip())
        allowed = TAU_OUTPUTS if var == "tau" else OBSERVABLES
        bad = [o for o in outputs if o not in allowed]
        if bad or not outputs:
            raise ConfigurationError(f"unrecognised outputs {bad} for sweep.variable={var}; allowed {allowed}")

        layout = cfg["solver.layout"]
        if layout not in ("factorized", "full"):
            raise ConfigurationError(f"solver.layout must be factorized or full, got {layout!r}")
        policy = cfg["solver.cutoff_policy"]
        if policy not in ("fixed", "converge"):
            raise ConfigurationError(f"solver.cutoff_policy must be fixed or converge, got {policy!r}")
        method = cfg["solver.method"]
        if method not in ("expm", "bdf"):
            raise ConfigurationError(f"solver.method must be expm or bdf, got {method!r}")
        max_pair = _int(cfg["predict.max_pair"], "predict.max_pair")
        if max_pair < 2:
            raise ConfigurationError("predict.max_pair must be >= 2")
        conv = tuple(_numbers(cfg["converge.Delta"])) if "converge.Delta" in cfg else ()

        return cls(
            base=base,
            sweep_variable=var,
            values=values,
            series_variable=series_var,
            series_values=series_values,
            lock_mechanics=lock,
            outputs=outputs,
            layout=layout,
            cutoff_policy=policy,
            tolerance=_number(cfg["solver.tolerance"]),
            max_cutoffs=(_int(cfg["solver.max_photon"], "solver.max_photon"),
                         _int(cfg["solver.max_phonon"], "solver.max_phonon")),
            method=method,
            rtol=_number(cfg["solver.rtol"]),
            converge_points=conv,
            max_pair=max_pair,
            raw=dict(sorted(raw.items())),
        )

    def canonical_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in sorted(self.raw.items()))

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()

    def params_at(self, value, series_value=None) -> SystemParams:
        """System parameters for one grid point (Delta values in units of G)."""
        p = self.base
        for var, val in ((self.series_variable, series_value), (self.sweep_variable, value)):
            if var is None or val is None or var == "tau":
                continue
            if var == "Delta":
                D = val * p.G
                p = p.replace(Delta=D, Delta_m=D / 2 if self.lock_mechanics else p.Delta_m)
            elif var == "n_th":
                p = p.replace(n_th=val)
        return p

    def tau_grid(self) -> np.ndarray:
        """Delays in units of 1/gamma_c."""
        return np.asarray(self.values) * 2 * math.pi / self.base.gamma_c


# ------------------------------------------------------------------ results

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, complex):
        re, im = v.real, v.imag
        sign = "-" if (im < 0 or (im == 0 and math.copysign(1, im) < 0)) else "+"
        return f"{re!r}{sign}{abs(im)!r}i"
    return repr(float(v))


@dataclass
class SweepResult:
    columns: tuple
    rows: list
    provenance: dict
    config: SweepConfig | None = None

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def select(self, series_value=None) -> "SweepResult":
        rows = [r for r in self.rows if r["series_value"] == series_value]
        return SweepResult(self.columns, rows, self.provenance, self.config)

    @property
    def n_failed(self) -> int:
        return sum(r["status"] != "ok" for r in self.rows)

    def data_lines(self) -> list:
        return [",".join(_fmt(r[c]) for c in self.columns) for r in self.rows]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        for k, v in self.provenance.items():
            buf.write(f"# {k}: {v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(r[c]) for c in self.columns])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    @staticmethod
    def read_csv(path) -> list:
        """Rows of a CSV written by :meth:`to_csv`, as dicts of strings."""
        lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if not ln.startswith("#")]
        return list(csv.DictReader(lines))


def _provenance(config: SweepConfig, kind: str) -> dict:
    units = {"Delta": "G", "n_th": "1", "tau": "2*pi/gamma_c"}[config.sweep_variable]
    return {
        "generator": f"nrblockade {__version__}",
        "kind": kind,
        "config_sha256": config.sha256(),
        "sweep_variable": f"{config.sweep_variable} [{units}]",
        "series_variable": config.series_variable or "",
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _check_points(config: SweepConfig) -> list:
    """(Delta/G, n_th) pairs at which cutoffs are certified."""
    base = config.base
    deltas = config.converge_points or (base.Delta / base.G if base.G else 0.0,)
    nths = (base.n_th,)
    if config.series_variable == "n_th":
        nths = config.series_values
    elif config.series_variable == "Delta":
        deltas = config.series_values
    if config.sweep_variable == "n_th":
        nths = (max(config.values),)
    return [(d, n) for n in nths for d in deltas]


def certify_cutoffs(config: SweepConfig, observables=None):
    """Run the cutoff ladder at every check point of ``config``.

    Returns the elementwise maximum certified cutoffs and one report entry
    per check point.
    """
    obs = tuple(observables or [o for o in config.outputs if o in OBSERVABLES] or ("T21", "g2_21_zero"))
    cp_max, cm_max, report = 2, 3, []
    for x, nth in _check_points(config):
        p = config.base.replace(n_th=nth)
        D = x * p.G
        p = p.replace(Delta=D, Delta_m=D / 2 if config.lock_mechanics else p.Delta_m)
        cp, cm, table = converge_cutoffs(
            p, obs, start=(p.cutoff_photon, p.cutoff_phonon), max_cutoffs=config.max_cutoffs,
            tol=config.tolerance, layout=config.layout,
        )
        report.append({"Delta_over_G": x, "n_th": nth, "cutoff_photon": cp,
                       "cutoff_phonon": cm, "table": table})
        cp_max, cm_max = max(cp_max, cp), max(cm_max, cm)
    return (cp_max, cm_max), report


def _ensure_cutoffs(config: SweepConfig) -> SweepConfig:
    if config.cutoff_policy != "converge":
        return config
    (cp, cm), _ = certify_cutoffs(config)
    log.info("certified cutoffs (%d, %d)", cp, cm)
    return replace(config, base=config.base.replace(cutoff_photon=cp, cutoff_phonon=cm))


def _solve_point(config: SweepConfig, value, series_value) -> dict:
    row = {c: math.nan for c in SWEEP_COLUMNS}
    row.update(sweep_value=value, series_value=series_value, status="ok", error="",
               amp_L=complex(math.nan, math.nan), amp_R=complex(math.nan, math.nan))
    try:
        p = config.params_at(value, series_value)
        row.update(cutoff_photon=p.cutoff_photon, cutoff_phonon=p.cutoff_phonon)
        res = transport(p, layout=config.layout)
        res.check()
        row.update(res.as_dict())
    except (BlockadeError, ValueError, ArithmeticError) as exc:
        row.update(status="error", error=f"{type(exc).__name__}: {exc}".replace("\n", " "))
    return row


def run_sweep(config: SweepConfig, threads: int = 1, progress=None) -> SweepResult:
    """Steady-state sweep over ``Delta`` or ``n_th`` (both probe directions per point).

    Point failures are recorded in the row (``status="error"``) rather than
    raised. Rows are ordered series-major, then by grid position, whatever
    the thread count.
    """
    if config.sweep_variable == "tau":
        return run_g2_delay(config)
    config = _ensure_cutoffs(config)
    tasks = [(v, s) for s in config.series_values for v in config.values]
    if threads > 1:
        # SuperLU holds the GIL, so workers are processes; map() keeps input order
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = []
            for row in pool.map(_solve_point, [config] * len(tasks), *zip(*tasks), chunksize=4):
                rows.append(row)
                if progress is not None:
                    progress(row)
    else:
        rows = []
        for t in tasks:
            rows.append(_solve_point(config, *t))
            if progress is not None:
                progress(rows[-1])
    return SweepResult(SWEEP_COLUMNS, rows, _provenance(config, "steady-state"), config)


def run_g2_delay(config: SweepConfig, threads: int = 1, progress=None) -> SweepResult:
    """Delay sweep of the normalised intensity correlation, one propagation per series value."""
    if config.sweep_variable != "tau":
        raise ConfigurationError("run_g2_delay needs sweep.variable = tau")
    config = _ensure_cutoffs(config)
    taus = config.tau_grid()
    rows = []
    for s in config.series_values:
        p = config.params_at(None, s)
        block = [{c: math.nan for c in TAU_COLUMNS} for _ in taus]
        for r, v in zip(block, config.values):
            r.update(sweep_value=v, series_value=s, status="ok", error="",
                     cutoff_photon=p.cutoff_photon, cutoff_phonon=p.cutoff_phonon)
        for name, port, mode in (("g2_21_tau", 1, "L"), ("g2_12_tau", 2, "R")):
            if name not in config.outputs:
                continue
            try:
                sol = solve_port(p, port, config.layout)
                vals = g2_tau(sol.liouvillian, sol.rho, mode, taus, method=config.method, rtol=config.rtol)
                for r, g in zip(block, vals):
                    r[name] = float(g)
            except (BlockadeError, ValueError, ArithmeticError) as exc:
                for r in block:
                    r.update(status="error", error=f"{type(exc).__name__}: {exc}".replace("\n", " "))
        if progress is not None:
            for r in block:
                progress(r)
        rows.extend(block)
    return SweepResult(TAU_COLUMNS, rows, _provenance(config, "delay"), config)


# ------------------------------------------------------------------ resonances

def find_extrema(x, y, kind: str = "both") -> list:
    """Interior local extrema of sampled ``y(x)`` with three-point parabolic refinement.

    Returns ``(x_refined, y_refined, "max"|"min")`` tuples in grid order.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = []
    for i in range(1, len(y) - 1):
        if not np.all(np.isfinite(y[i - 1:i + 2])):
            continue
        is_max = y[i] > y[i - 1] and y[i] > y[i + 1]
        is_min = y[i] < y[i - 1] and y[i] < y[i + 1]
        if not (is_max or is_min):
            continue
        label = "max" if is_max else "min"
        if kind != "both" and kind != label:
            continue
        x0, x1, x2 = x[i - 1:i + 2]
        y0, y1, y2 = y[i - 1:i + 2]
        denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
        a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
        b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
        if a != 0:
            xv = -b / (2 * a)
            if x0 <= xv <= x2:
                c = y1 - a * x1**2 - b * x1
                yv = a * xv**2 + b * xv + c
                yv = max(yv, y1) if is_max else min(yv, y1)
                out.append((float(xv), float(yv), label))
                continue
        out.append((float(x[i]), float(y[i]), label))
    return out


@dataclass
class PredictionReport:
    predictions: list   # dicts: pair, photon_order, Delta_over_G
    extrema: list       # dicts: series_value, Delta_over_G, kind, T21, nearest, deviation

    def prediction_values(self) -> np.ndarray:
        return np.unique(np.round([p["Delta_over_G"] for p in self.predictions], 12))

    def max_deviation(self) -> float:
        return max((e["deviation"] for e in self.extrema), default=0.0)

    def format_table(self) -> str:
        lines = ["# dressed-state resonance predictions (Delta/G)",
                 f"{'pair':>4} {'photons':>7} {'Delta/G':>12}"]
        for p in self.predictions:
            lines.append(f"{p['pair']:>4} {p['photon_order']:>7} {p['Delta_over_G']:>12.6f}")
        if self.extrema:
            lines += ["", "# T21 extrema from the sweep",
                      f"{'series':>8} {'kind':>4} {'Delta/G':>10} {'T21':>12} {'nearest':>10} {'deviation':>10}"]
            for e in self.extrema:
                s = "" if e["series_value"] is None else f"{e['series_value']:g}"
                lines.append(
                    f"{s:>8} {e['kind']:>4} {e['Delta_over_G']:>10.4f} {e['T21']:>12.4e} "
                    f"{e['nearest']:>10.4f} {e['deviation']:>10.4f}"
                )
        return "\n".join(lines)

    def rows(self) -> list:
        out = [{"kind": "prediction", "pair": p["pair"], "photon_order": p["photon_order"],
                "Delta_over_G": p["Delta_over_G"], "series_value": None, "T21": None,
                "nearest": None, "deviation": None} for p in self.predictions]
        out += [{"kind": e["kind"], "pair": None, "photon_order": None, **e} for e in self.extrema]
        return out


def predict_resonances(config: SweepConfig, sweep: SweepResult | None = None,
                       threads: int = 1) -> PredictionReport:
    """Dressed-state predictions, compared with T21 extrema of a Delta sweep.

    When ``config`` sweeps ``Delta`` and no ``sweep`` is given, the sweep is
    run first. Other sweep variables yield the prediction table alone.
    """
    if config.max_pair < 2:
        raise ConfigurationError("predict.max_pair must be >= 2")
    preds = []
    for r in resonance_detunings(config.max_pair, config.base.cutoff_phonon):
        for d in r.detunings:
            preds.append({"pair": r.pair, "photon_order": r.photon_order, "Delta_over_G": d})
    values = prediction_set(config.max_pair, cutoff_phonon=config.base.cutoff_phonon)
    extrema = []
    if config.sweep_variable == "Delta":
        if sweep is None:
            sweep = run_sweep(config, threads=threads)
        for s in config.series_values:
            sub = sweep.select(s)
            for xv, yv, kind in find_extrema(sub.column("sweep_value"), sub.column("T21")):
                k = int(np.argmin(np.abs(values - xv)))
                extrema.append({"series_value": s, "Delta_over_G": xv, "kind": kind, "T21": yv,
                                "nearest": float(values[k]), "deviation": float(abs(values[k] - xv))})
    return PredictionReport(preds, extrema)
