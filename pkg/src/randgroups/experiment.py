"""Monte Carlo sweeps over random presentations.

Every (length, trial) pair gets its own seed ``subseed(seed, l, trial)``
(a SeedSequence hash), so trials are independent and results do not depend
on execution order or on how many worker processes ran them.  Set
``RANDGROUPS_WORKERS`` to use a process pool.
"""

from __future__ import annotations

import ast
import csv
import io
import json
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .bounds import PresentationStats, asymptotic_curvature, lower_bound, upper_bound
from .cancellation import as_fraction, is_c_prime, piece_report
from .counting import omission_bound
from .coverage import covers_all, m_star
from .errors import InfeasibleConfigError, PreconditionError
from .presentation import Presentation
from .sampler import (
    DEFAULT_RELATOR_CAP,
    DensityConfig,
    FewRelatorConfig,
    density_relator_count,
    make_rng,
    sample_cyclically_reduced,
    sample_density,
    sample_few_relator,
    subseed,
)
from .words import is_reduced, parse_word

VERSION = "0.1.0"
MAX_TRIAL_LETTERS = 10**7
WORKERS_ENV = "RANDGROUPS_WORKERS"

_MEASUREMENT = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")
_PLAIN = {"lambda_star", "m_star", "bounds"}
_CALL = {"c_prime_at", "covers_length", "omits"}


# -- expressions --------------------------------------------------------------

_FUNCS = {
    "log": math.log,
    "ceil": math.ceil,
    "floor": math.floor,
    "sqrt": math.sqrt,
    "exp": math.exp,
}


def evaluate(expr: str, env: dict):
    """Arithmetic on ``l``, ``m``, ``n``, ``d`` and a few math functions.

    Rational literals and operations stay exact (``0.12`` is ``3/25``);
    functions switch to floating point.
    """
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise PreconditionError(f"cannot parse expression {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return Fraction(ast.get_source_segment(expr, node) or repr(node.value))
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise PreconditionError(f"unknown name {node.id!r} in {expr!r}")
            v = env[node.id]
            return Fraction(repr(v)) if isinstance(v, float) else Fraction(v)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            op = type(node.op)
            if op is ast.Add:
                return a + b
            if op is ast.Sub:
                return a - b
            if op is ast.Mult:
                return a * b
            if op is ast.Div:
                return a / b
            if op is ast.Pow:
                if isinstance(b, Fraction) and b.denominator == 1 and isinstance(a, Fraction):
                    return a ** int(b)
                return float(a) ** float(b)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            fn = _FUNCS.get(node.func.id)
            if fn is None or node.keywords or len(node.args) != 1:
                raise PreconditionError(f"unsupported call in {expr!r}")
            v = fn(float(ev(node.args[0])))
            return Fraction(v) if isinstance(v, int) else v
        raise PreconditionError(f"unsupported syntax in {expr!r}")

    return ev(tree)


def _as_rational(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(repr(float(v)))


def _as_int(v, expr: str) -> int:
    f = _as_rational(v)
    if f.denominator != 1:
        raise PreconditionError(f"{expr!r} must evaluate to an integer (use ceil or floor)")
    return int(f)


# -- configuration ------------------------------------------------------------


@dataclass(frozen=True)
class Measurement:
    key: str
    argument: str | None = None

    @property
    def name(self) -> str:
        return self.key if self.argument is None else f"{self.key}({self.argument})"

    @classmethod
    def parse(cls, text: str) -> "Measurement":
        match = _MEASUREMENT.match(text)
        if match is None:
            raise PreconditionError(f"unknown measurement {text!r}")
        key, arg = match.group(1), match.group(2)
        if key in _PLAIN and arg is None:
            return cls(key)
        if key in _CALL and arg is not None and arg.strip():
            return cls(key, arg.strip())
        raise PreconditionError(f"unknown measurement {text!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    m: int
    lengths: tuple[int, ...]
    trials: int
    seed: int
    measurements: tuple[Measurement, ...]
    n: int | None = None
    d: float | None = None
    relator_cap: int = DEFAULT_RELATOR_CAP

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(int(x) for x in self.lengths))
        object.__setattr__(
            self,
            "measurements",
            tuple(x if isinstance(x, Measurement) else Measurement.parse(x) for x in self.measurements),
        )
        if self.model not in ("few_relator", "density"):
            raise PreconditionError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise PreconditionError("trials must be >= 1")
        if not self.lengths or min(self.lengths) < 1:
            raise PreconditionError("lengths must be a nonempty list of positive integers")
        if not self.measurements:
            raise PreconditionError("at least one measurement is required")
        if self.model == "few_relator":
            FewRelatorConfig(self.m, self.n or 0, 1, 0)
        else:
            DensityConfig(self.m, self.d if self.d is not None else 0.0, 1, 0)
        for l in self.lengths:
            letters = self.relator_count(l) * l
            if letters > MAX_TRIAL_LETTERS:
                raise InfeasibleConfigError(
                    f"{letters} letters per trial at l={l} exceeds {MAX_TRIAL_LETTERS}"
                )

    def relator_count(self, l: int) -> int:
        if self.model == "few_relator":
            return self.n
        return density_relator_count(self.m, self.d, l, self.relator_cap)

    def env(self, l: int) -> dict:
        env = {"l": l, "m": self.m}
        if self.n is not None:
            env["n"] = self.n
        if self.d is not None:
            env["d"] = self.d
        return env

    def sample(self, l: int, trial: int) -> Presentation:
        s = subseed(self.seed, l, trial)
        if self.model == "few_relator":
            return sample_few_relator(FewRelatorConfig(self.m, self.n, l, s))
        return sample_density(DensityConfig(self.m, self.d, l, s), self.relator_cap)

    def to_dict(self) -> dict:
        out = {
            "model": self.model,
            "m": self.m,
            "lengths": list(self.lengths),
            "trials": self.trials,
            "seed": self.seed,
            "measurements": [x.name for x in self.measurements],
        }
        if self.n is not None:
            out["n"] = self.n
        if self.d is not None:
            out["d"] = self.d
        if self.model == "density":
            out["relator_cap"] = self.relator_cap
        return out


def config_from_dict(data: dict, seed: int | None = None) -> ExperimentConfig:
    try:
        model = data["model"]
        return ExperimentConfig(
            model=model,
            m=int(data["m"]),
            lengths=tuple(data["lengths"]),
            trials=int(data["trials"]),
            seed=int(seed if seed is not None else data["seed"]),
            measurements=tuple(data["measurements"]),
            n=int(data["n"]) if "n" in data else None,
            d=float(data["d"]) if "d" in data else None,
            relator_cap=int(data.get("relator_cap", DEFAULT_RELATOR_CAP)),
        )
    except KeyError as exc:
        raise PreconditionError(f"config is missing {exc.args[0]!r}") from exc


def load_config(path, seed: int | None = None) -> ExperimentConfig:
    try:
        import tomllib  # type: ignore[import-not-found]
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(Path(path), "rb") as fh:
        data = tomllib.load(fh)
    return config_from_dict(data, seed)


# -- running ------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Row:
    l: int
    trial: int
    measurement: str
    value: object = field(compare=False)

    def key(self):
        return (self.l, self.trial, self.measurement, _encode_value(self.value))


def _stats(p: Presentation) -> PresentationStats:
    return PresentationStats(
        p.m, max(p.lengths), min(p.lengths), piece_report(p).lambda_star, m_star(p).m_star
    )


def _omits(p: Presentation, w) -> bool:
    k = len(w)
    for r in p.relators:
        if len(r) >= k:
            doubled = r + r[: k - 1]
            if any(doubled[i : i + k] == w for i in range(len(r))):
                return False
    return True


def measure(p: Presentation, cfg: ExperimentConfig, l: int) -> list[tuple[str, object]]:
    out = []
    report = None
    env = cfg.env(l)
    for meas in cfg.measurements:
        key = meas.key
        if key in ("lambda_star", "c_prime_at") and report is None:
            report = piece_report(p)
        if key == "lambda_star":
            out.append((meas.name, report.lambda_star))
        elif key == "c_prime_at":
            lam = _as_rational(evaluate(meas.argument, env))
            holds = 0 < lam <= 1 and is_c_prime(p, lam, report).holds
            out.append((meas.name, bool(holds)))
        elif key == "m_star":
            out.append((meas.name, m_star(p).m_star))
        elif key == "covers_length":
            k = _as_int(evaluate(meas.argument, env), meas.argument)
            out.append((meas.name, covers_all(p, k) if k >= 1 else True))
        elif key == "omits":
            w = parse_word(meas.argument)
            if not w or not is_reduced(w):
                raise PreconditionError(f"omits() needs a nonempty reduced word, got {meas.argument!r}")
            out.append((meas.name, _omits(p, w)))
        elif key == "bounds":
            stats = _stats(p)
            for label, fn in (
                ("upper", upper_bound),
                ("kappa", asymptotic_curvature),
                ("lower_exact", lambda s: lower_bound(s).lower_exact),
            ):
                try:
                    value = fn(stats)
                except PreconditionError:
                    value = "precondition failed"
                out.append((f"bounds.{label}", value))
    return out


def _run_trial(args) -> list[Row]:
    cfg, l, trial = args
    p = cfg.sample(l, trial)
    return [Row(l, trial, name, value) for name, value in measure(p, cfg, l)]


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[Row]
    aggregates: list[dict]
    metadata: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "metadata": self.metadata,
                "config": self.config.to_dict(),
                "rows": [
                    {"l": r.l, "trial": r.trial, "measurement": r.measurement, "value": to_jsonable(r.value)}
                    for r in self.rows
                ],
                "aggregates": to_jsonable(self.aggregates),
            },
            sort_keys=True,
            indent=1,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["l", "trial", "measurement", "value"])
        for r in self.rows:
            writer.writerow([r.l, r.trial, r.measurement, _encode_value(r.value)])
        return buf.getvalue()

    def aggregate(self, l: int, measurement: str) -> dict:
        for a in self.aggregates:
            if a["l"] == l and a["measurement"] == measurement:
                return a
        raise KeyError((l, measurement))


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    # the endpoints are exact at the extremes; rounding must not exclude phat
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return (lo, hi)


def aggregate_rows(rows: list[Row]) -> list[dict]:
    groups: dict[tuple[int, str], list] = {}
    for r in rows:
        groups.setdefault((r.l, r.measurement), []).append(r.value)
    out = []
    for (l, name), values in sorted(groups.items()):
        entry: dict = {"l": l, "measurement": name, "count": len(values)}
        if all(isinstance(v, bool) for v in values):
            k = sum(values)
            entry["successes"] = k
            entry["fraction"] = Fraction(k, len(values))
            entry["ci95"] = list(wilson_interval(k, len(values)))
        elif all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values):
            entry["mean"] = sum(Fraction(v) for v in values) / len(values)
            entry["min"] = min(values)
            entry["max"] = max(values)
        else:
            nums = [v for v in values if isinstance(v, float)]
            entry["failed"] = len(values) - len(nums)
            if nums:
                entry["mean"] = math.fsum(nums) / len(nums)
                entry["min"] = min(nums)
                entry["max"] = max(nums)
        out.append(entry)
    return out


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    tasks = [(cfg, l, t) for l in cfg.lengths for t in range(cfg.trials)]
    workers = worker_count() if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_trial, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        chunks = [_run_trial(t) for t in tasks]
    rows = sorted((r for chunk in chunks for r in chunk), key=Row.key)
    metadata = {
        "version": VERSION,
        "seed": cfg.seed,
        "trial_seed": "SeedSequence([seed, l, trial]) -> 64-bit subseed; relator i uses SeedSequence([subseed, i])",
        "rng": "numpy PCG64",
        "sampling": "relators drawn independently and uniformly, duplicates permitted",
    }
    if cfg.model == "density":
        metadata["relator_count_rounding"] = "floor((2m-1)^(d l)), minimum 1"
        metadata["relator_counts"] = {str(l): cfg.relator_count(l) for l in cfg.lengths}
    else:
        metadata["relator_lengths"] = "length k <= l chosen with probability N_k / N_<=l"
    return ExperimentResult(cfg, rows, aggregate_rows(rows), metadata)


# -- coverage and omission -----------------------------------------------------


@dataclass(frozen=True)
class OmissionCheck:
    m: int
    l: int
    word: str
    trials: int
    omitted: int
    empirical: float
    bound: float
    sigma: float
    holds: bool


def omission_frequency(m: int, l: int, word: str, trials: int, seed: int) -> OmissionCheck:
    """Fraction of uniform cyclically reduced length-``l`` words that omit
    ``word`` cyclically, against the analytic omission bound.  The check
    allows three binomial standard errors evaluated at the bound."""
    w = parse_word(word)
    bound = omission_bound(m, l, len(w))
    omitted = 0
    for t in range(trials):
        r = sample_cyclically_reduced(m, l, make_rng(seed, l, t))
        if _omits(Presentation(m, (r,)), w):
            omitted += 1
    empirical = omitted / trials
    sigma = math.sqrt(bound * (1 - bound) / trials)
    return OmissionCheck(m, l, word, trials, omitted, empirical, bound, sigma, empirical <= bound + 3 * sigma)


def coverage_experiment(cfg: ExperimentConfig, k: str, omit_word: str | None = None) -> ExperimentResult:
    """Fraction of presentations containing every reduced word of length
    ``k(l)``, with the analytic union bound alongside when its hypotheses
    (``4 < k < l/4``) hold."""
    extra = [Measurement("covers_length", k)]
    if omit_word is not None:
        extra.append(Measurement("omits", omit_word))
    names = {x.name for x in cfg.measurements}
    measurements = tuple(cfg.measurements) + tuple(x for x in extra if x.name not in names)
    run_cfg = ExperimentConfig(**{**_fields(cfg), "measurements": measurements})
    result = run_experiment(run_cfg)
    analytic = {}
    for l in cfg.lengths:
        g = _as_int(evaluate(k, cfg.env(l)), k)
        entry: dict = {"k": g}
        try:
            b = omission_bound(cfg.m, l, g)
            entry["omission_bound"] = b
            entry["union_bound"] = min(1.0, 4 / 3 * (2 * cfg.m - 1) ** g * b)
        except PreconditionError as exc:
            entry["omission_bound"] = entry["union_bound"] = f"precondition failed: {exc}"
        if omit_word is not None:
            agg = result.aggregate(l, f"omits({omit_word})")
            w = parse_word(omit_word)
            try:
                b = omission_bound(cfg.m, l, len(w))
                sigma = math.sqrt(b * (1 - b) / agg["count"])
                entry["word_omission_bound"] = b
                entry["word_omission_check"] = float(agg["fraction"]) <= b + 3 * sigma
            except PreconditionError as exc:
                entry["word_omission_bound"] = f"precondition failed: {exc}"
        analytic[str(l)] = entry
    result.metadata["analytic"] = analytic
    return result


def _fields(cfg: ExperimentConfig) -> dict:
    return {
        "model": cfg.model,
        "m": cfg.m,
        "lengths": cfg.lengths,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "measurements": cfg.measurements,
        "n": cfg.n,
        "d": cfg.d,
        "relator_cap": cfg.relator_cap,
    }


# -- encodings ----------------------------------------------------------------


def to_jsonable(value):
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "__dataclass_fields__"):
        return to_jsonable(asdict(value))
    return value


def from_jsonable(value):
    if isinstance(value, dict):
        if set(value) == {"num", "den"}:
            return Fraction(value["num"], value["den"])
        return {k: from_jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_jsonable(v) for v in value]
    return value


def _encode_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return str(v)


_INT = re.compile(r"^-?\d+$")
_FRAC = re.compile(r"^-?\d+/\d+$")


def _decode_value(s: str):
    if s == "true":
        return True
    if s == "false":
        return False
    if _INT.match(s):
        return int(s)
    if _FRAC.match(s):
        return Fraction(s)
    try:
        return float(s)
    except ValueError:
        return s


def rows_from_csv(text: str) -> list[tuple]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["l", "trial", "measurement", "value"]:
        raise ValueError(f"unexpected CSV header {header}")
    return [(int(l), int(t), name, _decode_value(v)) for l, t, name, v in reader]


def rows_from_json(text: str) -> list[tuple]:
    data = json.loads(text)
    return [(r["l"], r["trial"], r["measurement"], from_jsonable(r["value"])) for r in data["rows"]]

