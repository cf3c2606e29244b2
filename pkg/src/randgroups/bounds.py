"""Conformal dimension bounds for small cancellation and random groups.

All logarithms are natural.  Every bound with hypotheses checks them first
and raises :class:`PreconditionError` naming the failed clause; the report
records that message instead of a number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cancellation import as_fraction, piece_report
from .coverage import m_star as coverage_m_star
from .errors import PreconditionError
from .presentation import Presentation

SIXTH = Fraction(1, 6)
DELTA_STEP = 1024
FIXED_C = Fraction(1, 100)


@dataclass(frozen=True)
class PresentationStats:
    m: int
    M: int
    min_r: int
    lambda_star: Fraction
    m_star: int

    def __post_init__(self):
        object.__setattr__(self, "lambda_star", as_fraction(self.lambda_star))
        if self.min_r > self.M:
            raise PreconditionError("min_r must not exceed M")
        if not 0 <= self.lambda_star <= 1:
            raise PreconditionError("lambda_star must lie in [0, 1]")


@dataclass(frozen=True)
class LowerBound:
    lower_exact: float
    lower_fixed_C: float
    K: int
    T_size: int
    delta_used: Fraction


@dataclass
class BoundsReport:
    stats: PresentationStats
    lambda_used: Fraction
    upper: float | str
    upper_strict: float | str
    kappa: float | str
    lower_exact: float | str
    lower_fixed_C: float | str
    entropy_upper: float
    epsilon: float
    density_upper: float | str | None = None
    delta_used: Fraction | None = None
    T_size: int | None = None
    K: int | None = None
    generic_bounds: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def stats_from_presentation(p: Presentation) -> PresentationStats:
    lengths = p.lengths
    return PresentationStats(
        p.m, max(lengths), min(lengths), piece_report(p).lambda_star, coverage_m_star(p).m_star
    )


def effective_lambda(stats: PresentationStats) -> Fraction:
    """The lambda fed into the upper bound: lambda_star, or 1/6 when no
    pieces exist at all."""
    return stats.lambda_star if stats.lambda_star > 0 else SIXTH


def _floor_term(lam: Fraction) -> int:
    if lam > SIXTH:
        raise PreconditionError(f"needs lambda <= 1/6, got {lam}")
    return math.floor(1 / lam - 4)


def upper_bound(stats: PresentationStats, lam=None) -> float:
    """``M log(2m-1) / (2 log floor(1/lambda - 4))``."""
    lam = effective_lambda(stats) if lam is None else as_fraction(lam)
    k = _floor_term(lam)
    return stats.M * math.log(2 * stats.m - 1) / (2 * math.log(k))


def strict_floor_term(lambda_star: Fraction) -> int:
    """Largest ``floor(1/lambda - 4)`` over ``lambda > lambda_star`` with
    ``lambda <= 1/6``; the presentation is C'(lambda) exactly for those."""
    if lambda_star >= SIXTH:
        raise PreconditionError(f"no lambda in ({lambda_star}, 1/6] exists")
    if lambda_star == 0:
        raise PreconditionError("no pieces: the bound is unbounded as lambda -> 0")
    x = 1 / lambda_star - 4
    return math.ceil(x) - 1


def upper_bound_strict(stats: PresentationStats) -> float:
    k = strict_floor_term(stats.lambda_star)
    return stats.M * math.log(2 * stats.m - 1) / (2 * math.log(k))


def asymptotic_curvature(stats: PresentationStats, lam=None) -> float:
    """``kappa = -(4 / M^2) log^2 floor(1/lambda - 4)``."""
    lam = effective_lambda(stats) if lam is None else as_fraction(lam)
    k = _floor_term(lam)
    return -4 / stats.M**2 * math.log(k) ** 2


def admissible_delta(stats: PresentationStats) -> Fraction:
    """Largest ``delta = i/1024`` in ``(0, 1/8)`` with ``lambda_star < 1/8 - delta``
    and ``min_r >= 3/delta``."""
    eighth = Fraction(1, 8)
    for i in range(DELTA_STEP // 8 - 1, 0, -1):
        delta = Fraction(i, DELTA_STEP)
        if stats.lambda_star < eighth - delta and stats.min_r * delta >= 3:
            return delta
    clauses = []
    if not stats.lambda_star < eighth - Fraction(1, DELTA_STEP):
        clauses.append(f"C'(1/8 - delta) fails for every delta (lambda_star = {stats.lambda_star})")
    else:
        clauses.append(
            f"no delta with both lambda_star < 1/8 - delta and min_r >= 3/delta (min_r = {stats.min_r})"
        )
    raise PreconditionError("; ".join(clauses))


def lower_bound(stats: PresentationStats) -> LowerBound:
    problems = []
    delta = None
    try:
        delta = admissible_delta(stats)
    except PreconditionError as exc:
        problems.append(str(exc))
    if stats.m_star < 12:
        problems.append(f"M* >= 12 violated (M* = {stats.m_star})")
    if stats.M < 2:
        problems.append("M >= 2 needed for log M > 0")
    if problems:
        raise PreconditionError("; ".join(problems))
    K = math.floor(Fraction(stats.m_star, 2) - 3)
    T = 3 * (2 * stats.m - 2) ** (K - 3)
    log_M = math.log(stats.M)
    exact = 1 + math.log(T) / log_M
    fixed = 1 + float(FIXED_C) * math.log(2 * stats.m) * stats.m_star / log_M
    return LowerBound(exact, fixed, K, T, delta)


def entropy_upper(m: int, epsilon: float) -> float:
    """``log(2m-1) / epsilon``: conformal dimension is at most entropy over
    the visual parameter, and entropy is at most ``log(2m-1)``."""
    if not epsilon > 0:
        raise PreconditionError("epsilon must be positive")
    return math.log(2 * m - 1) / epsilon


def standard_epsilon(M: int) -> float:
    """Visual parameter ``log 2 / (4 delta)`` for a ``2M``-hyperbolic Cayley graph."""
    return math.log(2) / (4 * 2 * M)


def density_upper(m: int, d: float, l: int) -> float:
    """``16 log(2m-1) l / (log 2 (1 - 2d))`` for density ``d < 1/2``."""
    if not 0 < d < 0.5:
        raise PreconditionError("density bound needs 0 < d < 1/2")
    return 16 * math.log(2 * m - 1) / (math.log(2) * (1 - 2 * d)) * l


def generic_bounds(m: int, l: int, d: float | None = None) -> dict:
    """Both generic two-sided estimates with the constant ``C`` left symbolic,
    plus their values at ``C = 1`` for scale only."""
    out = {
        "few_relator": {
            "lower": "1 + 1/C",
            "upper": "C * log(2m-1) * l / log(l)",
            "at_C_1": {"lower": 2.0, "upper": math.log(2 * m - 1) * l / math.log(l)}
            if l > 1
            else None,
            "note": "up to an unspecified constant C > 1",
        }
    }
    if d is not None:
        entry = {
            "lower": "1 + (d log(2m) / C) * l / log(l)",
            "upper": "C * log(2m-1) / |log d| * l",
            "note": "up to an unspecified constant C > 1",
        }
        if 0 < d < 1 / 16 and l > 1:
            entry["at_C_1"] = {
                "lower": 1 + d * math.log(2 * m) * l / math.log(l),
                "upper": math.log(2 * m - 1) / abs(math.log(d)) * l,
            }
        else:
            entry["at_C_1"] = None
            entry["note"] += "; stated only for 0 < d < 1/16"
        out["density"] = entry
    return out


def _attempt(fn, *args):
    try:
        return fn(*args)
    except PreconditionError as exc:
        return f"precondition failed: {exc}"


def bounds_report(stats: PresentationStats, d: float | None = None, l: int | None = None) -> BoundsReport:
    lam = effective_lambda(stats)
    notes = []
    if stats.lambda_star == 0:
        notes.append("lambda_star = 0: the upper bound and kappa use lambda = 1/6")
    notes.append(
        "upper uses lambda = lambda_star; C'(lambda) holds only for lambda > lambda_star, "
        "and upper_strict uses the best floor(1/lambda - 4) over that range"
    )
    eps = standard_epsilon(stats.M)
    report = BoundsReport(
        stats=stats,
        lambda_used=lam,
        upper=_attempt(upper_bound, stats),
        upper_strict=_attempt(upper_bound_strict, stats),
        kappa=_attempt(asymptotic_curvature, stats),
        lower_exact="",
        lower_fixed_C="",
        entropy_upper=entropy_upper(stats.m, eps),
        epsilon=eps,
        notes=notes,
    )
    low = _attempt(lower_bound, stats)
    if isinstance(low, LowerBound):
        report.lower_exact = low.lower_exact
        report.lower_fixed_C = low.lower_fixed_C
        report.delta_used = low.delta_used
        report.T_size = low.T_size
        report.K = low.K
    else:
        report.lower_exact = report.lower_fixed_C = low
    length = l if l is not None else stats.M
    if d is not None:
        report.density_upper = _attempt(density_upper, stats.m, d, length)
    report.generic_bounds = generic_bounds(stats.m, length, d)
    return report
