"""Switch Rate, Claim Rate, per-ingredient risk tables and the wet-food dose-response."""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .classify import ingredient_exposure
from .cohort import CohortAssignment, CohortGroup
from .errors import (
    DegenerateMargin,
    EmptyBins,
    EmptyDenominator,
    NoFormKnownPurchases,
    NoSharedIngredients,
    TooFewSignificant,
)
from .ingest import FoodForm, Group, ProductEntry, QuestionnaireRecord
from .numstat import (
    TestResult,
    TrendTable,
    TwoByTwoTable,
    chi_squared_2x2,
    cochran_armitage,
    pearson,
)

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.05
DEFAULT_MIN_EXPOSURE = 50


@dataclass(frozen=True)
class RateEstimate:
    positives: int
    total: int

    def __post_init__(self):
        if self.total <= 0:
            raise EmptyDenominator("rate with an empty denominator")
        if not 0 <= self.positives <= self.total:
            raise ValueError(f"positives {self.positives} outside [0, {self.total}]")

    @property
    def rate(self) -> float:
        return self.positives / self.total


def switch_rate(cases: int, controls: int) -> RateEstimate:
    """Share of users who moved from general food to a target product."""
    if cases + controls <= 0:
        raise EmptyDenominator("no cases or controls")
    return RateEstimate(cases, cases + controls)


def claim_rate(case_n: int, control_n: int) -> RateEstimate:
    """Share of insured animals in the claim (case) group."""
    if case_n + control_n <= 0:
        raise EmptyDenominator("no case or control animals")
    return RateEstimate(case_n, case_n + control_n)


@dataclass(frozen=True)
class IngredientRiskRow:
    ingredient: str
    switch_rate: RateEstimate
    claim_rate: RateEstimate
    chi2: TestResult | None  # claim side; None when a margin is empty
    ec_chi2: TestResult | None
    significant: bool


def _exposure_counts(exposures: Iterable[tuple[bool, frozenset[str]]]) -> tuple[Counter, Counter, int, int]:
    cases, totals = Counter(), Counter()
    n_case = n_all = 0
    for is_case, tokens in exposures:
        n_all += 1
        n_case += is_case
        totals.update(tokens)
        if is_case:
            cases.update(tokens)
    return cases, totals, n_case, n_all


def _map_categories(tokens: frozenset[str], categories: Mapping[str, str] | None) -> frozenset[str]:
    if categories is None:
        return tokens
    return frozenset(categories[t] for t in tokens if t in categories)


def user_exposures(assignments: Iterable[CohortAssignment],
                   catalog: Mapping[str, ProductEntry]) -> list[tuple[bool, frozenset[str]]]:
    """(is_case, ingredient set) for each case/control user, from in-window purchases."""
    cache: dict[frozenset[str], frozenset[str]] = {}
    out = []
    for a in assignments:
        if a.group is CohortGroup.EXCLUDED:
            continue
        products = frozenset(p.product_id for p in a.window_purchases)
        if products not in cache:
            cache[products] = ingredient_exposure(products, catalog)
        out.append((a.group is CohortGroup.CASE, cache[products]))
    return out


def _chi2_or_none(table: TwoByTwoTable, yates: bool) -> TestResult | None:
    try:
        return chi_squared_2x2(table, yates=yates)
    except DegenerateMargin:
        return None


def ingredient_risk_table(assignments: Sequence[CohortAssignment], catalog: Mapping[str, ProductEntry],
                          questionnaire: Sequence[QuestionnaireRecord], alpha: float = DEFAULT_ALPHA,
                          min_exposure: int = DEFAULT_MIN_EXPOSURE, screen_on: str = "claim",
                          categories: Mapping[str, str] | None = None,
                          yates: bool = False) -> list[IngredientRiskRow]:
    """Per-ingredient Switch Rate and Claim Rate with chi-squared screening.

    Exposure is binary on both sides.  Rows with fewer than ``min_exposure``
    exposed users (EC side) or animals (questionnaire side) are dropped.
    ``screen_on`` picks which side's test decides significance: "claim",
    "ec" or "both".  ``categories`` optionally maps ingredient tokens to
    coarser category labels before counting.
    """
    if screen_on not in ("claim", "ec", "both"):
        raise ValueError(f"screen_on must be claim, ec or both, got {screen_on!r}")
    ec = [(c, _map_categories(t, categories)) for c, t in user_exposures(assignments, catalog)]
    qs = [(r.group is Group.CASE, _map_categories(r.exposures, categories)) for r in questionnaire]
    ec_cases, ec_totals, ec_n_case, ec_n = _exposure_counts(ec)
    q_cases, q_totals, q_n_case, q_n = _exposure_counts(qs)
    shared = sorted(set(ec_totals) & set(q_totals))
    if not shared:
        raise NoSharedIngredients("purchase and questionnaire vocabularies do not overlap")

    rows = []
    for ing in shared:
        if ec_totals[ing] < min_exposure or q_totals[ing] < min_exposure:
            continue
        qa, qt = q_cases[ing], q_totals[ing]
        ea, et = ec_cases[ing], ec_totals[ing]
        claim_t = TwoByTwoTable(qa, qt - qa, q_n_case - qa, (q_n - q_n_case) - (qt - qa))
        ec_t = TwoByTwoTable(ea, et - ea, ec_n_case - ea, (ec_n - ec_n_case) - (et - ea))
        chi2 = _chi2_or_none(claim_t, yates)
        ec_chi2 = _chi2_or_none(ec_t, yates)
        sig_claim = chi2 is not None and chi2.p_value < alpha
        sig_ec = ec_chi2 is not None and ec_chi2.p_value < alpha
        significant = {"claim": sig_claim, "ec": sig_ec, "both": sig_claim and sig_ec}[screen_on]
        rows.append(IngredientRiskRow(ing, switch_rate(ea, et - ea), claim_rate(qa, qt - qa),
                                      chi2, ec_chi2, significant))
    log.info("ingredient table: %d shared tokens, %d rows kept, %d significant",
             len(shared), len(rows), sum(r.significant for r in rows))
    return rows


@dataclass(frozen=True)
class ScatterPoint:
    ingredient: str
    claim_rate: float
    switch_rate: float


@dataclass(frozen=True)
class IngredientValidation:
    result: TestResult
    scatter: tuple[ScatterPoint, ...]


def validate_ingredients(rows: Sequence[IngredientRiskRow]) -> IngredientValidation:
    """Pearson r between Claim Rate and Switch Rate over significant ingredients."""
    sig = sorted((r for r in rows if r.significant), key=lambda r: r.ingredient)
    if len(sig) < 3:
        raise TooFewSignificant(f"need at least 3 significant ingredients, got {len(sig)}")
    scatter = tuple(ScatterPoint(r.ingredient, r.claim_rate.rate, r.switch_rate.rate) for r in sig)
    result = pearson([p.claim_rate for p in scatter], [p.switch_rate for p in scatter])
    return IngredientValidation(result, scatter)


class WetBin(str, Enum):
    EXACTLY0 = "exactly0"
    LE25 = "le25"
    LE50 = "le50"
    LE75 = "le75"
    LT100 = "lt100"
    EXACTLY100 = "exactly100"


POSITIVE_BINS = (WetBin.LE25, WetBin.LE50, WetBin.LE75, WetBin.LT100, WetBin.EXACTLY100)


def wet_bin(rate: float) -> WetBin:
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"wet rate outside [0, 1]: {rate}")
    if rate == 0.0:
        return WetBin.EXACTLY0
    if rate <= 0.25:
        return WetBin.LE25
    if rate <= 0.5:
        return WetBin.LE50
    if rate <= 0.75:
        return WetBin.LE75
    if rate < 1.0:
        return WetBin.LT100
    return WetBin.EXACTLY100


def wet_rate(assignment: CohortAssignment, catalog: Mapping[str, ProductEntry]) -> float:
    """Share of wet-form events among in-window wet or dry purchase events."""
    wet = dry = 0
    for p in assignment.window_purchases:
        form = catalog[p.product_id].food_form
        if form is FoodForm.WET:
            wet += 1
        elif form is FoodForm.DRY:
            dry += 1
    if wet + dry == 0:
        raise NoFormKnownPurchases(f"user {assignment.user_id} has no wet or dry purchase in window")
    return wet / (wet + dry)


@dataclass(frozen=True)
class WetRateBin:
    bin: WetBin
    cases: int
    total: int

    @property
    def switch_rate(self) -> RateEstimate | None:
        return RateEstimate(self.cases, self.total) if self.total else None


@dataclass(frozen=True)
class DoseResponse:
    bins: tuple[WetRateBin, ...]
    trend: TestResult
    ratio: float | None
    n_unknown_form: int

    def bin(self, which: WetBin) -> WetRateBin:
        return next(b for b in self.bins if b.bin is which)


def dose_response(assignments: Iterable[CohortAssignment], catalog: Mapping[str, ProductEntry],
                  scores: Sequence[float] = (1, 2, 3, 4, 5)) -> DoseResponse:
    """Bin users by wet rate and test for a trend across the five positive bins.

    The all-dry bin is reported but left out of the trend test.  ``ratio`` is
    the Switch Rate of the <=25% bin over that of the 100% bin.
    """
    cases, totals = Counter(), Counter()
    unknown = 0
    for a in assignments:
        if a.group is CohortGroup.EXCLUDED:
            continue
        try:
            b = wet_bin(wet_rate(a, catalog))
        except NoFormKnownPurchases:
            unknown += 1
            continue
        totals[b] += 1
        cases[b] += a.group is CohortGroup.CASE
    bins = tuple(WetRateBin(b, cases[b], totals[b]) for b in WetBin)
    used = [(s, cases[b], totals[b]) for s, b in zip(scores, POSITIVE_BINS) if totals[b] > 0]
    if len(used) < 2:
        raise EmptyBins(f"only {len(used)} non-empty positive wet-rate bin(s)")
    table = TrendTable.from_counts([u[1] for u in used], [u[2] for u in used], [u[0] for u in used])
    trend = cochran_armitage(table)
    low, high = bins[1], bins[-1]
    ratio = None
    if low.total and high.total and high.cases:
        ratio = low.switch_rate.rate / high.switch_rate.rate
    else:
        log.warning("dose-response ratio undefined: empty <=25%% or 100%% bin")
    return DoseResponse(bins, trend, ratio, unknown)


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def write_ingredient_risk(path, rows: Iterable[IngredientRiskRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("ingredient", "ec_cases", "ec_total", "switch_rate", "claim_cases", "claim_total",
                    "claim_rate", "chi2", "p", "significant"))
        for r in rows:
            w.writerow((r.ingredient, r.switch_rate.positives, r.switch_rate.total, _fmt(r.switch_rate.rate),
                        r.claim_rate.positives, r.claim_rate.total, _fmt(r.claim_rate.rate),
                        _fmt(r.chi2.statistic if r.chi2 else None), _fmt(r.chi2.p_value if r.chi2 else None),
                        int(r.significant)))


def write_scatter(path, scatter: Iterable[ScatterPoint]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("ingredient", "claim_rate", "switch_rate"))
        for p in scatter:
            w.writerow((p.ingredient, _fmt(p.claim_rate), _fmt(p.switch_rate)))


def write_dose_response(path, dr: DoseResponse) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("bin", "cases", "total", "rate"))
        for b in dr.bins:
            w.writerow((b.bin.value, b.cases, b.total, _fmt(b.switch_rate.rate if b.total else None)))


def validation_record(validation: IngredientValidation | None, n_rows: int,
                      dr: DoseResponse | None) -> dict:
    rec = {"n_rows": n_rows, "n_significant": None, "r": None, "p": None,
           "trend_z": None, "trend_p": None, "ratio": None}
    if validation is not None:
        rec.update(n_significant=len(validation.scatter), r=validation.result.statistic,
                   p=validation.result.p_value)
    if dr is not None:
        rec.update(trend_z=dr.trend.statistic, trend_p=dr.trend.p_value, ratio=dr.ratio)
    return rec


def write_json(path, record: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
