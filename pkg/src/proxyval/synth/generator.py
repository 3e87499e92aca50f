"""Seeded generator of coupled purchase, claim and questionnaire data.

Two populations share one hazard model.  Shoppers (the EC population) place
orders on an irregular cadence, each order holding a fixed number of dry and
wet items; at onset they may switch to a target product after a short lag.
Insured animals are followed for the whole range and episodes may recur;
each episode may be claimed, which feeds the monthly claim counts and the
questionnaire case group.  The monthly onset probability is

    logistic(logit(base) + sum of exposed ingredient effects
             + wet_effect * wet_share
             + seasonal_amplitude * cos(2 pi (month - peak) / 12))

where ``wet_share`` is the wet share of items in each order.
"""

from __future__ import annotations

import datetime as dt
import math
from functools import cached_property, partial
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from ..ingest import (
    Category,
    ClaimSeriesRow,
    FoodForm,
    Group,
    ProductEntry,
    PurchaseRecord,
    QuestionnaireRecord,
)
from ..months import Month
from .config import GeneratorConfig
from .rng import CounterRNG, Stream

FAMILY_WORDS = (
    "chicken", "tuna", "salmon", "beef", "turkey", "duck", "lamb", "pork", "bonito", "sardine",
    "mackerel", "whitefish", "shrimp", "crab", "egg", "rice", "corn", "wheat", "soy", "pea",
    "potato", "oat", "barley", "beet", "carrot", "pumpkin", "yeast", "kelp", "cranberry", "milk",
)
BRANDS = ("Purrfect", "Whisker", "Nekoya", "Tamacat", "Felix Farm", "Meow Kitchen", "Kuro", "Shiro")
TARGET_TEMPLATES = (
    "Urinary Care {fam} {form}",
    "pH Control {fam} {form}",
    "ｐＨ　Ｃａｒｅ {fam} {form}",  # full-width "pH Care"
    "Struvite Management {fam} {form}",
    "FLUTD Support {fam} {form}",
    "Lower Urinary Tract Health {fam} {form}",
    "Mineral Control {fam} {form}",
    "pH Balance {fam} {form}",
)
UNMATCHED_TEMPLATES = (
    "Renal Support {fam} {form}",
    "Hypoallergenic {fam} {form}",
    "Digestive Care {fam} {form}",
    "Weight Management {fam} {form}",
    "Hairball Relief {fam} {form}",
)
MAX_BASKET = 2
# (wet items, total items) per purchase occasion for mixed feeders.
MIXED_OCCASIONS = ((1, 4), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (4, 5))
MAX_ITEMS = max(t for _, t in MIXED_OCCASIONS)
MIN_ACTIVE_DAYS = 180
WINDOW_DAYS = 365
_UNIT_TARGET = 1_000_000
_UNIT_UNMATCHED = 2_000_000


def ingredient_names(n: int, n_families: int) -> list[str]:
    """Tokens like ``tuna-03``; ingredient i belongs to family ``i % n_families``."""
    names = []
    for i in range(n):
        fam, k = i % n_families, i // n_families
        word = FAMILY_WORDS[fam] if n_families <= len(FAMILY_WORDS) else f"family{fam:03d}"
        names.append(f"{word}-{k + 1:02d}")
    return names


def logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def seasonal_profile(config: GeneratorConfig) -> np.ndarray:
    """Seasonal log-odds term for calendar months 1..12 (index 0 = January)."""
    m = np.arange(1, 13)
    return config.seasonal_amplitude * np.cos(2.0 * np.pi * (m - config.seasonal_peak_month) / 12.0)


def onset_probability(config: GeneratorConfig, ingredients: Sequence[str], wet_share: float,
                      month_indices: Sequence[int], effects: Mapping[str, float] | None = None) -> float:
    """Exact probability of onset within the given months (indices from start_month)."""
    effects = config.ingredient_effects if effects is None else effects
    base = logit(config.base_monthly_hazard) + sum(effects.get(i, 0.0) for i in set(ingredients))
    base += config.wet_effect * wet_share
    season = seasonal_profile(config)
    survive = 1.0
    for k in month_indices:
        moy = (config.start_month + k).month
        survive *= 1.0 - 1.0 / (1.0 + math.exp(-(base + season[moy - 1])))
    return 1.0 - survive


class UserTruth(NamedTuple):
    user_id: str
    group: str                       # intended cohort group
    onset_month: Month | None        # onset, whether or not a switch followed
    first_target_date: dt.date | None
    wet_share: float
    diet: frozenset[str]             # ingredients driving the hazard
    window_exposure: frozenset[str]  # ingredients bought inside the intended window


@dataclass(frozen=True)
class GroundTruth:
    user_chunks: tuple[Callable[[], list[UserTruth]], ...] = field(repr=False)
    effects: Mapping[str, float]
    claim_effects: Mapping[str, float]
    seasonal: tuple[float, ...]
    target_ids: frozenset[str]
    general_ids: frozenset[str]
    unmatched_ids: frozenset[str]
    insured_onsets: int
    insured_claims: int

    @cached_property
    def users(self) -> tuple[UserTruth, ...]:
        """Per-user truth in user order, assembled on first access."""
        return tuple(u for build in self.user_chunks for u in build())

    def intended_groups(self) -> dict[str, str]:
        return {u.user_id: u.group for u in self.users}


@dataclass(frozen=True)
class SyntheticBundle:
    config: GeneratorConfig
    catalog: Mapping[str, ProductEntry]
    purchases: tuple[PurchaseRecord, ...]
    claims: tuple[ClaimSeriesRow, ...]
    questionnaire: tuple[QuestionnaireRecord, ...]
    truth: GroundTruth


class _Catalog(NamedTuple):
    entries: dict[str, ProductEntry]
    general_ids: list[str]       # index order = product index
    dry_idx: np.ndarray          # indices into general_ids
    wet_idx: np.ndarray
    ingredient_matrix: np.ndarray  # general products x ingredients, bool
    target_ids: list[str]
    unmatched_ids: list[str]


def _draw_products(rng: CounterRNG, config: GeneratorConfig, units: np.ndarray):
    """Form, family, ingredient indices and a spare uniform for each recipe unit."""
    n_ing, n_fam = config.n_ingredients, config.n_families
    span = config.max_ingredients - config.min_ingredients + 1
    draws = rng.uniform(Stream.CATALOG, units[:, None], np.arange(4))
    wet = draws[:, 0] < 0.5
    m = config.min_ingredients + np.minimum((draws[:, 2] * span).astype(int), span - 1)
    keys = rng.uniform(Stream.CATALOG, units[:, None], np.arange(10, 10 + n_ing))
    order = np.argsort(keys, axis=1, kind="stable")
    picked = [sorted(order[r, :m[r]].tolist()) for r in range(len(units))]
    family = order[:, 0] % n_fam  # the leading ingredient names the product
    return wet.tolist(), family.tolist(), picked, draws[:, 3].tolist()


def build_catalog(config: GeneratorConfig) -> _Catalog:
    rng = CounterRNG(config.seed)
    names = ingredient_names(config.n_ingredients, config.n_families)
    entries: dict[str, ProductEntry] = {}
    general_ids = []
    matrix = np.zeros((config.n_general_products, config.n_ingredients), dtype=bool)

    # Each recipe is sold as a dry product and a wet product with the same
    # ingredients, so the form carries no ingredient signal.
    _, families, picked, spare = _draw_products(rng, config, np.arange((config.n_general_products + 1) // 2))
    forms = [j % 2 == 1 for j in range(config.n_general_products)]
    for j, wet in enumerate(forms):
        family, ingredients, u = families[j // 2], picked[j // 2], spare[j // 2]
        brand = BRANDS[int(u * len(BRANDS)) % len(BRANDS)]
        fam_word = names[family].split("-")[0].title()
        name = f"{brand} {fam_word} {'Pate' if wet else 'Kibble'} No.{j + 1}"
        pid = f"g{j + 1:05d}"
        entries[pid] = ProductEntry(pid, name, Category.GENERAL, FoodForm.WET if wet else FoodForm.DRY,
                                    frozenset(names[i] for i in ingredients))
        general_ids.append(pid)
        matrix[j, ingredients] = True

    def therapeutic(prefix: str, count: int, unit0: int, templates) -> list[str]:
        ids = []
        drawn = _draw_products(rng, config, unit0 + np.arange(count))
        for j, (wet, family, ingredients, _) in enumerate(zip(*drawn)):
            fam_word = names[family].split("-")[0].title()
            name = templates[j % len(templates)].format(fam=fam_word, form="Wet" if wet else "Dry")
            pid = f"{prefix}{j + 1:04d}"
            entries[pid] = ProductEntry(pid, name, Category.THERAPEUTIC,
                                        FoodForm.WET if wet else FoodForm.DRY,
                                        frozenset(names[i] for i in ingredients))
            ids.append(pid)
        return ids

    target_ids = therapeutic("t", config.n_target_products, _UNIT_TARGET, TARGET_TEMPLATES)
    unmatched_ids = therapeutic("x", config.n_unmatched_therapeutic, _UNIT_UNMATCHED, UNMATCHED_TEMPLATES)
    forms_arr = np.array(forms)
    dry_idx, wet_idx = np.flatnonzero(~forms_arr), np.flatnonzero(forms_arr)
    return _Catalog(dict(sorted(entries.items())), general_ids, dry_idx, wet_idx, matrix,
                    target_ids, unmatched_ids)


class _Diet(NamedTuple):
    wet_share: np.ndarray      # (n,) wet items / all items per occasion
    n_dry: np.ndarray          # (n,) dry items per purchase occasion
    n_wet: np.ndarray          # (n,) wet items per purchase occasion
    dry_basket: np.ndarray     # (n, MAX_BASKET) indices into general products
    wet_basket: np.ndarray
    dry_size: np.ndarray       # (n,)
    wet_size: np.ndarray
    exposure: np.ndarray       # (n, n_ingredients) bool


def _draw_diet(rng: CounterRNG, cat: _Catalog, config: GeneratorConfig, units: np.ndarray,
               wet_stream: Stream, basket_stream: Stream) -> _Diet:
    col = units[:, None]
    w_draw = rng.uniform(wet_stream, col, np.arange(2))
    mix = np.array(MIXED_OCCASIONS)[np.minimum((w_draw[:, 1] * len(MIXED_OCCASIONS)).astype(int),
                                               len(MIXED_OCCASIONS) - 1)]
    dry_only = w_draw[:, 0] < config.dry_only_share
    wet_only = ~dry_only & (w_draw[:, 0] < config.dry_only_share + config.wet_only_share)
    n_wet = np.where(dry_only, 0, np.where(wet_only, 1, mix[:, 0]))
    n_dry = np.where(dry_only, 1, np.where(wet_only, 0, mix[:, 1] - mix[:, 0]))
    wet_share = n_wet / (n_wet + n_dry)
    b = rng.uniform(basket_stream, col, np.arange(2 * MAX_BASKET))
    dry_basket = cat.dry_idx[np.minimum((b[:, :MAX_BASKET] * len(cat.dry_idx)).astype(int), len(cat.dry_idx) - 1)]
    wet_basket = cat.wet_idx[np.minimum((b[:, MAX_BASKET:2 * MAX_BASKET] * len(cat.wet_idx)).astype(int),
                                        len(cat.wet_idx) - 1)]
    # Every diet holds MAX_BASKET products so exposure breadth does not depend on the wet share.
    dry_size = np.where(n_wet == 0, MAX_BASKET, np.where(n_dry == 0, 0, 1))
    wet_size = MAX_BASKET - dry_size
    exposure = np.zeros((len(units), cat.ingredient_matrix.shape[1]), dtype=bool)
    for s in range(MAX_BASKET):
        exposure |= cat.ingredient_matrix[dry_basket[:, s]] & (dry_size > s)[:, None]
        exposure |= cat.ingredient_matrix[wet_basket[:, s]] & (wet_size > s)[:, None]
    return _Diet(wet_share, n_dry, n_wet, dry_basket, wet_basket, dry_size, wet_size, exposure)


def _effect_vector(names: list[str], effects: Mapping[str, float]) -> np.ndarray:
    return np.array([effects.get(n, 0.0) for n in names], dtype=float)


def _monthly_hazard(log_odds: np.ndarray, season_by_month: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-(log_odds[:, None] + season_by_month[None, :])))


def _first_onset(rng: CounterRNG, stream: Stream, units: np.ndarray, log_odds: np.ndarray,
                 season_by_month: np.ndarray, at_risk: np.ndarray) -> np.ndarray:
    """Index of the first month with onset, or -1.  ``at_risk`` is (n, n_months) bool."""
    u = rng.uniform(stream, units[:, None], np.arange(len(season_by_month)))
    hit = (u < _monthly_hazard(log_odds, season_by_month)) & at_risk
    first = np.argmax(hit, axis=1)
    return np.where(hit.any(axis=1), first, -1)


class _Calendar:
    """Days and months of the purchase log, which starts ``lead_months`` before the claim range."""

    def __init__(self, config: GeneratorConfig):
        self.start = config.start_month + (-config.lead_months)
        self.months = [self.start + k for k in range(config.lead_months + config.n_months)]
        first = self.months[0].first_day()
        self.n_days = (self.months[-1] + 1).first_day().toordinal() - first.toordinal()
        self.dates = [first + dt.timedelta(days=d) for d in range(self.n_days)]
        self.month_of_day = np.array([(d.year - first.year) * 12 + d.month - first.month for d in self.dates])
        self.month_first_day = np.array([(m.first_day() - first).days for m in self.months])
        self.month_len = np.array([m.n_days() for m in self.months])


def _uniform_int(u: np.ndarray, lo, hi) -> np.ndarray:
    """Map uniforms to integers in [lo, hi]."""
    span = np.asarray(hi) - np.asarray(lo) + 1
    return np.asarray(lo) + np.minimum((u * span).astype(np.int64), span - 1)


def _simulate_shoppers(config: GeneratorConfig, cat: _Catalog, cal: _Calendar, effects: np.ndarray,
                       names: list[str], season_by_month: np.ndarray, lo, hi,
                       purchases: list, truths: list, exposure_cache: dict) -> None:
    rng = CounterRNG(config.seed)
    units = np.arange(lo, hi)
    n = len(units)
    col = units[:, None]
    D = cal.n_days
    K = max(MAX_ITEMS, 1)
    n_occ = (config.history_days + D) // config.occasion_gap_min_days + 2

    kind_u = rng.uniform(Stream.USER_KIND, units, 0)
    target_first = kind_u < config.target_first_share
    unclassified = (~target_first & (kind_u < config.target_first_share + config.unclassified_only_share)
                    & bool(cat.unmatched_ids))
    regular = ~target_first & ~unclassified

    # Purchase history may begin before the observed range; only days >= 0 are emitted.
    start = _uniform_int(rng.uniform(Stream.USER_START, units, 0), -config.history_days,
                         int(config.join_fraction * D))
    churn_u = rng.uniform(Stream.USER_CHURN, col, np.arange(2))
    begin = np.maximum(start, 0)
    earliest_end = np.minimum(begin + MIN_ACTIVE_DAYS, D - 1)
    end = np.where(churn_u[:, 0] < config.churn_share,
                   _uniform_int(churn_u[:, 1], earliest_end, D - 1), D - 1)
    gaps = _uniform_int(rng.uniform(Stream.CADENCE, col, np.arange(n_occ)),
                        config.occasion_gap_min_days, config.occasion_gap_max_days)
    days = start[:, None] + np.concatenate([np.zeros((n, 1), dtype=np.int64), np.cumsum(gaps[:, :-1], axis=1)],
                                           axis=1)
    observed = (days >= 0) & (days <= end[:, None])
    first_obs = np.argmax(observed, axis=1)
    first_day = days[np.arange(n), first_obs]

    diet = _draw_diet(rng, cat, config, units, Stream.WET_SHARE, Stream.BASKET)
    log_odds = logit(config.base_monthly_hazard) + diet.exposure @ effects + config.wet_effect * diet.wet_share
    month_idx = np.arange(len(cal.months))
    at_risk = ((month_idx[None, :] > cal.month_of_day[first_day][:, None])
               & (month_idx[None, :] <= cal.month_of_day[end][:, None]) & regular[:, None])
    onset_m = _first_onset(rng, Stream.ONSET, units, log_odds, season_by_month, at_risk)
    has_onset = onset_m >= 0
    safe_m = np.where(has_onset, onset_m, 0)
    onset_day = cal.month_first_day[safe_m] + _uniform_int(rng.uniform(Stream.ONSET_DAY, units, 0),
                                                           0, cal.month_len[safe_m] - 1)
    p_switch = np.where(diet.wet_share == 0.0, config.switch_prob * config.dry_only_switch_factor,
                        config.switch_prob)
    switch_day = onset_day + np.rint(rng.exponential(Stream.LAG, units, 0, config.switch_lag_mean_days)).astype(int)
    switched = has_onset & (rng.uniform(Stream.SWITCH, units, 0) < p_switch) & (switch_day < D)
    T = np.where(switched, switch_day, D)

    # General items: n_dry dry then n_wet wet per occasion, each basket in round-robin order.
    occ = np.arange(n_occ)[None, :, None]
    item = np.arange(K)[None, None, :]
    nd, nw = diet.n_dry[:, None, None], diet.n_wet[:, None, None]
    dry_slot = (occ * nd + item) % np.maximum(diet.dry_size, 1)[:, None, None]
    wet_slot = (occ * nw + item - nd) % np.maximum(diet.wet_size, 1)[:, None, None]
    rows = np.arange(n)[:, None, None]
    product = np.where(item < nd, diet.dry_basket[rows, np.minimum(dry_slot, MAX_BASKET - 1)],
                       diet.wet_basket[rows, np.minimum(wet_slot, MAX_BASKET - 1)])
    general_occ = observed & regular[:, None] & (days < T[:, None])
    general_occ[target_first, first_obs[target_first]] = False
    gen_mask = general_occ[:, :, None] & (item < nd + nw)
    r_g, o_g, i_g = np.nonzero(gen_mask)
    ev = [(r_g, days[r_g, o_g], product[r_g, o_g, i_g], o_g * K + i_g)]

    G, n_targets = len(cat.general_ids), len(cat.target_ids)
    pick = rng.uniform(Stream.TARGET_PICK, col, np.arange(2))
    target_prod = G + _uniform_int(pick[:, 0], 0, n_targets - 1)
    unmatched_prod = G + n_targets + _uniform_int(pick[:, 1], 0, max(len(cat.unmatched_ids), 1) - 1)
    r_s = np.flatnonzero(switched)
    ev.append((r_s, T[r_s], target_prod[r_s], np.full(len(r_s), -1)))
    r_a, o_a = np.nonzero(observed & switched[:, None] & (days > T[:, None]))
    ev.append((r_a, days[r_a, o_a], target_prod[r_a], o_a * K))
    r_f = np.flatnonzero(target_first)
    ev.append((r_f, first_day[r_f], target_prod[r_f], first_obs[r_f] * K))
    r_u, o_u = np.nonzero(observed & unclassified[:, None])
    ev.append((r_u, days[r_u, o_u], unmatched_prod[r_u], o_u * K))

    ev_r, ev_d, ev_p, ev_seq = (np.concatenate(parts) for parts in zip(*ev))
    order = np.lexsort((ev_seq, ev_d, ev_r))
    ev_r, ev_d, ev_p, ev_seq = ev_r[order], ev_d[order], ev_p[order], ev_seq[order]
    qty = 1 + (rng.uniform(Stream.QUANTITY, units[ev_r], ev_seq + 1) < 0.2).astype(int)

    uids = [f"u{u + 1:07d}" for u in units]
    pids = cat.general_ids + cat.target_ids + cat.unmatched_ids
    dates = cal.dates
    make = partial(tuple.__new__, PurchaseRecord)
    purchases.extend(map(make, zip(map(uids.__getitem__, ev_r.tolist()), map(dates.__getitem__, ev_d.tolist()),
                                   map(pids.__getitem__, ev_p.tolist()), qty.tolist())))

    # Intended windows: [T - 365, T) for switchers, the year up to the last general purchase otherwise.
    is_gen = ev_p < G
    last_gen = np.full(n, -1)
    np.maximum.at(last_gen, ev_r[is_gen], ev_d[is_gen])
    win_lo = np.where(switched, T - WINDOW_DAYS, last_gen - WINDOW_DAYS + 1)
    win_hi = np.where(switched, T, last_gen + 1)
    in_win = is_gen & (ev_d >= win_lo[ev_r]) & (ev_d < win_hi[ev_r])
    pairs = np.unique(ev_r[in_win] * G + ev_p[in_win])
    truths.append(partial(_user_truths, cat, cal, uids, regular, switched, target_first, T, first_day, onset_m,
                          diet, pairs, exposure_cache))


def _user_truths(cat: _Catalog, cal: _Calendar, uids: list[str], regular, switched, target_first, T, first_day,
                 onset_m, diet: _Diet, window_pairs: np.ndarray, cache: dict) -> list[UserTruth]:
    """Per-user ground truth for one chunk; built on first access."""
    n, G = len(uids), len(cat.general_ids)
    rows = window_pairs // G
    n_window = np.bincount(rows, minlength=n).tolist()
    window_products = np.split(window_pairs % G, np.searchsorted(rows, np.arange(1, n)))
    dates = cal.dates
    out = []
    for r in range(n):
        if not regular[r] or n_window[r] == 0:
            group = "excluded"
        else:
            group = "case" if switched[r] else "control"
        first_target = dates[T[r]] if switched[r] else (dates[first_day[r]] if target_first[r] else None)
        diet_products = np.concatenate((diet.dry_basket[r, :diet.dry_size[r]], diet.wet_basket[r, :diet.wet_size[r]]))
        out.append(UserTruth(uids[r], group, cal.months[onset_m[r]] if onset_m[r] >= 0 else None, first_target,
                             float(diet.wet_share[r]), _token_set(diet_products, cat, cache),
                             _token_set(window_products[r], cat, cache)))
    return out


def _token_set(products: np.ndarray, cat: _Catalog, cache: dict) -> frozenset[str]:
    """Union of ingredients over general products (given by index)."""
    key = frozenset(products.tolist())
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = frozenset().union(*(cat.entries[cat.general_ids[p]].ingredients for p in key))
    return hit


def _simulate_insured(config: GeneratorConfig, cat: _Catalog, effects: np.ndarray, names: list[str],
                      season_by_month: np.ndarray, lo: int, hi: int, claim_counts: np.ndarray,
                      questionnaire: list) -> int:
    """Episodes may recur; each one is claimed independently with ``claim_prob``."""
    rng = CounterRNG(config.seed)
    units = np.arange(lo, hi)
    months = np.arange(config.n_months)
    season_by_month = season_by_month[config.lead_months:]
    diet = _draw_diet(rng, cat, config, units, Stream.INSURED_WET, Stream.INSURED_BASKET)
    log_odds = logit(config.base_monthly_hazard) + diet.exposure @ effects + config.wet_effect * diet.wet_share
    episode = rng.uniform(Stream.INSURED_ONSET, units[:, None], months) < _monthly_hazard(log_odds, season_by_month)
    claimed = episode & (rng.uniform(Stream.INSURED_CLAIM, units[:, None], months) < config.claim_prob)
    claim_counts += claimed.sum(axis=0)
    any_claim = claimed.any(axis=1)
    cache: dict = {}
    for r in np.flatnonzero(units < config.questionnaire_size).tolist():
        group = Group.CASE if any_claim[r] else Group.CONTROL
        products = np.concatenate((diet.dry_basket[r, :diet.dry_size[r]], diet.wet_basket[r, :diet.wet_size[r]]))
        questionnaire.append(QuestionnaireRecord(f"a{lo + r + 1:07d}", group, _token_set(products, cat, cache)))
    return int(episode.sum())


def generate(config: GeneratorConfig, chunk_size: int = 10_000) -> SyntheticBundle:
    """Simulate a full dataset bundle; output depends only on ``config``."""
    cat = build_catalog(config)
    cal = _Calendar(config)
    names = ingredient_names(config.n_ingredients, config.n_families)
    season = seasonal_profile(config)
    season_by_month = np.array([season[m.month - 1] for m in cal.months])
    ec_effects = _effect_vector(names, config.ingredient_effects)
    claim_map = config.ingredient_effects if config.claim_effects is None else config.claim_effects
    claim_effects = _effect_vector(names, claim_map)

    purchases: list[PurchaseRecord] = []
    truths: list = []
    cache: dict = {}
    for lo in range(0, config.n_users, chunk_size):
        _simulate_shoppers(config, cat, cal, ec_effects, names, season_by_month, lo,
                           min(lo + chunk_size, config.n_users), purchases, truths, cache)

    claim_counts = np.zeros(config.n_months, dtype=np.int64)
    questionnaire: list[QuestionnaireRecord] = []
    onsets = 0
    for lo in range(0, config.n_insured, chunk_size):
        onsets += _simulate_insured(config, cat, claim_effects, names, season_by_month, lo,
                                    min(lo + chunk_size, config.n_insured), claim_counts, questionnaire)

    truth = GroundTruth(
        user_chunks=tuple(truths),
        effects=MappingProxyType(dict(zip(names, ec_effects.tolist()))),
        claim_effects=MappingProxyType(dict(zip(names, claim_effects.tolist()))),
        seasonal=tuple(float(s) for s in season),
        target_ids=frozenset(cat.target_ids),
        general_ids=frozenset(cat.general_ids),
        unmatched_ids=frozenset(cat.unmatched_ids),
        insured_onsets=onsets,
        insured_claims=int(claim_counts.sum()),
    )
    claims = tuple(ClaimSeriesRow(m, int(c)) for m, c in zip(cal.months[config.lead_months:], claim_counts))
    return SyntheticBundle(config, MappingProxyType(cat.entries), tuple(purchases), claims,
                           tuple(questionnaire), truth)
