"""Ingredient risk table, cross-source correlation and dose response."""

import datetime as dt
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from proxyval.cohort import CohortAssignment, CohortGroup
from proxyval.errors import EmptyBins, EmptyDenominator, NoFormKnownPurchases, NoSharedIngredients, TooFewSignificant
from proxyval.ingest import Category, FoodForm, Group, ProductEntry, PurchaseRecord, QuestionnaireRecord
from proxyval.numstat import TwoByTwoTable, chi_squared_2x2
from proxyval.plots import dose_svg, emit_plot_data, scatter_svg
from proxyval.risk import (
    POSITIVE_BINS,
    WetBin,
    claim_rate,
    dose_response,
    ingredient_risk_table,
    switch_rate,
    validate_ingredients,
    wet_bin,
    wet_rate,
    write_ingredient_risk,
)

DAY = dt.date(2020, 6, 1)


def product(pid, form, ingredients):
    return ProductEntry(pid, pid, Category.GENERAL, form, frozenset(ingredients))


def user(uid, group, pids):
    return CohortAssignment(uid, group, DAY, DAY, None, tuple(PurchaseRecord(uid, DAY, p, 1) for p in pids))


def test_rates():
    assert switch_rate(3, 7).rate == pytest.approx(0.3)
    assert claim_rate(0, 5).rate == 0.0
    with pytest.raises(EmptyDenominator):
        switch_rate(0, 0)


def random_world(seed, n_users=400, n_animals=600):
    rnd = random.Random(seed)
    vocab = [f"i{k}" for k in range(6)]
    catalog = {f"p{k}": product(f"p{k}", rnd.choice([FoodForm.WET, FoodForm.DRY, FoodForm.OTHER]),
                                rnd.sample(vocab, rnd.randint(1, 3))) for k in range(12)}
    groups = [CohortGroup.CASE, CohortGroup.CONTROL, CohortGroup.EXCLUDED]
    users = [user(f"u{k}", rnd.choices(groups, [1, 3, 1])[0], rnd.sample(sorted(catalog), rnd.randint(1, 4)))
             for k in range(n_users)]
    animals = [QuestionnaireRecord(f"a{k}", rnd.choice([Group.CASE, Group.CONTROL]),
                                   frozenset(rnd.sample(vocab + ["only_q"], rnd.randint(1, 3))))
               for k in range(n_animals)]
    return catalog, users, animals


@pytest.mark.parametrize("seed", range(5))
def test_risk_table_matches_direct_counts(seed):
    catalog, users, animals = random_world(seed)
    rows = ingredient_risk_table(users, catalog, animals, min_exposure=1)
    included = [u for u in users if u.group is not CohortGroup.EXCLUDED]
    for row in rows:
        exposed = [u for u in included
                   if any(row.ingredient in catalog[p.product_id].ingredients for p in u.window_purchases)]
        cases = sum(u.group is CohortGroup.CASE for u in exposed)
        assert (row.switch_rate.positives, row.switch_rate.total) == (cases, len(exposed))
        q_exp = [a for a in animals if row.ingredient in a.exposures]
        q_case = sum(a.group is Group.CASE for a in q_exp)
        assert (row.claim_rate.positives, row.claim_rate.total) == (q_case, len(q_exp))
        all_case = sum(a.group is Group.CASE for a in animals)
        table = TwoByTwoTable(q_case, len(q_exp) - q_case, all_case - q_case,
                              len(animals) - all_case - (len(q_exp) - q_case))
        assert row.chi2.statistic == pytest.approx(chi_squared_2x2(table).statistic)
        assert row.significant == (row.chi2.p_value < 0.05)
    assert "only_q" not in {r.ingredient for r in rows}


def test_min_exposure_and_screen_side():
    catalog, users, animals = random_world(1)
    assert ingredient_risk_table(users, catalog, animals, min_exposure=10**6) == []
    both = ingredient_risk_table(users, catalog, animals, min_exposure=1, screen_on="both")
    claim = ingredient_risk_table(users, catalog, animals, min_exposure=1, screen_on="claim")
    assert all(b.significant <= c.significant for b, c in zip(both, claim))
    with pytest.raises(ValueError):
        ingredient_risk_table(users, catalog, animals, screen_on="neither")


def test_category_mapping_merges_tokens():
    catalog, users, animals = random_world(2)
    cats = {f"i{k}": ("meat" if k < 3 else "fish") for k in range(6)}
    rows = ingredient_risk_table(users, catalog, animals, min_exposure=1, categories=cats)
    assert {r.ingredient for r in rows} == {"meat", "fish"}


def test_disjoint_vocabularies():
    catalog = {"p": product("p", FoodForm.DRY, ["x"])}
    with pytest.raises(NoSharedIngredients):
        ingredient_risk_table([user("u", CohortGroup.CASE, ["p"])], catalog,
                              [QuestionnaireRecord("a", Group.CASE, frozenset({"y"}))])


def test_validation_uses_only_significant_rows(tmp_path):
    catalog, users, animals = random_world(3, 2000, 3000)
    rows = ingredient_risk_table(users, catalog, animals, min_exposure=1, alpha=1.0)
    v = validate_ingredients(rows)
    assert len(v.scatter) == len(rows)
    with pytest.raises(TooFewSignificant):
        validate_ingredients([r for r in rows][:2])
    write_ingredient_risk(tmp_path / "r.csv", rows)
    assert (tmp_path / "r.csv").read_text().count("\n") == len(rows) + 1
    paths = emit_plot_data(tmp_path, scatter=v.scatter)
    assert {p.name for p in paths} == {"scatter.csv", "scatter.svg"}
    assert scatter_svg(tmp_path / "scatter.csv").count("<circle") == len(rows)


@pytest.mark.parametrize("rate,expected", [
    (0.0, WetBin.EXACTLY0), (1e-9, WetBin.LE25), (0.25, WetBin.LE25), (0.2500001, WetBin.LE50),
    (0.5, WetBin.LE50), (0.75, WetBin.LE75), (0.99, WetBin.LT100), (1.0, WetBin.EXACTLY100),
])
def test_wet_bin_edges(rate, expected):
    assert wet_bin(rate) is expected


@given(st.floats(0, 1))
def test_wet_bin_is_monotone(rate):
    order = list(WetBin)
    assert order.index(wet_bin(rate)) <= order.index(wet_bin(min(1.0, rate + 0.01)))


def test_wet_rate_ignores_other_forms():
    catalog = {"w": product("w", FoodForm.WET, "a"), "d": product("d", FoodForm.DRY, "a"),
               "o": product("o", FoodForm.OTHER, "a")}
    assert wet_rate(user("u", CohortGroup.CASE, ["w", "d", "d", "o"]), catalog) == pytest.approx(1 / 3)
    with pytest.raises(NoFormKnownPurchases):
        wet_rate(user("u", CohortGroup.CASE, ["o"]), catalog)


def test_dose_response_counts_and_ratio(tmp_path):
    catalog = {"w": product("w", FoodForm.WET, "a"), "d": product("d", FoodForm.DRY, "a"),
               "o": product("o", FoodForm.OTHER, "a")}
    users = []
    # <=25% bin: 1 wet of 4; 100% bin: all wet.  Case shares 30% and 15%.
    for k in range(100):
        users.append(user(f"l{k}", CohortGroup.CASE if k < 30 else CohortGroup.CONTROL, ["w", "d", "d", "d"]))
        users.append(user(f"h{k}", CohortGroup.CASE if k < 15 else CohortGroup.CONTROL, ["w"]))
        users.append(user(f"m{k}", CohortGroup.CASE if k < 20 else CohortGroup.CONTROL, ["w", "d"]))
    users.append(user("z", CohortGroup.CASE, ["d"]))
    users.append(user("x", CohortGroup.CASE, ["o"]))
    users.append(user("e", CohortGroup.EXCLUDED, ["w"]))
    dr = dose_response(users, catalog)
    assert dr.bin(WetBin.LE25).cases == 30 and dr.bin(WetBin.EXACTLY0).total == 1
    assert dr.n_unknown_form == 1
    assert dr.ratio == pytest.approx(2.0)
    assert dr.trend.statistic < 0 and dr.trend.p_value < 0.05
    emit_plot_data(tmp_path, dose=dr)
    assert dose_svg(tmp_path / "dose_response.csv").count("<rect") == 1 + 4  # background plus one bar per non-empty bin
    with pytest.raises(EmptyBins):
        dose_response([user("z", CohortGroup.CASE, ["d"])], catalog)
    assert len(POSITIVE_BINS) == 5
