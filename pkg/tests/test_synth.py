"""Counter-based RNG, generator config and the synthetic generator."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxyval.classify import default_rules, partition_catalog
from proxyval.cohort import assign_cohorts, compare_to_truth
from proxyval.errors import ConfigInvalid
from proxyval.ingest import Category, FoodForm, load_catalog, load_purchases
from proxyval.months import Month, month_range
from proxyval.synth import (
    BUNDLE_FILES,
    GeneratorConfig,
    generate,
    null_scenario,
    onset_probability,
    paper_scenario,
    read_truth_effects,
    read_truth_users,
    write_bundle,
)
from proxyval.synth import config as config_io
from proxyval.synth.rng import CounterRNG, Stream, bits_int, mix64_int
from proxyval.synth.scenarios import independent_effects, planted_effects

u64 = st.integers(0, 2**64 - 1)


def test_splitmix_reference_value():
    # First output of the SplitMix64 generator seeded with 0.
    assert mix64_int(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


@settings(max_examples=200, deadline=None)
@given(u64, st.integers(0, 40), st.integers(0, 2**40), st.integers(0, 2**40))
def test_vectorised_bits_match_scalar_reference(seed, stream, unit, counter):
    got = CounterRNG(seed).bits(stream, unit, counter)
    assert got.shape == () and int(got) == bits_int(seed, stream, unit, counter)


def test_draws_depend_only_on_their_key():
    rng = CounterRNG(7)
    block = rng.uniform(Stream.ONSET, np.arange(100)[:, None], np.arange(12))
    assert block.shape == (100, 12)
    assert rng.uniform(Stream.ONSET, 42, 5) == block[42, 5]
    assert np.all((block > 0) & (block < 1))
    assert not np.array_equal(block, CounterRNG(8).uniform(Stream.ONSET, np.arange(100)[:, None], np.arange(12)))


def test_distribution_moments():
    rng = CounterRNG(3)
    u = rng.uniform(Stream.CADENCE, np.arange(200_000), 0)
    z = rng.normal(Stream.CADENCE, np.arange(200_000), 1)
    assert abs(u.mean() - 0.5) < 0.005 and abs(u.var() - 1 / 12) < 0.002
    assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01
    k = rng.integers(Stream.BASKET, np.arange(60_000), 0, 6)
    assert set(np.unique(k)) == set(range(6))


def test_config_round_trip():
    cfg = paper_scenario(5, coupled=False, n_users=1234)
    back = config_io.loads(config_io.dumps(cfg))
    assert back == cfg
    assert config_io.dumps(back) == config_io.dumps(cfg)


@pytest.mark.parametrize("change", [
    dict(n_users=0), dict(base_monthly_hazard=1.0), dict(claim_prob=0.0), dict(seasonal_peak_month=13),
    dict(dry_only_share=0.7, wet_only_share=0.5), dict(occasion_gap_max_days=200),
    dict(min_ingredients=5, max_ingredients=3), dict(questionnaire_size=10, n_insured=5),
])
def test_config_validation(change):
    with pytest.raises(ConfigInvalid):
        GeneratorConfig(**change)


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigInvalid):
        config_io.loads("nonsense=1\n")


def test_planted_effects_are_centred_and_seeded():
    a, b = planted_effects(1), planted_effects(1)
    assert a == b and len(a) == 411
    assert abs(sum(a.values())) < 1e-9
    c = independent_effects(1)
    assert np.corrcoef(list(a.values()), [c[k] for k in a])[0, 1] < 0.2


def test_onset_probability_formula():
    cfg = GeneratorConfig(base_monthly_hazard=0.01, ingredient_effects={"x": 0.5}, wet_effect=-1.0,
                          seasonal_amplitude=0.3, seasonal_peak_month=1)
    got = onset_probability(cfg, ["x", "y", "x"], 0.4, [0, 1])
    surv = 1.0
    for month in (1, 2):
        eta = math.log(0.01 / 0.99) + 0.5 - 0.4 + 0.3 * math.cos(2 * math.pi * (month - 1) / 12)
        surv *= 1 - 1 / (1 + math.exp(-eta))
    assert got == pytest.approx(1 - surv, rel=1e-12)


SMALL = dict(n_users=3000, n_insured=4000, questionnaire_size=3000, n_general_products=400)


@pytest.fixture(scope="module")
def small_bundle():
    return generate(paper_scenario(11, **SMALL))


def test_generation_is_deterministic_and_chunk_invariant(small_bundle):
    other = generate(paper_scenario(11, **SMALL), chunk_size=700)
    assert other.purchases == small_bundle.purchases
    assert other.claims == small_bundle.claims
    assert other.questionnaire == small_bundle.questionnaire
    assert other.truth.users == small_bundle.truth.users
    assert generate(paper_scenario(12, **SMALL)).purchases != small_bundle.purchases


def test_bundle_structure(small_bundle):
    b = small_bundle
    cfg = b.config
    assert [r.month for r in b.claims] == month_range(cfg.start_month, cfg.start_month + (cfg.n_months - 1))
    assert len(b.questionnaire) == cfg.questionnaire_size
    assert len({p.user_id for p in b.purchases}) <= cfg.n_users
    general = [e for e in b.catalog.values() if e.category is Category.GENERAL]
    assert len(general) == cfg.n_general_products
    assert {e.food_form for e in general} == {FoodForm.WET, FoodForm.DRY}
    targets, gen = partition_catalog(b.catalog, default_rules())
    assert targets == b.truth.target_ids and gen == b.truth.general_ids
    assert not (b.truth.unmatched_ids & (targets | gen))


def test_cohorts_match_intended_groups(small_bundle):
    targets, general = partition_catalog(small_bundle.catalog, default_rules())
    result = assign_cohorts(small_bundle.purchases, targets, general)
    assert compare_to_truth(result, small_bundle.truth.intended_groups()) == []


def test_null_scenario_has_no_effects():
    cfg = null_scenario(3)
    assert cfg.wet_effect == 0 and cfg.seasonal_amplitude == 0 and not cfg.ingredient_effects


def test_bundle_files_round_trip(tmp_path, small_bundle):
    paths = write_bundle(small_bundle, tmp_path)
    assert set(paths) == set(BUNDLE_FILES)
    assert all(p.exists() for p in paths.values())
    assert tuple(load_purchases(paths["purchases"])) == tuple(small_bundle.purchases)
    assert dict(load_catalog(paths["catalog"])) == dict(small_bundle.catalog)
    users = read_truth_users(paths["truth_users"])
    assert [(u.user_id, u.group) for u in users] == [(u.user_id, u.group) for u in small_bundle.truth.users]
    assert read_truth_effects(paths["truth_ingredients"]) == pytest.approx(dict(small_bundle.truth.effects))
    assert config_io.load(paths["config"]) == small_bundle.config
    assert Month.parse(paths["claims"].read_text().splitlines()[1].split(",")[0]) == small_bundle.config.start_month
