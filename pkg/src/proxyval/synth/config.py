"""Generator configuration and its flat ``key=value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..errors import ConfigInvalid
from ..months import Month


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    n_users: int = 50_000
    start_month: Month = Month(2018, 1)
    n_months: int = 36

    # catalog
    n_general_products: int = 1271
    n_target_products: int = 40
    n_unmatched_therapeutic: int = 12
    n_ingredients: int = 411
    n_families: int = 30
    min_ingredients: int = 2
    max_ingredients: int = 4

    # hazard model (log-odds scale)
    base_monthly_hazard: float = 0.003
    ingredient_effects: Mapping[str, float] = field(default_factory=dict)
    claim_effects: Mapping[str, float] | None = None  # None: same as ingredient_effects
    wet_effect: float = 0.0
    seasonal_amplitude: float = 0.0
    seasonal_peak_month: int = 12

    # reporting
    claim_prob: float = 0.3
    switch_prob: float = 0.75
    dry_only_switch_factor: float = 1.0
    switch_lag_mean_days: float = 10.0

    # purchase behaviour
    dry_only_share: float = 0.25
    wet_only_share: float = 0.15
    target_first_share: float = 0.004
    unclassified_only_share: float = 0.003
    churn_share: float = 0.3
    occasion_gap_min_days: int = 90
    occasion_gap_max_days: int = 150
    lead_months: int = 6          # purchases are logged this long before the claim range
    history_days: int = 365       # purchase history may start this long before the range
    join_fraction: float = 0.5    # latest start, as a fraction of the range

    # insured population
    n_insured: int = 200_000
    questionnaire_size: int = 50_000

    def __post_init__(self):
        problems = []

        def check(ok, msg):
            if not ok:
                problems.append(msg)

        check(self.n_users >= 1, "n_users must be >= 1")
        check(self.n_months >= 1, "n_months must be >= 1")
        check(self.n_general_products >= 2, "n_general_products must be >= 2")
        check(self.n_target_products >= 1, "n_target_products must be >= 1")
        check(self.n_unmatched_therapeutic >= 0, "n_unmatched_therapeutic must be >= 0")
        check(1 <= self.n_families <= self.n_ingredients, "need 1 <= n_families <= n_ingredients")
        check(1 <= self.min_ingredients <= self.max_ingredients, "need 1 <= min_ingredients <= max_ingredients")
        check(self.max_ingredients <= self.n_ingredients, "max_ingredients exceeds n_ingredients")
        check(0.0 < self.base_monthly_hazard < 1.0, "base_monthly_hazard must be in (0, 1)")
        check(0.0 < self.claim_prob <= 1.0, "claim_prob must be in (0, 1]")
        check(0.0 < self.switch_prob <= 1.0, "switch_prob must be in (0, 1]")
        check(0.0 <= self.dry_only_switch_factor * self.switch_prob <= 1.0,
              "dry_only_switch_factor * switch_prob must be in [0, 1]")
        check(self.switch_lag_mean_days >= 0.0, "switch_lag_mean_days must be >= 0")
        check(self.seasonal_amplitude >= 0.0, "seasonal_amplitude must be >= 0")
        check(1 <= self.seasonal_peak_month <= 12, "seasonal_peak_month must be 1..12")
        shares = (self.dry_only_share, self.wet_only_share)
        check(all(s >= 0 for s in shares) and sum(shares) <= 1.0, "dry/wet-only shares must sum to <= 1")
        kinds = (self.target_first_share, self.unclassified_only_share)
        check(all(s >= 0 for s in kinds) and sum(kinds) < 1.0, "excluded-user shares must sum to < 1")
        check(0.0 <= self.churn_share <= 1.0, "churn_share must be in [0, 1]")
        check(1 <= self.occasion_gap_min_days <= self.occasion_gap_max_days,
              "need 1 <= occasion_gap_min_days <= occasion_gap_max_days")
        check(self.occasion_gap_max_days < 180, "occasion_gap_max_days must be < 180")
        check(self.lead_months >= 0, "lead_months must be >= 0")
        check(self.history_days >= 0, "history_days must be >= 0")
        check(0.0 <= self.join_fraction <= 0.8, "join_fraction must be in [0, 0.8]")
        check(self.n_insured >= 1, "n_insured must be >= 1")
        check(1 <= self.questionnaire_size <= self.n_insured, "need 1 <= questionnaire_size <= n_insured")
        if problems:
            raise ConfigInvalid("; ".join(problems))

    @property
    def coupled(self) -> bool:
        return self.claim_effects is None

    def replace(self, **changes) -> "GeneratorConfig":
        return dataclasses.replace(self, **changes)


def _encode(value) -> str:
    if isinstance(value, Month):
        return str(value)
    if isinstance(value, Mapping):
        return ";".join(f"{k}:{float(v)!r}" for k, v in sorted(value.items()))
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dumps(config: GeneratorConfig) -> str:
    lines = ["# synthetic generator configuration"]
    for f in dataclasses.fields(config):
        lines.append(f"{f.name}={_encode(getattr(config, f.name))}")
    return "\n".join(lines) + "\n"


def _decode_mapping(text: str) -> dict[str, float]:
    out = {}
    for item in filter(None, text.split(";")):
        key, _, value = item.rpartition(":")
        out[key] = float(value)
    return out


def loads(text: str) -> GeneratorConfig:
    defaults = GeneratorConfig.__dataclass_fields__
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in defaults:
            raise ConfigInvalid(f"line {lineno}: unknown or malformed entry {line!r}")
        default = defaults[key].default
        try:
            if key in ("ingredient_effects", "claim_effects"):
                kwargs[key] = None if (key == "claim_effects" and value == "") else _decode_mapping(value)
            elif key == "start_month":
                kwargs[key] = Month.parse(value)
            elif isinstance(default, bool):
                kwargs[key] = value.lower() in ("1", "true", "yes")
            elif isinstance(default, int):
                kwargs[key] = int(value)
            else:
                kwargs[key] = float(value)
        except ValueError as exc:
            raise ConfigInvalid(f"line {lineno}: bad value for {key}: {exc}") from None
    return GeneratorConfig(**kwargs)


def load(path: str | Path) -> GeneratorConfig:
    return loads(Path(path).read_text("utf-8"))


def dump(config: GeneratorConfig, path: str | Path) -> None:
    Path(path).write_text(dumps(config), "utf-8")
