"""Writing a generated bundle to disk, and reading its ground truth back."""

from __future__ import annotations

import csv
import datetime as dt
from importlib import resources
from pathlib import Path

from ..ingest import write_catalog, write_claim_series, write_purchases, write_questionnaire
from ..months import Month
from . import config as config_io
from .generator import SyntheticBundle, UserTruth

BUNDLE_FILES = {
    "purchases": "purchases.csv",
    "catalog": "catalog.csv",
    "claims": "claims.csv",
    "questionnaire": "questionnaire.csv",
    "keywords": "keywords.txt",
    "config": "config.txt",
    "truth_users": "ground_truth_users.csv",
    "truth_ingredients": "ground_truth_ingredients.csv",
    "truth_seasonal": "ground_truth_seasonal.csv",
}
TRUTH_USER_COLUMNS = ("user_id", "group", "onset_month", "first_target_date", "wet_rate", "exposures")


def _rows_to_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_bundle(bundle: SyntheticBundle, out_dir: str | Path) -> dict[str, Path]:
    """Write every bundle file into ``out_dir``; returns the paths by role."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {role: out / name for role, name in BUNDLE_FILES.items()}
    truth = bundle.truth

    write_purchases(paths["purchases"], bundle.purchases)
    write_catalog(paths["catalog"], bundle.catalog)
    write_claim_series(paths["claims"], bundle.claims)
    write_questionnaire(paths["questionnaire"], bundle.questionnaire)
    paths["keywords"].write_text(resources.files("proxyval").joinpath("data/keywords.txt").read_text("utf-8"),
                                 "utf-8")
    config_io.dump(bundle.config, paths["config"])
    _rows_to_csv(paths["truth_users"], TRUTH_USER_COLUMNS, (
        (u.user_id, u.group, str(u.onset_month) if u.onset_month else "",
         u.first_target_date.isoformat() if u.first_target_date else "",
         repr(u.wet_share), ";".join(sorted(u.window_exposure)))
        for u in truth.users))
    _rows_to_csv(paths["truth_ingredients"], ("ingredient", "effect", "claim_effect"), (
        (name, repr(float(eff)), repr(float(truth.claim_effects[name])))
        for name, eff in sorted(truth.effects.items())))
    _rows_to_csv(paths["truth_seasonal"], ("month_of_year", "log_odds"),
                 ((m + 1, repr(v)) for m, v in enumerate(truth.seasonal)))
    return paths


def read_truth_users(path: str | Path) -> list[UserTruth]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            exposures = frozenset(filter(None, row["exposures"].split(";")))
            out.append(UserTruth(
                row["user_id"], row["group"],
                Month.parse(row["onset_month"]) if row["onset_month"] else None,
                dt.date.fromisoformat(row["first_target_date"]) if row["first_target_date"] else None,
                float(row["wet_rate"]), frozenset(), exposures))
    return out


def read_truth_effects(path: str | Path) -> dict[str, float]:
    with open(path, newline="", encoding="utf-8") as fh:
        return {row["ingredient"]: float(row["effect"]) for row in csv.DictReader(fh)}
