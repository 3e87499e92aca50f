"""Command-line entry point: ``proxyval <command> [options]``.

Every option can also be set through the environment as
``PROXYVAL_<COMMAND>_<OPTION>``, e.g. ``PROXYVAL_VALIDATE_ALPHA=0.01``.
Exit status is 0 on success, 1 for data errors (with a JSON error record on
standard error) and 2 for usage errors.
"""

from __future__ import annotations

import datetime as dt
import functools
import json
import logging
import sys
from pathlib import Path

import click

from . import __version__
from .classify import load_keywords, partition_catalog
from .cohort import CohortRules, assign_cohorts, cohort_summary, compare_to_truth, write_assignments
from .errors import ProxyvalError, StatError, TooFewSignificant
from .ingest import load_catalog, load_claim_series, load_purchases, load_questionnaire
from .numstat import TrendTable, TwoByTwoTable, chi_squared_2x2, cochran_armitage, spearman
from .plots import emit_plot_data
from .risk import (
    DEFAULT_ALPHA,
    DEFAULT_MIN_EXPOSURE,
    dose_response,
    ingredient_risk_table,
    validate_ingredients,
    validation_record,
    write_dose_response,
    write_ingredient_risk,
    write_json,
)
from .seasonality import StlParams, agreement_record, claims_series, ec_onset_series, seasonal_agreement, stl, write_stl
from .synth import BUNDLE_FILES, generate, null_scenario, paper_scenario, read_truth_effects, read_truth_users, write_bundle
from .synth import config as config_io

log = logging.getLogger("proxyval")
RUN_LOG = "run.log"


class DataFailure(click.ClickException):
    """A data error reported as one JSON line on standard error."""

    exit_code = 1

    def __init__(self, err: ProxyvalError):
        super().__init__(str(err))
        self.record = err.to_record()

    def show(self, file=None) -> None:
        click.echo(json.dumps(self.record, sort_keys=True), err=True)


def reports_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ProxyvalError as err:
            raise DataFailure(err) from err
    return wrapper


def _start_run(out: Path, command: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    stamp = dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
    (out / RUN_LOG).write_text(f"{stamp} proxyval {__version__} {command}\n", "utf-8")


def _path(**kw):
    return click.Path(path_type=Path, dir_okay=False, **kw)


def _input(name: str, required: bool = False):
    return click.option(f"--{name}", type=_path(exists=True), required=required,
                        help=f"Input {name} file (defaults to the one inside --data).")


def data_option(fn):
    return click.option("--data", type=click.Path(path_type=Path, file_okay=False, exists=True),
                        help="Directory holding a bundle written by `synth`.")(fn)


def out_option(fn):
    return click.option("--out", type=click.Path(path_type=Path, file_okay=False), required=True,
                        help="Output directory.")(fn)


def strict_option(fn):
    return click.option("--strict/--lenient", default=True, show_default=True,
                        help="Abort on the first malformed row, or skip and count such rows.")(fn)


def cohort_options(fn):
    for opt in reversed([
        _input("purchases"),
        _input("catalog"),
        _input("keywords"),
        click.option("--window-days", type=click.IntRange(min=28), default=365, show_default=True),
        click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                     help="Threads used for cohort assignment; output does not depend on it."),
        strict_option,
    ]):
        fn = opt(fn)
    return fn


def risk_options(fn):
    for opt in reversed([
        _input("questionnaire"),
        click.option("--alpha", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
                     default=DEFAULT_ALPHA, show_default=True),
        click.option("--min-exposure", type=click.IntRange(min=0), default=DEFAULT_MIN_EXPOSURE,
                     show_default=True, help="Minimum exposed users or animals per ingredient."),
    ]):
        fn = opt(fn)
    return fn


def stl_options(fn):
    for opt in reversed([
        _input("claims"),
        click.option("--period", type=click.IntRange(min=2), default=12, show_default=True),
        click.option("--seasonal-span", type=int, default=7, show_default=True),
        click.option("--trend-span", type=int, default=None, help="Default: derived from period and seasonal span."),
        click.option("--lowpass-span", type=int, default=None, help="Default: smallest odd integer >= period."),
        click.option("--inner", type=click.IntRange(min=1), default=2, show_default=True),
        click.option("--outer", type=click.IntRange(min=0), default=1, show_default=True),
    ]):
        fn = opt(fn)
    return fn


def _resolve(data: Path | None, given: Path | None, role: str) -> Path:
    if given is not None:
        return given
    if data is not None and (data / BUNDLE_FILES[role]).exists():
        return data / BUNDLE_FILES[role]
    raise click.UsageError(f"--{role} is required (or pass --data with a bundle containing it)")


def _stl_params(period, seasonal_span, trend_span, lowpass_span, inner, outer) -> StlParams:
    params = StlParams(period, seasonal_span, trend_span, lowpass_span, inner, outer)
    for name in ("seasonal_span", "trend_span", "lowpass_span"):
        span = getattr(params.resolved(), name)
        if span < 3 or span % 2 == 0:
            raise click.BadParameter(f"must be an odd integer >= 3, got {span}",
                                     param_hint="--" + name.replace("_", "-"))
    return params


def _cohorts(data, purchases, catalog, keywords, window_days, workers, strict):
    catalog_map = load_catalog(_resolve(data, catalog, "catalog"), strict=strict)
    records = load_purchases(_resolve(data, purchases, "purchases"), strict=strict)
    kw_path = keywords if keywords is not None else (
        data / BUNDLE_FILES["keywords"] if data is not None and (data / BUNDLE_FILES["keywords"]).exists() else None)
    targets, general = partition_catalog(catalog_map, load_keywords(kw_path))
    log.info("%d target and %d general products", len(targets), len(general))
    assignments = assign_cohorts(records, targets, general, CohortRules(window_days=window_days), workers)
    return catalog_map, assignments


@click.group(context_settings={"auto_envvar_prefix": "PROXYVAL", "help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option("-v", "--verbose", count=True, help="More logging on standard error.")
def main(verbose: int) -> None:
    """Validate online purchases of therapeutic pet food as a proxy for disease incidence."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@click.option("--users", type=click.IntRange(min=1), default=None, help="Number of shoppers (default 50000).")
@click.option("--scenario", type=click.Choice(["paper", "null"]), default="paper", show_default=True)
@click.option("--decoupled", is_flag=True, help="Give the insured population independent ingredient effects.")
@click.option("--config", "config_path", type=_path(exists=True), default=None,
              help="Generator config file (key=value); overrides --scenario.")
@out_option
@reports_errors
def synth(seed, users, scenario, decoupled, config_path, out):
    """Generate a synthetic bundle with ground truth."""
    if config_path is not None:
        cfg = config_io.load(config_path)
    elif scenario == "paper":
        cfg = paper_scenario(seed, coupled=not decoupled)
    else:
        cfg = null_scenario(seed)
    if users is not None:
        cfg = cfg.replace(n_users=users)
    _start_run(out, "synth")
    bundle = generate(cfg)
    paths = write_bundle(bundle, out)
    log.info("wrote %d files to %s", len(paths), out)


@main.command()
@data_option
@cohort_options
@out_option
@reports_errors
def cohort(data, purchases, catalog, keywords, window_days, workers, strict, out):
    """Assign shoppers to case, control or excluded."""
    _start_run(out, "cohort")
    _, assignments = _cohorts(data, purchases, catalog, keywords, window_days, workers, strict)
    write_assignments(out / "cohort.csv", assignments)
    write_json(out / "cohort_summary.json", cohort_summary(assignments))


@main.command()
@data_option
@cohort_options
@risk_options
@out_option
@reports_errors
def risk(data, purchases, catalog, keywords, window_days, workers, strict, questionnaire, alpha,
         min_exposure, out):
    """Per-ingredient switch and claim rates, cross-source correlation and dose response."""
    _start_run(out, "risk")
    catalog_map, assignments = _cohorts(data, purchases, catalog, keywords, window_days, workers, strict)
    q = load_questionnaire(_resolve(data, questionnaire, "questionnaire"), strict=strict)
    rows = ingredient_risk_table(assignments, catalog_map, q, alpha=alpha, min_exposure=min_exposure)
    write_ingredient_risk(out / "ingredient_risk.csv", rows)
    validation = validate_ingredients(rows)
    dr = dose_response(assignments, catalog_map)
    write_dose_response(out / "dose_response.csv", dr)
    emit_plot_data(out, scatter=validation.scatter, dose=dr)
    write_json(out / "risk_summary.json", validation_record(validation, len(rows), dr))


@main.command()
@data_option
@cohort_options
@stl_options
@out_option
@reports_errors
def seasonality(data, purchases, catalog, keywords, window_days, workers, strict, claims, period,
                seasonal_span, trend_span, lowpass_span, inner, outer, out):
    """STL of the claim series and the first-purchase series, and their agreement."""
    params = _stl_params(period, seasonal_span, trend_span, lowpass_span, inner, outer)
    _start_run(out, "seasonality")
    _, assignments = _cohorts(data, purchases, catalog, keywords, window_days, workers, strict)
    _seasonality(assignments, _resolve(data, claims, "claims"), params, out)


def _seasonality(assignments, claims_path: Path, params: StlParams, out: Path):
    c = claims_series(load_claim_series(claims_path))
    e = ec_onset_series(assignments, c.start, c.end)
    ag = seasonal_agreement(c, e, params)
    write_stl(out / "stl_claims.csv", c, ag.stl_a)
    write_stl(out / "stl_ec.csv", e, ag.stl_b)
    write_json(out / "seasonal_agreement.json", agreement_record(ag))
    emit_plot_data(out, agreement=ag, months=[str(m) for m in c.months()])
    return ag


@main.command()
@data_option
@cohort_options
@risk_options
@stl_options
@out_option
@reports_errors
def validate(data, purchases, catalog, keywords, window_days, workers, strict, questionnaire, alpha,
             min_exposure, claims, period, seasonal_span, trend_span, lowpass_span, inner, outer, out):
    """Run the whole pipeline and write one summary."""
    params = _stl_params(period, seasonal_span, trend_span, lowpass_span, inner, outer)
    _start_run(out, "validate")
    catalog_map, assignments = _cohorts(data, purchases, catalog, keywords, window_days, workers, strict)
    write_assignments(out / "cohort.csv", assignments)
    summary = {"cohort": cohort_summary(assignments)}

    q = load_questionnaire(_resolve(data, questionnaire, "questionnaire"), strict=strict)
    rows = ingredient_risk_table(assignments, catalog_map, q, alpha=alpha, min_exposure=min_exposure)
    write_ingredient_risk(out / "ingredient_risk.csv", rows)
    try:
        validation = validate_ingredients(rows)
    except TooFewSignificant as err:
        log.warning("%s", err)
        validation = None
    dr = dose_response(assignments, catalog_map)
    emit_plot_data(out, scatter=validation.scatter if validation else (), dose=dr)
    summary["ingredients"] = validation_record(validation, len(rows), dr)

    ag = _seasonality(assignments, _resolve(data, claims, "claims"), params, out)
    summary["seasonality"] = agreement_record(ag)

    if data is not None and (data / BUNDLE_FILES["truth_users"]).exists():
        summary["truth"] = _truth_checks(data, assignments, rows)
    write_json(out / "validation.json", summary)
    ing = summary["ingredients"]
    click.echo(f"ingredient r={_num(ing['r'])} p={_num(ing['p'])}  seasonal r={_num(ag.result.statistic)} "
               f"p={_num(ag.result.p_value)} peaks={ag.peak_month_a}/{ag.peak_month_b} lag={ag.best_lag}  "
               f"trend Z={_num(dr.trend.statistic)} p={_num(dr.trend.p_value)} ratio={_num(dr.ratio)}")


def _num(x) -> str:
    return "NA" if x is None else f"{x:.4g}"


def _truth_checks(data: Path, assignments, rows) -> dict:
    intended = {u.user_id: u.group for u in read_truth_users(data / BUNDLE_FILES["truth_users"])}
    mismatches = compare_to_truth(assignments, intended)
    effects = read_truth_effects(data / BUNDLE_FILES["truth_ingredients"])
    pairs = [(effects[r.ingredient], r.switch_rate.rate) for r in rows if r.ingredient in effects]
    record = {"cohort_mismatches": len(mismatches), "users": len(intended), "effect_spearman": None}
    if len(pairs) >= 3:
        try:
            record["effect_spearman"] = spearman([p[0] for p in pairs], [p[1] for p in pairs]).statistic
        except StatError as err:
            log.warning("effect Spearman undefined: %s", err)
    return record


@main.group(hidden=True)
def stat():
    """Direct access to a few kernel routines."""


@stat.command("chi2")
@click.argument("cells", nargs=4, type=click.IntRange(min=0))
@click.option("--yates", is_flag=True)
@reports_errors
def stat_chi2(cells, yates):
    r = chi_squared_2x2(TwoByTwoTable(*cells), yates=yates)
    click.echo(json.dumps({"statistic": r.statistic, "p": r.p_value}))


@stat.command("trend")
@click.option("--cases", required=True, help="Comma-separated case counts per group.")
@click.option("--totals", required=True, help="Comma-separated group sizes.")
@click.option("--scores", default=None, help="Comma-separated scores (default 0, 1, 2, ...).")
@reports_errors
def stat_trend(cases, totals, scores):
    ints = lambda s: [int(x) for x in s.split(",")]  # noqa: E731
    table = TrendTable.from_counts(ints(cases), ints(totals),
                                   [float(x) for x in scores.split(",")] if scores else None)
    r = cochran_armitage(table)
    click.echo(json.dumps({"statistic": r.statistic, "p": r.p_value}))


@stat.command("stl")
@click.argument("values", nargs=-1, type=float, required=True)
@click.option("--period", type=click.IntRange(min=2), default=12)
@reports_errors
def stat_stl(values, period):
    res = stl(list(values), StlParams(period=period))
    click.echo(json.dumps({"trend": res.trend.tolist(), "seasonal": res.seasonal.tolist()}))


if __name__ == "__main__":
    main()
