"""Command-line interface for SEO RankMiner."""
import os
import sys
from datetime import datetime, timezone
from typing import Optional, Sequence

import click
from pydantic import ValidationError

from .analysis.reports import impact_csv, impact_markdown, rules_csv, rules_markdown
from .client import RankMinerClient
from .core.config import dump_run_config, load_run_config
from .core.dataset_io import load_dataset, save_dataset_csv, validate_dataset
from .core.errors import AnalysisError, ConfigError, DatasetParseError, FetchError, ProviderError
from .core.utils import duplicate_domains, read_sites_file, setup_logging, write_bytes
from .fetch.http import validate_url
from .models.config_models import RunConfig
from .models.dataset_models import Dataset
from .models.metric_models import builtin_registry

EXIT_DATA = 1
EXIT_IO = 2


def _fail(message: str, code: int) -> None:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


def _emit(text: str, output: Optional[str]) -> None:
    """Write text to a file, or to stdout when no path is given."""
    if output:
        try:
            write_bytes(output, text.encode("utf-8"))
        except OSError as e:
            _fail(f"cannot write {output}: {e}", EXIT_IO)
        click.echo(f"Wrote {output}", err=True)
    else:
        click.echo(text, nl=False)


def _write(path: str, data: bytes) -> None:
    try:
        write_bytes(path, data)
    except OSError as e:
        _fail(f"cannot write {path}: {e}", EXIT_IO)
    click.echo(f"Wrote {path}", err=True)


def _timestamp(no_timestamp: bool) -> Optional[datetime]:
    return None if no_timestamp else datetime.now(timezone.utc)


def _with_providers(run_config: RunConfig, fixtures: Sequence[str], search_fixture: Optional[str]) -> RunConfig:
    return run_config.with_overrides(providers={
        "fixtures": list(fixtures) or None,
        "search_fixture": search_fixture,
    })


def _load_valid_dataset(path: str) -> Dataset:
    """Load and validate a dataset or exit: 2 when unreadable, 1 when invalid."""
    try:
        dataset = load_dataset(path)
    except OSError as e:
        _fail(f"cannot read {path}: {e}", EXIT_IO)
    except DatasetParseError as e:
        _fail(f"{path}: {e}", EXIT_DATA)

    violations = validate_dataset(dataset)
    if violations:
        click.echo(f"Error: {path} has {len(violations)} validation problem(s):", err=True)
        for violation in violations:
            click.echo(f"  {violation}", err=True)
        sys.exit(EXIT_DATA)
    if len(dataset) < 3:
        _fail(f"{path} has {len(dataset)} record(s); at least 3 are required", EXIT_DATA)
    return dataset


def _sibling(output: Optional[str], suffix: str) -> Optional[str]:
    return f"{os.path.splitext(output)[0]}{suffix}" if output else None


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), envvar="SEO_RANKMINER_CONFIG",
              help="TOML run configuration (env: SEO_RANKMINER_CONFIG).")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Override LOG_LEVEL.")
@click.version_option(package_name="seo-rankminer")
@click.pass_context
def cli(ctx, config_path, log_level):
    """SEO RankMiner - SEO metrics versus Webometric rank"""
    setup_logging(log_level)
    try:
        ctx.obj = load_run_config(config_path)
    except ConfigError as e:
        _fail(str(e), EXIT_IO)


@cli.command()
@click.argument("url")
@click.option("--fixtures", multiple=True, type=click.Path(dir_okay=False), help="Provider fixture JSON (repeatable).")
@click.option("--search-fixture", type=click.Path(dir_okay=False), help="JSON map of domain to indexed page count.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the audit JSON here instead of stdout.")
@click.option("--no-timestamp", is_flag=True, help="Omit fetched_at for reproducible output.")
@click.pass_obj
def audit(run_config: RunConfig, url, fixtures, search_fixture, output, no_timestamp):
    """Audit one home page and print its 38 metrics with provenance."""
    try:
        validate_url(url)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="URL")

    client = RankMinerClient(_with_providers(run_config, fixtures, search_fixture))
    try:
        report = client.audit(url)
    except ProviderError as e:
        _fail(str(e), EXIT_IO)
    except FetchError as e:
        _fail(f"{url} is unreachable: {e}", EXIT_IO)

    _emit(report.to_json(include_timestamp=not no_timestamp), output)


@cli.command()
@click.option("--sites", required=True, type=click.Path(dir_okay=False), help="CSV of domain,rank pairs.")
@click.option("--fixtures", multiple=True, type=click.Path(dir_okay=False), help="Provider fixture JSON (repeatable).")
@click.option("--search-fixture", type=click.Path(dir_okay=False), help="JSON map of domain to indexed page count.")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False), help="Dataset CSV to write.")
@click.option("--max-concurrent", type=click.IntRange(min=1), help="Override fetch.max_concurrent.")
@click.option("--progress/--no-progress", default=None, help="Show a progress bar.")
@click.pass_obj
def collect(run_config: RunConfig, sites, fixtures, search_fixture, output, max_concurrent, progress):
    """Audit every site in a sites file and write the dataset CSV."""
    try:
        entries = read_sites_file(sites)
    except OSError as e:
        _fail(str(e), EXIT_IO)
    except DatasetParseError as e:
        _fail(f"{sites}: {e}", EXIT_DATA)

    duplicates = duplicate_domains(entries)
    if duplicates:
        _fail(f"duplicate domain(s) in {sites}: {', '.join(duplicates)}", EXIT_DATA)

    run_config = _with_providers(run_config, fixtures, search_fixture)
    run_config = run_config.with_overrides(fetch={"max_concurrent": max_concurrent})
    try:
        dataset, reports = RankMinerClient(run_config).collect(entries, progress)
    except ProviderError as e:
        _fail(str(e), EXIT_IO)

    _write(output, save_dataset_csv(dataset))
    unreachable = [r.domain for r in reports if r.status is None]
    click.echo(f"Collected {len(dataset)} sites; unreachable: {', '.join(unreachable) or 'none'}", err=True)


@cli.command()
@click.argument("dataset_path", type=click.Path(dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="Markdown report path (CSV is written alongside); stdout when omitted.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Impact table CSV path.")
@click.option("--scatter", "scatter_metrics", multiple=True, help="Export the scatter points of a metric (repeatable).")
@click.option("--scatter-dir", type=click.Path(file_okay=False), default=".", show_default=True,
              help="Directory for scatter_<metric>.csv files.")
@click.option("--log-shift", type=float, help="Override analysis.log_shift.")
@click.option("--no-timestamp", is_flag=True, help="Omit the Generated: header line.")
@click.pass_obj
def impact(run_config: RunConfig, dataset_path, output, csv_path, scatter_metrics, scatter_dir, log_shift, no_timestamp):
    """Impact of each metric on Webometric rank (squared correlation)."""
    registry = builtin_registry()
    for metric in scatter_metrics:
        if metric not in registry:
            raise click.BadParameter(f"unknown metric '{metric}'", param_hint="--scatter")
    try:
        run_config = run_config.with_overrides(analysis={"log_shift": log_shift})
    except ValidationError as e:
        raise click.UsageError(str(e))

    dataset = _load_valid_dataset(dataset_path)
    client = RankMinerClient(run_config)
    table = client.impact(dataset)

    _emit(impact_markdown(table, dataset.registry, _timestamp(no_timestamp)), output)
    csv_path = csv_path or _sibling(output, ".csv")
    if csv_path:
        _write(csv_path, impact_csv(table))

    for metric in scatter_metrics:
        try:
            points = client.scatter(dataset, metric)
        except AnalysisError as e:
            _fail(str(e), EXIT_DATA)
        _write(os.path.join(scatter_dir, f"scatter_{metric}.csv"), points)


@cli.command()
@click.argument("dataset_path", type=click.Path(dir_okay=False))
@click.option("--bins", type=int, help="Bins per attribute (>= 2).")
@click.option("--binning", type=click.Choice(["equal-width", "quantile"]), help="Binning method.")
@click.option("--min-support", type=float, help="Minimum support in percent.")
@click.option("--min-confidence", type=float, help="Minimum confidence in percent.")
@click.option("--top", "top_n", type=int, help="Rules per table.")
@click.option("--features", "feature_k", type=int, help="Metrics kept by feature selection before binary exclusion.")
@click.option("--max-antecedent", type=int, help="Maximum conditions per rule.")
@click.option("--include-missing/--no-include-missing", default=None, help="Emit items for missing values.")
@click.option("-o", "--output", type=click.Path(dir_okay=False),
              help="Markdown report path (full rules CSV is written alongside); stdout when omitted.")
@click.option("--rules-csv", "rules_csv_path", type=click.Path(dir_okay=False), help="Full rules CSV path.")
@click.option("--no-timestamp", is_flag=True, help="Omit the Generated: header line.")
@click.pass_obj
def mine(run_config: RunConfig, dataset_path, bins, binning, min_support, min_confidence, top_n, feature_k,
         max_antecedent, include_missing, output, rules_csv_path, no_timestamp):
    """Mine association rules that predict the Webometric rank bin."""
    try:
        run_config = run_config.with_overrides(mining={
            "bins": bins,
            "binning": binning,
            "min_support_pct": min_support,
            "min_confidence_pct": min_confidence,
            "top_n": top_n,
            "feature_k": feature_k,
            "max_antecedent": max_antecedent,
            "include_missing_items": include_missing,
        })
    except ValidationError as e:
        raise click.UsageError(str(e))

    dataset = _load_valid_dataset(dataset_path)
    try:
        result = RankMinerClient(run_config).mine(dataset)
    except AnalysisError as e:
        _fail(str(e), EXIT_DATA)

    if not result.frequent_itemset_count:
        click.echo("Notice: no frequent itemsets at this support threshold; tables are empty.", err=True)

    _emit(rules_markdown(result, dataset.registry, _timestamp(no_timestamp)), output)
    rules_csv_path = rules_csv_path or _sibling(output, ".csv")
    if rules_csv_path:
        _write(rules_csv_path, rules_csv(result.rules))


@cli.command("show-config")
@click.pass_obj
def show_config(run_config: RunConfig):
    """Print the effective configuration as TOML."""
    click.echo(dump_run_config(run_config), nl=False)


@cli.command("list-providers")
def list_providers():
    """List all available metric providers."""
    click.echo("\nAvailable Providers:")
    for provider in RankMinerClient.list_providers():
        click.echo(f"\nName: {provider['name']}")
        click.echo(f"Version: {provider['version']}")
        click.echo(f"Description: {provider['description']}")
        click.echo(f"Category: {provider['category']}")
        if provider["credentials_env"]:
            click.echo(f"Credentials: {provider['credentials_env']}")


def main():
    """Main entry point for the CLI."""
    cli(prog_name="seo-rankminer")


if __name__ == "__main__":
    main()
