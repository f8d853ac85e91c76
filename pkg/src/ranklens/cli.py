"""Command-line pipeline: ingest -> train -> evaluate -> explain -> agreement
-> report / serve.

Every flag has a config-file equivalent; flags override the file. Exit codes:
0 ok, 2 configuration error, 3 data error, 4 missing stage artifact.
"""

from __future__ import annotations

import functools
import sys

import click

from .errors import ConfigError, DataError, MissingArtifactError, RankLensError
from .pipeline import (
    load_config,
    render_report,
    run_agreement,
    run_evaluate,
    run_explain,
    run_ingest,
    run_train,
)

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_MISSING = 4


def common_options(fn):
    @click.option("--config", "config_path", required=True, type=click.Path(),
                  help="pipeline config file (YAML)")
    @click.option("--seed", type=int, default=None, help="override the config seed")
    @click.option("--store", default=None, help="override the artifact store path")
    @click.option("--dataset", default=None, help="override the dataset id")
    @click.option("--rankers", default=None,
                  help="comma-separated ranker algorithms (subset/override of config)")
    @click.option("--years", default=None, help="comma-separated years to process")
    @click.option("--method", default=None, type=click.Choice(["LIME", "ICE"]),
                  help="restrict explanation method")
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs)

    return wrapper


def _overrides(seed, store, dataset, rankers, years, method) -> dict:
    return {
        "seed": seed,
        "store": store,
        "dataset": dataset,
        "rankers": rankers.split(",") if rankers else None,
        "years": [int(y) for y in years.split(",")] if years else None,
        "method": method,
    }


def _run(stage, config_path, seed, store, dataset, rankers, years, method):
    try:
        config = load_config(config_path, _overrides(seed, store, dataset, rankers,
                                                     years, method))
        return stage(config)
    except ConfigError as e:
        click.echo(f"config error: {e}", err=True)
        sys.exit(EXIT_CONFIG)
    except MissingArtifactError as e:
        click.echo(f"missing artifact: {e}", err=True)
        sys.exit(EXIT_MISSING)
    except DataError as e:
        click.echo(f"data error: {e}", err=True)
        sys.exit(EXIT_DATA)
    except RankLensError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)


@click.group()
def main():
    """Learned surrogate rankers with goodness-of-fit and local explanations."""


@main.command()
@common_options
def ingest(config_path, seed, store, dataset, rankers, years, method):
    """Read the dataset CSV into the store as a ranking table."""
    def stage(config):
        table = run_ingest(config)
        click.echo(
            f"ingested {config.dataset_id}: {len(table.queries)} years, "
            f"{table.n_attributes} attributes"
        )
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


@main.command()
@common_options
def train(config_path, seed, store, dataset, rankers, years, method):
    """Fit the configured rankers on the ingested table."""
    def stage(config):
        trained = run_train(config)
        click.echo(f"trained: {', '.join(trained)}")
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


@main.command()
@common_options
def evaluate(config_path, seed, store, dataset, rankers, years, method):
    """Score every year with every trained ranker; store rankings and fit reports."""
    def stage(config):
        n = run_evaluate(config)
        click.echo(f"wrote {n} evaluation artifacts")
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


@main.command()
@common_options
def explain(config_path, seed, store, dataset, rankers, years, method):
    """Precompute per-candidate explanation matrices for each ranker and year."""
    def stage(config):
        n = run_explain(config)
        click.echo(f"wrote {n} explanation matrices")
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


@main.command()
@common_options
def agreement(config_path, seed, store, dataset, rankers, years, method):
    """Correlate LIME and ICE explanations per candidate; store the reports."""
    def stage(config):
        n = run_agreement(config)
        click.echo(f"wrote {n} agreement reports")
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


@main.command()
@common_options
def report(config_path, seed, store, dataset, rankers, years, method):
    """Print the ranker x {NDCG@10, P@10} table plus agreement medians."""
    def stage(config):
        click.echo(render_report(config), nl=False)
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


@main.command()
@common_options
@click.option("--host", default=None, show_default="127.0.0.1", help="bind address")
@click.option("--port", type=int, default=None, show_default="8000", help="port")
@click.option("--static", "static_dir", default=None,
              help="directory with the built exploration UI")
def serve(config_path, seed, store, dataset, rankers, years, method, host, port,
          static_dir):
    """Serve the artifact store over HTTP for the exploration UI."""
    def stage(config):
        import uvicorn

        from .service import create_app, load_service_settings

        settings = load_service_settings(
            store_path=config.store_path, static_dir=static_dir, port=port, host=host
        )
        app = create_app(settings["store"], settings["cache_size"], settings["static"])
        uvicorn.run(app, host=settings["host"], port=settings["port"])
    _run(stage, config_path, seed, store, dataset, rankers, years, method)


if __name__ == "__main__":
    main()
