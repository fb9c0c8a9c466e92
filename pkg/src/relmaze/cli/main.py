"""Main CLI entry point for relmaze"""

import os
from pathlib import Path
from typing import Optional

import click

from .. import __version__
from ..bench.report import check_report, load_report, write_heatmaps
from ..bench.suite import generate_suite_entries, write_suite
from ..config.settings import ENV_KEYS
from ..errors import RelmazeError
from .formatters import OutputFormatter
from .runner import main_run
from .utils import CliContext, configure_logging, load_env_files, mask_secret, pass_cli_context, resolve_run_config


def _fail(e: RelmazeError) -> None:
    click.echo(f"❌ {type(e).__name__}: {e}", err=True)
    raise SystemExit(e.exit_code)


@click.group(invoke_without_command=True)
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')
@click.option('--format', '-f', type=click.Choice(['table', 'json', 'yaml']),
              default='table', help='Output format')
@click.version_option(version=__version__, prog_name='relmaze')
@click.pass_context
def cli(ctx, verbose, format):
    """
    🧭 relmaze - maze path planning with relation graphs and curriculum Q-learning

    \b
    1. Generate a benchmark suite:
       • relmaze gen-suite --output suite.json
    2. Run a method over it (or over one maze file):
       • relmaze run --suite suite.json --method curriculum-q --proposer oracle
       • relmaze run --maze maze.json --proposer llm
    3. Inspect the results:
       • relmaze report runs/latest
       • relmaze heatmap runs/latest 5x5-000
    """
    ctx.ensure_object(CliContext)
    ctx.obj.verbose = verbose
    ctx.obj.format = format
    configure_logging(verbose)

    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command(name='gen-suite')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='YAML run profile (its suite section is used)')
@click.option('--seed', type=int, help='Suite seed')
@click.option('--output', '-o', default='suite.json', show_default=True,
              type=click.Path(dir_okay=False), help='Suite file to write')
@pass_cli_context
def gen_suite(cli_ctx: CliContext, config_path, seed, output):
    """Generate a seeded suite of solvable mazes"""
    try:
        cfg = resolve_run_config(config_path, {"seed": seed})
        entries = generate_suite_entries(cfg.suite)
    except RelmazeError as e:
        _fail(e)
    write_suite(output, entries, cfg.suite)
    click.echo(OutputFormatter.format_suite(entries, cli_ctx.format))
    click.echo(f"✅ Wrote {len(entries)} mazes to {output}")


@cli.command()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), help='YAML run profile')
@click.option('--maze', type=click.Path(exists=True, dir_okay=False), help='Single maze file')
@click.option('--maze-format', type=click.Choice(['auto', 'json', 'ascii', 'text']), help='Maze file format')
@click.option('--suite', type=click.Path(exists=True, dir_okay=False), help='Suite file from gen-suite')
@click.option('--method', type=click.Choice(['naive', 'prompt-relational', 'prompt-s2r', 'qlearn', 'curriculum-q', 's2rcql']))
@click.option('--proposer', type=click.Choice(['oracle', 'greedy-blind', 'scripted', 'llm', 'uniform-random']))
@click.option('--episodes', type=click.IntRange(min=1), help='Total training episode cap per maze')
@click.option('--epsilon', type=click.FloatRange(0.0, 1.0))
@click.option('--seed', type=int)
@click.option('--curriculum', type=click.Choice(['reverse-walk', 'llm', 'none']))
@click.option('--stages', type=click.IntRange(min=0), help='Intermediate curriculum stages')
@click.option('--script', type=click.Path(exists=True, dir_okay=False), help='Label script for the scripted proposer')
@click.option('--prompt-style', type=click.Choice(['relational', 'coordinate']))
@click.option('--out', type=click.Path(file_okay=False), help='Output directory')
@click.option('--workers', type=click.IntRange(min=1))
@click.option('--resume-qtable', type=click.Path(exists=True, dir_okay=False), help='Q-table snapshot to start from')
@pass_cli_context
def run(cli_ctx: CliContext, config_path, **flags):
    """Train and evaluate on one maze or a whole suite"""
    try:
        cfg = resolve_run_config(config_path, flags)
    except RelmazeError as e:
        _fail(e)

    code = main_run(cfg)
    if code != 0:
        click.echo(f"❌ Run failed (exit {code}); see the log above", err=True)
        raise SystemExit(code)

    report = load_report(Path(cfg.out_dir) / "report.json")
    click.echo(OutputFormatter.format_report(report, cli_ctx.format))
    click.echo(f"\n✅ Artifacts in {cfg.out_dir}")


def _report_path(path: str) -> Path:
    p = Path(path)
    return p / "report.json" if p.is_dir() else p


@cli.command()
@click.argument('path', type=click.Path(exists=True))
@click.option('--check', is_flag=True, help='Recompute every rate from the embedded logs')
@pass_cli_context
def report(cli_ctx: CliContext, path, check):
    """Show a saved run report (file or run directory)"""
    loaded = load_report(_report_path(path))
    if check:
        try:
            check_report(loaded)
        except RelmazeError as e:
            _fail(e)
        click.echo("✅ Rates match the embedded logs")
    click.echo(OutputFormatter.format_report(loaded, cli_ctx.format))


@cli.command()
@click.argument('path', type=click.Path(exists=True))
@click.argument('maze_id', required=False)
@click.option('--export', 'export_dir', type=click.Path(file_okay=False),
              help='Write JSON and PPM heatmaps for every maze into this directory')
@pass_cli_context
def heatmap(cli_ctx: CliContext, path, maze_id, export_dir):
    """Show the visit-count heatmap of one maze, or export all of them"""
    loaded = load_report(_report_path(path))
    if export_dir:
        write_heatmaps(Path(export_dir), loaded)
        click.echo(f"✅ Exported {len(loaded.heatmaps)} heatmaps to {Path(export_dir) / 'heatmaps'}")
        if maze_id is None:
            return
    if maze_id is None:
        maze_id = loaded.mazes[0].maze_id
    if maze_id not in loaded.heatmaps:
        click.echo(f"❌ No maze '{maze_id}' in report", err=True)
        raise click.Abort()
    click.echo(OutputFormatter.format_heatmap(loaded, maze_id, cli_ctx.format))


@cli.command()
def version():
    """Show relmaze version information"""
    click.echo("🧭 relmaze")
    click.echo(f"Version: {__version__}")
    click.echo("Methods: naive, prompt-relational, qlearn, curriculum-q")


@cli.command(name='debug-env')
def debug_env():
    """Debug environment configuration and .env file loading"""
    click.echo("🔍 Environment Configuration Debug")
    click.echo("=" * 50)

    loaded: Optional[str] = load_env_files()
    click.echo(f"📁 .env file: {os.path.abspath(loaded) if loaded else '❌ NOT FOUND'}")

    click.echo("\n🔑 Environment Variables:")
    for var in ENV_KEYS:
        value = os.getenv(var)
        click.echo(f"  {var}: {value if value else '❌ NOT SET'}")

    click.echo("\n⚙️ Configuration Loading:")
    try:
        cfg = resolve_run_config(None, {})
    except RelmazeError as e:
        click.echo(f"  ❌ Failed to resolve configuration: {e}")
        return
    key_var = cfg.gateway.api_key_env
    click.echo(f"  {key_var}: {mask_secret(os.getenv(key_var))}")
    click.echo(f"  Endpoint: {cfg.gateway.endpoint_url}")
    click.echo(f"  Model: {cfg.gateway.model_name}")
    click.echo(f"  Method: {cfg.method.name}, proposer: {cfg.proposer.kind}")

    click.echo(f"\n💡 Current working directory: {os.getcwd()}")


if __name__ == '__main__':
    cli()
