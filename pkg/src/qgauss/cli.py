"""Command-line front end for qgauss scenarios."""

import argparse
import asyncio
import logging
import sys
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import config
from .errors import ConfigError
from .scenarios import (
    BUILTIN_SCENARIOS,
    ScenarioConfig,
    config_from_mapping,
    resolve,
    run_scenario,
    write_outputs,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_SOLVER_ERROR = 3

FORCED_KINDS = {"verify": "verify_constraint", "compare": "compare_solvers"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgauss",
        description="Quantum hydrodynamics from the principle of least constraint.",
    )
    parser.add_argument("--version", action="version", version=f"qgauss {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for command, help_text in (
        ("run", "run scenarios"),
        ("verify", "run the constraint certificate on the scenarios' grids"),
        ("compare", "compare the hydro solver with the wave-function oracle"),
    ):
        cmd = sub.add_parser(command, help=help_text)
        cmd.add_argument(
            "configs",
            nargs="+",
            help="scenario files (.toml) or names of built-in scenarios",
        )
        cmd.add_argument("--seed", type=int, default=None, help="override the seed")
        cmd.add_argument(
            "--out-dir",
            type=Path,
            default=None,
            help="output root (default: QGAUSS_OUT_DIR or qgauss-out)",
        )
        cmd.add_argument(
            "--jobs",
            type=int,
            default=None,
            help="scenarios run concurrently in separate processes",
        )
        cmd.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    listing = sub.add_parser("list-scenarios", help="list built-in scenarios")
    listing.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def prepare(
    target: str, command: str, seed: int | None = None
) -> ScenarioConfig:
    """Resolve a target and apply command-line overrides."""
    cfg = resolve(target)
    overrides: dict[str, object] = {}
    if seed is not None:
        overrides["seed"] = seed
    if command in FORCED_KINDS and cfg.kind != FORCED_KINDS[command]:
        overrides["kind"] = FORCED_KINDS[command]
    if overrides:
        cfg = config_from_mapping(cfg.model_dump() | overrides)
    return cfg


def execute(cfg: ScenarioConfig, out_dir: Path) -> int:
    """Run one scenario and write its files; returns the exit code."""
    report = run_scenario(cfg)
    write_outputs(report, out_dir)
    return report.exit_code


def _worker(cfg: ScenarioConfig, out_dir: Path, level: str, fmt: str) -> int:
    logging.basicConfig(level=level, format=fmt)
    return execute(cfg, out_dir)


async def run_batch(
    configs: Sequence[ScenarioConfig], out_dir: Path, jobs: int = 1
) -> list[int]:
    """Run independent scenarios; each writes only below out_dir/<name>/."""
    if jobs <= 1 or len(configs) <= 1:
        return [execute(cfg, out_dir) for cfg in configs]
    loop = asyncio.get_running_loop()
    level = logging.getLevelName(logging.getLogger().getEffectiveLevel())
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            loop.run_in_executor(
                pool, _worker, cfg, out_dir, level, config.logging.format
            )
            for cfg in configs
        ]
        return list(await asyncio.gather(*futures))


def list_scenarios() -> int:
    width = max(len(name) for name in BUILTIN_SCENARIOS)
    for name, data in BUILTIN_SCENARIOS.items():
        print(f"{name:<{width}}  {data['kind']}")
    return EXIT_OK


async def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-scenarios":
        return list_scenarios()

    codes: list[int] = []
    configs: list[ScenarioConfig] = []
    for target in args.configs:
        try:
            configs.append(prepare(target, args.command, args.seed))
        except ConfigError as exc:
            print(f"qgauss: {target}: {exc}", file=sys.stderr)
            codes.append(EXIT_CONFIG_ERROR)

    names = [cfg.name for cfg in configs]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        print(
            "qgauss: scenario names must be unique in a batch: "
            + ", ".join(duplicates),
            file=sys.stderr,
        )
        return EXIT_CONFIG_ERROR

    out_dir = args.out_dir if args.out_dir is not None else config.out_dir
    jobs = args.jobs if args.jobs is not None else config.jobs
    codes += await run_batch(configs, out_dir, jobs=jobs)
    for cfg, code in zip(configs, codes[len(codes) - len(configs) :]):
        print(f"{cfg.name}: exit {code} ({out_dir / cfg.name})")
    return max(codes, default=EXIT_OK)


def main_sync() -> None:
    """Entry point for pyproject.toml console_scripts."""
    verbose = "-v" in sys.argv or "--verbose" in sys.argv
    logging.basicConfig(
        level="DEBUG" if verbose or config.debug else config.logging.level,
        format=config.logging.format,
    )
    try:
        code = asyncio.run(main())
    except KeyboardInterrupt:
        print("\nInterrupted")
        code = 130
    sys.exit(code)


if __name__ == "__main__":
    main_sync()
