import logging
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path

from config import SPECS_DIR
from lib.experiment.model.experiment_config import ConfigError
from lib.jobs.generate import DEFAULT_PES, DEFAULT_TASKS
from lib.simulation.engine import DEFAULT_MAX_SIMULATION_LENGTH
from lib.visualization.chart_format import ChartFormat
from lib.visualization.curve import DEFAULT_ROLLING_WINDOW

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2


def _construct_parser() -> ArgumentParser:
    base_parser = ArgumentParser(description="Scheduling simulator for DAG jobs on heterogeneous processing elements")

    commands = base_parser.add_subparsers(
        dest="command",
        title="Commands",
        metavar="<command>",
        required=True,
    )

    # GEN
    gen_parser = commands.add_parser("gen", help="Generate a random sample job and resource matrix")
    gen_parser.add_argument("--tasks", "-N", type=int, default=DEFAULT_TASKS, help="Number of tasks")
    gen_parser.add_argument("--pes", "-P", type=int, default=DEFAULT_PES, help="Number of processing elements")
    gen_parser.add_argument("--seed", "-S", type=int, default=0)
    gen_parser.add_argument("--out", "-o", type=Path, default=SPECS_DIR, help=f'Output directory. Default: "{SPECS_DIR}"')

    # RUN
    run_parser = commands.add_parser("run", help="Run an experiment from a config file")
    run_parser.add_argument("--config", "-c", type=Path, required=True, help="key=value or yaml experiment config")

    # COMPARE
    compare_parser = commands.add_parser("compare", help="Plot execution time versus episode per scheduler")
    compare_parser.add_argument("--metrics", "-m", type=Path, required=True, help="metrics.jsonl or metrics.csv")
    compare_parser.add_argument("--out", "-o", type=Path, default=None, help="SVG path. Default: next to the metrics")
    compare_parser.add_argument("--window", "-w", type=int, default=DEFAULT_ROLLING_WINDOW, help="Rolling-mean window")

    # GANTT
    gantt_parser = commands.add_parser("gantt", help="Render the GANTT chart of an episode record")
    gantt_parser.add_argument("--result", "-r", type=Path, required=True, help="Episode record (.json or .jsonl)")
    gantt_parser.add_argument(
        "--format", "-f", type=str, default=ChartFormat.SVG.value, choices=[f.value for f in ChartFormat]
    )
    gantt_parser.add_argument("--out", "-o", type=Path, default=None)
    gantt_parser.add_argument("--job", "-j", type=Path, default=None, help="Job file for task names")
    gantt_parser.add_argument("--episode", "-e", type=int, default=None)
    gantt_parser.add_argument("--scheduler", "-s", type=str, default=None)
    gantt_parser.add_argument("--seed", "-S", type=int, default=None)

    # SALIENCY
    saliency_parser = commands.add_parser("saliency", help="Input saliency of a trained DRM checkpoint")
    saliency_parser.add_argument("--checkpoint", "-k", type=Path, required=True)
    saliency_parser.add_argument("--job", "-j", type=Path, required=True)
    saliency_parser.add_argument("--rm", "-r", type=Path, required=True)
    saliency_parser.add_argument("--out", "-o", type=Path, default=None)
    saliency_parser.add_argument("--max_simulation_length", "-L", type=int, default=DEFAULT_MAX_SIMULATION_LENGTH)

    return base_parser


def _dispatch(args: Namespace) -> int:
    match args.command:
        case "gen":
            from lib.jobs.generate import write_sample_specs

            write_sample_specs(args.out, args.tasks, args.pes, args.seed)

        case "run":
            from lib.experiment.model.experiment_config import ExperimentConfig
            from lib.experiment.runner import run_experiment

            if not args.config.is_file():
                raise ConfigError(f"Error: Config file not found: {args.config}")
            report = run_experiment(ExperimentConfig.from_file(args.config))
            if report.failed:
                return EXIT_RUNTIME_ERROR

        case "compare":
            from lib.experiment.scripts.charts import compare_metrics

            out = args.out or args.metrics.with_name("compare.svg")
            compare_metrics(args.metrics, out, args.window)

        case "gantt":
            from lib.experiment.scripts.charts import render_gantt

            render_gantt(
                args.result,
                ChartFormat.get_format(args.format),
                out_path=args.out,
                job_path=args.job,
                episode=args.episode,
                scheduler=args.scheduler,
                seed=args.seed,
            )

        case "saliency":
            from lib.experiment.scripts.saliency import export_saliency

            export_saliency(args.checkpoint, args.job, args.rm, args.out, args.max_simulation_length)

        case _:
            raise ValueError(f'No command "{args.command}"')

    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _construct_parser().parse_args(argv)

    try:
        return _dispatch(args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG_ERROR
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_RUNTIME_ERROR


def run_pipeline():
    sys.exit(main())


if __name__ == "__main__":
    run_pipeline()
