"""Experiment configs, the runner, report serialisation and the command line."""

from fraclab.harness.config import EXPERIMENTS, ExperimentConfig, load_config, parse_config
from fraclab.harness.experiments import run, thread_count
from fraclab.harness.report import emit, parse

__all__ = ["EXPERIMENTS", "ExperimentConfig", "emit", "load_config", "parse", "parse_config", "run",
           "thread_count"]
