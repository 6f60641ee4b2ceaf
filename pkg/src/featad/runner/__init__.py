"""Experiment configuration, orchestration, synthetic data and reporting."""

from featad.runner.config import Curation, DatasetSpec, ExperimentConfig, load_config, run_plan, save_config
from featad.runner.experiment import ExperimentRun, load_dataset, run_experiment, task_seed
from featad.runner.report import generate_report
from featad.runner.synth import synth_corpus

__all__ = [
    "Curation",
    "DatasetSpec",
    "ExperimentConfig",
    "ExperimentRun",
    "generate_report",
    "load_config",
    "load_dataset",
    "run_experiment",
    "run_plan",
    "save_config",
    "synth_corpus",
    "task_seed",
]
