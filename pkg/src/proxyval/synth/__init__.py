"""Synthetic data with planted effects, for validating the pipeline end to end."""

from .config import GeneratorConfig
from .generator import GroundTruth, SyntheticBundle, UserTruth, generate, onset_probability
from .io import BUNDLE_FILES, read_truth_effects, read_truth_users, write_bundle
from .scenarios import null_scenario, paper_scenario

__all__ = [
    "BUNDLE_FILES",
    "GeneratorConfig",
    "GroundTruth",
    "SyntheticBundle",
    "UserTruth",
    "generate",
    "null_scenario",
    "onset_probability",
    "paper_scenario",
    "read_truth_effects",
    "read_truth_users",
    "write_bundle",
]
