"""Experiments and the command line interface."""

from .experiments import (
    ExperimentReport,
    ExtremalIdeal,
    MertensTable,
    NuScan,
    build_extremal_ideal,
    landau_check,
    li,
    max_nu_scan,
    mertens_by_class,
    progression_experiment,
)
