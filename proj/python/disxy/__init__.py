"""Disordered XY lattice models: Monte Carlo, percolation boxes and lattice Green functions."""

from ._disxy import (
    DisorderField,
    LatticeGraph,
    Model,
    binder,
    box_probability_scan,
    cov_forward,
    cov_inverse,
    crossing_temperature,
    green_box,
    green_fourier,
    green_walk,
    mcbryan_bound,
    run_chain,
    run_cli,
    sample_disorder,
)

__all__ = [
    "DisorderField",
    "LatticeGraph",
    "Model",
    "binder",
    "box_probability_scan",
    "cov_forward",
    "cov_inverse",
    "crossing_temperature",
    "green_box",
    "green_fourier",
    "green_walk",
    "mcbryan_bound",
    "run_chain",
    "run_cli",
    "sample_disorder",
]
