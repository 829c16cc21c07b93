"""Eigenvalue and eigenvector-overlap statistics of non-Hermitian random matrices."""

import json

from ._core import (
    DegenerateSpectrum,
    DimensionMismatch,
    EmptyInput,
    EnsembleSpec,
    NonConvergence,
    NumericalError,
    ParameterError,
    conditional_schur,
    experiment_names,
    inv_gamma2_cdf,
    inv_gamma2_median,
    ks_two_sample,
    origin_limit_samples,
    overlap_matrix,
    overlap_pair,
    quenched_ov11,
    quenched_ov12,
    quenched_trace,
    run_verify_json,
    sample_matrix,
    schur,
)


def run_verify(experiment, **options):
    """Run a verification suite and return its report as a dict.

    Options mirror the CLI flags: ensemble, n, m, replicas, seed, alpha, threads.
    """
    config = {"experiment": experiment, **options}
    return json.loads(run_verify_json(json.dumps(config)))


__all__ = [
    "DegenerateSpectrum",
    "DimensionMismatch",
    "EmptyInput",
    "EnsembleSpec",
    "NonConvergence",
    "NumericalError",
    "ParameterError",
    "conditional_schur",
    "experiment_names",
    "inv_gamma2_cdf",
    "inv_gamma2_median",
    "ks_two_sample",
    "origin_limit_samples",
    "overlap_matrix",
    "overlap_pair",
    "quenched_ov11",
    "quenched_ov12",
    "quenched_trace",
    "run_verify",
    "sample_matrix",
    "schur",
]
