"""Shift operators on weighted coefficient spaces.

Thin wrapper over the compiled extension: spaces, coefficient functions,
resolvent continuation, invariant subspaces, spectral indicators, and the
check suite.
"""

import json as _json

from ._core import (  # noqa: F401
    CoeffFunction,
    ContinuationResult,
    Decomposition,
    IllConditionedBasisError,
    InvariantSubspace,
    MembershipResult,
    NeumannDivergenceError,
    PointSpectrumResult,
    SpaceModel,
    SpectrumHitError,
    __version__,
    apply_L,
    apply_Mz,
    build_subspace,
    continue_f,
    decompose,
    difference_quotient,
    eigenvector_at,
    evaluate,
    evaluate_with_bound,
    inner,
    make_space,
    membership_test,
    norm,
    point_spectrum_restriction,
    resolvent_R,
    restriction_spectrum,
    run_suite_json,
    scan_grid,
    spectrum_membership_indicator,
    suite_names,
    svd_indicator,
    truncated_kernel,
)


def run_suite(model, names=None, seed=0x5EED5AB5, probes=32):
    """Run the named checks (all of them by default) and return a list of
    report dictionaries."""
    return _json.loads(run_suite_json(model, names or [], seed, probes))
