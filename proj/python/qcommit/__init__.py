"""Exact desk-scale simulator for keyed quantum bit commitments.

The heavy lifting lives in the C++ extension; this package re-exports the
bound operations.
"""

from ._core import (  # noqa: F401
    Averaging,
    BindingReport,
    CapExceeded,
    CommitterStrategy,
    DensityOp,
    Graph,
    KWiseFamily,
    PureState,
    RegisterLayout,
    SchemeInstance,
    SchemeParams,
    ThreeOutcomeMeasurement,
    Unitary,
    apply,
    aux_input_instance,
    binding_report,
    correlated_threshold,
    crqs_instance,
    efi_metrics,
    extractor_probs,
    fidelity,
    has_hamiltonian_cycle,
    hash_distribution,
    helstrom_three_outcome,
    hiding_advantage,
    honest_commit_state,
    honest_strategy,
    partial_trace,
    partial_trace_density,
    prg_reference_bound,
    protocol_state,
    purify,
    sum_binding_probe,
    tensor,
    tensor_density,
    trace_distance,
    uhlmann_strategy,
    uhlmann_unitary,
    unbounded_copy_attack,
    verify_kwise,
    verify_prob,
    zhandry_check,
    zk_completeness,
    zk_simulate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
