"""Exact noisy-circuit simulation and analytic oracles for quantum state
transfer over a linear qubit chain.

Four transfer schemes (successive SWAP, Bell-pair teleportation, GHZ
channel, cluster-state gate teleportation) are evaluated under
depolarizing gate noise and a biased classical readout model, with
closed-form three-qubit success/fidelity series, zero-noise
extrapolation, readout inversion, and a sweep CLI.
"""

from .channels import (
    KrausChannel,
    ReadoutModel,
    apply_channel,
    apply_readout,
    bit_flip,
    depolarizing_1q,
    depolarizing_2q,
    phase_flip,
    u_gate,
)
from .circuits import (
    Circuit,
    build_cluster,
    build_ghz,
    build_scheme,
    build_swap,
    build_teleport,
    parse_circuit,
    serialize_circuit,
    wrap_protocol,
)
from .engine import (
    ALL_GATES,
    ALL_GATES_BOUNDARY,
    CNOT_ONLY,
    EvalResult,
    NoiseSpec,
    averaged_fidelity,
    averaged_success,
    bloch_average,
    exact_eval,
    exact_fidelity,
    sample_shots,
)
from .linalg import (
    DensityMatrix,
    StateVector,
    apply_local,
    kron,
    min_eigenvalue,
    partial_trace,
)
from .mitigation import (
    ExpFit,
    FoldSpec,
    MitigationReport,
    exp_fit,
    fold_circuit,
    invert_readout,
    mitigate_pipeline,
    zne_curve,
    zne_extrapolate,
)
from .oracle import fidelity, m0_swap, m0bar, m_tilde, nominal_success, solve_q
from .sweep import (
    SurfaceRecord,
    SweepConfig,
    compare_schemes,
    csv_to_records,
    haar_sample,
    hellinger_fidelity,
    records_to_csv,
    run_sweep,
)

__version__ = "0.1.0"
