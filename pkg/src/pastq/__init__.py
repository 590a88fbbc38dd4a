"""Forward-backward smoothing ("past state") estimation for a monitored qubit,
with a Monte Carlo virtual lab that pits quantum back-action against a
classical hidden-state model."""

__version__ = "0.1.0"

from .dynamics import (
    LindbladSpec,
    TimeGrid,
    backward_effect_step,
    build_liouvillian,
    joint_probability,
    propagate_rho,
    retrodictive_z,
    symmetrized_correlation,
)
from .lab import (
    ExperimentPlan,
    ShotRecord,
    SweepResult,
    SweepRow,
    representative_e00,
    run_bin_scan,
    run_shot_classical,
    run_shot_quantum,
    run_sweep,
)
from .readout import (
    FidelityModel,
    ReadoutChannel,
    apply_readout_error,
    correct_fidelity,
    e00_from_xi,
    effect_from_xi,
    fidelity,
    forward_qnd_update,
    sample_xi,
    xi_from_e00,
)
from .retrodiction import (
    OutcomeDistribution,
    born_probability,
    classical_mixture_probability,
    diagonal_smoothing,
    p_cm_theta,
    p_past_theta,
    p_rho_theta,
    pqs_probability,
)
from .states import (
    BlochAngle,
    EffectMatrix,
    PovmElement,
    QubitState,
    make_diagonal_state,
    projector_theta,
    rotation_y,
)

__all__ = [
    "__version__",
    "LindbladSpec",
    "TimeGrid",
    "backward_effect_step",
    "build_liouvillian",
    "joint_probability",
    "propagate_rho",
    "retrodictive_z",
    "symmetrized_correlation",
    "ExperimentPlan",
    "ShotRecord",
    "SweepResult",
    "SweepRow",
    "representative_e00",
    "run_bin_scan",
    "run_shot_classical",
    "run_shot_quantum",
    "run_sweep",
    "FidelityModel",
    "ReadoutChannel",
    "apply_readout_error",
    "correct_fidelity",
    "e00_from_xi",
    "effect_from_xi",
    "fidelity",
    "forward_qnd_update",
    "sample_xi",
    "xi_from_e00",
    "OutcomeDistribution",
    "born_probability",
    "classical_mixture_probability",
    "diagonal_smoothing",
    "p_cm_theta",
    "p_past_theta",
    "p_rho_theta",
    "pqs_probability",
    "BlochAngle",
    "EffectMatrix",
    "PovmElement",
    "QubitState",
    "make_diagonal_state",
    "projector_theta",
    "rotation_y",
]
