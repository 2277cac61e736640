"""Gaussian covariance-matrix simulator for amendable-channel experiments.

Simulates, at the level of second moments, an optical bench in which a
single two-mode squeezed source provides both an entangled probe and a
squeezed ancilla; mixing the ancilla into a double-attenuation channel acts
as a squeezing filter that can be switched on (phi1 route) or off (phi2
route). The witness is the minimum symplectic eigenvalue of the partially
transposed output state, with optional measurement-uncertainty propagation.
"""

__version__ = "0.1.0"

from .channels import (
    GaussianChannelXY,
    ancilla_squeezer_step,
    apply,
    apply_to_mode,
    attenuation,
    compose,
    dilation_attenuation,
    identity_channel,
    phi1,
    phi2,
    squeeze_channel,
)
from .experiment import (
    ExperimentConfig,
    PointResult,
    SweepResult,
    apply_detection_loss,
    find_flip_eta,
    output_state,
    prepare_resources,
    run_channel_stage,
    run_point,
    sweep_eta,
)
from .symplectic import (
    CovMatrix,
    SymplecticTransform,
    apply_symplectic,
    beam_splitter,
    embed_two_mode,
    partial_trace,
    squeeze_transform,
    squeezed_vacuum_cm,
    symplectic_form,
    symplectic_spectrum_oracle,
    tensor,
    tmsv_cm,
    vacuum_cm,
)
from .uncertainty import (
    AMBIGUOUS,
    CONCLUSIVE_EB,
    CONCLUSIVE_ENTANGLED,
    ConfidenceVerdict,
    MonteCarloDelta,
    PropagationError,
    UncertaintyModel,
    classify,
    propagate_first_order,
    propagate_monte_carlo,
)
from .witness import (
    SEPARABILITY_THRESHOLD,
    WitnessValue,
    eb_threshold,
    nu_squared_closed_form,
    nu_squared_oracle,
    partial_transpose,
)

__all__ = [
    "AMBIGUOUS",
    "CONCLUSIVE_EB",
    "CONCLUSIVE_ENTANGLED",
    "ConfidenceVerdict",
    "CovMatrix",
    "ExperimentConfig",
    "GaussianChannelXY",
    "MonteCarloDelta",
    "PointResult",
    "PropagationError",
    "SEPARABILITY_THRESHOLD",
    "SweepResult",
    "SymplecticTransform",
    "UncertaintyModel",
    "WitnessValue",
    "ancilla_squeezer_step",
    "apply",
    "apply_detection_loss",
    "apply_symplectic",
    "apply_to_mode",
    "attenuation",
    "beam_splitter",
    "classify",
    "compose",
    "dilation_attenuation",
    "eb_threshold",
    "embed_two_mode",
    "find_flip_eta",
    "identity_channel",
    "nu_squared_closed_form",
    "nu_squared_oracle",
    "output_state",
    "partial_trace",
    "partial_transpose",
    "phi1",
    "phi2",
    "prepare_resources",
    "propagate_first_order",
    "propagate_monte_carlo",
    "run_channel_stage",
    "run_point",
    "squeeze_channel",
    "squeeze_transform",
    "squeezed_vacuum_cm",
    "sweep_eta",
    "symplectic_form",
    "symplectic_spectrum_oracle",
    "tensor",
    "tmsv_cm",
    "vacuum_cm",
]
