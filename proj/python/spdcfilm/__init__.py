"""Non-phase-matched SPDC in subwavelength nonlinear films.

Thin python surface over the C++ core: dispersion and coherence-length
diagnostics, pair-emission kinematics, propagation-scenario statistics,
coincidence-counting Monte Carlo, and two-qubit polarization tomography.
"""

from ._core import (  # noqa: F401
    DetectorModel,
    DispersionModel,
    NonlinearFilm,
    PumpBeam,
    SourceModel,
    __version__,
    analytic_g2_zero,
    bell_state,
    coherence_length,
    coincidence_histogram,
    concurrence,
    correlation_time_fs,
    detection_angle_from_na,
    emission_bandwidth,
    fidelity,
    g2_zero,
    layers_to_thickness,
    loss_corrected_rate,
    mismatch,
    mle_reconstruct,
    pair_rate_density,
    pair_state_from_pump,
    phase_matching_factor,
    projector,
    pump_angle_experiment,
    pump_factor,
    scenario_rates,
    shg_intensity,
    simulate_counts,
    simulate_time_tags,
    standard_16_settings,
    state_fidelity,
)
