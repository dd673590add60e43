"""Time-dependent storage protocol: schedule, mode evolution, correlations."""

from .bogoliubov import QuenchState, evolve_bogoliubov
from .correlations import (
    correlation_final_zero_t,
    correlation_thermal,
    gaussian_exponential_crossover,
    log_log_slope,
    phi_excess,
    slope_crossover_location,
)
from .protocol import (
    CrossoverLengths,
    QuenchProtocol,
    SwitchTimeBound,
    crossover_length,
    f_of_t,
    f_of_t_product_form,
    instantaneous_k,
    mass_of_t,
    min_switch_time,
    omega_of_t,
    protocol_from_params,
    sound_velocity_of_t,
    temperature_cap,
    time_at_k,
    vg_of_t,
    x_of_t,
)

__all__ = [
    "QuenchProtocol",
    "QuenchState",
    "CrossoverLengths",
    "SwitchTimeBound",
    "protocol_from_params",
    "x_of_t",
    "f_of_t",
    "f_of_t_product_form",
    "instantaneous_k",
    "time_at_k",
    "mass_of_t",
    "vg_of_t",
    "omega_of_t",
    "sound_velocity_of_t",
    "crossover_length",
    "min_switch_time",
    "temperature_cap",
    "evolve_bogoliubov",
    "correlation_final_zero_t",
    "correlation_thermal",
    "phi_excess",
    "log_log_slope",
    "slope_crossover_location",
    "gaussian_exponential_crossover",
]
