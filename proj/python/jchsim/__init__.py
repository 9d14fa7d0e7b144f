"""Jaynes-Cummings-Hubbard quench simulator."""

from ._core import (
    Branch,
    ConfigError,
    EffectiveDimer,
    JCParams,
    PolaritonCoeffs,
    __version__,
    chi,
    coefficients,
    config_keys,
    default_config,
    detect,
    dimer_amplitudes,
    dimer_effective,
    effective_dimension,
    entropy_time_avg,
    hopping_element,
    initialize,
    mixing_angle,
    polariton_energy,
    quench,
    run_cli,
    rwa_report,
    sweep,
    variance_time_avg,
)

__all__ = [
    "Branch",
    "ConfigError",
    "EffectiveDimer",
    "JCParams",
    "PolaritonCoeffs",
    "__version__",
    "chi",
    "coefficients",
    "config_keys",
    "default_config",
    "detect",
    "dimer_amplitudes",
    "dimer_effective",
    "effective_dimension",
    "entropy_time_avg",
    "hopping_element",
    "initialize",
    "mixing_angle",
    "polariton_energy",
    "quench",
    "run_cli",
    "rwa_report",
    "sweep",
    "variance_time_avg",
]
