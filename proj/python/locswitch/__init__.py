"""Python bindings for the locswitch simulator.

Positions are radians outdoors and meters indoors; rates are bytes/second,
energies joules, times seconds.
"""

from ._locswitch import (
    ConfigError,
    EmptyLog,
    Error,
    FrameMismatch,
    MissingCell,
    NonPositiveSpeed,
    ParseError,
    battery_capacity_j,
    efficiency_ratio,
    generate_field,
    generate_trace,
    haversine_distance,
    nearest_ap,
    run,
    scheme_names,
    sweep,
    time_to_switch,
)

__all__ = [
    "ConfigError",
    "EmptyLog",
    "Error",
    "FrameMismatch",
    "MissingCell",
    "NonPositiveSpeed",
    "ParseError",
    "battery_capacity_j",
    "efficiency_ratio",
    "generate_field",
    "generate_trace",
    "haversine_distance",
    "nearest_ap",
    "run",
    "scheme_names",
    "sweep",
    "time_to_switch",
]
