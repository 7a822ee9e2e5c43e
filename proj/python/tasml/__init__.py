"""Machine-learning transmit antenna selection for untrusted relay networks.

Labels and antenna indices are 1-based, as in the CSV and model files.
"""

from ._core import (
    ConfigurationError,
    InputDomainError,
    Model,
    OperatingPoint,
    ParseError,
    __version__,
    combinations,
    features,
    generate_channels,
    oracle_labels,
    run_sweep,
    sinr,
    train,
)

__all__ = [
    "ConfigurationError",
    "InputDomainError",
    "Model",
    "OperatingPoint",
    "ParseError",
    "__version__",
    "combinations",
    "features",
    "generate_channels",
    "oracle_labels",
    "run_sweep",
    "sinr",
    "train",
]
