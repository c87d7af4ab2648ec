"""Exact solution toolkit for an integrable spin chain with NN, NNN and chiral three-spin
couplings under antiperiodic boundary conditions."""

__version__ = "0.1.0"

from .chain import ModelParams  # noqa: E402
from .thermo import ThermoParams  # noqa: E402

__all__ = ["ModelParams", "ThermoParams", "__version__"]
