"""Exception types shared across the package.

Exit-code mapping used by the CLI: ConfigError -> 1,
NumericalContractError -> 2.
"""


class ScsMimoError(Exception):
    """Base class for all package errors."""


class ConfigError(ScsMimoError):
    """Invalid system or experiment configuration."""


class NumericalContractError(ScsMimoError):
    """A numerical routine was handed input violating its contract,
    or failed to meet its convergence guarantee."""
