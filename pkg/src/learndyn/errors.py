"""Exception hierarchy.

Each error carries the CLI exit code it maps to.
"""


class LearnDynError(Exception):
    exit_code = 1


class DomainError(LearnDynError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Transfer function evaluated at (or numerically on) a pole."""


class SingularityError(DomainError):
    """Singular matrix where an inverse is required."""


class StructureError(LearnDynError, ValueError):
    """State vector or array shapes inconsistent with a model."""


class ConfigurationError(LearnDynError, ValueError):
    """Invalid experiment configuration; ``path`` names the offending field."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DivergenceError(LearnDynError, ArithmeticError):
    """Integration produced non-finite values."""

    exit_code = 2

    def __init__(self, message, step=None, model=None):
        self.step = step
        self.model = model
        prefix = f"[{model}] " if model else ""
        suffix = f" (step {step})" if step is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")


class SuiteFailure(LearnDynError):
    exit_code = 3
