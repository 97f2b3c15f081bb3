"""Exception types shared across the package."""


class Infeasible(Exception):
    """A closed-form update or subproblem has an empty feasible set.

    ``constraint`` names the violated requirement (e.g. ``"secondary_qos"``).
    """

    def __init__(self, constraint: str, message: str = ""):
        self.constraint = constraint
        super().__init__(message or constraint)


class SolverFailure(Exception):
    """The PSD-cone solver did not converge to the required accuracy."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class ConfigError(Exception):
    """Invalid scenario configuration; ``errors`` lists field paths."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
