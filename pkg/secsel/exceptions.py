"""
Error types shared by the controllers and the command line.

Each error carries a short machine-readable ``code`` and the process
``exit_code`` the CLI returns for it, much like an HTTP error carries a
status code and a detail message.
"""


class SecselError(Exception):
    """Base class for every error the library raises on purpose."""

    code = "runtime-error"
    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return self.detail


class InvalidArgumentError(SecselError, ValueError):
    """An argument is outside the documented domain of an operation."""

    code = "invalid-argument"
    exit_code = 1


class GraphDisconnectedError(SecselError):
    """The symmetrized neighbor graph has more than one connected component."""

    code = "graph-disconnected"

    def __init__(self, components: int, k_neighbors: int):
        super().__init__(
            f"k-NN graph with k={k_neighbors} has {components} connected components; "
            "increase k_neighbors"
        )
        self.components = components


class BudgetInfeasibleError(SecselError):
    """The greedy cover at the upper end of the search range is still too large."""

    code = "budget-infeasible-in-range"

    def __init__(self, budget: int, lipschitz: float, cover_size: int):
        super().__init__(
            f"greedy cover at L={lipschitz:g} uses {cover_size} sensors, budget is {budget}"
        )
        self.cover_size = cover_size


class UndefinedVarianceError(SecselError):
    """R² is undefined because the reference values have zero total variance."""

    code = "undefined-variance"
