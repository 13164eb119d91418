"""Exception hierarchy shared by every module."""

from __future__ import annotations


class IotNetError(Exception):
    """Base class for all library errors."""


class ParseError(IotNetError, ValueError):
    """Malformed input table. Carries the offending row/column when known."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class RegistryError(IotNetError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class EmptyNetworkError(IotNetError, ValueError):
    pass


class NodeLookupError(IotNetError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ParameterError(IotNetError, ValueError):
    pass


class AssortativityError(IotNetError, ValueError):
    """Assortativity is undefined on the given network."""

    def __init__(self, message: str, node: str | None = None):
        self.node = node
        super().__init__(message)


class ConvergenceError(IotNetError, RuntimeError):
    def __init__(self, message: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{message} after {iterations} iterations (residual {residual!r})")


class DegenerateError(IotNetError, ValueError):
    pass


class PartitionError(IotNetError, ValueError):
    pass
