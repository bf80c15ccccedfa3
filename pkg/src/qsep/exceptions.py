class ConsistencyError(Exception):
    """Two independent computation paths disagreed beyond tolerance."""


class ConvergenceError(Exception):
    """The eigensolver hit its sweep cap before reaching the target norm."""
