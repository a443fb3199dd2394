# common/errors.py
"""Exception hierarchy shared by every module. Solver statuses are not errors."""


class V2vcError(Exception):
    """Base class; the CLI turns any of these into a one-line reason and exit code 1."""


class ScenarioError(V2vcError):
    pass


class GenerationError(V2vcError):
    pass


class ModelError(V2vcError):
    pass


class CapExceededError(V2vcError):
    pass


class LoweringError(V2vcError):
    pass


class ReductionError(V2vcError):
    pass


class CnfParseError(V2vcError):
    pass
