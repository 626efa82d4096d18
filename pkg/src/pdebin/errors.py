"""Exception hierarchy. Each class maps onto one CLI exit code."""


class PdeBinError(Exception):
    exit_code = 1


class ParameterError(PdeBinError, ValueError):
    exit_code = 1


class ImageIOError(PdeBinError, OSError):
    exit_code = 2


class DegenerateDataError(PdeBinError, ValueError):
    exit_code = 3
