class CircrootsError(Exception):
    pass


class DomainError(CircrootsError, ValueError):
    pass


class InsufficientDataError(CircrootsError, ValueError):
    pass


class CertificationError(CircrootsError, ValueError):
    pass


class ResolutionError(CircrootsError, MemoryError):
    pass


class SizeError(CircrootsError, ValueError):
    pass


class NoRootsError(CircrootsError, ValueError):
    pass


class InputError(CircrootsError, ValueError):
    pass


class NumericalError(CircrootsError, ArithmeticError):
    pass


class UnsupportedError(CircrootsError, NotImplementedError):
    pass


class ParameterError(CircrootsError, ValueError):
    pass


class RangeError(CircrootsError, ValueError):
    pass


class ConfigError(CircrootsError, ValueError):
    pass


class PilotDataError(CircrootsError, FileNotFoundError):
    pass
