"""
Exception hierarchy shared by all spike-regions modules
"""


class SpikeRegionsError(Exception):
    """Base class for every error raised by the library"""


class ValidationError(SpikeRegionsError, ValueError):
    """Parameter or invariant violation (bad leak, threshold, shapes, ranges)"""


class NetworkFileError(SpikeRegionsError, OSError):
    """Malformed, incomplete or incompatible network / step-spec file"""


class CoincidenceError(SpikeRegionsError):
    """A translated hyperplane family hit an existing intersection point"""
