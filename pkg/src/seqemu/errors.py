class SeqemuError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(SeqemuError, ValueError):
    """Invalid parameters or scenario configuration."""


class UnsupportedSizeError(ConfigError):
    """A tile count the requested network cannot be built for."""


class TopologyError(SeqemuError):
    """A generated switch graph violates a structural invariant."""
