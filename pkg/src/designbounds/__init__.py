"""Linear-programming energy bounds and certificates for spherical designs."""

__version__ = "0.1.0"
