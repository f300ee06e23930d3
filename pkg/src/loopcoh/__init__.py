"""loopcoh: loop-space cohomology of polynomial algebras via bar constructions."""

__version__ = "0.1.0"

CONVENTION_VERSION = 1
