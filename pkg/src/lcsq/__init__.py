"""Linear constraint systems, colored graphs, solution groups, and
magic-unitary certificates."""

__version__ = "0.1.0"
