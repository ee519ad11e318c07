"""perfloc: rank the nodes of a small imperative program by how likely each
one is to harbour a performance improvement."""

__version__ = "0.1.0"
