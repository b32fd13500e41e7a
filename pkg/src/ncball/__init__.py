"""Noncommutative balls, their boundary spheres and glued doubles: exact symbolic
rewriting, truncated Fock-space representations and graph K-theory."""

__version__ = "0.1.0"
