"""Cryptanalysis workbench for a set of olympiad-style constructions and attacks."""

__version__ = "0.1.0"
