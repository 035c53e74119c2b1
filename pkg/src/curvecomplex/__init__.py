"""Multicurves, Dehn twists and mapping class group orbits on triangulated surfaces."""

__version__ = "0.1.0"
