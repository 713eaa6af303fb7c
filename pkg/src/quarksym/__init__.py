"""Exact and numerical toolkit for symbol correspondences on SU(3) coadjoint orbits."""

__version__ = "0.1.0"
