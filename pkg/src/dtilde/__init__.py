"""Triangulations of twice-punctured polygons, affine D quivers and their
preprojective components, with three engines for intersection numbers."""

__version__ = "0.1.0"
