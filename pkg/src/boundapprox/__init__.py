"""Decentralised boundary approximation for sensor networks.

Sensors are linked by their Delaunay triangulation; neighbouring sensors
whose readings differ by more than a threshold report the Voronoi segment
between them, and the union of those segments approximates the boundary of
the sensed phenomenon.
"""
__version__ = "0.1.0"
