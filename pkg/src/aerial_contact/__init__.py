"""Planar contact simulation and control for a quadrotor-mounted RRR arm."""

__version__ = "0.1.0"
