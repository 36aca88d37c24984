"""Characterization metrics and classical detectors for machine-generated text."""

__version__ = "0.1.0"
