"""Crowdsourced road-hazard reporting, verification, and map-export toolkit."""

__version__ = "0.1.0"
