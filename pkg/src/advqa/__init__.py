"""Desk-scale toolkit for adversarial extractive-QA data work."""

__version__ = "0.1.0"
