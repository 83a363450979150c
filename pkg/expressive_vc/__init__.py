"""Expressive voice conversion: perturbation, prosody, fusion and training building blocks."""

__version__ = "0.1.0"
