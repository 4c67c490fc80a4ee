"""Ext charts over the subalgebra A(1) of the mod-2 Steenrod algebra,
Adams and Atiyah-Hirzebruch spectral sequences for the associated bordism
spectra, and the resulting SPT classification tables."""

__version__ = "0.1.0"
