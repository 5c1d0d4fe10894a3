"""Desk-scale numerical checks of random-walk, stochastic-mechanics, Dirac,
Kerr-Newman and large-number cosmology relations around the Compton scale."""

__version__ = "0.1.0"
