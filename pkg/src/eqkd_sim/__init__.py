"""Entangled-QKD bit-error-rate and secret-key-rate simulator.

Decomposes the light emitted by a down-conversion source (CW, pulsed, or
anything in between) into pair-number manifolds, mode-occupation partitions,
and polarization splits, then folds detector imperfections into a bit-error
rate and a secret-key yield for a physical link scenario.
"""

__version__ = "0.1.0"
