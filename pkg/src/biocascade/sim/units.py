"""Concentration/count conversion for a well-mixed volume."""

from __future__ import annotations

# molecules in 1 uM x 1 um^3 (Avogadro's number x 1e-21)
MOLECULES_PER_UM_UM3 = 602.214


def concentration_to_count(c: float, volume: float = 1.0) -> int:
    """Molecule count for ``c`` uM in ``volume`` um^3."""
    if c < 0 or volume < 0:
        raise ValueError("concentration and volume must be >= 0")
    return int(round(c * volume * MOLECULES_PER_UM_UM3))


def count_to_concentration(n: int, volume: float = 1.0) -> float:
    if n < 0 or volume <= 0:
        raise ValueError("count must be >= 0 and volume > 0")
    return n / (volume * MOLECULES_PER_UM_UM3)


def bimolecular_constant(k: float, volume: float = 1.0) -> float:
    """Stochastic constant (1/s per molecule pair) for a macroscopic ``k`` in 1/(uM s)."""
    return k / (volume * MOLECULES_PER_UM_UM3)
