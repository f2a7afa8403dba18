"""Unit system connecting market quantities to the mechanical analogy.

The model treats relative price moves as lengths and traded volume as mass.
``return_to_length`` converts a price-return fraction into a length and
``volume_to_mass`` converts thousand-currency volume into a mass, so a
physical calibration (e.g. returns to angstrom, volume to electronvolt
scales) is a matter of picking the four factors.  The ``NATURAL`` preset
sets every factor to 1 and is the default everywhere.
"""

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    boltzmann: float = 1.0
    return_to_length: float = 1.0
    volume_to_mass: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "boltzmann", "return_to_length", "volume_to_mass"):
            value = getattr(self, name)
            if not value > 0.0:
                raise DomainError(f"unit factor {name} must be > 0, got {value}")


NATURAL = UnitSystem()
