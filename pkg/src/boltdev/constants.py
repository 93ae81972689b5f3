"""Dimensionless material constants and dimensional conversion factors.

All downstream formulas read from a single immutable ``ScaledConstants``
record.  The canonical silicon values are shipped as data (they are the
standard scaled parameter set for silicon with Kane dispersion at 300 K);
every field can be overridden for sensitivity studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

__all__ = [
    "ScaledConstants",
    "ConversionFactors",
    "default_silicon",
    "default_conversions",
    "phonon_occupation",
]

# Relative tolerance for the discrete detailed-balance identity
# c_minus * (n_q + 1) == c_plus * n_q that the table values must satisfy.
DETAILED_BALANCE_RTOL = 1e-3


def phonon_occupation(gamma: float) -> float:
    """Bose occupation number 1/(e^gamma - 1) of the phonon mode.

    ``gamma`` is the phonon energy in units of k_B T_L and must be positive.
    """
    if gamma <= 0.0:
        raise ValueError(f"phonon energy must be positive, got {gamma}")
    return 1.0 / math.expm1(gamma)


@dataclass(frozen=True)
class ScaledConstants:
    """Dimensionless parameter set of the transformed transport system.

    c0, c_plus, c_minus are the elastic / emission / absorption collision
    strengths; c_x scales free streaming, c_k the field force term, c_p the
    Poisson coupling and c_v the field-from-potential factor.  gamma is the
    phonon energy jump in units of k_B T_L and alpha_k the non-parabolicity
    of the Kane dispersion.
    """

    c0: float = 0.26531
    c_plus: float = 0.50705
    c_minus: float = 0.04432
    c_x: float = 0.16857
    c_k: float = 0.32606
    c_p: float = 1830349.0
    c_v: float = 10.0
    gamma: float = 2.43723
    alpha_k: float = 0.01292
    eps_r_si: float = 11.7
    eps_r_ox: float = 3.9

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and v > 0.0 and math.isfinite(v)):
                raise ValueError(f"constant {f.name} must be strictly positive, got {v!r}")
        res = self.detailed_balance_residual()
        if res > DETAILED_BALANCE_RTOL:
            raise ValueError(
                f"collision strengths violate detailed balance: residual {res:.3e} "
                f"exceeds {DETAILED_BALANCE_RTOL:.0e}"
            )

    @property
    def n_q(self) -> float:
        """Phonon occupation number at the table's gamma."""
        return phonon_occupation(self.gamma)

    def detailed_balance_residual(self) -> float:
        """Relative mismatch |c_minus (n_q+1) - c_plus n_q| / (c_plus n_q)."""
        nq = self.n_q
        return abs(self.c_minus * (nq + 1.0) - self.c_plus * nq) / (self.c_plus * nq)

    def balanced(self) -> "ScaledConstants":
        """Copy with c_minus snapped to c_plus * e^-gamma (exact balance)."""
        return replace(self, c_minus=self.c_plus * math.exp(-self.gamma))

    def header_items(self) -> list[tuple[str, float]]:
        """(name, value) pairs for output-file provenance headers."""
        return [(f.name, getattr(self, f.name)) for f in fields(self)]


@dataclass(frozen=True)
class ConversionFactors:
    """Factors mapping dimensionless outputs back to physical units.

    velocity_factor is length_scale / time_scale.  The velocity moment has
    no explicit unit factor of its own, so this is the scale that puts
    channel velocities at the 1e7 cm/s magnitudes seen in device data.
    """

    density_factor: float = 1.0115e26  # dimensionless density -> m^-3
    energy_factor: float = 0.025849  # dimensionless energy -> eV
    length_scale: float = 1.0e-6  # m
    time_scale: float = 1.0e-12  # s
    voltage_scale: float = 1.0  # V

    @property
    def velocity_factor(self) -> float:
        """dimensionless velocity moment -> m/s."""
        return self.length_scale / self.time_scale

    @property
    def efield_factor_kv_cm(self) -> float:
        """dimensionless field -> kV/cm (E* = 0.1 V* / l* = 1 kV/cm)."""
        return 0.1 * self.voltage_scale / self.length_scale * 1e-5

    def density_cm3(self, rho: float) -> float:
        return rho * self.density_factor * 1e-6

    def velocity_cm_s(self, u: float) -> float:
        return u * self.velocity_factor * 1e2

    def energy_ev(self, w: float) -> float:
        return w * self.energy_factor

    def momentum_cm2_s(self, p: float) -> float:
        """dimensionless rho*u -> cm^-2 s^-1."""
        return p * self.density_factor * self.velocity_factor * 1e-4


def default_silicon(**overrides: float) -> ScaledConstants:
    """The canonical silicon parameter set, optionally overridden per field."""
    return ScaledConstants(**overrides)


def default_conversions() -> ConversionFactors:
    return ConversionFactors()
