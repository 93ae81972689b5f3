"""boltdev: deterministic kinetic transport solver for silicon devices.

Solves the coupled electron transport / electrostatics system in
transformed energy-angle phase space with a piecewise-linear Galerkin
discretization, upwind fluxes and a local DG elliptic solver, driving
n+-n-n+ diode and double-gate MOSFET simulations.
"""

__version__ = "0.1.0"

from .constants import ConversionFactors, ScaledConstants, default_silicon, phonon_occupation
from .mesh import Axis, PhaseGrid, build_axis, preset_diode_mesh, preset_mosfet_mesh
from .basis import DGField, project, read_checkpoint, write_checkpoint
from .device import DeviceSpec, initial_condition, preset_devices, device_mesh
from .stepper import RunState, Simulation, compute_dt

__all__ = [
    "__version__",
    "ConversionFactors",
    "ScaledConstants",
    "default_silicon",
    "phonon_occupation",
    "Axis",
    "PhaseGrid",
    "build_axis",
    "preset_diode_mesh",
    "preset_mosfet_mesh",
    "DGField",
    "project",
    "read_checkpoint",
    "write_checkpoint",
    "DeviceSpec",
    "initial_condition",
    "preset_devices",
    "device_mesh",
    "RunState",
    "Simulation",
    "compute_dt",
]
