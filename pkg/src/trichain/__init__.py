"""trichain: simulation and calibration toolkit for a three-qubit chain of
weakly anharmonic oscillators with switchable next-nearest-neighbor coupling.

The chain couples two frequency-tunable outer qubits through a fixed middle
qubit of opposite-sign anharmonicity.  Virtual exchange through the middle
qubit produces a next-nearest-neighbor coupling whose excited-sector
component can be interfered away, turning the middle qubit's state into an
on/off switch and the native three-qubit gate into a controlled-iSWAP.
"""

from .config import RunConfig, parse_config, table1_config
from .device import DeviceParams, TABLE1, build_hamiltonian, logical_basis
from .open_system import NoiseParams
from .pulses import PulseSchedule, schedule_from_calibration

__all__ = [
    "RunConfig",
    "parse_config",
    "table1_config",
    "DeviceParams",
    "TABLE1",
    "build_hamiltonian",
    "logical_basis",
    "NoiseParams",
    "PulseSchedule",
    "schedule_from_calibration",
]

__version__ = "0.1.0"
