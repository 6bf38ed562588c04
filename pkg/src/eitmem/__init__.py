"""eitmem: EIT light-storage simulator and analysis toolkit for OAM qubits."""

from .engine import (
    MemoryResult,
    SolverGrid,
    StorageProtocol,
    Waveform,
    simulate_storage,
    store_qubit,
    transmission_transfer,
    truncated_gaussian,
)
from .modes import EnsembleConfig, LGMode, effective_od, lg_intensity, mode_waist
from .qubit import (
    DensityMatrix2,
    QubitKet,
    StokesVector,
    density_from_stokes,
    fidelity,
    ket_from_coeffs,
    project_physical,
    stokes_from_density,
)

__version__ = "0.1.0"
