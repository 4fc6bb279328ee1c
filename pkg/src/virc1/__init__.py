"""Exact characters, decompositions and fusion rules for the c=1 Virasoro algebra,
cross-checked against a truncated Fock-space model of the level-1 su(2) currents."""

from .characters import (
    DomainError,
    FusionResult,
    MixtureWeights,
    NotDecomposable,
    SectorLabel,
    cartan_slice,
    classify,
    decompose,
    fuse,
    mixture_weights,
    product_state_energy,
    twisted_char,
    vacuum_affine_char,
    virasoro_char,
)
from .qseries import (
    BiSeries,
    CharSeries,
    ExponentOutOfRange,
    IncompatibleOffsets,
    QSeries,
    WindowExceeded,
    char_combine,
    coefficient_at,
    partition_series,
    series_add,
    series_mul,
)

__version__ = "0.1.0"
