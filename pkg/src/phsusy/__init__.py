"""Pseudo-Hermitian su(2) phermions, supersymmetry and supercoherent states."""

from .core import ModelParams, build_h, build_H, build_rho
from .errors import (
    AmplitudeError,
    ConsistencyError,
    DegenerateError,
    DomainError,
    InvalidParams,
    ParityError,
    PHSusyError,
    QuadratureError,
)
from .fock import build_superspace
from .scs import Family, QuadratureSpec, build_scs, resolution_of_identity

__all__ = [
    "AmplitudeError",
    "ConsistencyError",
    "DegenerateError",
    "DomainError",
    "Family",
    "InvalidParams",
    "ModelParams",
    "PHSusyError",
    "ParityError",
    "QuadratureError",
    "QuadratureSpec",
    "build_H",
    "build_h",
    "build_rho",
    "build_scs",
    "build_superspace",
    "resolution_of_identity",
]
