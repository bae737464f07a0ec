"""Fermion, phermion and dual-phermion ladder pairs on the spin-1/2 space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import core
from .core import EXACT_TOL, ROUTE_TOL, ModelParams
from .errors import ConsistencyError


class LadderKind(str, Enum):
    FERMION = "fermion_b"
    PHERMION = "phermion_B"
    DUAL = "dual_Btilde"


@dataclass(frozen=True)
class LadderPair:
    lower: np.ndarray
    raising: np.ndarray
    kind: LadderKind

    def anticommutator_residual(self) -> float:
        ac = core.anticommutator(self.lower, self.raising)
        return float(np.max(np.abs(ac - np.eye(2))))

    def nilpotency_residual(self) -> float:
        return float(
            max(
                np.max(np.abs(self.lower @ self.lower)),
                np.max(np.abs(self.raising @ self.raising)),
            )
        )


@dataclass(frozen=True)
class CoefficientSet:
    mu1: float
    mu2: float
    mu3: float
    nu1: float
    nu2: float
    nu3: float
    tau: float

    def lowering(self):
        return from_su2_coefficients(self.mu1, self.mu2, self.mu3)

    def raising(self):
        return from_su2_coefficients(self.nu1, self.nu2, self.nu3)


def from_su2_coefficients(c_minus, c_plus, c_3):
    """``c_minus*J- + c_plus*J+ + 2*c_3*J3``."""
    jp, jm, j3 = core.su2_generators()
    return c_minus * jm + c_plus * jp + 2.0 * c_3 * j3


def su2_coefficients(m: np.ndarray):
    """Inverse of :func:`from_su2_coefficients` for a traceless 2x2 matrix."""
    tr = m[0, 0] + m[1, 1]
    if abs(tr) > EXACT_TOL:
        raise ValueError(f"matrix is not traceless (trace {tr!r})")
    return m[1, 0], m[0, 1], 0.5 * (m[0, 0] - m[1, 1])


def fermion_lowering(delta: float, lam: float, big: float) -> np.ndarray:
    return from_su2_coefficients(
        (delta + big) / (2.0 * big), (delta - big) / (2.0 * big), -lam / big
    )


def fermion_raising(delta: float, lam: float, big: float) -> np.ndarray:
    return from_su2_coefficients(
        (delta - big) / (2.0 * big), (delta + big) / (2.0 * big), -lam / big
    )


def build_b(p: ModelParams, z: float) -> LadderPair:
    h, sc = core.build_h(p, z)
    b = fermion_lowering(sc.delta, sc.lam, sc.Omega)
    bd = fermion_raising(sc.delta, sc.lam, sc.Omega)
    resid = float(np.max(np.abs(sc.Omega * (bd @ b - 0.5 * np.eye(2)) - h)))
    if resid > ROUTE_TOL:
        raise ConsistencyError(f"Omega(b'b - 1/2) differs from h by {resid:.3e}", resid)
    return LadderPair(b, bd, LadderKind.FERMION)


def build_B(p: ModelParams, z: float) -> LadderPair:
    """Phermion pair obtained by the inverse similarity ``rho^-1 (.) rho``."""
    m = core.build_rho(p, z)
    b = build_b(p, z)
    return LadderPair(
        m.rho_inv @ b.lower @ m.rho, m.rho_inv @ b.raising @ m.rho, LadderKind.PHERMION
    )


def build_dual(p: ModelParams, z: float) -> LadderPair:
    """Dual pair ``(rho b rho^-1, rho b' rho^-1)`` attached to ``H'``."""
    m = core.build_rho(p, z)
    b = build_b(p, z)
    return LadderPair(
        m.rho @ b.lower @ m.rho_inv, m.rho @ b.raising @ m.rho_inv, LadderKind.DUAL
    )


def mu_nu(p: ModelParams, z: float) -> CoefficientSet:
    m = core.build_rho(p, z)
    _, sc = core.build_h(p, z, metric=m)
    th, big, tau = m.theta, sc.Omega, sc.tau
    ch = math.cosh(th)
    # epsilon*sinh(theta)/theta
    es = math.sinh(th) / math.sqrt(1.0 + z * z)
    zz = z * z
    mu1 = (sc.delta + big) / (2 * big) + ((1 + tau + zz) * es + (1 + tau) * ch) * es
    mu2 = (sc.delta - big) / (2 * big) - ((1 - tau + zz) * es - (1 - tau) * ch) * es
    mu3 = -sc.lam / big - (tau * es + ch) * z * es
    nu1 = (sc.delta - big) / (2 * big) - ((1 - tau + zz) * es + (1 - tau) * ch) * es
    nu2 = (sc.delta + big) / (2 * big) + ((1 + tau + zz) * es - (1 + tau) * ch) * es
    nu3 = -sc.lam / big - (tau * es - ch) * z * es
    coeffs = CoefficientSet(mu1, mu2, mu3, nu1, nu2, nu3, tau)

    pair = build_B(p, z)
    resid = max(
        float(np.max(np.abs(coeffs.lowering() - pair.lower))),
        float(np.max(np.abs(coeffs.raising() - pair.raising))),
    )
    if resid > ROUTE_TOL:
        raise ConsistencyError(
            f"mu/nu reconstruction differs from rho^-1 b rho by {resid:.3e}", resid
        )
    return coeffs
