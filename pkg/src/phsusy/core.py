"""Spin-1/2 su(2) layer: Hamiltonian, metric root and Hermitian equivalent.

All matrices are 2x2 numpy arrays in the basis ordered (J3 = +1/2, J3 = -1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DegenerateError, DomainError, InvalidParams

EXACT_TOL = 1e-12
ROUTE_TOL = 1e-10

_JP = np.array([[0.0, 1.0], [0.0, 0.0]])
_JM = np.array([[0.0, 0.0], [1.0, 0.0]])
_J3 = np.array([[0.5, 0.0], [0.0, -0.5]])
for _m in (_JP, _JM, _J3):
    _m.setflags(write=False)


def su2_generators():
    """Return ``(J_plus, J_minus, J_3)`` in the spin-1/2 representation."""
    return _JP.copy(), _JM.copy(), _J3.copy()


def commutator(x, y):
    return x @ y - y @ x


def anticommutator(x, y):
    return x @ y + y @ x


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of ``H = omega*J3 + alpha*J- + beta*J+``.

    ``alpha == beta`` makes H Hermitian and is only accepted when
    ``hermitian_limit`` is set.
    """

    omega: float
    alpha: float
    beta: float
    hermitian_limit: bool = False

    def __post_init__(self):
        for name in ("omega", "alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParams(f"{name} must be finite, got {value!r}")
        if self.alpha == self.beta and not self.hermitian_limit:
            raise InvalidParams(
                "alpha == beta gives a Hermitian H; pass hermitian_limit=True"
            )
        if self.omega**2 + 4.0 * self.alpha * self.beta <= 0.0:
            raise InvalidParams(
                "real-spectrum condition violated: omega^2 + 4*alpha*beta = "
                f"{self.omega**2 + 4.0 * self.alpha * self.beta:g} <= 0"
            )

    @property
    def is_hermitian(self):
        return self.alpha == self.beta


@dataclass(frozen=True)
class MetricData:
    z: float
    epsilon: float
    theta: float
    rho: np.ndarray
    rho_inv: np.ndarray
    # entrywise gap between the cosh/sinh form and the power form
    power_form_residual: float

    @property
    def eta(self):
        """Positive metric ``rho**2``."""
        return metric_root(self.z, 2.0 * self.epsilon)

    @property
    def eta_inv(self):
        return metric_root(self.z, -2.0 * self.epsilon)


@dataclass(frozen=True)
class DerivedScalars:
    Omega: float
    delta: float
    lam: float
    tau: float


def omega_cap(p: ModelParams) -> float:
    return math.sqrt(p.omega**2 + 4.0 * p.alpha * p.beta)


def build_H(p: ModelParams) -> np.ndarray:
    return p.omega * _J3 + p.alpha * _JM + p.beta * _JP


def _metric_denominator(p, z):
    return p.alpha + p.beta - p.omega * z


def arctanh_argument(p: ModelParams, z: float) -> float:
    """Argument of the arctanh linking epsilon to z."""
    if p.is_hermitian:
        return 0.0
    denom = _metric_denominator(p, z)
    if denom == 0.0:
        raise DegenerateError(f"alpha + beta - omega*z vanishes at z={z!r}")
    return (p.alpha - p.beta) * math.sqrt(1.0 + z * z) / denom


def epsilon_of(p: ModelParams, z: float) -> float:
    x = arctanh_argument(p, z)
    if abs(x) >= 1.0:
        raise DomainError(
            f"arctanh argument {x:.17g} outside (-1, 1) at z={z!r}", argument=x
        )
    return math.atanh(x) / (2.0 * math.sqrt(1.0 + z * z))


def metric_root(z: float, epsilon: float) -> np.ndarray:
    """``exp(epsilon*(2J3 + z(J- + J+)))`` in closed cosh/sinh form."""
    s = math.sqrt(1.0 + z * z)
    theta = epsilon * s
    c = math.cosh(theta)
    # epsilon*sinh(theta)/theta, finite at theta = 0
    k = math.sinh(theta) / s
    return np.array([[c + k, z * k], [z * k, c - k]])


def metric_root_power_form(p: ModelParams, z: float) -> np.ndarray:
    """Same operator written as ``base**(K)`` with ``K = (2J3 + z(J-+J+))/(4s)``."""
    s = math.sqrt(1.0 + z * z)
    if p.is_hermitian:
        return np.eye(2)
    denom = _metric_denominator(p, z)
    base = (denom + (p.alpha - p.beta) * s) / (denom - (p.alpha - p.beta) * s)
    if not base > 0.0:
        raise DomainError(f"power-form base {base!r} is not positive", argument=base)
    generator = (2.0 * _J3 + z * (_JM + _JP)) / (4.0 * s)
    vals, vecs = np.linalg.eigh(generator)
    return (vecs * base**vals) @ vecs.T


def build_rho(p: ModelParams, z: float) -> MetricData:
    eps = epsilon_of(p, z)
    rho = metric_root(z, eps)
    rho_inv = metric_root(z, -eps)
    resid = float(np.max(np.abs(rho - metric_root_power_form(p, z))))
    if resid > EXACT_TOL * max(1.0, float(np.max(np.abs(rho)))):
        raise ConsistencyError(
            f"cosh/sinh and power forms of rho differ by {resid:.3e}", resid
        )
    return MetricData(
        z=z,
        epsilon=eps,
        theta=eps * math.sqrt(1.0 + z * z),
        rho=rho,
        rho_inv=rho_inv,
        power_form_residual=resid,
    )


def closed_form_delta_lambda(p: ModelParams, z: float):
    """``(delta, lambda)`` from the explicit formulas.

    The radicand is taken with its principal root; the prefactor
    ``alpha + beta - omega*z`` keeps its sign.
    """
    if p.is_hermitian:
        return p.omega, p.alpha
    denom = _metric_denominator(p, z)
    zz = 1.0 + z * z
    radicand = 1.0 - arctanh_argument(p, z) ** 2
    if radicand < 0.0:
        raise DomainError(f"negative radicand {radicand!r} at z={z!r}", argument=radicand)
    root = denom * math.sqrt(radicand)
    apb = p.alpha + p.beta
    delta = (p.omega + apb * z - z * root) / zz
    lam = (p.omega * z + apb * z * z + root) / (2.0 * zz)
    return delta, lam


def hermitian_from_scalars(delta: float, lam: float) -> np.ndarray:
    return delta * _J3 + lam * (_JM + _JP)


def build_h(p: ModelParams, z: float, metric: MetricData | None = None):
    """Hermitian equivalent ``h = rho H rho^-1`` and its scalars.

    Both the similarity route and the closed form are evaluated; a
    disagreement above ``ROUTE_TOL`` raises ``ConsistencyError``.
    """
    m = metric if metric is not None else build_rho(p, z)
    h = m.rho @ build_H(p) @ m.rho_inv
    delta, lam = closed_form_delta_lambda(p, z)
    resid = float(np.max(np.abs(h - hermitian_from_scalars(delta, lam))))
    if resid > ROUTE_TOL:
        raise ConsistencyError(
            f"similarity and closed-form h differ by {resid:.3e} at z={z!r}", resid
        )
    big = omega_cap(p)
    tau = (p.omega + (p.alpha + p.beta) * z) / big
    return h, DerivedScalars(Omega=big, delta=delta, lam=lam, tau=tau)


def hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))
