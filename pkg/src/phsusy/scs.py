"""Displacement operators, the two supercoherent-state families and their checks.

States are Grassmann elements whose coefficients are column vectors of the
truncated Fock space. Kets in the occupied phermion sector carry odd parity,
so ``-xi |alpha,1>`` is stored as ``+|alpha,1>`` at monomial ``xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
from scipy.special import gammainc

from . import grassmann as gr
from .errors import AmplitudeError, ConsistencyError, QuadratureError
from .fock import SuperSpace
from .grassmann import ONE, XI, XIS, GrassmannElement

TAIL_LIMIT = 1e-14
CROSS_TOL = 1e-10
BINORM_TOL = 1e-8
IDENTITY_TOL = 1e-6


class Family(str, Enum):
    PSI = "psi_family"
    PHI = "phi_family"


def glauber_tail(alpha: complex, n_max: int) -> float:
    """Probability weight ``e^{-|a|^2} sum_{n >= n_max} |a|^{2n}/n!`` lost to truncation."""
    x = abs(alpha) ** 2
    if x == 0.0:
        return 0.0
    return float(gammainc(n_max, x))


@dataclass(frozen=True)
class CoherentAmplitude:
    """Boson displacement amplitude admitted by the truncation policy."""

    alpha: complex
    n_max: int

    def __post_init__(self):
        tail = glauber_tail(self.alpha, self.n_max)
        if not tail < TAIL_LIMIT:
            raise AmplitudeError(
                f"|alpha| = {abs(self.alpha):g} needs more than n_max = {self.n_max} "
                f"levels (Glauber tail {tail:.3e} >= {TAIL_LIMIT:g})"
            )

    @property
    def tail(self) -> float:
        return glauber_tail(self.alpha, self.n_max)


def _amplitude(s: SuperSpace, alpha, check: bool) -> complex:
    if isinstance(alpha, CoherentAmplitude):
        if alpha.n_max != s.n_max:
            raise AmplitudeError(f"amplitude validated for n_max={alpha.n_max}, space has {s.n_max}")
        return alpha.alpha
    if check:
        CoherentAmplitude(complex(alpha), s.n_max)
    return complex(alpha)


def _as_complex(alpha) -> complex:
    return alpha.alpha if isinstance(alpha, CoherentAmplitude) else complex(alpha)


def glauber_weights(alpha: complex, n_max: int) -> np.ndarray:
    """``e^{-|a|^2/2} a^n / sqrt(n!)`` for ``n < n_max``, by recurrence."""
    w = np.empty(n_max, dtype=complex)
    w[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, n_max):
        w[n] = w[n - 1] * alpha / math.sqrt(n)
    return w


def _family_basis(s: SuperSpace, family: Family) -> np.ndarray:
    return s.psi if Family(family) is Family.PSI else s.phi


def glauber_component(s: SuperSpace, alpha, eps: int, family=Family.PSI, check: bool = True):
    """``|alpha, eps>`` (psi family) or its tilded partner (phi family), as a column."""
    a = _amplitude(s, alpha, check)
    basis = _family_basis(s, family)[:, eps::2]
    return (basis @ glauber_weights(a, s.n_max)).reshape(-1, 1)


def _lowering_raising(s: SuperSpace, family: Family):
    if Family(family) is Family.PSI:
        return s.B, s.B_sharp
    return s.B_tilde, s.B_dag_dual


def _even(c):
    return GrassmannElement.term(ONE, c, 0)


def _odd(c):
    return GrassmannElement.term(ONE, c, 1)


XI_E = gr.generator(XI)
XIS_E = gr.generator(XIS)
# -1/2 xi* xi, canonicalized by the product rule
_HALF_PAIR = gr.gmul(XIS_E, XI_E) * (-0.5)


def displacement(s: SuperSpace, alpha, family=Family.PSI) -> GrassmannElement:
    """Factored displacement
    ``e^{-xi* xi/2 - |a|^2/2} e^{a a'} e^{-xi R} e^{-a* a} e^{-xi* L}``
    with ``(L, R) = (B, B#)`` or ``(B~, B+)`` for the dual family.
    """
    a = _as_complex(alpha)
    low, rai = _lowering_raising(s, family)
    factors = [
        gr.gexp_even(_HALF_PAIR + (-abs(a) ** 2 / 2)),
        _even(scipy.linalg.expm(a * s.a_dag)),
        gr.gexp_even(-gr.gmul(XI_E, _odd(rai))),
        _even(scipy.linalg.expm(-a.conjugate() * s.a)),
        gr.gexp_even(-gr.gmul(XIS_E, _odd(low))),
    ]
    out = factors[0]
    for f in factors[1:]:
        out = gr.gmul(out, f)
    return out


def ground_state(s: SuperSpace, family=Family.PSI) -> GrassmannElement:
    return _even(_family_basis(s, family)[:, :1].astype(complex))


@dataclass(frozen=True, eq=False)
class SuperCoherentState:
    family: Family
    alpha: complex
    state: GrassmannElement
    tail: float
    # closed form versus displacement orbit
    orbit_residual: float

    def component(self, monomial: str):
        return self.state.component(monomial, None)


def closed_form(s: SuperSpace, alpha, family=Family.PSI, check: bool = True) -> GrassmannElement:
    """``e^{-xi* xi/2} (|alpha,0> - xi |alpha,1>)`` built in the graded algebra."""
    g0 = glauber_component(s, alpha, 0, family, check)
    g1 = glauber_component(s, alpha, 1, family, check)
    body = _even(g0) - gr.gmul(XI_E, _odd(g1))
    return gr.gmul(gr.gexp_even(_HALF_PAIR), body)


def build_scs(s: SuperSpace, alpha, family=Family.PSI) -> SuperCoherentState:
    a = _amplitude(s, alpha, True)
    fam = Family(family)
    state = closed_form(s, a, fam)
    orbit = gr.gmul(displacement(s, a, fam), ground_state(s, fam))
    resid = state.residual(orbit)
    if resid > CROSS_TOL:
        raise ConsistencyError(f"closed-form SCS and displacement orbit differ by {resid:.3e}", resid)
    return SuperCoherentState(fam, a, state, glauber_tail(a, s.n_max), resid)


def structure_report(x: SuperCoherentState, tol: float = 1e-12) -> dict:
    """Monomials carrying a nonzero state, with the largest entry of each."""
    out = {}
    for m in gr.MONOMIALS:
        c = x.component(m)
        norm = 0.0 if c is None else float(np.max(np.abs(c)))
        out[m] = norm
    return {k: v for k, v in out.items() if v > tol}


def eigenrelations(s: SuperSpace, x: SuperCoherentState) -> dict:
    """Residuals of ``a|.> = alpha|.>`` and ``L|.> = xi|.>`` for the family's lowering L."""
    low, _ = _lowering_raising(s, x.family)
    boson = gr.gmul(_even(s.a), x.state).residual(x.state * x.alpha)
    fermion = gr.gmul(_odd(low), x.state).residual(gr.gmul(XI_E, x.state))
    name = "B" if x.family is Family.PSI else "B~"
    return {"a": boson, name: fermion}


def inner(bra_of: SuperCoherentState, ket: SuperCoherentState) -> GrassmannElement:
    """Graded inner product ``<bra_of | ket>`` (a scalar-valued Grassmann element)."""
    return gr.gmul(gr.adjoint(bra_of.state), ket.state)


def bi_normalization(x: SuperCoherentState, y: SuperCoherentState):
    """``(<~alpha,xi|alpha,xi>, |that - 1|)`` for a psi state ``x`` and phi state ``y``."""
    if x.alpha != y.alpha:
        raise ValueError(f"amplitudes differ: {x.alpha!r} vs {y.alpha!r}")
    if x.family is not Family.PSI or y.family is not Family.PHI:
        raise ValueError("expected a psi-family ket and a phi-family bra")
    value = inner(y, x)
    return value, value.residual(GrassmannElement.scalar(1))


def same_family_overlap(x: SuperCoherentState):
    """``<alpha,xi|alpha,xi>`` and its distance from 1 (reported only)."""
    value = inner(x, x)
    return value, value.residual(GrassmannElement.scalar(1))


def guard_levels(n_max: int, alpha: complex) -> int:
    """Boson levels kept when comparing ``D#D`` with the identity.

    Displacement couples level n to levels within a few ``sqrt(n) |alpha|``;
    the cut ``(sqrt(n_max) - |alpha| - 1.5)**2`` keeps the truncation wall out
    of reach at double precision.
    """
    keep = (math.sqrt(n_max) - abs(alpha) - 1.5) ** 2
    return max(1, int(math.floor(keep)))


def pseudo_unitarity_residual(s: SuperSpace, alpha, family=Family.PSI):
    """``(max|D#D - 1|, max|DD# - 1|, keep)`` on boson levels ``n < keep``."""
    fam = Family(family)
    d = displacement(s, alpha, fam)
    # the dual family lives on H' whose metric is eta^-1
    eta, eta_inv = (s.eta, s.eta_inv) if fam is Family.PSI else (s.eta_inv, s.eta)
    dsharp = gr.pseudo_adjoint(d, eta, eta_inv)
    keep = guard_levels(s.n_max, _as_complex(alpha))
    idx = s.lower_block(keep)
    unit = GrassmannElement.scalar(np.eye(s.dim))

    def worst(prod):
        diff = prod - unit
        return max(
            (float(np.max(np.abs(np.asarray(c)[np.ix_(idx, idx)]))) for c, _ in diff.terms.values()),
            default=0.0,
        )

    return worst(gr.gmul(dsharp, d)), worst(gr.gmul(d, dsharp)), keep


@dataclass(frozen=True)
class QuadratureSpec:
    R: float = 6.0
    nr: int = 80
    ntheta: int = 64

    def __post_init__(self):
        if not (self.R > 0 and self.nr >= 1 and self.ntheta >= 1):
            raise ValueError(f"invalid quadrature {self}")

    def doubled(self) -> "QuadratureSpec":
        return QuadratureSpec(self.R, 2 * self.nr, 2 * self.ntheta)

    def nodes(self):
        """Complex nodes and weights for ``int d^2 alpha / pi`` over ``|alpha| <= R``."""
        x, w = np.polynomial.legendre.leggauss(self.nr)
        r = self.R * (x + 1) / 2
        wr = w * self.R / 2 * 2 * r
        th = 2 * np.pi * np.arange(self.ntheta) / self.ntheta
        alphas = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
        weights = np.repeat(wr / self.ntheta, self.ntheta)
        return alphas, weights


@dataclass(frozen=True)
class IdentityResult:
    residual_cross: float
    residual_same: float
    residual_cross_doubled: float | None
    relative_change: float | None
    quad: QuadratureSpec


def _stacked_state(s: SuperSpace, alphas, scale, family: Family) -> GrassmannElement:
    """SCS over all nodes at once: coefficient columns are indexed by node."""
    basis = _family_basis(s, family)
    n = np.arange(s.n_max)
    logfact = np.array([math.lgamma(k + 1) for k in n])
    with np.errstate(divide="ignore", invalid="ignore"):
        mag = np.abs(alphas)[None, :]
        amp = np.where(
            mag > 0,
            np.exp(n[:, None] * np.log(np.where(mag > 0, mag, 1.0)) - mag**2 / 2 - logfact[:, None] / 2),
            (n[:, None] == 0).astype(float),
        ) * np.exp(1j * n[:, None] * np.angle(alphas)[None, :])
    amp = amp * scale[None, :]
    g0 = basis[:, 0::2] @ amp
    g1 = basis[:, 1::2] @ amp
    body = _even(g0) - gr.gmul(XI_E, _odd(g1))
    return gr.gmul(gr.gexp_even(_HALF_PAIR), body)


def _identity_residuals(s: SuperSpace, quad: QuadratureSpec):
    alphas, weights = quad.nodes()
    ones = np.ones_like(weights)
    ket = _stacked_state(s, alphas, weights, Family.PSI)
    cross_bra = gr.adjoint(_stacked_state(s, alphas, ones, Family.PHI))
    same_bra = gr.adjoint(_stacked_state(s, alphas, ones, Family.PSI))
    eye = np.eye(s.dim)
    cross = gr.berezin(gr.gmul(ket, cross_bra))
    same = gr.berezin(gr.gmul(ket, same_bra))
    return float(np.max(np.abs(cross - eye))), float(np.max(np.abs(same - eye)))


def resolution_of_identity(
    s: SuperSpace, quad: QuadratureSpec = QuadratureSpec(), check_convergence: bool = True
) -> IdentityResult:
    """Berezin-integrated ``int |alpha,xi><~alpha,xi| dmu`` against the identity.

    Each node's ket carries its quadrature weight, so the node sum is the
    operator product of the stacked ket and bra coefficients. ``residual_same``
    repeats the integral with the psi-family bra.
    """
    cross, same = _identity_residuals(s, quad)
    if not check_convergence:
        return IdentityResult(cross, same, None, None, quad)
    cross2, _ = _identity_residuals(s, quad.doubled())
    change = abs(cross2 - cross)
    rel = change / cross if cross > 0 else (0.0 if change == 0 else math.inf)
    if rel >= 0.1 and change > 10 * IDENTITY_TOL:
        raise QuadratureError(
            f"node doubling moved residual_cross from {cross:.3e} to {cross2:.3e}"
        )
    return IdentityResult(cross, same, cross2, rel, quad)
