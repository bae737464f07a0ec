"""Truncated boson x phermion Fock space.

Operators act on ``C^n_max (x) C^2`` with the boson factor first, so the
product-basis index is ``2*n + j`` with ``j`` the J3 index. Two-level
operators X are lifted as ``1_boson (x) X``; the boson ladder is the
hard-cutoff shift with ``a_dag |n_max - 1> = 0``.

The eigenbasis ``|n, eps>`` of ``h_s`` pairs the boson level with the
fermion occupation of ``b'b``; ``psi``/``phi`` store ``rho^-1 |n, eps>`` and
``rho |n, eps>`` as columns ``2*n + eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import core, phermion
from .core import EXACT_TOL, ROUTE_TOL, ModelParams
from .errors import ConsistencyError

MAX_DIM = 4096

# structural Z2 grading of the lifted operators
ODD_OPERATORS = frozenset({"B", "B_sharp", "B_tilde", "B_dag_dual", "Q", "Q_sharp"})


def index(n: int, eps: int) -> int:
    return 2 * n + eps


def boson_lowering(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max, dtype=float)), 1)


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class SuperSpace:
    params: ModelParams
    z: float
    n_max: int
    Omega: float
    rho2: np.ndarray
    rho2_inv: np.ndarray
    a: np.ndarray
    a_dag: np.ndarray
    B: np.ndarray
    B_sharp: np.ndarray
    B_tilde: np.ndarray
    B_dag_dual: np.ndarray
    b: np.ndarray
    b_dag: np.ndarray
    rho: np.ndarray
    rho_inv: np.ndarray
    eta: np.ndarray
    eta_inv: np.ndarray
    H_s: np.ndarray
    h_s: np.ndarray
    Q: np.ndarray
    Q_sharp: np.ndarray
    number: np.ndarray
    psi: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 2 * self.n_max

    def parity(self, name: str) -> int:
        return 1 if name in ODD_OPERATORS else 0

    def psi_state(self, n: int, eps: int) -> np.ndarray:
        return self.psi[:, index(n, eps)]

    def phi_state(self, n: int, eps: int) -> np.ndarray:
        return self.phi[:, index(n, eps)]

    def lower_block(self, keep: int) -> np.ndarray:
        """Indices of basis states with boson level ``n < keep``."""
        return np.arange(2 * keep)


def fermion_vacuum(b: np.ndarray) -> np.ndarray:
    """Unit vector spanning ``ker b`` (real, largest component positive)."""
    # b is rank one with b**2 = 0, so its kernel equals its column space
    col = b[:, np.argmax(np.linalg.norm(b, axis=0))]
    v = col / np.linalg.norm(col)
    return v if v[np.argmax(np.abs(v))] > 0 else -v


def occupation_basis(b: np.ndarray, b_dag: np.ndarray) -> np.ndarray:
    """Columns ``|0>, |1> = b' |0>`` of the fermion number basis."""
    f0 = fermion_vacuum(b)
    return np.column_stack([f0, b_dag @ f0])


def lift(x: np.ndarray, n_max: int) -> np.ndarray:
    return np.kron(np.eye(n_max), x)


def build_superspace(p: ModelParams, z: float, n_max: int) -> SuperSpace:
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    if 2 * n_max > MAX_DIM:
        raise ValueError(f"dimension {2 * n_max} exceeds the {MAX_DIM} guard")

    metric = core.build_rho(p, z)
    _, scalars = core.build_h(p, z, metric=metric)
    big = scalars.Omega
    ferm = phermion.build_b(p, z)
    ph = phermion.build_B(p, z)
    dual = phermion.build_dual(p, z)

    ab = boson_lowering(n_max)
    a = np.kron(ab, np.eye(2))
    a_dag = np.kron(ab.T, np.eye(2))
    B = lift(ph.lower, n_max)
    Bs = lift(ph.raising, n_max)
    rho = lift(metric.rho, n_max)
    rho_inv = lift(metric.rho_inv, n_max)
    n_b = a_dag @ a
    H_s = big * (n_b + Bs @ B)
    h_s = rho @ H_s @ rho_inv
    b = lift(ferm.lower, n_max)
    b_dag = lift(ferm.raising, n_max)
    number = b_dag @ b
    resid = float(np.max(np.abs(h_s - big * (n_b + number))))
    if resid > ROUTE_TOL:
        raise ConsistencyError(f"rho H_s rho^-1 differs from Omega(a'a + b'b) by {resid:.3e}", resid)
    pref = math.sqrt(2.0 * big)
    number_basis = np.kron(np.eye(n_max), occupation_basis(ferm.lower, ferm.raising))

    return SuperSpace(
        params=p,
        z=z,
        n_max=n_max,
        Omega=big,
        rho2=metric.eta,
        rho2_inv=metric.eta_inv,
        a=_frozen(a),
        a_dag=_frozen(a_dag),
        B=_frozen(B),
        B_sharp=_frozen(Bs),
        B_tilde=_frozen(lift(dual.lower, n_max)),
        B_dag_dual=_frozen(lift(dual.raising, n_max)),
        b=_frozen(b),
        b_dag=_frozen(b_dag),
        rho=_frozen(rho),
        rho_inv=_frozen(rho_inv),
        eta=_frozen(lift(metric.eta, n_max)),
        eta_inv=_frozen(lift(metric.eta_inv, n_max)),
        H_s=_frozen(H_s),
        h_s=_frozen(h_s),
        Q=_frozen(pref * a_dag @ B),
        Q_sharp=_frozen(pref * a @ Bs),
        number=_frozen(number),
        psi=_frozen(rho_inv @ number_basis),
        phi=_frozen(rho @ number_basis),
    )


def bi_basis(s: SuperSpace):
    """Columns ``psi[:, 2n+eps]`` and ``phi[:, 2n+eps]``; checks biorthonormality
    and both completeness relations."""
    gram = s.phi.conj().T @ s.psi
    eye = np.eye(s.dim)
    worst = max(
        float(np.max(np.abs(gram - eye))),
        float(np.max(np.abs(s.psi @ s.phi.conj().T - eye))),
        float(np.max(np.abs(s.phi @ s.psi.conj().T - eye))),
    )
    if worst > EXACT_TOL:
        raise ConsistencyError(f"biorthonormal system off by {worst:.3e}", worst)
    return s.psi, s.phi


def spectrum_levels(s: SuperSpace, tol: float = ROUTE_TOL):
    """Eigenvalues of ``H_s`` grouped into ``(level k, value, multiplicity)``.

    Computed from the Hermitian ``h_s`` which shares the spectrum.
    """
    vals = np.linalg.eigvalsh((s.h_s + s.h_s.conj().T) / 2)
    ks = np.rint(vals / s.Omega).astype(int)
    out = []
    for k in sorted(set(ks.tolist())):
        sel = vals[ks == k]
        out.append((k, float(np.mean(sel)), int(sel.size), float(np.max(np.abs(sel - k * s.Omega)))))
    return out


def expected_multiplicity(k: int, n_max: int) -> int:
    if k == 0 or k == n_max:
        return 1
    return 2


@dataclass
class LadderReport:
    residuals: dict
    restricted: dict
    # Q/Q# actions measured against the amplitudes sqrt(Omega (n+1)), sqrt(Omega n)
    # instead of the sqrt(2 Omega ...) that follow from Q = sqrt(2 Omega) a'B
    half_amplitude: dict = field(default_factory=dict)

    def worst(self) -> float:
        return max(self.residuals.values())


def check_ladder_actions(s: SuperSpace) -> LadderReport:
    """Maximum residual of every displayed ladder relation.

    Relations that raise the boson level are evaluated only for
    ``n <= n_max - 2``; ``restricted`` records the range used.
    """
    half: dict = {}
    N = s.n_max
    big = s.Omega
    psi, phi = s.psi_state, s.phi_state
    res: dict = {}
    restricted: dict = {}

    def record(name, value, rng=None):
        res[name] = max(res.get(name, 0.0), float(np.max(np.abs(value))))
        if rng is not None:
            restricted[name] = rng

    top = N - 2
    for n in range(N):
        for e in (0, 1):
            record("a psi", s.a @ psi(n, e) - (math.sqrt(n) * psi(n - 1, e) if n else 0))
            if n <= top:
                record("a_dag psi", s.a_dag @ psi(n, e) - math.sqrt(n + 1) * psi(n + 1, e),
                       f"n <= {top}")
        record("B psi(n,0)", s.B @ psi(n, 0))
        record("B psi(n,1)", s.B @ psi(n, 1) - psi(n, 0))
        record("B# psi(n,1)", s.B_sharp @ psi(n, 1))
        record("B# psi(n,0)", s.B_sharp @ psi(n, 0) - psi(n, 1))
        if n <= top:
            up = s.Q @ psi(n, 1)
            record("Q psi(n,1)", up - math.sqrt(2 * big * (n + 1)) * psi(n + 1, 0), f"n <= {top}")
            _bump(half, "Q psi(n,1)", up - math.sqrt(big * (n + 1)) * psi(n + 1, 0))
        down = s.Q_sharp @ psi(n, 0)
        record("Q# psi(n,0)", down - (math.sqrt(2 * big * n) * psi(n - 1, 1) if n else 0))
        _bump(half, "Q# psi(n,0)", down - (math.sqrt(big * n) * psi(n - 1, 1) if n else 0))
        record("B~ phi(n,0)", s.B_tilde @ phi(n, 0))
        record("B~ phi(n,1)", s.B_tilde @ phi(n, 1) - phi(n, 0))
        record("B+ phi(n,1)", s.B_dag_dual @ phi(n, 1))
        record("B+ phi(n,0)", s.B_dag_dual @ phi(n, 0) - phi(n, 1))
    ground = psi(0, 0)
    record("a psi(0,0)", s.a @ ground)
    record("B psi(0,0)", s.B @ ground)
    record("Q psi(0,0)", s.Q @ ground)
    record("Q# psi(0,0)", s.Q_sharp @ ground)
    return LadderReport(res, restricted, half)


def _bump(acc, name, value):
    acc[name] = max(acc.get(name, 0.0), float(np.max(np.abs(value))))
