"""Graded algebra over two Grassmann generators ``xi`` and ``xi*``.

An element is ``sum_m c_m m`` over the ordered monomials ``1, xi, xi*,
xi xi*`` with each coefficient written to the LEFT of its monomial. A
coefficient is a scalar (int, Fraction, complex, sympy number), a ket
(column array), a bra (row array) or an operator (square array or sympy
Matrix). Every stored coefficient carries a parity tag:

* scalars and bosonic operators are even;
* phermion-type operators (B, B#, B~, B+, Q, Q#) are odd;
* a ket or bra is odd when it lies in the occupied phermion sector.

Products follow the Koszul rule: moving a monomial past a coefficient of
parity ``p`` costs ``(-1)**(|monomial| * p)``. Operators act on kets by
matrix multiplication; no sign arises from that step.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

import numpy as np
import scipy.linalg
import sympy as sp

from .errors import ParityError

ONE, XI, XIS, XIXIS = "1", "xi", "xi*", "xi xi*"
MONOMIALS = (ONE, XI, XIS, XIXIS)
MONOMIAL_PARITY = {ONE: 0, XI: 1, XIS: 1, XIXIS: 0}
CONJUGATE = {ONE: ONE, XI: XIS, XIS: XI, XIXIS: XIXIS}

# (left, right) -> (sign, canonical monomial); absent pairs multiply to zero
_PRODUCT = {(ONE, m): (1, m) for m in MONOMIALS}
_PRODUCT.update({(m, ONE): (1, m) for m in MONOMIALS})
_PRODUCT[(XI, XIS)] = (1, XIXIS)
_PRODUCT[(XIS, XI)] = (-1, XIXIS)


def _is_array(c) -> bool:
    return getattr(c, "shape", ()) != ()


def _is_zero(c) -> bool:
    if isinstance(c, sp.MatrixBase):
        return c.is_zero_matrix is True
    if isinstance(c, np.ndarray):
        return not np.any(c)
    return c == 0


def _mul(c, d):
    if _is_array(c) and _is_array(d):
        out = c @ d
        if out.shape == (1, 1):
            return out[0, 0]
        return out
    return c * d


def _dagger(c, eta=None, eta_inv=None):
    if isinstance(c, sp.MatrixBase):
        out = c.H
    elif isinstance(c, np.ndarray):
        out = c.conj().T
    else:
        return c.conjugate()
    if eta is None or out.shape[0] != out.shape[1]:
        return out
    if eta_inv is None:
        eta_inv = np.linalg.inv(eta)
    return eta_inv @ out @ eta


def _max_abs(c) -> float:
    if isinstance(c, sp.MatrixBase):
        c = np.array(c.evalf().tolist(), dtype=complex)
    return float(np.max(np.abs(c))) if np.size(c) else 0.0


@dataclass(frozen=True, eq=False)
class GrassmannElement:
    """Immutable map ``monomial -> (coefficient, parity)``."""

    terms: Mapping[str, tuple[Any, int]]

    # -- construction -------------------------------------------------
    @classmethod
    def term(cls, monomial: str, coeff, parity: int = 0) -> "GrassmannElement":
        if monomial not in MONOMIAL_PARITY:
            raise KeyError(f"unknown monomial {monomial!r}")
        return cls({monomial: (coeff, parity % 2)})

    @classmethod
    def scalar(cls, c) -> "GrassmannElement":
        return cls.term(ONE, c, 0)

    @classmethod
    def zero(cls) -> "GrassmannElement":
        return cls({})

    # -- access ---------------------------------------------------------
    def component(self, monomial: str, default=0):
        entry = self.terms.get(monomial)
        return default if entry is None else entry[0]

    def parity(self, monomial: str):
        entry = self.terms.get(monomial)
        return None if entry is None else entry[1]

    def is_even(self) -> bool:
        return all(
            _is_zero(c) or p == MONOMIAL_PARITY[m] for m, (c, p) in self.terms.items()
        )

    def nonzero_monomials(self):
        return tuple(m for m in MONOMIALS if m in self.terms and not _is_zero(self.terms[m][0]))

    def map(self, fn) -> "GrassmannElement":
        """Apply ``fn`` to every coefficient, keeping parities."""
        return GrassmannElement({m: (fn(c), p) for m, (c, p) in self.terms.items()})

    def without(self, monomial: str) -> "GrassmannElement":
        return GrassmannElement({m: t for m, t in self.terms.items() if m != monomial})

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.scalar(other)
        acc = dict(self.terms)
        for m, (c, p) in other.terms.items():
            _accumulate(acc, m, c, p)
        return GrassmannElement(acc)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        """Multiplication by an ordinary (even) scalar."""
        if isinstance(k, GrassmannElement):
            return gmul(self, k)
        return self.map(lambda c: k * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return gmul(self, other)

    # -- comparison -------------------------------------------------------
    def residual(self, other: "GrassmannElement") -> float:
        """Largest coefficient difference over all monomials."""
        diff = self - other
        return max((_max_abs(c) for c, _ in diff.terms.values()), default=0.0)

    def equals(self, other: "GrassmannElement") -> bool:
        """Exact equality, for the exact-arithmetic path."""
        diff = self - other
        return all(_is_exact_zero(c) for c, _ in diff.terms.values())

    def __repr__(self):
        parts = [f"({c!r})[{p}]*{m}" for m, (c, p) in self.terms.items()]
        return "GrassmannElement(" + " + ".join(parts or ["0"]) + ")"


def _is_exact_zero(c) -> bool:
    if isinstance(c, sp.MatrixBase):
        return all(sp.simplify(e) == 0 for e in c)
    if isinstance(c, np.ndarray):
        return not np.any(c)
    if isinstance(c, sp.Basic):
        return sp.simplify(c) == 0
    return c == 0


def _accumulate(acc, monomial, c, parity):
    if monomial not in acc:
        acc[monomial] = (c, parity)
        return
    old, old_parity = acc[monomial]
    if old_parity != parity:
        if _is_zero(c):
            return
        if not _is_zero(old):
            raise ParityError(
                f"coefficient of {monomial} mixes parities {old_parity} and {parity}"
            )
        old_parity = parity
    acc[monomial] = (old + c, old_parity)


XI_ELEMENT = GrassmannElement.term(XI, 1)
XIS_ELEMENT = GrassmannElement.term(XIS, 1)


def generator(name: str) -> GrassmannElement:
    return {XI: XI_ELEMENT, XIS: XIS_ELEMENT}[name]


def monomial(*generators: str, coeff=1) -> GrassmannElement:
    """Ordered product ``coeff * g1 g2 ...`` of generators, canonicalized."""
    out = GrassmannElement.scalar(coeff)
    for g in generators:
        out = gmul(out, generator(g))
    return out


def gmul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Graded product ``x y``."""
    acc: dict = {}
    for m, (c, pc) in x.terms.items():
        for n, (d, pd) in y.terms.items():
            prod = _PRODUCT.get((m, n))
            if prod is None:
                continue
            sign, k = prod
            if MONOMIAL_PARITY[m] and pd:
                sign = -sign
            value = _mul(c, d)
            _accumulate(acc, k, value if sign > 0 else -value, (pc + pd) % 2)
    return GrassmannElement(acc)


def berezin(x: GrassmannElement):
    """``int dxi* dxi x``: picks the coefficient of ``xi xi*``."""
    return x.component(XIXIS, 0)


def pseudo_adjoint(x: GrassmannElement, eta=None, eta_inv=None) -> GrassmannElement:
    """``x#``: coefficients map to ``eta^-1 c^+ eta``, monomials are
    conjugated and the order of every (coefficient, monomial) pair is
    reversed with its Koszul sign.

    With ``eta=None`` this is the plain Hermitian adjoint (kets become bras).
    """
    if eta is not None and eta_inv is None:
        eta_inv = np.linalg.inv(eta)
    out: dict = {}
    for m, (c, p) in x.terms.items():
        value = _dagger(c, eta, eta_inv)
        if MONOMIAL_PARITY[m] and p:
            value = -value
        _accumulate(out, CONJUGATE[m], value, p)
    return GrassmannElement(out)


def adjoint(x: GrassmannElement) -> GrassmannElement:
    return pseudo_adjoint(x)


def _exp_coefficient(c):
    if isinstance(c, sp.MatrixBase):
        return c.exp()
    if isinstance(c, np.ndarray):
        return scipy.linalg.expm(c)
    if isinstance(c, sp.Basic):
        return sp.exp(c)
    return cmath.exp(c)


def _commutes(c, d) -> bool:
    if not (_is_array(c) and _is_array(d)):
        return True
    comm = c @ d - d @ c
    if isinstance(comm, sp.MatrixBase):
        return comm.is_zero_matrix is True
    scale = max(_max_abs(c) * _max_abs(d), 1.0)
    return _max_abs(comm) <= 1e-14 * scale


def gexp_even(x: GrassmannElement) -> GrassmannElement:
    """Exponential of an even element.

    The ``1``-coefficient is exponentiated as a matrix (or scalar); the
    nilpotent remainder ``N`` contributes the terminating series
    ``1 + N + N**2/2``. When the ``1``-coefficient does not commute with the
    nilpotent coefficients the whole element is exponentiated through its
    left-multiplication matrix on the four-slot space, which is still exact
    in the Grassmann directions.
    """
    if not x.is_even():
        raise ParityError("gexp_even needs an even element")
    c1 = x.component(ONE, None)
    nil = x.without(ONE)
    half = Fraction(1, 2) if _is_exact(x) else 0.5
    series = GrassmannElement.scalar(1) + nil + half * gmul(nil, nil)
    if c1 is None or _is_zero(c1):
        return series
    if all(_commutes(c1, c) for c, _ in nil.terms.values()):
        return gmul(GrassmannElement.scalar(_exp_coefficient(c1)), series)
    return _lifted_exp(x)


_EXACT_TYPES = (int, Fraction, sp.Basic, sp.MatrixBase)


def _is_exact(x) -> bool:
    return all(isinstance(c, _EXACT_TYPES) for c, _ in x.terms.values())


def _lifted_exp(x: GrassmannElement) -> GrassmannElement:
    coeffs = {m: np.asarray(x.component(m, 0)) for m in MONOMIALS}
    dim = next(c.shape[0] for c in coeffs.values() if c.ndim == 2)
    eye = np.eye(dim)
    for m, c in coeffs.items():
        if c.ndim == 0:
            coeffs[m] = c * eye
    # action of x on an even element y, written slotwise: y'_k = sum L[k, n] y_n
    L = np.zeros((4 * dim, 4 * dim), dtype=np.result_type(*coeffs.values(), float))
    index = {m: i for i, m in enumerate(MONOMIALS)}
    for m in MONOMIALS:
        for n in MONOMIALS:
            prod = _PRODUCT.get((m, n))
            if prod is None:
                continue
            sign, k = prod
            if MONOMIAL_PARITY[m] and MONOMIAL_PARITY[n]:
                sign = -sign
            i, j = index[k], index[n]
            L[i * dim:(i + 1) * dim, j * dim:(j + 1) * dim] += sign * coeffs[m]
    E = scipy.linalg.expm(L)
    return GrassmannElement(
        {m: (E[index[m] * dim:(index[m] + 1) * dim, :dim], MONOMIAL_PARITY[m]) for m in MONOMIALS}
    )
