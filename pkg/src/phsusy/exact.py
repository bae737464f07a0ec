"""Exact evaluation of the 2x2 layer for rational parameters.

Every float converts exactly to a rational, and for rational
(omega, alpha, beta, z) each matrix entry is a polynomial in five square
roots:

    S = sqrt(1 + z**2)
    W = Omega = sqrt(omega**2 + 4 alpha beta)
    R = sqrt(1 - x**2)                 x = artanh argument
    P = sqrt(2 Omega)                  P**2 = 2 W
    C = cosh(theta)                    C**2 = (1/R + 1)/2 = (R/(1 - x**2) + 1)/2

``|sinh(theta)|`` is not a new root: it equals ``|x| C (1 - R) / x**2``.
Elements are kept multilinear in the roots; a squared root is replaced by
its defining relation immediately, so products stay in normal form. A
normal form with no terms is a proof that the entry vanishes. Roots whose
radicand is a rational square, or a rational square times a product of
earlier roots, are rewritten in terms of those and never get a symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import DegenerateError, DomainError, InvalidParams

NAMES = ("P", "C", "R", "W", "S")
_IDX = {n: i for i, n in enumerate(NAMES)}
_ZERO_MONO = (0,) * len(NAMES)


def rational(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def rational_sqrt(q: Fraction):
    """Exact square root of a non-negative rational, or None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class Ring:
    """Multilinear polynomials in the registered roots, reduced on the fly."""

    def __init__(self):
        # relations[i] is the element equal to (root i)**2
        self.relations: dict = {}
        self.values: dict = {}

    # -- element construction -------------------------------------------
    def const(self, q) -> "Surd":
        q = rational(q)
        return Surd(self, {_ZERO_MONO: q} if q else {})

    def symbol(self, name: str) -> "Surd":
        mono = tuple(1 if n == name else 0 for n in NAMES)
        return Surd(self, {mono: Fraction(1)})

    def register(self, name: str, square: "Surd", value: float) -> "Surd":
        self.relations[_IDX[name]] = square
        self.values[name] = value
        return self.symbol(name)

    # -- arithmetic on term dictionaries ---------------------------------
    def _mono_mul(self, m1, m2) -> dict:
        base = []
        squared = []
        for i, (a, b) in enumerate(zip(m1, m2)):
            e = a + b
            if e == 2:
                squared.append(i)
                base.append(0)
            else:
                base.append(e)
        out = {tuple(base): Fraction(1)}
        for i in squared:
            out = self._mul(out, self.relations[i].terms)
        return out

    def _mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                for m, c in self._mono_mul(m1, m2).items():
                    v = out.get(m, 0) + c1 * c2 * c
                    if v:
                        out[m] = v
                    else:
                        out.pop(m, None)
        return out


class Surd:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms

    def _lift(self, other) -> "Surd":
        return other if isinstance(other, Surd) else self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Surd(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Surd(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, Surd):
            return Surd(self.ring, self.ring._mul(self.terms, other.terms))
        q = rational(other)
        if not q:
            return Surd(self.ring, {})
        return Surd(self.ring, {m: c * q for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self * (1 / rational(q))

    def is_zero(self) -> bool:
        return not self.terms

    def rational_value(self):
        """The value when the element is a plain rational, else None."""
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {_ZERO_MONO}:
            return self.terms[_ZERO_MONO]
        return None

    def __float__(self):
        vals = [self.ring.values.get(n, 0.0) for n in NAMES]
        total = 0.0
        for m, c in self.terms.items():
            t = float(c)
            for e, v in zip(m, vals):
                if e:
                    t *= v
            total += t
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            sym = "*".join(n for n, e in zip(NAMES, m) if e)
            parts.append(f"{c}" + (f"*{sym}" if sym else ""))
        return " + ".join(parts)


class Mat:
    """Dense square matrix over a :class:`Ring`."""

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        self.n = len(self.rows)

    @classmethod
    def from_rational(cls, ring: Ring, rows):
        return cls([[ring.const(v) for v in r] for r in rows])

    def __add__(self, other):
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other):
        if isinstance(other, Mat):
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                row = []
                for col in cols:
                    acc = r[0] * col[0]
                    for a, b in zip(r[1:], col[1:]):
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Mat(out)
        return Mat([[a * other for a in r] for r in self.rows])

    __rmul__ = __mul__

    def T(self):
        return Mat(list(zip(*self.rows)))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def numeric(self) -> np.ndarray:
        return np.array([[float(e) for e in r] for r in self.rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]


@dataclass(frozen=True)
class ExactLayer:
    omega: Fraction
    alpha: Fraction
    beta: Fraction
    z: Fraction
    ring: Ring
    # sqrt(2 Omega), the supercharge prefactor
    supercharge_prefactor: Surd
    H: Mat
    rho: Mat
    rho_inv: Mat
    h: Mat
    b: Mat
    b_dag: Mat
    B: Mat
    B_sharp: Mat
    B_tilde: Mat
    B_dag_dual: Mat

    @property
    def roots(self):
        """Names of the roots that carry a symbol at this point."""
        return tuple(n for n in NAMES if _IDX[n] in self.ring.relations)

    def identity(self) -> Mat:
        return Mat.from_rational(self.ring, [[1, 0], [0, 1]])


def _rational_root(ring: Ring, name: str, q: Fraction, known: list) -> Surd:
    """sqrt(q) for rational q > 0, reusing earlier rational roots when possible.

    ``known`` lists ``(radicand, symbol)`` for independent rational roots.
    """
    r = rational_sqrt(q)
    if r is not None:
        return ring.const(r)
    for k in range(1, len(known) + 1):
        for group in combinations(known, k):
            prod = math.prod((g[0] for g in group), start=Fraction(1))
            r = rational_sqrt(q * prod)
            if r is not None:
                out = ring.const(r / prod)
                for _, sym in group:
                    out = out * sym
                return out
    sym = ring.register(name, ring.const(q), math.sqrt(q))
    known.append((q, sym))
    return sym


_JP = [[0, 1], [0, 0]]
_JM = [[0, 0], [1, 0]]
_J3 = [[Fraction(1, 2), 0], [0, Fraction(-1, 2)]]


def exact_layer(omega, alpha, beta, z) -> ExactLayer:
    w, a, bt, zr = (rational(v) for v in (omega, alpha, beta, z))
    w2 = w * w + 4 * a * bt
    if w2 <= 0:
        raise InvalidParams("real-spectrum condition violated")
    zz = 1 + zr * zr
    denom = a + bt - w * zr
    x2 = Fraction(0)
    if a != bt:
        if denom == 0:
            raise DegenerateError("alpha + beta - omega*z vanishes")
        x2 = (a - bt) ** 2 * zz / denom**2
        if x2 >= 1:
            raise DomainError("arctanh argument outside (-1, 1)", argument=float(x2))

    ring = Ring()
    known: list = []
    s = _rational_root(ring, "S", zz, known)
    big = _rational_root(ring, "W", w2, known)
    two_big = big * 2
    rv = two_big.rational_value()
    if rv is not None:
        pref = _rational_root(ring, "P", rv, known)
    else:
        pref = ring.register("P", two_big, math.sqrt(2 * math.sqrt(w2)))

    def mat(rows):
        return Mat.from_rational(ring, rows)

    jp, jm, j3 = mat(_JP), mat(_JM), mat(_J3)
    eye = mat([[1, 0], [0, 1]])
    gen = j3 * 2 + (jm + jp) * zr
    inv_s = s / zz
    inv_w = big / w2
    if a == bt:
        r = ring.const(1)
        rho = rho_inv = eye
    else:
        q_r = 1 - x2
        r = _rational_root(ring, "R", q_r, known)
        c_sq = (r / q_r + 1) / 2
        rv = c_sq.rational_value()
        if rv is not None:
            c = _rational_root(ring, "C", rv, known)
        else:
            c = ring.register("C", c_sq, math.sqrt((1 / math.sqrt(q_r) + 1) / 2))
        abs_x = s * (abs(a - bt) / abs(denom))
        sh = abs_x * c * (1 - r) / x2
        sign = 1 if (a - bt) / denom > 0 else -1
        k = sh * inv_s * sign
        rho = eye * c + gen * k
        rho_inv = eye * c - gen * k
    root = r * denom
    delta = (root * (-zr) + (w + (a + bt) * zr)) / zz
    lam = (root + (w * zr + (a + bt) * zr * zr)) / (2 * zz)
    plus = (delta + big) * inv_w / 2
    minus = (delta - big) * inv_w / 2
    third = lam * inv_w * (-2)
    b = jm * plus + jp * minus + j3 * third
    b_dag = jm * minus + jp * plus + j3 * third
    H = j3 * w + jm * a + jp * bt
    return ExactLayer(
        omega=w, alpha=a, beta=bt, z=zr, ring=ring, supercharge_prefactor=pref,
        H=H, rho=rho, rho_inv=rho_inv, h=rho * H * rho_inv,
        b=b, b_dag=b_dag,
        B=rho_inv * b * rho, B_sharp=rho_inv * b_dag * rho,
        B_tilde=rho * b * rho_inv, B_dag_dual=rho * b_dag * rho_inv,
    )


def boson_raising_square(n_max: int):
    """Squared entries of ``a'**2``: ``{(n+2, n): (n+1)(n+2)}``."""
    return {(n + 2, n): (n + 1) * (n + 2) for n in range(n_max - 2)}


def supercharge_squares(layer: ExactLayer, n_max: int):
    """Exact ``Q**2`` and ``Q#**2`` on the truncated space, as ``{(row, col): Surd}``.

    With ``Q = P (a' (x) B)`` the mixed-product rule gives
    ``Q**2 = P**2 (a'**2 (x) B**2)``. Each bosonic entry is a positive real
    ``sqrt((n+1)(n+2))``, so an entry of ``Q**2`` vanishes exactly when the
    matching ``P**2 (B**2)[e, f]`` does; that product is what is returned.
    """
    p2 = layer.supercharge_prefactor * layer.supercharge_prefactor
    boson = boson_raising_square(n_max)
    out = []
    for ferm, pairs in ((layer.B * layer.B, boson),
                        (layer.B_sharp * layer.B_sharp, {(j, i): v for (i, j), v in boson.items()})):
        entries = {}
        for i, j in pairs:
            for e in range(2):
                for f in range(2):
                    entries[(2 * i + e, 2 * j + f)] = ferm[e, f] * p2
        out.append(entries)
    return tuple(out)


def all_zero(entries) -> bool:
    return all(e.is_zero() for e in entries.values())
