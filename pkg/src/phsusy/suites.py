"""Verification suites producing flat check records for the CLI report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import core, exact, fock, phermion, scs
from . import grassmann as gr
from .core import EXACT_TOL, ROUTE_TOL, ModelParams
from .errors import DegenerateError, DomainError, InvalidParams

SUITES = ("core", "phermion", "susy", "grassmann", "scs", "identity")
DEFAULT_SUITES = ("core", "phermion", "susy", "grassmann", "scs")

# report anchor tags, one per identity family
ANCHOR = {
    "spectrum": "Eq-H1",
    "power_form": "Eq-rho3",
    "positivity": "Eq-rho2",
    "hermitian": "Eq-h1",
    "routes": "Eq-h2",
    "omega": "Eq-0214",
    "phermion": "Eq-0333",
    "factorized_H": "Eq-H3",
    "factorized_h": "Eq-h3",
    "mu_nu": "Eq-0217",
    "dual": "Eq-3.40",
    "susy": "Eq-025",
    "commute": "Eq-029",
    "hamiltonian": "Eq-437",
    "bi_basis": "Sec-3",
    "ladder": "Sec-4",
    "ground": "Eq-314",
    "grassmann": "Eq-3.20",
    "berezin": "Eq-3.21",
    "odd_ops": "Eq-3.22",
    "adjoint": "Eq-3.23",
    "displacement": "Eq-3.24",
    "scs": "Eq-3.27",
    "dual_scs": "Eq-344",
    "glauber": "Eq-3.28",
    "identity": "Eq-3.49",
}


@dataclass
class Check:
    suite: str
    check_id: str
    paper_anchor: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def as_dict(self):
        return {
            "suite": self.suite,
            "check_id": self.check_id,
            "paper_anchor": self.paper_anchor,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class SuiteOutput:
    checks: list = field(default_factory=list)
    # values the report carries without asserting them
    reported: dict = field(default_factory=dict)

    def add(self, suite, check_id, anchor_key, residual, tolerance):
        self.checks.append(Check(suite, check_id, ANCHOR[anchor_key], float(residual), tolerance))


def _flag(ok: bool) -> float:
    """Residual encoding of an exact predicate: 0 when it holds, 1 otherwise."""
    return 0.0 if ok else 1.0


# -- sampling ----------------------------------------------------------------

SAMPLE_RANGES = {"omega": (0.5, 4.0), "alpha": (-2.0, 2.0), "beta": (-2.0, 2.0), "z": (-3.0, 3.0)}
# keep sampled points away from the arctanh branch point and from Omega -> 0
MAX_ARGUMENT = 0.99
MIN_OMEGA = 0.1


def sample_points(seed: int, count: int):
    """Seeded valid ``(ModelParams, z)`` pairs from the documented ranges."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w, a, b, z = (rng.uniform(*SAMPLE_RANGES[k]) for k in ("omega", "alpha", "beta", "z"))
        try:
            p = ModelParams(w, a, b)
            x = core.arctanh_argument(p, z)
        except (InvalidParams, DegenerateError):
            continue
        if abs(x) > MAX_ARGUMENT or core.omega_cap(p) < MIN_OMEGA:
            continue
        out.append((p, z))
    return out


# -- suites ------------------------------------------------------------------


def core_suite(p: ModelParams, z: float, samples) -> SuiteOutput:
    out = SuiteOutput()
    spec = pow_ = herm = route = omega = 0.0
    for q, zq in [(p, z), *samples]:
        big = core.omega_cap(q)
        ev = np.sort(np.linalg.eigvals(core.build_H(q)).real)
        spec = max(spec, float(np.max(np.abs(ev - np.array([-big / 2, big / 2])))))
        m = core.build_rho(q, zq)
        pow_ = max(pow_, m.power_form_residual)
        h, sc = core.build_h(q, zq, metric=m)
        herm = max(herm, core.hermiticity_residual(h))
        route = max(route, float(np.max(np.abs(h - core.hermitian_from_scalars(sc.delta, sc.lam)))))
        omega = max(omega, abs(sc.delta**2 + 4 * sc.lam**2 - big**2))
    out.add("core", "eigenvalues(H) = +-Omega/2", "spectrum", spec, EXACT_TOL)
    out.add("core", "rho closed form = power form", "power_form", pow_, EXACT_TOL)
    out.add("core", "rho H rho^-1 Hermitian", "hermitian", herm, EXACT_TOL)
    out.add("core", "closed-form (delta, lambda) = similarity route", "routes", route, ROUTE_TOL)
    out.add("core", "delta^2 + 4 lambda^2 = Omega^2", "omega", omega, ROUTE_TOL)

    worst = 0.0
    for zq in np.linspace(-5.0, 5.0, 101):
        try:
            m = core.build_rho(p, float(zq))
        except (DomainError, DegenerateError):
            continue
        worst = max(worst, _flag(float(np.min(np.linalg.eigvalsh(m.rho))) > 0))
    out.add("core", "rho positive definite on z in [-5, 5]", "positivity", worst, 0.0)
    out.reported["samples"] = len(samples)
    return out


def phermion_suite(p: ModelParams, z: float, samples) -> SuiteOutput:
    out = SuiteOutput()
    nil = anti = fact_H = fact_h = munu = dual_nil = dual_anti = 0.0
    for q, zq in [(p, z), *samples]:
        ferm = phermion.build_b(q, zq)
        ph = phermion.build_B(q, zq)
        du = phermion.build_dual(q, zq)
        big = core.omega_cap(q)
        nil = max(nil, ph.nilpotency_residual(), ferm.nilpotency_residual())
        anti = max(anti, ph.anticommutator_residual(), ferm.anticommutator_residual())
        dual_nil = max(dual_nil, du.nilpotency_residual())
        dual_anti = max(dual_anti, du.anticommutator_residual())
        H = core.build_H(q)
        fact_H = max(fact_H, float(np.max(np.abs(big * (ph.raising @ ph.lower - 0.5 * np.eye(2)) - H))))
        h, _ = core.build_h(q, zq)
        fact_h = max(fact_h, float(np.max(np.abs(big * (ferm.raising @ ferm.lower - 0.5 * np.eye(2)) - h))))
        cs = phermion.mu_nu(q, zq)
        munu = max(munu, float(np.max(np.abs(cs.lowering() - ph.lower))),
                   float(np.max(np.abs(cs.raising() - ph.raising))))
    out.add("phermion", "B^2 = B#^2 = 0 (float)", "phermion", nil, EXACT_TOL)
    out.add("phermion", "{B, B#} = 1", "phermion", anti, EXACT_TOL)
    out.add("phermion", "H = Omega(B#B - 1/2)", "factorized_H", fact_H, ROUTE_TOL)
    out.add("phermion", "h = Omega(b'b - 1/2)", "factorized_h", fact_h, ROUTE_TOL)
    out.add("phermion", "mu/nu reconstruction", "mu_nu", munu, ROUTE_TOL)
    out.add("phermion", "B~^2 = B+^2 = 0 (float)", "dual", dual_nil, EXACT_TOL)
    out.add("phermion", "{B~, B+} = 1", "dual", dual_anti, EXACT_TOL)

    layer = exact.exact_layer(p.omega, p.alpha, p.beta, z)
    ok = all((m * m).is_zero() for m in (layer.B, layer.B_sharp))
    out.add("phermion", "B^2 = B#^2 = 0 (exact)", "phermion", _flag(ok), 0.0)
    ok = all((m * m).is_zero() for m in (layer.B_tilde, layer.B_dag_dual))
    out.add("phermion", "B~^2 = B+^2 = 0 (exact)", "dual", _flag(ok), 0.0)
    return out


def susy_suite(p: ModelParams, z: float, n_max: int) -> SuiteOutput:
    out = SuiteOutput()
    s = fock.build_superspace(p, z, n_max)
    keep = s.lower_block(n_max - 1)

    def block(m):
        return float(np.max(np.abs(m[np.ix_(keep, keep)])))

    anti = s.Q @ s.Q_sharp + s.Q_sharp @ s.Q - 2 * s.H_s
    out.add("susy", "{Q, Q#} = 2 H_s (n < n_max - 1)", "susy", block(anti), ROUTE_TOL)
    out.add("susy", "[Q, H_s] = 0", "susy", np.max(np.abs(core.commutator(s.Q, s.H_s))), ROUTE_TOL)
    out.add("susy", "[Q#, H_s] = 0", "susy", np.max(np.abs(core.commutator(s.Q_sharp, s.H_s))), ROUTE_TOL)
    comm = max(float(np.max(np.abs(core.commutator(s.a, m)))) for m in (s.B, s.B_sharp, s.eta))
    out.add("susy", "[a, B] = [a, B#] = [a, eta] = 0", "commute", comm, 0.0)
    pseudo = float(np.max(np.abs(s.H_s.conj().T @ s.eta - s.eta @ s.H_s)))
    out.add("susy", "H_s' eta = eta H_s", "hamiltonian", pseudo, EXACT_TOL)

    layer = exact.exact_layer(p.omega, p.alpha, p.beta, z)
    ok = all(exact.all_zero(sq) for sq in exact.supercharge_squares(layer, n_max))
    out.add("susy", "Q^2 = Q#^2 = 0 (exact)", "susy", _flag(ok), 0.0)

    levels = fock.spectrum_levels(s)
    dev = max(lv[3] for lv in levels)
    out.add("susy", "spectrum = Omega k", "hamiltonian", dev, ROUTE_TOL)
    pattern = all(
        mult == fock.expected_multiplicity(k, n_max) for k, _, mult, _ in levels
    ) and [lv[0] for lv in levels] == list(range(n_max + 1))
    out.add("susy", "multiplicities (1, 2, 2, ...)", "hamiltonian", _flag(pattern), 0.0)

    eye = np.eye(s.dim)
    out.add("susy", "<phi|psi> = delta", "bi_basis", np.max(np.abs(s.phi.conj().T @ s.psi - eye)), EXACT_TOL)
    comp = max(float(np.max(np.abs(s.psi @ s.phi.conj().T - eye))),
               float(np.max(np.abs(s.phi @ s.psi.conj().T - eye))))
    out.add("susy", "sum |psi><phi| = sum |phi><psi| = 1", "bi_basis", comp, EXACT_TOL)
    energies = np.repeat(np.arange(n_max), 2) + np.tile([0, 1], n_max)
    eig = max(
        float(np.max(np.abs(s.H_s @ s.psi - s.psi * (s.Omega * energies)))),
        float(np.max(np.abs(s.H_s.conj().T @ s.phi - s.phi * (s.Omega * energies)))),
    )
    out.add("susy", "H_s psi = Omega(n+eps) psi, H_s' phi likewise", "bi_basis", eig, ROUTE_TOL)

    lad = fock.check_ladder_actions(s)
    for name, value in lad.residuals.items():
        key = "ground" if "(0,0)" in name else "ladder"
        out.add("susy", name, key, value, EXACT_TOL if key == "ground" else ROUTE_TOL)
    out.reported["restricted_relations"] = dict(lad.restricted)
    out.reported["Q_actions_at_half_amplitude"] = dict(lad.half_amplitude)
    return out


def _exact_pair():
    """Integer stand-ins for an odd lowering/raising pair (B^2 = 0, {B, B#} = 1)."""
    low = np.array([[0, 0], [1, 0]], dtype=object)
    up = np.array([[0, 1], [0, 0]], dtype=object)
    return low, up


def grassmann_suite() -> SuiteOutput:
    out = SuiteOutput()
    E = gr.GrassmannElement
    xi, xis = gr.generator(gr.XI), gr.generator(gr.XIS)
    rules = [
        gr.berezin(gr.monomial(gr.XI, gr.XIS)) == 1,
        gr.berezin(E.scalar(1)) == 0,
        gr.berezin(xi) == 0,
        gr.berezin(xis) == 0,
        gr.berezin(gr.monomial(gr.XIS, gr.XI, coeff=Fraction(5))) == -5,
    ]
    out.add("grassmann", "Berezin rules (exact)", "berezin", _flag(all(rules)), 0.0)
    signs = [
        gr.gmul(xi, xi).equals(E.zero()),
        gr.gmul(xis, xis).equals(E.zero()),
        (gr.gmul(xi, xis) + gr.gmul(xis, xi)).equals(E.zero()),
    ]
    out.add("grassmann", "xi^2 = xi*^2 = 0, {xi, xi*} = 0 (exact)", "grassmann", _flag(all(signs)), 0.0)
    low, up = _exact_pair()
    B, Bs = E.term(gr.ONE, low, 1), E.term(gr.ONE, up, 1)
    anti = gr.gmul(xi, B) + gr.gmul(B, xi)
    out.add("grassmann", "{xi, B} = 0 (exact)", "odd_ops", _flag(anti.equals(E.zero())), 0.0)
    x = gr.gmul(Bs, xi) + gr.gmul(xis, B)
    out.add("grassmann", "(B# xi + xi* B)# = xi* B + B# xi", "adjoint",
            _flag(gr.pseudo_adjoint(x).equals(x)), 0.0)
    out.add("grassmann", "exhaustive associativity (exact)", "grassmann",
            _flag(exhaustive_associativity()), 0.0)
    return out


def exhaustive_associativity() -> bool:
    """``(xy)z == x(yz)`` over monomial triples with coefficients from {1, B, B#}."""
    low, up = _exact_pair()
    coeffs = [(np.array([[1, 0], [0, 1]], dtype=object), 0), (low, 1), (up, 1)]
    elems = [
        gr.GrassmannElement.term(m, c, p) for m in gr.MONOMIALS for c, p in coeffs
    ]
    for x in elems:
        for y in elems:
            xy = gr.gmul(x, y)
            for w in elems:
                if not gr.gmul(xy, w).equals(gr.gmul(x, gr.gmul(y, w))):
                    return False
    return True


def scs_suite(p: ModelParams, z: float, n_max: int, amps) -> SuiteOutput:
    out = SuiteOutput()
    s = fock.build_superspace(p, z, n_max)
    overlaps = {}
    for a in amps:
        amp = scs.CoherentAmplitude(complex(a), n_max)
        tag = f"alpha={_fmt(amp.alpha)}"
        x = scs.build_scs(s, amp, scs.Family.PSI)
        y = scs.build_scs(s, amp, scs.Family.PHI)
        out.add("scs", f"closed form = D psi00 [{tag}]", "scs", x.orbit_residual, scs.CROSS_TOL)
        out.add("scs", f"closed form = D~ phi00 [{tag}]", "dual_scs", y.orbit_residual, scs.CROSS_TOL)
        for fam, st in (("psi", x), ("phi", y)):
            for op, value in scs.eigenrelations(s, st).items():
                out.add("scs", f"{op} eigenrelation {fam} [{tag}]", "scs", value, scs.CROSS_TOL)
            d1, d2, keep = scs.pseudo_unitarity_residual(s, amp, st.family)
            out.add("scs", f"D#D = 1 {fam} n<{keep} [{tag}]", "displacement", d1, scs.CROSS_TOL)
            out.add("scs", f"DD# = 1 {fam} n<{keep} [{tag}]", "displacement", d2, scs.CROSS_TOL)
        _, dev = scs.bi_normalization(x, y)
        out.add("scs", f"<~alpha,xi|alpha,xi> = 1 [{tag}]", "scs", dev, scs.BINORM_TOL)
        g = s.psi[:, 0::2] @ scs.glauber_weights(amp.alpha, n_max)
        proj = float(np.max(np.abs(x.component(gr.ONE).ravel() - g)))
        out.add("scs", f"xi = 0 projection = Glauber [{tag}]", "glauber", proj, EXACT_TOL)
        overlaps[tag] = scs.same_family_overlap(x)[1]
    out.reported["same_family_overlap_deviation"] = overlaps
    return out


def identity_suite(p: ModelParams, z: float, n_max: int, quad: scs.QuadratureSpec) -> SuiteOutput:
    out = SuiteOutput()
    s = fock.build_superspace(p, z, n_max)
    res = scs.resolution_of_identity(s, quad)
    out.add("identity", "int |alpha,xi><~alpha,xi| = 1", "identity", res.residual_cross, scs.IDENTITY_TOL)
    out.add("identity", "node doubling relative change", "identity", res.relative_change, 0.1)
    out.reported["residual_same"] = res.residual_same
    out.reported["residual_cross_doubled"] = res.residual_cross_doubled
    return out


def _fmt(a: complex) -> str:
    if a.imag == 0:
        return f"{a.real:g}"
    return f"{a.real:g}{a.imag:+g}i"


def limit_report(z: float, n_max: int, amps) -> dict:
    """Hermitian-limit checks at ``alpha = beta``: rho, epsilon, B# and SCS coincidence."""
    p = ModelParams(2.0, 1.0, 1.0, hermitian_limit=True)
    m = core.build_rho(p, z)
    ph = phermion.build_B(p, z)
    s = fock.build_superspace(p, z, n_max)
    out = {
        "epsilon": abs(m.epsilon),
        "rho - 1": float(np.max(np.abs(m.rho - np.eye(2)))),
        "B# - B'": float(np.max(np.abs(ph.raising - ph.lower.conj().T))),
    }
    fam = 0.0
    for a in amps:
        x = scs.build_scs(s, a, scs.Family.PSI)
        y = scs.build_scs(s, a, scs.Family.PHI)
        fam = max(fam, x.state.residual(y.state))
    out["psi family - phi family"] = fam
    return out


def to_complex(text: str) -> complex:
    t = text.strip().replace("i", "j").replace(" ", "")
    value = complex(t)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"non-finite amplitude {text!r}")
    return value
