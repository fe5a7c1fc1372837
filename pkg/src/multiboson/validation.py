"""Cross-module invariant suite behind the ``validate`` CLI command.

Each check returns a measured deviation and its tolerance.  The suite
doubles as the machine-readable face of the test suite's acceptance
criteria: every closed form is held against an independent matrix oracle.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np

from . import bogoliubov, coherent, evolution, onemode, orthopoly, rep, twomode
from .jacobi import oracle_eigh, oracle_eigs

__all__ = ["CheckResult", "run_all", "format_report"]


@dataclass
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    passed: bool
    expected_fail: bool = False
    note: str = ""

    def status(self) -> str:
        if self.passed:
            return "PASS"
        return "EXPECTED-FAIL" if self.expected_fail else "FAIL"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status()
        return d


def _check(name, deviation, tolerance, expected_fail=False, note=""):
    return CheckResult(name, float(deviation), float(tolerance),
                       bool(deviation <= tolerance), expected_fail, note)


def _commutator_residual(l: int, table: tuple[float, ...], n: int) -> float:
    r = rep.MultibosonRep(l, table)
    a0, am, ap = rep.build_generators_full(r, n)
    interior = n - 2 * l
    dev = 0.0
    for lhs, rhs in (
        (am @ ap - ap @ am, a0),
        (a0 @ am - am @ a0, -2 * am),
        (a0 @ ap - ap @ a0, 2 * ap),
    ):
        dev = max(dev, np.abs((lhs - rhs)[:interior, :interior]).max())
    return dev


def _difference_eq_residual(l: int, table: tuple[float, ...], n_max: int) -> float:
    r = rep.MultibosonRep(l, table)
    dev = 0.0
    for n in range(n_max + 1):
        a2 = rep.rising_factorial(n + 1.0, l) * rep.alpha_minus(r, n) ** 2
        if n >= l:
            prev = rep.rising_factorial(n - l + 1.0, l) * rep.alpha_minus(r, n - l) ** 2
            dev = max(dev, abs(a2 - prev - rep.alpha0(r, n)) / max(1.0, rep.alpha0(r, n)))
            dev = max(dev, abs((rep.alpha0(r, n) - rep.alpha0(r, n - l) - 2.0)
                               * rep.alpha_minus(r, n - l)))
        else:
            dev = max(dev, abs(a2 - rep.alpha0(r, n)) / max(1.0, rep.alpha0(r, n)))
    return dev


def _casimir_residual(l: int, table: tuple[float, ...], n: int) -> float:
    r = rep.MultibosonRep(l, table)
    a0, am, ap = rep.build_generators_full(r, n)
    cas = 0.5 * a0 @ a0 - am @ ap - ap @ am
    interior = n - 2 * l
    dev = np.abs(cas[:interior, :interior]
                 - np.diag([rep.casimir_value(r, m % l) for m in range(interior)])).max()
    return dev


def _hd_closed_vs_oracle(convention: str) -> float:
    worst = 0.0
    for K in range(7):
        for a0 in (0.5, 1.0, 2.7):
            for b0 in (0.5, 1.0, 2.7):
                blk = twomode.DBlock(K, a0, b0)
                op = twomode.hd_block_jacobi(blk, convention=convention)
                w = oracle_eigs(op)
                worst = max(worst, np.abs(w - twomode.hd_spectrum(blk)).max())
    return worst


def run_all(hd_convention: str = "operator-derived", quick: bool = False):
    """Run the invariant suite; returns a list of CheckResult."""
    rng = np.random.default_rng(20240817)
    out = []

    # ladder algebra and Casimir
    dev_c = dev_d = dev_cas = 0.0
    for l in (1, 2, 3):
        for _ in range(1 if quick else 3):
            table = tuple(rng.uniform(0.2, 3.0, size=l))
            dev_c = max(dev_c, _commutator_residual(l, table, 64))
            dev_d = max(dev_d, _difference_eq_residual(l, table, 100))
            dev_cas = max(dev_cas, _casimir_residual(l, table, 64))
    out.append(_check("rep.commutators.interior", dev_c, 1e-10))
    out.append(_check("rep.difference_equations", dev_d, 1e-10))
    out.append(_check("rep.casimir.sector_scalar", dev_cas, 1e-10))

    # Casimir invariance under random generator actions
    r1 = rep.MultibosonRep(1, (1.3,))
    a0m, amm, apm = rep.build_generators_full(r1, 64)
    worst = 0.0
    for _ in range(10):
        g = bogoliubov.GroupElement(float(rng.uniform(0.5, 2.0) * rng.choice((-1, 1))),
                                    int(rng.choice((-1, 1))))
        m = bogoliubov.action_matrix(g).matrix
        x0 = m[0, 0] * a0m + m[0, 1] * amm + m[0, 2] * apm
        xm = m[1, 0] * a0m + m[1, 1] * amm + m[1, 2] * apm
        xp = m[2, 0] * a0m + m[2, 1] * amm + m[2, 2] * apm
        cas = 0.5 * x0 @ x0 - xm @ xp - xp @ xm
        interior = 64 - 4
        worst = max(worst, np.abs(cas[:interior, :interior]
                                  - rep.casimir_value(r1, 0) * np.eye(interior)).max())
    out.append(_check("bogoliubov.casimir_invariance", worst, 1e-9))

    # group homomorphism and structure constants
    f = bogoliubov.structure_constants()
    dev_h = dev_s = 0.0
    for _ in range(50):
        g = bogoliubov.GroupElement(float(rng.uniform(0.3, 3.0) * rng.choice((-1, 1))),
                                    int(rng.choice((-1, 1))))
        h = bogoliubov.GroupElement(float(rng.uniform(0.3, 3.0) * rng.choice((-1, 1))),
                                    int(rng.choice((-1, 1))))
        mg = bogoliubov.action_matrix(g).matrix
        mh = bogoliubov.action_matrix(h).matrix
        mgh = bogoliubov.action_matrix(bogoliubov.multiply(g, h)).matrix
        dev_h = max(dev_h, np.abs(mgh - mg @ mh).max())
        lhs = np.einsum("ip,jq,pqr->ijr", mg, mg, f)
        rhs = np.einsum("ijk,kr->ijr", f, mg)
        dev_s = max(dev_s, np.abs(lhs - rhs).max())
    out.append(_check("bogoliubov.homomorphism", dev_h, 1e-12))
    out.append(_check("bogoliubov.structure_constants", dev_s, 1e-12))

    # implementing unitaries
    n = 160 if quick else 240
    dev_u = dev_cj = 0.0
    grid_a = (0.5, 2.0) if quick else (1 / 3, 0.5, 2.0, 3.0)
    grid_al = (1.0,) if quick else (0.5, 1.0, 2.7)
    for a in grid_a:
        for sg in (1, -1):
            for al in grid_al:
                g = bogoliubov.GroupElement(a, sg)
                u, info = bogoliubov.implementer(g, al, n, return_info=True)
                nc = info.converged_cols
                dev_u = max(dev_u, np.abs(u[:, :nc].T @ u[:, :nc] - np.eye(nc)).max())
                s = rep.OneModeSector(rep.MultibosonRep(1, (al,)), 0, n)
                a0m, amm, apm = rep.sector_matrices(s)
                m = bogoliubov.action_matrix(g).matrix
                xs = (a0m, amm, apm)
                for i in range(3):
                    img = m[i, 0] * a0m + m[i, 1] * amm + m[i, 2] * apm
                    ii = info.interior_rows
                    dev_cj = max(dev_cj, np.abs(
                        (u @ xs[i] @ u.T - img)[:ii, :ii]).max())
    out.append(_check("bogoliubov.implementer_unitarity", dev_u, 1e-8))
    out.append(_check("bogoliubov.implementer_conjugation", dev_cj, 1e-7))

    # one-mode diagonal case
    sec = rep.OneModeSector(rep.MultibosonRep(1, (2.0,)), 0, 40)
    h9 = onemode.OneModeHamiltonian(-3.0, -3.0, sec)
    atoms = onemode.spectrum(h9).atom_locations()
    expected = -3.0 * (2 * np.arange(40) + 2.0)
    out.append(_check("onemode.case9.diagonal_spectrum",
                      np.abs(atoms - expected).max(), 1e-12))

    # one-mode Meixner case vs oracle
    sec = rep.OneModeSector(rep.MultibosonRep(1, (1.0,)), 0, 100)
    h5 = onemode.OneModeHamiltonian(4.0, 1.0, sec)
    w = oracle_eigs(onemode.jacobi(h5), count=5)
    out.append(_check("onemode.case5.eigenvalues",
                      np.abs(w - (4.0 * np.arange(5) + 2.0)).max(), 1e-8))
    _, vecs = oracle_eigh(onemode.jacobi(h5))
    worst = 0.0
    for m in range(5):
        v = onemode.eigenvectors_discrete(h5, m).amplitudes.real
        worst = max(worst, 1.0 - abs(float(np.dot(v, vecs[:, m]))))
    out.append(_check("onemode.case5.eigenvector_overlap", worst, 1e-8))

    # finite two-mode blocks: closed form vs oracle, under both conventions
    dev = _hd_closed_vs_oracle("operator-derived")
    out.append(_check("twomode.hd.closed_vs_oracle", dev, 1e-9))
    blk = twomode.DBlock(1, 1.0, 1.0)
    w_printed = oracle_eigs(twomode.hd_block_jacobi(blk, convention="printed"))
    gap = np.abs(w_printed - twomode.hd_spectrum(blk)).max()
    if hd_convention == "printed":
        # the shifted off-diagonal variant is a known-bad regression pin:
        # this check is meant to fail
        out.append(_check("twomode.hd.printed_convention", gap, 1e-9,
                          expected_fail=True,
                          note="shifted b_k variant misses the closed-form "
                               f"spectrum by {gap:.3f} (regression pin)"))
    else:
        out.append(_check("twomode.hd.regression_pin_gap",
                          0.1, gap,
                          note="shifted b_k variant must stay wrong by >= 0.1"))

    # dual Hahn eigenvector overlaps
    worst = 0.0
    blk = twomode.DBlock(3, 0.5, 2.7)
    wv, vv = oracle_eigh(twomode.hd_block_jacobi(blk))
    for m in range(4):
        v = twomode.hd_eigenvectors(blk, m).amplitudes.real
        worst = max(worst, 1.0 - abs(float(np.dot(v, vv[:, m]))))
    out.append(_check("twomode.hd.eigenvector_overlap", worst, 1e-9))

    # C-form bound state
    nlev = 2000 if quick else 4000
    blk = twomode.CBlock(0, 0.3, 0.3, n_levels=nlev)
    p = twomode.uvw_params(0, 0.3, 0.3)
    out.append(_check("twomode.hc.uvw",
                      max(abs(p.u + 0.2), abs(p.v - 0.5), abs(p.w - 0.5)), 1e-14))
    chk = twomode.hc_truncation_check(blk)
    out.append(_check("twomode.hc.bound_state_energy",
                      abs(chk.extrapolated[-1] - 0.045), 1e-3,
                      note=f"raw top at N={nlev}: {chk.top_full[-1]:.6f}"))
    out.append(_check("twomode.hc.richardson_agreement", chk.agreement, 1e-3))
    out.append(_check("twomode.hc.continuum_edge",
                      float(chk.top_full[-2]), 0.005,
                      note="second eigenvalue must stay below the continuum edge"))

    # orthonormality suites
    dev_d = max(orthopoly.gram_check(orthopoly.DualHahn(0.0, 0.0, 3), 3),
                orthopoly.gram_check(orthopoly.Meixner(1.0, 1.0 / 9.0), 8))
    out.append(_check("orthopoly.gram.discrete", dev_d, 1e-10))
    dev_cont = max(orthopoly.gram_check(orthopoly.Laguerre(-0.5), 10),
                   orthopoly.gram_check(orthopoly.MeixnerPollaczek(0.75, math.pi / 2), 6))
    if not quick:
        dev_cont = max(dev_cont,
                       orthopoly.gram_check(orthopoly.ContinuousDualHahn(-0.2, 0.5, 0.5), 8),
                       orthopoly.gram_check(orthopoly.ContinuousDualHahn(0.5, 0.5, 1.0), 8))
    out.append(_check("orthopoly.gram.continuous", dev_cont, 1e-7))

    # coherent states
    worst = 0.0
    for al in (0.3, 1.0, 2.7):
        s = rep.OneModeSector(rep.MultibosonRep(1, (al,)), 0, 80)
        _, amm, _ = rep.sector_matrices(s)
        for z in (0.5, 2.0, 1.0 + 1.0j):
            if abs(z) > 2.0:
                continue
            cs = coherent.coherent_amplitudes(z, al, 80).amplitudes
            resid = np.linalg.norm(amm @ cs - z * cs) / np.linalg.norm(cs)
            worst = max(worst, resid)
    out.append(_check("coherent.eigenstate_residual", worst, 1e-8))
    worst = 0.0
    for al in (0.3, 1.0, 2.7):
        m = coherent.radial_measure(al, k_checked=4 if quick else 10)
        worst = max(worst, max(m.moment_error(k)
                               for k in range(5 if quick else 11)))
    out.append(_check("coherent.measure_moments", worst, 1e-6))

    # disc-model flow
    worst_det = worst_law = 0.0
    for mu, nu in ((4.0, 1.0), (1.0, -1.0), (2.0, 0.0), (3.0, 3.0)):
        for t, s in ((0.3, 0.9), (1.1, -0.4)):
            gt = coherent.su11_flow(mu, nu, t)
            gs = coherent.su11_flow(mu, nu, s)
            gts = coherent.su11_flow(mu, nu, t + s)
            prod = gt.multiply(gs)
            worst_det = max(worst_det, abs(gt.det() - 1.0))
            worst_law = max(worst_law, abs(prod.a - gts.a), abs(prod.b - gts.b))
    out.append(_check("coherent.su11_determinant", worst_det, 1e-12))
    out.append(_check("coherent.su11_group_law", worst_law, 1e-10))

    # preset equivalence and conservation laws
    pm = evolution.preset("HIV", 40)
    dev = np.abs(pm.matrix - pm.mapping.matrix()).max()
    out.append(_check("evolution.hiv_framework_equality", dev, 1e-12))
    n = 24 if quick else 48
    pm = evolution.preset("HIV", n)
    model = evolution.FullModel(pm.mapping, (1.0, 1.0), tail_tol=math.inf)
    psi0 = evolution.basis_state(model, (2, 3))
    ts = np.linspace(0.0, 10.0, 9 if quick else 21)
    series = evolution.run_series(model, psi0, ts)
    mr = [r.means[0] - r.means[1] for r in series.records]
    out.append(_check("evolution.hiv_manley_rowe_drift",
                      max(abs(v + 1.0) for v in mr), 1e-8))
    out.append(_check("evolution.norm_drift", max(series.norm_errors), 1e-10))

    return out


def format_report(results) -> str:
    lines = []
    width = max(len(r.name) for r in results)
    for r in results:
        lines.append(f"{r.name:<{width}}  dev={r.deviation:.3e}  "
                     f"tol={r.tolerance:.1e}  {r.status()}"
                     + (f"  [{r.note}]" if r.note else ""))
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines)
