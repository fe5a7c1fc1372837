"""Full-model evolution, observables, and the preset interactions."""

import math

import numpy as np
import pytest
import scipy.linalg

from multiboson import evolution as ev
from multiboson import onemode as om
from multiboson import rep
from multiboson.errors import TruncationOverflowError
from multiboson.orthopoly import hyp0f1
from multiboson.twomode import TwoModeHamiltonian, TwoModeRep
from multiboson.bogoliubov import GroupElement


def test_preset_hiv_framework_equality():
    pm = ev.preset("HIV", 40)
    assert np.abs(pm.matrix - pm.mapping.matrix()).max() <= 1e-12
    # diagonal identity: (1/2)(2 n0 + 1)(2 n1 + 1) = 2 n0 n1 + n0 + n1 + 1/2
    for n0, n1 in ((0, 0), (3, 5), (7, 2)):
        assert 0.5 * (2 * n0 + 1) * (2 * n1 + 1) == pytest.approx(
            2 * n0 * n1 + n0 + n1 + 0.5)


def test_preset_hiii_framework_equality():
    # mode 1 carries two-boson clusters: the framework matrix lives on the
    # even-occupation sector, compare on the embedded window
    n = 24
    pm = ev.preset("HIII", n)
    nc = pm.mapping.n_per_mode
    sub = np.array([n0 * n + 2 * k1 for n0 in range(nc) for k1 in range(nc)])
    assert np.abs(pm.matrix[np.ix_(sub, sub)] - pm.mapping.matrix()).max() <= 1e-12


def test_preset_hi_hii_framework_equality_even_sector():
    n = 24
    for name in ("HI", "HII"):
        pm = ev.preset(name, n)
        nc = pm.mapping.n_per_mode
        sub = np.array([2 * k0 * n + 2 * k1 for k0 in range(nc) for k1 in range(nc)])
        assert np.abs(pm.matrix[np.ix_(sub, sub)] - pm.mapping.matrix()).max() <= 1e-12


def test_preset_hii_symmetric():
    pm = ev.preset("HII", 16)
    assert np.abs(pm.matrix - pm.matrix.T).max() == 0.0


def test_preset_hi_conserves_total_quanta_mod_4():
    n = 12
    pm = ev.preset("HI", n)
    k0, k1 = np.divmod(np.arange(n * n), n)
    grade = (k0 + k1) % 4
    mism = grade[:, None] != grade[None, :]
    assert np.abs(pm.matrix[mism]).max() == 0.0


def test_preset_unknown_name():
    with pytest.raises(ValueError):
        ev.preset("HV", 8)


def _hiv_model(n=24, tail=math.inf):
    pm = ev.preset("HIV", n)
    return ev.FullModel(pm.mapping, (1.0, 0.7), tail_tol=tail)


def test_evolve_full_t0_identity():
    model = _hiv_model()
    psi0 = ev.basis_state(model, (2, 3))
    out = ev.evolve_full(model, psi0, 0.0)
    assert np.abs(out.amplitudes - psi0.amplitudes).max() <= 1e-14


def test_free_phases_leave_occupations_invariant():
    model = _hiv_model()
    model0 = ev.FullModel(model.interaction, (0.0, 0.0), tail_tol=math.inf)
    psi0 = ev.basis_state(model, (2, 3))
    t = 0.37
    with_h0 = ev.observables(ev.evolve_full(model, psi0, t), model)
    without = ev.observables(ev.evolve_full(model0, psi0, t), model0)
    assert with_h0.means == pytest.approx(without.means, abs=1e-12)
    assert with_h0.variances == pytest.approx(without.variances, abs=1e-12)


def test_evolution_norm_and_time_reversal():
    model = _hiv_model()
    psi0 = ev.basis_state(model, (2, 3))
    t = 0.8
    out = ev.evolve_full(model, psi0, t)
    assert abs(out.norm() - 1.0) <= 1e-10
    # the two-factor propagator composes to the identity under t -> -t when
    # the free part is absent (or commutes with the interaction)
    pm = ev.preset("HIV", 24)
    bare = ev.FullModel(pm.mapping, (0.0, 0.0), tail_tol=math.inf)
    back = ev.evolve_full(bare, ev.evolve_full(bare, psi0, t), -t)
    assert np.abs(back.amplitudes - psi0.amplitudes).max() <= 1e-9


def test_time_reversal_with_commuting_free_part():
    # diagonal interaction: H commutes with the number operator, so the
    # full two-factor propagator reverses exactly
    sec = rep.OneModeSector(rep.MultibosonRep(1, (1.0,)), 0, 24)
    h = om.OneModeHamiltonian(1.5, 1.5, sec)
    model = ev.FullModel(h, (0.9,))
    amps = (0.5 ** np.arange(24)).astype(complex)
    psi0 = rep.StateVector(amps / np.linalg.norm(amps), sector=sec)
    back = ev.evolve_full(model, ev.evolve_full(model, psi0, 1.3), -1.3)
    assert np.abs(back.amplitudes - psi0.amplitudes).max() <= 1e-9


def test_block_amplitudes_never_leak():
    model = _hiv_model()
    n = model.interaction.n_per_mode
    psi0 = ev.basis_state(model, (2, 3))
    out = ev.evolve_full(model, psi0, 1.3)
    k0, k1 = np.divmod(np.arange(n * n), n)
    outside = (k0 - k1) != -1
    assert np.abs(out.amplitudes[outside]).max() <= 1e-12


def test_observables_number_state_and_superposition():
    model = _hiv_model()
    rec = ev.observables(ev.basis_state(model, (3, 5)), model)
    assert rec.means == pytest.approx((3.0, 5.0))
    assert rec.variances == pytest.approx((0.0, 0.0))
    assert math.isnan(ev.observables(ev.basis_state(model, (0, 0)), model).fanos[0])
    # one-mode equal superposition (|0> + |2>)/sqrt(2): mean 1, var 1, fano 1
    sec = rep.OneModeSector(rep.MultibosonRep(1, (1.0,)), 0, 12)
    h = om.OneModeHamiltonian(1.0, 1.0, sec)
    m1 = ev.FullModel(h, (1.0,))
    amps = np.zeros(12, dtype=complex)
    amps[0] = amps[2] = 1 / math.sqrt(2)
    rec = ev.observables(rep.StateVector(amps), m1)
    assert rec.means[0] == pytest.approx(1.0)
    assert rec.variances[0] == pytest.approx(1.0)
    assert rec.fanos[0] == pytest.approx(1.0)


def test_observables_coherent_profile_mean():
    # mean occupation of the unnormalized profile z^k / k! with (1)_k = k!:
    # lam * 0F1(; 2; lam) / 0F1(; 1; lam)
    lam = 1.7
    sec = rep.OneModeSector(rep.MultibosonRep(1, (1.0,)), 0, 60)
    h = om.OneModeHamiltonian(1.0, 1.0, sec)
    model = ev.FullModel(h, (1.0,))
    from multiboson.coherent import coherent_amplitudes
    psi = coherent_amplitudes(math.sqrt(lam), 1.0, 60)
    rec = ev.observables(psi, model)
    assert rec.means[0] == pytest.approx(lam * hyp0f1(2.0, lam) / hyp0f1(1.0, lam),
                                         rel=1e-10)


def test_run_series_constant_for_joint_eigenvector():
    # the D-form vacuum spans the one-dimensional charge-0 block: a joint
    # eigenvector of the interaction and the free part
    reps = TwoModeRep(rep.MultibosonRep(1, (1.0,)), rep.MultibosonRep(1, (1.0,)))
    model = ev.FullModel(ev.CanonicalInteraction("D", reps, (0, 0), 16),
                         (1.0, 0.7), tail_tol=math.inf)
    psi0 = ev.basis_state(model, (0, 0))
    series = ev.run_series(model, psi0, [0.0, 0.5, 1.0])
    for rec in series.records:
        assert rec.means == pytest.approx((0.0, 0.0), abs=1e-13)
        assert rec.variances == pytest.approx((0.0, 0.0), abs=1e-13)
    assert max(series.norm_errors) <= 1e-12


def test_run_series_manley_rowe_invariant():
    model = _hiv_model(n=32)
    psi0 = ev.basis_state(model, (2, 3))
    series = ev.run_series(model, psi0, np.linspace(0.0, 10.0, 11))
    diffs = [r.means[0] - r.means[1] for r in series.records]
    assert max(abs(d + 1.0) for d in diffs) <= 1e-8
    assert max(series.norm_errors) <= 1e-10


def test_interaction_energy_conserved():
    model = _hiv_model(n=28)
    psi0 = ev.basis_state(model, (1, 2))
    e0 = ev.interaction_energy(model, psi0)
    evolver = ev.InteractionEvolver(model)
    for t in (0.2, 0.9, 2.0):
        # strip the free-phase factor: exp(+i H0 t) psi(t) = exp(-i H t) psi0
        bare = evolver.apply(psi0.amplitudes, t)
        e_t = ev.interaction_energy(model, rep.StateVector(bare, tail_tol=math.inf))
        assert abs(e_t - e0) <= 1e-9 * max(1.0, abs(e0))


def test_tail_enforcement_raises():
    model = _hiv_model(n=16, tail=1e-8)
    psi0 = ev.basis_state(model, (2, 3))
    with pytest.raises(TruncationOverflowError):
        ev.evolve_full(model, psi0, 4.0)


def test_generic_two_mode_dense_route_matches_canonical():
    reps = TwoModeRep(rep.MultibosonRep(1, (1.0,)), rep.MultibosonRep(1, (1.0,)))
    generic = TwoModeHamiltonian(reps, GroupElement(1.0, -1), GroupElement(1.0, 1),
                                 (0, 0))
    n = 10
    dense_model = ev.FullModel(generic, (0.0, 0.0), tail_tol=math.inf, n_per_mode=n)
    canon = ev.FullModel(ev.CanonicalInteraction("D", reps, (0, 0), n),
                         (0.0, 0.0), tail_tol=math.inf)
    psi0 = ev.basis_state(canon, (1, 1))
    t = 0.6
    a = ev.evolve_full(dense_model, psi0, t)
    b = ev.evolve_full(canon, psi0, t)
    assert np.abs(a.amplitudes - b.amplitudes).max() <= 1e-10


def test_onemode_interaction_route():
    sec = rep.OneModeSector(rep.MultibosonRep(1, (1.0,)), 0, 100)
    h = om.OneModeHamiltonian(4.0, 1.0, sec)
    model = ev.FullModel(h, (0.5,))
    amps = np.zeros(100, dtype=complex)
    amps[0] = 1.0
    psi0 = rep.StateVector(amps, sector=sec)
    t = 0.37
    out = ev.evolve_full(model, psi0, t)
    j = om.jacobi(h).dense()
    h0 = np.diag(0.5 * np.arange(100.0))
    ref = scipy.linalg.expm(-1j * t * h0) @ scipy.linalg.expm(-1j * t * j) @ amps
    assert np.abs(out.amplitudes - ref).max() <= 1e-7
