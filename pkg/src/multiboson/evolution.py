"""Time evolution under H_F = H0 + interaction, observables, and presets.

Schroedinger solutions factor as psi(t) = exp(-i H0 t) exp(-i H t) psi(0)
with H0 the free number Hamiltonian (diagonal phases).  The interaction
factor goes through spectral decompositions: closed-form eigenpairs for
finite D-blocks and the discrete one-mode cases, tridiagonal
eigendecompositions of the truncated blocks otherwise, and a
scaling-and-squaring matrix exponential for a generic two-mode interaction
with no aligned block structure.

Evolution of the truncated model is exactly unitary, so norms and the
block labels (Manley-Rowe charges) are conserved to roundoff for any
cutoff.  Whether the truncated model tracks the infinite one is a separate
question monitored through the state's tail fraction: models whose
interactions pump quanta without bound (all four presets at large t) leave
any fixed window, and runs probing conservation laws rather than
asymptotic occupations should declare a lax ``tail_tol``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import TruncationOverflowError
from .jacobi import JacobiOperator, oracle_eigh
from .onemode import OneModeHamiltonian, evolve as evolve_onemode
from .rep import MultibosonRep, StateVector
from .twomode import (CBlock, DBlock, TwoModeHamiltonian, TwoModeRep,
                      build_h_matrix, canonical_matrix, hd_block_jacobi,
                      hd_spectrum, hc_block_jacobi)
from .bogoliubov import GroupElement

__all__ = [
    "CanonicalInteraction",
    "FullModel",
    "PresetModel",
    "preset",
    "evolve_full",
    "observables",
    "ObservableRecord",
    "ObservableSeries",
    "run_series",
    "interaction_energy",
    "basis_state",
]


@dataclass(frozen=True)
class CanonicalInteraction:
    """scale * (canonical D- or C-form interaction) + offset on a sector."""

    kind: str
    reps: TwoModeRep
    sector: tuple[int, int]
    n_per_mode: int
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in ("D", "C"):
            raise ValueError(f"kind must be 'D' or 'C', got {self.kind!r}")
        if self.n_per_mode < 2:
            raise ValueError("need n_per_mode >= 2")

    def alpha0(self) -> float:
        return self.reps.rep0.alpha0_init[self.sector[0]]

    def beta0(self) -> float:
        return self.reps.rep1.alpha0_init[self.sector[1]]

    def matrix(self) -> np.ndarray:
        return (self.scale
                * canonical_matrix(self.kind, self.reps, self.sector, self.n_per_mode)
                + self.offset * np.eye(self.n_per_mode ** 2))


@dataclass(frozen=True)
class FullModel:
    """Free frequencies plus an interaction handle.

    ``interaction`` is a OneModeHamiltonian, a CanonicalInteraction, or a
    TwoModeHamiltonian (generic, exponentiated densely; pass ``n_per_mode``
    to fix its truncation).  ``omega`` has one entry per mode.
    """

    interaction: object
    omega: tuple[float, ...]
    tail_tol: float = 1e-8
    n_per_mode: int | None = None

    def __post_init__(self):
        n_modes = 1 if isinstance(self.interaction, OneModeHamiltonian) else 2
        if len(self.omega) != n_modes:
            raise ValueError(f"need {n_modes} frequencies, got {len(self.omega)}")
        if isinstance(self.interaction, TwoModeHamiltonian) and self.n_per_mode is None:
            raise ValueError("a generic two-mode interaction needs n_per_mode")

    def occupations(self) -> list[np.ndarray]:
        """Physical occupation numbers per mode over the flattened basis."""
        h = self.interaction
        if isinstance(h, OneModeHamiltonian):
            s = h.sector
            k = np.arange(s.n_levels)
            return [k * s.rep.l + s.r]
        reps, (r0, r1), n = _two_mode_layout(self)
        k0, k1 = np.divmod(np.arange(n * n), n)
        return [k0 * reps.rep0.l + r0, k1 * reps.rep1.l + r1]


def _two_mode_layout(model: "FullModel") -> tuple[TwoModeRep, tuple[int, int], int]:
    h = model.interaction
    if isinstance(h, CanonicalInteraction):
        return h.reps, h.sector, h.n_per_mode
    if isinstance(h, TwoModeHamiltonian):
        return h.reps, h.sector, model.n_per_mode
    raise TypeError(f"unsupported interaction {type(h).__name__}")


@dataclass
class _BlockEvolver:
    """Per-block spectral data for a canonical interaction."""

    indices: np.ndarray     # flattened positions of the block states
    energies: np.ndarray
    vectors: np.ndarray     # columns are eigenvectors in block coordinates

    def apply(self, amps: np.ndarray, t: float, scale: float, offset: float):
        sub = amps[self.indices]
        coeff = self.vectors.T @ sub
        phases = np.exp(-1j * t * (scale * self.energies + offset))
        amps[self.indices] = self.vectors @ (phases * coeff)


class InteractionEvolver:
    """Applies exp(-i H t) for the supported interaction kinds."""

    def __init__(self, model: FullModel):
        self.model = model
        h = model.interaction
        if isinstance(h, OneModeHamiltonian):
            self.kind = "onemode"
        elif isinstance(h, CanonicalInteraction):
            self.kind = "canonical"
            self.blocks = _canonical_blocks(h)
        elif isinstance(h, TwoModeHamiltonian):
            self.kind = "dense"
            self.matrix = build_h_matrix(h, model.n_per_mode)
        else:
            raise TypeError(f"unsupported interaction {type(h).__name__}")

    def apply(self, psi: np.ndarray, t: float) -> np.ndarray:
        h = self.model.interaction
        if self.kind == "onemode":
            sv = StateVector(psi, sector=h.sector, tail_tol=math.inf)
            return evolve_onemode(h, sv, -t).amplitudes
        if self.kind == "canonical":
            out = psi.astype(complex).copy()
            for blk in self.blocks:
                blk.apply(out, t, h.scale, h.offset)
            return out
        # scaling-and-squaring exponential; unitarity checked by callers
        u = scipy.linalg.expm(-1j * t * self.matrix)
        return u @ psi


def _canonical_blocks(h: CanonicalInteraction) -> list[_BlockEvolver]:
    n = h.n_per_mode
    a0, b0 = h.alpha0(), h.beta0()
    k0, k1 = np.divmod(np.arange(n * n), n)
    charge = k0 + k1 if h.kind == "D" else k0 - k1
    blocks = []
    for q in np.unique(charge):
        idx = np.flatnonzero(charge == q)
        order = np.argsort(k0[idx])
        idx = idx[order]
        m = idx.size
        if h.kind == "D" and q <= n - 1:
            # complete block: closed-form eigenvalues, recurrence eigenvectors
            blk = DBlock(int(q), a0, b0)
            op = hd_block_jacobi(blk)
            w = hd_spectrum(blk)
            v = _jacobi_eigvecs(op, m, w)
        else:
            op = _charge_block_operator(h, int(q), m)
            w, v = oracle_eigh(op, n=m)
        blocks.append(_BlockEvolver(idx, np.asarray(w, dtype=float), v))
    return blocks


def _charge_block_operator(h: CanonicalInteraction, q: int, m: int) -> JacobiOperator:
    """Tridiagonal restriction of the canonical interaction to one charge block."""
    a0, b0 = h.alpha0(), h.beta0()
    n = h.n_per_mode
    if h.kind == "C":
        blk = CBlock(q, a0, b0, n_levels=max(m, 2))
        op = hc_block_jacobi(blk)
        return JacobiOperator(op.diag, op.offdiag, m)
    # cut D-block: states (k, q - k), k = q - n + 1 .. n - 1
    base = q - n + 1
    full = hd_block_jacobi(DBlock(q, a0, b0))
    return JacobiOperator(
        diag=lambda j: full.diag(base + j),
        offdiag=lambda j: full.offdiag(base + j),
        size=m,
    )


def _jacobi_eigvecs(op: JacobiOperator, m: int, energies: np.ndarray) -> np.ndarray:
    d = op.diag_array(m)
    e = op.offdiag_array(m)
    v = np.empty((m, m))
    for i, x in enumerate(energies):
        p = np.zeros(m)
        p[0] = 1.0
        if m > 1:
            p[1] = (x - d[0]) / e[0]
        for k in range(1, m - 1):
            p[k + 1] = ((x - d[k]) * p[k] - e[k - 1] * p[k - 1]) / e[k]
        v[:, i] = p / np.linalg.norm(p)
    return v


def _free_phases(model: FullModel, t: float) -> np.ndarray:
    occ = model.occupations()
    total = sum(w * n for w, n in zip(model.omega, occ))
    return np.exp(-1j * t * total)


def evolve_full(model: FullModel, psi0: StateVector, t: float,
                _evolver: InteractionEvolver | None = None) -> StateVector:
    """psi(t) = exp(-i H0 t) exp(-i H t) psi0, with tail monitoring."""
    ev = InteractionEvolver(model) if _evolver is None else _evolver
    out = ev.apply(np.asarray(psi0.amplitudes, dtype=complex), t)
    out = _free_phases(model, t) * out
    result = StateVector(out, sector=psi0.sector, tail_tol=model.tail_tol)
    if result.tail_fraction() > model.tail_tol:
        raise TruncationOverflowError(
            f"tail fraction {result.tail_fraction():.2e} exceeds "
            f"{model.tail_tol:.2e} at t = {t}; increase the truncation",
            advised_n=None)
    return result


@dataclass(frozen=True)
class ObservableRecord:
    means: tuple[float, ...]
    variances: tuple[float, ...]
    fanos: tuple[float, ...]   # nan marks an undefined (zero-mean) Fano factor
    norm: float


def observables(psi: StateVector, model: FullModel) -> ObservableRecord:
    """Mean occupations, variances and Fano factors per mode."""
    p = np.abs(np.asarray(psi.amplitudes, dtype=complex)) ** 2
    total = float(p.sum())
    if total <= 0:
        raise ValueError("zero state")
    means, variances, fanos = [], [], []
    for occ in model.occupations():
        m1 = float((p * occ).sum()) / total
        m2 = float((p * occ.astype(float) ** 2).sum()) / total
        var = max(m2 - m1 * m1, 0.0)
        means.append(m1)
        variances.append(var)
        fanos.append(var / m1 if m1 > 1e-12 else math.nan)
    return ObservableRecord(tuple(means), tuple(variances), tuple(fanos),
                            math.sqrt(total))


@dataclass
class ObservableSeries:
    times: list[float]
    records: list[ObservableRecord]
    norm_errors: list[float] = field(default_factory=list)


def run_series(model: FullModel, psi0: StateVector, t_grid) -> ObservableSeries:
    """Observables along a time grid; one spectral solve shared by all times."""
    ev = InteractionEvolver(model)
    psi0n = psi0.normalized()
    series = ObservableSeries([], [])
    for t in t_grid:
        psi_t = evolve_full(model, psi0n, float(t), _evolver=ev)
        rec = observables(psi_t, model)
        series.times.append(float(t))
        series.records.append(rec)
        series.norm_errors.append(abs(rec.norm - 1.0))
    return series


def interaction_energy(model: FullModel, psi: StateVector) -> float:
    """<psi| H |psi> for the interaction factor (per the stripped state
    exp(+i H0 t) psi(t), this is conserved along any run)."""
    h = model.interaction
    amps = np.asarray(psi.amplitudes, dtype=complex)
    if isinstance(h, OneModeHamiltonian):
        from .onemode import jacobi as onemode_jacobi
        m = onemode_jacobi(h).dense(amps.size)
    elif isinstance(h, CanonicalInteraction):
        m = h.matrix()
    else:
        n = int(round(math.sqrt(amps.size)))
        m = build_h_matrix(h, n)
    return float(np.vdot(amps, m @ amps).real / np.vdot(amps, amps).real)


def basis_state(model: FullModel, occupations: tuple[int, ...]) -> StateVector:
    """Fock basis state |n0[, n1]> as a StateVector over the model's basis."""
    h = model.interaction
    if isinstance(h, OneModeHamiltonian):
        (n0,) = occupations
        s = h.sector
        if n0 % s.rep.l != s.r:
            raise ValueError(f"occupation {n0} not in sector r={s.r} (l={s.rep.l})")
        amps = np.zeros(s.n_levels, dtype=complex)
        amps[n0 // s.rep.l] = 1.0
        return StateVector(amps, sector=s, tail_tol=model.tail_tol)
    reps, (r0, r1), n = _two_mode_layout(model)
    n0, n1 = occupations
    l0, l1 = reps.rep0.l, reps.rep1.l
    if n0 % l0 != r0 or n1 % l1 != r1:
        raise ValueError(f"occupations {occupations} not in sector ({r0}, {r1})")
    k0, k1 = n0 // l0, n1 // l1
    if k0 >= n or k1 >= n:
        raise ValueError(f"occupations {occupations} outside truncation {n}")
    amps = np.zeros(n * n, dtype=complex)
    amps[k0 * n + k1] = 1.0
    return StateVector(amps, sector=(r0, r1), tail_tol=model.tail_tol)


# ---------------------------------------------------------------------------
# preset interaction Hamiltonians

@dataclass(frozen=True)
class PresetModel:
    """Preset matrix plus the cluster-model parameters reproducing it:

        matrix = mapping.scale * canonical_matrix(mapping.kind, ...)
                 + mapping.offset * Id
    """

    name: str
    matrix: np.ndarray
    mapping: CanonicalInteraction
    group_elements: tuple[GroupElement, GroupElement]


def _ladder(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)
    return a, a.T.copy(), np.diag(np.arange(n, dtype=float))


_HALF_TABLE = (0.5, 1.5)


def preset(name: str, n_per_mode: int) -> PresetModel:
    """The four model interactions, built from raw ladder matrices.

    H_I   = n0 + n1 + 2 n0 n1 + a0^2 a1^2 + h.c.
    H_II  = n0 + n1 + 2 n0 n1 + a0^2 (a1*)^2 + h.c.   (defined as the
            symmetric completion X + h.c. of the conversion term)
    H_III = n0 + n1 + 2 n0 n1 + sqrt(n0) a0* a1^2 + sqrt(n0+1) a0 (a1*)^2
    H_IV  = n0 + n1 + 2 n0 n1 + sqrt(n0 n1) a0* a1* + sqrt((n0+1)(n1+1)) a0 a1

    Every one is an affine image of a canonical D- or C-form on cluster
    representations; the returned mapping reproduces the matrix entrywise.
    """
    n = n_per_mode
    a, ad, num = _ladder(n)
    eye = np.eye(n)
    k = np.kron
    diag = k(num, eye) + k(eye, num) + 2.0 * k(num, num)
    sq = np.sqrt(np.arange(n, dtype=float))
    sq1 = np.sqrt(np.arange(1, n + 1, dtype=float))
    rep1 = MultibosonRep(1, (1.0,))
    rep2 = MultibosonRep(2, _HALF_TABLE)
    if name == "HI":
        x = k(a @ a, a @ a)
        m = diag + x + x.T
        mapping = CanonicalInteraction("C", TwoModeRep(rep2, rep2), (0, 0),
                                       (n + 1) // 2, scale=-4.0, offset=-0.5)
        pair = (GroupElement(1.0, -1), GroupElement(-1.0, 1))
    elif name == "HII":
        x = k(a @ a, ad @ ad)
        m = diag + x + x.T
        mapping = CanonicalInteraction("D", TwoModeRep(rep2, rep2), (0, 0),
                                       (n + 1) // 2, scale=4.0, offset=-0.5)
        pair = (GroupElement(1.0, -1), GroupElement(1.0, 1))
    elif name == "HIII":
        x = k(np.diag(sq) @ ad, a @ a)
        m = diag + x + x.T
        mapping = CanonicalInteraction("D", TwoModeRep(rep1, rep2), (0, 0),
                                       (n + 1) // 2, scale=2.0, offset=-0.5)
        pair = (GroupElement(1.0, -1), GroupElement(1.0, 1))
    elif name == "HIV":
        x = k(np.diag(sq) @ ad, np.diag(sq) @ ad)
        m = diag + x + x.T
        mapping = CanonicalInteraction("C", TwoModeRep(rep1, rep1), (0, 0),
                                       n, scale=-1.0, offset=-0.5)
        pair = (GroupElement(1.0, -1), GroupElement(-1.0, 1))
    else:
        raise ValueError(f"unknown preset {name!r}; use HI, HII, HIII or HIV")
    return PresetModel(name, m, mapping, pair)
