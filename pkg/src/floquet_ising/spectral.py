"""Quasiparticle spectra of the one-period Majorana map.

Conventions
-----------
* The coupling kick contributes H_1 = i sum_j a_{2j} W'_{2j,2j+1} a_{2j+1}
  and the field kick H_2 = i sum_j a_{2j-1} W''_{2j-1,2j} a_{2j}, with the
  full antisymmetric matrices carrying J/2 and h/2 on their bonds.
* One period conjugates Majorana operators by exp(4W'') exp(4W'); the
  transfer matrix reported here is M = exp(4W') exp(4W''), similar to it,
  with identical spectrum.  M is complex orthogonal, so det M = 1 and the
  eigenvalues {mu} close under mu -> 1/mu.
* Quasienergies are eps = i Log(mu) on the principal branch, real parts
  folded to (-pi, pi].  For PBC-even the multiset equals the analytic
  momentum pairs {+-eps_k} over antiperiodic momenta; the test suite pins
  this calibration, so the branch scale is fixed at unity.
* Each kick is a direct sum of commuting two-Majorana rotations, so its
  exponential is assembled bond by bond in closed form (exact, O(L)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import MetricPoleError, NumericalBreakdown, ValidationError
from .params import (BoundaryCondition, LatticeSpec, ModelParams, PhaseLabel,
                     PI4)

QUASIENERGY_BRANCH_SCALE = 1.0  # pinned by the momentum-oracle calibration

# --------------------------------------------------------------------------
# quadratic forms and kick exponentials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MajoranaQuadraticForm:
    """Antisymmetric coefficient matrix W of H = i sum_jk a_j W_jk a_k.

    ``bonds`` lists the (p, q, w) entries in 0-based Majorana indices;
    kicks touch each Majorana at most once, enabling exact exponentials.
    """

    w: np.ndarray
    bonds: tuple[tuple[int, int, complex], ...] = ()

    def __post_init__(self):
        if np.linalg.norm(self.w + self.w.T) > 1e-12 * max(1.0, np.linalg.norm(self.w)):
            raise ValidationError("quadratic form must be antisymmetric")

    @property
    def n(self) -> int:
        return self.w.shape[0]


def _form_from_bonds(n: int, bonds) -> MajoranaQuadraticForm:
    w = np.zeros((n, n), dtype=complex)
    for p, q, s in bonds:
        w[p, q] += s
        w[q, p] -= s
    return MajoranaQuadraticForm(w, tuple(bonds))


def build_kick_forms(params: ModelParams, lat: LatticeSpec):
    """The two kick generators (W', W'') for the given chain.

    W' couples Majoranas (2j, 2j+1) with strength J/2; W'' couples
    (2j-1, 2j) with h/2.  On periodic chains the wraparound bond of W'
    carries the parity-sector sign (antiperiodic for the even sector);
    open chains drop it.
    """
    L, n = lat.L, lat.n_majorana
    field_bonds = [(2 * j - 2, 2 * j - 1, params.h / 2.0) for j in range(1, L + 1)]
    coupling_bonds = [(2 * j - 1, 2 * j, params.J / 2.0) for j in range(1, L)]
    if lat.bc.periodic:
        coupling_bonds.append((0, n - 1, -lat.bc.wrap_sign * params.J / 2.0))
    # (0, n-1) stores the (a_{2L}, a_1) bond with reversed orientation,
    # hence the extra minus sign on top of the sector sign.
    return (_form_from_bonds(n, coupling_bonds),
            _form_from_bonds(n, field_bonds))


def kick_exponential(form: MajoranaQuadraticForm, sign: float = 1.0,
                     dtype=np.complex128) -> np.ndarray:
    """exp(sign * 4 W) assembled bond by bond (exact for disjoint bonds)."""
    n = form.n
    m = np.eye(n, dtype=dtype)
    seen = np.zeros(n, dtype=bool)
    for p, q, s in form.bonds:
        if seen[p] or seen[q]:
            raise ValidationError("kick bonds must be disjoint")
        seen[p] = seen[q] = True
        w = dtype(sign) * 4 * dtype(s)
        c, sn = np.cos(w), np.sin(w)
        m[p, p] = c
        m[q, q] = c
        m[p, q] += sn
        m[q, p] -= sn
    return m


# --------------------------------------------------------------------------
# transfer matrix
# --------------------------------------------------------------------------

@dataclass
class TransferMatrix:
    """One-period Majorana map M = exp(4W') exp(4W'') with its spectrum."""

    m: np.ndarray
    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray | None
    diagonalizable: bool
    condition_estimate: float
    coupling_form: MajoranaQuadraticForm
    field_form: MajoranaQuadraticForm
    left_eigenvectors: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def frame_matrix(self) -> np.ndarray:
        """Propagator for annihilator frames: exp(-4W') exp(-4W'').

        Annihilator coefficient vectors transform with the transpose of the
        operator conjugation matrix exp(4W'') exp(4W'), which is this
        product by antisymmetry of the generators.
        """
        e1 = kick_exponential(self.coupling_form, sign=-1.0)
        e2 = kick_exponential(self.field_form, sign=-1.0)
        return e1 @ e2


def build_transfer_matrix(coupling_form: MajoranaQuadraticForm,
                          field_form: MajoranaQuadraticForm,
                          want_left: bool = False,
                          cond_cutoff: float = 1e10) -> TransferMatrix:
    if coupling_form.n != field_form.n:
        raise ValidationError("kick forms must have matching dimension")
    m = kick_exponential(coupling_form) @ kick_exponential(field_form)
    try:
        if want_left:
            mu, vl, vr = scipy.linalg.eig(m, left=True, right=True)
        else:
            mu, vr = np.linalg.eig(m)
            vl = None
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalBreakdown(f"eigendecomposition failed: {exc}") from exc
    sv = np.linalg.svd(vr, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    diag = cond < cond_cutoff
    if not diag:
        # exceptional point: fall back to Schur values, flagged
        t, _ = scipy.linalg.schur(m, output="complex")
        mu = np.diag(t).copy()
        vr = None
        vl = None
    return TransferMatrix(m, mu, vr, diag, cond, coupling_form, field_form, vl)


def fold_real_part(re: np.ndarray | float) -> np.ndarray | float:
    """Map real parts into (-pi, pi], identifying -pi with +pi."""
    out = np.mod(np.asarray(re, dtype=float) + np.pi, 2 * np.pi) - np.pi
    out = np.where(out <= -np.pi + 1e-15, out + 2 * np.pi, out)
    if np.isscalar(re):
        return float(out)
    return out


def quasienergies_from_eigenvalues(mu: np.ndarray) -> np.ndarray:
    eps = QUASIENERGY_BRANCH_SCALE * 1j * np.log(mu.astype(complex))
    return fold_real_part(eps.real) + 1j * eps.imag


# --------------------------------------------------------------------------
# momentum-space dispersion
# --------------------------------------------------------------------------

class ModeClass:
    REAL = "real"
    CONJUGATE_PAIR = "conjugate-pair"
    GROW_DECAY = "grow-decay"
    EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class DispersionPoint:
    k: float
    epsilon: tuple[complex, complex]
    w_k: complex
    x: complex
    classification: str


def _classify_pair(eps: complex, defect: float, tol: float) -> str:
    if defect < tol:
        return ModeClass.EXCEPTIONAL
    if abs(eps.imag) < tol:
        return ModeClass.REAL
    re = abs(fold_real_part(eps.real))
    if re < tol or abs(re - np.pi) < tol:
        return ModeClass.CONJUGATE_PAIR
    return ModeClass.GROW_DECAY


def floquet_dispersion(J: complex, h: complex, k: float,
                       tol: float = 1e-10) -> DispersionPoint:
    """Quasienergy pair at momentum k for the kicked chain.

    x = 2(1+cos k) cos(2h-2J) + 2(1-cos k) cos(2h+2J) and exp(w_k) are the
    two reciprocal roots of a quadratic with cosh(w_k) = x/4; the pair is
    eps = +-i w_k folded to the principal zone.
    """
    x = (2 * (1 + np.cos(k)) * np.cos(2 * h - 2 * J)
         + 2 * (1 - np.cos(k)) * np.cos(2 * h + 2 * J))
    disc = (x / 4.0) ** 2 - 1.0
    ew = x / 4.0 + np.sqrt(complex(disc))
    if abs(ew) < 1e-300:  # degenerate root at x = -4 exactly
        ew = x / 4.0 - np.sqrt(complex(disc))
    w = np.log(complex(ew))
    eps = 1j * w
    eps = complex(fold_real_part(eps.real), eps.imag)
    # the partner is the exact negative so the pair sums to zero; for a
    # +pi mode it therefore prints as -pi (same quasienergy class)
    pair = (eps, -eps)
    cls = _classify_pair(eps, abs(disc), tol)
    return DispersionPoint(float(k), pair, w, complex(x), cls)


def dispersion_continuous(J: complex, h: complex, k: float,
                          tol: float = 1e-10) -> DispersionPoint:
    """Continuous-time limit spectrum +-2 sqrt(h^2 - 2hJ cos k + J^2)."""
    rad = h * h - 2 * h * J * np.cos(k) + J * J
    lam = 2 * np.sqrt(complex(rad))
    cls = _classify_pair(lam, abs(rad), tol)
    return DispersionPoint(float(k), (lam, -lam), complex("nan"), complex(rad), cls)


def allowed_momenta(lat: LatticeSpec) -> np.ndarray:
    """Momenta of the fermion sector in (-pi, pi]."""
    L = lat.L
    if lat.bc is BoundaryCondition.PBC_EVEN:
        return np.array([-np.pi + (2 * m + 1) * np.pi / L for m in range(L)])
    if lat.bc is BoundaryCondition.PBC_ODD:
        return np.array([fold_real_part(2 * np.pi * m / L) for m in range(L)])
    raise ValidationError("momenta are defined for periodic chains")


@dataclass(frozen=True)
class RealModeCensus:
    count: int
    total: int

    @property
    def density(self) -> float:
        return self.count / self.total


def count_real_modes(params: ModelParams, lat_or_L, tol_real: float | None = None,
                     sectors: str = "both") -> RealModeCensus:
    """Census of real quasienergies over the allowed momenta.

    By default both parity sectors are scanned so that the isolated k = 0
    zero mode of the J = h line (periodic sector only) is visible.
    """
    L = lat_or_L.L if isinstance(lat_or_L, LatticeSpec) else int(lat_or_L)
    if sectors == "both":
        bcs = [BoundaryCondition.PBC_EVEN, BoundaryCondition.PBC_ODD]
    else:
        bcs = [BoundaryCondition(sectors)]
    count = total = 0
    for bc in bcs:
        lat = LatticeSpec(L, bc)
        eps = []
        for k in allowed_momenta(lat):
            pt = floquet_dispersion(params.J, params.h, k)
            eps.extend(pt.epsilon)
        eps = np.asarray(eps)
        radius = max(np.max(np.abs(eps)), 1.0)
        tol = tol_real if tol_real is not None else 1e-8 * radius
        count += int(np.sum(np.abs(eps.imag) < tol))
        total += len(eps)
    return RealModeCensus(count, total)


# --------------------------------------------------------------------------
# spectrum reports and edge modes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeModeRecord:
    kind: str                  # "zero" or "pi"
    energy: complex
    localization_length: float
    left_weight: float
    right_weight: float


@dataclass
class SpectrumReport:
    quasienergies: np.ndarray
    n_real_modes: int
    edge_modes: list[EdgeModeRecord]
    phase_label: PhaseLabel | None
    boundary_condition: BoundaryCondition
    diagonalizable: bool = True
    real_mode_density: float = 0.0
    delocalization_warning: bool = False


def quasienergies_from_transfer(tm: TransferMatrix,
                                bc: BoundaryCondition,
                                tol_real: float | None = None) -> SpectrumReport:
    eps = quasienergies_from_eigenvalues(tm.eigenvalues)
    radius = max(float(np.max(np.abs(eps))), 1.0)
    tol = tol_real if tol_real is not None else 1e-8 * radius
    n_real = int(np.sum(np.abs(eps.imag) < tol))
    return SpectrumReport(eps, n_real, [], None, bc, tm.diagonalizable,
                          n_real / len(eps))


def _inv2_ld(s):
    det = s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
    return np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]],
                    dtype=s.dtype) / det


def _refine_pair(tm: TransferMatrix, idx: np.ndarray) -> np.ndarray:
    """Eigenvalues of a two-mode cluster via biorthogonal projection.

    The invariant plane of a nearly degenerate pair is well conditioned even
    when the individual eigenvectors are not; restricting an extended
    precision rebuild of M to that plane resolves exponentially small edge
    splittings that plain double-precision eig smears to ~1e-6.
    """
    if tm.right_eigenvectors is None or tm.left_eigenvectors is None or len(idx) != 2:
        return tm.eigenvalues[idx]
    vr = np.linalg.qr(tm.right_eigenvectors[:, idx])[0].astype(np.clongdouble)
    vl = np.linalg.qr(tm.left_eigenvectors[:, idx])[0].astype(np.clongdouble)
    e1 = kick_exponential(tm.coupling_form, dtype=np.clongdouble)
    e2 = kick_exponential(tm.field_form, dtype=np.clongdouble)
    mq = e1 @ e2
    s = vl.conj().T @ vr
    if abs(s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]) < 1e-12:
        return tm.eigenvalues[idx]
    b = _inv2_ld(s) @ (vl.conj().T @ (mq @ vr))
    tr = b[0, 0] + b[1, 1]
    det = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
    disc = np.sqrt(tr * tr - 4 * det)
    return np.array([complex((tr + disc) / 2), complex((tr - disc) / 2)])


def _site_weights(vec: np.ndarray) -> np.ndarray:
    p = np.abs(vec) ** 2
    w = p[0::2] + p[1::2]
    return w / w.sum()


def _localization_length(weights: np.ndarray) -> float:
    """Decay length (sites) from a log-linear fit over the outer quarter."""
    L = len(weights)
    n = max(3, L // 4)
    if weights[:n].sum() >= weights[-n:].sum():
        tail = weights[:n]
    else:
        tail = weights[-n:][::-1]
    y = np.log(np.maximum(tail, 1e-300))
    slope = np.polyfit(np.arange(n), y, 1)[0]
    if slope >= 0:
        return float("inf")
    return float(-2.0 / slope)  # weights are |psi|^2


def detect_edge_modes(params: ModelParams, lat: LatticeSpec,
                      tol_edge: float = 1e-3, im_tol: float = 1e-2,
                      edge_fraction: float = 0.1,
                      refine: bool = True) -> SpectrumReport:
    """Scan the open-chain spectrum for localized zero and pi modes.

    Near alpha = pi/4 the edge modes delocalize at finite size; an empty
    scan there raises no error but sets ``delocalization_warning``.
    """
    if lat.bc.periodic:
        raise ValidationError("edge modes are defined for open chains")
    if lat.L < 8:
        raise ValidationError("edge detection needs L >= 8")
    w1, w2 = build_kick_forms(params, lat)
    tm = build_transfer_matrix(w1, w2, want_left=refine)
    report = quasienergies_from_transfer(tm, lat.bc)
    eps = report.quasienergies
    ne = max(1, int(edge_fraction * lat.L))

    candidates = {"zero": [], "pi": []}
    for i in range(tm.n):
        if abs(eps[i].imag) > im_tol or tm.right_eigenvectors is None:
            continue
        re = abs(eps[i].real)
        kind = None
        if re < tol_edge:
            kind = "zero"
        elif abs(re - np.pi) < tol_edge:
            kind = "pi"
        if kind is None:
            continue
        weights = _site_weights(tm.right_eigenvectors[:, i])
        lw, rw = float(weights[:ne].sum()), float(weights[-ne:].sum())
        if lw + rw <= 0.5:
            continue
        candidates[kind].append((i, weights, lw, rw))

    records = []
    for kind, items in candidates.items():
        idx = np.array([i for i, *_ in items], dtype=int)
        energies = {i: eps[i] for i in idx}
        if refine and len(idx) == 2:
            mu_ref = _refine_pair(tm, idx)
            eref = quasienergies_from_eigenvalues(mu_ref)
            # keep the refined value closest to each raw one
            d = np.abs(eref[:, None] - np.array([eps[i] for i in idx])[None, :])
            order = d.argmin(axis=0)
            for j, i in enumerate(idx):
                energies[i] = complex(eref[order[j]])
        for i, weights, lw, rw in items:
            records.append(EdgeModeRecord(kind, energies[i],
                                          _localization_length(weights), lw, rw))

    report.edge_modes = records
    a = (params.alpha_J % (np.pi / 2.0))
    report.delocalization_warning = (not records) and abs(a - PI4) < 0.1 * PI4
    return report


# --------------------------------------------------------------------------
# pseudo-Hermiticity certificates
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricOperator:
    eta: np.ndarray
    residual: float
    family: str
    certified: bool


def bdg_block(J: complex, h: complex, k: float) -> np.ndarray:
    """Single-particle Hamiltonian block in the (c_k, c^dag_{-k}) basis for
    H = J sum X X + h sum Z."""
    a = 2 * (J * np.cos(k) - h)
    b = 2j * J * np.sin(k)
    return np.array([[a, b], [-b, -a]], dtype=complex)


_NAMBU_FROM_MAJORANA = np.array([[1.0, 1.0], [1j, -1j]], dtype=complex)
_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def momentum_kick_blocks(J: complex, h: complex, k: float):
    """2x2 momentum blocks of exp(4W') and exp(4W'') in the Majorana basis."""
    e2 = np.array([[np.cos(2 * h), np.sin(2 * h)],
                   [-np.sin(2 * h), np.cos(2 * h)]], dtype=complex)
    e1 = np.array([[np.cos(2 * J), np.sin(2 * J) * np.exp(-1j * k)],
                   [-np.sin(2 * J) * np.exp(1j * k), np.cos(2 * J)]], dtype=complex)
    return e1, e2


def _branch_log(mu: complex) -> complex:
    """Principal log with Arg(-r) pinned to +pi regardless of signed zeros."""
    ang = math.atan2(mu.imag, mu.real)
    if abs(abs(ang) - math.pi) < 1e-12:
        ang = math.pi
    return math.log(abs(mu)) + 1j * ang


def effective_hamiltonian_nambu(J: complex, h: complex, k: float) -> np.ndarray:
    """i Log of the one-period momentum block, rotated to the complex-fermion
    basis, with the branch chosen so conjugation-paired eigenvalues stay
    paired (negative real propagator eigenvalues both take Arg = +pi)."""
    e1, e2 = momentum_kick_blocks(J, h, k)
    v = _NAMBU_FROM_MAJORANA
    t = np.linalg.solve(v, (e1 @ e2) @ v)
    mu, vec = np.linalg.eig(t)
    vinv = np.linalg.inv(vec)
    hk = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        hk += (1j * _branch_log(complex(mu[i]))) * np.outer(vec[:, i], vinv[i, :])
    return hk


def _metric_residual(eta: np.ndarray, hk: np.ndarray) -> float:
    lhs = eta @ hk @ np.linalg.inv(eta)
    return float(np.linalg.norm(lhs - hk.conj().T) / max(np.linalg.norm(hk), 1e-300))


def _hermitian_lstsq_metric(hk: np.ndarray) -> np.ndarray:
    """Least-squares Hermitian eta minimizing ||eta H - H^dag eta||."""
    n = hk.shape[0]
    basis = []
    for i in range(n):
        e = np.zeros((n, n), complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), complex)
            e[i, j] = e[j, i] = 1.0
            basis.append(e)
            e = np.zeros((n, n), complex)
            e[i, j] = 1j
            e[j, i] = -1j
            basis.append(e)
    cols = [ (b @ hk - hk.conj().T @ b).ravel() for b in basis ]
    a = np.array([np.concatenate([c.real, c.imag]) for c in cols]).T
    _, _, vt = np.linalg.svd(a)
    coef = vt[-1]
    eta = sum(c * b for c, b in zip(coef, basis))
    eta = eta / np.linalg.norm(eta) * math.sqrt(n)
    return eta


def pseudo_hermiticity_certificate(params: ModelParams, k: float,
                                   continuous: bool | None = None) -> MetricOperator:
    """Closed-form similarity metric where one is known, else a numerical
    least-squares attempt (reported, not certified).

    Families: (i) continuous limit with J = conj(h) uses the cot(k/2)
    metric; (ii) the alpha = pi/4 line uses the first Pauli matrix on the
    effective Floquet Hamiltonian; Hermitian couplings use the identity.
    """
    J, h = params.J, params.h
    hermitian = params.beta_J == 0 and params.beta_h == 0
    conj_pair = abs(J - np.conj(h)) < 1e-12 and not hermitian
    a_fold = params.alpha_J % (np.pi / 2.0)
    dual_line = (params.equal_alpha and abs(a_fold - PI4) < 1e-12
                 and not hermitian)
    if continuous is None:
        continuous = conj_pair

    if hermitian:
        hk = bdg_block(J, h, k) if continuous else effective_hamiltonian_nambu(J, h, k)
        eta = np.eye(2, dtype=complex)
        res = _metric_residual(eta, hk)
        return MetricOperator(eta, res, "hermitian", res < 1e-8)

    if conj_pair and continuous:
        if abs(math.sin(k / 2.0)) < 1e-12:
            raise MetricPoleError("cot(k/2) metric is singular at k = 0")
        g = (params.beta_J / params.alpha_J) / math.tan(k / 2.0)
        eta = np.array([[1.0, g], [g, 1.0]], dtype=complex)
        hk = bdg_block(J, h, k)
        res = _metric_residual(eta, hk)
        return MetricOperator(eta, res, "conjugate-couplings", res < 1e-8)

    if dual_line:
        hk = effective_hamiltonian_nambu(J, h, k)
        res = _metric_residual(_SIGMA_X, hk)
        return MetricOperator(_SIGMA_X.copy(), res, "self-dual-line", res < 1e-8)

    hk = effective_hamiltonian_nambu(J, h, k)
    eta = _hermitian_lstsq_metric(hk)
    sv = np.linalg.svd(eta, compute_uv=False)
    res = _metric_residual(eta, hk) if sv[-1] > 1e-8 * sv[0] else np.inf
    return MetricOperator(eta, res, "numerical", False)


def spectrum_conjugation_defect(eps: np.ndarray) -> float:
    """Distance between the quasienergy multiset and its conjugate.

    Optimal matching with real parts compared modulo 2 pi; zero means the
    spectrum closes under complex conjugation.
    """
    from scipy.optimize import linear_sum_assignment

    eps = np.asarray(eps, dtype=complex)
    conj = eps.conj()
    dre = np.abs(fold_real_part(eps.real[:, None] - conj.real[None, :]))
    dim = np.abs(eps.imag[:, None] - conj.imag[None, :])
    cost = np.hypot(dre, dim)
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

def classify_phase_from_spectrum(obc_report: SpectrumReport,
                                 pbc_census: RealModeCensus,
                                 density_threshold: float = 0.1,
                                 few_mode_max: int = 4) -> PhaseLabel:
    """Phase label from the edge-mode census plus the real-mode density."""
    if pbc_census.density >= density_threshold:
        return PhaseLabel.CRITICAL_VOLUME
    if pbc_census.count > few_mode_max:
        return PhaseLabel.AMBIGUOUS
    if pbc_census.count > 0:
        return PhaseLabel.CRITICAL_LOG
    kinds = {r.kind for r in obc_report.edge_modes}
    if kinds == set():
        return PhaseLabel.TRIVIAL
    if kinds == {"zero"}:
        return PhaseLabel.ZERO_MODE
    if kinds == {"pi"}:
        return PhaseLabel.PI_MODE
    return PhaseLabel.ZERO_PI


def classify_phase(params: ModelParams, L: int = 40,
                   tol_edge: float = 1e-3, im_tol: float = 1e-2,
                   confirm_L: int | None = 144) -> PhaseLabel:
    """Convenience wrapper: momentum census plus open-chain edge scan.

    Edge modes within a few localization lengths of a phase boundary are
    invisible at small L, so a disagreeing edge census at ``confirm_L``
    overrides the one at ``L`` (the bulk census is size-insensitive).
    """
    census = count_real_modes(params, L)
    obc = detect_edge_modes(params, LatticeSpec(L, BoundaryCondition.OBC),
                            tol_edge=tol_edge, im_tol=im_tol, refine=False)
    label = classify_phase_from_spectrum(obc, census)
    if confirm_L and confirm_L > L:
        obc2 = detect_edge_modes(params, LatticeSpec(confirm_L, BoundaryCondition.OBC),
                                 tol_edge=tol_edge, im_tol=im_tol, refine=False)
        label2 = classify_phase_from_spectrum(obc2, census)
        if label2 is not label:
            label = label2
    return label
