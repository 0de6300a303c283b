"""Dense state-vector simulator in the spin language (L <= 14).

Serves two roles: brute-force oracle for the Gaussian engine (entropies,
correlations) and direct access to the quench phenomenology that needs
X-basis product states or the integrability-breaking longitudinal field.

Basis conventions: site j (1-based) owns bit j-1 of the computational
index; a cleared bit is spin up (Z = +1), a set bit is spin down, i.e. an
occupied fermion site.  One period applies the diagonal field kick
exp(i h sum Z), then the bond-factorized coupling kick exp(i J sum XX),
then exp(i K sum X) when K is nonzero, then renormalizes.  Every gate is
exact: bond terms commute within a kick.  Spin observables use S = sigma/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .params import LatticeSpec, ModelParams, ProductState, QuenchConfig

MAX_SITES = 14


def _check_size(L: int):
    if L > MAX_SITES:
        raise CapacityError(f"dense simulation capped at {MAX_SITES} sites, got {L}")


def _z_site(L: int, j: int) -> np.ndarray:
    """Z eigenvalue of site j (1-based) for every basis index."""
    idx = np.arange(2 ** L)
    return 1.0 - 2.0 * ((idx >> (j - 1)) & 1)


def product_state(state: ProductState) -> np.ndarray:
    """Dense amplitudes of a z- or x-basis product state."""
    _check_size(state.L)
    psi = np.ones(1, dtype=complex)
    for s in state.pattern:
        if state.basis == "z":
            local = np.array([1.0, 0.0]) if s == 1 else np.array([0.0, 1.0])
        else:
            local = np.array([1.0, s]) / np.sqrt(2.0)
        psi = np.kron(local.astype(complex), psi)  # later sites on higher bits
    return psi


def apply_floquet_period(psi: np.ndarray, params: ModelParams,
                         lat: LatticeSpec, K: float = 0.0) -> np.ndarray:
    """One period of exp(iJ sum XX) exp(ih sum Z), optionally followed by
    exp(iK sum X), acting on a normalized state."""
    L = lat.L
    _check_size(L)
    if psi.shape != (2 ** L,):
        raise ValidationError("state vector has the wrong dimension")
    idx = np.arange(2 ** L)
    zsum = np.zeros(2 ** L)
    for j in range(1, L + 1):
        zsum += _z_site(L, j)
    psi = psi * np.exp(1j * params.h * zsum)
    n_bonds = L if lat.bc.periodic else L - 1
    cj, sj = np.cos(params.J), np.sin(params.J)
    for j in range(1, n_bonds + 1):
        j2 = j % L + 1
        mask = (1 << (j - 1)) | (1 << (j2 - 1))
        psi = cj * psi + 1j * sj * psi[idx ^ mask]
    if K != 0.0:
        ck, sk = np.cos(K), np.sin(K)
        for j in range(1, L + 1):
            psi = ck * psi + 1j * sk * psi[idx ^ (1 << (j - 1))]
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValidationError("state annihilated exactly")
    return psi / norm


def sx_expectations(psi: np.ndarray, L: int) -> np.ndarray:
    """<S_x^j> for all sites (S = sigma/2)."""
    idx = np.arange(2 ** L)
    return np.array([np.real(np.vdot(psi, psi[idx ^ (1 << j)])) / 2.0
                     for j in range(L)])


def z_expectations(psi: np.ndarray, L: int) -> np.ndarray:
    p = np.abs(psi) ** 2
    return np.array([float(np.sum(p * _z_site(L, j))) for j in range(1, L + 1)])


def xx_expectation(psi: np.ndarray, L: int, i: int, j: int) -> float:
    """<X_i X_j>, 1-based sites."""
    idx = np.arange(2 ** L)
    mask = (1 << (i - 1)) | (1 << (j - 1))
    return float(np.real(np.vdot(psi, psi[idx ^ mask])))


def sx_edge_correlation(psi: np.ndarray, L: int) -> float:
    """<S_x^1 S_x^L> = <X_1 X_L> / 4."""
    return xx_expectation(psi, L, 1, L) / 4.0


def ghz_overlap(psi: np.ndarray, basis: str = "x", sign: str = "best") -> float:
    """Squared overlap with (|+...+> +- |-...->)/sqrt(2) in the X basis (the
    ferromagnetic order parameter direction), or the Z-basis analog.

    The two cat signs span the ferromagnetic doublet; their nonunitary decay
    rates split at finite size, so which one the steady state approaches is
    an initial-state detail.  ``sign="best"`` reports the larger overlap.
    """
    dim = len(psi)
    if basis == "x":
        plus = np.ones(dim) / np.sqrt(dim)
        par = (-1.0) ** np.array([bin(i).count("1") for i in range(dim)])
        minus = par / np.sqrt(dim)
        cats = [(plus + minus) / np.sqrt(2.0), (plus - minus) / np.sqrt(2.0)]
    elif basis == "z":
        cat = np.zeros(dim)
        cat[0] = cat[-1] = 1.0 / np.sqrt(2.0)
        cat2 = np.zeros(dim)
        cat2[0], cat2[-1] = 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)
        cats = [cat, cat2]
    else:
        raise ValidationError("ghz basis must be 'x' or 'z'")
    overlaps = [float(abs(np.vdot(c, psi)) ** 2) for c in cats]
    if sign == "plus":
        return overlaps[0]
    if sign == "minus":
        return overlaps[1]
    if sign == "best":
        return max(overlaps)
    raise ValidationError("sign must be 'plus', 'minus' or 'best'")


def global_spin_flip(psi: np.ndarray, L: int) -> np.ndarray:
    """Apply prod_j Z_j (flips the X polarization of every site)."""
    idx = np.arange(2 ** L)
    parity = (-1.0) ** np.array([bin(int(i)).count("1") for i in idx])
    return psi * parity


def reduced_entropy_oracle(psi: np.ndarray, sites, L: int) -> float:
    """von Neumann entropy of the reduced state on ``sites`` (1-based) by
    dense partial trace."""
    _check_size(L)
    axes_keep = [L - s for s in sorted(sites)]  # tensor axis 0 is site L
    t = np.asarray(psi).reshape([2] * L)
    order = axes_keep + [ax for ax in range(L) if ax not in axes_keep]
    t = np.transpose(t, order).reshape(2 ** len(list(sites)), -1)
    sv = np.linalg.svd(t, compute_uv=False)
    p = sv ** 2
    p = p[p > 1e-14]
    return float(-np.sum(p * np.log(p)))


def _apply_majorana(psi: np.ndarray, m: int, L: int) -> np.ndarray:
    """Act with Majorana a_m (0-based index) on a dense state.

    a_{2j-1} = (prod_{l<j} Z_l) X_j and a_{2j} = -(prod_{l<j} Z_l) Y_j in
    the convention c_j = (prod_{l<j} Z_l)(X_j + i Y_j)/2.
    """
    j = m // 2 + 1
    idx = np.arange(2 ** L)
    string = np.ones(2 ** L)
    for l in range(1, j):
        string = string * _z_site(L, l)
    flipped = psi[idx ^ (1 << (j - 1))]
    if m % 2 == 0:  # a_{2j-1}: string * X_j
        return string * flipped
    # a_{2j} = -string * Y_j;  (Y psi)[n] = -i z_j(n) psi[n ^ bit]
    return string * (1j * _z_site(L, j)) * flipped


def majorana_correlation_dense(psi: np.ndarray, L: int) -> np.ndarray:
    """Majorana correlation matrix <a_m a_n> of a normalized dense state."""
    _check_size(L)
    acted = [_apply_majorana(psi, m, L) for m in range(2 * L)]
    c = np.empty((2 * L, 2 * L), dtype=complex)
    for m in range(2 * L):
        for n in range(2 * L):
            c[m, n] = np.vdot(acted[m], acted[n])  # a_m self-adjoint
    return c


# --------------------------------------------------------------------------
# quench experiments
# --------------------------------------------------------------------------

@dataclass
class ObservableTrace:
    sx: np.ndarray              # (n_periods, L)
    sx_edge_corr: np.ndarray    # (n_periods,)
    ghz: np.ndarray             # (n_periods,)
    first_steady: int | None = None

    @property
    def n_periods(self) -> int:
        return self.sx.shape[0]


def quench_experiment(params: ModelParams, lat: LatticeSpec,
                      quench: QuenchConfig,
                      steady_rtol: float = 1e-6,
                      steady_runs: int = 10) -> ObservableTrace:
    """Per-period spin observables for the configured quench.

    The steady-state detector records the first period after which the
    observable vector repeats (period-1 or period-2) within ``steady_rtol``
    for ``steady_runs`` consecutive checks; evolution continues to
    n_periods regardless.
    """
    L = lat.L
    psi = product_state(quench.initial_state)
    sx = np.zeros((quench.n_periods, L))
    edge = np.zeros(quench.n_periods)
    ghz = np.zeros(quench.n_periods)
    first_steady = None
    run = 0
    for t in range(quench.n_periods):
        psi = apply_floquet_period(psi, params, lat, K=quench.K)
        sx[t] = sx_expectations(psi, L)
        edge[t] = sx_edge_correlation(psi, L)
        ghz[t] = ghz_overlap(psi)
        if t >= 2:
            scale = max(np.max(np.abs(sx[t])), 1e-9)
            d1 = np.max(np.abs(sx[t] - sx[t - 1])) / scale
            d2 = np.max(np.abs(sx[t] - sx[t - 2])) / scale
            if min(d1, d2) < steady_rtol:
                run += 1
                if run >= steady_runs and first_steady is None:
                    first_steady = t + 1 - steady_runs
            else:
                run = 0
    return ObservableTrace(sx, edge, ghz, first_steady)
