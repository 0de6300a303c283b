"""Entropy functionals on Majorana correlation matrices and scaling fits.

The restricted block C'_A of C' = C - 1 is Hermitian and antisymmetric, so
its eigenvalues come in real pairs +-nu_i with nu_i in [-1, 1].  The von
Neumann entropy sums the binary entropy of (1 + nu)/2 over one member of
each pair; summing the full 2 L_A spectrum and halving avoids any pairing
bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CollapseError, PurityViolation, ValidationError
from .params import LatticeSpec, SubsystemSpec, TeePartition

_CLAMP = 1e-14
_PURITY_SLACK = 1e-6


@dataclass(frozen=True)
class EntropyReport:
    entropy: float
    nu: np.ndarray
    renyi: dict[int, float] | None = None


def _nu_spectrum(block_cprime: np.ndarray) -> np.ndarray:
    herm_defect = np.linalg.norm(block_cprime - block_cprime.conj().T)
    if herm_defect > 1e-8 * max(1.0, np.linalg.norm(block_cprime)):
        raise PurityViolation("restricted C' is not Hermitian: "
                              f"defect {herm_defect:.2e}")
    nu = np.linalg.eigvalsh(block_cprime)
    worst = float(np.max(np.abs(nu)) - 1.0)
    if worst > _PURITY_SLACK:
        raise PurityViolation(f"correlation eigenvalue outside [-1, 1] by {worst:.2e}")
    return nu


def _binary_entropy_sum(nu: np.ndarray) -> float:
    nu = np.clip(nu, -1.0 + _CLAMP, 1.0 - _CLAMP)
    p = (1.0 + nu) / 2.0
    q = (1.0 - nu) / 2.0
    return float(-0.5 * np.sum(p * np.log(p) + q * np.log(q)))


def entropy_from_majorana_block(block_c: np.ndarray,
                                renyi_orders=()) -> EntropyReport:
    """Entropy of a subsystem given its restricted correlation block C_A."""
    cp = block_c - np.eye(block_c.shape[0])
    nu = _nu_spectrum(cp)
    renyi = {n: _renyi_from_nu(nu, n) for n in renyi_orders} or None
    return EntropyReport(_binary_entropy_sum(nu), nu, renyi)


def entropy_from_correlations(corr, subsystem: SubsystemSpec,
                              lat: LatticeSpec, renyi_orders=()) -> EntropyReport:
    """Restrict C to the subsystem's Majorana block and evaluate."""
    c = corr.c if hasattr(corr, "c") else np.asarray(corr)
    idx = subsystem.majorana_indices(lat)
    return entropy_from_majorana_block(c[np.ix_(idx, idx)], renyi_orders)


def _renyi_from_nu(nu: np.ndarray, n: int) -> float:
    nu = np.clip(nu, -1.0 + _CLAMP, 1.0 - _CLAMP)
    p = (1.0 + nu) / 2.0
    q = (1.0 - nu) / 2.0
    return float(np.sum(np.log(p ** n + q ** n)) / (2.0 * (1.0 - n)))


def renyi_entropy(corr, subsystem: SubsystemSpec, lat: LatticeSpec, n: int) -> float:
    """Order-n Renyi entropy from the same nu spectrum; n = 1 is von Neumann."""
    if n < 1 or int(n) != n:
        raise ValidationError("Renyi order must be a positive integer")
    report = entropy_from_correlations(corr, subsystem, lat)
    if n == 1:
        return report.entropy
    return _renyi_from_nu(report.nu, int(n))


def mutual_information(corr, sub_a: SubsystemSpec, sub_b: SubsystemSpec,
                       lat: LatticeSpec) -> float:
    sites_a, sites_b = set(sub_a.sites(lat)), set(sub_b.sites(lat))
    if sites_a & sites_b:
        raise ValidationError("mutual information needs disjoint subsystems")
    c = corr.c if hasattr(corr, "c") else np.asarray(corr)
    idx_a = sub_a.majorana_indices(lat)
    idx_b = sub_b.majorana_indices(lat)
    idx_ab = np.concatenate([idx_a, idx_b])
    s = lambda idx: entropy_from_majorana_block(c[np.ix_(idx, idx)]).entropy
    return s(idx_a) + s(idx_b) - s(idx_ab)


# --------------------------------------------------------------------------
# topological entanglement entropy
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TeeResult:
    s_top: float
    lengths: tuple[int, int, int, int]
    L: int


def tee(corr, partition: TeePartition, lat: LatticeSpec) -> TeeResult:
    """S_AB + S_BC - S_B - S_ABC over the four-segment partition.

    Equal to the conditional mutual information I(A : C | B); quantized at
    ln 2 when the end segments A and C share the nonlocal Majorana pair.
    """
    segs = partition.segments(lat)
    c = corr.c if hasattr(corr, "c") else np.asarray(corr)

    def s(sites):
        idx = []
        for site in sorted(sites):
            idx.extend((2 * site - 2, 2 * site - 1))
        idx = np.asarray(idx, dtype=int)
        return entropy_from_majorana_block(c[np.ix_(idx, idx)]).entropy

    a, b, cseg = segs["A"], segs["B"], segs["C"]
    s_top = s(a + b) + s(b + cseg) - s(b) - s(a + b + cseg)
    return TeeResult(float(s_top), partition.lengths, lat.L)


# --------------------------------------------------------------------------
# scaling fits
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingFit:
    a: float          # coefficient of the chord-log term
    b: float          # offset
    residual: float
    law: str          # "area" | "log" | "volume"
    slope: float      # linear-fit slope, nats per site


def chord_abscissa(L, L_A) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    L_A = np.asarray(L_A, dtype=float)
    return np.log(L / np.pi * np.sin(np.pi * L_A / L))


def fit_scaling(points, volume_slope_threshold: float = 0.05,
                log_coefficient_threshold: float = 0.02) -> ScalingFit:
    """Classify entropy scaling from (L, L_A, S_A) samples.

    Fits S = a ln((L/pi) sin(pi L_A / L)) + b and a straight line in L_A;
    volume wins if the linear slope exceeds the threshold and its residual
    beats the log fit, log wins if a exceeds its threshold and the log fit
    is tighter, otherwise area.
    """
    pts = [(float(L), float(la), float(s)) for L, la, s in points]
    if len(pts) < 6:
        raise ValidationError("need at least 6 scaling points")
    L = np.array([p[0] for p in pts])
    la = np.array([p[1] for p in pts])
    s = np.array([p[2] for p in pts])
    x = chord_abscissa(L, la)
    if np.ptp(x) < 1e-12 or np.ptp(la) < 1e-12:
        raise ValidationError("degenerate design: abscissa does not vary")
    (a, b), log_res = _lstsq_line(x, s)
    (slope, _), lin_res = _lstsq_line(la, s)
    if slope > volume_slope_threshold and lin_res < log_res:
        law = "volume"
    elif a > log_coefficient_threshold and log_res <= lin_res:
        law = "log"
    else:
        law = "area"
    return ScalingFit(float(a), float(b), float(log_res), law, float(slope))


def _lstsq_line(x, y):
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    res = float(np.sum((design @ coef - y) ** 2))
    return (float(coef[0]), float(coef[1])), res


# --------------------------------------------------------------------------
# finite-size collapse of the TEE crossing
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CollapseResult:
    beta_J0: float
    nu: float
    collapse_residual: float


def _collapse_cost(curves, beta0: float, nu: float):
    """Mean squared deviation of every sample from the other curves'
    piecewise-linear interpolants over the common rescaled window."""
    rescaled = []
    for L, (betas, values) in curves.items():
        x = (np.asarray(betas) - beta0) * L ** nu
        rescaled.append((x, np.asarray(values)))
    lo = max(x.min() for x, _ in rescaled)
    hi = min(x.max() for x, _ in rescaled)
    if hi <= lo:
        return None
    total, count = 0.0, 0
    for i, (xi, vi) in enumerate(rescaled):
        sel = (xi >= lo) & (xi <= hi)
        if not np.any(sel):
            continue
        for j, (xj, vj) in enumerate(rescaled):
            if i == j:
                continue
            pred = np.interp(xi[sel], xj, vj)
            total += float(np.sum((vi[sel] - pred) ** 2))
            count += int(sel.sum())
    if count == 0:
        return None
    return total / count


def tee_collapse(curves: dict[int, tuple[np.ndarray, np.ndarray]],
                 beta0_grid=None, nu_grid=None,
                 refinements: int = 2) -> CollapseResult:
    """Grid search for (beta_J0, nu) collapsing S_top(beta_J; L) curves.

    ``curves`` maps L to (beta_J grid, S_top values).  Ties break toward
    smaller nu.  Raises CollapseError if no rescaled overlap exists.
    """
    if len(curves) < 3:
        raise ValidationError("collapse needs at least 3 system sizes")
    all_betas = np.concatenate([np.asarray(b) for b, _ in curves.values()])
    if beta0_grid is None:
        beta0_grid = np.linspace(all_betas.min(), all_betas.max(), 41)
    if nu_grid is None:
        nu_grid = np.linspace(0.3, 2.0, 35)
    best = None
    for _ in range(refinements + 1):
        for b0 in beta0_grid:
            for nu in nu_grid:
                cost = _collapse_cost(curves, float(b0), float(nu))
                if cost is None:
                    continue
                key = (cost, nu)
                if best is None or key < (best[0], best[1][1]):
                    best = (cost, (float(b0), float(nu)))
        if best is None:
            raise CollapseError("rescaled curves never overlap")
        b0c, nuc = best[1]
        db = (beta0_grid[1] - beta0_grid[0]) if len(beta0_grid) > 1 else 0.01
        dn = (nu_grid[1] - nu_grid[0]) if len(nu_grid) > 1 else 0.05
        beta0_grid = np.linspace(b0c - db, b0c + db, 21)
        nu_grid = np.linspace(max(0.05, nuc - dn), nuc + dn, 21)
    cost, (b0, nu) = best
    return CollapseResult(b0, nu, cost)
