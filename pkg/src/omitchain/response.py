"""Probe transmission eps_T(x) of the chain, by three routes.

* continued fraction: eps_T = 2*kappa_N / D_N with D_k built bottom-up,
* direct linear solve of the resolved-sideband single-sideband system,
* two-sideband linear solve of the full linearized equations.

Sign convention: every level uses (kappa + i x).  The conjugate convention
(kappa - i x) describes the same physics with Re(eps_T) unchanged and
Im(eps_T) negated; pass conjugate=True to emit it.  The two-sideband solver
works in the frame where the honest linearization lives and converts its
output to the package convention, so all three routes are directly
comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConfigurationError, SingularSystemError
from .model import NormalizedSystem

_ATOM_TERMS = ("derived", "literal")


def _atom_numerator(system: NormalizedSystem, atom_term: str) -> float:
    if atom_term not in _ATOM_TERMS:
        raise ConfigurationError(f"atom_term must be one of {_ATOM_TERMS}")
    sz = system.sigma_z_bar
    if atom_term == "derived":
        # Elimination of the atomic row gives g_a^2 (-sigma_z); real for the
        # real sigma_z the response solvers assume.
        return system.g_a**2 * float((-sz).real)
    return system.g_a**2 * abs(sz) ** 2


def chain_denominator(x: float, system: NormalizedSystem,
                      atom_term: str = "derived") -> complex:
    """Continued-fraction denominator D_N at angular detuning x.

    Returns complex infinity when an inner level hits an exact pole
    (possible only with lossless inputs).
    """
    a_num = _atom_numerator(system, atom_term) if system.atom_position is not None else 0.0
    pos = system.atom_position

    # Innermost level: cavity 1 with the mechanical term.
    d_mech = system.gamma_m + 1j * x
    if d_mech == 0:
        if abs(system.G) > 0:
            return complex(np.inf)
        mech = 0j
    else:
        mech = abs(system.G) ** 2 / d_mech

    D = system.kappa[0] + 1j * x + mech
    if pos == 1:
        d_at = system.gamma_a + 1j * x
        if d_at == 0:
            if a_num != 0:
                return complex(np.inf)
        else:
            D += a_num / d_at

    for k in range(1, system.n):
        if D == 0:
            return complex(np.inf)
        D = system.kappa[k] + 1j * x + system.hopping[k - 1] ** 2 / D
        if pos == k + 1:
            d_at = system.gamma_a + 1j * x
            if d_at == 0:
                if a_num != 0:
                    return complex(np.inf)
            else:
                D += a_num / d_at
    return D


def epsilon_T_cf(x: float, system: NormalizedSystem, *,
                 atom_term: str = "derived", conjugate: bool = False) -> complex:
    """Closed-form probe transmission 2*kappa_N / D_N.

    Requires resolved-sideband detunings.  At an exact lossless pole of an
    inner level the continuous limit eps_T = 0 is returned.
    """
    D = chain_denominator(x, system, atom_term)
    if not np.isfinite(D.real) or not np.isfinite(D.imag):
        return 0j
    eps = 2.0 * system.kappa_probe / D
    return np.conj(eps) if conjugate else eps


def _single_sideband_matrix(x: float, system: NormalizedSystem) -> tuple[np.ndarray, int]:
    """Coefficient matrix of the resolved-sideband system in (c_1..c_N, b, sigma)."""
    n = system.n
    has_atom = system.atom_position is not None
    dim = n + 1 + (1 if has_atom else 0)
    M = np.zeros((dim, dim), dtype=complex)
    g = system.hopping

    for row in range(n):
        M[row, row] = system.kappa[row] + 1j * x
        if row > 0:
            M[row, row - 1] = 1j * g[row - 1]
        if row < n - 1:
            M[row, row + 1] = 1j * g[row]
    # mechanical mode couples to cavity 1
    M[0, n] = -1j * system.G
    M[n, n] = system.gamma_m + 1j * x
    M[n, 0] = -1j * np.conj(system.G)
    if has_atom:
        i = system.atom_position - 1
        M[i, n + 1] = 1j * system.g_a
        M[n + 1, n + 1] = system.gamma_a + 1j * x
        M[n + 1, i] = -1j * system.g_a * system.sigma_z_bar
    return M, dim


def epsilon_T_linear(x: float, system: NormalizedSystem, epsilon_p: float = 1.0) -> complex:
    """Probe transmission from the direct (N+2)-dimensional linear solve.

    Same algebra as the continued fraction; agreement to round-off is the
    basic cross-check between the two routes.
    """
    if epsilon_p <= 0:
        raise ConfigurationError("epsilon_p must be positive")
    M, dim = _single_sideband_matrix(x, system)
    rhs = np.zeros(dim, dtype=complex)
    rhs[system.n - 1] = epsilon_p
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular response system at x={x}") from exc
    return 2.0 * system.kappa_probe * sol[system.n - 1] / epsilon_p


def epsilon_T_full(x: float, system: NormalizedSystem,
                   epsilon_p: float = 1.0) -> tuple[complex, float]:
    """Two-sideband solve of the full linearized equations.

    Keeps both probe sidebands, which couple through the mechanical term.
    Returns (eps_T, upper_sideband_fraction) where the fraction is
    |c_N,+| / |c_N,-|, quantifying what the single-sideband solvers neglect.
    The returned eps_T is converted to the package sign convention.
    """
    if epsilon_p <= 0:
        raise ConfigurationError("epsilon_p must be positive")
    n = system.n
    has_atom = system.atom_position is not None
    m = n + 1 + (1 if has_atom else 0)
    dim = 2 * m
    M = np.zeros((dim, dim), dtype=complex)
    rhs = np.zeros(dim, dtype=complex)

    Delta = x + system.omega_m  # probe-pump detuning
    det = list(system.Delta)
    det[0] = system.Delta_tilde_1
    g = system.hopping
    G = system.G
    ib = n          # index of b_- ; b_+* lives at m + ib
    isig = n + 1    # index of sigma_- when the atom is present

    # Unknown layout: [c_{1..N,-}, b_-, (sigma_-)] then the conjugated upper
    # sideband [c*_{1..N,+}, b*_+, (sigma*_+)].

    # minus-sideband cavity rows
    for row in range(n):
        M[row, row] = system.kappa[row] + 1j * (det[row] - Delta)
        if row > 0:
            M[row, row - 1] = 1j * g[row - 1]
        if row < n - 1:
            M[row, row + 1] = 1j * g[row]
    M[0, ib] = -1j * G
    M[0, m + ib] = -1j * G
    if has_atom:
        M[system.atom_position - 1, isig] = 1j * system.g_a

    # b_- row
    M[ib, ib] = system.gamma_m + 1j * (system.omega_m - Delta)
    M[ib, 0] = -1j * np.conj(G)
    M[ib, m] = -1j * G

    if has_atom:
        M[isig, isig] = system.gamma_a + 1j * (system.Delta_a - Delta)
        M[isig, system.atom_position - 1] = -1j * system.g_a * system.sigma_z_bar

    # conjugated plus-sideband cavity rows
    for row in range(n):
        M[m + row, m + row] = system.kappa[row] - 1j * (det[row] + Delta)
        if row > 0:
            M[m + row, m + row - 1] = -1j * g[row - 1]
        if row < n - 1:
            M[m + row, m + row + 1] = -1j * g[row]
    M[m, ib] = 1j * np.conj(G)
    M[m, m + ib] = 1j * np.conj(G)
    if has_atom:
        M[m + system.atom_position - 1, m + isig] = -1j * system.g_a

    # b_+* row
    M[m + ib, m + ib] = system.gamma_m - 1j * (system.omega_m + Delta)
    M[m + ib, 0] = 1j * np.conj(G)
    M[m + ib, m] = 1j * G

    if has_atom:
        M[m + isig, m + isig] = system.gamma_a - 1j * (system.Delta_a + Delta)
        M[m + isig, m + system.atom_position - 1] = 1j * np.conj(system.sigma_z_bar) * system.g_a

    rhs[n - 1] = epsilon_p

    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"singular two-sideband system at x={x}") from exc

    c_minus = sol[n - 1]
    c_plus = np.conj(sol[m + n - 1])
    eps_raw = 2.0 * system.kappa_probe * c_minus / epsilon_p
    frac = float(abs(c_plus) / abs(c_minus)) if c_minus != 0 else float("inf")
    # The honest linearization carries (kappa - i x); conjugating lands the
    # result in the package convention shared by cf and linear.
    return np.conj(eps_raw), frac


@dataclass(frozen=True)
class ResponseSpectrum:
    """eps_T sampled on a uniform grid of x / kappa_N."""

    x_grid: np.ndarray
    eps_T: np.ndarray
    method: str
    system_hash: str

    def __post_init__(self):
        if len(self.x_grid) != len(self.eps_T):
            raise ConfigurationError("x_grid and eps_T lengths differ")
        if len(self.x_grid) > 1 and not np.all(np.diff(self.x_grid) > 0):
            raise ConfigurationError("x_grid must be strictly increasing")

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            f.write("x_over_kappaN,re_eT,im_eT,abs_eT\n")
            for x, e in zip(self.x_grid, self.eps_T):
                f.write(f"{x:.17g},{e.real:.17g},{e.imag:.17g},{abs(e):.17g}\n")

    @classmethod
    def from_csv(cls, path, method: str = "file", system_hash: str = "") -> "ResponseSpectrum":
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        data = np.atleast_2d(data)
        if data.shape[1] < 3:
            raise ConfigurationError(f"{path}: expected columns x_over_kappaN,re_eT,im_eT[,abs_eT]")
        return cls(x_grid=data[:, 0], eps_T=data[:, 1] + 1j * data[:, 2],
                   method=method, system_hash=system_hash)


def spectrum(system: NormalizedSystem, x_min: float, x_max: float, n_points: int,
             method: str = "cf", *, epsilon_p: float = 1.0,
             atom_term: str = "derived") -> ResponseSpectrum:
    """Evaluate eps_T on a uniform grid of x in units of kappa_N."""
    if n_points < 2:
        raise ConfigurationError("n_points must be >= 2")
    if x_max <= x_min:
        raise ConfigurationError("x_max must exceed x_min")
    xg = np.linspace(x_min, x_max, n_points)
    kN = system.kappa_probe

    if method == "cf":
        eps = np.array([epsilon_T_cf(x * kN, system, atom_term=atom_term) for x in xg])
    elif method == "linear":
        eps = np.array([epsilon_T_linear(x * kN, system, epsilon_p) for x in xg])
    elif method == "full":
        eps = np.array([epsilon_T_full(x * kN, system, epsilon_p)[0] for x in xg])
    else:
        raise ConfigurationError(f"unknown method '{method}'")

    return ResponseSpectrum(x_grid=xg, eps_T=eps, method=method,
                            system_hash=system.content_hash())
