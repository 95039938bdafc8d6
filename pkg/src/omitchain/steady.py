"""Self-consistent pump-only steady state of the mean-field equations.

With the probe off the chain amplitudes obey a complex tridiagonal system
whose first row carries the static mechanical shift and whose atom row
carries the adiabatically eliminated two-level response.  The mechanical
displacement sum lambda_bar and the atomic inversion sigma_z_bar close the
loop, so the full steady state is the fixed point of a two-scalar map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConvergenceError, DegenerateInputError, SingularSystemError
from .model import Drive, NormalizedSystem, PhysicalConfig, normalize


@dataclass(frozen=True)
class SteadyState:
    """Mean-field fixed point of the pump-only equations."""

    c_bar: tuple[complex, ...]
    lambda_bar: float
    sigma_minus_bar: complex
    sigma_z_bar: complex
    residual_norm: float
    iterations: int


_ZERO_STEADY = SteadyState(c_bar=(0j,), lambda_bar=0.0, sigma_minus_bar=0j,
                           sigma_z_bar=-1.0 + 0j, residual_norm=0.0, iterations=0)


def lambda_of(c_1: complex, g: float, omega_m: float, gamma_m: float) -> float:
    """Steady mechanical displacement sum b_bar + b_bar* driven by |c_1|^2."""
    return 2.0 * omega_m * g * abs(c_1) ** 2 / (omega_m**2 + gamma_m**2)


def sigma_z_of(c_i: complex, g_a: float, gamma_a: float, Delta_a: float) -> complex:
    """Steady atomic inversion for intracavity amplitude c_i.

    Reduces to -1 for an empty cavity or a resonant atom; tends to 0 in the
    lossless-atom limit with finite drive.
    """
    num = gamma_a * (gamma_a**2 + Delta_a**2)
    den = 2j * Delta_a * g_a**2 * abs(c_i) ** 2 - num
    if den == 0:
        if num == 0:
            raise DegenerateInputError("sigma_z undefined: gamma_a = 0 and no atomic drive")
        raise DegenerateInputError("sigma_z undefined: vanishing denominator")
    return num / den


def _row1_detuning(system: NormalizedSystem, lambda_bar: float) -> float:
    # Resolved-sideband mode pins Delta_tilde_1 = omega_m; the shift is
    # already absorbed there, so lambda_bar only enters in explicit mode.
    if system.resolved_sideband:
        return system.Delta_tilde_1
    return system.Delta[0] - system.g_single_photon * lambda_bar


def _atom_diagonal_term(system: NormalizedSystem, sigma_z: complex) -> complex:
    # Eliminated atomic response sigma_minus = i g_a c_i sigma_z / (gamma_a + i Delta_a)
    # adds -g_a^2 sigma_z / (gamma_a + i Delta_a) to the diagonal of row i.
    return -system.g_a**2 * sigma_z / (system.gamma_a + 1j * system.Delta_a)


def chain_steady_linear(system: NormalizedSystem, lambda_bar: float,
                        sigma_z: complex, epsilon_c: float) -> np.ndarray:
    """Solve the pump-only tridiagonal chain for fixed lambda_bar and sigma_z.

    Returns the N complex amplitudes c_bar_1 ... c_bar_N.
    """
    n = system.n
    diag = np.array([k + 1j * d for k, d in zip(system.kappa, system.Delta)], dtype=complex)
    diag[0] = system.kappa[0] + 1j * _row1_detuning(system, lambda_bar)
    if system.atom_position is not None:
        diag[system.atom_position - 1] += _atom_diagonal_term(system, sigma_z)

    rhs = np.zeros(n, dtype=complex)
    rhs[-1] = epsilon_c

    if n == 1:
        if diag[0] == 0:
            raise SingularSystemError("single-cavity steady system is singular")
        return rhs / diag

    off = 1j * np.asarray(system.hopping, dtype=complex)
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = off          # superdiagonal
    ab[1, :] = diag
    ab[2, :-1] = off         # subdiagonal
    try:
        return solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - lossless poles only
        raise SingularSystemError(str(exc)) from exc


def _sigma_minus_of(system: NormalizedSystem, c_i: complex, sigma_z: complex) -> complex:
    if system.atom_position is None or system.g_a == 0:
        return 0j
    return 1j * system.g_a * c_i * sigma_z / (system.gamma_a + 1j * system.Delta_a)


def steady_residual(system: NormalizedSystem, state: SteadyState, epsilon_c: float) -> float:
    """Max absolute residual of the steady equations, relative to max(|eps_c|, 1)."""
    n = system.n
    c = np.asarray(state.c_bar, dtype=complex)
    g = np.asarray(system.hopping)
    res = []

    diag = np.array([k + 1j * d for k, d in zip(system.kappa, system.Delta)], dtype=complex)
    diag[0] = system.kappa[0] + 1j * _row1_detuning(system, state.lambda_bar)
    for row in range(n):
        r = -diag[row] * c[row]
        if row > 0:
            r += -1j * g[row - 1] * c[row - 1]
        if row < n - 1:
            r += -1j * g[row] * c[row + 1]
        if system.atom_position is not None and row == system.atom_position - 1:
            r += -1j * system.g_a * state.sigma_minus_bar
        if row == n - 1:
            r += epsilon_c
        res.append(abs(r))

    # Mechanical closure: lambda_bar must equal 2 Re(b_bar) with
    # b_bar = i g |c_1|^2 / (gamma_m + i omega_m).
    gsp = system.g_single_photon
    b_bar = 1j * gsp * abs(c[0]) ** 2 / (system.gamma_m + 1j * system.omega_m)
    res.append(abs(state.lambda_bar - 2.0 * b_bar.real))

    if system.atom_position is not None:
        c_i = c[system.atom_position - 1]
        sz = state.sigma_z_bar
        sm = state.sigma_minus_bar
        res.append(abs(-(system.gamma_a + 1j * system.Delta_a) * sm
                       + 1j * system.g_a * c_i * sz))
        # sigma_plus from the conjugate-structure equation, consistent with
        # the algebra behind sigma_z_of (sigma_z may be complex).
        sp = -1j * system.g_a * np.conj(c_i) * sz / (system.gamma_a - 1j * system.Delta_a)
        res.append(abs(-2.0 * (1.0 + sz) * system.gamma_a
                       + 2j * system.g_a * (np.conj(c_i) * sm + c_i * sp)))

    return float(max(res)) / max(abs(epsilon_c), 1.0)


def solve_self_consistent(system: NormalizedSystem, epsilon_c: float, *,
                          tol: float = 1e-12, max_iter: int = 10_000,
                          damping: float = 0.5) -> SteadyState:
    """Iterate chain solve <-> (lambda_of, sigma_z_of) to a fixed point.

    Starts from lambda_bar = 0, sigma_z_bar = -1 (exact in the undriven
    limit); updates are damped.  Returns the branch reached from that guess
    and raises ConvergenceError otherwise.
    """
    if epsilon_c == 0:
        c = (0j,) * system.n
        state = SteadyState(c_bar=c, lambda_bar=0.0, sigma_minus_bar=0j,
                            sigma_z_bar=-1.0 + 0j, residual_norm=0.0, iterations=1)
        return state

    lam = 0.0
    sz: complex = -1.0 + 0j
    gsp = system.g_single_photon
    scale = max(abs(epsilon_c), 1.0)

    c = None
    for it in range(1, max_iter + 1):
        c = chain_steady_linear(system, lam, sz, epsilon_c)
        lam_new = lambda_of(c[0], gsp, system.omega_m, system.gamma_m)
        if system.atom_position is not None and system.g_a > 0:
            sz_new = sigma_z_of(c[system.atom_position - 1], system.g_a,
                                system.gamma_a, system.Delta_a)
        else:
            sz_new = -1.0 + 0j

        change = max(abs(lam_new - lam), abs(sz_new - sz))
        lam = lam + damping * (lam_new - lam)
        sz = sz + damping * (sz_new - sz)
        if change < tol * max(1.0, abs(lam), abs(sz)):
            break
    else:
        state = _assemble(system, c, lam, sz, epsilon_c, max_iter)
        raise ConvergenceError(
            f"steady state did not converge after {max_iter} iterations "
            f"(residual {state.residual_norm:.3e})", state.residual_norm)

    # One undamped pass so the reported amplitudes match the final scalars.
    c = chain_steady_linear(system, lam, sz, epsilon_c)
    lam = lambda_of(c[0], gsp, system.omega_m, system.gamma_m)
    if system.atom_position is not None and system.g_a > 0:
        sz = sigma_z_of(c[system.atom_position - 1], system.g_a,
                        system.gamma_a, system.Delta_a)
    return _assemble(system, c, lam, sz, epsilon_c, it)


def _assemble(system: NormalizedSystem, c, lam: float, sz: complex,
              epsilon_c: float, iterations: int) -> SteadyState:
    c_i = c[system.atom_position - 1] if system.atom_position is not None else 0j
    state = SteadyState(
        c_bar=tuple(complex(v) for v in c),
        lambda_bar=float(lam),
        sigma_minus_bar=_sigma_minus_of(system, c_i, sz),
        sigma_z_bar=complex(sz),
        residual_norm=0.0,
        iterations=iterations,
    )
    resid = steady_residual(system, state, epsilon_c)
    return SteadyState(state.c_bar, state.lambda_bar, state.sigma_minus_bar,
                       state.sigma_z_bar, resid, iterations)


def solve_from_config(config: PhysicalConfig) -> tuple[NormalizedSystem, SteadyState]:
    """Resolve a Drive-mode config into its normalized system and steady state.

    Breaks the normalize <-> steady circularity: a provisional zero steady
    state fixes the units, the chain is solved, and normalize is re-run with
    the true amplitudes (G = g * c_bar_1).
    """
    dm = config.drive_mode
    if not isinstance(dm, Drive):
        return normalize(config), _ZERO_STEADY

    provisional = normalize(config, steady=_ZERO_STEADY)
    steady = solve_self_consistent(provisional, 2.0 * np.pi * dm.epsilon_c)
    return normalize(config, steady=steady), steady
