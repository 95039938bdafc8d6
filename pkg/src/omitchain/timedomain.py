"""Time-domain integration of the mean-field equations and demodulation.

Serves as the independent oracle for the frequency-domain solvers: integrate
in the pump rotating frame, project out the probe-frequency sidebands over
whole periods, and compare 2*kappa_N*c_N,- / eps_p against the linear-solve
answers.

Fixed-step RK4 throughout; conjugate-mixing terms (delta_b*, delta_c1*) are
evaluated directly on the complex state, which is equivalent to integrating
the doubled real system.  Several probe detunings can be integrated in one
batched run since they share the chain matrix and differ only in the
forcing phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConfigurationError, DivergenceError, WindowError
from .model import Drive, NormalizedSystem, PhysicalConfig, TWO_PI
from .steady import solve_from_config


@dataclass(frozen=True)
class Trajectory:
    """Decimated samples of a single integration run.

    `c` has shape (n_samples, N); `sigma_z` is present for nonlinear runs
    only.  Times are in microseconds.
    """

    t: np.ndarray
    c: np.ndarray
    b: np.ndarray
    sigma_minus: np.ndarray
    sigma_z: Optional[np.ndarray]
    stride: int

    def to_csv(self, path) -> None:
        n = self.c.shape[1]
        cols = ["t_us"]
        for j in range(1, n + 1):
            cols += [f"re_c{j}", f"im_c{j}"]
        cols += ["re_b", "im_b", "re_sm", "im_sm", "sz"]
        sz = self.sigma_z if self.sigma_z is not None else np.zeros_like(self.t)
        with open(path, "w", newline="") as f:
            f.write(",".join(cols) + "\n")
            for k, t in enumerate(self.t):
                row = [f"{t:.17g}"]
                for j in range(n):
                    row += [f"{self.c[k, j].real:.17g}", f"{self.c[k, j].imag:.17g}"]
                row += [f"{self.b[k].real:.17g}", f"{self.b[k].imag:.17g}",
                        f"{self.sigma_minus[k].real:.17g}", f"{self.sigma_minus[k].imag:.17g}",
                        f"{sz[k]:.17g}"]
                f.write(",".join(row) + "\n")


def _check_step(dt: float, rates: list[float]) -> None:
    max_rate = max(abs(r) for r in rates if r != 0)
    if dt > TWO_PI / (50.0 * max_rate):
        raise ConfigurationError(
            f"dt={dt} too large: need dt <= {TWO_PI / (50.0 * max_rate):.3e} "
            f"for max rate {max_rate:.3e} rad/us")


def default_dt(omega_m_angular: float) -> float:
    """200 steps per mechanical period."""
    return TWO_PI / (200.0 * omega_m_angular)


def _rk4(rhs, y0: np.ndarray, t_end: float, dt: float, stride: int):
    """Fixed-step RK4; samples every `stride` steps, including t=0."""
    n_steps = int(round(t_end / dt))
    y = y0.astype(complex)
    t = 0.0
    samples = [(0.0, y.copy())]
    # overflow en route to the divergence check is reported via the
    # exception, not as numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
            k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
            k4 = rhs(t + dt, y + dt * k3)
            y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t = (k + 1) * dt
            if (k + 1) % stride == 0:
                if not np.all(np.isfinite(y)):
                    raise DivergenceError(f"state diverged at t={t:.6g} us", t)
                samples.append((t, y.copy()))
    ts = np.array([s[0] for s in samples])
    ys = np.array([s[1] for s in samples])
    return ts, ys


def _chain_coupling(dc: np.ndarray, c: np.ndarray, g: np.ndarray, n: int) -> None:
    if n > 1:
        dc[..., 0] += -1j * g[0] * c[..., 1]
        dc[..., -1] += -1j * g[-1] * c[..., -2]
        if n > 2:
            dc[..., 1:-1] += -1j * (g[: n - 2] * c[..., :-2] + g[1: n - 1] * c[..., 2:])


def _split_batch(Delta) -> tuple[np.ndarray, bool]:
    arr = np.atleast_1d(np.asarray(Delta, dtype=float))
    return arr, np.ndim(Delta) == 0


def integrate_nonlinear(config: PhysicalConfig, Delta, t_end: float,
                        dt: Optional[float] = None, *, stride: int = 50,
                        initial: Optional[np.ndarray] = None
                        ) -> Union[Trajectory, list[Trajectory]]:
    """Integrate the full nonlinear mean-field equations with pump and probe.

    Drive mode only.  `Delta` is the probe-pump detuning in rad/us; passing
    a sequence integrates all detunings in one batched run and returns a
    list of trajectories.  In resolved-sideband mode the bare detuning of
    cavity 1 is offset by the steady mechanical shift so the dressed
    detuning sits at omega_m, matching the frequency-domain solvers.
    """
    if not isinstance(config.drive_mode, Drive):
        raise ConfigurationError("integrate_nonlinear requires Drive mode")
    deltas, scalar = _split_batch(Delta)
    system, steady = solve_from_config(config)
    n = system.n

    det = np.array(system.Delta, dtype=float)
    if system.resolved_sideband:
        det[0] = system.omega_m + system.g_single_photon * steady.lambda_bar

    if dt is None:
        dt = default_dt(system.omega_m)
    _check_step(dt, [*system.kappa, *system.hopping, system.omega_m, system.gamma_m,
                     system.gamma_a, system.g_a, *np.abs(deltas), *det])

    kappa = np.array(system.kappa)
    g = np.array(system.hopping)
    gsp = system.g_single_photon
    g_a = system.g_a
    gamma_a = system.gamma_a
    Delta_a = system.Delta_a
    eps_c = TWO_PI * config.drive_mode.epsilon_c
    eps_p = system.epsilon_p
    pos = system.atom_position
    has_atom = pos is not None and g_a > 0
    i_at = (pos - 1) if pos is not None else 0
    lin_diag = -(kappa + 1j * det)
    gm = system.gamma_m + 1j * system.omega_m

    # state layout (batch, n + 4): c_1..c_N, b, sigma_-, sigma_+, sigma_z
    def rhs(t, y):
        c = y[..., :n]
        b = y[..., n]
        dc = lin_diag * c
        _chain_coupling(dc, c, g, n)
        dc[..., 0] += 1j * gsp * c[..., 0] * (2.0 * b.real)
        dc[..., -1] += eps_c + eps_p * np.exp(-1j * deltas * t)
        db = -gm * b + 1j * gsp * np.abs(c[..., 0]) ** 2
        if has_atom:
            sm, sp, sz = y[..., n + 1], y[..., n + 2], y[..., n + 3]
            ci = c[..., i_at]
            dc[..., i_at] += -1j * g_a * sm
            dsm = -(gamma_a + 1j * Delta_a) * sm + 1j * g_a * ci * sz
            dsp = -(gamma_a - 1j * Delta_a) * sp - 1j * g_a * np.conj(ci) * sz
            dsz = -2.0 * (1.0 + sz) * gamma_a + 2j * g_a * (np.conj(ci) * sm + ci * sp)
        else:
            dsm = dsp = dsz = np.zeros_like(b)
        return np.concatenate([dc, np.stack([db, dsm, dsp, dsz], axis=-1)], axis=-1)

    batch = len(deltas)
    y0 = np.zeros((batch, n + 4), dtype=complex)
    y0[:, n + 3] = -1.0
    if initial is not None:
        y0[:, : len(initial)] = initial

    ts, ys = _rk4(rhs, y0, t_end, dt, stride)
    trajs = [Trajectory(t=ts, c=ys[:, j, :n], b=ys[:, j, n],
                        sigma_minus=ys[:, j, n + 1],
                        sigma_z=ys[:, j, n + 3].real.copy(), stride=stride)
             for j in range(batch)]
    return trajs[0] if scalar else trajs


def integrate_linearized(system: NormalizedSystem, epsilon_p: float, Delta,
                         t_end: float, dt: Optional[float] = None, *,
                         stride: int = 50) -> Union[Trajectory, list[Trajectory]]:
    """Integrate the linearized fluctuation equations from zero fluctuations.

    The mechanical coupling mixes delta_b with its conjugate, so both probe
    sidebands build up; demodulation separates them.  `Delta` may be a
    sequence for a batched run.
    """
    n = system.n
    deltas, scalar = _split_batch(Delta)
    if dt is None:
        dt = default_dt(system.omega_m)
    det = np.array(system.Delta, dtype=float)
    det[0] = system.Delta_tilde_1
    _check_step(dt, [*system.kappa, *system.hopping, system.omega_m, system.gamma_m,
                     system.gamma_a, system.g_a, *np.abs(deltas), *det])

    kappa = np.array(system.kappa)
    g = np.array(system.hopping)
    G = system.G
    g_a = system.g_a
    pos = system.atom_position
    has_atom = pos is not None and g_a > 0
    i_at = (pos - 1) if pos is not None else 0
    lin_diag = -(kappa + 1j * det)
    gm = system.gamma_m + 1j * system.omega_m
    ga = system.gamma_a + 1j * system.Delta_a

    # state layout (batch, n + 2): c_1..c_N, b, sigma_-
    def rhs(t, y):
        c = y[..., :n]
        b = y[..., n]
        sm = y[..., n + 1]
        dc = lin_diag * c
        _chain_coupling(dc, c, g, n)
        dc[..., 0] += 1j * G * (np.conj(b) + b)
        dc[..., -1] += epsilon_p * np.exp(-1j * deltas * t)
        db = -gm * b + 1j * (G * np.conj(c[..., 0]) + np.conj(G) * c[..., 0])
        if has_atom:
            dc[..., i_at] += -1j * g_a * sm
            dsm = -ga * sm + 1j * g_a * c[..., i_at] * system.sigma_z_bar
        else:
            dsm = np.zeros_like(b)
        return np.concatenate([dc, np.stack([db, dsm], axis=-1)], axis=-1)

    y0 = np.zeros((len(deltas), n + 2), dtype=complex)
    ts, ys = _rk4(rhs, y0, t_end, dt, stride)
    trajs = [Trajectory(t=ts, c=ys[:, j, :n], b=ys[:, j, n],
                        sigma_minus=ys[:, j, n + 1], sigma_z=None, stride=stride)
             for j in range(len(deltas))]
    return trajs[0] if scalar else trajs


def demodulate(traj: Trajectory, Delta: float, n_periods: int = 200) -> dict:
    """Extract (O_minus, O_plus) for every tracked variable.

    Projects delta_O = O - window mean onto exp(-+i*Delta*t) over the final
    `n_periods` whole probe periods.  Exact for signals containing only the
    two sidebands, by discrete orthogonality over whole periods.
    """
    if Delta == 0:
        raise WindowError("demodulation undefined at Delta = 0")
    if n_periods < 1:
        raise WindowError("n_periods must be >= 1")
    window = n_periods * TWO_PI / abs(Delta)
    span = traj.t[-1] - traj.t[0]
    if span < window:
        raise WindowError(f"trajectory span {span:.4g} us shorter than "
                          f"demodulation window {window:.4g} us")
    h = traj.t[1] - traj.t[0]
    m = int(round(window / h))
    t = traj.t[-m:]
    phase_plus = np.exp(1j * Delta * t)

    def project(series: np.ndarray) -> tuple[complex, complex]:
        d = series - series.mean()
        return complex(np.mean(d * phase_plus)), complex(np.mean(d / phase_plus))

    out = {}
    for j in range(traj.c.shape[1]):
        out[f"c{j + 1}"] = project(traj.c[-m:, j])
    out["b"] = project(traj.b[-m:])
    out["sigma_minus"] = project(traj.sigma_minus[-m:])
    return out


def probe_transmission(traj: Trajectory, Delta: float, kappa_probe: float,
                       epsilon_p: float, n_periods: int = 200) -> complex:
    """eps_T from a trajectory, in the package sign convention.

    The rotating-frame integration lives in the conjugate convention, so the
    demodulated 2*kappa_N*c_N,- / eps_p is conjugated before returning
    (Re unchanged; Im sign fixed by the shared convention).
    """
    o_minus, _ = demodulate(traj, Delta, n_periods)[f"c{traj.c.shape[1]}"]
    return complex(np.conj(2.0 * kappa_probe * o_minus / epsilon_p))
