"""Acceptance gate: ten structural and oracle criteria, one line each.

Every test prints a single ``A<k>: PASS/FAIL`` line to the terminal
(bypassing capture) with the measured quantities, then asserts.
"""

import functools
import math

import numpy as np
import pytest

from omitchain.model import Atom, Drive, PhysicalConfig, normalize
from omitchain.presets import chain_config, preset
from omitchain.response import (
    chain_denominator,
    epsilon_T_cf,
    epsilon_T_full,
    epsilon_T_linear,
    spectrum,
)
from omitchain.steady import solve_from_config
from omitchain.timedomain import (
    TWO_PI,
    default_dt,
    integrate_linearized,
    integrate_nonlinear,
    probe_transmission,
)
from omitchain.windows import (
    ABSORPTIVE_DIP,
    ABSORPTIVE_PEAK,
    SPLIT_PEAK,
    central_feature_width,
    detect_windows,
    predict_windows_lossless,
)

GRID = (-3.0, 3.0, 20001)


def report(capsys, label, ok, detail):
    with capsys.disabled():
        print(f"\n{label}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{label}: {detail}"


@functools.lru_cache(maxsize=None)
def preset_spectrum(name, method="cf"):
    return spectrum(normalize(preset(name)), *GRID, method=method)


@functools.lru_cache(maxsize=None)
def preset_report(name):
    return detect_windows(preset_spectrum(name))


def test_a1_window_counts_and_central_parity(capsys):
    want = {"fig2a": (2, ABSORPTIVE_PEAK),
            "fig2b": (3, ABSORPTIVE_DIP),
            "fig2c": (4, ABSORPTIVE_PEAK)}
    got = {name: (preset_report(name).count, preset_report(name).central_feature)
           for name in want}
    report(capsys, "A1", got == want,
           ", ".join(f"{k}: {v[0]} windows / {v[1]}" for k, v in got.items()))


def test_a2_evaluator_equivalence(capsys):
    worst = 0.0
    for name in ("fig2a", "fig2b", "fig2c"):
        a = preset_spectrum(name, "cf")
        b = preset_spectrum(name, "linear")
        worst = max(worst, float(np.max(np.abs(a.eps_T - b.eps_T))))
    report(capsys, "A2", worst < 1e-9, f"max |cf - linear| = {worst:.3e} < 1e-9")


def test_a3_width_grows_with_coupling(capsys):
    widths = [central_feature_width(preset_spectrum(n))
              for n in ("fig3-8", "fig3-10", "fig3-12")]
    ok = widths[0] < widths[1] < widths[2]
    report(capsys, "A3", ok,
           "central widths at G=8,10,12 MHz: "
           + ", ".join(f"{w:.4f}" for w in widths))


def test_a4_atom_parity_four_cavities(capsys):
    base = central_feature_width(preset_spectrum("fig3-10"))
    details, ok = [], True
    for name in ("fig4a1", "fig4a3"):
        rep = preset_report(name)
        w = central_feature_width(preset_spectrum(name))
        ok &= rep.count == 4 and w > base
        details.append(f"{name}: {rep.count} windows, width {w:.4f} > {base:.4f}")
    for name in ("fig4c2", "fig4c4"):
        rep = preset_report(name)
        ok &= rep.count == 5 and rep.central_feature == SPLIT_PEAK
        details.append(f"{name}: {rep.count} windows, {rep.central_feature}")
    report(capsys, "A4", ok, "; ".join(details))


def test_a5_atom_parity_three_cavities(capsys):
    base = central_feature_width(preset_spectrum("fig2b"))
    ok = preset_report("fig4d2").count == 4
    details = [f"fig4d2: {preset_report('fig4d2').count} windows"]
    for name in ("fig4b1", "fig4b3"):
        rep = preset_report(name)
        w = central_feature_width(preset_spectrum(name))
        ok &= rep.count == 3 and rep.central_feature == ABSORPTIVE_DIP and w > base
        details.append(f"{name}: {rep.count} windows, dip width {w:.4f} > {base:.4f}")
    report(capsys, "A5", ok, "; ".join(details))


def test_a6_mechanics_role(capsys):
    details, ok = [], True
    for n in (2, 3, 4):
        rep = detect_windows(spectrum(normalize(chain_config(n, G=0.0)), *GRID))
        ok &= rep.count == n - 1
        details.append(f"N={n}, G=0: {rep.count} windows")
    spec0 = spectrum(normalize(chain_config(4, G=0.0, atom_position=1)), *GRID)
    rep0 = detect_windows(spec0)
    w0 = central_feature_width(spec0)
    w10 = central_feature_width(preset_spectrum("fig4a1"))
    ok &= rep0.count == 4 and w0 < w10
    details.append(f"N=4, G=0, atom@1: {rep0.count} windows, width {w0:.4f} < {w10:.4f}")
    report(capsys, "A6", ok, "; ".join(details))


def test_a7_band_halfwidth_long_chain(capsys):
    sys_ = normalize(chain_config(30, dissipation_scale=0.01))
    roots = predict_windows_lossless(sys_) / sys_.kappa_probe
    outer = float(np.max(np.abs(roots)))
    ok = np.all(np.abs(roots) <= 2.001) and outer > 1.9
    report(capsys, "A7", bool(ok),
           f"N=30: {len(roots)} roots within +-2.001, outermost {outer:.4f} > 1.9")


XS = np.array([-2.0, -0.9, 0.5, 1.2, 2.0])


def test_a8_time_domain_oracle(capsys):
    details, ok = [], True

    # linearized leg on the directly specified two-cavity chain
    sys_ = normalize(preset("fig2a"))
    kN = sys_.kappa_probe
    deltas = XS * kN + sys_.omega_m
    dt = TWO_PI / (100.0 * sys_.omega_m)
    trajs = integrate_linearized(sys_, sys_.epsilon_p, deltas, 60.0, dt=dt, stride=20)
    worst_lin = 0.0
    for x, D, tr in zip(XS, deltas, trajs):
        td = probe_transmission(tr, float(D), kN, sys_.epsilon_p)
        full, _ = epsilon_T_full(float(x * kN), sys_)
        worst_lin = max(worst_lin, abs(td - full) / abs(full))
    ok &= worst_lin < 0.01
    details.append(f"linearized worst rel err {worst_lin:.2e} < 1e-2")

    # nonlinear leg: pump calibrated so g * c_bar_1 equals the same G
    cfg = PhysicalConfig(
        n_cavities=2, kappa=(0.027, 15.0), hopping=(15.0,),
        omega_m=51.8, gamma_m=0.041,
        drive_mode=Drive(epsilon_c=17187.7, g_single_photon=0.1),
        epsilon_p=17.1877)
    sysn, _ = solve_from_config(cfg)
    deltas_n = XS * sysn.kappa_probe + sysn.omega_m
    trajs_n = integrate_nonlinear(cfg, deltas_n, 60.0,
                                  TWO_PI / (100.0 * sysn.omega_m), stride=20)
    worst_nl = 0.0
    for x, D, tr in zip(XS, deltas_n, trajs_n):
        td = probe_transmission(tr, float(D), sysn.kappa_probe, sysn.epsilon_p)
        full, _ = epsilon_T_full(float(x * sysn.kappa_probe), sysn)
        worst_nl = max(worst_nl, abs(td - full) / abs(full))
    ok &= worst_nl < 0.02
    details.append(f"nonlinear (eps_p/eps_c=1e-3, G={abs(sysn.G)/TWO_PI:.3f} MHz) "
                   f"worst rel err {worst_nl:.2e} < 2e-2")
    report(capsys, "A8", ok, "; ".join(details))


def test_a9_steady_state_consistency(capsys):
    cfg = PhysicalConfig(
        n_cavities=2, kappa=(0.027, 15.0), hopping=(15.0,),
        omega_m=51.8, gamma_m=0.041,
        drive_mode=Drive(epsilon_c=2.0, g_single_photon=0.1),
        atom=Atom(position=1, g_a=10.0, gamma_a=0.01),
        epsilon_p=0.0)
    system, steady = solve_from_config(cfg)
    traj = integrate_nonlinear(cfg, system.omega_m, 80.0, stride=1000)
    rel = float(np.max(np.abs(traj.c[-1] - np.array(steady.c_bar)))
                / np.max(np.abs(steady.c_bar)))
    ok = steady.residual_norm < 1e-10 and rel < 1e-6
    report(capsys, "A9", ok,
           f"residual {steady.residual_norm:.2e} < 1e-10, "
           f"long-time match {rel:.2e} < 1e-6")


def _random_config(rng):
    from omitchain.model import DirectG
    n = int(rng.integers(1, 7))
    atom = None
    if rng.random() < 0.4:
        atom = Atom(position=int(rng.integers(1, n + 1)),
                    g_a=float(rng.uniform(0, 15)),
                    gamma_a=float(rng.uniform(0.001, 5.0)))
    return normalize(PhysicalConfig(
        n_cavities=n,
        kappa=tuple(rng.uniform(0.01, 25.0, n)),
        hopping=tuple(rng.uniform(0.0, 25.0, max(n - 1, 0))),
        omega_m=float(rng.uniform(20, 120)),
        gamma_m=float(rng.uniform(0.001, 2.0)),
        drive_mode=DirectG(G_mag=float(rng.uniform(0, 20))),
        atom=atom))


def test_a10_property_suites(capsys):
    rng = np.random.default_rng(2024)
    details, ok = [], True

    # conjugation symmetry
    worst_conj = 0.0
    for _ in range(100):
        sys_ = _random_config(rng)
        for x in rng.uniform(0, 3, 3) * sys_.kappa_probe:
            d = abs(epsilon_T_cf(float(-x), sys_) - np.conj(epsilon_T_cf(float(x), sys_)))
            worst_conj = max(worst_conj, d)
    ok &= worst_conj < 1e-12
    details.append(f"conjugation asymmetry {worst_conj:.2e} < 1e-12")

    # passivity over 10^3 randomized admissible configs (sigma_z_bar = -1)
    worst_mag, worst_margin = 0.0, np.inf
    for _ in range(1000):
        sys_ = _random_config(rng)
        x = float(rng.uniform(-3, 3) * sys_.kappa_probe)
        D = chain_denominator(x, sys_)
        if np.isfinite(D.real):
            worst_margin = min(worst_margin, D.real - sys_.kappa_probe)
        worst_mag = max(worst_mag, abs(epsilon_T_cf(x, sys_)))
    ok &= worst_mag <= 2.0 + 1e-9 and worst_margin >= -1e-9
    details.append(f"max |eps_T| {worst_mag:.6f} <= 2, "
                   f"min Re(D_N)-kappa_N {worst_margin:.2e} >= 0")

    # lossless roots vs detected centers at 100x reduced dissipation
    sys_ = normalize(chain_config(4, dissipation_scale=0.01))
    roots = np.sort(predict_windows_lossless(sys_)) / sys_.kappa_probe
    rep = detect_windows(spectrum(sys_, *GRID))
    centers = np.array([w.center_x for w in rep.windows])
    dev = (float(np.max(np.abs(centers - roots)))
           if len(centers) == len(roots) else np.inf)
    ok &= dev < 0.01
    details.append(f"root-center deviation {dev:.2e} < 0.01")
    report(capsys, "A10", ok, "; ".join(details))
