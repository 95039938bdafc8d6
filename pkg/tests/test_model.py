"""Configuration validation, normalization, and JSON round-tripping."""

import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omitchain.errors import ConfigurationError, MissingDependencyError
from omitchain.model import (
    Atom,
    DirectG,
    Drive,
    Explicit,
    PhysicalConfig,
    ResolvedSideband,
    config_from_json,
    config_to_json,
    normalize,
    validate,
)

TWO_PI = 2.0 * math.pi


def basic_config(**overrides):
    kw = dict(
        n_cavities=3,
        kappa=(0.027, 0.027, 15.0),
        hopping=(15.0, 15.0),
        omega_m=51.8,
        gamma_m=0.041,
        drive_mode=DirectG(G_mag=10.0),
    )
    kw.update(overrides)
    return PhysicalConfig(**kw)


def test_valid_config_has_no_violations():
    assert validate(basic_config()) == []


@pytest.mark.parametrize("overrides,needle", [
    (dict(kappa=(1.0, 1.0)), "kappa"),
    (dict(kappa=(1.0, -1.0, 1.0)), "positive"),
    (dict(hopping=(15.0,)), "hopping"),
    (dict(hopping=(15.0, -1.0)), "nonnegative"),
    (dict(omega_m=0.0), "omega_m"),
    (dict(gamma_m=-1.0), "gamma_m"),
    (dict(epsilon_p=-1.0), "epsilon_p"),
    (dict(atom=Atom(position=4, g_a=1.0, gamma_a=0.1)), "position"),
    (dict(atom=Atom(position=1, g_a=-1.0, gamma_a=0.1)), "g_a"),
    (dict(drive_mode=DirectG(G_mag=-5.0)), "G_mag"),
    (dict(drive_mode=DirectG(G_mag=5.0, sigma_z_fixed=0.5)), "sigma_z_fixed"),
    (dict(detuning_mode=Explicit(Delta=(1.0,))), "Delta"),
])
def test_violations_are_reported(overrides, needle):
    msgs = validate(basic_config(**overrides))
    assert any(needle in m for m in msgs), msgs


def test_n_below_one_short_circuits():
    cfg = basic_config(n_cavities=0, kappa=(), hopping=())
    assert validate(cfg) == ["n_cavities must be >= 1"]


def test_normalize_rejects_invalid():
    with pytest.raises(ConfigurationError):
        normalize(basic_config(omega_m=-1.0))


def test_normalize_angular_factors():
    sys_ = normalize(basic_config())
    assert sys_.kappa[-1] == pytest.approx(TWO_PI * 15.0)
    assert sys_.omega_m == pytest.approx(TWO_PI * 51.8)
    assert sys_.hopping[0] == pytest.approx(TWO_PI * 15.0)
    assert sys_.G == pytest.approx(TWO_PI * 10.0)
    assert sys_.sigma_z_bar == -1.0
    # resolved-sideband mode pins every detuning at omega_m
    assert sys_.Delta == (sys_.omega_m,) * 3
    assert sys_.Delta_tilde_1 == sys_.omega_m
    assert sys_.resolved_sideband


def test_normalize_directg_phase():
    sys_ = normalize(basic_config(drive_mode=DirectG(G_mag=10.0, G_phase=math.pi / 2)))
    assert sys_.G.real == pytest.approx(0.0, abs=1e-12)
    assert sys_.G.imag == pytest.approx(TWO_PI * 10.0)


def test_drive_mode_requires_steady():
    cfg = basic_config(drive_mode=Drive(epsilon_c=5.0, g_single_photon=0.1))
    with pytest.raises(MissingDependencyError):
        normalize(cfg)


def test_explicit_detunings_carry_mechanical_shift():
    cfg = basic_config(detuning_mode=Explicit(Delta=(50.0, 51.8, 51.8), Delta_a=3.0))
    sys_ = normalize(cfg)
    assert not sys_.resolved_sideband
    assert sys_.Delta[0] == pytest.approx(TWO_PI * 50.0)
    # DirectG mode has no steady displacement, so no shift
    assert sys_.Delta_tilde_1 == pytest.approx(TWO_PI * 50.0)
    assert sys_.Delta_a == pytest.approx(TWO_PI * 3.0)


def test_kappa_probe_is_last_cavity():
    assert normalize(basic_config()).kappa_probe == pytest.approx(TWO_PI * 15.0)


def test_content_hash_distinguishes_systems():
    a = normalize(basic_config())
    b = normalize(basic_config(drive_mode=DirectG(G_mag=10.000001)))
    assert a.content_hash() != b.content_hash()
    assert a.content_hash() == normalize(basic_config()).content_hash()


# --- JSON wire format -------------------------------------------------------

def test_json_round_trip_directg():
    cfg = basic_config(atom=Atom(position=2, g_a=10.0, gamma_a=0.01))
    assert config_from_json(config_to_json(cfg)) == cfg


def test_json_round_trip_drive_explicit():
    cfg = basic_config(
        drive_mode=Drive(epsilon_c=5.0, g_single_photon=0.1),
        detuning_mode=Explicit(Delta=(51.8, 51.8, 51.8), Delta_a=51.8),
        epsilon_p=0.005,
    )
    assert config_from_json(config_to_json(cfg)) == cfg


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(bogus=1),
    lambda d: d["atom"].update(extra=1),
    lambda d: d["drive_mode"]["DirectG"].update(extra=1),
    lambda d: d.update(drive_mode={"Wrong": {}}),
    lambda d: d.update(detuning_mode="Sideband"),
])
def test_unknown_keys_rejected(mutate):
    cfg = basic_config(atom=Atom(position=1, g_a=1.0, gamma_a=0.1))
    obj = json.loads(config_to_json(cfg))
    mutate(obj)
    with pytest.raises(ConfigurationError):
        config_from_json(json.dumps(obj))


def test_invalid_json_text():
    with pytest.raises(ConfigurationError):
        config_from_json("{not json")
    with pytest.raises(ConfigurationError):
        config_from_json("[1, 2]")


def test_missing_required_key():
    obj = json.loads(config_to_json(basic_config()))
    del obj["omega_m"]
    with pytest.raises(ConfigurationError):
        config_from_json(json.dumps(obj))


@st.composite
def configs(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    finite = st.floats(min_value=0.001, max_value=100.0, allow_nan=False)
    kappa = tuple(draw(finite) for _ in range(n))
    hopping = tuple(draw(finite) for _ in range(n - 1))
    if draw(st.booleans()):
        dm = DirectG(G_mag=draw(finite), G_phase=draw(st.floats(-3.0, 3.0)))
    else:
        dm = Drive(epsilon_c=draw(finite), g_single_photon=draw(finite))
    atom = None
    if draw(st.booleans()):
        atom = Atom(position=draw(st.integers(1, n)), g_a=draw(finite),
                    gamma_a=draw(finite))
    if draw(st.booleans()):
        det = ResolvedSideband()
    else:
        det = Explicit(Delta=tuple(draw(finite) for _ in range(n)),
                       Delta_a=draw(finite))
    return PhysicalConfig(n_cavities=n, kappa=kappa, hopping=hopping,
                          omega_m=draw(finite), gamma_m=draw(finite),
                          drive_mode=dm, atom=atom, detuning_mode=det,
                          epsilon_p=draw(finite))


@settings(max_examples=60, deadline=None)
@given(configs())
def test_json_round_trip_property(cfg):
    assert config_from_json(config_to_json(cfg)) == cfg
    assert validate(cfg) == []
