"""Physical configuration of the cavity chain and its normalized (angular) form.

All user-facing rates are linear frequencies in MHz.  Internally every
frequency-like quantity is an angular rate in rad/us, i.e. 2*pi times the MHz
value, so that a decay rate kappa and a detuning Delta can be added directly.
"""

from __future__ import annotations

import cmath
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Union

from .errors import ConfigurationError, MissingDependencyError

if TYPE_CHECKING:  # pragma: no cover
    from .steady import SteadyState

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DirectG:
    """Drive specified by the effective optomechanical rate itself.

    G_mag is in MHz, G_phase in radians; sigma_z_fixed is the assumed atomic
    inversion, -1 for an unexcited atom.
    """

    G_mag: float
    G_phase: float = 0.0
    sigma_z_fixed: float = -1.0


@dataclass(frozen=True)
class Drive:
    """Drive specified by the pump amplitude and the single-photon coupling (MHz)."""

    epsilon_c: float
    g_single_photon: float


@dataclass(frozen=True)
class Atom:
    """Two-level atom trapped in cavity `position` (1-based)."""

    position: int
    g_a: float
    gamma_a: float


@dataclass(frozen=True)
class ResolvedSideband:
    """All cavity/atom detunings pinned to the mechanical frequency."""


@dataclass(frozen=True)
class Explicit:
    """Explicit per-cavity detunings Delta_n and atomic detuning Delta_a (MHz)."""

    Delta: tuple[float, ...]
    Delta_a: float = 0.0


DriveMode = Union[DirectG, Drive]
DetuningMode = Union[ResolvedSideband, Explicit]


@dataclass(frozen=True)
class PhysicalConfig:
    """User-facing description of the chain.

    Cavity N (the last one) carries the pump and probe; cavity 1 couples to
    the mechanical oscillator.
    """

    n_cavities: int
    kappa: tuple[float, ...]
    hopping: tuple[float, ...]
    omega_m: float
    gamma_m: float
    drive_mode: DriveMode
    atom: Optional[Atom] = None
    detuning_mode: DetuningMode = field(default_factory=ResolvedSideband)
    epsilon_p: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        object.__setattr__(self, "hopping", tuple(float(g) for g in self.hopping))


@dataclass(frozen=True)
class NormalizedSystem:
    """Angular-frequency parameter set consumed by every solver.

    All rates are rad/us.  `G` is the complex effective optomechanical rate
    and `sigma_z_bar` the steady atomic inversion used by the linearized
    response.  `Delta_tilde_1` already contains the static mechanical shift
    of cavity 1.
    """

    n: int
    kappa: tuple[float, ...]
    hopping: tuple[float, ...]
    omega_m: float
    gamma_m: float
    gamma_a: float
    g_a: float
    Delta: tuple[float, ...]
    Delta_tilde_1: float
    Delta_a: float
    G: complex
    sigma_z_bar: complex
    atom_position: Optional[int]
    g_single_photon: float
    epsilon_p: float
    resolved_sideband: bool

    @property
    def kappa_probe(self) -> float:
        """Decay rate of the pumped/probed cavity (cavity N)."""
        return self.kappa[-1]

    def content_hash(self) -> str:
        payload = repr(
            (
                self.n,
                self.kappa,
                self.hopping,
                self.omega_m,
                self.gamma_m,
                self.gamma_a,
                self.g_a,
                self.Delta,
                self.Delta_tilde_1,
                self.Delta_a,
                self.G,
                self.sigma_z_bar,
                self.atom_position,
                self.g_single_photon,
                self.epsilon_p,
                self.resolved_sideband,
            )
        )
        return hashlib.sha1(payload.encode()).hexdigest()[:16]


def validate(config: PhysicalConfig) -> list[str]:
    """Return every violated invariant as a human-readable string.

    An empty list means the configuration is admissible.  Violations are
    data, not exceptions.
    """
    v: list[str] = []
    n = config.n_cavities
    if n < 1:
        v.append("n_cavities must be >= 1")
        return v
    if len(config.kappa) != n:
        v.append(f"kappa must have exactly {n} entries, got {len(config.kappa)}")
    if any(k <= 0 for k in config.kappa):
        v.append("kappa must be positive")
    if len(config.hopping) != n - 1:
        v.append(f"hopping must have exactly {n - 1} entries, got {len(config.hopping)}")
    if any(g < 0 for g in config.hopping):
        v.append("hopping must be nonnegative")
    if config.omega_m <= 0:
        v.append("omega_m must be positive")
    if config.gamma_m < 0:
        v.append("gamma_m must be nonnegative")
    if config.epsilon_p < 0:
        v.append("epsilon_p must be nonnegative")

    dm = config.drive_mode
    if isinstance(dm, DirectG):
        if dm.G_mag < 0:
            v.append("drive_mode.G_mag must be nonnegative")
        if not (-1.0 <= dm.sigma_z_fixed <= 0.0):
            v.append("drive_mode.sigma_z_fixed must lie in [-1, 0]")
    elif isinstance(dm, Drive):
        if dm.g_single_photon < 0:
            v.append("drive_mode.g_single_photon must be nonnegative")
    else:
        v.append("drive_mode must be DirectG or Drive")

    if config.atom is not None:
        a = config.atom
        if not (1 <= a.position <= n):
            v.append("atom.position out of range")
        if a.g_a < 0:
            v.append("atom.g_a must be nonnegative")
        if a.gamma_a < 0:
            v.append("atom.gamma_a must be nonnegative")

    det = config.detuning_mode
    if isinstance(det, Explicit):
        if len(det.Delta) != n:
            v.append(f"detuning_mode.Delta must have exactly {n} entries, got {len(det.Delta)}")
    elif not isinstance(det, ResolvedSideband):
        v.append("detuning_mode must be ResolvedSideband or Explicit")

    return v


def normalize(config: PhysicalConfig, steady: "SteadyState | None" = None) -> NormalizedSystem:
    """Resolve the drive mode and convert every MHz field to rad/us.

    In Drive mode a SteadyState must be supplied: it provides c_bar_1 (hence
    G = g * c_bar_1), lambda_bar and sigma_z_bar.
    """
    violations = validate(config)
    if violations:
        raise ConfigurationError("; ".join(violations))

    n = config.n_cavities
    kappa = tuple(TWO_PI * k for k in config.kappa)
    hopping = tuple(TWO_PI * g for g in config.hopping)
    omega_m = TWO_PI * config.omega_m
    gamma_m = TWO_PI * config.gamma_m

    if config.atom is not None:
        g_a = TWO_PI * config.atom.g_a
        gamma_a = TWO_PI * config.atom.gamma_a
        atom_position = config.atom.position
    else:
        g_a = 0.0
        gamma_a = 0.0
        atom_position = None

    dm = config.drive_mode
    if isinstance(dm, DirectG):
        g_single = 0.0
        G = TWO_PI * dm.G_mag * cmath.exp(1j * dm.G_phase)
        sigma_z_bar = complex(dm.sigma_z_fixed)
        lambda_bar = 0.0
    else:
        if steady is None:
            raise MissingDependencyError(
                "Drive mode requires a SteadyState (run steady.solve_self_consistent first)"
            )
        g_single = TWO_PI * dm.g_single_photon
        G = g_single * steady.c_bar[0]
        sigma_z_bar = complex(steady.sigma_z_bar)
        lambda_bar = steady.lambda_bar

    det = config.detuning_mode
    if isinstance(det, ResolvedSideband):
        Delta = (omega_m,) * n
        Delta_tilde_1 = omega_m
        Delta_a = omega_m
        resolved = True
    else:
        Delta = tuple(TWO_PI * d for d in det.Delta)
        Delta_tilde_1 = Delta[0] - g_single * lambda_bar
        Delta_a = TWO_PI * det.Delta_a
        resolved = False

    return NormalizedSystem(
        n=n,
        kappa=kappa,
        hopping=hopping,
        omega_m=omega_m,
        gamma_m=gamma_m,
        gamma_a=gamma_a,
        g_a=g_a,
        Delta=Delta,
        Delta_tilde_1=Delta_tilde_1,
        Delta_a=Delta_a,
        G=G,
        sigma_z_bar=sigma_z_bar,
        atom_position=atom_position,
        g_single_photon=g_single,
        epsilon_p=TWO_PI * config.epsilon_p,
        resolved_sideband=resolved,
    )


# --- JSON serialization ----------------------------------------------------
#
# The wire format mirrors the field names exactly; unknown keys are rejected
# at every level so that typos never pass silently.

def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigurationError(f"unknown keys in {where}: {sorted(unknown)}")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigurationError(f"missing key '{key}' in {where}")
    return obj[key]


def _drive_mode_from_obj(obj) -> DriveMode:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ConfigurationError("drive_mode must be an object with a single DirectG or Drive key")
    tag, body = next(iter(obj.items()))
    if tag == "DirectG":
        _check_keys(body, {"G_mag", "G_phase", "sigma_z_fixed"}, "drive_mode.DirectG")
        return DirectG(
            G_mag=float(_require(body, "G_mag", "DirectG")),
            G_phase=float(body.get("G_phase", 0.0)),
            sigma_z_fixed=float(body.get("sigma_z_fixed", -1.0)),
        )
    if tag == "Drive":
        _check_keys(body, {"epsilon_c", "g_single_photon"}, "drive_mode.Drive")
        return Drive(
            epsilon_c=float(_require(body, "epsilon_c", "Drive")),
            g_single_photon=float(_require(body, "g_single_photon", "Drive")),
        )
    raise ConfigurationError(f"unknown drive_mode '{tag}'")


def _detuning_mode_from_obj(obj) -> DetuningMode:
    if obj == "ResolvedSideband":
        return ResolvedSideband()
    if isinstance(obj, dict) and len(obj) == 1 and "Explicit" in obj:
        body = obj["Explicit"]
        _check_keys(body, {"Delta", "Delta_a"}, "detuning_mode.Explicit")
        return Explicit(
            Delta=tuple(float(d) for d in _require(body, "Delta", "Explicit")),
            Delta_a=float(body.get("Delta_a", 0.0)),
        )
    raise ConfigurationError("detuning_mode must be 'ResolvedSideband' or {'Explicit': {...}}")


def config_from_dict(obj: dict) -> PhysicalConfig:
    allowed = {
        "n_cavities", "kappa", "hopping", "omega_m", "gamma_m",
        "drive_mode", "atom", "detuning_mode", "epsilon_p",
    }
    _check_keys(obj, allowed, "config")

    atom = None
    if obj.get("atom") is not None:
        body = obj["atom"]
        _check_keys(body, {"position", "g_a", "gamma_a"}, "atom")
        atom = Atom(
            position=int(_require(body, "position", "atom")),
            g_a=float(_require(body, "g_a", "atom")),
            gamma_a=float(_require(body, "gamma_a", "atom")),
        )

    detuning_mode: DetuningMode = ResolvedSideband()
    if "detuning_mode" in obj:
        detuning_mode = _detuning_mode_from_obj(obj["detuning_mode"])

    return PhysicalConfig(
        n_cavities=int(_require(obj, "n_cavities", "config")),
        kappa=tuple(float(k) for k in _require(obj, "kappa", "config")),
        hopping=tuple(float(g) for g in _require(obj, "hopping", "config")),
        omega_m=float(_require(obj, "omega_m", "config")),
        gamma_m=float(_require(obj, "gamma_m", "config")),
        drive_mode=_drive_mode_from_obj(_require(obj, "drive_mode", "config")),
        atom=atom,
        detuning_mode=detuning_mode,
        epsilon_p=float(obj.get("epsilon_p", 1e-3)),
    )


def config_from_json(text: str) -> PhysicalConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigurationError("config JSON must be an object")
    return config_from_dict(obj)


def config_to_dict(config: PhysicalConfig) -> dict:
    dm = config.drive_mode
    if isinstance(dm, DirectG):
        drive_obj = {"DirectG": {"G_mag": dm.G_mag, "G_phase": dm.G_phase,
                                 "sigma_z_fixed": dm.sigma_z_fixed}}
    else:
        drive_obj = {"Drive": {"epsilon_c": dm.epsilon_c,
                               "g_single_photon": dm.g_single_photon}}

    det = config.detuning_mode
    if isinstance(det, ResolvedSideband):
        det_obj = "ResolvedSideband"
    else:
        det_obj = {"Explicit": {"Delta": list(det.Delta), "Delta_a": det.Delta_a}}

    atom_obj = None
    if config.atom is not None:
        atom_obj = {"position": config.atom.position, "g_a": config.atom.g_a,
                    "gamma_a": config.atom.gamma_a}

    return {
        "n_cavities": config.n_cavities,
        "kappa": list(config.kappa),
        "hopping": list(config.hopping),
        "omega_m": config.omega_m,
        "gamma_m": config.gamma_m,
        "drive_mode": drive_obj,
        "atom": atom_obj,
        "detuning_mode": det_obj,
        "epsilon_p": config.epsilon_p,
    }


def config_to_json(config: PhysicalConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2)
