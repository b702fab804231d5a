"""Batch scenario front end: ``ptcli <scenario> --config cfg.json``.

Configs are flat JSON objects with a mandatory ``scenario`` key; unknown
keys are rejected.  Output is CSV with ``#``-prefixed metadata lines
followed by a header row and data rows.  Identical configs produce
byte-identical data rows.

Exit codes: 0 success, 2 configuration/schema error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys as _sys
import tempfile
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__, constants, dynamics, fields, group, kinematics, many, spectral
from .errors import PropertimeError
from .kinematics import NATURAL, SI, UnitSystem

__all__ = [
    "ScenarioConfig",
    "ResultTable",
    "RedshiftResult",
    "redshift_z",
    "scenario_muon",
    "scenario_rest_source",
    "run_config",
    "main",
]

SCENARIOS = (
    "transform",
    "fields",
    "orbit",
    "nbody",
    "spectral",
    "redshift",
    "muon",
    "rest_source",
)

# required / optional parameter keys per scenario
_SCHEMA = {
    "transform": ({"v"}, {"x", "u", "a", "tau", "b_bar"}),
    "fields": ({"charge", "u"}, {"radius", "points", "tau"}),
    "orbit": ({"m", "x0", "p0", "dtau", "steps"}, {"potential", "strength", "record_every"}),
    "nbody": ({"n"}, {"p_max", "masses", "xs", "ps"}),
    "spectral": ({"width_over_compton"}, {"points", "extent_over_compton", "mass"}),
    "redshift": (set(), {"w", "u"}),
    "muon": ({"lifetime_s", "u_over_c", "altitude_m"}, set()),
    "rest_source": ({"v"}, set()),
}
_COMMON_KEYS = {"scenario", "units", "seed", "out"}


class ConfigError(Exception):
    """Configuration failed schema validation."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario request."""

    scenario: str
    params: dict
    units: UnitSystem
    seed: int
    out: Optional[str]
    raw: dict

    @classmethod
    def from_mapping(cls, data: dict, units_override: Optional[str] = None) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        scenario = data.get("scenario")
        if scenario not in SCENARIOS:
            raise ConfigError(
                f"unknown or missing scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}"
            )
        required, optional = _SCHEMA[scenario]
        allowed = required | optional | _COMMON_KEYS
        for key in data:
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} for scenario {scenario!r}")
        missing = required - set(data)
        if missing:
            raise ConfigError(f"missing required key(s) {sorted(missing)} for {scenario!r}")
        units_name = units_override or data.get("units", "natural")
        if units_name not in ("natural", "si"):
            raise ConfigError(f"units must be 'natural' or 'si', got {units_name!r}")
        seed = data.get("seed", 0)
        if not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
        params = {k: v for k, v in data.items() if k not in _COMMON_KEYS}
        return cls(
            scenario=scenario,
            params=params,
            units=SI if units_name == "si" else NATURAL,
            seed=seed,
            out=data.get("out"),
            raw=dict(data),
        )

    @classmethod
    def from_path(cls, path: str, units_override: Optional[str] = None) -> "ScenarioConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_mapping(data, units_override)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


@dataclass
class ResultTable:
    """Rectangular numeric result with config-echo metadata."""

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(list(values))

    def lines(self) -> list:
        out = [f"# {k} = {self.metadata[k]}" for k in sorted(self.metadata)]
        out.append(",".join(self.columns))
        for row in self.rows:
            out.append(",".join(_fmt(v) for v in row))
        return out

    def data_lines(self) -> list:
        return self.lines()[len(self.metadata):]

    def write(self, path: str) -> None:
        # atomic: never leave a half-written table behind
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write("\n".join(self.lines()) + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _base_metadata(cfg: ScenarioConfig) -> dict:
    return {
        "config": json.dumps(cfg.raw, sort_keys=True),
        "version": __version__,
        "seed": cfg.seed,
        "c": _fmt(cfg.units.c),
    }


@dataclass(frozen=True)
class RedshiftResult:
    """z plus the ingredients it was computed from."""

    z: float
    beta: float
    w_mag: float
    u_mag: float
    b: float
    z_small_speed: float


def redshift_z(w=None, u=None, units: UnitSystem = NATURAL) -> RedshiftResult:
    """Doppler redshift z = sqrt((1 + beta)/(1 - beta)) - 1.

    Given the observer velocity, beta = |w|/c; given the proper velocity,
    beta = |u|/b, the identical number.  The small-speed reading z = beta
    is reported alongside.
    """
    if (w is None) == (u is None):
        raise PropertimeError("provide exactly one of w or u")
    if w is not None:
        w = kinematics._vec(w)
        w_mag = float(np.linalg.norm(w))
        if w_mag >= units.c:
            raise PropertimeError(f"|w| = {w_mag} is not below c")
        beta = w_mag / units.c
        u_mag = kinematics.gamma(w, units) * w_mag
        b = units.c * math.sqrt(1.0 + (u_mag / units.c) ** 2)
    else:
        u = kinematics._vec(u)
        u_mag = float(np.linalg.norm(u))
        b = kinematics.collaborative_speed(u, units)
        beta = u_mag / b
        w_mag = beta * units.c
    z = math.sqrt((1.0 + beta) / (1.0 - beta)) - 1.0
    return RedshiftResult(
        z=z, beta=beta, w_mag=w_mag, u_mag=u_mag, b=b, z_small_speed=beta
    )


def scenario_redshift(cfg: ScenarioConfig) -> ResultTable:
    params = cfg.params
    if ("w" in params) == ("u" in params):
        raise ConfigError("redshift needs exactly one of 'w' or 'u'")
    if "w" in params:
        res = redshift_z(w=np.asarray(params["w"], dtype=float), units=cfg.units)
    else:
        res = redshift_z(u=np.asarray(params["u"], dtype=float), units=cfg.units)
    table = ResultTable(
        columns=["z", "beta", "w_mag", "u_mag", "b", "z_small_speed"],
        metadata=_base_metadata(cfg),
    )
    table.add_row(res.z, res.beta, res.w_mag, res.u_mag, res.b, res.z_small_speed)
    return table


def scenario_muon(
    lifetime_tau: float, u_mag: float, altitude: float, units: UnitSystem = SI
) -> ResultTable:
    """Ranges of an unstable particle on the two clock readings.

    Proper-clock range |u| tau_life against the naive observer-clock range
    |w| tau_life, with reach verdicts for the given altitude.
    """
    if min(lifetime_tau, u_mag, altitude) <= 0.0:
        raise PropertimeError("muon scenario inputs must be positive")
    u = np.array([u_mag, 0.0, 0.0])
    w_mag = float(np.linalg.norm(kinematics.observer_from_proper(u, units)))
    proper_range = u_mag * lifetime_tau
    naive_range = w_mag * lifetime_tau
    table = ResultTable(
        columns=[
            "lifetime_s",
            "u_mag",
            "w_mag",
            "proper_range",
            "naive_range",
            "altitude",
            "reaches_proper",
            "reaches_naive",
        ]
    )
    table.add_row(
        lifetime_tau,
        u_mag,
        w_mag,
        proper_range,
        naive_range,
        altitude,
        proper_range >= altitude,
        naive_range >= altitude,
    )
    return table


def scenario_rest_source(v, units: UnitSystem = NATURAL) -> ResultTable:
    """A source at rest seen from a frame moving with v.

    Emits gamma(v), the primed collaborative light speed b' = gamma c and
    the primed source velocity u' = -gamma v, all via the library
    transforms.
    """
    v = np.asarray(v, dtype=float)
    boost = group.BoostParameters(v, units)
    g = boost.gamma_v
    b_prime = group.boost_lightspeed(units.c, np.zeros(3), boost)
    u_prime = group.boost_velocity(np.zeros(3), boost)
    table = ResultTable(
        columns=["gamma", "b_prime", "u_prime_x", "u_prime_y", "u_prime_z", "u_prime_mag"]
    )
    table.add_row(g, b_prime, *u_prime, float(np.linalg.norm(u_prime)))
    return table


def scenario_transform(cfg: ScenarioConfig) -> ResultTable:
    p = cfg.params
    units = cfg.units
    boost = group.BoostParameters(np.asarray(p["v"], dtype=float), units)
    x = np.asarray(p.get("x", [0.0, 0.0, 0.0]), dtype=float)
    u = np.asarray(p.get("u", [0.0, 0.0, 0.0]), dtype=float)
    a = np.asarray(p.get("a", [0.0, 0.0, 0.0]), dtype=float)
    tau = float(p.get("tau", 0.0))
    b = kinematics.collaborative_speed(u, units)
    b_bar = float(p.get("b_bar", b))
    x_p = group.boost_event(x, tau, b_bar, boost)
    u_p = group.boost_velocity(u, boost)
    a_p = group.boost_acceleration(a, u, boost)
    b_p = group.boost_lightspeed(b, u, boost)
    b_bar_p = group.boost_lightspeed(b_bar, u, boost) if b_bar == b else b_bar
    x_back = group.boost_event_inverse(x_p, tau, b_bar_p, boost)
    u_back = group.boost_velocity_inverse(u_p, boost)
    a_back = group.boost_acceleration_inverse(a_p, u_p, boost)
    b_back = group.boost_lightspeed_inverse(b_p, u_p, boost)
    scale = max(1.0, float(np.max(np.abs(x))), float(np.max(np.abs(u))), float(np.max(np.abs(a))))
    roundtrip = max(
        float(np.max(np.abs(x_back - x))),
        float(np.max(np.abs(u_back - u))),
        float(np.max(np.abs(a_back - a))),
        abs(b_back - b),
    ) / scale
    table = ResultTable(
        columns=[
            "xp_x", "xp_y", "xp_z",
            "up_x", "up_y", "up_z",
            "ap_x", "ap_y", "ap_z",
            "b_prime", "gamma_v", "roundtrip_residual",
        ],
        metadata=_base_metadata(cfg),
    )
    table.add_row(*x_p, *u_p, *a_p, b_p, boost.gamma_v, roundtrip)
    return table


def scenario_fields(cfg: ScenarioConfig) -> ResultTable:
    p = cfg.params
    units = cfg.units
    traj = fields.SourceTrajectory.uniform(
        float(p["charge"]), np.zeros(3), np.asarray(p["u"], dtype=float), units
    )
    radius = float(p.get("radius", 1.0))
    n_points = int(p.get("points", 8))
    tau = float(p.get("tau", 0.0))
    table = ResultTable(
        columns=[
            "angle",
            "x", "y", "z",
            "Ex", "Ey", "Ez",
            "Bx", "By", "Bz",
            "E_dot_B", "B_minus_rhatxE",
            "tau_ret",
        ],
        metadata=_base_metadata(cfg),
    )
    for j in range(n_points):
        angle = 2.0 * math.pi * j / n_points
        point = radius * np.array([math.cos(angle), math.sin(angle), 0.0])
        E, B, tau_ret = fields.fields_at(point, tau, traj)
        rvec = point - traj.x(tau_ret)
        r_hat = rvec / np.linalg.norm(rvec)
        table.add_row(
            angle, *point, *E, *B,
            float(E @ B),
            float(np.max(np.abs(B - np.cross(r_hat, E)))),
            tau_ret,
        )
    return table


def scenario_orbit(cfg: ScenarioConfig) -> ResultTable:
    p = cfg.params
    units = cfg.units
    potential = p.get("potential", "free")
    if potential == "free":
        conf = dynamics.FieldConfiguration.free()
    elif potential == "coulomb":
        conf = dynamics.FieldConfiguration.coulomb(float(p.get("strength", 1.0)))
    else:
        raise ConfigError(f"unknown potential {potential!r}")
    state = dynamics.PhaseState(
        x=np.asarray(p["x0"], dtype=float),
        p=np.asarray(p["p0"], dtype=float),
        m=float(p["m"]),
        units=units,
    )
    traj = dynamics.integrate_orbit(
        state,
        conf,
        float(p["dtau"]),
        int(p["steps"]),
        record_every=int(p.get("record_every", 1)),
    )
    table = ResultTable(
        columns=["tau", "x", "y", "z", "px", "py", "pz", "K", "H", "b"],
        metadata=_base_metadata(cfg),
    )
    table.metadata["k_drift"] = _fmt(traj.k_drift)
    for i in range(traj.tau.size):
        table.add_row(traj.tau[i], *traj.x[i], *traj.p[i], traj.K[i], traj.H[i], traj.b[i])
    return table


def scenario_nbody(cfg: ScenarioConfig) -> ResultTable:
    p = cfg.params
    units = cfg.units
    if "masses" in p:
        for key in ("xs", "ps"):
            if key not in p:
                raise ConfigError("explicit nbody configs need masses, xs and ps")
        sys = many.ParticleSystem(
            masses=np.asarray(p["masses"], dtype=float),
            xs=np.asarray(p["xs"], dtype=float),
            ps=np.asarray(p["ps"], dtype=float),
            units=units,
        )
    else:
        rng = np.random.default_rng(cfg.seed)
        sys = many.ParticleSystem.random(
            int(p["n"]), rng, p_max=float(p.get("p_max", 5.0)), units=units
        )
    inv = many.system_invariants(sys)
    residuals = many.verify_algebra(sys)
    table = ResultTable(
        columns=[
            "particle",
            "mass",
            "clock_ratio",
            "u_mag",
            "v_mag",
            "b_i",
        ],
        metadata=_base_metadata(cfg),
    )
    u, v, b_i = many.per_particle_speeds(sys)
    for i in range(sys.n):
        table.add_row(
            i,
            sys.masses[i],
            many.clock_ratio(i, sys),
            float(np.linalg.norm(u[i])),
            float(np.linalg.norm(v[i])),
            float(b_i[i]),
        )
    table.metadata.update(
        {
            "H": _fmt(inv.H),
            "M": _fmt(inv.M),
            "K": _fmt(inv.K),
            "b": _fmt(inv.b),
            "algebra_max_residual": _fmt(residuals["max"]),
        }
    )
    return table


def scenario_spectral(cfg: ScenarioConfig) -> ResultTable:
    p = cfg.params
    params = spectral.KernelParameters.from_mass(float(p.get("mass", 1.0)))
    mu = params.mu
    width = float(p["width_over_compton"]) / mu
    n = int(p.get("points", 256))
    extent = float(p.get("extent_over_compton", max(20.0, 14.0 * width * mu))) / mu
    psi = spectral.RadialGridFunction.gaussian(n, extent, width)
    via_kernel = spectral.apply_sqrt_operator(psi, params)
    via_fft = spectral.momentum_oracle(psi, params)
    err = float(
        np.sqrt(
            np.sum(np.abs(via_kernel.values - via_fft.values) ** 2)
            / np.sum(np.abs(via_fft.values) ** 2)
        )
    )
    table = ResultTable(
        columns=["x", "psi", "s_kernel", "s_oracle"],
        metadata=_base_metadata(cfg),
    )
    table.metadata["rel_l2_error"] = _fmt(err)
    table.metadata["tail_decay_fit"] = _fmt(spectral.fit_kernel_decay(params))
    for i in range(psi.n):
        table.add_row(psi.grid[i], psi.values[i], via_kernel.values[i], via_fft.values[i])
    return table


def _dispatch(cfg: ScenarioConfig) -> ResultTable:
    if cfg.scenario == "redshift":
        return scenario_redshift(cfg)
    if cfg.scenario == "muon":
        table = scenario_muon(
            float(cfg.params["lifetime_s"]),
            float(cfg.params["u_over_c"]) * constants.C_SI,
            float(cfg.params["altitude_m"]),
            units=SI,
        )
    elif cfg.scenario == "rest_source":
        table = scenario_rest_source(np.asarray(cfg.params["v"], dtype=float), cfg.units)
    elif cfg.scenario == "transform":
        return scenario_transform(cfg)
    elif cfg.scenario == "fields":
        return scenario_fields(cfg)
    elif cfg.scenario == "orbit":
        return scenario_orbit(cfg)
    elif cfg.scenario == "nbody":
        return scenario_nbody(cfg)
    elif cfg.scenario == "spectral":
        return scenario_spectral(cfg)
    else:  # pragma: no cover - schema rejects earlier
        raise ConfigError(f"unhandled scenario {cfg.scenario}")
    table.metadata.update(_base_metadata(cfg))
    return table


def run_config(
    path: str,
    out: Optional[str] = None,
    units_override: Optional[str] = None,
    stream=None,
) -> int:
    """Load, validate, dispatch and write one scenario config."""
    stream = stream if stream is not None else _sys.stdout
    try:
        cfg = ScenarioConfig.from_path(path, units_override)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    try:
        table = _dispatch(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    except PropertimeError as exc:
        print(f"numerical failure in {cfg.scenario}: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return 3
    target = out or cfg.out
    if target:
        table.write(target)
    else:
        print("\n".join(table.lines()), file=stream)
    return 0


def _run_verify(out: Optional[str], stream=None) -> int:
    from .verify import run_all

    stream = stream if stream is not None else _sys.stdout
    checks = run_all()
    table = ResultTable(
        columns=["name", "residual", "tolerance", "passed"],
        metadata={"version": __version__},
    )
    width = max(len(c.name) for c in checks)
    ok = True
    for c in checks:
        table.rows.append([c.name, c.residual, c.tolerance, c.passed])
        status = "pass" if c.passed else "FAIL"
        print(f"{c.name:<{width}}  {c.residual:12.3e}  < {c.tolerance:8.0e}  {status}", file=stream)
        ok = ok and c.passed
    if out:
        table.write(out)
    print(("all checks passed" if ok else "CHECKS FAILED"), file=stream)
    return 0 if ok else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ptcli",
        description="Proper-time electrodynamics scenario runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCENARIOS + ("verify",):
        cli_name = name.replace("_", "-")
        sp = sub.add_parser(cli_name, help=f"run the {cli_name} scenario")
        if name != "verify":
            sp.add_argument("--config", required=True, action="append",
                            help="path to a JSON scenario config (repeatable)")
            sp.add_argument("--parallel", action="store_true",
                            help="run multiple configs concurrently")
        sp.add_argument("--out", default=None, help="output CSV path")
        sp.add_argument("--units", choices=["natural", "si"], default=None,
                        help="override the config's unit system")
    args = parser.parse_args(argv)
    command = args.command.replace("-", "_")
    if command == "verify":
        return _run_verify(args.out)

    def one(path: str) -> int:
        cfg_scenario = None
        try:
            with open(path, "r", encoding="utf-8") as fh:
                cfg_scenario = json.load(fh).get("scenario")
        except (OSError, json.JSONDecodeError):
            pass
        if cfg_scenario is not None and cfg_scenario != command:
            print(
                f"config error: config {path} is for scenario {cfg_scenario!r}, "
                f"not {command!r}",
                file=_sys.stderr,
            )
            return 2
        return run_config(path, out=args.out, units_override=args.units)

    paths = args.config
    if args.parallel and len(paths) > 1:
        with concurrent.futures.ThreadPoolExecutor() as pool:
            codes = list(pool.map(one, paths))
    else:
        codes = [one(p) for p in paths]
    return max(codes)


if __name__ == "__main__":
    raise SystemExit(main())
