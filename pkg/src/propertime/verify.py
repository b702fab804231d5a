"""Runnable invariant suite behind ``ptcli verify``.

Each check evaluates one family of identities at deterministic random
phase points and reports its worst residual against a fixed tolerance.
Smaller sample counts than the full acceptance tests, same tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics, fields, group, kinematics, many, spectral

__all__ = ["Check", "run_all"]


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance


def _random_w(rng, n, c=1.0, top=0.999):
    direction = rng.normal(size=(n, 3))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    return direction * (rng.uniform(0.0, top, size=n)[:, None] * c)


def _check_kinematics(rng) -> list[Check]:
    worst_b = worst_rt = worst_id = 0.0
    for w in _random_w(rng, 400):
        u = kinematics.proper_from_observer(w)
        b = kinematics.collaborative_speed(u)
        worst_b = max(worst_b, abs(b - kinematics.gamma(w)) / b)
        back = kinematics.observer_from_proper(u)
        worst_rt = max(worst_rt, float(np.max(np.abs(back - w))) / max(1e-12, float(np.max(np.abs(w)))))
        worst_id = max(worst_id, float(np.max(np.abs(w - u / b))))
    return [
        Check("kinematics: b = gamma c", worst_b, 1e-12),
        Check("kinematics: u <-> w roundtrip", worst_rt, 1e-12),
        Check("kinematics: w/c = u/b", worst_id, 1e-12),
    ]


def _check_group(rng) -> list[Check]:
    worst_cons = worst_rt = 0.0
    for _ in range(200):
        u = rng.normal(size=3) * rng.uniform(0, 10)
        v = _random_w(rng, 1, top=0.99)[0]
        boost = group.BoostParameters(v)
        b = kinematics.collaborative_speed(u)
        u_p = group.boost_velocity(u, boost)
        b_p = group.boost_lightspeed(b, u, boost)
        worst_cons = max(worst_cons, abs(b_p**2 - (1.0 + u_p @ u_p)) / b_p**2)
        u_back = group.boost_velocity_inverse(u_p, boost)
        a = rng.normal(size=3)
        a_p = group.boost_acceleration(a, u, boost)
        a_back = group.boost_acceleration_inverse(a_p, u_p, boost)
        tau = rng.uniform(-2.0, 2.0)
        x = u * tau
        x_p = group.boost_event(x, tau, b, boost)
        x_back = group.boost_event_inverse(x_p, tau, b_p, boost)
        scale = max(1.0, float(np.max(np.abs(u))), float(np.max(np.abs(a))), float(np.max(np.abs(x))))
        worst_rt = max(
            worst_rt,
            float(np.max(np.abs(u_back - u))) / scale,
            float(np.max(np.abs(a_back - a))) / scale,
            float(np.max(np.abs(x_back - x))) / scale,
            abs(group.boost_lightspeed_inverse(b_p, u_p, boost) - b) / b,
        )
    return [
        Check("group: b'^2 = c^2 + u'^2", worst_cons, 1e-12),
        Check("group: forward/inverse roundtrip", worst_rt, 1e-10),
    ]


def _check_sources(rng) -> list[Check]:
    worst_static = worst_conv = 0.0
    for _ in range(100):
        v = _random_w(rng, 1, top=0.99)[0]
        boost = group.BoostParameters(v)
        static = group.SourceDensities.convective(1.3, np.zeros(3))
        out = group.boost_sources(static, boost)
        worst_static = max(worst_static, abs(out.rho - static.rho) / static.rho)
        u = rng.normal(size=3) * rng.uniform(0, 5)
        src = group.SourceDensities.convective(0.7, u)
        moved = group.boost_sources(src, boost)
        ratio = group.convective_density_ratio(u, boost)
        worst_conv = max(worst_conv, abs(moved.rho - src.rho * ratio) / abs(src.rho * ratio))
    return [
        Check("sources: static rho' = rho", worst_static, 1e-14),
        Check("sources: eliminated form = convective form", worst_conv, 1e-12),
    ]


def _oscillating_source(rng) -> fields.SourceTrajectory:
    """Bounded anharmonic worldline with u.a != 0 generically."""
    amp = rng.uniform(0.2, 0.8, size=3)
    omega = rng.uniform(0.5, 1.2)

    def pos(tau, amp=amp, w=omega):
        return np.array(
            [amp[0] * np.sin(w * tau), amp[1] * np.sin(2 * w * tau), amp[2] * np.cos(w * tau)]
        )

    def vel(tau, amp=amp, w=omega):
        return np.array(
            [
                amp[0] * w * np.cos(w * tau),
                2 * amp[1] * w * np.cos(2 * w * tau),
                -amp[2] * w * np.sin(w * tau),
            ]
        )

    def acc(tau, amp=amp, w=omega):
        return np.array(
            [
                -amp[0] * w**2 * np.sin(w * tau),
                -4 * amp[1] * w**2 * np.sin(2 * w * tau),
                -amp[2] * w**2 * np.cos(w * tau),
            ]
        )

    return fields.SourceTrajectory(e=1.0, position=pos, velocity=vel, acceleration=acc)


def _check_fields(rng) -> list[Check]:
    static = fields.SourceTrajectory.static(1.0, np.zeros(3))
    worst_coulomb = 0.0
    for _ in range(50):
        x = rng.normal(size=3)
        x *= rng.uniform(0.5, 3.0) / np.linalg.norm(x)
        E = fields.electric_field(x, 10.0, static)
        r = np.linalg.norm(x)
        worst_coulomb = max(worst_coulomb, float(np.max(np.abs(E - x / r**3))) * r**2)
    worst_bre = worst_orth = 0.0
    for _ in range(100):
        traj = _oscillating_source(rng)
        x = rng.normal(size=3)
        x *= rng.uniform(2.0, 6.0) / np.linalg.norm(x)
        tau = rng.uniform(0.0, 3.0)
        E, B, tau_ret = fields.fields_at(x, tau, traj)
        rvec = x - traj.x(tau_ret)
        r_hat = rvec / np.linalg.norm(rvec)
        scale = max(np.linalg.norm(E) * np.linalg.norm(B), 1e-30)
        worst_orth = max(worst_orth, abs(E @ B) / scale)
        worst_bre = max(
            worst_bre,
            float(np.max(np.abs(B - np.cross(r_hat, E)))) / max(np.linalg.norm(B), 1e-30),
        )
    return [
        Check("fields: static Coulomb e r/r^3", worst_coulomb, 1e-12),
        Check("fields: B = r_hat x E", worst_bre, 1e-11),
        Check("fields: E.B = 0", worst_orth, 1e-11),
    ]


def _check_photon_mass(rng) -> list[Check]:
    worst = 0.0
    for _ in range(200):
        u = rng.normal(size=3) * 3
        ud = rng.normal(size=3)
        udd = rng.normal(size=3)
        res = fields.effective_photon_mass(u, ud, udd)
        scale = max(abs(res.bracket_b_form), abs(res.bracket_explicit), 1e-30)
        worst = max(worst, abs(res.bracket_b_form - res.bracket_explicit) / scale)
    return [Check("photon mass: both bracket forms agree", worst, 1e-9)]


def _check_dynamics(rng) -> list[Check]:
    conf = dynamics.FieldConfiguration.coulomb(1.0)
    worst_k = 0.0
    for _ in range(100):
        x = rng.normal(size=3) * rng.uniform(0.5, 3)
        p = rng.normal(size=3)
        st = dynamics.PhaseState(x=x, p=p, m=1.0)
        H = dynamics.hamiltonian_H(st, conf)
        K = dynamics.canonical_K(st, conf)
        worst_k = max(worst_k, abs(K - (H**2 / 2.0 + 0.5)) / abs(K))
    r0 = dynamics.coulomb_critical_radius(1.0, 1.0)
    state = dynamics.PhaseState(x=[25.0, 0, 0], p=[0, 0.2, 0], m=1.0)
    period = 2 * np.pi * 25.0 / 0.2
    orbit = dynamics.integrate_orbit(state, conf, period / 2000, 4000)
    return [
        Check("dynamics: K = H^2/(2mc^2) + mc^2/2", worst_k, 1e-12),
        Check("dynamics: critical radius = e^2/(m c^2)", abs(r0 - 1.0), 1e-10),
        Check("dynamics: K drift along Coulomb orbit", orbit.k_drift, 1e-8),
    ]


def _check_many(rng) -> list[Check]:
    worst_mass = worst_clock = worst_alg = worst_chain = 0.0
    for _ in range(10):
        sys = many.ParticleSystem.random(3, rng)
        inv = many.system_invariants(sys)
        c = sys.units.c
        worst_mass = max(
            worst_mass,
            abs(inv.M * c**2 - np.sqrt(inv.H**2 - c**2 * (inv.P @ inv.P))) / (inv.M * c**2),
            abs(inv.H - inv.M * c * inv.b) / inv.H,
        )
        for i in range(sys.n):
            worst_clock = max(
                worst_clock,
                abs(many.clock_ratio(i, sys) - many.clock_ratio_speeds(i, sys)),
            )
        worst_alg = max(worst_alg, many.verify_algebra(sys)["max"])
        W = lambda xs, ps: float(xs[0] @ ps[-1])
        K = many._observable_table(sys)["K"]
        worst_chain = max(
            worst_chain,
            abs(many.evolve_observable(W, sys) - many.poisson_bracket(W, K, sys)),
        )
    traj = many.free_flight(many.ParticleSystem.random(2, rng), 0.02, 100)
    resid = many.generating_identity_residual(traj)
    return [
        Check("many: Mc^2 / H = Mcb consistency", worst_mass, 1e-12),
        Check("many: clock-ratio dual formulas", worst_clock, 1e-12),
        Check("many: bracket algebra residuals", worst_alg, 1e-6),
        Check("many: particle-chain rate = global bracket", worst_chain, 1e-6),
        Check(
            "many: generating-function identity",
            resid / abs(traj.K * traj.taus[-1]),
            1e-10,
        ),
    ]


def _check_spectral() -> list[Check]:
    params = spectral.KernelParameters.from_mass(1.0)
    mu = params.mu
    worst_l2 = 0.0
    for width in (2.0 / mu, 5.0 / mu):
        extent = max(20.0 / mu, 14.0 * width)
        psi = spectral.RadialGridFunction.gaussian(256, extent, width)
        via_kernel = spectral.apply_sqrt_operator(psi, params)
        via_fft = spectral.momentum_oracle(psi, params)
        err = np.sqrt(
            np.sum(np.abs(via_kernel.values - via_fft.values) ** 2)
            / np.sum(np.abs(via_fft.values) ** 2)
        )
        worst_l2 = max(worst_l2, float(err))
    wave = spectral.RadialGridFunction.plane_wave(128, 40.0, mode=5)
    out = spectral.momentum_oracle(wave, params)
    k = 2 * np.pi * 5 / 40.0
    expected = np.sqrt(k**2 + 1.0)
    eig_err = float(np.max(np.abs(out.values - expected * wave.values))) / expected
    kappa = spectral.fit_kernel_decay(params)
    return [
        Check("spectral: kernel vs frequency oracle (rel L2)", worst_l2, 1e-3),
        Check("spectral: plane-wave eigenvalue", eig_err, 1e-12),
        Check("spectral: tail decay constant vs mu", abs(kappa - mu) / mu, 0.02),
    ]


def _check_redshift() -> list[Check]:
    from .cli import redshift_z

    z_w = redshift_z(w=np.array([0.6, 0.0, 0.0]))
    u = kinematics.proper_from_observer(np.array([0.6, 0.0, 0.0]))
    z_u = redshift_z(u=u)
    return [
        Check("redshift: z(w = 0.6c) = 1", abs(z_w.z - 1.0), 1e-14),
        Check("redshift: u-path equals w-path (bitwise)", abs(z_u.z - z_w.z), 1e-16),
    ]


def run_all(seed: int = 20260809) -> list[Check]:
    """Run the whole invariant suite with a deterministic seed."""
    rng = np.random.default_rng(seed)
    checks: list[Check] = []
    checks += _check_kinematics(rng)
    checks += _check_group(rng)
    checks += _check_sources(rng)
    checks += _check_fields(rng)
    checks += _check_photon_mass(rng)
    checks += _check_dynamics(rng)
    checks += _check_many(rng)
    checks += _check_spectral()
    checks += _check_redshift()
    return checks
