"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The diode and MOSFET reproduction runs execute their CI-scale variants here;
the desk-scale paper grids are behind the ``slow`` marker (deselect with
``-m 'not slow'``; they take tens of minutes).  Criterion 3's magnitude
clause is implemented exactly as specified and is a known red: the measured
residual of the projected Maxwellian under the verified collision operator
is 6.6e-3 on the stated grid (see the decisions ledger) while the spec
demands 1e-3.  The order clause of the same criterion passes.
"""

import dataclasses
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.integrate import quad

from boltdev.basis import DGField
from boltdev.collision import apply_collision
from boltdev.constants import default_conversions, default_silicon
from boltdev.device import (
    doping_coefficients,
    preset_devices,
    set_zero_inflow_ghosts,
    specular_wall_mass_flux,
)
from boltdev.mesh import PhaseGrid, build_axis, preset_diode_mesh, preset_mosfet_mesh, uniform_axis
from boltdev.moments import density, energy, momentum_and_velocity
from boltdev.output import pdf_slice_values
from boltdev.poisson import manufactured_convergence_1d, manufactured_convergence_2d
from boltdev.quadtables import (
    build_collision_tables,
    build_streaming_tables,
    maxwellian_cell_moments,
    s_of_w,
)
from boltdev.stepper import Simulation
from boltdev.transport import transport_rhs_1d


def report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")


# -- criterion 1 -------------------------------------------------------------


def test_criterion_01_detailed_balance():
    c = default_silicon()
    res = c.detailed_balance_residual()
    ok = res <= 1e-3
    both = (c.c_minus * (c.n_q + 1), c.c_plus * c.n_q)
    report(1, ok, f"balance residual {res:.2e}, sides {both[0]:.5f}/{both[1]:.5f}")
    assert ok
    assert both[0] == pytest.approx(0.04857, abs=2e-5)
    assert both[1] == pytest.approx(0.04857, abs=2e-5)


# -- criterion 2 -------------------------------------------------------------


def test_criterion_02_tables_oracle_equivalence():
    const = default_silicon()
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 1),
                     w=uniform_axis(0, 10, 10), mu=uniform_axis(-1, 1, 4))
    ct = build_collision_tables(grid, const)
    st = build_streaming_tables(grid, const)
    wax = grid.w
    a_k = const.alpha_k
    worst = 0.0
    for s_idx, sigma in enumerate(ct.sigma_values):
        for k in range(wax.n):
            for kp in range(wax.n):
                lo = max(wax.edges[k], wax.edges[kp] - sigma)
                hi = min(wax.edges[k + 1], wax.edges[kp + 1] - sigma)
                for a in range(4):
                    got = ct.overlap[s_idx, a, k, kp]
                    if hi <= lo:
                        assert got == 0.0
                        continue

                    def f(w, a=a, k=k, kp=kp, sigma=sigma):
                        xi_kp = 2 * (w + sigma - wax.centers[kp]) / wax.widths[kp]
                        xi_k = 2 * (w - wax.centers[k]) / wax.widths[k]
                        return float(s_of_w(w, a_k)) * (1.0, xi_kp, xi_k, xi_kp * xi_k)[a]

                    ref = quad(f, lo, hi, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
                    worst = max(worst, abs(got - ref) / max(abs(ref), 1e-12))
    for k in range(wax.n):
        a, b = wax.edges[k], wax.edges[k + 1]
        for q in range(3):
            def fnu(w, q=q, k=k):
                nu = 2 * np.pi * (
                    const.c0 * s_of_w(w, a_k)
                    + const.c_plus * s_of_w(w - const.gamma, a_k)
                    + const.c_minus * s_of_w(w + const.gamma, a_k)
                )
                return nu * (2 * (w - wax.centers[k]) / wax.widths[k]) ** q

            pts = [const.gamma] if a < const.gamma < b else None
            ref = quad(fnu, a, b, points=pts, limit=200, epsabs=1e-14, epsrel=1e-12)[0]
            worst = max(worst, abs(ct.loss[q, k] - ref) / max(abs(ref), 1e-12))
        for q in range(3):
            xi = lambda w: (2 * (w - wax.centers[k]) / wax.widths[k]) ** q
            r1 = quad(lambda w: np.sqrt(w * (1 + a_k * w)) / (1 + 2 * a_k * w) * xi(w),
                      a, b, limit=300, epsabs=1e-14, epsrel=1e-12)[0]
            r2 = quad(lambda w: xi(w) / np.sqrt(w * (1 + a_k * w)),
                      a, b, limit=300, epsabs=1e-14, epsrel=1e-12)[0]
            worst = max(worst, abs(st.s1m[q, k] - r1) / max(abs(r1), 1e-12))
            worst = max(worst, abs(st.s2m[q, k] - r2) / max(abs(r2), 1e-12))
    ok = worst <= 1e-9
    report(2, ok, f"worst table-entry relative deviation {worst:.2e} (<= 1e-9)")
    assert ok


# -- criteria 3 and 4 --------------------------------------------------------


def _maxwellian_field(grid, const):
    m0, m1 = maxwellian_cell_moments(grid.w, const.alpha_k)
    f = DGField.zeros(grid)
    f.comp("T")[...] = (m0 / grid.w.widths)[None, :, None]
    f.comp("W")[...] = (3 * m1 / grid.w.widths)[None, :, None]
    f.ghost_state = "zero"
    return f


def _rhs_l2(grid, arr):
    v = grid.x.widths[:, None, None] * grid.w.widths[None, :, None] * grid.mu.widths[None, None, :]
    acc = arr[0] ** 2
    for j in range(1, arr.shape[0]):
        acc = acc + arr[j] ** 2 / 3.0
    return float(np.sqrt(np.sum(v * acc)))


def _equilibrium_residual(nw, const):
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 1),
                     w=uniform_axis(0, 40.0, nw), mu=uniform_axis(-1, 1, 4))
    ct = build_collision_tables(grid, const)
    f = _maxwellian_field(grid, const)
    r = apply_collision(f, ct, grid)
    dw = grid.w.widths[None, :, None]
    loss = np.zeros_like(r)
    loss[0] = (f.comp("T") * ct.loss[0][None, :, None] + f.comp("W") * ct.loss[1][None, :, None]) / dw
    loss[2] = 3.0 * (f.comp("T") * ct.loss[1][None, :, None] + f.comp("W") * ct.loss[2][None, :, None]) / dw
    return _rhs_l2(grid, r) / _rhs_l2(grid, loss)


def test_criterion_03_collision_equilibrium():
    """Known red on the magnitude clause: the verified operator leaves a
    6.6e-3 residual at N_w = 60 (kink of the shifted Maxwellian at w = gamma);
    the spec's 1e-3 cannot be met without changing the discretization.  The
    refinement-order clause passes.  Analysis in the decisions ledger."""
    const = default_silicon()
    r30 = _equilibrium_residual(30, const)
    r60 = _equilibrium_residual(60, const)
    order = float(np.log2(r30 / r60))
    ok_order = order >= 1.0
    ok_mag = r60 <= 1e-3
    report(3, ok_order and ok_mag,
           f"residual(N_w=60) {r60:.3e} (<= 1e-3: {'yes' if ok_mag else 'NO'}), "
           f"order 30->60 {order:.2f} (>= 1)")
    assert ok_order
    assert ok_mag, (
        f"equilibrium residual {r60:.3e} exceeds the specified 1e-3; "
        "expected red, see decisions ledger"
    )


def test_criterion_04_number_conservation():
    const = default_silicon()
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 2),
                     w=uniform_axis(0, 12, 12), mu=uniform_axis(-1, 1, 4))
    ct = build_collision_tables(grid, const)
    rng = np.random.RandomState(3)
    f = DGField.zeros(grid)
    f.interior[...] = rng.normal(size=f.interior.shape)
    keep = (grid.w.edges[:-1] >= const.gamma) & (grid.w.edges[1:] <= 12 - const.gamma)
    f.interior[:, :, ~keep, :] = 0.0
    f.ghost_state = "zero"
    r = apply_collision(f, ct, grid)
    meas = grid.x.widths[:, None, None] * grid.w.widths[None, :, None] * grid.mu.widths[None, None, :]
    rel = abs(np.sum(r[0] * meas)) / np.sum(np.abs(f.interior[0]) * meas)
    ok = rel <= 1e-8
    report(4, ok, f"total collision number rate {rel:.2e} relative (<= 1e-8)")
    assert ok


# -- criterion 5 -------------------------------------------------------------


def test_criterion_05_poisson_convergence():
    errs1, orders1 = manufactured_convergence_1d((32, 64, 128))
    errs2, orders2 = manufactured_convergence_2d((16, 32, 64))
    ok_orders = all(o >= 1.9 for o in orders1 + orders2)

    # piecewise-linear exact solutions reproduced to 1e-12
    from boltdev.mesh import Axis
    from boltdev.poisson import (
        LDGPoisson1D, LDGPoisson2D, PoissonBC1D, PoissonBC2D,
        dirichlet_edge, neumann_edge,
    )

    ax = Axis(np.linspace(0, 1, 17))
    sol = LDGPoisson1D(ax, 11.7, PoissonBC1D(value_hi=1.0), c_v=10.0).solve(
        np.zeros(16), np.zeros(16))
    ramp_err = max(np.abs(sol.psi[:, 0] - ax.centers).max(),
                   np.abs(sol.psi[:, 1] - ax.widths / 2).max())

    ya = uniform_axis(0, 1, 6)
    xa = uniform_axis(0, 1, 3)
    eps = np.full((3, 6), 11.7)
    eps[:, 3:] = 3.9
    a, ratio = 0.7, 11.7 / 3.9
    psi_exact = lambda y: np.where(y <= 0.5, a * y, a * 0.5 + ratio * a * (y - 0.5))
    bc = PoissonBC2D(left=neumann_edge(ya), right=neumann_edge(ya),
                     bottom=dirichlet_edge(xa, 0.0),
                     top=dirichlet_edge(xa, float(psi_exact(1.0))))
    sol2 = LDGPoisson2D(xa, ya, eps, bc, c_v=10.0).solve(
        np.zeros((3, 6)), np.zeros((3, 6)), np.zeros((3, 6)))
    slab_err = np.abs(sol2.psi[:, :, 0] - psi_exact(ya.centers)[None, :]).max()
    ok_exact = ramp_err <= 1e-12 and slab_err <= 1e-12
    ok = ok_orders and ok_exact
    report(5, ok, f"orders 1D {orders1[0]:.2f}/{orders1[1]:.2f}, "
                  f"2D {orders2[0]:.2f}/{orders2[1]:.2f} (>= 1.9); "
                  f"ramp {ramp_err:.1e}, dielectric slab {slab_err:.1e} (<= 1e-12)")
    assert ok


# -- criterion 6 -------------------------------------------------------------


def test_criterion_06_transport_sanity():
    const = default_silicon()
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 12),
                     w=uniform_axis(0, 10, 6), mu=uniform_axis(-1, 1, 4))
    st = build_streaming_tables(grid, const)
    f = DGField.zeros(grid)
    f.data[0] = 2.0
    f.ghost_state = "contact"
    r = transport_rhs_1d(f, np.zeros(grid.x.n), st, grid, const)
    const_err = np.abs(r).max() / 2.0
    ok_const = const_err <= 1e-12

    rng = np.random.RandomState(9)
    f = DGField.zeros(grid)
    f.comp("T")[4:8, 1:4, :] = 1.0 + rng.rand(4, 3, 4)
    e = np.full(grid.x.n, 7.0)
    dt = 1e-5
    norms = []
    for _ in range(100):
        set_zero_inflow_ghosts(f)
        f.interior[...] += dt * transport_rhs_1d(f, e, st, grid, const)
        norms.append(f.l2_norm())
    growth = float(np.max(np.diff(norms)))
    ok_l2 = growth <= 1e-13
    ok = ok_const and ok_l2
    report(6, ok, f"constant-state residual {const_err:.1e} per unit step (<= 1e-12); "
                  f"max L2 increment over 100 frozen-field steps {growth:.1e} (<= 0)")
    assert ok


# -- criterion 7 -------------------------------------------------------------


def _zero_bias_sim():
    dev = dataclasses.replace(preset_devices()["diode400"],
                              n_minus_cm3=5e17, v_bias=0.0)
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 30),
                     w=uniform_axis(0, 40, 16), mu=uniform_axis(-1, 1, 8))
    return Simulation(dev, grid, scheme="rk2")


def test_criterion_07_zero_bias_equilibrium():
    conv = default_conversions()
    sim = _zero_bias_sim()
    s0 = sim.initial_state()
    rho0 = density(s0.field, sim.grid).mean.copy()
    final = sim.run_transient(1.0, state=s0, log_every=0)
    mv = momentum_and_velocity(final.field, sim.streaming_tables, sim.grid,
                               sim.const.c_x, conv)
    vel = np.abs(mv["velocity_x"].mean).max()
    vel_rel = vel / sim.const.c_x  # thermal velocity scale in the same units
    rho1 = density(final.field, sim.grid).mean
    drift = np.abs(rho1 - rho0).max() / rho0.max()
    ok = vel_rel <= 1e-8 and drift <= 1e-6
    report(7, ok, f"max |velocity| / thermal {vel_rel:.2e} (<= 1e-8); "
                  f"density drift {drift:.2e} over t in [0, 1] (<= 1e-6)")
    assert ok


# -- criteria 8 and 9 --------------------------------------------------------


def _steady_props(sim, state):
    conv = sim.conv
    mv = momentum_and_velocity(state.field, sim.streaming_tables, sim.grid,
                               sim.const.c_x, conv)
    en = energy(state.field, sim.grid)
    m = mv["momentum_x"].mean
    uniformity = float((m.max() - m.min()) / abs(m.mean()))
    nd, _ = doping_coefficients(sim.device, sim.grid.x, conv)
    rho = mv["density"].mean
    contact_dev = max(abs(rho[0] / nd[0] - 1.0), abs(rho[-1] / nd[-1] - 1.0))
    e = en["mean_energy"].mean
    peaks = [i for i in range(1, len(e) - 1) if e[i] > e[i - 1] and e[i] >= e[i + 1]]
    return uniformity, contact_dev, [float(sim.grid.x.centers[i]) for i in peaks]


def _peaks_at_junctions(peaks, junctions, tol):
    if not peaks:
        return False
    return all(min(abs(p - j) for j in junctions) <= tol for p in peaks)


def test_criterion_08_diode400_ci_variant():
    """60 x 30 x 12 variant of the 400 nm diode run, tolerances 10 percent."""
    grid = PhaseGrid(
        kind="diode",
        x=build_axis([(0.0, 0.2, 0.02), (0.2, 0.4, 0.01), (0.4, 1.0, 0.02)]),
        w=uniform_axis(0, 40.0, 30),
        mu=build_axis([(-1.0, 0.7, 1.7 / 6), (0.7, 1.0, 0.3 / 6)]),
    )
    dev = preset_devices()["diode400"]
    sim = Simulation(dev, grid, scheme="rk2")
    state = sim.run_transient(5.0, log_every=0)
    uniformity, contact_dev, peaks = _steady_props(sim, state)
    ok_peaks = _peaks_at_junctions(peaks, dev.channel, tol=0.08)
    ok = uniformity <= 0.10 and contact_dev <= 0.10 and ok_peaks
    report(8, ok, f"x-momentum spread {uniformity:.3f} (<= 0.10); contact density "
                  f"deviation {contact_dev:.2e} (<= 0.10); energy peaks at {peaks} "
                  f"(junctions {dev.channel})")
    assert uniformity <= 0.10
    assert contact_dev <= 0.10
    assert ok_peaks


@pytest.mark.slow
def test_criterion_08_diode400_paper_grid():
    """Desk-scale run on the 120 x 60 x 24 grid, tolerances 5 / 2 percent."""
    grid = preset_diode_mesh("diode400")
    dev = preset_devices()["diode400"]
    sim = Simulation(dev, grid, scheme="rk2")
    state = sim.run_transient(5.0, log_every=5000)
    uniformity, contact_dev, peaks = _steady_props(sim, state)
    ok_peaks = _peaks_at_junctions(peaks, dev.channel, tol=0.08)
    ok = uniformity <= 0.05 and contact_dev <= 0.02 and ok_peaks
    report(8, ok, f"paper grid: momentum spread {uniformity:.3f} (<= 0.05); contact "
                  f"deviation {contact_dev:.2e} (<= 0.02); peaks {peaks}")
    assert uniformity <= 0.05
    assert contact_dev <= 0.02
    assert ok_peaks


def _maxwellian_distance(slice_vals, grid, const):
    """L2 distance of the normalized slice to its best-fit Maxwellian."""
    meas = np.outer(grid.w.widths, grid.mu.widths)
    norm = np.sqrt(np.sum(meas * slice_vals**2))
    s = slice_vals / norm
    wc = grid.w.centers
    best = np.inf
    for theta in np.geomspace(0.25, 6.0, 241):
        prof = s_of_w(wc, const.alpha_k) * np.exp(-wc / theta)
        m = np.repeat(prof[:, None], grid.mu.n, axis=1)
        mn = np.sqrt(np.sum(meas * m**2))
        if mn == 0.0:
            continue
        m /= mn
        amp = np.sum(meas * s * m)
        best = min(best, float(np.sqrt(np.sum(meas * (s - amp * m) ** 2))))
    return best


def test_criterion_09_diode50_paper_grid():
    """Full 64 x 60 x 20 grid to t = 3.0 (the spec gives no CI variant);
    runs several minutes on the jitted backend."""
    grid = preset_diode_mesh("diode50")
    dev = preset_devices()["diode50"]
    sim = Simulation(dev, grid, scheme="rk2")
    const = sim.const
    s0 = sim.initial_state()
    d0 = _maxwellian_distance(pdf_slice_values(s0.field, grid, 0.125), grid, const)
    state = sim.run_transient(3.0, state=s0, log_every=10000)
    uniformity, contact_dev, peaks = _steady_props(sim, state)
    ok_peaks = _peaks_at_junctions(peaks, dev.channel, tol=0.02)
    d3 = _maxwellian_distance(pdf_slice_values(state.field, grid, 0.125), grid, const)
    ratio = d3 / d0
    ok = uniformity <= 0.05 and contact_dev <= 0.02 and ok_peaks and ratio >= 10.0
    report(9, ok, f"momentum spread {uniformity:.3f} (<= 0.05); contact deviation "
                  f"{contact_dev:.2e} (<= 0.02); peaks {peaks}; channel-center "
                  f"Maxwellian distance ratio {ratio:.1f} (>= 10)")
    assert uniformity <= 0.05
    assert contact_dev <= 0.02
    assert ok_peaks
    assert ratio >= 10.0


# -- criterion 10 ------------------------------------------------------------


def _run_mosfet(grid, t_end, log_every=0):
    dev = preset_devices()["mosfet"]
    sim = Simulation(dev, grid, scheme="euler")
    state = sim.initial_state()
    mass0 = state.mass
    wall_rel_max = 0.0
    while state.t < t_end - 1e-14:
        state = sim.step_once(state, dt=min(sim.stable_dt(state.poisson), t_end - state.t))
        if state.step % 100 == 0 or state.t >= t_end - 1e-14:
            sim.set_ghosts(state.field)  # the closure the next RHS would use
            b, t_ = specular_wall_mass_flux(state.field, sim.streaming_tables,
                                            grid, sim.const.c_x)
            wall_rel_max = max(wall_rel_max, (abs(b) + abs(t_)) * state.dt_last / state.mass)
        if log_every and state.step % log_every == 0:
            print(f"  mosfet t={state.t:.3f} step={state.step}", file=sys.stderr)
    return sim, state, mass0, wall_rel_max


def _check_mosfet(sim, state, mass0, wall_rel_max, tag, num=10):
    dev = sim.device
    ratio = state.mass / mass0
    ok_mass = np.isfinite(state.mass) and 0.2 <= ratio <= 5.0
    # contact and gate potentials recorded in the output header must be the
    # Dirichlet data; the solved traces must sit close to them
    pots = dev.contact_potentials()
    ok_pots = pots == {"source": 0.52354, "drain": 1.5235, "gate": 1.06}
    # cell means of the contact-adjacent columns/row; the xi slopes at flipped
    # Dirichlet faces carry the unit-penalty scheme's weakly pinned boundary
    # mode and are not a resolution-honest potential readout
    psol = state.poisson
    src_trace = psol.psi[0, : sim.grid.y.n, 0].mean()
    drn_trace = psol.psi[-1, : sim.grid.y.n, 0].mean()
    gate_cells = (sim.grid.x.centers >= dev.gate_span[0]) & (sim.grid.x.centers <= dev.gate_span[1])
    gate_trace = psol.psi[gate_cells, -1, 0].mean()
    ok_traces = (
        abs(src_trace - pots["source"]) <= 0.15
        and abs(drn_trace - pots["drain"]) <= 0.15
        and abs(gate_trace - pots["gate"]) <= 0.15
    )
    ok_wall = wall_rel_max <= 1e-10
    ok = ok_mass and ok_pots and ok_traces and ok_wall
    report(num, ok, f"{tag}: mass ratio {ratio:.3f} (bounded); contacts "
                    f"{src_trace:.4f}/{drn_trace:.4f}/{gate_trace:.4f} V vs "
                    f"(0.52354, 1.5235, 1.06); wall flux per step {wall_rel_max:.1e} "
                    f"(<= 1e-10)")
    assert ok_mass
    assert ok_pots
    assert ok_traces
    assert ok_wall


def test_criterion_10_mosfet_ci_variant():
    grid = preset_mosfet_mesh(n_x=12, n_y=7, n_w=60, n_mu=8, n_phi=6)
    sim, state, mass0, wall_rel = _run_mosfet(grid, 0.5)
    _check_mosfet(sim, state, mass0, wall_rel, "12x7x60x8x6 to t=0.5")


@pytest.mark.slow
def test_criterion_10_mosfet_paper_grid():
    grid = preset_mosfet_mesh()
    sim, state, mass0, wall_rel = _run_mosfet(grid, 0.5, log_every=1000)
    _check_mosfet(sim, state, mass0, wall_rel, "24x14x120x8x6 to t=0.5")


# -- criterion 11 ------------------------------------------------------------


_DET_CONFIGS = {
    "c7": (
        "[run]\ndevice = uniform\nscheme = rk2\nt_end = 1.0\nw_max = 40\nout_dir = {out}\n"
        "[device]\nname = uniform\nkind = diode\nlength_x = 1.0\nchannel = 0.3, 0.7\n"
        "n_plus_cm3 = 5e17\nn_minus_cm3 = 5e17\nv_bias = 0.0\n"
        "[grid]\nn_w = 16\nx_segments = 0:1:0.03333333333333333\nmu_segments = -1:1:0.25\n"
        "[output]\nlog_every = 0\n"
    ),
    "c8": (
        "[run]\ndevice = diode400\nscheme = rk2\nt_end = 0.05\nw_max = 40\nout_dir = {out}\n"
        "[grid]\nn_w = 30\n"
        "x_segments = 0:0.2:0.02, 0.2:0.4:0.01, 0.4:1.0:0.02\n"
        "mu_segments = -1:0.7:0.2833333333333333, 0.7:1:0.05\n"
        "[output]\nlog_every = 0\n"
    ),
    "c9": (
        "[run]\ndevice = diode50\nscheme = rk2\nt_end = 0.005\nw_max = 40\nout_dir = {out}\n"
        "[output]\nlog_every = 0\n"
    ),
}

from boltdev.backend import available_backends as _ab
HAS_NUMBA = "numba" in _ab()


@pytest.mark.skipif(not HAS_NUMBA, reason="worker-count determinism applies to the jitted backend")
def test_criterion_11_worker_count_determinism(tmp_path):
    """Outputs of the criteria 7-9 configurations are bit-identical for 1 and
    2 worker threads (shortened horizons for 8/9; the property is per step)."""
    all_ok = True
    details = []
    for tag, cfg_text in _DET_CONFIGS.items():
        cfg = tmp_path / f"{tag}.cfg"
        outputs = []
        for threads in ("1", "2"):
            outdir = tmp_path / f"{tag}_t{threads}"
            cfg.write_text(cfg_text.format(out=outdir))
            env = dict(os.environ)
            env["NUMBA_NUM_THREADS"] = threads
            env["BOLTDEV_KERNELS"] = "numba"
            subprocess.run(
                [sys.executable, "-m", "boltdev", "run", "--config", str(cfg)],
                check=True, capture_output=True, env=env,
            )
            macro = sorted(outdir.glob("macro_*.csv"))
            assert macro, f"{tag}: no output emitted"
            outputs.append(b"".join(p.read_bytes() for p in macro))
        same = outputs[0] == outputs[1]
        all_ok &= same
        details.append(f"{tag}:{'identical' if same else 'DIFFER'}")
    report(11, all_ok, "; ".join(details))
    assert all_ok
