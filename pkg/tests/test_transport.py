import numpy as np
import pytest
from oracle_utils import brute_transport_rhs_1d, brute_transport_rhs_2d

from boltdev.basis import DGField
from boltdev.constants import default_silicon
from boltdev.device import set_zero_inflow_ghosts
from boltdev.mesh import PhaseGrid, uniform_axis
from boltdev.quadtables import build_streaming_tables, maxwellian_cell_moments
from boltdev.transport import eval_g, transport_rhs_1d, transport_rhs_2d


def test_eval_g_forced_zeros(const):
    assert eval_g(1, 0.0, 0.5, 0.0, 1.0, 1.0, const) == 0.0
    # g4's sqrt(1-mu^2) factor vanishes at mu = +-1
    assert eval_g(4, 1.0, 1.0, 0.0, 1.0, 0.0, const) == 0.0
    assert eval_g(4, 1.0, -1.0, 0.0, 1.0, 0.0, const) == 0.0
    # g5's sin(phi) vanishes at 0 and pi
    assert eval_g(5, 1.0, 0.5, 0.0, 0.0, 1.0, const) == pytest.approx(0.0, abs=1e-16)
    assert eval_g(5, 1.0, 0.5, np.pi, 0.0, 1.0, const) == pytest.approx(0.0, abs=1e-15)


def test_eval_g_odd_in_phi(const):
    v1 = eval_g(2, 2.0, 0.3, 0.7, 0.0, 0.0, const)
    v2 = eval_g(2, 2.0, 0.3, np.pi - 0.7, 0.0, 0.0, const)
    assert v1 == pytest.approx(-v2, rel=1e-14)


def test_eval_g1_direct_value():
    c0 = default_silicon(alpha_k=1e-300)
    assert eval_g(1, 1.0, 0.5, 0.0, 0.0, 0.0, c0) == pytest.approx(0.16857 * 0.5, rel=1e-12)


def test_eval_g_singularities(const):
    with pytest.raises(ValueError):
        eval_g(4, 0.0, 0.5, 0.0, 1.0, 0.0, const)
    with pytest.raises(ValueError):
        eval_g(5, 1.0, 1.0, 0.5, 0.0, 1.0, const)
    with pytest.raises(ValueError):
        eval_g(7, 1.0, 0.5, 0.0, 0.0, 0.0, const)


def test_requires_ghosts(toy_grid_1d, const):
    st = build_streaming_tables(toy_grid_1d, const)
    f = DGField.zeros(toy_grid_1d)
    with pytest.raises(ValueError, match="ghost"):
        transport_rhs_1d(f, np.zeros(toy_grid_1d.x.n), st, toy_grid_1d, const)


def test_rejects_bad_field_sample(toy_grid_1d, const):
    st = build_streaming_tables(toy_grid_1d, const)
    f = DGField.zeros(toy_grid_1d)
    set_zero_inflow_ghosts(f)
    with pytest.raises(FloatingPointError):
        transport_rhs_1d(f, np.full(toy_grid_1d.x.n, np.nan), st, toy_grid_1d, const)


def test_1d_vs_bruteforce_oracle(toy_grid_1d, const):
    rng = np.random.RandomState(5)
    f = DGField.zeros(toy_grid_1d)
    f.data[...] = rng.normal(size=f.data.shape)  # ghosts carry data too
    f.ghost_state = "zero"
    st = build_streaming_tables(toy_grid_1d, const)
    e = np.array([3.0, -2.0, 0.7, -0.1, 1.3])[: toy_grid_1d.x.n]
    got = transport_rhs_1d(f, e, st, toy_grid_1d, const)
    ref = brute_transport_rhs_1d(f, e, toy_grid_1d, const, nq=28)
    assert np.allclose(got, ref, rtol=1e-11, atol=1e-12 * np.abs(ref).max())


def test_2d_vs_bruteforce_oracle(toy_grid_2d, const):
    rng = np.random.RandomState(6)
    f = DGField.zeros(toy_grid_2d)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    st = build_streaming_tables(toy_grid_2d, const)
    ex = rng.normal(size=(2, 2)) * 3.0
    ey = rng.normal(size=(2, 2)) * 3.0
    got = transport_rhs_2d(f, ex, ey, st, toy_grid_2d, const)
    ref = brute_transport_rhs_2d(f, ex, ey, toy_grid_2d, const, nq=20)
    assert np.allclose(got, ref, rtol=1e-10, atol=1e-11 * np.abs(ref).max())


def test_constant_state_preserved(toy_grid_1d, toy_grid_2d, const):
    st = build_streaming_tables(toy_grid_1d, const)
    f = DGField.zeros(toy_grid_1d)
    f.data[0] = 3.7  # including ghosts: the x-advection telescopes away
    f.ghost_state = "contact"
    r = transport_rhs_1d(f, np.zeros(toy_grid_1d.x.n), st, toy_grid_1d, const)
    assert np.abs(r).max() <= 1e-12 * 3.7
    st2 = build_streaming_tables(toy_grid_2d, const)
    f2 = DGField.zeros(toy_grid_2d)
    f2.data[0] = 3.7
    f2.ghost_state = "contact"
    r2 = transport_rhs_2d(f2, np.zeros((2, 2)), np.zeros((2, 2)), st2, toy_grid_2d, const)
    assert np.abs(r2).max() <= 1e-12 * 3.7


def test_single_cell_pulse_upwind_direction(const):
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 4),
                     w=uniform_axis(0, 4, 2), mu=uniform_axis(-1, 1, 2))
    st = build_streaming_tables(grid, const)
    f = DGField.zeros(grid)
    m_pos = 1  # cell with mu_m > 0
    f.comp("T")[1, 0, m_pos] = 1.0
    set_zero_inflow_ghosts(f)
    r = transport_rhs_1d(f, np.zeros(4), st, grid, const)
    # mass leaves the pulse cell and enters only the right neighbor
    assert r[0, 1, 0, m_pos] < 0.0
    assert r[0, 2, 0, m_pos] > 0.0
    assert r[0, 0, 0, m_pos] == 0.0


def test_uniform_maxwellian_zero_field_stationary(const):
    """x-uniform data with E = 0: the g1 volume and face terms cancel."""
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 3),
                     w=uniform_axis(0, 20, 4), mu=uniform_axis(-1, 1, 4))
    st = build_streaming_tables(grid, const)
    m0, m1 = maxwellian_cell_moments(grid.w, const.alpha_k)
    f = DGField.zeros(grid)
    f.data[0, :, :, :] = (m0 / grid.w.widths)[None, :, None]
    f.data[2, :, :, :] = (3 * m1 / grid.w.widths)[None, :, None]
    f.ghost_state = "contact"
    r = transport_rhs_1d(f, np.zeros(3), st, grid, const)
    assert np.abs(r).max() <= 1e-12 * np.abs(f.data).max()


def test_flux_conservation_interior(toy_grid_1d, const):
    """Total mass rate equals the net boundary inflow (interior faces telescope)."""
    rng = np.random.RandomState(8)
    f = DGField.zeros(toy_grid_1d)
    f.interior[...] = rng.normal(size=f.interior.shape)
    set_zero_inflow_ghosts(f)
    st = build_streaming_tables(toy_grid_1d, const)
    e = rng.normal(size=toy_grid_1d.x.n)
    r = transport_rhs_1d(f, e, st, toy_grid_1d, const)
    g = toy_grid_1d
    meas = g.x.widths[:, None, None] * g.w.widths[None, :, None] * g.mu.widths[None, None, :]
    total_rate = np.sum(r[0] * meas)
    # boundary flux: outflow through x faces via the g1 moments of the traces
    st_ = st
    c_x = const.c_x
    out_flux = 0.0
    for m in range(g.mu.n):
        mu_m = g.mu.centers[m]
        for k in range(g.w.n):
            if mu_m > 0:  # leaves through the right face from the last cell
                A = f.data[0, -2, k, m] + f.data[1, -2, k, m]
                B = f.data[2, -2, k, m]
                C = f.data[3, -2, k, m]
            else:  # leaves through the left face of the first cell
                A = f.data[0, 1, k, m] - f.data[1, 1, k, m]
                B = f.data[2, 1, k, m]
                C = f.data[3, 1, k, m]
            val = c_x * (
                A * st_.s1m[0, k] * st_.mu_m[0, m]
                + B * st_.s1m[1, k] * st_.mu_m[0, m]
                + C * st_.s1m[0, k] * st_.mu_m[1, m]
            )
            out_flux += val if mu_m > 0 else -val
    assert total_rate == pytest.approx(-out_flux, rel=1e-10, abs=1e-12)


def test_l2_dissipation_frozen_field(const):
    """Upwind transport with zero inflow shrinks the L2 norm (one Euler step)."""
    grid = PhaseGrid(kind="diode", x=uniform_axis(0, 1, 12),
                     w=uniform_axis(0, 10, 6), mu=uniform_axis(-1, 1, 4))
    st = build_streaming_tables(grid, const)
    rng = np.random.RandomState(9)
    f = DGField.zeros(grid)
    f.comp("T")[4:8, 1:4, :] = 1.0 + rng.rand(4, 3, 4)
    e = np.full(grid.x.n, 7.0)
    dt = 1e-5
    norms = []
    for _ in range(100):
        set_zero_inflow_ghosts(f)
        r = transport_rhs_1d(f, e, st, grid, const)
        f.interior[...] += dt * r
        norms.append(f.l2_norm())
    norms = np.array(norms)
    assert np.all(np.diff(norms) <= 1e-13)


def test_2d_mirror_symmetry_preserved(const):
    """Data invariant under the combined reflection (y -> -y, phi -> pi - phi,
    Y and P negated) with specular closure and E_y = 0 stays invariant."""
    from boltdev.device import specular_ghosts

    g = PhaseGrid(kind="mosfet", x=uniform_axis(0, 0.2, 2), y=uniform_axis(0, 0.1, 2),
                  w=uniform_axis(0, 5, 3), mu=uniform_axis(-1, 1, 2),
                  phi=uniform_axis(0, np.pi, 4))
    st = build_streaming_tables(g, const)
    rng = np.random.RandomState(10)
    f = DGField.zeros(g)
    f.interior[:, :, 0] = rng.normal(size=(6, 2, 3, 2, 4))
    f.interior[:, :, 1] = f.interior[:, :, 0, :, :, ::-1]
    f.interior[2, :, 1] *= -1.0
    f.interior[5, :, 1] *= -1.0
    f.data[:, 0] = f.data[:, 1]
    f.data[:, -1] = f.data[:, -2]
    f.ghost_state = "contact"
    specular_ghosts(f, g)
    ex = rng.normal(size=(2, 1)) * np.ones((1, 2))  # symmetric across the midline
    r = transport_rhs_2d(f, ex, np.zeros((2, 2)), st, g, const)
    mirrored = r[:, :, ::-1, :, :, ::-1].copy()
    mirrored[2] *= -1.0
    mirrored[5] *= -1.0
    assert np.allclose(r, mirrored, rtol=1e-12, atol=1e-13 * np.abs(r).max())


def test_backend_agreement_1d(toy_grid_1d, const):
    pytest.importorskip("numba")
    rng = np.random.RandomState(12)
    f = DGField.zeros(toy_grid_1d)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    st = build_streaming_tables(toy_grid_1d, const)
    e = rng.normal(size=toy_grid_1d.x.n) * 4
    a = transport_rhs_1d(f, e, st, toy_grid_1d, const, backend="numpy")
    b = transport_rhs_1d(f, e, st, toy_grid_1d, const, backend="numba")
    assert np.allclose(a, b, rtol=1e-13, atol=1e-14 * np.abs(a).max())
