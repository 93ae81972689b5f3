import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from boltdev.backend import available_backends, backend_name, get_kernels
from boltdev.basis import DGField
from boltdev.collision import apply_collision
from boltdev.quadtables import build_collision_tables, build_streaming_tables
from boltdev.transport import transport_rhs_1d, transport_rhs_2d


def test_backend_flag_resolution(monkeypatch):
    monkeypatch.setenv("BOLTDEV_KERNELS", "numpy")
    assert backend_name() == "numpy"
    monkeypatch.setenv("BOLTDEV_KERNELS", "auto")
    assert backend_name() in ("numba", "numpy")
    monkeypatch.setenv("BOLTDEV_KERNELS", "weird")
    with pytest.raises(ValueError):
        backend_name()
    assert backend_name("numpy") == "numpy"


def test_available_backends_contains_numpy():
    assert "numpy" in available_backends()


def test_kernel_modules_expose_same_api():
    np_mod = get_kernels("numpy")
    names = ["transport_rhs_1d", "transport_rhs_2d", "collision_rhs_1d", "collision_rhs_2d"]
    for n in names:
        assert hasattr(np_mod, n)
    if "numba" in available_backends():
        nb_mod = get_kernels("numba")
        for n in names:
            assert hasattr(nb_mod, n)


@pytest.mark.skipif("numba" not in available_backends(), reason="numba unavailable")
def test_backends_agree_2d(toy_grid_2d, const):
    rng = np.random.RandomState(13)
    f = DGField.zeros(toy_grid_2d)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    st = build_streaming_tables(toy_grid_2d, const)
    ct = build_collision_tables(toy_grid_2d, const)
    ex = rng.normal(size=(2, 2)) * 5
    ey = rng.normal(size=(2, 2)) * 5
    a = transport_rhs_2d(f, ex, ey, st, toy_grid_2d, const, backend="numpy")
    b = transport_rhs_2d(f, ex, ey, st, toy_grid_2d, const, backend="numba")
    assert np.allclose(a, b, rtol=1e-13, atol=1e-14 * np.abs(a).max())
    ca = apply_collision(f, ct, toy_grid_2d, backend="numpy")
    cb = apply_collision(f, ct, toy_grid_2d, backend="numba")
    assert np.allclose(ca, cb, rtol=1e-13, atol=1e-14 * np.abs(ca).max())


def test_numpy_backend_rerun_bitwise(toy_grid_1d, const):
    rng = np.random.RandomState(14)
    f = DGField.zeros(toy_grid_1d)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    st = build_streaming_tables(toy_grid_1d, const)
    e = rng.normal(size=toy_grid_1d.x.n)
    a = transport_rhs_1d(f, e, st, toy_grid_1d, const, backend="numpy")
    b = transport_rhs_1d(f, e, st, toy_grid_1d, const, backend="numpy")
    assert np.array_equal(a, b)


_WORKER_SCRIPT = textwrap.dedent(
    """
    import numpy as np
    from boltdev.basis import DGField
    from boltdev.constants import default_silicon
    from boltdev.mesh import preset_diode_mesh
    from boltdev.quadtables import build_collision_tables, build_streaming_tables
    from boltdev.transport import transport_rhs_1d
    from boltdev.collision import apply_collision

    const = default_silicon()
    grid = preset_diode_mesh("diode400", n_w=12)
    rng = np.random.RandomState(99)
    f = DGField.zeros(grid)
    f.data[...] = rng.normal(size=f.data.shape)
    f.ghost_state = "zero"
    st = build_streaming_tables(grid, const)
    ct = build_collision_tables(grid, const)
    e = rng.normal(size=grid.x.n) * 20
    r = transport_rhs_1d(f, e, st, grid, const, backend="numba")
    r = r + apply_collision(f, ct, grid, backend="numba")
    import sys
    sys.stdout.buffer.write(r.tobytes())
    """
)


@pytest.mark.skipif("numba" not in available_backends(), reason="numba unavailable")
def test_bit_identical_across_thread_counts(tmp_path):
    """Jitted kernels write cell-locally: 1 vs 2 threads match bit for bit."""
    outputs = []
    for threads in ("1", "2"):
        env = dict(os.environ)
        env["NUMBA_NUM_THREADS"] = threads
        env.pop("BOLTDEV_KERNELS", None)
        proc = subprocess.run(
            [sys.executable, "-c", _WORKER_SCRIPT],
            capture_output=True, env=env, cwd=tmp_path, check=True,
        )
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1]
    assert len(outputs[0]) > 0
