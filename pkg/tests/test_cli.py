import pytest

from boltdev.cli import main


def test_presets_subcommand(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    for name in ("diode400", "diode50", "mosfet"):
        assert name in out


def test_unknown_subcommand_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code != 0


def test_poisson_test_subcommand(capsys):
    rc = main(["poisson-test", "--cells", "16,32,64", "--cells-2d", "16,32"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "observed orders" in out
    assert "PASS" in out


def test_poisson_test_matrix_dump(tmp_path, capsys):
    target = tmp_path / "system.mtx"
    rc = main(["poisson-test", "--cells", "8,16,32", "--cells-2d", "16,32",
               "--dump-matrix", str(target)])
    assert rc == 0
    assert target.exists()
    import scipy.io

    mat = scipy.io.mmread(target)
    assert mat.shape == (32, 32)  # 8 cells x 4 unknowns


def test_tables_dump_subcommand(tmp_path):
    out = tmp_path / "t.txt"
    rc = main(["tables-dump", "--device", "diode400", "--n-w", "6", "--out", str(out)])
    assert rc == 0
    assert "loss" in out.read_text()


def test_tables_dump_unknown_device(tmp_path):
    rc = main(["tables-dump", "--device", "nope", "--out", str(tmp_path / "t.txt")])
    assert rc == 1


def test_run_subcommand_emits_outputs(tmp_path):
    cfg = tmp_path / "short.cfg"
    cfg.write_text(
        "[run]\n"
        "device = diode400\n"
        "t_end = 0.002\n"
        "cfl = 0.2\n"
        f"out_dir = {tmp_path / 'out'}\n"
        "[grid]\n"
        "n_w = 8\n"
        "x_segments = 0:1:0.1\n"
        "mu_segments = -1:1:0.5\n"
        "[output]\n"
        "snapshot_times = 0.001\n"
        "slice_positions = 0.5\n"
        "cartesian_pdf = true\n"
        "log_every = 0\n"
    )
    rc = main(["run", "--config", str(cfg)])
    assert rc == 0
    outdir = tmp_path / "out"
    names = sorted(p.name for p in outdir.iterdir())
    assert "run.cfg" in names
    assert any(n.startswith("macro_t0.001") for n in names)
    assert any(n.startswith("macro_t0.002") for n in names)
    assert any(n.startswith("pdf_x0.5") for n in names)


def test_run_flag_overrides(tmp_path):
    outdir = tmp_path / "ovr"
    rc = main([
        "run", "--device", "diode400", "--t-end", "0.001", "--cfl", "0.2",
        "--wmax", "30", "--out-dir", str(outdir), "--log-every", "0",
        "--backend", "numpy",
    ])
    assert rc == 0
    saved = (outdir / "run.cfg").read_text()
    assert "t_end = 0.001" in saved
    assert "w_max = 30" in saved


def test_run_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[run]\ndevice = nosuch\n")
    assert main(["run", "--config", str(cfg)]) == 1
    assert "config error" in capsys.readouterr().err
