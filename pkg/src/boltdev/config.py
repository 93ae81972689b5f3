"""Run configuration: a line-oriented key = value file with [section] headers.

Sections: [run] (device preset, scheme, cfl, t_end, w_max, out_dir),
[grid] (cell counts or explicit axis segments), [output] (snapshot times,
pdf slice positions), [device] (full custom device overriding the preset)
and [constants] (parameter overrides).  Unknown sections or keys are
errors; snapshot times beyond t_end are errors.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import io
from dataclasses import dataclass, field
from typing import Optional

from .constants import ScaledConstants, default_silicon
from .device import DeviceSpec, preset_devices
from .mesh import PhaseGrid, build_axis, preset_diode_mesh, preset_mosfet_mesh, uniform_axis

__all__ = ["RunConfig", "load_config", "save_config", "parse_segments"]

_RUN_KEYS = {"device", "scheme", "cfl", "t_end", "w_max", "out_dir"}
_GRID_KEYS = {"n_x", "n_y", "n_w", "n_mu", "n_phi", "oxide_rows", "x_segments", "mu_segments"}
_OUTPUT_KEYS = {"snapshot_times", "slice_positions", "slice_positions_y", "cartesian_pdf", "log_every"}
_DEVICE_KEYS = {
    "name", "kind", "length_x", "channel", "n_plus_cm3", "n_minus_cm3", "v_bias",
    "transition_cells", "si_half_height", "oxide_thickness", "oxide_rows", "gate_span",
    "psi_source", "psi_drain", "psi_gate",
}


class ConfigError(ValueError):
    pass


def parse_segments(text: str) -> tuple[tuple[float, float, float], ...]:
    """Parse "a:b:h, b:c:h2" into build_axis breakpoints."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        bits = part.split(":")
        if len(bits) != 3:
            raise ConfigError(f"segment {part!r} is not start:end:width")
        out.append(tuple(float(b) for b in bits))
    if not out:
        raise ConfigError("empty segment list")
    return tuple(out)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.replace(",", " ").split())


@dataclass(frozen=True)
class RunConfig:
    device: DeviceSpec
    constants: ScaledConstants = field(default_factory=default_silicon)
    scheme: str = "rk2"
    cfl: Optional[float] = None
    t_end: float = 5.0
    w_max: float = 40.0
    out_dir: str = "out"
    snapshot_times: tuple[float, ...] = ()
    slice_positions: tuple[float, ...] = ()
    slice_positions_y: tuple[float, ...] = ()
    cartesian_pdf: bool = False
    log_every: int = 200
    n_x: Optional[int] = None
    n_y: Optional[int] = None
    n_w: Optional[int] = None
    n_mu: Optional[int] = None
    n_phi: Optional[int] = None
    oxide_rows: Optional[int] = None
    x_segments: Optional[tuple[tuple[float, float, float], ...]] = None
    mu_segments: Optional[tuple[tuple[float, float, float], ...]] = None

    def __post_init__(self):
        if self.scheme not in ("euler", "rk2"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.t_end < 0.0:
            raise ConfigError("t_end must be nonnegative")
        if self.cfl is not None and not (0.0 < self.cfl <= 1.0):
            raise ConfigError("cfl must lie in (0, 1]")
        bad = [s for s in self.snapshot_times if s > self.t_end]
        if bad:
            raise ConfigError(f"snapshot times {bad} exceed t_end = {self.t_end}")

    def build_grid(self) -> PhaseGrid:
        dev = self.device
        if dev.kind == "mosfet":
            kw = {}
            if self.n_x:
                kw["n_x"] = self.n_x
            if self.n_y:
                kw["n_y"] = self.n_y
            if self.n_w:
                kw["n_w"] = self.n_w
            if self.n_mu:
                kw["n_mu"] = self.n_mu
            if self.n_phi:
                kw["n_phi"] = self.n_phi
            return preset_mosfet_mesh(
                w_max=self.w_max,
                x_extent=dev.length_x,
                si_half_height=dev.si_half_height,
                oxide_thickness=dev.oxide_thickness,
                m_y_oxide=self.oxide_rows or dev.oxide_rows,
                **kw,
            )
        if self.x_segments or self.mu_segments:
            if not (self.x_segments and self.mu_segments):
                raise ConfigError("explicit grids need both x_segments and mu_segments")
            return PhaseGrid(
                kind="diode",
                x=build_axis(self.x_segments),
                w=uniform_axis(0.0, self.w_max, self.n_w or 60),
                mu=build_axis(self.mu_segments),
            )
        if dev.name in ("diode400", "diode50"):
            return preset_diode_mesh(dev.name, w_max=self.w_max, n_w=self.n_w or 60)
        raise ConfigError(f"device {dev.name!r} has no preset mesh; give grid segments")

    def digest(self) -> str:
        """Hash of the physics-relevant configuration (output paths excluded)."""
        import dataclasses

        canon = dataclasses.replace(self, out_dir="")
        return hashlib.sha256(repr(canon).encode()).hexdigest()[:16]


def _check_keys(parser, section, allowed):
    if not parser.has_section(section):
        return
    unknown = set(parser[section]) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")


def load_config(path) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    with open(path) as fh:
        try:
            parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    known_sections = {"run", "grid", "output", "device", "constants"}
    unknown = set(parser.sections()) - known_sections
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    for sec, keys in (
        ("run", _RUN_KEYS), ("grid", _GRID_KEYS), ("output", _OUTPUT_KEYS),
        ("device", _DEVICE_KEYS),
    ):
        _check_keys(parser, sec, keys)
    if parser.has_section("constants"):
        allowed = {f.name for f in dataclasses.fields(ScaledConstants)}
        _check_keys(parser, "constants", allowed)

    run = parser["run"] if parser.has_section("run") else {}
    devname = run.get("device", "diode400")
    presets = preset_devices()
    if parser.has_section("device"):
        d = dict(parser["device"])
        base = presets.get(devname)
        kw = {}
        if base is not None:
            kw = dataclasses.asdict(base)
        kw.update(
            {
                k: (
                    _floats(v) if k in ("channel", "gate_span")
                    else v if k in ("name", "kind")
                    else int(v) if k in ("transition_cells", "oxide_rows")
                    else float(v)
                )
                for k, v in d.items()
            }
        )
        kw.setdefault("name", devname)
        device = DeviceSpec(**kw)
    else:
        if devname not in presets:
            raise ConfigError(f"unknown device preset {devname!r}; have {sorted(presets)}")
        device = presets[devname]

    const_kw = {}
    if parser.has_section("constants"):
        const_kw = {k: float(v) for k, v in parser["constants"].items()}

    grid = parser["grid"] if parser.has_section("grid") else {}
    out = parser["output"] if parser.has_section("output") else {}
    getint = lambda sec, key: int(sec[key]) if key in sec else None
    try:
        cfg = RunConfig(
            device=device,
            constants=default_silicon(**const_kw),
            scheme=run.get("scheme", "euler" if device.kind == "mosfet" else "rk2"),
            cfl=float(run["cfl"]) if "cfl" in run else None,
            t_end=float(run.get("t_end", 0.5 if device.kind == "mosfet" else 5.0)),
            w_max=float(run.get("w_max", 40.0)),
            out_dir=run.get("out_dir", "out"),
            snapshot_times=_floats(out["snapshot_times"]) if "snapshot_times" in out else (),
            slice_positions=_floats(out["slice_positions"]) if "slice_positions" in out else (),
            slice_positions_y=_floats(out["slice_positions_y"]) if "slice_positions_y" in out else (),
            cartesian_pdf=out.get("cartesian_pdf", "false").lower() in ("1", "true", "yes"),
            log_every=int(out.get("log_every", 200)),
            n_x=getint(grid, "n_x"),
            n_y=getint(grid, "n_y"),
            n_w=getint(grid, "n_w"),
            n_mu=getint(grid, "n_mu"),
            n_phi=getint(grid, "n_phi"),
            oxide_rows=getint(grid, "oxide_rows"),
            x_segments=parse_segments(grid["x_segments"]) if "x_segments" in grid else None,
            mu_segments=parse_segments(grid["mu_segments"]) if "mu_segments" in grid else None,
        )
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return cfg


def save_config(cfg: RunConfig, path) -> None:
    parser = configparser.ConfigParser()
    parser["run"] = {
        "device": cfg.device.name,
        "scheme": cfg.scheme,
        "t_end": repr(cfg.t_end),
        "w_max": repr(cfg.w_max),
        "out_dir": cfg.out_dir,
    }
    if cfg.cfl is not None:
        parser["run"]["cfl"] = repr(cfg.cfl)
    dev = cfg.device
    parser["device"] = {
        "name": dev.name,
        "kind": dev.kind,
        "length_x": repr(dev.length_x),
        "channel": f"{dev.channel[0]!r}, {dev.channel[1]!r}",
        "n_plus_cm3": repr(dev.n_plus_cm3),
        "n_minus_cm3": repr(dev.n_minus_cm3),
        "v_bias": repr(dev.v_bias),
        "transition_cells": str(dev.transition_cells),
        "si_half_height": repr(dev.si_half_height),
        "oxide_thickness": repr(dev.oxide_thickness),
        "oxide_rows": str(dev.oxide_rows),
        "gate_span": f"{dev.gate_span[0]!r}, {dev.gate_span[1]!r}",
        "psi_source": repr(dev.psi_source),
        "psi_drain": repr(dev.psi_drain),
        "psi_gate": repr(dev.psi_gate),
    }
    parser["constants"] = {k: repr(v) for k, v in cfg.constants.header_items()}
    outsec = {"log_every": str(cfg.log_every), "cartesian_pdf": str(cfg.cartesian_pdf).lower()}
    if cfg.snapshot_times:
        outsec["snapshot_times"] = ", ".join(repr(t) for t in cfg.snapshot_times)
    if cfg.slice_positions:
        outsec["slice_positions"] = ", ".join(repr(t) for t in cfg.slice_positions)
    if cfg.slice_positions_y:
        outsec["slice_positions_y"] = ", ".join(repr(t) for t in cfg.slice_positions_y)
    parser["output"] = outsec
    gridsec = {}
    for key in ("n_x", "n_y", "n_w", "n_mu", "n_phi", "oxide_rows"):
        v = getattr(cfg, key)
        if v is not None:
            gridsec[key] = str(v)
    if cfg.x_segments:
        gridsec["x_segments"] = ", ".join(f"{a!r}:{b!r}:{h!r}" for a, b, h in cfg.x_segments)
    if cfg.mu_segments:
        gridsec["mu_segments"] = ", ".join(f"{a!r}:{b!r}:{h!r}" for a, b, h in cfg.mu_segments)
    if gridsec:
        parser["grid"] = gridsec
    buf = io.StringIO()
    parser.write(buf)
    with open(path, "w") as fh:
        fh.write(buf.getvalue())
