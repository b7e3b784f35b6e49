"""Reproducible experiment runners shared by the CLI and the HTTP service.

Each runner maps a resolved :class:`RunConfig` plus command arguments to an
:class:`Outcome`: a manifest (config echo and derived constants) together
with named tables (written as CSV) and documents (written as JSON).  Running
the same resolved configuration twice produces byte-identical files; every
float is printed with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import modes, oracle, packets
from .errors import DomainError
from .specialfn import bessel_j0


def fmt(x) -> str:
    """17-significant-digit decimal form; round-trips any double."""
    return format(float(x), ".17g")


def _json_value(obj, out: list, indent: int) -> None:
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f'{pad}  "{k}": ')
            _json_value(v, out, indent + 2)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad + "  ")
            _json_value(v, out, indent + 2)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt(obj))
    elif obj is None:
        out.append("null")
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'"{escaped}"')
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_json(obj) -> str:
    """Deterministic JSON with fixed key order and 17-digit floats."""
    out: list[str] = []
    _json_value(obj, out, 0)
    return "".join(out) + "\n"


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: list
    comments: tuple[str, ...] = ()

    def render_csv(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(fmt(v) for v in row))
        return "\n".join(lines) + "\n"


@dataclass
class Outcome:
    command: str
    manifest: dict
    tables: dict[str, Table] = dc_field(default_factory=dict)
    documents: dict[str, dict] = dc_field(default_factory=dict)

    def files(self) -> dict[str, str]:
        """Rendered file name -> content mapping, manifest included."""
        out = {}
        for name, table in self.tables.items():
            out[f"{name}.csv"] = table.render_csv()
        for name, doc in self.documents.items():
            out[f"{name}.json"] = dumps_json(doc)
        out["manifest.json"] = dumps_json(self.manifest)
        return out

    def write(self, outdir) -> list[str]:
        import os

        os.makedirs(outdir, exist_ok=True)
        names = []
        for name, content in self.files().items():
            with open(os.path.join(outdir, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
            names.append(name)
        return names


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs besides per-command arguments."""

    params: modes.PhysicalParams
    weights: packets.SpectralWeights
    z_grid: packets.UniformGrid
    r_grid: packets.UniformGrid
    nodes: int = 256
    seed: int = 0
    dt: float | None = None          # None -> min(dz, dr)^2 m / hbar
    pad_fraction: float = 0.25

    def resolved_dt(self) -> float:
        if self.dt is not None:
            return float(self.dt)
        return oracle.default_time_step(self.z_grid, self.r_grid, self.params)


def default_config() -> RunConfig:
    return RunConfig(
        params=modes.PhysicalParams(),
        weights=packets.PowerExpWeights(),
        z_grid=packets.UniformGrid(-10.0, 10.0, 201),
        r_grid=packets.UniformGrid(0.0, 8.0, 101),
    )


def propagation_config() -> RunConfig:
    """Box sized so the buffer-trimmed window stays clean over a unit run."""
    return RunConfig(
        params=modes.PhysicalParams(),
        weights=packets.PowerExpWeights(),
        z_grid=packets.UniformGrid(-60.0, 60.0, 1201),
        r_grid=packets.UniformGrid(0.0, 40.0, 401),
        pad_fraction=0.2,
    )


def weights_to_dict(w: packets.SpectralWeights) -> dict:
    if isinstance(w, packets.PowerExpWeights):
        return {
            "kind": "power_exp",
            "amp_a": [w.amp_a.real, w.amp_a.imag],
            "amp_b": [w.amp_b.real, w.amp_b.imag],
            "exponent": w.exponent,
            "decay": w.decay,
        }
    return {
        "kind": "tabulated",
        "rows": [[float(q), float(a.real), float(a.imag), float(b.real), float(b.imag)]
                 for q, a, b in zip(w.q, w.a, w.b)],
    }


def weights_from_dict(d: dict) -> packets.SpectralWeights:
    kind = d.get("kind")
    if kind == "power_exp":
        return packets.PowerExpWeights(
            amp_a=complex(d.get("amp_a", [1.0, 0.0])[0], d.get("amp_a", [1.0, 0.0])[1]),
            amp_b=complex(d.get("amp_b", [1.0, 0.0])[0], d.get("amp_b", [1.0, 0.0])[1]),
            exponent=float(d.get("exponent", 1.0)),
            decay=float(d.get("decay", 2.0)),
        )
    if kind == "tabulated":
        rows = np.asarray(d["rows"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 5:
            raise DomainError("tabulated weight rows must be [q, ReA, ImA, ReB, ImB]")
        return packets.TabulatedWeights(
            q=rows[:, 0], a=rows[:, 1] + 1j * rows[:, 2], b=rows[:, 3] + 1j * rows[:, 4]
        )
    raise DomainError(f"unknown weights kind {kind!r}")


def config_to_dict(cfg: RunConfig) -> dict:
    return {
        "params": {"mass": cfg.params.mass, "speed": cfg.params.speed,
                   "hbar": cfg.params.hbar},
        "weights": weights_to_dict(cfg.weights),
        "z_grid": {"lo": cfg.z_grid.lo, "hi": cfg.z_grid.hi, "n": cfg.z_grid.n},
        "r_grid": {"lo": cfg.r_grid.lo, "hi": cfg.r_grid.hi, "n": cfg.r_grid.n},
        "nodes": cfg.nodes,
        "seed": cfg.seed,
        "dt": cfg.dt,
        "pad_fraction": cfg.pad_fraction,
    }


def config_from_dict(d: dict, base: RunConfig | None = None) -> RunConfig:
    base = base or default_config()
    params_d = d.get("params", {})
    params = modes.PhysicalParams(
        mass=float(params_d.get("mass", base.params.mass)),
        speed=float(params_d.get("speed", base.params.speed)),
        hbar=float(params_d.get("hbar", base.params.hbar)),
    )
    weights = weights_from_dict(d["weights"]) if "weights" in d else base.weights
    zg = d.get("z_grid")
    z_grid = packets.UniformGrid(float(zg["lo"]), float(zg["hi"]), int(zg["n"])) \
        if zg else base.z_grid
    rg = d.get("r_grid")
    r_grid = packets.UniformGrid(float(rg["lo"]), float(rg["hi"]), int(rg["n"])) \
        if rg else base.r_grid
    dt = d.get("dt", base.dt)
    return RunConfig(
        params=params,
        weights=weights,
        z_grid=z_grid,
        r_grid=r_grid,
        nodes=int(d.get("nodes", base.nodes)),
        seed=int(d.get("seed", base.seed)),
        dt=None if dt is None else float(dt),
        pad_fraction=float(d.get("pad_fraction", base.pad_fraction)),
    )


def _wavenumber_rows(params: modes.PhysicalParams, qs) -> list:
    rows = []
    for q in qs:
        k = modes.axial_wavenumbers(params, float(q))
        rows.append({"q": float(q), "k_plus": k.k_plus, "k_minus": k.k_minus})
    return rows


def _manifest(command: str, cfg: RunConfig, args: dict, qs_for_table) -> dict:
    return {
        "command": command,
        "config": config_to_dict(cfg),
        "args": args,
        "derived": {
            "q_max": cfg.params.q_max,
            "wavenumbers": _wavenumber_rows(cfg.params, qs_for_table),
        },
    }


def table_comments(command: str, manifest: dict) -> dict[str, tuple[str, ...]]:
    """CSV header comments as a pure function of the manifest.

    Shared by the in-process writers and the HTTP thin client so both
    render identical files.
    """
    args = manifest.get("args", {})
    q_max = manifest["derived"]["q_max"]
    if command == "mode-eval":
        return {"mode_field": (f"mode-eval q={fmt(args['q'])} t={fmt(args['t'])}",
                               f"q_max={fmt(q_max)}")}
    if command == "packet-field":
        return {"field": (f"packet-field t={fmt(args['t'])}", f"q_max={fmt(q_max)}")}
    if command == "norm-scan":
        return {"norms": ("window norms N(Z) = 2*pi int dz int (brace) dq/q",)}
    return {}


# ---------------------------------------------------------------------------
# runners


def run_mode_eval(cfg: RunConfig, q: float, c1: complex, c2: complex, c3: complex,
                  c4: complex = 0j, t: float = 0.0) -> Outcome:
    mode = modes.Mode.bounded(cfg.params, q, c1, c2, c3, c4)
    zs = cfg.z_grid.points()
    rs = cfg.r_grid.points()
    radial = [modes.eval_radial(cfg.params, mode, float(r)) for r in rs]
    rows = []
    for z in zs:
        axial = modes.eval_axial(cfg.params, mode, float(z) - cfg.params.speed * t)
        for r, rad in zip(rs, radial):
            v = rad * axial
            rows.append((float(z), float(r), v.real, v.imag,
                         v.real * v.real + v.imag * v.imag))
    args = {
        "q": float(q),
        "c1": [complex(c1).real, complex(c1).imag],
        "c2": [complex(c2).real, complex(c2).imag],
        "c3": [complex(c3).real, complex(c3).imag],
        "c4": [complex(c4).real, complex(c4).imag],
        "t": float(t),
    }
    manifest = _manifest("mode-eval", cfg, args, [q])
    manifest["outputs"] = ["mode_field.csv"]
    table = Table(columns=("z", "r", "re", "im", "abs2"), rows=rows,
                  comments=table_comments("mode-eval", manifest)["mode_field"])
    return Outcome("mode-eval", manifest, tables={"mode_field": table})


def _node_qs(cfg: RunConfig) -> np.ndarray:
    kappa, *_ = packets._spectral_rule(cfg.params, cfg.weights, cfg.nodes)
    return kappa * kappa


def run_packet_field(cfg: RunConfig, t: float = 0.0) -> Outcome:
    field = packets.eval_packet_grid(cfg.params, cfg.weights, cfg.nodes,
                                     cfg.z_grid, cfg.r_grid, t)
    zs = cfg.z_grid.points()
    rs = cfg.r_grid.points()
    rows = []
    for i, z in enumerate(zs):
        for j, r in enumerate(rs):
            v = field.values[i, j]
            rows.append((float(z), float(r), v.real, v.imag,
                         v.real * v.real + v.imag * v.imag))
    args = {"t": float(t)}
    manifest = _manifest("packet-field", cfg, args, _node_qs(cfg))
    manifest["outputs"] = ["field.csv"]
    table = Table(columns=("z", "r", "re", "im", "abs2"), rows=rows,
                  comments=table_comments("packet-field", manifest)["field"])
    return Outcome("packet-field", manifest, tables={"field": table})


def _residual_probes(cfg: RunConfig, h: tuple[float, float, float], n_probes: int):
    """Seeded probe set: a few axis points plus interior bulk points."""
    rng = np.random.default_rng(cfg.seed)
    dz, dr, _ = h
    z_lo = cfg.z_grid.lo + 2.0 * dz
    z_hi = cfg.z_grid.hi - 2.0 * dz
    r_lo = max(2.0 * dr, 1e-3)
    r_hi = max(cfg.r_grid.hi - 2.0 * dr, r_lo * 2.0)
    n_axis = max(1, n_probes // 5)
    n_bulk = n_probes - n_axis
    probes = [(float(z), 0.0) for z in rng.uniform(z_lo, z_hi, n_axis)]
    probes += [(float(z), float(r)) for z, r in zip(
        rng.uniform(z_lo, z_hi, n_bulk), rng.uniform(r_lo, r_hi, n_bulk))]
    return probes


def run_residual(cfg: RunConfig, t: float = 0.0,
                 h: tuple[float, float, float] = (1e-3, 1e-3, 1e-3),
                 n_probes: int = 32, target: str = "packet",
                 mode_args: dict | None = None) -> Outcome:
    if target == "packet":
        sampler = packet_sampler(cfg.params, cfg.weights, cfg.nodes)
        qs_for_table = _node_qs(cfg)
    elif target == "mode":
        ma = mode_args or {}
        mode = modes.Mode.bounded(
            cfg.params, float(ma.get("q", 0.0)),
            complex(*ma.get("c1", [0.0, 0.0])), complex(*ma.get("c2", [1.0, 0.0])),
            complex(*ma.get("c3", [1.0, 0.0])), complex(*ma.get("c4", [0.0, 0.0])))
        sampler = modes.mode_sampler(cfg.params, mode)
        qs_for_table = [mode.q]
    else:
        raise DomainError(f"residual target must be 'packet' or 'mode', got {target!r}")
    probes = _residual_probes(cfg, h, int(n_probes))
    report = oracle.schrodinger_residual(cfg.params, sampler, probes, t, h)
    args = {"t": float(t), "h": {"dz": h[0], "dr": h[1], "dt": h[2]},
            "n_probes": int(n_probes), "target": target}
    if target == "mode":
        args["mode"] = mode_args or {}
    manifest = _manifest("residual", cfg, args, qs_for_table)
    manifest["derived"]["relative_max"] = report.relative_max
    manifest["derived"]["relative_rms"] = report.relative_rms
    manifest["outputs"] = ["residual.json"]
    return Outcome("residual", manifest, documents={"residual": report.to_json_dict()})


def packet_sampler(params: modes.PhysicalParams, weights: packets.SpectralWeights,
                   n_nodes: int):
    """Vectorized pointwise packet evaluator for residual probes."""
    kappa, w, _, a, b, k_plus, k_minus = packets._spectral_rule(params, weights, n_nodes)
    wa = a * (2.0 * kappa * w)
    wb = b * (2.0 * kappa * w)

    def sample(z, r, t):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        u = z - params.speed * t
        axial = wa[None, :] * np.exp(1j * np.outer(u, k_plus)) \
            + wb[None, :] * np.exp(1j * np.outer(u, k_minus))
        radial = bessel_j0(np.outer(r, kappa))
        return np.sum(axial * radial, axis=1)

    return sample


def run_norm_scan(cfg: RunConfig, half_lengths, n_q: int = 1024,
                  n_z: int = 1024) -> Outcome:
    result = packets.norm_scan(cfg.params, cfg.weights, half_lengths, n_q, n_z)
    rows = [(z, n) for z, n in zip(result.half_lengths, result.norms)]
    args = {"half_lengths": [float(z) for z in half_lengths],
            "n_q": int(n_q), "n_z": int(n_z)}
    manifest = _manifest("norm-scan", cfg, args, _node_qs(cfg))
    manifest["outputs"] = ["norms.csv", "fit.json"]
    table = Table(columns=("Z", "N"), rows=rows,
                  comments=table_comments("norm-scan", manifest)["norms"])
    fit = {"slope": result.slope, "intercept": result.intercept,
           "r_squared": result.r_squared}
    return Outcome("norm-scan", manifest, tables={"norms": table},
                   documents={"fit": fit})


def run_propagate_compare(cfg: RunConfig, t_final: float = 1.0, sigma0: float = 1.0,
                          t_gauss: float = 2.0) -> Outcome:
    if t_final <= 0.0:
        raise DomainError(f"t_final must be positive, got {t_final!r}")
    dt = cfg.resolved_dt()
    steps = max(1, int(round(t_final / dt)))
    pconf = oracle.PropagatorConfig(dt=t_final / steps, steps=steps,
                                    pad_fraction=cfg.pad_fraction)
    initial = packets.eval_packet_grid(cfg.params, cfg.weights, cfg.nodes,
                                       cfg.z_grid, cfg.r_grid, 0.0)
    evolved = oracle.propagate(initial, pconf)
    reference = packets.eval_packet_grid(cfg.params, cfg.weights, cfg.nodes,
                                         cfg.z_grid, cfg.r_grid, t_final)
    ov = oracle.overlap(oracle.restrict_field(evolved, cfg.pad_fraction),
                        oracle.restrict_field(reference, cfg.pad_fraction))
    ov_full = oracle.overlap(evolved, reference)

    walls = initial.values.copy()
    walls[0, :] = 0.0
    walls[-1, :] = 0.0
    walls[:, -1] = 0.0
    start = packets.Field(values=walls, z_grid=initial.z_grid, r_grid=initial.r_grid,
                          time=0.0, params=cfg.params)
    n0 = packets.direct_cylinder_norm(start)
    n1 = packets.direct_cylinder_norm(evolved)
    drift = abs(n1 - n0) / n0
    n0_int = packets.direct_cylinder_norm(oracle.restrict_field(start, cfg.pad_fraction))
    n1_int = packets.direct_cylinder_norm(oracle.restrict_field(evolved, cfg.pad_fraction))

    gauss = _gaussian_dispersion(cfg.params, sigma0, t_gauss)

    args = {"t_final": float(t_final), "sigma0": float(sigma0), "t_gauss": float(t_gauss)}
    manifest = _manifest("propagate-compare", cfg, args, _node_qs(cfg))
    manifest["derived"].update({
        "dt": pconf.dt,
        "steps": pconf.steps,
        "overlap_full_box": abs(ov_full),
        "norm_drift_box": drift,
        "interior_norm_initial": n0_int,
        "interior_norm_final": n1_int,
        "interior_norm_transport": abs(n1_int - n0_int) / n0_int,
    })
    manifest["outputs"] = ["compare.json"]
    doc = {
        "overlap_dispersionless": abs(ov),
        "gaussian_width_measured": gauss["measured"],
        "gaussian_width_predicted": gauss["predicted"],
    }
    return Outcome("propagate-compare", manifest, documents={"compare": doc})


def _gaussian_dispersion(params: modes.PhysicalParams, sigma0: float,
                         t_gauss: float) -> dict:
    """Evolve a 1-D Gaussian with the z-part of the propagator, measure width."""
    predicted = oracle.gaussian_comparator(sigma0, params, t_gauss)
    half = 12.0 * max(predicted, sigma0)
    dz = sigma0 / 50.0
    n = 2 * int(round(half / dz)) + 1
    z = np.linspace(-half, half, n)
    dz = z[1] - z[0]
    psi0 = np.exp(-z * z / (4.0 * sigma0 * sigma0)).astype(complex)
    steps = 1000
    dt = t_gauss / steps
    psi1 = oracle.propagate_line(psi0, dz, params, dt, steps)
    return {"measured": oracle.measured_width(z, psi1), "predicted": predicted}


RUNNERS = {
    "mode-eval": run_mode_eval,
    "packet-field": run_packet_field,
    "residual": run_residual,
    "norm-scan": run_norm_scan,
    "propagate-compare": run_propagate_compare,
}
