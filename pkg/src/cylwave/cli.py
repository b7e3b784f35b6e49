"""Command-line front end: every experiment as a subcommand.

The CLI is a thin client: it resolves a configuration (defaults < config
file < explicit flags), dispatches to the experiment runners, in-process by
default or against a running service via ``--server``, and writes the
results (CSV/JSON plus a manifest) into the output directory.  Re-running a
command from its manifest reproduces the outputs byte for byte.

Exit codes: 0 success, 2 argument/domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments
from .errors import DomainError, NumericalError
from .experiments import Outcome, Table, table_comments
from .packets import load_weights_table


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config or a manifest from a previous run")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--server", help="base URL of a running service; POST instead of computing locally")
    p.add_argument("--mass", type=float)
    p.add_argument("--speed", type=float)
    p.add_argument("--hbar", type=float)
    p.add_argument("--nodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--z-min", type=float, dest="z_min")
    p.add_argument("--z-max", type=float, dest="z_max")
    p.add_argument("--n-z", type=int, dest="n_z")
    p.add_argument("--r-max", type=float, dest="r_max")
    p.add_argument("--n-r", type=int, dest="n_r")
    p.add_argument("--dt", type=float)
    p.add_argument("--pad-fraction", type=float, dest="pad_fraction")
    p.add_argument("--amp-a", type=_complex_arg, dest="amp_a")
    p.add_argument("--amp-b", type=_complex_arg, dest="amp_b")
    p.add_argument("--exponent", type=float)
    p.add_argument("--decay", type=float)
    p.add_argument("--weights-table", dest="weights_table",
                   help="load tabulated spectral weights from a text table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cylwave",
        description="dispersionless cylindrical wave packets: evaluation, "
                    "norm scans, and an independent propagation check",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mode-eval", help="sample a single mode on the grid")
    _add_common(p)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--c1", type=_complex_arg, default=None)
    p.add_argument("--c2", type=_complex_arg, default=None)
    p.add_argument("--c3", type=_complex_arg, default=None)
    p.add_argument("--c4", type=_complex_arg, default=None)
    p.add_argument("--t", type=float, default=None)

    p = sub.add_parser("packet-field", help="sample the packet on the grid")
    _add_common(p)
    p.add_argument("--t", type=float, default=None)

    p = sub.add_parser("residual", help="finite-difference Schrodinger residual")
    _add_common(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--hz", type=float, default=None)
    p.add_argument("--hr", type=float, default=None)
    p.add_argument("--ht", type=float, default=None)
    p.add_argument("--probes", type=int, default=None)
    p.add_argument("--target", choices=("packet", "mode"), default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--c1", type=_complex_arg, default=None)
    p.add_argument("--c2", type=_complex_arg, default=None)
    p.add_argument("--c3", type=_complex_arg, default=None)
    p.add_argument("--c4", type=_complex_arg, default=None)

    p = sub.add_parser("norm-scan", help="window norms over growing half-lengths")
    _add_common(p)
    p.add_argument("--z-list", type=_float_list, dest="z_list", default=None)
    p.add_argument("--n-q", type=int, dest="n_q", default=None)
    p.add_argument("--n-zq", type=int, dest="n_zq", default=None,
                   help="Gauss-Legendre nodes for the z integral")

    p = sub.add_parser("propagate-compare",
                       help="Crank-Nicolson run vs analytic translation, plus the "
                            "dispersive Gaussian contrast")
    _add_common(p)
    p.add_argument("--t-final", type=float, dest="t_final", default=None)
    p.add_argument("--sigma0", type=float, default=None)
    p.add_argument("--t-gauss", type=float, dest="t_gauss", default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _load_config_file(path: str) -> tuple[dict, dict]:
    """Returns (config dict, args dict); accepts raw configs and manifests."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "config" in data and "command" in data:
        return data["config"], data.get("args", {})
    return data, {}


def _merge_config(ns: argparse.Namespace, file_cfg: dict) -> experiments.RunConfig:
    base = experiments.propagation_config() if ns.command == "propagate-compare" \
        else experiments.default_config()
    cfg = experiments.config_from_dict(file_cfg, base=base) if file_cfg else base

    d = experiments.config_to_dict(cfg)
    for name in ("mass", "speed", "hbar"):
        if getattr(ns, name) is not None:
            d["params"][name] = getattr(ns, name)
    if ns.z_min is not None:
        d["z_grid"]["lo"] = ns.z_min
    if ns.z_max is not None:
        d["z_grid"]["hi"] = ns.z_max
    if ns.n_z is not None:
        d["z_grid"]["n"] = ns.n_z
    if ns.r_max is not None:
        d["r_grid"]["hi"] = ns.r_max
    if ns.n_r is not None:
        d["r_grid"]["n"] = ns.n_r
    for name in ("nodes", "seed", "dt", "pad_fraction"):
        if getattr(ns, name) is not None:
            d[name] = getattr(ns, name)
    if ns.weights_table is not None:
        table = load_weights_table(ns.weights_table)
        d["weights"] = experiments.weights_to_dict(table)
    else:
        w = d["weights"]
        if w["kind"] == "power_exp":
            if ns.amp_a is not None:
                w["amp_a"] = [ns.amp_a.real, ns.amp_a.imag]
            if ns.amp_b is not None:
                w["amp_b"] = [ns.amp_b.real, ns.amp_b.imag]
            if ns.exponent is not None:
                w["exponent"] = ns.exponent
            if ns.decay is not None:
                w["decay"] = ns.decay
    return experiments.config_from_dict(d)


def _pick(ns_value, args_value, default):
    if ns_value is not None:
        return ns_value
    if args_value is not None:
        return args_value
    return default


def _cpair(value) -> complex:
    if isinstance(value, complex):
        return value
    return complex(value[0], value[1])


def _run_local(command: str, cfg: experiments.RunConfig, ns: argparse.Namespace,
               file_args: dict) -> Outcome:
    if command == "mode-eval":
        return experiments.run_mode_eval(
            cfg,
            q=_pick(ns.q, file_args.get("q"), 0.0),
            c1=_cpair(_pick(ns.c1, file_args.get("c1"), 0j)),
            c2=_cpair(_pick(ns.c2, file_args.get("c2"), 1.0 + 0j)),
            c3=_cpair(_pick(ns.c3, file_args.get("c3"), 1.0 + 0j)),
            c4=_cpair(_pick(ns.c4, file_args.get("c4"), 0j)),
            t=_pick(ns.t, file_args.get("t"), 0.0),
        )
    if command == "packet-field":
        return experiments.run_packet_field(cfg, t=_pick(ns.t, file_args.get("t"), 0.0))
    if command == "residual":
        file_h = file_args.get("h", {})
        h = (_pick(ns.hz, file_h.get("dz"), 1e-3),
             _pick(ns.hr, file_h.get("dr"), 1e-3),
             _pick(ns.ht, file_h.get("dt"), 1e-3))
        target = _pick(ns.target, file_args.get("target"), "packet")
        mode_args = None
        if target == "mode":
            fm = file_args.get("mode", {})
            mode_args = {
                "q": _pick(ns.q, fm.get("q"), 0.0),
                "c1": _as_pair(_pick(ns.c1, fm.get("c1"), [0.0, 0.0])),
                "c2": _as_pair(_pick(ns.c2, fm.get("c2"), [1.0, 0.0])),
                "c3": _as_pair(_pick(ns.c3, fm.get("c3"), [1.0, 0.0])),
                "c4": _as_pair(_pick(ns.c4, fm.get("c4"), [0.0, 0.0])),
            }
        return experiments.run_residual(
            cfg, t=_pick(ns.t, file_args.get("t"), 0.0), h=h,
            n_probes=_pick(ns.probes, file_args.get("n_probes"), 32),
            target=target, mode_args=mode_args)
    if command == "norm-scan":
        return experiments.run_norm_scan(
            cfg,
            half_lengths=_pick(ns.z_list, file_args.get("half_lengths"),
                               [50.0, 100.0, 150.0, 200.0, 300.0, 400.0]),
            n_q=_pick(ns.n_q, file_args.get("n_q"), 1024),
            n_z=_pick(ns.n_zq, file_args.get("n_z"), 1024),
        )
    if command == "propagate-compare":
        return experiments.run_propagate_compare(
            cfg,
            t_final=_pick(ns.t_final, file_args.get("t_final"), 1.0),
            sigma0=_pick(ns.sigma0, file_args.get("sigma0"), 1.0),
            t_gauss=_pick(ns.t_gauss, file_args.get("t_gauss"), 2.0),
        )
    raise DomainError(f"unknown command {command!r}")


def _as_pair(value) -> list[float]:
    if isinstance(value, complex):
        return [value.real, value.imag]
    return [float(value[0]), float(value[1])]


def _request_payload(command: str, cfg: experiments.RunConfig, ns, file_args: dict) -> dict:
    d = experiments.config_to_dict(cfg)
    payload: dict = {"config": d}
    if command == "mode-eval":
        payload.update({
            "q": _pick(ns.q, file_args.get("q"), 0.0),
            "c1": _as_pair(_pick(ns.c1, file_args.get("c1"), [0.0, 0.0])),
            "c2": _as_pair(_pick(ns.c2, file_args.get("c2"), [1.0, 0.0])),
            "c3": _as_pair(_pick(ns.c3, file_args.get("c3"), [1.0, 0.0])),
            "c4": _as_pair(_pick(ns.c4, file_args.get("c4"), [0.0, 0.0])),
            "t": _pick(ns.t, file_args.get("t"), 0.0),
        })
    elif command == "packet-field":
        payload["t"] = _pick(ns.t, file_args.get("t"), 0.0)
    elif command == "residual":
        file_h = file_args.get("h", {})
        payload.update({
            "t": _pick(ns.t, file_args.get("t"), 0.0),
            "h": {"dz": _pick(ns.hz, file_h.get("dz"), 1e-3),
                  "dr": _pick(ns.hr, file_h.get("dr"), 1e-3),
                  "dt": _pick(ns.ht, file_h.get("dt"), 1e-3)},
            "n_probes": _pick(ns.probes, file_args.get("n_probes"), 32),
            "target": _pick(ns.target, file_args.get("target"), "packet"),
        })
        if payload["target"] == "mode":
            fm = file_args.get("mode", {})
            payload["mode"] = {
                "q": _pick(ns.q, fm.get("q"), 0.0),
                "c1": _as_pair(_pick(ns.c1, fm.get("c1"), [0.0, 0.0])),
                "c2": _as_pair(_pick(ns.c2, fm.get("c2"), [1.0, 0.0])),
                "c3": _as_pair(_pick(ns.c3, fm.get("c3"), [1.0, 0.0])),
                "c4": _as_pair(_pick(ns.c4, fm.get("c4"), [0.0, 0.0])),
            }
    elif command == "norm-scan":
        payload.update({
            "half_lengths": _pick(ns.z_list, file_args.get("half_lengths"),
                                  [50.0, 100.0, 150.0, 200.0, 300.0, 400.0]),
            "n_q": _pick(ns.n_q, file_args.get("n_q"), 1024),
            "n_z": _pick(ns.n_zq, file_args.get("n_z"), 1024),
        })
    elif command == "propagate-compare":
        payload.update({
            "t_final": _pick(ns.t_final, file_args.get("t_final"), 1.0),
            "sigma0": _pick(ns.sigma0, file_args.get("sigma0"), 1.0),
            "t_gauss": _pick(ns.t_gauss, file_args.get("t_gauss"), 2.0),
        })
    return payload


def response_to_outcome(command: str, payload: dict) -> Outcome:
    """Rebuild the exact Outcome (files included) from a service response."""
    manifest = payload["manifest"]
    comments = table_comments(command, manifest)
    if command in ("mode-eval", "packet-field"):
        name = "mode_field" if command == "mode-eval" else "field"
        table = Table(columns=tuple(payload["columns"]),
                      rows=[tuple(r) for r in payload["rows"]],
                      comments=comments[name])
        return Outcome(command, manifest, tables={name: table})
    if command == "residual":
        doc = {"max_abs": payload["max_abs"], "rms": payload["rms"],
               "scale": payload["scale"], "grid_step": payload["grid_step"]}
        return Outcome(command, manifest, documents={"residual": doc})
    if command == "norm-scan":
        table = Table(columns=("Z", "N"),
                      rows=list(zip(payload["half_lengths"], payload["norms"])),
                      comments=comments["norms"])
        fit = {"slope": payload["slope"], "intercept": payload["intercept"],
               "r_squared": payload["r_squared"]}
        return Outcome(command, manifest, tables={"norms": table},
                       documents={"fit": fit})
    if command == "propagate-compare":
        doc = {"overlap_dispersionless": payload["overlap_dispersionless"],
               "gaussian_width_measured": payload["gaussian_width_measured"],
               "gaussian_width_predicted": payload["gaussian_width_predicted"]}
        return Outcome(command, manifest, documents={"compare": doc})
    raise DomainError(f"unknown command {command!r}")


def _run_remote(command: str, cfg, ns, file_args: dict) -> Outcome:
    import httpx

    payload = _request_payload(command, cfg, ns, file_args)
    resp = httpx.post(f"{ns.server.rstrip('/')}/v1/{command}", json=payload,
                      timeout=600.0)
    if resp.status_code == 400:
        raise DomainError(resp.json().get("detail", "domain error"))
    if resp.status_code >= 500:
        raise NumericalError(resp.json().get("detail", "numerical failure"))
    resp.raise_for_status()
    return response_to_outcome(command, resp.json())


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=ns.host, port=ns.port)
        return 0
    try:
        file_cfg, file_args = _load_config_file(ns.config) if ns.config else ({}, {})
        cfg = _merge_config(ns, file_cfg)
        if ns.server:
            outcome = _run_remote(ns.command, cfg, ns, file_args)
        else:
            outcome = _run_local(ns.command, cfg, ns, file_args)
        names = outcome.write(ns.out)
        for name in names:
            print(f"wrote {name}")
        return 0
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
