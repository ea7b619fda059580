"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 physicality error. Angles are
radians. Reports on standard output are ``key=value`` lines.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

from qnetcode import __version__, _backend
from qnetcode.circuits import BlochState, ResourceKind
from qnetcode.correlations import (
    BellDiagonalParams,
    bell_diagonal,
    bell_diagonal_discord_closed_form,
    boundary_channel,
    discord,
    ppt_separable,
)
from qnetcode.discord_teleport import run_butterfly_discord, sweep_fidelity
from qnetcode.network import TopologyError, load_topology
from qnetcode.protocols import (
    Mode,
    ProtocolConfig,
    cyclic_perm,
    identity_perm,
    run_kpair,
    sample_branches,
)
from qnetcode.qmath import hermitian_eigs

EXIT_OK, EXIT_INPUT, EXIT_PHYSICAL = 0, 1, 2
CSV_HEADER = [
    "theta",
    "phi",
    "c3",
    "fidelity_eq21",
    "fidelity_eq22_re",
    "fidelity_eq22_im",
    "abs_diff",
    "physical",
]
AGREEMENT_TOL = 1e-4


class InputError(Exception):
    pass


class PhysicalityError(Exception):
    pass


def fmt(x: float) -> str:
    s = f"{x:.15g}"
    return "0" if s == "-0" else s


@dataclass
class RunManifest:
    command: str
    parameters: dict
    tool_version: str
    input_digest: str

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
        }


def make_manifest(args: argparse.Namespace, input_paths=()) -> RunManifest:
    h = hashlib.sha256()
    for p in input_paths:
        with open(p, "rb") as fh:
            h.update(fh.read())
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "out", "command") and v is not None
    }
    return RunManifest(args.command, params, __version__, "sha256:" + h.hexdigest())


def atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def emit(pairs):
    for k, v in pairs:
        print(f"{k}={v}")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_perm(text: str, K: int) -> tuple[int, ...]:
    if text == "cyclic":
        return cyclic_perm(K)
    if text == "identity":
        return identity_perm(K)
    if text == "swap":
        if K != 2:
            raise InputError("perm 'swap' is only defined for K=2")
        return (2, 1)
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse perm {text!r}") from None


def load_inputs(path: str) -> list[BlochState]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, list):
        raise InputError(f"{path}: expected a list of {{theta, phi}} objects")
    states = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "theta" not in item:
            raise InputError(f"{path}: entry {i} needs 'theta' (and optional 'phi') in radians")
        extra = set(item) - {"theta", "phi"}
        if extra:
            raise InputError(f"{path}: entry {i} has unsupported keys {sorted(extra)}; radians only")
        try:
            states.append(BlochState(float(item["theta"]), float(item.get("phi", 0.0))))
        except (TypeError, ValueError) as exc:
            raise InputError(f"{path}: entry {i}: {exc} (angles are radians)") from None
    return states


def _angle(value: float, name: str, upper: float) -> float:
    if not (math.isfinite(value) and 0.0 <= value <= upper + 1e-12):
        raise InputError(f"--{name}={value} outside [0, {fmt(upper)}] (angles are radians)")
    return value


def _params(c1, c2, c3) -> BellDiagonalParams:
    try:
        return BellDiagonalParams(c1, c2, c3)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _triple(text: str) -> BellDiagonalParams:
    try:
        c = [float(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse channel {text!r}; expected c1,c2,c3") from None
    if len(c) != 3:
        raise InputError(f"channel {text!r} needs three coefficients")
    return _params(*c)


def cmd_run(args) -> int:
    try:
        resource = ResourceKind(args.resource)
    except ValueError:
        raise InputError(f"unknown resource {args.resource!r}") from None
    perm = parse_perm(args.perm, args.k)
    inputs = load_inputs(args.inputs)
    mode = Mode.PASSTHROUGH if args.passthrough else Mode.CODED
    try:
        cfg = ProtocolConfig(args.k, resource, perm, inputs, mode)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = run_kpair(cfg)
    payload = result.to_dict()
    payload["resource"] = resource.value
    payload["perm"] = list(cfg.perm)
    payload["mode"] = mode.value
    if args.sample:
        picks = sample_branches(result, args.sample, args.seed)
        payload["samples"] = [
            {
                "words": [[w.z, w.x] for w in result.branches[i].words],
                "payload": list(result.branches[i].payload),
                "fidelities": [fmt(f) for f in result.branches[i].fidelities],
            }
            for i in picks
        ]
    doc = {"manifest": make_manifest(args, [args.inputs]).to_dict(), "result": payload}
    text = _dump_json(doc)
    if args.out:
        atomic_write(args.out, text)
    emit(
        [
            ("k", args.k),
            ("resource", resource.value),
            ("mode", mode.value),
            ("fidelities", ",".join(fmt(f) for f in result.per_target_fidelity)),
            ("min_branch_fidelities", ",".join(fmt(f) for f in result.min_branch_fidelity)),
            ("bottleneck_bits", result.bottleneck_bits),
            ("branch_count", result.branch_count),
        ]
    )
    return EXIT_OK


def sweep_csv(surface) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    phys = "true" if surface.physical else "false"
    for th, ph, f, pr in surface.rows():
        w.writerow(
            [fmt(th), fmt(ph), fmt(surface.c3), fmt(f), fmt(pr.real), fmt(pr.imag),
             fmt(abs(pr - f)), phys]
        )
    return buf.getvalue()


def cmd_sweep(args) -> int:
    if args.theta_steps < 2:
        raise InputError("--theta-steps must be at least 2")
    if args.phi_steps < 1:
        raise InputError("--phi-steps must be at least 1")
    if args.phi is not None and args.phi_steps != 1:
        raise InputError("--phi is only used with --phi-steps 1")
    if not abs(args.c3) <= 1.0:
        raise InputError(f"--c3={args.c3} must lie in [-1, 1]")
    if args.phi is not None:
        _angle(args.phi, "phi", 2 * math.pi)
    physical = boundary_channel(args.c3).physical
    if not physical and not args.allow_unphysical:
        raise PhysicalityError(
            f"channel at c3={fmt(args.c3)} is not positive semidefinite; pass --allow-unphysical"
        )
    surface = sweep_fidelity(args.theta_steps, args.phi_steps, args.c3, args.phi)
    atomic_write(args.out, sweep_csv(surface))
    manifest = make_manifest(args).to_dict()
    manifest["metadata"] = surface.metadata
    atomic_write(args.out + ".manifest.json", _dump_json(manifest))
    th, ph = surface.argmax()
    emit(
        [
            ("rows", surface.values.size),
            ("max_fidelity", fmt(float(surface.values.max()))),
            ("argmax_theta", fmt(th)),
            ("argmax_phi", fmt(ph)),
            ("max_abs_diff", fmt(float(surface.abs_diff.max()))),
            ("physical", str(physical).lower()),
            ("out", args.out),
        ]
    )
    return EXIT_OK


def cmd_discord(args) -> int:
    params = _params(args.c1, args.c2, args.c3)
    rho = bell_diagonal(params)
    if not rho.physical:
        raise PhysicalityError(
            f"state is not positive semidefinite (min eigenvalue {fmt(rho.min_eigenvalue)}); "
            "entropies are undefined"
        )
    lines = []
    if args.method in ("minimize", "both"):
        rep = discord(rho)
        lines += [
            ("mutual_information", fmt(rep.mutual_information)),
            ("classical_correlation", fmt(rep.classical_correlation)),
            ("discord", fmt(rep.discord)),
            ("argmin_theta", fmt(rep.argmin_axis.theta_m)),
            ("argmin_phi", fmt(rep.argmin_axis.phi_m)),
        ]
    if args.method in ("closed", "both"):
        i_c, j_c, d_c = bell_diagonal_discord_closed_form(params)
        prefix = "" if args.method == "closed" else "closed_"
        lines += [
            (prefix + "mutual_information", fmt(i_c)),
            (prefix + "classical_correlation", fmt(j_c)),
            (prefix + "discord", fmt(d_c)),
        ]
        if args.method == "both":
            gap = max(
                abs(rep.mutual_information - i_c),
                abs(rep.classical_correlation - j_c),
                abs(rep.discord - d_c),
            )
            lines.append(("max_disagreement", fmt(gap)))
            if gap > AGREEMENT_TOL:
                print(f"warning: minimiser and closed form disagree by {fmt(gap)}", file=sys.stderr)
    lines += [
        ("physical", "true"),
        ("ppt_separable", str(ppt_separable(rho)).lower()),
        ("method", args.method),
    ]
    emit(lines)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.topology:
        try:
            topo = load_topology(args.topology)
        except OSError as exc:
            raise InputError(f"cannot read {args.topology}: {exc.strerror}") from None
        except TopologyError as exc:
            raise InputError(f"{args.topology}: {exc}") from None
        emit(
            [
                ("topology_nodes", len(topo.nodes)),
                ("topology_edges", len(topo.edges)),
                ("bottleneck", topo.bottleneck_edge.id),
                ("bottleneck_capacity", topo.bottleneck_edge.capacity),
                ("acyclic", "true"),
            ]
        )
    coeffs = (args.c1, args.c2, args.c3)
    if args.topology and all(c is None for c in coeffs):
        return EXIT_OK
    params = _params(*(0.0 if c is None else c for c in coeffs))
    rho = bell_diagonal(params)
    eigs = hermitian_eigs(rho).eigenvalues
    lines = [
        ("c", ",".join(fmt(c) for c in params.as_tuple())),
        ("eigenvalues", ",".join(fmt(float(e)) for e in eigs)),
        ("min_eigenvalue", fmt(rho.min_eigenvalue)),
        ("physical", str(rho.physical).lower()),
    ]
    if rho.physical:
        lines.append(("ppt_separable", str(ppt_separable(rho)).lower()))
    emit(lines)
    if not rho.physical and not args.allow_unphysical:
        raise PhysicalityError("channel is not positive semidefinite")
    return EXIT_OK


def cmd_butterfly(args) -> int:
    in1 = BlochState(_angle(args.theta1, "theta1", math.pi), _angle(args.phi1, "phi1", 2 * math.pi))
    in2 = BlochState(_angle(args.theta2, "theta2", math.pi), _angle(args.phi2, "phi2", 2 * math.pi))
    ch1, ch2 = _triple(args.ch1), _triple(args.ch2)
    if not args.allow_unphysical:
        for name, ch in (("ch1", ch1), ("ch2", ch2)):
            if not bell_diagonal(ch).physical:
                raise PhysicalityError(f"{name} is not positive semidefinite; pass --allow-unphysical")
    res = run_butterfly_discord(in1, in2, ch1, ch2)
    f1, f2 = res.fidelities
    if args.out:
        doc = {
            "manifest": make_manifest(args).to_dict(),
            "result": {
                "fidelities": [float(fmt(f1)), float(fmt(f2))],
                "bottleneck_bits": res.bottleneck_bits,
                "channels_physical": list(res.channels_physical),
                "traffic": res.traffic.to_list(),
            },
        }
        atomic_write(args.out, _dump_json(doc))
    emit(
        [
            ("fidelity_1", fmt(f1)),
            ("fidelity_2", fmt(f2)),
            ("bottleneck_bits", res.bottleneck_bits),
            ("capacity_violations", 0),
            ("ch1_physical", str(res.channels_physical[0]).lower()),
            ("ch2_physical", str(res.channels_physical[1]).lower()),
        ]
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qnetcode", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_backend.NAME} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a K-pair network coding protocol")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--resource", default="epr", choices=[k.value for k in ResourceKind])
    r.add_argument("--perm", default="cyclic", help="cyclic, swap, identity or a list like 3,1,2")
    r.add_argument("--passthrough", action="store_true", help="identity placement, no coding")
    r.add_argument("--inputs", required=True, help="JSON list of {theta, phi} in radians")
    r.add_argument("--out", help="result JSON with embedded manifest")
    r.add_argument("--sample", type=int, default=0, help="also draw N branches (demo only)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--allow-unphysical", action="store_true")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="fidelity surface over theta and phi as CSV")
    s.add_argument("--theta-steps", type=int, default=181)
    s.add_argument("--phi-steps", type=int, default=181)
    s.add_argument("--phi", type=float, help="phi value when --phi-steps is 1")
    s.add_argument("--c3", type=float, default=0.0)
    s.add_argument("--out", required=True)
    s.add_argument("--allow-unphysical", action="store_true")
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("discord", help="correlations of a Bell-diagonal state")
    for c in ("c1", "c2", "c3"):
        d.add_argument(f"--{c}", type=float, default=0.0)
    d.add_argument("--method", choices=["minimize", "closed", "both"], default="minimize")
    d.set_defaults(func=cmd_discord)

    v = sub.add_parser("validate", help="channel physicality/PPT report and topology check")
    for c in ("c1", "c2", "c3"):
        v.add_argument(f"--{c}", type=float, help="default 0")
    v.add_argument("--topology", help="topology JSON file to check")
    v.add_argument("--allow-unphysical", action="store_true")
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("butterfly-discord", help="butterfly network over Bell-diagonal channels")
    b.add_argument("--theta1", type=float, default=math.pi / 2)
    b.add_argument("--phi1", type=float, default=0.0)
    b.add_argument("--theta2", type=float, default=math.pi / 2)
    b.add_argument("--phi2", type=float, default=0.0)
    b.add_argument("--ch1", default="1,0,0", help="c1,c2,c3 of the first channel")
    b.add_argument("--ch2", default="1,0,0", help="c1,c2,c3 of the second channel")
    b.add_argument("--out")
    b.add_argument("--allow-unphysical", action="store_true")
    b.set_defaults(func=cmd_butterfly)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PhysicalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICAL


if __name__ == "__main__":
    sys.exit(main())
