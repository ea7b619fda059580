"""Regenerate RESULTS.md from the simulator.

    python3 scripts/record_results.py
"""

import math
from pathlib import Path

import numpy as np

from qnetcode.circuits import BlochState, ResourceKind
from qnetcode.correlations import boundary_channel, discord, ppt_separable
from qnetcode.protocols import ProtocolConfig, w_variant

W_SEED = 7
W_TUPLES = 10


def w_inputs(seed=W_SEED, count=W_TUPLES):
    rng = np.random.default_rng(seed)
    return [
        [BlochState(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi))) for _ in range(2)]
        for _ in range(count)
    ]


def w_rows():
    rows = []
    for pair in w_inputs():
        res = w_variant(ProtocolConfig(2, ResourceKind.W, (2, 1), pair))
        rows.append((pair, res.per_target_fidelity))
    return rows


def render() -> str:
    rows = w_rows()
    means = [sum(f) / 2 for _, f in rows]
    ch = boundary_channel(0.0)
    rep = discord(ch)
    out = [
        "# Recorded results",
        "",
        "Generated by `python3 scripts/record_results.py`; the acceptance suite",
        "recomputes every number below and fails if they drift.",
        "",
        "## W resource, K = 2, swapped demand",
        "",
        "The GHZ schedule run verbatim on W states (sender-local CNOT, Bell",
        "measurement, X then Z correction, middle qubit left untouched). Every",
        "value agrees with an independent 256x256 density-matrix simulation to",
        f"1e-9. Inputs: numpy seed {W_SEED}, theta uniform on [0, pi], phi uniform on [0, 2pi].",
        "",
        "| tuple | theta1 | phi1 | theta2 | phi2 | F(t1) | F(t2) | mean |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for i, ((a, b), f) in enumerate(rows):
        out.append(
            f"| {i} | {a.theta:.6f} | {a.phi:.6f} | {b.theta:.6f} | {b.phi:.6f} "
            f"| {f[0]:.12f} | {f[1]:.12f} | {sum(f) / 2:.12f} |"
        )
    out += [
        "",
        f"w_average_fidelity = {float(np.mean(means)):.12f}",
        "",
        "Perfect transfer with W resources is not observed: every branch-averaged",
        "fidelity sits well below 1. Single-pair reference values are 1/3 for |0>",
        "and 1/2 for |+>.",
        "",
        "## Boundary channel c1 = 1, c2 = c3 = 0",
        "",
        f"boundary_channel_discord = {rep.discord!r}",
        f"boundary_channel_mutual_information = {rep.mutual_information!r}",
        f"boundary_channel_classical_correlation = {rep.classical_correlation!r}",
        f"boundary_channel_ppt_separable = {str(ppt_separable(ch)).lower()}",
        "",
    ]
    return "\n".join(out)


if __name__ == "__main__":
    path = Path(__file__).resolve().parent.parent / "RESULTS.md"
    path.write_text(render(), encoding="utf-8")
    print(f"wrote {path}")
