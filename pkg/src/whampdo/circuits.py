"""Depth-two circuits preparing rho_N(x) from the maximally mixed state.

Layer one replaces blocks of two sites (one leftmost block of three when N is
odd) by a fixed MPDO; layer two glues neighbouring blocks at their junctions.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import numeric as nc
from .axioms import validate_axioms
from .channels import Channel, apply_local, glue_hopf, glue_trivial, replacement_channel
from .distinguished import DistinguishedElements
from .mpdo import build_rho
from .spec import WhaSpec


class UnsupportedElementError(ValueError):
    pass


@dataclass
class CircuitPlan:
    N: int
    site_dim: int
    layer1: list  # (start, n_sites, Channel)
    layer2: list  # (start, Channel) acting on sites start, start + 1
    mode: str
    x_label: str
    x_slot: int | None = None
    notes: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "N": self.N,
            "mode": self.mode,
            "x": self.x_label,
            "layer1": [[s, k, ch.label] for s, k, ch in self.layer1],
            "layer2": [[s, ch.label] for s, ch in self.layer2],
            "x_slot": self.x_slot,
        }


def block_sizes(N: int) -> list:
    if N < 1:
        raise ValueError("N must be positive")
    if N <= 3:
        return [N]
    return ([3] if N % 2 else []) + [2] * ((N - 3 * (N % 2)) // 2)


def _matches(a, b, tol: float = 1e-10) -> bool:
    return nc.max_abs(np.asarray(a) - np.asarray(b)) <= tol


def plan_depth_two(spec: WhaSpec, d: DistinguishedElements, x, N: int, x_label: str = "x") -> CircuitPlan:
    x = np.asarray(x, dtype=complex)
    dim = spec.rep_dim
    sizes = block_sizes(N)
    starts = np.cumsum([0] + sizes[:-1]).tolist()
    hopf = validate_axioms(spec).is_hopf

    if hopf:
        mode, seed, glue = "hopf", d.Omega, None
    elif _matches(x, spec.unit):
        mode, seed = "weak-unit", spec.unit
    elif _matches(x, d.chihat_trivial()):
        mode, seed = "weak-chihat1", x
    else:
        raise UnsupportedElementError("weak algebras support only x = 1 or the trivial dual character")

    if len(sizes) == 1:
        # a single block is prepared directly; no gluing needed
        rho = build_rho(spec, d, x, N, x_label).rho
        return CircuitPlan(N, dim, [(0, N, replacement_channel(rho, dim**N, f"init rho_{N}({x_label})"))], [], mode, x_label)

    seed_label = {"hopf": "Omega", "weak-unit": "1", "weak-chihat1": x_label}[mode]
    cache: dict = {}
    layer1 = []
    for s, k in zip(starts, sizes):
        if k not in cache:
            cache[k] = replacement_channel(build_rho(spec, d, seed, k).rho, dim**k, f"init rho_{k}({seed_label})")
        layer1.append((s, k, cache[k]))

    junctions = [s - 1 for s in starts[1:]]
    notes = []
    if hopf:
        g_omega = glue_hopf(spec, d, d.Omega, "Omega")
        g_x = g_omega if _matches(x, d.Omega) else glue_hopf(spec, d, x, x_label)
        layer2 = [(j, g_omega) for j in junctions[:-1]] + [(junctions[-1], g_x)]
        slot = len(layer2) - 1
    else:
        g1 = glue_trivial(spec, d)
        layer2 = [(j, g1) for j in junctions]
        slot = None
        if mode == "weak-chihat1":
            notes.append("no gluing map for the trivial dual character is known; G_1 is used as an attempt")
    return CircuitPlan(N, dim, layer1, layer2, mode, x_label, slot, notes)


def run_circuit(plan: CircuitPlan, input_state, reverse_layers: bool = False) -> np.ndarray:
    state = nc.as_cmatrix(input_state)
    if state.shape != (plan.site_dim**plan.N,) * 2:
        raise nc.DimensionError(f"input must be {plan.site_dim ** plan.N}-dimensional")
    l1 = [(s, ch) for s, _, ch in plan.layer1]
    layers = [plan.layer2, l1] if reverse_layers else [l1, plan.layer2]
    for layer in layers:
        for start, ch in layer:
            state = apply_local(state, ch, start, plan.N, plan.site_dim)
    return state


def maximally_mixed(dim: int, N: int) -> np.ndarray:
    D = dim**N
    return np.eye(D, dtype=complex) / D


def verify_trivial_phase(spec: WhaSpec, d: DistinguishedElements, x, N: int, x_label: str = "x") -> dict:
    t0 = time.perf_counter()
    plan = plan_depth_two(spec, d, x, N, x_label)
    out = run_circuit(plan, maximally_mixed(spec.rep_dim, N))
    target = build_rho(spec, d, x, N, x_label).rho
    dist = nc.trace_distance(out, target)
    return {
        "distance": dist,
        "trace": float(np.trace(out).real),
        "runtime_s": time.perf_counter() - t0,
        "plan": plan.summary(),
        "notes": plan.notes,
    }
