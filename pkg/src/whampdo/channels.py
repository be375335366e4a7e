"""Quantum channels on End(V^{(x)k}): coarse-graining, fine-graining, gluing maps
and the no-gluing witness.

A :class:`Channel` is canonically its Choi matrix J = sum_ij E_ij (x) E(E_ij)
(input factor first). Composites and replacement channels keep a factored
form so that large chains can be updated locally without materializing J.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numeric as nc
from .axioms import budget_entries, delta_power, validate_axioms
from .distinguished import DistinguishedElements, NotBiconnectedError, NotHopfError
from .mpdo import build_rho, check_positive
from .spec import WhaSpec

CPTP_TOL = 1e-9
FULL_CHOI_LIMIT = 1024  # d_in * d_out above which composite channels are checked stage-wise


class NonlinearMapError(ValueError):
    pass


@dataclass(eq=False)
class Channel:
    d_in: int
    d_out: int
    label: str
    _choi: np.ndarray | None = field(default=None, repr=False)
    stages: tuple = ()
    replacement: np.ndarray | None = field(default=None, repr=False)
    _superop: np.ndarray | None = field(default=None, repr=False)

    @property
    def choi(self) -> np.ndarray:
        if self._choi is None:
            if self.replacement is not None:
                self._choi = np.kron(np.eye(self.d_in), self.replacement)
            elif self.stages:
                self._choi = choi_from_superop(self.superop, self.d_in, self.d_out)
            else:
                raise ValueError("channel has no data")
        return self._choi

    @property
    def superop(self) -> np.ndarray:
        """Matrix S with vec(E(X)) = S vec(X), row-major vectorization."""
        if self._superop is None:
            if self.stages:
                s = self.stages[0].superop
                for st in self.stages[1:]:
                    s = st.superop @ s
                self._superop = s
            else:
                J = self.choi.reshape(self.d_in, self.d_out, self.d_in, self.d_out)
                self._superop = J.transpose(1, 3, 0, 2).reshape(self.d_out**2, self.d_in**2)
        return self._superop

    def apply(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=complex)
        if X.shape != (self.d_in, self.d_in):
            raise nc.DimensionError(f"{self.label}: expected {self.d_in}x{self.d_in} input, got {X.shape}")
        if self.replacement is not None:
            return np.trace(X) * self.replacement
        if self.stages:
            for st in self.stages:
                X = st.apply(X)
            return X
        return (self.superop @ X.reshape(-1)).reshape(self.d_out, self.d_out)

    def apply_many(self, Xs: np.ndarray) -> np.ndarray:
        """Apply to a stack of inputs of shape (m, d_in, d_in)."""
        Xs = np.asarray(Xs, dtype=complex)
        m = Xs.shape[0]
        if self.replacement is not None:
            return np.einsum("tii->t", Xs)[:, None, None] * self.replacement
        if self.stages:
            for st in self.stages:
                Xs = st.apply_many(Xs)
            return Xs
        out = Xs.reshape(m, -1) @ self.superop.T
        return out.reshape(m, self.d_out, self.d_out)

    def kraus(self, tol: float = 1e-12) -> list:
        return kraus_from_choi(self, tol)

    def cptp_residuals(self) -> dict:
        """Choi min-eigenvalue and trace-preservation residual.

        Composites too large for a direct eigen-solve are certified stage by
        stage: a composition of CPTP maps is CPTP.
        """
        if self.replacement is not None:
            return {
                "choi_min_eig": nc.min_eigenvalue(self.replacement),
                "tp_residual": abs(np.trace(self.replacement) - 1.0),
                "method": "replacement",
            }
        if self.stages and self.d_in * self.d_out > FULL_CHOI_LIMIT:
            parts = [st.cptp_residuals() for st in self.stages]
            return {
                "choi_min_eig": min(p["choi_min_eig"] for p in parts),
                "tp_residual": max(p["tp_residual"] for p in parts),
                "method": "stagewise",
            }
        J = self.choi
        tp = np.einsum("iaja->ij", J.reshape(self.d_in, self.d_out, self.d_in, self.d_out))
        return {
            "choi_min_eig": nc.min_eigenvalue(nc.hermitian_part(J)),
            "tp_residual": nc.max_abs(tp - np.eye(self.d_in)),
            "hermiticity": nc.hermiticity_residual(J),
            "method": "choi",
        }

    def is_cptp(self, tol: float = CPTP_TOL) -> bool:
        r = self.cptp_residuals()
        return r["choi_min_eig"] >= -tol and r["tp_residual"] <= tol and r.get("hermiticity", 0.0) <= tol


def choi_from_superop(S: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    J = S.reshape(d_out, d_out, d_in, d_in).transpose(2, 0, 3, 1)
    return J.reshape(d_in * d_out, d_in * d_out)


def choi_from_pairs(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Choi matrix of X -> sum_t tr(A_t X) B_t, which is sum_t A_t^T (x) B_t."""
    d_in, d_out = A.shape[1], B.shape[1]
    J = np.einsum("tji,tab->iajb", A, B, optimize=True)
    return J.reshape(d_in * d_out, d_in * d_out)


def choi_from_action(
    apply: Callable[[np.ndarray], np.ndarray],
    d_in: int,
    d_out: int,
    label: str = "map",
    seed: int = 7,
    tol: float = 1e-9,
) -> Channel:
    J = np.zeros((d_in, d_out, d_in, d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            E = np.zeros((d_in, d_in), dtype=complex)
            E[i, j] = 1.0
            J[i, :, j, :] = apply(E)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        X = rng.standard_normal((d_in, d_in)) + 1j * rng.standard_normal((d_in, d_in))
        Y = rng.standard_normal((d_in, d_in)) + 1j * rng.standard_normal((d_in, d_in))
        a = complex(rng.standard_normal(), rng.standard_normal())
        err = nc.max_abs(apply(a * X + Y) - a * apply(X) - apply(Y))
        if err > tol * max(1.0, nc.max_abs(apply(X))):
            raise NonlinearMapError(f"map is not linear (deviation {err:.3e})")
    return Channel(d_in, d_out, label, J.reshape(d_in * d_out, d_in * d_out))


def kraus_from_choi(ch: Channel, tol: float = 1e-12) -> list:
    vals, vecs = np.linalg.eigh(nc.hermitian_part(ch.choi))
    out = []
    for lam, v in zip(vals[::-1], vecs.T[::-1]):
        if lam <= tol:
            break
        out.append(np.sqrt(lam) * v.reshape(ch.d_in, ch.d_out).T)
    return out


def compose(*channels: Channel, label: str | None = None) -> Channel:
    """compose(E1, E2, ...) applies E1 first."""
    for a, b in zip(channels, channels[1:]):
        if a.d_out != b.d_in:
            raise nc.DimensionError(f"cannot compose {a.label} -> {b.label}")
    stages: list = []
    for ch in channels:
        stages.extend(ch.stages if ch.stages else (ch,))
    name = label or " then ".join(c.label for c in channels)
    return Channel(channels[0].d_in, channels[-1].d_out, name, stages=tuple(stages))


def replacement_channel(rho: np.ndarray, d_in: int, label: str = "init") -> Channel:
    rho = np.asarray(rho, dtype=complex)
    return Channel(d_in, rho.shape[0], label, replacement=rho)


def _sites(dim: int, site_dim: int) -> int:
    k = round(math.log(dim) / math.log(site_dim)) if site_dim > 1 else 1
    if site_dim**k != dim:
        raise nc.DimensionError(f"dimension {dim} is not a power of {site_dim}")
    return k


def apply_local(state: np.ndarray, ch: Channel, start: int, n_sites: int, site_dim: int) -> np.ndarray:
    """(id^{start} (x) ch (x) id) on an n_sites chain, contracting only the touched legs."""
    if ch.stages:
        for st in ch.stages:
            state = apply_local(state, st, start, n_sites, site_dim)
            n_sites += _sites(st.d_out, site_dim) - _sites(st.d_in, site_dim)
        return state
    d = site_dim
    k = _sites(ch.d_in, d)
    m = _sites(ch.d_out, d)
    if start < 0 or start + k > n_sites:
        raise nc.DimensionError(f"channel on sites {start}..{start + k - 1} does not fit {n_sites} sites")
    N = n_sites
    rows = list(range(start, start + k))
    rest = [i for i in range(N) if i not in rows]
    t = state.reshape((d,) * (2 * N))
    t = t.transpose(rows + [N + i for i in rows] + rest + [N + i for i in rest])
    t = t.reshape(d**k, d**k, -1)
    if ch.replacement is not None:
        out = ch.replacement[:, :, None] * np.trace(t, axis1=0, axis2=1)[None, None, :]
    else:
        out = (ch.superop @ t.reshape(d ** (2 * k), -1)).reshape(d**m, d**m, -1)
    R = N - k
    out = out.reshape((d,) * (2 * m) + (d,) * (2 * R))
    # axes: block rows 0..m-1, block cols m..2m-1, rest rows, rest cols
    blk_r = list(range(m))
    blk_c = list(range(m, 2 * m))
    rest_r = list(range(2 * m, 2 * m + R))
    rest_c = list(range(2 * m + R, 2 * m + 2 * R))
    order = rest_r[:start] + blk_r + rest_r[start:] + rest_c[:start] + blk_c + rest_c[start:]
    Nn = R + m
    return out.transpose(order).reshape(d**Nn, d**Nn)


def _require_biconnected(d: DistinguishedElements) -> None:
    if not (d.sectors.connected and d.sectors.coconnected):
        raise NotBiconnectedError("channel construction needs a biconnected algebra")


def _weighted_ops(spec: WhaSpec, d: DistinguishedElements) -> np.ndarray:
    return np.stack([spec.phi(spec.mul(d.c_omega, spec.e(j))) for j in range(spec.n)])


def coarse_grain(spec: WhaSpec, d: DistinguishedElements) -> Channel:
    """T(X) = tr(phi(xi T(Omega_1)) X) phi(c Omega_2) (x) phi(c Omega_3)."""
    _require_biconnected(d)
    n = spec.n
    A = np.stack([spec.phi(spec.mul(d.xi, d.T(spec.e(j)))) for j in range(n)])
    B = _weighted_ops(spec, d)
    D3 = delta_power(spec, d.Omega, 2)
    dim = spec.rep_dim
    BB = np.einsum("jkl,kab,lcd->jacbd", D3, B, B, optimize=True).reshape(n, dim * dim, dim * dim)
    return Channel(dim, dim * dim, "coarse_grain", choi_from_pairs(A, BB))


def projector_delta_one(spec: WhaSpec) -> np.ndarray:
    """P = phi^{(x)2}(Delta(1)); equal to the identity for Hopf algebras."""
    D1 = spec.delta(spec.unit)
    R = np.asarray(spec.rep)
    return np.einsum("pq,pab,qcd->acbd", D1, R, R).reshape(spec.rep_dim**2, spec.rep_dim**2)


def fine_grain(spec: WhaSpec, d: DistinguishedElements, rho0=None) -> Channel:
    """S(X) = tr(phi^{(x)2}(Delta(xi T(Omega_1))) X) phi(c Omega_2) + tr(P_perp X) rho0."""
    _require_biconnected(d)
    n, dim = spec.n, spec.rep_dim
    if rho0 is None:
        rho0 = np.eye(dim) / dim
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise nc.DimensionError(f"rho0 must be {dim}x{dim}")
    if nc.hermiticity_residual(rho0) > 1e-10 or nc.min_eigenvalue(rho0) < -1e-10 or abs(np.trace(rho0) - 1) > 1e-10:
        raise nc.NotPSDError("rho0 must be a density matrix")
    R = np.asarray(spec.rep)
    A = np.stack(
        [
            np.einsum("pq,pab,qcd->acbd", spec.delta(spec.mul(d.xi, d.T(spec.e(j)))), R, R).reshape(dim * dim, dim * dim)
            for j in range(n)
        ]
    )
    B = np.einsum("jk,kab->jab", spec.delta(d.Omega), _weighted_ops(spec, d))
    Pperp = np.eye(dim * dim) - projector_delta_one(spec)
    J = choi_from_pairs(np.concatenate([A, Pperp[None]]), np.concatenate([B, rho0[None]]))
    return Channel(dim * dim, dim, "fine_grain", J)


def _glue_stage(spec, coeffs: np.ndarray, left: np.ndarray, right: np.ndarray, label: str, d) -> Channel:
    """X (x) Y -> sum_abc coeffs[a,b,c] tr(left[a] X) phi(c e_b) tr(right[c] Y)."""
    n, dim = spec.n, spec.rep_dim
    A = np.einsum("aij,ckl->acikjl", left, right).reshape(n * n, dim * dim, dim * dim)
    B = np.einsum("abc,bij->acij", coeffs, _weighted_ops(spec, d)).reshape(n * n, dim, dim)
    return Channel(dim * dim, dim, label, choi_from_pairs(A, B))


def glue_hopf(spec: WhaSpec, d: DistinguishedElements, x, label: str = "x") -> Channel:
    """G_x = T o G with G(X (x) Y) = omega(x)^-1 tr(phi(S x_1) X) phi(c x_2) tr(phi(S x_3) Y)."""
    if not validate_axioms(spec).is_hopf:
        raise NotHopfError("glue_hopf needs a Hopf algebra; use glue_trivial for weak algebras")
    x = np.asarray(x, dtype=complex)
    check_positive(spec, x)
    wx = d.omega_of(x).real
    Sphi = np.stack([spec.phi(spec.S(spec.e(a))) for a in range(spec.n)])
    G = _glue_stage(spec, delta_power(spec, x, 2) / wx, Sphi, Sphi, f"merge_{label}", d)
    return compose(G, coarse_grain(spec, d), label=f"glue_{label}")


def glue_trivial(spec: WhaSpec, d: DistinguishedElements) -> Channel:
    """G_1 = T o G with G(X (x) Y) = D^-2 tr(phi(S(1_1) xiL) X) phi(c 1_2) tr(phi(xiR S(1_3)) Y)."""
    _require_biconnected(d)
    n = spec.n
    left = np.stack([spec.phi(spec.mul(spec.S(spec.e(a)), d.xiL)) for a in range(n)])
    right = np.stack([spec.phi(spec.mul(d.xiR, spec.S(spec.e(c)))) for c in range(n)])
    G = _glue_stage(spec, delta_power(spec, spec.unit, 2) / d.D2, left, right, "merge_1", d)
    return compose(G, coarse_grain(spec, d), label="glue_1")


def glue_trivial_kraus_factor(spec: WhaSpec, d: DistinguishedElements) -> np.ndarray:
    """Q with G(X (x) Y) = tr_{1,3}(Q (X (x) 1 (x) Y) Q^dagger)."""
    D3 = delta_power(spec, spec.unit, 2)
    sqL = nc.psd_sqrt(spec.phi(d.xiL))
    sqR = nc.psd_sqrt(spec.phi(d.xiR))
    sqc = nc.psd_sqrt(spec.phi(d.c_omega))
    n = spec.n
    f1 = np.stack([sqL @ spec.phi(spec.S(spec.adj(spec.e(a)))) for a in range(n)])
    f2 = np.stack([sqc @ spec.phi(spec.e(b)) for b in range(n)])
    f3 = np.stack([sqR @ spec.phi(spec.S(spec.e(c))) for c in range(n)])
    # the star in S(1_(1)*) conjugates the Sweedler coefficient along with the element
    D3c = np.conj(D3)
    dim = spec.rep_dim
    Q = np.einsum("abc,aij,bkl,cmn->ikmjln", D3c, f1, f2, f3, optimize=True)
    return Q.reshape(dim**3, dim**3) / np.sqrt(d.D2)


def glue_check(
    spec: WhaSpec,
    d: DistinguishedElements,
    ch: Channel,
    left,
    right,
    target,
    M: int,
    N: int,
    budget: int | None = None,
    dense_max_dim: int = 1024,
) -> dict:
    """Trace distance between (id (x) ch (x) id)(rho_M(left) (x) rho_N(right)) and rho_{M+N}(target).

    When the dense (M+N)-site state fits the budget the distance is computed
    exactly (up to ``dense_max_dim``, beyond which the eigen-solve dominates).
    Otherwise the outer sites are kept in the basis P_j = phi(c e_j):
    both sides are sums over outer indices J of P_J (x) (two-site block), so
    half the sum of ||block_J||_1 prod ||P_j||_1 is an upper bound on the
    trace distance, and it vanishes exactly when the identity holds.
    """
    dim, n = spec.rep_dim, spec.n
    limit = budget_entries() if budget is None else budget
    if dim ** (2 * (M + N)) <= limit and dim ** (M + N) <= dense_max_dim:
        a = build_rho(spec, d, left, M).rho
        b = build_rho(spec, d, right, N).rho
        out = apply_local(np.kron(a, b), ch, M - 1, M + N, dim)
        return {"distance": nc.trace_distance(out, build_rho(spec, d, target, M + N).rho), "method": "dense"}
    for z in (left, right, target):
        check_positive(spec, z)
    P = _weighted_ops(spec, d)
    wl, wr, wt = (d.omega_of(z).real for z in (left, right, target))
    A = delta_power(spec, left, M - 1, budget).reshape(-1, n) / wl
    B = delta_power(spec, right, N - 1, budget).reshape(n, -1) / wr
    PP = np.einsum("jab,kcd->jkacbd", P, P).reshape(n * n, dim * dim, dim * dim)
    GP = ch.apply_many(PP).reshape(n, n, dim * dim, dim * dim)
    lhs = np.einsum("Ij,jkXY,kK->IKXY", A, GP, B, optimize=True)
    R = delta_power(spec, target, M + N - 1, budget).reshape(A.shape[0], n, n, B.shape[1]) / wt
    rhs = np.einsum("IabK,abXY->IKXY", R, PP.reshape(n, n, dim * dim, dim * dim), optimize=True)
    diff = lhs - rhs
    norms = np.linalg.svd(diff, compute_uv=False).sum(axis=-1)
    w = np.linalg.svd(P, compute_uv=False).sum(axis=-1)
    wI = np.ones(1)
    for _ in range(M - 1):
        wI = np.multiply.outer(wI, w).reshape(-1)
    wK = np.ones(1)
    for _ in range(N - 1):
        wK = np.multiply.outer(wK, w).reshape(-1)
    bound = 0.5 * float(np.einsum("IK,I,K->", norms, wI, wK))
    return {"distance": bound, "method": "coefficient bound"}


@dataclass
class WitnessReport:
    lhs: np.ndarray
    rhs: np.ndarray
    distance: float
    middle_distance: float
    product_deviation: float
    lhs_product_deviation: float

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "middle_trace_distance": self.middle_distance,
            "rhs_product_deviation": self.product_deviation,
            "lhs_product_deviation": self.lhs_product_deviation,
        }


def _product_deviation(m: np.ndarray, dim: int) -> float:
    a = nc.partial_trace(m, [dim, dim], keep=[0])
    b = nc.partial_trace(m, [dim, dim], keep=[1])
    return nc.trace_norm(m - np.kron(a, b))


def no_gluing_witness(spec: WhaSpec, d: DistinguishedElements) -> WitnessReport:
    """Compare tr_{2,3}(rho_2(Omega) (x) rho_2(Omega)) with tr_{3,4} rho_4(Omega).

    A trace-preserving gluing map acting on sites 2,3 would leave the outer
    two-site marginal unchanged; the distance is zero for Hopf algebras.
    The reduction over the two middle sites is reported alongside.
    """
    _require_biconnected(d)
    dim = spec.rep_dim
    r2 = build_rho(spec, d, d.Omega, 2).rho
    r4 = build_rho(spec, d, d.Omega, 4).rho
    lhs = nc.partial_trace(np.kron(r2, r2), [dim] * 4, keep=[0, 3])
    rhs = nc.partial_trace(r4, [dim] * 4, keep=[0, 1])
    mid = nc.partial_trace(r4, [dim] * 4, keep=[0, 3])
    return WitnessReport(
        lhs=lhs,
        rhs=rhs,
        distance=nc.trace_distance(lhs, rhs),
        middle_distance=nc.trace_distance(lhs, mid),
        product_deviation=_product_deviation(rhs, dim),
        lhs_product_deviation=_product_deviation(lhs, dim),
    )
