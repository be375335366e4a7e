"""Dense MPDO states rho_N(x), their MPO tensor form, and a small binary dump format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import numeric as nc
from .axioms import check_budget, delta_power
from .distinguished import DistinguishedElements
from .spec import WhaSpec


class NotPositiveElementError(ValueError):
    pass


@dataclass(frozen=True)
class MpdoState:
    N: int
    x_label: str
    rho: np.ndarray
    norm_omega: float
    site_dim: int
    spec_name: str = ""
    x: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def invariants(self, full_psd: bool = True) -> dict:
        out = {
            "hermiticity": nc.hermiticity_residual(self.rho),
            "trace": abs(np.trace(self.rho) - 1.0),
        }
        if full_psd:
            out["negativity"] = max(0.0, -nc.min_eigenvalue(self.rho))
        return out


def site_weights(spec: WhaSpec, d: DistinguishedElements) -> np.ndarray:
    """P[j] = phi(c_omega e_j), the weighted physical operators of each basis element."""
    return np.stack([spec.phi(spec.mul(d.c_omega, spec.e(j))) for j in range(spec.n)])


def assemble(coeffs: np.ndarray, ops: np.ndarray) -> np.ndarray:
    """sum_{j1..jN} coeffs[j1..jN] ops[j1] (x) ... (x) ops[jN] as a dense matrix.

    Legs are contracted one at a time, so the intermediate never holds n^N
    Kronecker products at once.
    """
    N = coeffs.ndim
    dim = ops.shape[1]
    t = coeffs
    for _ in range(N):
        t = np.tensordot(t, ops, axes=([0], [0]))
    # t now has legs (a1, b1, a2, b2, ..., aN, bN)
    t = t.transpose(list(range(0, 2 * N, 2)) + list(range(1, 2 * N, 2)))
    return t.reshape(dim**N, dim**N)


def _check_rho_budget(spec: WhaSpec, N: int, budget: int | None) -> None:
    d = spec.rep_dim
    check_budget(max(spec.n**N, d ** (2 * N)), f"rho_{N} on {d}^{N} sites", budget)


def unnormalized_rho(spec: WhaSpec, d: DistinguishedElements, x, N: int, budget: int | None = None) -> np.ndarray:
    """phi^{(x)N}(c_omega^{(x)N} Delta^(N-1)(x)) without positivity checks or normalization."""
    if N < 1:
        raise ValueError("N must be at least 1")
    _check_rho_budget(spec, N, budget)
    return assemble(delta_power(spec, x, N - 1, budget), site_weights(spec, d))


def check_positive(spec: WhaSpec, x, tol: float = 1e-9) -> None:
    m = spec.phi(x)
    if nc.hermiticity_residual(m) > tol:
        raise NotPositiveElementError("phi(x) is not Hermitian")
    if nc.max_abs(m) <= tol:
        raise NotPositiveElementError("x is zero")
    lo = nc.min_eigenvalue(m)
    if lo < -tol:
        raise NotPositiveElementError(f"phi(x) has a negative eigenvalue {lo:.3e}")


def build_rho(
    spec: WhaSpec,
    d: DistinguishedElements,
    x,
    N: int,
    label: str = "x",
    budget: int | None = None,
) -> MpdoState:
    x = np.asarray(x, dtype=complex)
    check_positive(spec, x)
    wx = d.omega_of(x)
    if abs(wx.imag) > 1e-9 or wx.real <= 1e-12:
        raise NotPositiveElementError(f"omega(x) = {wx} is not positive")
    rho = unnormalized_rho(spec, d, x, N, budget) / wx.real
    return MpdoState(N, label, rho, float(wx.real), spec.rep_dim, spec.name, x)


def cyclic_shift(rho: np.ndarray, site_dim: int, N: int, k: int = 1) -> np.ndarray:
    """Conjugate by the translation moving site i to site i+k (mod N)."""
    t = rho.reshape((site_dim,) * (2 * N))
    perm = [(i - k) % N for i in range(N)]
    t = t.transpose(perm + [N + p for p in perm])
    return t.reshape(rho.shape)


def shift_invariance_residual(state: MpdoState) -> float:
    return nc.max_abs(cyclic_shift(state.rho, state.site_dim, state.N) - state.rho)


def marginal_check(spec: WhaSpec, d: DistinguishedElements, x, N: int) -> dict:
    """Compare tr_last rho_N(x) with rho_{N-1}((id (x) omega) Delta x).

    The normalization s is forced by the traces; by idempotence of omega it
    equals one. For x = Omega the regenerated element is xi^{-1}.
    """
    if N < 2:
        raise ValueError("marginal_check needs N >= 2")
    x = np.asarray(x, dtype=complex)
    wx = d.omega_of(x).real
    rho = unnormalized_rho(spec, d, x, N) / wx
    dim = spec.rep_dim
    red = nc.partial_trace(rho, [dim] * N, keep=list(range(N - 1)))
    y = spec.delta(x) @ d.omega
    wy = d.omega_of(y).real
    s = wy / wx
    target = unnormalized_rho(spec, d, y, N - 1) / wy * s
    out = {
        "residual": nc.trace_norm(red - target),
        "normalization": float(s),
        "idempotence": abs(wy - wx),
    }
    if np.allclose(x, d.Omega, atol=1e-12):
        out["regenerated_is_xi_inv"] = nc.max_abs(y - d.xi_inv)
    return out


@dataclass(frozen=True)
class MpoTensor:
    """Translation-invariant MPO with bond space A.

    ``tensor[l, r]`` is the physical operator on one site; ``boundary(x)``
    is the matrix b(x) closing the loop: sum over bonds of
    b[lN, l0] T[l0, l1] ... T[l(N-1), lN].
    """

    bond_dim: int
    tensor: np.ndarray
    counit: np.ndarray
    weighted: bool

    def boundary(self, x) -> np.ndarray:
        return np.outer(self.counit, np.asarray(x, dtype=complex))

    def close(self, x, N: int) -> np.ndarray:
        T = self.tensor
        dim = T.shape[2]
        # chain[lN, lk, a1, b1, ..., ak, bk] with the boundary folded in from the start;
        # the last site contracts both bonds, so the peak size is n^2 dim^(2N-2)
        chain = self.boundary(x)
        for _ in range(N - 1):
            chain = np.tensordot(chain, T, axes=([1], [0]))
            chain = np.moveaxis(chain, -3, 1)
        t = np.tensordot(chain, T, axes=([0, 1], [1, 0]))
        t = t.transpose(list(range(0, 2 * N, 2)) + list(range(1, 2 * N, 2)))
        return t.reshape(dim**N, dim**N)


def export_mpo_tensor(spec: WhaSpec, d: DistinguishedElements | None = None, weighted: bool = False) -> MpoTensor:
    """T[l, r] = sum_j Delta-structure constant C[l, j, r] times phi(e_j) (or phi(c_omega e_j))."""
    if weighted:
        if d is None:
            raise ValueError("the weighted tensor needs distinguished elements")
        ops = site_weights(spec, d)
    else:
        ops = np.asarray(spec.rep)
    tensor = np.einsum("ljr,jab->lrab", spec.coproduct, ops)
    return MpoTensor(spec.n, tensor, np.asarray(spec.counit), weighted)


def mpo_closure_residual(spec: WhaSpec, d: DistinguishedElements, x, N: int, weighted: bool = False) -> float:
    mpo = export_mpo_tensor(spec, d, weighted)
    ops = site_weights(spec, d) if weighted else np.asarray(spec.rep)
    direct = assemble(delta_power(spec, x, N - 1), ops)
    return nc.max_abs(mpo.close(x, N) - direct)


# binary dump: JSON header line, then little-endian f64 (re, im) pairs, row-major


def write_dump(path, matrix: np.ndarray, header: dict) -> None:
    m = np.ascontiguousarray(matrix, dtype=np.complex128)
    head = dict(header)
    head.setdefault("shape", list(m.shape))
    head["encoding"] = "f64le re/im interleaved, row-major"
    with open(path, "wb") as fh:
        fh.write((json.dumps(head, sort_keys=True) + "\n").encode())
        fh.write(m.astype("<c16").tobytes(order="C"))


def read_dump(path) -> tuple[dict, np.ndarray]:
    with open(path, "rb") as fh:
        head = json.loads(fh.readline())
        data = np.frombuffer(fh.read(), dtype="<c16")
    return head, data.reshape(head["shape"])
