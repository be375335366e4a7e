"""Duals, counital subalgebras, centers, sectors and Haar integrals."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from . import numeric as nc
from .axioms import eps_source_matrix, eps_target_matrix
from .spec import SpecError, WhaSpec

DEFAULT_SEED = 7


class SectorError(ValueError):
    pass


class HaarError(ValueError):
    pass


# ---------------------------------------------------------------------------
# dual algebra


def regular_trace(spec: WhaSpec) -> np.ndarray:
    """Functional x -> Tr(L_x) of the left regular representation."""
    return np.einsum("ijj->i", np.transpose(spec.mult, (0, 2, 1)))


def gns_representation(spec_like: WhaSpec, state: np.ndarray) -> np.ndarray:
    """Left regular representation made unitary for <a, b> = state(a^* b)."""
    n = spec_like.n
    adj_basis = np.array([spec_like.adj(spec_like.e(a)) for a in range(n)])
    # G[a, b] = state(e_a^* e_b)
    G = np.einsum("ai,bj,ijk,k->ab", adj_basis, np.eye(n), spec_like.mult, state)
    G = nc.hermitian_part(G)
    w = np.linalg.eigvalsh(G)
    if w.min() <= 1e-12 * max(1.0, w.max()):
        raise SpecError(f"GNS inner product is not positive definite (min eigenvalue {w.min():.3e})")
    R = np.linalg.cholesky(G).conj().T  # G = R^dagger R
    Rinv = np.linalg.inv(R)
    L = np.transpose(spec_like.mult, (0, 2, 1))
    return np.einsum("ab,ibc,cd->iad", R, L, Rinv)


def dualize(spec: WhaSpec) -> WhaSpec:
    """The dual weak Hopf algebra on the dual basis."""
    C, M, S = spec.coproduct, spec.mult, spec.antipode
    mult = np.transpose(C, (1, 2, 0))
    cop = np.transpose(M, (2, 0, 1))
    star = (spec.star.conj() @ S).T
    basis = [f"{b}^" for b in spec.basis]
    bare = WhaSpec(
        basis,
        mult,
        spec.counit,
        star,
        cop,
        spec.unit,
        S.T,
        _placeholder_rep(spec.n),
        name=f"dual({spec.name})",
    )
    rep = gns_representation(bare, regular_trace(bare))
    return WhaSpec(basis, mult, spec.counit, star, cop, spec.unit, S.T, rep, name=bare.name)


def _placeholder_rep(n: int) -> np.ndarray:
    # a faithful (not necessarily *) linear embedding, only used before the GNS step
    rep = np.zeros((n, n, n))
    for i in range(n):
        rep[i, i, i] = 1
    return rep


# ---------------------------------------------------------------------------
# subalgebras and center


def _stack_nullspace(blocks, n, tol=nc.TOL) -> np.ndarray:
    a = np.concatenate([b.reshape(-1, n) for b in blocks], axis=0)
    return nc.null_space(a, tol)


def counital_subalgebras(spec: WhaSpec) -> tuple[np.ndarray, np.ndarray]:
    """Bases (as columns) of A^L and A^R."""
    n = spec.n
    D1 = spec.delta(spec.unit)
    C = spec.coproduct
    M = spec.mult
    # x -> Delta(x) - x 1_(1) (x) 1_(2), Delta(x) - 1_(1) x (x) 1_(2)
    L1 = np.transpose(C, (1, 2, 0)) - np.einsum("xam,ab->mbx", M, D1)
    L2 = np.transpose(C, (1, 2, 0)) - np.einsum("axm,ab->mbx", M, D1)
    # y -> Delta(y) - 1_(1) (x) y 1_(2), Delta(y) - 1_(1) (x) 1_(2) y
    R1 = np.transpose(C, (1, 2, 0)) - np.einsum("ab,ybm->amy", D1, M)
    R2 = np.transpose(C, (1, 2, 0)) - np.einsum("ab,bym->amy", D1, M)
    return _stack_nullspace([L1, L2], n), _stack_nullspace([R1, R2], n)


def center_constraints(spec: WhaSpec) -> np.ndarray:
    M = spec.mult
    # x e_i - e_i x for every i, as a map on x
    return np.einsum("jik->ikj", M) - np.einsum("ijk->ikj", M)


def center(spec: WhaSpec) -> np.ndarray:
    return _stack_nullspace([center_constraints(spec)], spec.n)


def left_center_dim(spec: WhaSpec) -> int:
    """dim(A^L cap Z(A))."""
    AL, _ = counital_subalgebras(spec)
    Z = center(spec)
    if AL.shape[1] == 0 or Z.shape[1] == 0:
        return 0
    # intersection of two column spaces
    k = nc.null_space(np.concatenate([AL, -Z], axis=1))
    return k.shape[1]


def is_connected(spec: WhaSpec) -> bool:
    return left_center_dim(spec) == 1


# ---------------------------------------------------------------------------
# sectors


@dataclass
class SectorData:
    r: int
    central_idempotents: list
    characters: list
    irrep_dims: list
    multiplicities: list
    fusion: np.ndarray
    fp_dims: np.ndarray
    D2: float
    trivial: int | None
    connected: bool
    coconnected: bool | None
    fusion_max_rounding: float

    @property
    def biconnected(self) -> bool:
        return bool(self.connected and self.coconnected)

    def summary(self) -> dict:
        return {
            "r": self.r,
            "irrep_dims": list(self.irrep_dims),
            "multiplicities": list(self.multiplicities),
            "fp_dims": [float(v) for v in self.fp_dims],
            "D2": float(self.D2),
            "trivial_sector": self.trivial,
            "fusion": self.fusion.tolist(),
            "connected": self.connected,
            "coconnected": self.coconnected,
            "biconnected": self.biconnected,
        }


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    order = np.argsort(values)
    groups: list[list[int]] = [[int(order[0])]]
    for a, b in zip(order[:-1], order[1:]):
        if values[b] - values[a] > tol:
            groups.append([int(b)])
        else:
            groups[-1].append(int(b))
    return groups


def central_idempotents(spec: WhaSpec, seed: int = DEFAULT_SEED, tol: float = nc.CLUSTER_TOL) -> list:
    Z = center(spec)
    r = Z.shape[1]
    rng = np.random.default_rng(seed)
    for _attempt in range(5):
        c = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        z = Z @ c
        zh = z + spec.adj(z)
        m = nc.hermitian_part(spec.phi(zh))
        w, v = np.linalg.eigh(m)
        groups = _cluster(w, tol * max(1.0, np.abs(w).max()))
        if len(groups) != r:
            continue
        gaps = np.diff(np.sort([w[g].mean() for g in groups]))
        if gaps.size and gaps.min() < 1e3 * tol:
            continue
        out = []
        for g in groups:
            P = v[:, g] @ v[:, g].conj().T
            out.append(spec.pull(P))
        return out
    raise SectorError(f"could not separate {r} sectors by eigenvalue clustering at tol {tol}")


def _power_iteration(m: np.ndarray, iters: int = 20000, tol: float = 1e-15) -> np.ndarray:
    v = np.ones(m.shape[0])
    for _ in range(iters):
        w = m @ v
        w /= np.linalg.norm(w)
        if np.abs(w - v).max() < tol:
            return w
        v = w
    return v


def sectors(spec: WhaSpec, seed: int = DEFAULT_SEED, with_dual: bool = True) -> SectorData:
    n = spec.n
    idem = central_idempotents(spec, seed)
    r = len(idem)
    dims, chars, mults, supports = [], [], [], []
    for e in idem:
        L = spec.left_matrix(e)
        k2 = float(np.trace(L).real)
        k = int(round(np.sqrt(k2)))
        if abs(k * k - k2) > 1e-6:
            raise SectorError(f"block dimension {k2} is not a square")
        # chi(e_i) = Tr(L(e_i e)) / k
        chi = np.array([np.trace(spec.left_matrix(spec.mul(spec.e(i), e))) for i in range(n)]) / k
        mu = float(np.trace(spec.phi(e)).real) / k
        dims.append(k)
        chars.append(chi)
        mults.append(int(round(mu)))
        supports.append(tuple(int(i) for i in np.nonzero(np.abs(e) > 1e-9)[0]))
    order = sorted(range(r), key=lambda a: (dims[a], supports[a]))
    idem = [idem[a] for a in order]
    chars = [chars[a] for a in order]
    dims = [dims[a] for a in order]
    mults = [mults[a] for a in order]

    X = np.array(chars).T  # n x r
    fusion = np.zeros((r, r, r))
    worst = 0.0
    for a in range(r):
        for b in range(r):
            prod = spec.fmul(chars[a], chars[b])
            coef, res = nc.solve_linear(X, prod)
            if res > 1e-6:
                raise SectorError(f"character product chi_{a} chi_{b} is not in the character span")
            rounded = np.round(coef.real)
            err = float(np.abs(coef - rounded).max())
            worst = max(worst, err)
            if err > 1e-4:
                raise SectorError(f"fusion coefficient off integer by {err:.2e}")
            if rounded.min() < 0:
                raise SectorError("negative fusion coefficient")
            fusion[a, b] = rounded
    fusion = fusion.astype(int)

    trivial = None
    for a in range(r):
        if np.array_equal(fusion[a], np.eye(r, dtype=int)):
            trivial = a
            break
    total = fusion.sum(axis=0) + np.eye(r, dtype=int)
    v = _power_iteration(total.astype(float))
    if trivial is not None:
        v = v / v[trivial]
    fp = np.array([float(v @ fusion[a] @ v / (v @ v)) for a in range(r)])
    D2 = float((fp**2).sum())
    connected = is_connected(spec)
    coconnected = None
    if with_dual:
        coconnected = is_connected(dualize(spec))
    return SectorData(
        r=r,
        central_idempotents=idem,
        characters=chars,
        irrep_dims=dims,
        multiplicities=mults,
        fusion=fusion,
        fp_dims=fp,
        D2=D2,
        trivial=trivial,
        connected=connected,
        coconnected=coconnected,
        fusion_max_rounding=worst,
    )


# ---------------------------------------------------------------------------
# Haar integral


def integral_constraints(spec: WhaSpec) -> np.ndarray:
    """Rows of the linear system for two-sided integrals."""
    n = spec.n
    Et = eps_target_matrix(spec)
    Es = eps_source_matrix(spec)
    blocks = []
    for i in range(n):
        e = spec.e(i)
        blocks.append(spec.left_matrix(e) - spec.left_matrix(Et[i]))
        blocks.append(spec.right_matrix(e) - spec.right_matrix(Es[i]))
    return np.concatenate(blocks, axis=0)


def integral_space(spec: WhaSpec) -> np.ndarray:
    return nc.null_space(integral_constraints(spec))


def haar_integral(spec: WhaSpec, tol: float = nc.TOL) -> np.ndarray:
    """Normalized positive idempotent two-sided integral."""
    I = integral_space(spec)
    k = I.shape[1]
    if k == 0:
        raise HaarError("integral space is zero-dimensional")
    Et = eps_target_matrix(spec)
    # eps_t(h) = 1
    A = (I.T @ Et).T
    c, res = nc.solve_linear(A, spec.unit)
    if res < 1e-9 and np.linalg.matrix_rank(A, tol=1e-9) == k:
        h = I @ c
    else:
        h = _haar_newton(spec, I)
    h = 0.5 * (h + spec.adj(h))
    if nc.max_abs(spec.mul(h, h) - h) > 1e-9 or not nc.is_psd(spec.phi(h), 1e-9):
        raise HaarError(f"no positive idempotent in the {k}-dimensional integral space")
    return h


def _haar_newton(spec: WhaSpec, I: np.ndarray) -> np.ndarray:
    k = I.shape[1]
    if k > 3:
        raise HaarError(f"integral space has dimension {k} > 3")
    c0, _ = nc.solve_linear(I, spec.unit)

    def f(p):
        c = p[:k] + 1j * p[k:]
        h = I @ c
        return np.concatenate(
            [(spec.mul(h, h) - h).view(float), (h - spec.adj(h)).view(float), [0.0]]
        )

    sol = scipy.optimize.least_squares(f, np.concatenate([c0.real, c0.imag]), xtol=1e-15, ftol=1e-15)
    c = sol.x[:k] + 1j * sol.x[k:]
    return I @ c
