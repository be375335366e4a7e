"""Residual checks for the identities satisfied by the distinguished elements.

Every function returns a dict mapping an identity name to a max-abs residual.
"""
from __future__ import annotations

import numpy as np

from . import numeric as nc
from .axioms import delta_power, validate_axioms
from .distinguished import DistinguishedElements, hopf_specialization_report, radon_nikodym
from .structure import DEFAULT_SEED, counital_subalgebras

r = nc.max_abs


def _random_elements(n: int, k: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(k)]


def _in_span(basis: np.ndarray, x) -> float:
    q, _ = np.linalg.qr(basis)
    return r(q @ (q.conj().T @ x) - x)


def core_identities(d: DistinguishedElements, samples: int = 20, seed: int = DEFAULT_SEED) -> dict:
    s = d.spec
    n, u, M = s.n, s.unit, s.mult
    T = d.T_matrix
    O, w = d.Omega, d.omega
    DO = s.delta(O)
    xs = _random_elements(n, samples, seed)
    out: dict = {}

    out["Omega idempotent"] = r(s.mul(O, O) - O)
    out["Omega cocentral"] = r(DO - DO.T)
    out["Omega selfadjoint"] = r(s.adj(O) - O)
    out["Omega positive"] = max(0.0, -nc.min_eigenvalue(s.phi(O)))
    out["omega idempotent"] = r(s.fmul(w, w) - w)
    out["omega trace-like"] = r(np.einsum("ijk,k->ij", M, w) - np.einsum("jik,k->ij", M, w))
    out["omega positive"] = max(0.0, -nc.min_eigenvalue(s.phi(d.c_omega)))
    out["c_omega represents omega"] = r(
        np.einsum("ab,iba->i", s.phi(d.c_omega), s.rep) - w
    )
    out["xi xi^-1 = 1"] = r(s.mul(d.xi, d.xi_inv) - u)

    pt = pt2 = 0.0
    for x in xs:
        # (T(x) (x) 1) Delta(Omega) = (1 (x) x) Delta(Omega)
        lhs = np.einsum("jk,jm->mk", DO, s.left_matrix(T @ x).T)
        rhs = np.einsum("jk,km->jm", DO, s.left_matrix(x).T)
        pt = max(pt, r(lhs - rhs))
        # T(Omega_(1)) x (x) Omega_(2) = T(Omega_(1)) (x) x Omega_(2)
        TO = np.einsum("pj,jk->pk", T, DO)
        lhs2 = np.einsum("pk,pm->mk", TO, s.right_matrix(x).T)
        rhs2 = np.einsum("pk,km->pm", TO, s.left_matrix(x).T)
        pt2 = max(pt2, r(lhs2 - rhs2))
    out["pulling-through"] = pt
    out["pulling-through (T on the left)"] = pt2
    out["T involutive"] = r(T @ T - np.eye(n))
    out["T antimultiplicative"] = r(
        np.einsum("ijk,pk->ijp", M, T) - np.einsum("aj,bi,abp->ijp", T, T, M)
    )
    out["T closed form S(x1) ghat(x2)"] = r(T - np.einsum("ijk,pj,k->pi", s.coproduct, s.antipode, d.ghat))
    out["T closed form ghat(x1) S^-1(x2)"] = r(
        T - np.einsum("ijk,j,pk->pi", s.coproduct, d.ghat, s.antipode_inv)
    )
    out["omega o S = omega"] = r(w @ s.antipode - w)
    out["omega o T = omega"] = r(w @ T - w)

    val = np.einsum("jk,j->k", DO, np.array([w @ s.mul(d.xi, T @ s.e(j)) for j in range(n)]))
    out["omega(xi T(Omega1)) Omega2 = 1"] = r(val - u)
    out["xi^-1 = omega(T(Omega1)) Omega2"] = r(DO.T @ (T.T @ w) - d.xi_inv)
    out["T(xi) = xi"] = r(T @ d.xi - d.xi)
    out["T(x*) = xi^-1 T(x)* xi"] = max(
        r(T @ s.adj(x) - s.mul_all(d.xi_inv, s.adj(T @ x), d.xi)) for x in xs
    )
    out["xi = xiL xiR"] = r(d.xi - s.mul(d.xiL, d.xiR))

    D1 = s.delta(u)
    out["ghat(1_1) 1_2 = 1"] = r(D1.T @ d.ghat - u)
    out["1_1 ghat(1_2) = 1"] = r(D1 @ d.ghat - u)
    gLi, gRi = s.inverse(d.gL), s.inverse(d.gR)
    out["ghat(x1) x2 = gL x gL^-1"] = max(r(s.delta(x).T @ d.ghat - s.mul_all(d.gL, x, gLi)) for x in xs)
    out["x1 ghat(x2) = gR x gR^-1"] = max(r(s.delta(x) @ d.ghat - s.mul_all(d.gR, x, gRi)) for x in xs)

    gi = s.inverse(d.g)
    S2 = s.antipode @ s.antipode
    out["S^2(x) = g x g^-1"] = max(r(S2 @ x - s.mul_all(d.g, x, gi)) for x in xs)
    out["g group-like"] = max(
        r(s.delta(d.g) - s.mul2(np.outer(d.g, d.g), D1)),
        r(s.delta(d.g) - s.mul2(D1, np.outer(d.g, d.g))),
    )
    out["chi(g^-1) = chi(g)"] = max(abs(chi @ gi - chi @ d.g) for chi in d.sectors.characters)
    out["chi(g) = eps(1) d"] = max(
        abs(chi @ d.g - d.eps1 * dim) for chi, dim in zip(d.sectors.characters, d.sectors.fp_dims)
    )

    t = d.t_dual_integral
    Dt = s.delta(t)
    out["hhat(t1) t2 = 1"] = r(Dt.T @ d.dual_haar - u)
    out["t1 (x) t2 = S^-2(t2) (x) t1"] = r(Dt - np.linalg.inv(S2) @ Dt.T)
    c = 1.0 / (d.D2 * d.eps1)
    out["Omega = ghat(t1) t2 / (D2 eps(1))"] = r(O - c * (Dt.T @ d.ghat))
    om2 = np.array([d.dual_haar @ s.mul_all(gLi, gRi, s.e(i)) for i in range(n)]) * c
    out["omega(x) = hhat(gL^-1 gR^-1 x) / (D2 eps(1))"] = r(w - om2)
    out["balance sum d^2 = sum dhat^2"] = abs(d.D2 - d.dual_sectors.D2)
    out["xi = D2^2 eps(1)^2 gL gR"] = r(d.xi - d.D2**2 * d.eps1**2 * s.mul(d.gL, d.gR))
    return out


def counital_identities(d: DistinguishedElements, samples: int = 5, seed: int = DEFAULT_SEED) -> dict:
    """Identities involving the counital subalgebras and Delta^(2)(1)."""
    s = d.spec
    u = s.unit
    S, Si = s.antipode, s.antipode_inv
    T = d.T_matrix
    AL, AR = counital_subalgebras(s)
    rng = np.random.default_rng(seed)
    D3 = delta_power(s, u, 2)
    out = {
        "xiL in A^L": _in_span(AL, d.xiL),
        "xiR in A^R": _in_span(AR, d.xiR),
        "A^L A^R commute": max(
            r(s.mul(AL[:, i], AR[:, j]) - s.mul(AR[:, j], AL[:, i]))
            for i in range(AL.shape[1])
            for j in range(AR.shape[1])
        ),
    }
    pv = cp1 = cp2 = tl = tr_ = 0.0
    for _ in range(samples):
        xL = AL @ (rng.standard_normal(AL.shape[1]) + 1j * rng.standard_normal(AL.shape[1]))
        yR = AR @ (rng.standard_normal(AR.shape[1]) + 1j * rng.standard_normal(AR.shape[1]))
        lhs = np.einsum("abc,pa,qc->pbq", D3, s.left_matrix(xL) @ S, s.right_matrix(yR) @ S)
        mid = s.left_matrix(yR) @ s.right_matrix(xL)
        rhs = np.einsum("abc,pa,qb,rc->pqr", D3, S, mid, S)
        pv = max(pv, r(lhs - rhs))
        cp1 = max(cp1, r(s.mul(d.xiR, S @ s.adj(xL)) - s.mul(s.adj(S @ xL), d.xiR)))
        cp2 = max(cp2, r(s.mul(S @ yR, d.xiL) - s.mul(d.xiL, s.adj(S @ s.adj(yR)))))
        tl = max(tl, r(T @ xL - S @ xL))
        tr_ = max(tr_, r(T @ yR - Si @ yR), r(T @ yR - s.adj(S @ s.adj(yR))))
    out["vacuum pulling-through"] = pv
    out["xiR S(xL*) = S(xL)* xiR"] = cp1
    out["S(yR) xiL = xiL S(yR*)*"] = cp2
    out["T = S on A^L"] = tl
    out["T = S^-1 on A^R"] = tr_
    c = 1.0 / (d.D2 * d.eps1)
    out["hhat(Omega1) Omega2 = 1/(D2 eps(1))"] = r(s.delta(d.Omega).T @ d.dual_haar - c * u)
    out["1_1 hhat(1_2) (x) 1_3 = 1(x)1/eps(1)"] = r(
        np.einsum("abc,b->ac", D3, d.dual_haar) - np.outer(u, u) / d.eps1
    )
    xiRi, xiLi = s.inverse(d.xiR), s.inverse(d.xiL)
    out["1_1 (x) omega(1_2) 1_3 = D2 xiR^-1 (x) xiL^-1"] = r(
        np.einsum("abc,b->ac", D3, d.omega) - d.D2 * np.outer(xiRi, xiLi)
    )
    out["omega(1_1) 1_2 omega(1_3) = D2 omega(1) xi^-1"] = r(
        np.einsum("abc,a,c->b", D3, d.omega, d.omega) - d.D2 * d.omega_of(u) * d.xi_inv
    )
    D3xi = delta_power(s, d.xi_inv, 2)
    out["Delta^2(xi^-1) = xiL^-1 1_1 (x) 1_2 (x) xiR^-1 1_3"] = r(
        D3xi - np.einsum("abc,pa,qc->pbq", D3, s.left_matrix(xiLi), s.left_matrix(xiRi))
    )
    return out


def hopf_identities(d: DistinguishedElements, samples: int = 10, seed: int = DEFAULT_SEED) -> dict:
    s = d.spec
    out = dict(hopf_specialization_report(s, d))
    mid = rn = 0.0
    for i in range(s.n):
        x = s.e(i)
        D3 = delta_power(s, x, 2)
        mid = max(mid, r(np.einsum("abc,b->ac", D3, d.omega) - d.omega_of(x) * np.outer(s.unit, s.unit)))
    for x in _random_elements(s.n, samples, seed):
        _, mu = radon_nikodym(s, x, d.Omega)
        rn = max(rn, abs(d.D2 * d.omega_of(x) - mu @ s.unit))
    out["x1 (x) omega(x2) x3 = omega(x) 1(x)1"] = mid
    out["mu_x(1) = D2 omega(x)"] = rn
    return out


def identity_suite(d: DistinguishedElements, seed: int = DEFAULT_SEED) -> dict:
    """All applicable identities; Hopf-only ones are added when Delta(1) = 1 (x) 1."""
    out = {}
    out.update(core_identities(d, seed=seed))
    out.update(counital_identities(d, seed=seed))
    if validate_axioms(d.spec).is_hopf:
        out.update(hopf_identities(d, seed=seed))
    return out
