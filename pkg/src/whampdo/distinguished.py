"""Canonical elements and maps: Omega, omega, h, hat h, g_L, g_R, g, hat g,
xi, xi_L, xi_R, c_omega, T, plus Radon-Nikodym derivatives."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numeric as nc
from .axioms import eps_source_matrix, validate_axioms
from .spec import WhaSpec
from .structure import DEFAULT_SEED, SectorData, dualize, haar_integral, sectors


class NotBiconnectedError(ValueError):
    pass


class NotHopfError(ValueError):
    pass


@dataclass
class DistinguishedElements:
    spec: WhaSpec
    dual: WhaSpec
    sectors: SectorData
    dual_sectors: SectorData
    Omega: np.ndarray
    omega: np.ndarray
    haar: np.ndarray
    dual_haar: np.ndarray
    gL: np.ndarray
    gR: np.ndarray
    g: np.ndarray
    ghat: np.ndarray
    xi: np.ndarray
    xi_inv: np.ndarray
    xiL: np.ndarray
    xiR: np.ndarray
    c_omega: np.ndarray
    T_matrix: np.ndarray
    t_dual_integral: np.ndarray
    tau: np.ndarray
    dual_characters_in_A: list
    dual_fp_dims: np.ndarray
    multiplicities: list
    checks: dict = field(default_factory=dict)

    @property
    def D2(self) -> float:
        return self.sectors.D2

    @property
    def eps1(self) -> float:
        return float(self.spec.eps(self.spec.unit).real)

    def T(self, x) -> np.ndarray:
        return self.T_matrix @ x

    def omega_of(self, x) -> complex:
        return complex(self.omega @ x)

    def chihat_trivial(self) -> np.ndarray:
        """Character of the trivial sector of the dual, as an element of A."""
        return self.dual_characters_in_A[self.dual_sectors.trivial]

    def summary(self) -> dict:
        def v(x):
            return [[float(z.real), float(z.imag)] for z in np.asarray(x)]

        return {
            "D2": float(self.D2),
            "eps(1)": self.eps1,
            "Omega": v(self.Omega),
            "omega": v(self.omega),
            "haar": v(self.haar),
            "xi": v(self.xi),
            "c_omega": v(self.c_omega),
            "dual_fp_dims": [float(x) for x in self.dual_fp_dims],
            "omega(Omega)": float(self.omega_of(self.Omega).real),
        }


def _sqrt_element(spec: WhaSpec, x) -> np.ndarray:
    return spec.pull(nc.psd_sqrt(nc.hermitian_part(spec.phi(x)), tol=1e-9))


def grouplike_left(spec: WhaSpec, h, hhat) -> np.ndarray:
    """(h_(1) hhat(h_(2)))^(1/2); hhat is a functional on ``spec``."""
    y = spec.delta(h) @ hhat
    return _sqrt_element(spec, y)


def solve_pulling_through(spec: WhaSpec, Omega) -> tuple[np.ndarray, float]:
    """T with T(x) Omega_(1) (x) Omega_(2) = Omega_(1) (x) x Omega_(2)."""
    n = spec.n
    M = spec.mult
    DO = spec.delta(Omega)
    # (y (x) 1) Delta(Omega): [m, k] = sum_{a,j} y_a M[a, j, m] DO[j, k]
    K = np.einsum("ajm,jk->mka", M, DO).reshape(n * n, n)
    # (1 (x) e_i) Delta(Omega): [j, m] = sum_k DO[j, k] M[i, k, m]
    rhs = np.einsum("jk,ikm->jmi", DO, M).reshape(n * n, n)
    T, res = nc.solve_linear(K, rhs)
    if np.linalg.matrix_rank(K, tol=1e-9) < n:
        raise ValueError("Omega is degenerate: pulling-through equation has no unique solution")
    return T, res


def solve_dual_integral(spec: WhaSpec, hhat) -> tuple[np.ndarray, float]:
    """t with hhat(t_(1)) t_(2) = 1 and t x = t eps_s(x)."""
    n = spec.n
    A1 = np.einsum("ijk,j->ki", spec.coproduct, hhat)
    rows = [A1]
    Es = eps_source_matrix(spec)
    for i in range(n):
        rows.append(spec.right_matrix(spec.e(i)) - spec.right_matrix(Es[i]))
    A = np.concatenate(rows, axis=0)
    b = np.concatenate([spec.unit, np.zeros(A.shape[0] - n)])
    return nc.solve_linear(A, b)


def distinguished_elements(spec: WhaSpec, seed: int = DEFAULT_SEED, require_biconnected: bool = True) -> DistinguishedElements:
    sec = sectors(spec, seed)
    dual = dualize(spec)
    dsec = sectors(dual, seed, with_dual=False)
    dsec.coconnected = sec.connected
    if require_biconnected and not (sec.connected and sec.coconnected):
        raise NotBiconnectedError(
            f"spec is not biconnected (connected={sec.connected}, coconnected={sec.coconnected})"
        )
    D2 = sec.D2
    eps1 = float(spec.eps(spec.unit).real)

    omega = sum(d * chi for d, chi in zip(sec.fp_dims, sec.characters)) / D2
    # characters of the dual are functionals on A*, i.e. elements of A
    Omega = sum(d * chi for d, chi in zip(dsec.fp_dims, dsec.characters)) / dsec.D2
    # nu_alpha = tr(phi(e_alpha)) / chi_alpha(1)
    nu = [
        float(np.trace(spec.phi(e)).real) / float((chi @ spec.unit).real)
        for e, chi in zip(sec.central_idempotents, sec.characters)
    ]
    c_omega = sum(d / m * e for d, m, e in zip(sec.fp_dims, nu, sec.central_idempotents)) / D2

    h = haar_integral(spec)
    hhat = haar_integral(dual)
    gL = grouplike_left(spec, h, hhat)
    gR = spec.S(gL)
    g = spec.mul(gL, spec.inverse(gR))
    # the same construction on the dual, with h playing the role of the dual Haar integral
    ghatL = grouplike_left(dual, hhat, h)
    ghatR = dual.S(ghatL)
    ghat = dual.mul(ghatL, dual.inverse(ghatR))

    xi_inv = spec.delta(Omega).T @ omega
    xi = spec.inverse(xi_inv)
    xiL = D2 * eps1 * gL
    xiR = D2 * eps1 * gR

    T, t_res = solve_pulling_through(spec, Omega)
    t, dual_int_res = solve_dual_integral(spec, hhat)
    tau = sum(complex(chi @ g) * chi for chi in sec.characters)

    return DistinguishedElements(
        spec=spec,
        dual=dual,
        sectors=sec,
        dual_sectors=dsec,
        Omega=Omega,
        omega=omega,
        haar=h,
        dual_haar=hhat,
        gL=gL,
        gR=gR,
        g=g,
        ghat=ghat,
        xi=xi,
        xi_inv=xi_inv,
        xiL=xiL,
        xiR=xiR,
        c_omega=c_omega,
        T_matrix=T,
        t_dual_integral=t,
        tau=tau,
        dual_characters_in_A=list(dsec.characters),
        dual_fp_dims=dsec.fp_dims,
        multiplicities=nu,
        checks={"pulling_through_solve": t_res, "dual_integral_solve": dual_int_res},
    )


def radon_nikodym(spec: WhaSpec, x, against) -> tuple[np.ndarray, np.ndarray]:
    """Functionals mu, mu' with mu(a_(1)) a_(2) = x = a_(1) mu'(a_(2))."""
    Da = spec.delta(against)
    # mu(a_(1)) a_(2) = Da.T @ mu ; a_(1) mu'(a_(2)) = Da @ mu'
    if np.linalg.matrix_rank(Da, tol=1e-9) < spec.n:
        raise ValueError("element is degenerate: Radon-Nikodym system is rank deficient")
    mu, _ = nc.solve_linear(Da.T, x, tol=1e-9)
    mup, _ = nc.solve_linear(Da, x, tol=1e-9)
    return mu, mup


def hopf_specialization_report(spec: WhaSpec, d: DistinguishedElements, tol: float = nc.TOL) -> dict:
    if not validate_axioms(spec, tol).is_hopf:
        raise NotHopfError("spec is not a Hopf algebra (Delta(1) != 1 (x) 1 or eps not multiplicative)")
    u = spec.unit
    D2 = d.D2
    r = nc.max_abs
    return {
        "S^2=id": r(spec.antipode @ spec.antipode - np.eye(spec.n)),
        "g=1": r(d.g - u),
        "Omega=h": r(d.Omega - d.haar),
        "T=S": r(d.T_matrix - spec.antipode),
        "t=D2*Omega": r(d.t_dual_integral - D2 * d.Omega),
        "xi=D2*1": r(d.xi - D2 * u),
        "gL=1/D": r(d.gL - u / np.sqrt(D2)),
        "gR=1/D": r(d.gR - u / np.sqrt(D2)),
    }
