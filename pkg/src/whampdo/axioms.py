"""Axiom residuals for weak Hopf *-algebras and iterated coproducts."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import numeric as nc
from .spec import WhaSpec

DEFAULT_BUDGET = 20_000_000


class BudgetExceeded(MemoryError):
    pass


def budget_entries() -> int:
    """Dense-array budget; the WHA_BUDGET_ENTRIES environment variable overrides it."""
    raw = os.environ.get("WHA_BUDGET_ENTRIES")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            raise ValueError(f"WHA_BUDGET_ENTRIES must be an integer, got {raw!r}") from None
    return DEFAULT_BUDGET


def check_budget(entries: int, what: str, budget: int | None = None) -> None:
    budget = budget_entries() if budget is None else budget
    if entries > budget:
        raise BudgetExceeded(f"{what} needs {entries} entries, budget is {budget}")


def delta_power(spec: WhaSpec, x, k: int, budget: int | None = None) -> np.ndarray:
    """Coefficient tensor of Delta^(k)(x) with k+1 legs, built as (Delta (x) id)^k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    check_budget(spec.n ** (k + 1), f"Delta^({k})", budget)
    t = np.asarray(x, dtype=complex)
    for _ in range(k):
        t = np.tensordot(spec.coproduct, t, axes=([0], [0]))
    return t


def delta_power_right(spec: WhaSpec, x, k: int) -> np.ndarray:
    """Same tensor built by always splitting the last leg; used as a bracketing cross-check."""
    t = np.asarray(x, dtype=complex)
    for _ in range(k):
        t = np.tensordot(t, spec.coproduct, axes=([t.ndim - 1], [0]))
    return t


@dataclass
class AxiomReport:
    residuals: dict
    hopf_residuals: dict
    derived_checks: dict
    is_weak_hopf: bool
    is_hopf: bool
    tol: float = nc.TOL
    notes: list = field(default_factory=list)

    def max_residual(self) -> float:
        vals = list(self.residuals.values()) + list(self.derived_checks.values())
        return max(vals) if vals else 0.0

    def to_dict(self) -> dict:
        return {
            "residuals": self.residuals,
            "hopf_residuals": self.hopf_residuals,
            "derived_checks": self.derived_checks,
            "is_weak_hopf": self.is_weak_hopf,
            "is_hopf": self.is_hopf,
            "tol": self.tol,
        }


def _r(a, b=None) -> float:
    return nc.max_abs(a if b is None else np.asarray(a) - np.asarray(b))


def counit_pairing(spec: WhaSpec) -> np.ndarray:
    """F[x, y] = eps(e_x e_y)."""
    return np.einsum("xyk,k->xy", spec.mult, spec.counit)


def eps_target_matrix(spec: WhaSpec) -> np.ndarray:
    """Row i holds eps_t(e_i) = eps(1_(1) e_i) 1_(2)."""
    D1 = spec.delta(spec.unit)
    return np.einsum("ab,ai->ib", D1, counit_pairing(spec))


def eps_source_matrix(spec: WhaSpec) -> np.ndarray:
    """Row i holds eps_s(e_i) = 1_(1) eps(e_i 1_(2))."""
    D1 = spec.delta(spec.unit)
    return np.einsum("ab,ib->ia", D1, counit_pairing(spec))


def validate_axioms(spec: WhaSpec, tol: float = nc.TOL) -> AxiomReport:
    n = spec.n
    M, C, S, St, u, eps = spec.mult, spec.coproduct, spec.antipode, spec.star, spec.unit, spec.counit
    eye = np.eye(n)
    res: dict = {}

    res["associativity"] = _r(np.einsum("ijm,mkl->ijkl", M, M), np.einsum("jkm,iml->ijkl", M, M))
    res["unit"] = max(_r(np.einsum("i,ijk->jk", u, M), eye), _r(np.einsum("j,ijk->ik", u, M), eye))
    res["coassociativity"] = _r(np.einsum("ijk,jab->iabk", C, C), np.einsum("ijk,kab->ijab", C, C))
    res["counit"] = max(_r(np.einsum("ijk,j->ik", C, eps), eye), _r(np.einsum("ijk,k->ij", C, eps), eye))
    res["multiplicativity"] = _r(
        np.einsum("xyk,kab->xyab", M, C),
        np.einsum("xac,ybd,abp,cdq->xypq", C, C, M, M, optimize=True),
    )
    res["star_involution"] = _r(St @ St.conj(), eye)
    res["star_antimultiplicative"] = _r(
        np.einsum("ijk,pk->ijp", M.conj(), St),
        np.einsum("aj,bi,abp->ijp", St, St, M),
    )
    res["star_comultiplicative"] = _r(
        np.einsum("pi,pab->iab", St, C),
        np.einsum("ijk,aj,bk->iab", C.conj(), St, St),
    )
    D1 = spec.delta(u)
    lhs = np.einsum("ab,acd->cdb", D1, C)
    w1 = np.einsum("ab,cd,bcm->amd", D1, D1, M)
    w2 = np.einsum("ab,cd,cbm->amd", D1, D1, M)
    res["weak_unit"] = max(_r(lhs, w1), _r(lhs, w2))
    F = counit_pairing(spec)
    lhs = np.einsum("xym,mz->xyz", M, F)
    r1 = np.einsum("yab,xa,bz->xyz", C, F, F)
    r2 = np.einsum("yab,xb,az->xyz", C, F, F)
    res["weak_counit"] = max(_r(lhs, r1), _r(lhs, r2))
    # x_(1) S(x_(2)) = eps_t(x) and S(x_(1)) x_(2) = eps_s(x)
    a1 = np.einsum("ijk,pk,jpm->im", C, S, M)
    a2 = np.einsum("ijk,pj,pkm->im", C, S, M)
    res["antipode_target"] = _r(a1, eps_target_matrix(spec))
    res["antipode_source"] = _r(a2, eps_source_matrix(spec))
    D2 = np.einsum("ijk,jab->iabk", C, C)
    a3 = np.einsum("iabc,pa,pbq,rc,qrm->mi", D2, S, M, S, M, optimize=True)
    res["antipode_sandwich"] = _r(a3, S)
    rep = spec.rep
    res["rep_homomorphism"] = _r(
        np.einsum("ijk,kab->ijab", M, rep), np.einsum("iac,jcb->ijab", rep, rep)
    )
    res["rep_star"] = _r(np.einsum("pi,pab->iab", St, rep), rep.conj().transpose(0, 2, 1))
    res["rep_unit"] = _r(spec.phi(u), np.eye(spec.rep_dim))

    derived: dict = {}
    derived["antipode_antimultiplicative"] = _r(
        np.einsum("ijk,pk->ijp", M, S), np.einsum("aj,bi,abp->ijp", S, S, M)
    )
    derived["antipode_anticomultiplicative"] = _r(
        np.einsum("pi,pab->iab", S, C), np.einsum("ijk,ak,bj->iab", C, S, S)
    )
    derived["antipode_unit"] = _r(S @ u, u)
    derived["counit_antipode"] = _r(eps @ S, eps)
    derived["counit_star"] = _r(eps @ St, eps.conj())
    try:
        Sinv = np.linalg.inv(S)
        derived["antipode_star"] = _r(S @ St, St @ Sinv.conj())
    except np.linalg.LinAlgError:
        derived["antipode_star"] = float("inf")

    hopf = {
        "hopf_unit": _r(D1, np.outer(u, u)),
        "hopf_counit": _r(F, np.outer(eps, eps)),
    }
    weak_ok = all(v <= tol for v in res.values()) and all(v <= tol for v in derived.values())
    is_hopf = weak_ok and all(v <= tol for v in hopf.values())
    return AxiomReport(res, hopf, derived, weak_ok, is_hopf, tol)
