"""Structure-constant model of a weak Hopf *-algebra together with a faithful
*-representation, plus canonical JSON serialization.

Conventions (all indices 0-based):

* ``mult[i, j, k]``: e_i e_j = sum_k mult[i, j, k] e_k
* ``star[:, i]``: coefficients of e_i^*, so x^* = star @ conj(x)
* ``coproduct[i, j, k]``: Delta(e_i) = sum_{j,k} coproduct[i, j, k] e_j (x) e_k
* ``counit[i]`` = eps(e_i)
* ``antipode[:, i]``: coefficients of S(e_i), so S(x) = antipode @ x
* ``rep[i]`` = phi(e_i), a ``rep_dim`` x ``rep_dim`` matrix

Two-leg tensors (elements of A (x) A) are n x n coefficient arrays.  Functionals
are coefficient vectors over the dual basis, so f(x) = f @ x.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import numeric as nc

SPEC_VERSION = 1
_ZERO = 1e-15


class SpecError(ValueError):
    """Malformed or inconsistent spec data."""


def _clean(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    re, im = a.real.copy(), a.imag.copy()
    re[np.abs(re) < _ZERO] = 0.0
    im[np.abs(im) < _ZERO] = 0.0
    out = re + 1j * im
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class WhaSpec:
    basis: tuple
    mult: np.ndarray
    unit: np.ndarray
    star: np.ndarray
    coproduct: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    rep: np.ndarray
    name: str = field(default="")

    def __post_init__(self):
        for f in ("mult", "unit", "star", "coproduct", "counit", "antipode", "rep"):
            object.__setattr__(self, f, _clean(getattr(self, f)))
        object.__setattr__(self, "basis", tuple(str(b) for b in self.basis))
        n = len(self.basis)
        shapes = {
            "mult": (n, n, n),
            "unit": (n,),
            "star": (n, n),
            "coproduct": (n, n, n),
            "counit": (n,),
            "antipode": (n, n),
        }
        for f, shp in shapes.items():
            if getattr(self, f).shape != shp:
                raise SpecError(f"{f} has shape {getattr(self, f).shape}, expected {shp}")
        r = self.rep
        if r.ndim != 3 or r.shape[0] != n or r.shape[1] != r.shape[2]:
            raise SpecError(f"rep has shape {r.shape}, expected ({n}, d, d)")
        for f in shapes:
            if not np.all(np.isfinite(getattr(self, f))):
                raise SpecError(f"{f} has non-finite entries")

    # -- sizes -----------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def rep_dim(self) -> int:
        return self.rep.shape[1]

    def e(self, i: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=complex)
        v[i] = 1.0
        return v

    def index(self, label: str) -> int:
        return self.basis.index(label)

    # -- algebra ---------------------------------------------------------
    def mul(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult)

    def mul_all(self, *xs) -> np.ndarray:
        out = xs[0]
        for y in xs[1:]:
            out = self.mul(out, y)
        return out

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of y -> x y on coefficient vectors."""
        return np.einsum("i,ijk->kj", x, self.mult)

    def right_matrix(self, x) -> np.ndarray:
        """Matrix of y -> y x on coefficient vectors."""
        return np.einsum("j,ijk->ki", x, self.mult)

    def adj(self, x) -> np.ndarray:
        return self.star @ np.conj(x)

    def delta(self, x) -> np.ndarray:
        return np.einsum("i,ijk->jk", x, self.coproduct)

    def eps(self, x) -> complex:
        return complex(self.counit @ x)

    def S(self, x) -> np.ndarray:
        return self.antipode @ x

    @cached_property
    def antipode_inv(self) -> np.ndarray:
        return np.linalg.inv(self.antipode)

    def S_inv(self, x) -> np.ndarray:
        return self.antipode_inv @ x

    def phi(self, x) -> np.ndarray:
        return np.einsum("i,iab->ab", x, self.rep)

    def pull(self, m, tol: float = 1e-9) -> np.ndarray:
        """Inverse of phi on its image."""
        return nc.pullback(self.rep, m, tol=tol)

    def inverse(self, x) -> np.ndarray:
        m = self.phi(x)
        return self.pull(np.linalg.inv(m))

    # -- two-leg tensors ------------------------------------------------
    def mul2(self, a, b) -> np.ndarray:
        """Product in A (x) A of coefficient arrays."""
        return np.einsum("ab,cd,ack,bdl->kl", a, b, self.mult, self.mult, optimize=True)

    def one_two(self) -> np.ndarray:
        return np.outer(self.unit, self.unit)

    # -- dual algebra operations on functionals --------------------------
    def fmul(self, f, g) -> np.ndarray:
        """(f g)(x) = f(x_(1)) g(x_(2))."""
        return np.einsum("ijk,j,k->i", self.coproduct, f, g)

    def fadj(self, f) -> np.ndarray:
        """f^*(x) = conj(f(S(x)^*))."""
        return np.conj(f @ self.star) @ self.antipode

    # -- identification ---------------------------------------------------
    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(canonical_json(self).encode()).hexdigest()


# ---------------------------------------------------------------------------
# serialization


def _c(z) -> list:
    z = complex(z)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def spec_to_dict(spec: WhaSpec) -> dict:
    n = spec.n

    def tri(t):
        out = []
        for idx in zip(*np.nonzero(t)):
            out.append([int(i) for i in idx] + _c(t[idx]))
        return out

    return {
        "version": SPEC_VERSION,
        "name": spec.name,
        "n": n,
        "basis": list(spec.basis),
        "mult": tri(spec.mult),
        "unit": [_c(v) for v in spec.unit],
        "star": tri(spec.star),
        "coproduct": tri(spec.coproduct),
        "counit": [_c(v) for v in spec.counit],
        "antipode": tri(spec.antipode),
        "rep": {
            "dim": spec.rep_dim,
            "matrices": [[[_c(v) for v in row] for row in m] for m in spec.rep],
        },
    }


def canonical_json(spec: WhaSpec) -> str:
    return json.dumps(spec_to_dict(spec), separators=(",", ":")) + "\n"


def _cplx(pair, what) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SpecError(f"{what}: expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def spec_from_dict(d: dict) -> WhaSpec:
    try:
        if d.get("version") != SPEC_VERSION:
            raise SpecError(f"unsupported spec version {d.get('version')!r}")
        n = int(d["n"])
        basis = list(d.get("basis") or [f"e{i}" for i in range(n)])
        if len(basis) != n:
            raise SpecError("basis length does not match n")

        def tri(entries, rank, what):
            t = np.zeros((n,) * rank, dtype=complex)
            for ent in entries:
                if len(ent) != rank + 2:
                    raise SpecError(f"{what}: bad entry {ent!r}")
                idx = tuple(int(i) for i in ent[:rank])
                if any(i < 0 or i >= n for i in idx):
                    raise SpecError(f"{what}: index out of range in {ent!r}")
                t[idx] += complex(float(ent[rank]), float(ent[rank + 1]))
            return t

        def dense(v, what):
            if len(v) != n:
                raise SpecError(f"{what}: expected {n} entries")
            return np.array([_cplx(p, what) for p in v])

        rep = d["rep"]
        dim = int(rep["dim"])
        mats = np.array(
            [[[_cplx(p, "rep") for p in row] for row in m] for m in rep["matrices"]],
            dtype=complex,
        )
        if mats.shape != (n, dim, dim):
            raise SpecError(f"rep matrices have shape {mats.shape}, expected {(n, dim, dim)}")
        spec = WhaSpec(
            basis=basis,
            mult=tri(d["mult"], 3, "mult"),
            unit=dense(d["unit"], "unit"),
            star=tri(d["star"], 2, "star"),
            coproduct=tri(d["coproduct"], 3, "coproduct"),
            counit=dense(d["counit"], "counit"),
            antipode=tri(d["antipode"], 2, "antipode"),
            rep=mats,
            name=str(d.get("name", "")),
        )
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed spec: {exc}") from exc
    check_well_formed(spec)
    return spec


def check_well_formed(spec: WhaSpec, tol: float = nc.TOL) -> None:
    """Faithfulness and *-compatibility of the representation, unit law."""
    n = spec.n
    stacked = spec.rep.reshape(n, -1)
    if np.linalg.matrix_rank(stacked, tol=1e-9) != n:
        raise SpecError("representation is not faithful")
    for i in range(n):
        lhs = spec.phi(spec.adj(spec.e(i)))
        if nc.max_abs(lhs - spec.rep[i].conj().T) > tol:
            raise SpecError(f"representation is not a *-representation at basis element {i}")
    u = spec.unit
    lu = np.einsum("i,ijk->jk", u, spec.mult)
    ru = np.einsum("j,ijk->ik", u, spec.mult)
    eye = np.eye(n)
    if max(nc.max_abs(lu - eye), nc.max_abs(ru - eye)) > 1e-12 * max(1.0, nc.max_abs(spec.mult)):
        raise SpecError("unit is not a two-sided identity")


def load_spec(path) -> WhaSpec:
    text = Path(path).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(d, dict):
        raise SpecError(f"{path}: top-level JSON value must be an object")
    return spec_from_dict(d)


def save_spec(spec: WhaSpec, path) -> None:
    Path(path).write_text(canonical_json(spec))
