"""Builders for the example algebras: group algebras, function algebras,
the Kac-Paljutkin algebra H8 and the 13-dimensional Lee-Yang weak Hopf algebra.
"""
from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from .spec import SpecError, WhaSpec


def _check_group(table: np.ndarray) -> tuple[int, list[int]]:
    t = np.asarray(table, dtype=int)
    m = t.shape[0]
    if t.shape != (m, m) or t.min() < 0 or t.max() >= m:
        raise SpecError("group table must be a square array of element indices")
    for a, b, c in itertools.product(range(m), repeat=3):
        if t[t[a, b], c] != t[a, t[b, c]]:
            raise SpecError("group table is not associative")
    ids = [e for e in range(m) if all(t[e, g] == g and t[g, e] == g for g in range(m))]
    if len(ids) != 1:
        raise SpecError("group table has no identity")
    e = ids[0]
    inv = []
    for g in range(m):
        cand = [h for h in range(m) if t[g, h] == e and t[h, g] == e]
        if not cand:
            raise SpecError(f"element {g} has no inverse")
        inv.append(cand[0])
    return e, inv


def left_regular(mult: np.ndarray) -> np.ndarray:
    """phi(e_i)[k, j] = mult[i, j, k]."""
    return np.transpose(mult, (0, 2, 1)).copy()


def build_group_algebra(table, rep=None, labels=None, name="group") -> WhaSpec:
    """Group algebra C[G]: Delta(g) = g (x) g, eps(g) = 1, S(g) = g^-1 = g^*."""
    table = np.asarray(table, dtype=int)
    e, inv = _check_group(table)
    m = table.shape[0]
    mult = np.zeros((m, m, m))
    cop = np.zeros((m, m, m))
    S = np.zeros((m, m))
    for g in range(m):
        for h in range(m):
            mult[g, h, table[g, h]] = 1
        cop[g, g, g] = 1
        S[inv[g], g] = 1
    unit = np.zeros(m)
    unit[e] = 1
    if rep is None:
        rep = left_regular(mult)
    labels = labels or [f"g{i}" for i in range(m)]
    return WhaSpec(labels, mult, unit, S.copy(), cop, np.ones(m), S, rep, name=name)


def build_function_algebra(table, labels=None, name="functions") -> WhaSpec:
    """Function algebra C^G in the delta basis: Delta(f)(g (x) h) = f(gh)."""
    table = np.asarray(table, dtype=int)
    e, inv = _check_group(table)
    m = table.shape[0]
    mult = np.zeros((m, m, m))
    cop = np.zeros((m, m, m))
    S = np.zeros((m, m))
    for g in range(m):
        mult[g, g, g] = 1
        S[inv[g], g] = 1
        for a in range(m):
            for b in range(m):
                if table[a, b] == g:
                    cop[g, a, b] = 1
    counit = np.zeros(m)
    counit[e] = 1
    rep = np.zeros((m, m, m))
    for g in range(m):
        rep[g, g, g] = 1
    labels = labels or [f"delta_g{i}" for i in range(m)]
    return WhaSpec(labels, mult, np.ones(m), np.eye(m), cop, counit, S, rep, name=name)


def cyclic_table(m: int) -> np.ndarray:
    return np.add.outer(np.arange(m), np.arange(m)) % m


def s3_table() -> tuple[np.ndarray, list[str]]:
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p q)(i) = p(q(i))
    t = np.array([[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms])
    labels = ["".join(str(v) for v in p) for p in perms]
    return t, labels


def z2() -> WhaSpec:
    sz = np.diag([1.0, -1.0])
    return build_group_algebra(cyclic_table(2), rep=[np.eye(2), sz], labels=["e", "g"], name="z2")


def z2_functions() -> WhaSpec:
    return build_function_algebra(cyclic_table(2), labels=["delta_e", "delta_g"], name="z2_functions")


def s3() -> WhaSpec:
    t, labels = s3_table()
    return build_group_algebra(t, labels=labels, name="s3")


def trivial() -> WhaSpec:
    return build_group_algebra([[0]], labels=["e"], name="trivial")


# ---------------------------------------------------------------------------
# Kac-Paljutkin algebra

_H8_WORDS = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]


def _h8_label(w) -> str:
    a, b, c = w
    s = "x" * a + "y" * b + "z" * c
    return s or "1"


def _h8_word_product(u, v) -> dict:
    """Normal form of the product of two words, as {word: coefficient}."""
    a, b, c = u
    a2, b2, c2 = v
    if c:
        # z x^a2 y^b2 = y^a2 x^b2 z
        a, b, zc = (a + b2) % 2, (b + a2) % 2, 1 + c2
    else:
        a, b, zc = (a + a2) % 2, (b + b2) % 2, c2
    if zc < 2:
        return {(a, b, zc): 1.0}
    # z^2 = (1 + x + y - xy)/2
    out: dict = {}
    for (da, db), coef in (((0, 0), 0.5), ((1, 0), 0.5), ((0, 1), 0.5), ((1, 1), -0.5)):
        w = ((a + da) % 2, (b + db) % 2, 0)
        out[w] = out.get(w, 0.0) + coef
    return out


def build_kac_paljutkin() -> WhaSpec:
    n = 8
    index = {w: i for i, w in enumerate(_H8_WORDS)}
    mult = np.zeros((n, n, n))
    for u, v in itertools.product(_H8_WORDS, repeat=2):
        for w, c in _h8_word_product(u, v).items():
            mult[index[u], index[v], index[w]] += c

    def e(w):
        v = np.zeros(n)
        v[index[w]] = 1
        return v

    def mul(p, q):
        return np.einsum("i,j,ijk->k", p, q, mult)

    def mul2(p, q):
        return np.einsum("ab,cd,ack,bdl->kl", p, q, mult, mult)

    X, Y, Z, one = e((1, 0, 0)), e((0, 1, 0)), e((0, 0, 1)), e((0, 0, 0))
    dX, dY = np.outer(X, X), np.outer(Y, Y)
    YZ, XZ = mul(Y, Z), mul(X, Z)
    dZ = 0.5 * (np.outer(Z, Z) + np.outer(YZ, Z) + np.outer(Z, XZ) - np.outer(YZ, XZ))
    Zinv = mul(mul(Z, Z), Z)
    cop = np.zeros((n, n, n))
    S = np.zeros((n, n))
    star = np.zeros((n, n))
    for w in _H8_WORDS:
        a, b, c = w
        d = np.outer(one, one)
        s = one
        st = one
        for gen, dg, sg, stg, k in ((X, dX, X, X, a), (Y, dY, Y, Y, b), (Z, dZ, Z, Zinv, c)):
            if k:
                d = mul2(d, dg)
                s = mul(sg, s)
                st = mul(stg, st)
        cop[index[w]] = d
        S[:, index[w]] = s
        star[:, index[w]] = st
    return WhaSpec(
        [_h8_label(w) for w in _H8_WORDS],
        mult,
        one,
        star,
        cop,
        np.ones(n),
        S,
        left_regular(mult),
        name="h8",
    )


# ---------------------------------------------------------------------------
# Lee-Yang weak Hopf algebra M2 (+) M3


def lee_yang_zeta() -> float:
    """Positive root of z^4 + z^2 - 1, by Newton iteration."""
    z = 0.8
    for _ in range(60):
        step = (z**4 + z**2 - 1) / (4 * z**3 + 2 * z)
        z -= step
        if abs(step) < 1e-17:
            break
    return z


_LY_BLOCKS = ((1, 2), (2, 3))
LEE_YANG_BASIS = [f"e{b}_{i}{j}" for b, d in _LY_BLOCKS for i in range(1, d + 1) for j in range(1, d + 1)]


def _ly_coproduct_table(z: float) -> dict:
    # non-transposed generators; the remaining ones follow from *-comultiplicativity
    return {
        "e1_11": [(1, "e1_11", "e1_11"), (1, "e2_11", "e2_22")],
        "e1_12": [(1, "e1_12", "e1_12"), (z**2, "e2_12", "e2_21"), (z, "e2_13", "e2_23")],
        "e1_22": [
            (1, "e1_22", "e1_22"),
            (z**4, "e2_22", "e2_11"),
            (z**3, "e2_23", "e2_13"),
            (z**3, "e2_32", "e2_31"),
            (z**2, "e2_33", "e2_33"),
        ],
        "e2_11": [(1, "e1_11", "e2_11"), (1, "e2_11", "e1_22"), (1, "e2_11", "e2_33")],
        "e2_12": [(1, "e1_12", "e2_12"), (1, "e2_12", "e1_21"), (1, "e2_13", "e2_32")],
        "e2_13": [(1, "e1_12", "e2_13"), (1, "e2_13", "e1_22"), (z, "e2_12", "e2_31"), (-(z**2), "e2_13", "e2_33")],
        "e2_22": [(1, "e1_22", "e2_22"), (1, "e2_22", "e1_11"), (1, "e2_33", "e2_22")],
        "e2_23": [(1, "e1_22", "e2_23"), (1, "e2_23", "e1_12"), (z, "e2_32", "e2_21"), (-(z**2), "e2_33", "e2_23")],
        "e2_33": [
            (1, "e1_22", "e2_33"),
            (1, "e2_33", "e1_22"),
            (z**2, "e2_22", "e2_11"),
            (-(z**3), "e2_23", "e2_13"),
            (-(z**3), "e2_32", "e2_31"),
            (z**4, "e2_33", "e2_33"),
        ],
    }


def _ly_transpose(label: str) -> str:
    head, ij = label.split("_")
    return f"{head}_{ij[1]}{ij[0]}"


def build_lee_yang() -> WhaSpec:
    z = lee_yang_zeta()
    n = len(LEE_YANG_BASIS)
    idx = {lab: i for i, lab in enumerate(LEE_YANG_BASIS)}

    def E(b, i, j):
        return idx[f"e{b}_{i}{j}"]

    mult = np.zeros((n, n, n))
    unit = np.zeros(n)
    star = np.zeros((n, n))
    rep = np.zeros((n, 5, 5))
    offset = {1: 0, 2: 2}
    for b, d in _LY_BLOCKS:
        for i in range(1, d + 1):
            unit[E(b, i, i)] = 1
            for j in range(1, d + 1):
                star[E(b, j, i), E(b, i, j)] = 1
                rep[E(b, i, j), offset[b] + i - 1, offset[b] + j - 1] = 1
                for k in range(1, d + 1):
                    mult[E(b, i, j), E(b, j, k), E(b, i, k)] = 1

    cop = np.zeros((n, n, n))
    for lab, terms in _ly_coproduct_table(z).items():
        for c, a, b in terms:
            cop[idx[lab], idx[a], idx[b]] += c
            if _ly_transpose(lab) != lab:
                cop[idx[_ly_transpose(lab)], idx[_ly_transpose(a)], idx[_ly_transpose(b)]] += c

    counit = np.zeros(n)
    counit[:4] = 1
    S = np.zeros((n, n))
    for i in (1, 2):
        for j in (1, 2):
            S[E(1, j, i), E(1, i, j)] = 1
    sigma = {1: 2, 2: 1, 3: 3}
    height = {1: 2, 2: 0, 3: 1}
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            S[E(2, sigma[l], sigma[k]), E(2, k, l)] = z ** (height[l] - height[k])
    return WhaSpec(LEE_YANG_BASIS, mult, unit, star, cop, counit, S, rep, name="lee_yang")


# golden data: the 5-dimensional MPO tensor of the Lee-Yang example,
# entries (left, right, up, down) 1-based -> (sign, power of zeta)
LEE_YANG_MPO_ENTRIES = {
    (1, 1, 1, 1): (1, 0),
    (1, 2, 3, 3): (1, 0),
    (2, 1, 4, 4): (1, 0),
    (2, 2, 2, 2): (1, 0),
    (2, 2, 5, 5): (1, 0),
    (3, 3, 2, 1): (1, 0),
    (3, 4, 4, 3): (1, 0),
    (3, 5, 5, 3): (1, 0),
    (4, 4, 1, 2): (1, 0),
    (5, 4, 4, 5): (1, 0),
    (5, 5, 2, 2): (1, 0),
    (4, 5, 3, 5): (1, 1),
    (5, 3, 5, 4): (1, 1),
    (4, 3, 3, 4): (1, 2),
    (5, 5, 5, 5): (-1, 2),
}


def lee_yang_mpo_tensor() -> np.ndarray:
    """Bare 5x5x5x5 MPO tensor indexed (left, right, up, down), 0-based."""
    z = lee_yang_zeta()
    t = np.zeros((5, 5, 5, 5))
    for k, (sign, p) in LEE_YANG_MPO_ENTRIES.items():
        t[tuple(i - 1 for i in k)] = sign * z**p
    return t


PRESETS: dict[str, Callable[[], WhaSpec]] = {
    "trivial": trivial,
    "z2": z2,
    "z2_functions": z2_functions,
    "s3": s3,
    "h8": build_kac_paljutkin,
    "lee_yang": build_lee_yang,
}


def preset(name: str) -> WhaSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


def write_presets(directory) -> list:
    from pathlib import Path

    from .spec import save_spec

    out = []
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name in PRESETS:
        p = d / f"{name}.json"
        save_spec(preset(name), p)
        out.append(p)
    return out
