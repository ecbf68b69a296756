"""Generate the algebra catalog from explicit matrix realizations.

Every catalog entry is a real matrix Lie algebra closed under transpose, with
Cartan involution X -> -X^T.  The n-part is spanned by chosen restricted root
vectors E_i, F_i = E_i^T spans theta(n), and K_i = E_i - F_i together with an
m-basis spans k.  Structure constants are obtained by decomposing matrix
commutators, so the stored table is exact by construction.

Run ``python -m jacquet.catalog_build`` to rewrite ``data/catalog.json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .polykernel import inverse, rank, rational_str

CATALOG_VERSION = 1
CATALOG_PATH = Path(__file__).with_name("data") / "catalog.json"


def _mat(n, entries):
    m = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in entries.items():
        m[i][j] = Fraction(v)
    return m


def _add(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def _bracket(a, b):
    return _add(_mul(a, b), _mul(b, a), -1)


def _t(a):
    return [list(r) for r in zip(*a)]


def _flat(a):
    return [x for r in a for x in r]


def _realify(z_re, z_im):
    """2x2 complex matrix (given by real and imaginary parts) as a 4x4 real one."""
    n = len(z_re)
    out = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            a, b = Fraction(z_re[i][j]), Fraction(z_im[i][j])
            out[2 * i][2 * j] = a
            out[2 * i][2 * j + 1] = -b
            out[2 * i + 1][2 * j] = b
            out[2 * i + 1][2 * j + 1] = a
    return out


def realization(name):
    """Return ``(E list with weights, a-basis, m-basis)`` as matrices."""
    if name == "sl2r":
        E = [(_mat(2, {(0, 1): 1}), (1,))]
        A = [_mat(2, {(0, 0): 1, (1, 1): -1})]
        M = []
    elif name == "sl3r":
        E = [
            (_mat(3, {(0, 1): 1}), (1, 0)),
            (_mat(3, {(1, 2): 1}), (0, 1)),
            (_mat(3, {(0, 2): 1}), (1, 1)),
        ]
        A = [
            _mat(3, {(0, 0): Fraction(2, 3), (1, 1): Fraction(-1, 3), (2, 2): Fraction(-1, 3)}),
            _mat(3, {(0, 0): Fraction(1, 3), (1, 1): Fraction(1, 3), (2, 2): Fraction(-2, 3)}),
        ]
        M = []
    elif name == "sp4r":
        # X = [[A, B], [C, -A^T]] preserving the standard symplectic form
        E = [
            (_mat(4, {(0, 1): 1, (3, 2): -1}), (1, 0)),
            (_mat(4, {(1, 3): 1}), (0, 1)),
            (_mat(4, {(0, 3): 1, (1, 2): 1}), (1, 1)),
            (_mat(4, {(0, 2): 1}), (2, 1)),
        ]
        A = [
            _mat(4, {(0, 0): 1, (2, 2): -1}),
            _mat(4, {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2), (2, 2): Fraction(-1, 2), (3, 3): Fraction(-1, 2)}),
        ]
        M = []
    elif name == "sl2c":
        zero = [[0, 0], [0, 0]]
        e = [[0, 1], [0, 0]]
        h = [[1, 0], [0, -1]]
        E = [(_realify(e, zero), (1,)), (_realify(zero, e), (1,))]
        A = [_realify(h, zero)]
        M = [_realify(zero, h)]
    else:
        raise KeyError(name)
    return E, A, M


def _coordinates(X, basis_flat, pivots, red_inv):
    """Coordinates of X in the basis; exact, raises if X is outside the span."""
    v = _flat(X)
    # solve sum c_i b_i = v using the precomputed pivot system
    rhs = [v[p] for p in pivots]
    c = [sum((red_inv[i][k] * rhs[k] for k in range(len(rhs))), Fraction(0)) for i in range(len(rhs))]
    recon = [sum((c[i] * basis_flat[i][t] for i in range(len(c))), Fraction(0)) for t in range(len(v))]
    if recon != v:
        raise ValueError("matrix not in span of basis")
    return c


def _decomposer(basis):
    flat = [_flat(b) for b in basis]
    # pick matrix positions on which the basis is independent
    positions = []
    for t in range(len(flat[0])):
        trial = positions + [t]
        if rank([[flat[i][p] for p in trial] for i in range(len(flat))]) == len(trial):
            positions = trial
        if len(positions) == len(flat):
            break
    square = [[flat[i][p] for i in range(len(flat))] for p in positions]
    inv = inverse(square)
    return lambda X: _coordinates(X, flat, positions, inv)


def _structure(basis):
    coords = _decomposer(basis)
    table = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            c = coords(_bracket(basis[i], basis[j]))
            for k, v in enumerate(c):
                if v:
                    table.append([i, j, k, rational_str(v)])
    return table, coords


def _trace(a):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def build_entry(name):
    E, A, M = realization(name)
    Emats = [e for e, _ in E]
    weights = [list(w) for _, w in E]
    Fmats = [_t(e) for e in Emats]
    Kmats = [_add(e, f, -1) for e, f in zip(Emats, Fmats)]
    iw = Emats + A + Kmats + M
    rt = Emats + A + Fmats + M
    m, l = len(Emats), len(A)
    labels_e = [f"E{i + 1}" for i in range(m)] if m > 1 else ["E"]
    labels_h = [f"H{i + 1}" for i in range(l)] if l > 1 else ["H"]
    labels_f = [lab.replace("E", "F") for lab in labels_e]
    labels_k = [lab.replace("E", "K") for lab in labels_e]
    labels_m = [f"M{i + 1}" for i in range(len(M))] if len(M) > 1 else ["M"] * len(M)
    iw_table, iw_coords = _structure(iw)
    rt_table, _ = _structure(rt)
    theta = [[rational_str(x) for x in iw_coords([[-y for y in row] for row in _t(X)])] for X in iw]
    pairing = []
    for H in A:
        row = []
        # alpha_i(H) read from simple root vectors (weights that are unit vectors)
        for i in range(l):
            idx = next(k for k, w in enumerate(weights) if w == [int(t == i) for t in range(l)])
            br = _bracket(H, Emats[idx])
            # br = alpha_i(H) E_idx
            pos = next((p, q) for p in range(len(br)) for q in range(len(br)) if Emats[idx][p][q])
            row.append(br[pos[0]][pos[1]] / Emats[idx][pos[0]][pos[1]])
        pairing.append(row)
    # inner products on a* from the trace form on a
    gram_a = [[_trace(_mul(x, y)) for y in A] for x in A]
    ginv = inverse(gram_a)
    # alpha_i as functional vector f_i[k] = alpha_i(a_k); (alpha_i, alpha_j) = f_i G^-1 f_j
    f = [[pairing[k][i] for k in range(l)] for i in range(l)]
    gram = [
        [sum((f[i][a] * ginv[a][b] * f[j][b] for a in range(l) for b in range(l)), Fraction(0)) for j in range(l)]
        for i in range(l)
    ]
    rho = [sum((Fraction(w[i]) for w in weights), Fraction(0)) / 2 for i in range(l)]
    return {
        "name": name,
        "rank": l,
        "labels_iwasawa": labels_e + labels_h + labels_k + labels_m,
        "labels_root": labels_e + labels_h + labels_f + labels_m,
        "n_dim": m,
        "m_dim": len(M),
        "root_weights": weights,
        "pairing": [[rational_str(x) for x in row] for row in pairing],
        "gram": [[rational_str(x) for x in row] for row in gram],
        "rho": [rational_str(x) for x in rho],
        "structure_iwasawa": iw_table,
        "structure_root": rt_table,
        "theta": theta,
        "matrices": [[[rational_str(x) for x in row] for row in X] for X in iw],
    }


def build_catalog():
    return {
        "version": CATALOG_VERSION,
        "algebras": {name: build_entry(name) for name in ("sl2r", "sl3r", "sp4r", "sl2c")},
    }


def write_catalog(path=CATALOG_PATH):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(build_catalog(), indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    write_catalog()
