"""Generators of the Jacquet module with triangular a-action.

Pipeline: diagonalize the a-action on Harm (Q-bar, B-bar), expand the
remaining n-corrections into R, solve (X - Qbar(X) - T) L = L (X - Qbar(X) - R)
weight by weight, and assemble A, B, Q and v = L w with u_lambda = A v and
H v = Q(H) v.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from itertools import product

from .completion import (
    TruncatedSeries,
    identity_matrix,
    matrix_add,
    matrix_multiply,
    scalar_matrix,
    series_component,
    series_component_line,
    series_invert,
    series_monomial_weight,
)
from .errors import ConsistencyError, PreconditionError, TruncationError, VerificationError
from .liedata import Weight, enumerate_lattice, oshima_constants, weight_compare
from .polykernel import identity, inverse, matmul, rank, triangularize_commuting
from .spherical import SphericalElement, SphericalModule, act_series, require_regular, u0_generators


# ---------------------------------------------------------------------------
# Lemma-level solve
# ---------------------------------------------------------------------------


def _is_upper(Q):
    return all(Q[i][j] == 0 for i in range(len(Q)) for j in range(i))


def solve_LT_level(lam_val, Q0, Rn):
    """Solve lam*L - [Q0, L] = T + R with T_ij = 0 off resonance.

    Entries are fixed by induction on j - i; a resonant entry
    ((Q0)_ii - (Q0)_jj = lam) takes L_ij = 0 and T absorbs the rest.
    """
    if not _is_upper(Q0):
        raise PreconditionError("Q0 must be upper triangular")
    r = len(Q0)
    lam_val = Fraction(lam_val)
    L = [[Fraction(0)] * r for _ in range(r)]
    T = [[Fraction(0)] * r for _ in range(r)]
    for d in range(-(r - 1), r):
        for i in range(r):
            j = i + d
            if not 0 <= j < r:
                continue
            rhs = Fraction(Rn[i][j])
            rhs += sum((Q0[i][k] * L[k][j] for k in range(i + 1, r)), Fraction(0))
            rhs -= sum((L[i][k] * Q0[k][j] for k in range(j)), Fraction(0))
            gap = Q0[i][i] - Q0[j][j]
            if lam_val != gap:
                L[i][j] = rhs / (lam_val - gap)
            else:
                T[i][j] = -rhs
    return L, T


# ---------------------------------------------------------------------------
# weight-by-weight construction of L and T
# ---------------------------------------------------------------------------


def _n_monomials_of_weight(alg, mu):
    """All n-exponent vectors with sum n_i beta_i = mu."""
    hs = [int(w.height()) for w in alg.root_weights]
    ht = int(mu.height())
    out = []
    for m in product(*[range(ht // h + 1) for h in hs]):
        w = Weight.zero(alg.rank)
        for i, e in enumerate(m):
            if e:
                w = w + alg.root_weights[i] * e
        if w == mu:
            out.append(m)
    return out


def _decompose(alg, series_matrix):
    """Matrix of pure series -> {weight: {n-mono: r x r scalar matrix}}."""
    r = len(series_matrix)
    n = alg.n_dim
    out = {}
    for i in range(r):
        for j in range(r):
            for m, c in series_matrix[i][j].terms.items():
                if any(m[n:]):
                    raise PreconditionError("R must have entries in E^(n)")
                w = series_monomial_weight(alg, m)
                blk = out.setdefault(w, {})
                mat = blk.setdefault(m[:n], [[Fraction(0)] * r for _ in range(r)])
                mat[i][j] += c
    return out


def _component_product(mod, A, B, r):
    """Product of two weight components (dicts n-mono -> matrix) in U(n)."""
    out = {}
    for m1, M1 in A.items():
        for m2, M2 in B.items():
            P = matmul(M1, M2)
            if not any(x for row in P for x in row):
                continue
            for m3, c in mod.nmul(m1, m2).items():
                acc = out.setdefault(m3, [[Fraction(0)] * r for _ in range(r)])
                for i in range(r):
                    for j in range(r):
                        if P[i][j]:
                            acc[i][j] += c * P[i][j]
    return out


def _to_series(alg, K, comps, r, constant=None):
    pad = (0,) * (alg.dim - alg.n_dim)
    mats = [[{} for _ in range(r)] for _ in range(r)]
    for blk in comps.values():
        for m, M in blk.items():
            for i in range(r):
                for j in range(r):
                    if M[i][j]:
                        mats[i][j][m + pad] = M[i][j]
    if constant is not None:
        zero = (0,) * alg.dim
        for i in range(r):
            for j in range(r):
                if constant[i][j]:
                    mats[i][j][zero] = mats[i][j].get(zero, 0) + constant[i][j]
    return [[TruncatedSeries(alg, K, mats[i][j], "2P") for j in range(r)] for i in range(r)]


def construct_LT(mod: SphericalModule, Q0, R, K, X):
    """L = 1 + ..., T with (X - Q0 - T) L = L (X - Q0 - R) modulo height > K.

    ``X`` lists the coefficients of the separating element in the a-basis,
    ``R`` is a matrix of pure series with positive height.
    """
    if not _is_upper(Q0):
        raise PreconditionError("Q0 must be upper triangular")
    alg = mod.algebra
    r = len(Q0)
    Rc = _decompose(alg, R)
    if any(w.is_zero() for w in Rc):
        raise PreconditionError("R must have strictly positive height")

    def val(mu):
        return sum((Fraction(x) * alg.evaluate(mu, k) for k, x in enumerate(X)), Fraction(0))

    Lc, Tc = {}, {}
    weights = sorted(enumerate_lattice("2P++", K, alg.rank), key=lambda w: (w.height(), w.coords))
    for mu in weights:
        # S_mu = sum over mu1 + mu2 = mu of T_mu1 L_mu2 - L_mu1 R_mu2
        S = {}
        for mu1, T1 in Tc.items():
            L2 = Lc.get(mu - mu1)
            if L2:
                _acc(S, _component_product(mod, T1, L2, r), 1)
        for mu1, L1 in Lc.items():
            R2 = Rc.get(mu - mu1)
            if R2:
                _acc(S, _component_product(mod, L1, R2, r), -1)
        Rm = Rc.get(mu, {})
        monos = set(S) | set(Rm)
        Lmu, Tmu = {}, {}
        lam_val = val(mu)
        for m in monos:
            rhs = [[S.get(m, _zero(r))[i][j] - Rm.get(m, _zero(r))[i][j] for j in range(r)] for i in range(r)]
            Lm, Tm = solve_LT_level(lam_val, Q0, rhs)
            if any(x for row in Lm for x in row):
                Lmu[m] = Lm
            if any(x for row in Tm for x in row):
                Tmu[m] = Tm
        if Lmu:
            Lc[mu] = Lmu
        if Tmu:
            Tc[mu] = Tmu
    L = _to_series(alg, K, Lc, r, constant=identity(r))
    T = _to_series(alg, K, Tc, r)
    return L, T, Lc, Tc


def _zero(r):
    return [[Fraction(0)] * r for _ in range(r)]


def _acc(target, source, sign):
    for m, M in source.items():
        acc = target.setdefault(m, _zero(len(M)))
        for i in range(len(M)):
            for j in range(len(M)):
                acc[i][j] += sign * M[i][j]


def bracket_a(alg, X, L):
    """[X, L] entrywise for X = sum X_k H_k and a matrix of pure series."""
    out = []
    for row in L:
        new = []
        for s in row:
            terms = {}
            for m, c in s.terms.items():
                w = series_monomial_weight(alg, m)
                v = sum((Fraction(x) * alg.evaluate(w, k) for k, x in enumerate(X)), Fraction(0))
                if v:
                    terms[m] = c * v
            new.append(TruncatedSeries(alg, s.K, terms, s.lattice))
        out.append(new)
    return out


def check_LT_equation(alg, Q0, R, L, T, X):
    """[X, L] = (Q0 + T) L - L (Q0 + R) modulo height > K."""
    K = L[0][0].K
    Qs = scalar_matrix(alg, K, Q0)
    lhs = bracket_a(alg, X, L)
    rhs = matrix_add(matrix_multiply(matrix_add(Qs, T), L), matrix_multiply(L, matrix_add(Qs, R)), -1)
    diff = matrix_add(lhs, rhs, -1)
    return all(x.is_zero() for row in diff for x in row)


# ---------------------------------------------------------------------------
# the full pipeline
# ---------------------------------------------------------------------------


class BoundaryValueResult:
    """Outputs of the construction plus the intermediate witnesses."""

    def __init__(self, **kw):
        self.__dict__.update(kw)

    def Q_of(self, coeffs):
        """Q(sum c_k H_k) as a matrix of series."""
        r = self.r
        out = [[TruncatedSeries.zero(self.module.algebra, self.K, "2P") for _ in range(r)] for _ in range(r)]
        for c, Qk in zip(coeffs, self.Q):
            out = matrix_add(out, Qk, Fraction(c))
        return out

    def summary(self):
        alg = self.module.algebra
        names = ["H"] if alg.rank == 1 else [f"H{k + 1}" for k in range(alg.rank)]
        return {
            "K": self.K,
            "ordering": [[str(x) for x in self.eigen_weights[i].coords] for i in range(self.r)],
            "weyl_indices": self.weyl_order,
            "oshima_constants": self.C,
            "Qbar": {names[k]: [[str(x) for x in row] for row in Qb] for k, Qb in enumerate(self.Qbar)},
            "Q": {
                names[k]: [[q.to_json() for q in row] for row in Qk] for k, Qk in enumerate(self.Q)
            },
            "Q_text": {names[k]: [[q.format() for q in row] for row in Qk] for k, Qk in enumerate(self.Q)},
            "Abar": [[str(x) for x in row] for row in self.Abar],
            "Bbar": [[str(x) for x in row] for row in self.Bbar],
            "A": [a.to_json() for a in self.A],
            "B": [b.to_json() for b in self.B],
            "v": [v.to_json() for v in self.v],
            "L": [[x.to_json() for x in row] for row in self.L],
            "T": [[x.to_json() for x in row] for row in self.T],
        }


def _eigen_weight(alg, values):
    """Weight whose values on the a-basis are ``values``."""
    pinv = inverse(alg.pairing)
    return Weight([sum((pinv[c][k] * values[k] for k in range(alg.rank)), Fraction(0)) for c in range(alg.rank)])


def boundary_map(mod: SphericalModule, K, verify=True) -> BoundaryValueResult:
    """Construct A, B, Q and the generators v at truncation height K."""
    require_regular(mod)
    alg = mod.algebra
    l, n = alg.rank, alg.n_dim
    r = len(mod.staircase)
    u = u0_generators(mod)
    C_mat = [list(e) for e in mod.staircase]  # u_j = h_j u_lambda
    D = [Fraction(int(j == 0)) for j in range(r)]  # u_lambda = u_1

    # (2) triangularize the a-action on Harm
    Ms = mod.a_matrices()

    def order(a, b):
        return weight_compare(_eigen_weight(alg, a), _eigen_weight(alg, b))

    Bbar, _, labels = triangularize_commuting(Ms, order)
    Bbar = [_normalize_row(row) for row in Bbar]
    Abar = inverse(Bbar)
    Qbar = [matmul(matmul(Bbar, M), Abar) for M in Ms]
    for Qk in Qbar:
        if not _is_upper(Qk):
            raise ConsistencyError("Qbar not upper triangular")
    eigen_weights = [_eigen_weight(alg, t) for t in labels]
    weyl_order = []
    for mu in eigen_weights:
        idx = next(i for i, w in enumerate(alg.weyl) if alg.rho + alg.act(w, mod.lam) == mu)
        weyl_order.append(idx)
    diffs_needed = [
        int((a - b).height()) for a in eigen_weights for b in eigen_weights if a != b and (a - b).in_lattice("2P+")
    ]
    if diffs_needed and max(diffs_needed) > K:
        raise TruncationError(
            f"truncation height {K} is below the resonance height {max(diffs_needed)}", required=max(diffs_needed)
        )

    # (3) R from H_k u_j = (M_k + R1_k) u
    zero_n = (0,) * n
    pad = (0,) * (alg.dim - n)
    Rk = []
    for k in range(l):
        R1 = [[{} for _ in range(r)] for _ in range(r)]
        for j in range(r):
            res = mod.act_generator(n + k, (zero_n, j))
            for (m, i), c in res.items():
                if m == zero_n:
                    if c != Ms[k][j][i]:
                        raise ConsistencyError("a-action on Harm disagrees with the reduction")
                else:
                    R1[j][i][m + pad] = c
        R1s = [[TruncatedSeries(alg, K, R1[j][i], "2P") for i in range(r)] for j in range(r)]
        Rk.append(matrix_multiply(matrix_multiply(scalar_matrix(alg, K, Bbar), R1s), scalar_matrix(alg, K, Abar)))

    # (4) separating element X = sum C_k H_k
    C = oshima_constants(alg, eigen_weights)
    QX = [[sum((C[k] * Qbar[k][i][j] for k in range(l)), Fraction(0)) for j in range(r)] for i in range(r)]
    RX = [[TruncatedSeries.zero(alg, K, "2P") for _ in range(r)] for _ in range(r)]
    for k in range(l):
        RX = matrix_add(RX, Rk[k], C[k])

    # (5) L and T
    L, T, Lc, Tc = construct_LT(mod, QX, RX, K, C)
    Linv = series_invert(L)

    # (6) per-basis corrections T'_k
    Tk_list, Tprime, Q = [], [], []
    unit = [[Fraction(int(k == kk)) for kk in range(l)] for k in range(l)]
    for k in range(l):
        Qs = scalar_matrix(alg, K, Qbar[k])
        term1 = matrix_multiply(bracket_a(alg, unit[k], L), Linv)
        term2 = matrix_multiply(matrix_multiply(L, matrix_add(Qs, Rk[k])), Linv)
        Tk = matrix_add(matrix_add(term1, term2), Qs, -1)
        Tk_list.append(Tk)
        Tp = []
        for i in range(r):
            row = []
            for j in range(r):
                d = eigen_weights[i] - eigen_weights[j]
                zX = sum((C[kk] * alg.evaluate(d, kk) for kk in range(l)), Fraction(0))
                line = series_component_line(Tk[i][j], C, zX)
                if d.in_lattice("2P++"):
                    comp = series_component(Tk[i][j], d)
                else:
                    comp = TruncatedSeries.zero(alg, K, "2P")
                if line != comp:
                    raise ConsistencyError("line component and weight component of T_k disagree")
                row.append(comp)
            Tp.append(row)
        Tprime.append(Tp)
        Q.append(matrix_add(Qs, Tp))

    # (7) A, B, v
    AbarLinv = matrix_multiply(scalar_matrix(alg, K, Abar), Linv)
    A = [sum((AbarLinv[j][i] * D[j] for j in range(r)), TruncatedSeries.zero(alg, K, "2P")) for i in range(r)]
    LB = matrix_multiply(L, scalar_matrix(alg, K, Bbar))
    B = []
    for i in range(r):
        terms = {}
        for j in range(r):
            h = tuple(C_mat[j])
            for m, c in LB[i][j].terms.items():
                key = m[:n] + h + (0,) * (alg.dim - n - l)
                terms[key] = terms.get(key, 0) + c
        B.append(TruncatedSeries(alg, K, terms, "2P"))
    ul = mod.u_lambda()
    v = [act_series(b, ul) for b in B]
    res = BoundaryValueResult(
        module=mod,
        K=K,
        r=r,
        u=u,
        C_matrix=C_mat,
        D=D,
        Qbar=Qbar,
        Abar=Abar,
        Bbar=Bbar,
        S=[[TruncatedSeries.zero(alg, K, "2P") for _ in range(r)] for _ in range(r)],
        R=Rk,
        RX=RX,
        QX=QX,
        C=C,
        L=L,
        Linv=Linv,
        T=T,
        Tk=Tk_list,
        Tprime=Tprime,
        Q=Q,
        A=A,
        B=B,
        v=v,
        eigen_weights=eigen_weights,
        weyl_order=weyl_order,
    )
    if verify:
        report = verify_bv(res, K)
        res.verification = report
        if not report["passed"]:
            raise VerificationError(report["first_failure"])
    return res


def _normalize_row(row):
    last = next(x for x in reversed(row) if x)
    return [x / last for x in row]


def verify_bv(res: BoundaryValueResult, K=None):
    """Check u_lambda = A v, H v = Q(H) v and the structural invariants."""
    mod = res.module
    alg = mod.algebra
    K = res.K if K is None else K
    r, l, n = res.r, alg.rank, alg.n_dim
    checks = []

    def record(name, ok, detail=""):
        checks.append({"check": name, "passed": bool(ok), "detail": detail})

    # u_lambda = A v
    total = SphericalElement(mod, {}, K)
    for a, vi in zip(res.A, res.v):
        total = total + act_series(a.truncate(K), vi.truncate(K))
    diff = total - mod.u_lambda().truncate(K)
    record("u_lambda = A v", diff.is_zero(), "" if diff.is_zero() else f"residual {diff.format()}")

    # H v = Q(H) v
    from .enveloping import NormalOrderedElement

    for k in range(l):
        Hk = NormalOrderedElement.generator(mod.eng, n + k)
        for i in range(r):
            lhs = mod.act(Hk, res.v[i].truncate(K))
            rhs = SphericalElement(mod, {}, K)
            for j in range(r):
                if not res.Q[k][i][j].is_zero():
                    rhs = rhs + act_series(res.Q[k][i][j].truncate(K), res.v[j].truncate(K))
            d = lhs.truncate(K) - rhs
            record(f"H{k + 1} v{i + 1} = (Q v){i + 1}", d.is_zero(), "" if d.is_zero() else f"residual {d.format()}")

    # diagonal, zero pattern, homogeneity
    for k in range(l):
        for i in range(r):
            for j in range(r):
                q = res.Q[k][i][j]
                if i == j:
                    expect = alg.evaluate(res.eigen_weights[i], k)
                    ok = q.terms == ({(0,) * alg.dim: expect} if expect else {})
                    record(f"Q(H{k + 1})[{i + 1},{i + 1}] = (rho + w lambda)(H{k + 1})", ok, "" if ok else q.format())
                    continue
                d = res.eigen_weights[i] - res.eigen_weights[j]
                if not d.in_lattice("2P+"):
                    ok = q.is_zero()
                    if not ok:
                        record(f"Q(H{k + 1})[{i + 1},{j + 1}] vanishes", ok, q.format())
                else:
                    ok = all(series_monomial_weight(alg, m) == d for m in q.terms)
                    if not ok:
                        record(f"Q(H{k + 1})[{i + 1},{j + 1}] homogeneous of weight {d}", ok, q.format())
    record("Q zero pattern and homogeneity", not any(("vanishes" in c["check"] or "homogeneous" in c["check"]) for c in checks))

    # A - Abar, B - Bbar of positive height
    ok = all(
        res.A[i].constant_term() == res.Abar[0][i] * 1
        and all(m == (0,) * alg.dim or any(m[:n]) for m in res.A[i].terms)
        for i in range(r)
    )
    record("A - Abar has positive height", ok)
    ok = True
    for i in range(r):
        for m, c in res.B[i].terms.items():
            if not any(m[:n]):
                j = mod.staircase.index(tuple(m[n : n + l]))
                ok = ok and c == res.Bbar[i][j]
    record("B - Bbar has positive height", ok)

    # {v_i mod n U(lambda)} is a basis
    rk = rank([vi.height_zero_part() for vi in res.v])
    record("v mod n U(lambda) is a basis", rk == r, f"rank {rk} of {r}")

    failures = [c for c in checks if not c["passed"]]
    return {
        "passed": not failures,
        "K": K,
        "checks": checks,
        "first_failure": None if not failures else f"{failures[0]['check']}: {failures[0]['detail']}",
    }
