"""Exact commutative algebra over the rationals.

Polynomials in the variables of U(a), Buchberger's algorithm for the small
ideals that cut out the harmonic quotient, and the dense/sparse rational
linear algebra used throughout the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations

from .errors import DimensionError, UnsupportedParameterError

Exps = tuple


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a number into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(str(text).strip())


def rational_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# commutative polynomials
# ---------------------------------------------------------------------------


def grlex_key(e):
    return (sum(e), e)


class CommutativePoly:
    """Sparse polynomial ``{exponent tuple: Fraction}`` with no zero entries."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise DimensionError(f"exponent {e} has wrong length for {nvars} variables")
                if c:
                    clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, e, c=1):
        return cls(len(e), {tuple(e): c})

    # basic queries -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def support(self):
        return sorted(self.terms, key=grlex_key)

    def leading_exp(self):
        return max(self.terms, key=grlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_exp()]

    def homogeneous_part(self, d):
        return CommutativePoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def top_form(self):
        return self.homogeneous_part(self.degree())

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CommutativePoly):
            other = CommutativePoly.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return CommutativePoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return CommutativePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CommutativePoly):
            other = Fraction(other)
            return CommutativePoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return CommutativePoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = CommutativePoly.constant(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CommutativePoly):
            other = CommutativePoly.constant(self.nvars, other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def mul_monomial(self, e, c=1):
        return CommutativePoly(
            self.nvars, {tuple(a + b for a, b in zip(e, f)): c * d for f, d in self.terms.items()}
        )

    def monic(self):
        return self * (1 / self.leading_coeff())

    # evaluation / substitution ----------------------------------------
    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def substitute(self, images):
        """Replace variable ``i`` by the polynomial ``images[i]``."""
        out = CommutativePoly(images[0].nvars if images else 0)
        cache = {}
        for e, c in self.terms.items():
            term = CommutativePoly.constant(out.nvars, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def shift(self, offsets):
        """p(x_1 + o_1, ..., x_l + o_l)."""
        images = [CommutativePoly.variable(self.nvars, i) + offsets[i] for i in range(self.nvars)]
        return self.substitute(images)

    def linear_substitute(self, matrix):
        """Substitute x_i -> sum_j matrix[i][j] x_j."""
        images = [
            CommutativePoly(
                self.nvars,
                {tuple(1 if k == j else 0 for k in range(self.nvars)): matrix[i][j] for j in range(self.nvars)},
            )
            for i in range(self.nvars)
        ]
        return self.substitute(images)

    # serialization ------------------------------------------------------
    def to_json(self):
        return [[list(e), rational_str(c)] for e, c in sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))]

    @classmethod
    def from_json(cls, nvars, data):
        return cls(nvars, {tuple(e): parse_rational(c) for e, c in data})

    def __repr__(self):
        return f"CommutativePoly({self.format()})"

    def format(self, names=None):
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def exp_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Groebner bases (graded-lex)
# ---------------------------------------------------------------------------


class GroebnerBasis:
    """Reduced Groebner basis under graded-lex, plus its staircase."""

    order = "grlex"

    def __init__(self, generators):
        gens = [g.monic() for g in generators if not g.is_zero()]
        gens.sort(key=lambda g: grlex_key(g.leading_exp()))
        self.generators = tuple(gens)
        self.nvars = gens[0].nvars if gens else 0

    def leading_exps(self):
        return [g.leading_exp() for g in self.generators]

    def staircase(self, limit=10_000):
        """Standard monomials sorted ascending in graded-lex.

        Raises when the quotient is not finite dimensional within ``limit``.
        """
        lead = self.leading_exps()
        if not lead:
            raise UnsupportedParameterError("ideal is zero; quotient is infinite dimensional")
        out = []
        frontier = [(0,) * self.nvars]
        seen = set(frontier)
        while frontier:
            e = frontier.pop()
            if any(divides(l, e) for l in lead):
                continue
            out.append(e)
            if len(out) > limit:
                raise UnsupportedParameterError("quotient by ideal is not finite dimensional")
            for i in range(self.nvars):
                f = tuple(x + (1 if j == i else 0) for j, x in enumerate(e))
                if f not in seen:
                    seen.add(f)
                    frontier.append(f)
        return sorted(out, key=grlex_key)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def to_json(self):
        return {"order": self.order, "generators": [g.to_json() for g in self.generators]}


def divide(p, divisors):
    """Multivariate division: p = sum q_i d_i + r (graded-lex).

    Returns ``(quotients, remainder)``; no term of ``r`` is divisible by a
    leading term of any divisor, and deg(q_i d_i) <= deg p.
    """
    nv = p.nvars
    quot = [dict() for _ in divisors]
    rem = {}
    work = dict(p.terms)
    leads = [(d.leading_exp(), d.leading_coeff()) for d in divisors]
    while work:
        e = max(work, key=grlex_key)
        c = work[e]
        for i, (le, lc) in enumerate(leads):
            if divides(le, e):
                m = exp_sub(e, le)
                f = c / lc
                quot[i][m] = quot[i].get(m, 0) + f
                for de, dc in divisors[i].terms.items():
                    t = tuple(a + b for a, b in zip(de, m))
                    v = work.get(t, 0) - f * dc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[e] = c
            del work[e]
    return [CommutativePoly(nv, q) for q in quot], CommutativePoly(nv, rem)


def normal_form(p, G):
    """Remainder of ``p`` modulo the Groebner basis ``G``."""
    if not G.generators:
        return p
    return divide(p, list(G.generators))[1]


def s_polynomial(f, g):
    lf, lg = f.leading_exp(), g.leading_exp()
    l = exp_lcm(lf, lg)
    return f.mul_monomial(exp_sub(l, lf), 1 / f.leading_coeff()) - g.mul_monomial(
        exp_sub(l, lg), 1 / g.leading_coeff()
    )


def _buchberger_raw(gens, track):
    """Buchberger with optional cofactor tracking.

    ``track`` rows express each basis element in the input generators.
    """
    nv = gens[0].nvars
    n_in = len(gens)
    basis, cof = [], []
    for i, g in enumerate(gens):
        if g.is_zero():
            continue
        basis.append(g)
        cof.append([CommutativePoly.constant(nv, 1 if j == i else 0) for j in range(n_in)])
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        pairs.sort(key=lambda ij: grlex_key(exp_lcm(basis[ij[0]].leading_exp(), basis[ij[1]].leading_exp())))
        i, j = pairs.pop(0)
        fi, fj = basis[i], basis[j]
        li, lj = fi.leading_exp(), fj.leading_exp()
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading terms: Buchberger's first criterion
        l = exp_lcm(li, lj)
        mi = CommutativePoly.monomial(exp_sub(l, li), 1 / fi.leading_coeff())
        mj = CommutativePoly.monomial(exp_sub(l, lj), 1 / fj.leading_coeff())
        s = mi * fi - mj * fj
        q, r = divide(s, basis)
        if r.is_zero():
            continue
        if track:
            row = []
            for k in range(n_in):
                val = mi * cof[i][k] - mj * cof[j][k]
                for t, qt in enumerate(q):
                    if not qt.is_zero():
                        val = val - qt * cof[t][k]
                row.append(val)
            cof.append(row)
        basis.append(r)
        pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return basis, cof


def _reduce_basis(basis, cof, track):
    """Minimalize and inter-reduce; returns monic reduced basis and cofactors."""
    nv = basis[0].nvars
    items = list(zip(basis, cof if track else [None] * len(basis)))
    items.sort(key=lambda t: grlex_key(t[0].leading_exp()))
    minimal = []
    for g, c in items:
        if any(divides(h.leading_exp(), g.leading_exp()) for h, _ in minimal):
            continue
        minimal.append((g, c))
    out = []
    for idx, (g, c) in enumerate(minimal):
        others = [h for k, (h, _) in enumerate(minimal) if k != idx]
        # only tail terms can be divisible by the other leading terms
        q, r = divide(g, others) if others else ([], g)
        lc = r.leading_coeff()
        r = r * (1 / lc)
        if track:
            others_c = [cc for k, (_, cc) in enumerate(minimal) if k != idx]
            row = []
            for k in range(len(c)):
                val = c[k]
                for t, qt in enumerate(q):
                    if not qt.is_zero():
                        val = val - qt * others_c[t][k]
                row.append(val * (1 / lc))
            out.append((r, row))
        else:
            out.append((r, None))
    # inter-reduction above used unreduced partners; repeat until stable
    changed = True
    while changed:
        changed = False
        new = []
        for idx, (g, c) in enumerate(out):
            others = [h for k, (h, _) in enumerate(out) if k != idx]
            q, r = divide(g, others) if others else ([], g)
            if r != g:
                changed = True
                if track:
                    others_c = [cc for k, (_, cc) in enumerate(out) if k != idx]
                    row = []
                    for k in range(len(c)):
                        val = c[k]
                        for t, qt in enumerate(q):
                            if not qt.is_zero():
                                val = val - qt * others_c[t][k]
                        row.append(val)
                    c = row
                g = r
            new.append((g, c))
        out = new
    out.sort(key=lambda t: grlex_key(t[0].leading_exp()))
    return [g for g, _ in out], [c for _, c in out]


def buchberger(gens):
    """Reduced graded-lex Groebner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis([])
    if gens[0].nvars > 2:
        raise UnsupportedParameterError("Groebner kernel is limited to at most two variables")
    basis, _ = _buchberger_raw(gens, track=False)
    reduced, _ = _reduce_basis(basis, [None] * len(basis), track=False)
    G = GroebnerBasis(reduced)
    for g in gens:
        if not normal_form(g, G).is_zero():
            raise AssertionError("input generator not in computed ideal")
    return G


def buchberger_with_cofactors(gens):
    """Reduced basis together with cofactors: ``basis[k] = sum_i cof[k][i] * gens[i]``."""
    basis, cof = _buchberger_raw(list(gens), track=True)
    return _reduce_basis(basis, cof, track=True)


def is_groebner(polys):
    """Buchberger criterion: every S-polynomial reduces to zero."""
    polys = [p for p in polys if not p.is_zero()]
    for f, g in combinations(polys, 2):
        if not divide(s_polynomial(f, g), polys)[1].is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# rational linear algebra (dense lists of Fractions)
# ---------------------------------------------------------------------------


def zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner) if a[i][k]), Fraction(0)) for j in range(cols)] for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


def rref(matrix):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    m = [list(map(Fraction, r)) for r in matrix]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def rank(matrix):
    return len(rref(matrix)[1]) if matrix else 0


def nullspace(matrix, ncols=None):
    """Basis of {x : matrix x = 0}, one vector per free column."""
    if not matrix:
        n = ncols or 0
        return identity(n)
    red, piv = rref(matrix)
    n = len(matrix[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution of ``a x = b`` or ``None`` if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return x


def inverse(a):
    n = len(a)
    aug = [list(r) + e for r, e in zip(a, identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise UnsupportedParameterError("matrix is singular")
    return [row[n:] for row in red]


def sparse_nullspace(equations, columns):
    """Nullspace for sparse equations given as ``{column_key: coeff}`` dicts.

    Returns vectors as ``{column_key: coeff}``; columns are eliminated in the
    order given, so later columns become free first.
    """
    index = {c: i for i, c in enumerate(columns)}
    pivot_rows = {}  # pivot col -> row dict (normalized, pivot coeff 1)
    for eq in equations:
        row = {index[k]: Fraction(v) for k, v in eq.items() if v}
        # reduce against existing pivots
        changed = True
        while row and changed:
            changed = False
            for c in sorted(row):
                if c in pivot_rows:
                    f = row[c]
                    for k, v in pivot_rows[c].items():
                        nv = row.get(k, 0) - f * v
                        if nv:
                            row[k] = nv
                        else:
                            row.pop(k, None)
                    changed = True
                    break
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        # keep existing pivot rows reduced w.r.t. the new pivot
        for c, prow in pivot_rows.items():
            if p in prow:
                f = prow[p]
                for k, v in row.items():
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        pivot_rows[p] = row
    # full back-substitution so each pivot row only has free columns
    for p in sorted(pivot_rows, reverse=True):
        prow = pivot_rows[p]
        for c in list(prow):
            if c != p and c in pivot_rows:
                f = prow.pop(c)
                for k, v in pivot_rows[c].items():
                    if k == c:
                        continue
                    nv = prow.get(k, 0) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
    free = [i for i in range(len(columns)) if i not in pivot_rows]
    out = []
    for f in free:
        vec = {columns[f]: Fraction(1)}
        for p, prow in pivot_rows.items():
            if f in prow:
                vec[columns[p]] = -prow[f]
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# simultaneous triangularization
# ---------------------------------------------------------------------------


def rational_eigenvalues(matrix):
    """Eigenvalues with multiplicity; raises if any is irrational."""
    import sympy

    n = len(matrix)
    if n == 0:
        return []
    M = sympy.Matrix(n, n, lambda i, j: sympy.Rational(matrix[i][j].numerator, matrix[i][j].denominator))
    lam = sympy.Symbol("t")
    poly = sympy.Poly(M.charpoly(lam).as_expr(), lam, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        if f.degree() != 1:
            raise UnsupportedParameterError(f"irrational eigenvalue: factor {f.as_expr()} of the characteristic polynomial")
        a, b = f.all_coeffs()
        root = -sympy.Rational(b) / sympy.Rational(a)
        out.extend([Fraction(int(root.p), int(root.q))] * mult)
    return out


def _span_basis(vectors):
    red, _ = rref(vectors) if vectors else ([], [])
    return red


def _joint_kernel(mats, tup, restrict):
    """Vectors x in span(restrict) with x (M_k - t_k) = 0 for all k (row action)."""
    # x = c * restrict ; conditions: c * restrict * (M_k - t_k I) = 0
    n = len(mats[0])
    conds = []
    for M, t in zip(mats, tup):
        shifted = [[M[i][j] - (t if i == j else 0) for j in range(n)] for i in range(n)]
        img = matmul(restrict, shifted)  # rows: images of basis vectors
        conds.extend(transpose(img))
    coeffs = nullspace(conds, ncols=len(restrict)) if conds else identity(len(restrict))
    return [[sum((c[i] * restrict[i][j] for i in range(len(restrict))), Fraction(0)) for j in range(n)] for c in coeffs]


def triangularize_commuting(mats, eigen_order=None):
    """Simultaneously upper-triangularize commuting matrices (row action).

    Finds an invertible ``B`` with ``B M_k = T_k B`` and ``T_k`` upper
    triangular, so the rows of ``B`` are the new basis in terms of the old.
    Blocks of equal joint eigenvalue are contiguous and sorted descending by
    ``eigen_order`` (a comparator on eigenvalue tuples returning -1/0/1);
    entries between different blocks vanish.

    Returns ``(B, [T_k], [joint eigenvalue tuple per row])``.
    """
    n = len(mats[0])
    if any(len(M) != n for M in mats):
        raise DimensionError("matrices must share one size")
    per = [rational_eigenvalues(M) for M in mats]
    # joint eigenvalue tuples: intersect generalized eigenspaces
    candidates = sorted(set(tuple(t) for t in _product_sets([sorted(set(p)) for p in per])))
    blocks = []
    for tup in candidates:
        space = _generalized_joint_space(mats, tup)
        if space:
            blocks.append((tup, space))
    if sum(len(s) for _, s in blocks) != n:
        raise UnsupportedParameterError("matrices are not simultaneously triangularizable over Q")
    if eigen_order is None:
        eigen_order = lambda a, b: (a > b) - (a < b)
    blocks.sort(key=cmp_to_key(lambda x, y: -eigen_order(x[0], y[0])))
    rows, labels = [], []
    for tup, space in blocks:
        # flag inside the block: the common eigenvector goes last
        chain = []
        current = space
        while current:
            vec = _joint_kernel_quotient(mats, tup, current, chain)
            chain.append(vec)
            current = _complement(current, chain)
        chain.reverse()
        rows.extend(chain)
        labels.extend([tup] * len(chain))
    B = rows
    Binv = inverse(B)
    T = [matmul(matmul(B, M), Binv) for M in mats]
    for Tk in T:
        for i in range(n):
            for j in range(i):
                if Tk[i][j]:
                    raise AssertionError("triangularization failed")
    return B, T, labels


def _product_sets(sets):
    out = [()]
    for s in sets:
        out = [o + (x,) for o in out for x in s]
    return out


def _generalized_joint_space(mats, tup):
    n = len(mats[0])
    basis = identity(n)
    for M, t in zip(mats, tup):
        shifted = [[M[i][j] - (t if i == j else 0) for j in range(n)] for i in range(n)]
        power = identity(n)
        for _ in range(n):
            power = matmul(power, shifted)
        # row vectors x with x * power = 0, intersected with current basis
        img = matmul(basis, power)
        coeffs = nullspace(transpose(img), ncols=len(basis)) if basis else []
        basis = _span_basis([[sum((c[i] * basis[i][j] for i in range(len(basis))), Fraction(0)) for j in range(n)] for c in coeffs])
        if not basis:
            return []
    return basis


def _complement(space, chain):
    """Basis of span(space) modulo span(chain), as vectors from span(space)."""
    base = _span_basis(chain)
    out = []
    for v in space:
        if rank(base + out + [v]) > len(base) + len(out):
            out.append(v)
    return out if len(out) + len(base) <= len(space) + len(base) and out else []


def _joint_kernel_quotient(mats, tup, current, chain):
    """A vector of span(current+chain) outside span(chain) that is a joint
    eigenvector modulo span(chain) (row action)."""
    n = len(mats[0])
    full = current + chain
    k = len(full)
    # unknown c over ``full``; condition: (c*full)(M - t) in span(chain)
    # encode as c*full*(M-t) - d*chain = 0 with unknown d
    conds_rows = []
    for M, t in zip(mats, tup):
        shifted = [[M[i][j] - (t if i == j else 0) for j in range(n)] for i in range(n)]
        img = matmul(full, shifted)
        for col in range(n):
            conds_rows.append([img[i][col] for i in range(k)] + [-chain[i][col] for i in range(len(chain))])
    sol = nullspace(conds_rows, ncols=k + len(chain))
    base = _span_basis(chain)
    for s in sol:
        vec = [sum((s[i] * full[i][j] for i in range(k)), Fraction(0)) for j in range(n)]
        if rank(base + [vec]) > len(base):
            return vec
    raise AssertionError("no joint eigenvector found in block")
