"""Truncated series in the completions of U(n) and of U(g) along n.

A series is a finite map from root-basis PBW monomials to Fractions.  The
n-prefix of each monomial is the completed direction; the rest (a-, theta(n)-
and m-letters) is an ordinary polynomial tail.  A series with horizon K is
exact for every term whose prefix height is at most K; nothing is claimed
above K.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial

from .enveloping import PBWEngine, _add_into, engine
from .errors import NotInvertibleError, TruncationError
from .liedata import Weight, load_algebra


class TruncatedSeries:
    """Element of E^(n) or E^(g,n), known exactly up to prefix height K."""

    __slots__ = ("algebra", "K", "terms", "lattice")

    def __init__(self, algebra, K, terms=None, lattice="P"):
        self.algebra = load_algebra(algebra) if isinstance(algebra, str) else algebra
        if K < 0:
            raise TruncationError(f"negative truncation height {K}", required=0)
        self.K = K
        clean = {}
        for m, c in (terms or {}).items():
            if c and prefix_height(self.algebra, m) <= K:
                clean[m] = Fraction(c)
        self.terms = clean
        self.lattice = lattice
        if lattice == "2P":
            for m in clean:
                if not series_monomial_weight(self.algebra, m).in_lattice("2P"):
                    raise ValueError("term outside 2P in a series tagged 2P")

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, algebra, K, lattice="P"):
        return cls(algebra, K, {}, lattice)

    @classmethod
    def one(cls, algebra, K):
        alg = load_algebra(algebra) if isinstance(algebra, str) else algebra
        return cls(alg, K, {(0,) * alg.dim: Fraction(1)}, "2P")

    @classmethod
    def scalar(cls, algebra, K, c):
        alg = load_algebra(algebra) if isinstance(algebra, str) else algebra
        return cls(alg, K, {(0,) * alg.dim: Fraction(c)}, "2P")

    @classmethod
    def from_n_exponents(cls, algebra, K, terms, lattice="P"):
        """Build a pure E^(n) series from ``{n-exponent tuple: coeff}``."""
        alg = load_algebra(algebra) if isinstance(algebra, str) else algebra
        pad = (0,) * (alg.dim - alg.n_dim)
        return cls(alg, K, {tuple(m) + pad: c for m, c in terms.items()}, lattice)

    def _new(self, terms, K=None, lattice=None):
        return TruncatedSeries(self.algebra, self.K if K is None else K, terms, lattice or self.lattice)

    # arithmetic ----------------------------------------------------------
    def _check(self, other):
        if other.K != self.K:
            raise TruncationError(f"truncation heights differ: {self.K} vs {other.K}", required=max(self.K, other.K))

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.scalar(self.algebra, self.K, other)
        self._check(other)
        out = dict(self.terms)
        _add_into(out, other.terms)
        return self._new(out, lattice=_join(self.lattice, other.lattice))

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_multiply(self, other)
        other = Fraction(other)
        return self._new({m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.K == other.K and self.terms == other.terms

    def __hash__(self):
        return hash((self.K, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def is_pure(self):
        n = self.algebra.n_dim
        return all(not any(m[n:]) for m in self.terms)

    def truncate(self, K):
        if K > self.K:
            raise TruncationError(f"cannot extend a series known to height {self.K} to {K}", required=K)
        return self._new(self.terms, K=K)

    def constant_term(self):
        return self.terms.get((0,) * self.algebra.dim, Fraction(0))

    def min_height(self):
        return min((prefix_height(self.algebra, m) for m in self.terms), default=None)

    def tail_drop(self):
        return max((tail_drop(self.algebra, m) for m in self.terms), default=0)

    def to_json(self):
        n, l = self.algebra.n_dim, self.algebra.rank
        return {
            "K": self.K,
            "lattice": self.lattice,
            "terms": [
                [list(m[:n]), list(m[n : n + l]), list(m[n + l :]), c.numerator, c.denominator]
                for m, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, algebra, data):
        terms = {tuple(a + b + k): Fraction(num, den) for a, b, k, num, den in data["terms"]}
        return cls(algebra, data["K"], terms, data["lattice"])

    def format(self):
        eng = engine(self.algebra.name, "root")
        labels = eng.labels
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (prefix_height(self.algebra, m), m)):
            c = self.terms[m]
            mono = "*".join(labels[i] if e == 1 else f"{labels[i]}^{e}" for i, e in enumerate(m) if e)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts) + f"  (+ O(height > {self.K}))"

    def __repr__(self):
        return f"TruncatedSeries({self.format()})"


def _join(a, b):
    return "2P" if a == "2P" and b == "2P" else "P"


_HEIGHTS = {}


def _root_heights(algebra):
    hs = _HEIGHTS.get(algebra.name)
    if hs is None:
        hs = _HEIGHTS[algebra.name] = [int(w.height()) for w in algebra.root_weights]
    return hs


def prefix_height(algebra, mono):
    hs = _root_heights(algebra)
    return sum(mono[i] * hs[i] for i in algebra.n_range)


def tail_drop(algebra, mono):
    """Largest possible loss of prefix height when the tail crosses E-letters."""
    off = algebra.n_dim + algebra.rank
    hs = _root_heights(algebra)
    return sum(mono[i] * hs[i - off] for i in algebra.k_range)


def series_monomial_weight(algebra, mono):
    w = Weight.zero(algebra.rank)
    for i, e in enumerate(mono):
        if e and (i in algebra.n_range or i in algebra.k_range):
            w = w + algebra.basis_weight(i) * e
    return w


# ---------------------------------------------------------------------------
# the crossing rule
# ---------------------------------------------------------------------------


def _ad_neg_E(eng: PBWEngine, i, vec):
    """(-ad E_i)(vec) for vec a g-vector ``{basis index: coeff}``."""
    out = {}
    for j, c in vec.items():
        for k, d in eng.algebra.bracket(i, j, "root").items():
            out[k] = out.get(k, 0) - c * d
    return {k: v for k, v in out.items() if v}


_CROSS_MEMO = {}


def cross(algebra, x, n_exps):
    """Move the g-vector x (``{root index: coeff}``) right past E^n.

    Implements X E^m = sum_n prod binom(m_i, n_i) E^{m-n} ((ad E)^n)'(X) with
    ((ad E)^n)' = (-ad E_m)^{n_m} ... (-ad E_1)^{n_1}.  Returns a list of
    ``(n-exponents, g-vector)`` pairs.
    """
    alg = load_algebra(algebra) if isinstance(algebra, str) else algebra
    key = (alg.name, tuple(sorted(x.items())), tuple(n_exps))
    hit = _CROSS_MEMO.get(key)
    if hit is not None:
        return hit
    eng = engine(alg.name, "root")
    out = []
    ranges = [range(e + 1) for e in n_exps]
    for sub in product(*ranges):
        vec = dict(x)
        for i, k in enumerate(sub):
            for _ in range(k):
                vec = _ad_neg_E(eng, i, vec)
                if not vec:
                    break
            if not vec:
                break
        if not vec:
            continue
        coeff = 1
        for m, k in zip(n_exps, sub):
            coeff *= comb(m, k)
        out.append((tuple(m - k for m, k in zip(n_exps, sub)), {j: c * coeff for j, c in vec.items()}))
    _CROSS_MEMO[key] = out
    return out


def _n_word(alg, n_exps):
    return [i for i in alg.n_range for _ in range(n_exps[i])]


def _letter_times(alg, eng, letter, state, cutoff):
    """letter * state, all in root-basis normal form, using the crossing rule."""
    n = alg.n_dim
    out = {}
    for mono, c in state.items():
        prefix, tail = mono[:n], (0,) * n + mono[n:]
        for new_prefix, vec in cross(alg, {letter: Fraction(1)}, prefix):
            # vec * tail, then E^{new_prefix} * (that)
            inner = {}
            for j, d in vec.items():
                _add_into(inner, eng.left_mul(j, tail), d)
            full = eng.word_times(_n_word(alg, new_prefix), inner)
            for m, v in full.items():
                if prefix_height(alg, m) <= cutoff:
                    out[m] = out.get(m, 0) + c * v
    return {m: v for m, v in out.items() if v}


def series_multiply(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Product in E^(g,n); the result horizon is K minus the tail drop of f."""
    f._check(g)
    alg = f.algebra
    eng = engine(alg.name, "root")
    n = alg.n_dim
    drop = f.tail_drop()
    K = f.K - drop
    if K < 0:
        raise TruncationError(f"product needs truncation height >= {drop}", required=drop)
    out = {}
    for mf, cf in f.terms.items():
        word = PBWEngine.monomial_word(mf)
        prefix_word = [i for i in word if i < n]
        tail_word = [i for i in word if i >= n]
        state = dict(g.terms)
        remaining = tail_drop(alg, mf)
        for letter in reversed(tail_word):
            if letter in alg.k_range:
                remaining -= int(alg.root_weights[letter - n - alg.rank].height())
            state = _letter_times(alg, eng, letter, state, K + remaining)
        # prefix letters only raise height
        base = prefix_height(alg, mf)
        for mono, c in state.items():
            if prefix_height(alg, mono) + base > K:
                continue
            for m, v in eng.word_times(prefix_word, {mono: Fraction(1)}).items():
                out[m] = out.get(m, 0) + cf * c * v
    return TruncatedSeries(alg, K, {m: v for m, v in out.items() if v}, _join(f.lattice, g.lattice))


# ---------------------------------------------------------------------------
# matrices of series
# ---------------------------------------------------------------------------


def identity_matrix(algebra, r, K):
    return [[TruncatedSeries.scalar(algebra, K, int(i == j)) for j in range(r)] for i in range(r)]


def matrix_multiply(A, B):
    """Product of series matrices; all entries share the smallest horizon."""
    alg = A[0][0].algebra
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(rows):
        drop = max((x.tail_drop() for x in A[i]), default=0)
        row = []
        for j in range(cols):
            K = min(A[i][0].K, B[0][j].K) - drop
            acc = TruncatedSeries.zero(alg, K, "2P")
            for k in range(inner):
                if not (A[i][k].is_zero() or B[k][j].is_zero()):
                    acc = acc + series_multiply(A[i][k], B[k][j]).truncate(K)
            row.append(acc)
        out.append(row)
    return _align(out)


def _align(M):
    K = min(x.K for row in M for x in row)
    return [[x.truncate(K) if x.K != K else x for x in row] for row in M]


def matrix_add(A, B, scale=1):
    return [[a + b * scale for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scalar_matrix(algebra, K, M):
    return [[TruncatedSeries.scalar(algebra, K, x) for x in row] for row in M]


def series_invert(S):
    """Inverse of a matrix of pure series congruent to the identity.

    Uses the geometric series sum (1 - S)^k, which terminates at height K.
    """
    r = len(S)
    alg = S[0][0].algebra
    K = S[0][0].K
    N = []
    for i in range(r):
        row = []
        for j in range(r):
            x = S[i][j]
            if not x.is_pure():
                raise NotInvertibleError("geometric inversion needs entries in E^(n)")
            d = (1 if i == j else 0) - x
            if d.constant_term() != 0:
                raise NotInvertibleError(f"entry ({i + 1},{j + 1}) of S - 1 has a nonzero constant term")
            row.append(d)
        N.append(row)
    total = identity_matrix(alg, r, K)
    power = identity_matrix(alg, r, K)
    while True:
        power = matrix_multiply(power, N)
        if all(x.is_zero() for row in power for x in row):
            break
        total = matrix_add(total, power)
    return total


# ---------------------------------------------------------------------------
# components and derivatives
# ---------------------------------------------------------------------------


def series_component(f: TruncatedSeries, mu: Weight) -> TruncatedSeries:
    """The weight-mu part (n-prefix weight plus tail weight)."""
    return f._new({m: c for m, c in f.terms.items() if series_monomial_weight(f.algebra, m) == mu})


def series_component_line(f: TruncatedSeries, X, z) -> TruncatedSeries:
    """Sum of the components whose weight takes the value z on X = sum X_k H_k."""
    alg = f.algebra
    z = Fraction(z)

    def val(mu):
        return sum((Fraction(x) * alg.evaluate(mu, k) for k, x in enumerate(X)), Fraction(0))

    return f._new({m: c for m, c in f.terms.items() if val(series_monomial_weight(alg, m)) == z})


def series_weights(f: TruncatedSeries):
    return sorted({series_monomial_weight(f.algebra, m) for m in f.terms}, key=lambda w: w.coords)


def series_derivative(f: TruncatedSeries, n_exps) -> TruncatedSeries:
    """d^{|n|}/dE^n of a pure series: E^m -> m!/(m-n)! E^{m-n}."""
    if not f.is_pure():
        raise ValueError("derivatives are defined on pure E^(n) series")
    alg = f.algebra
    nd = alg.n_dim
    out = {}
    drop = sum(e * h for e, h in zip(n_exps, _root_heights(alg)))
    for m, c in f.terms.items():
        if all(a >= b for a, b in zip(m[:nd], n_exps)):
            coeff = 1
            for a, b in zip(m[:nd], n_exps):
                coeff *= factorial(a) // factorial(a - b)
            new = tuple(a - b for a, b in zip(m[:nd], n_exps)) + m[nd:]
            out[new] = c * coeff
    K = f.K - drop
    if K < 0:
        raise TruncationError("derivative order exceeds the truncation height", required=drop)
    return TruncatedSeries(alg, K, out, f.lattice)
