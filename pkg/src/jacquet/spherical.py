"""Exact model of the spherical principal series U(lambda).

U(lambda) = U(g) / (U(g) Ker chi_lambda + U(g) k) has the basis
E^m h_j u_lambda where h_j runs over the staircase of Harm = U(a)/J_lambda.
The action of g is computed by normal ordering with k last (k-tails kill
u_lambda) and reducing the U(a)-part with the relations
chi_1(z) u = chi_lambda(z) u - (n-part of z) u coming from k-invariants z.
"""

from __future__ import annotations

from fractions import Fraction

from .completion import TruncatedSeries, prefix_height, tail_drop
from .enveloping import (
    NormalOrderedElement,
    PBWEngine,
    _add_into,
    chi1,
    chi_lambda,
    convert,
    engine,
    find_invariants,
    split_iwasawa,
    weight_decomposition,
)
from .errors import ConsistencyError, SingularWeightError, TruncationError
from .liedata import LieAlgebraData, Weight, load_algebra
from .polykernel import (
    CommutativePoly,
    GroebnerBasis,
    buchberger,
    buchberger_with_cofactors,
    divide,
    is_groebner,
    normal_form,
    rational_eigenvalues,
)

# degree of the highest fundamental W-invariant per catalog entry
INVARIANT_DEGREE = {"sl2r": 2, "sl2c": 2, "sl3r": 3, "sp4r": 4}


class SphericalElement:
    """Finite combination of E^m h_j u_lambda, exact up to height ``K``.

    ``K is None`` means the element is known exactly.
    """

    __slots__ = ("module", "terms", "K")

    def __init__(self, module, terms=None, K=None):
        self.module = module
        self.K = K
        out = {}
        for key, c in (terms or {}).items():
            if c and (K is None or module.height(key[0]) <= K):
                out[key] = Fraction(c)
        self.terms = out

    def _new(self, terms, K="same"):
        return SphericalElement(self.module, terms, self.K if K == "same" else K)

    def __add__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms)
        return self._new(out, _min_k(self.K, other.K))

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        s = Fraction(s)
        return self._new({k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SphericalElement) and self.K == other.K and self.terms == other.terms

    def __hash__(self):
        return hash((self.K, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def truncate(self, K):
        if self.K is not None and K > self.K:
            raise TruncationError(f"element known to height {self.K}, asked for {K}", required=K)
        return self._new(self.terms, K)

    def height_zero_part(self):
        """Coefficients on the basis h_j u_lambda (the n-height 0 block)."""
        r = len(self.module.staircase)
        vec = [Fraction(0)] * r
        zero = (0,) * self.module.algebra.n_dim
        for (m, j), c in self.terms.items():
            if m == zero:
                vec[j] = c
        return vec

    def format(self):
        mod = self.module
        labels = mod.algebra.labels
        hl = labels[mod.algebra.n_dim : mod.algebra.n_dim + mod.algebra.rank]
        if not self.terms:
            return "0"
        parts = []
        for (m, j) in sorted(self.terms, key=lambda k: (mod.height(k[0]), k)):
            c = self.terms[(m, j)]
            e = "*".join(labels[i] if x == 1 else f"{labels[i]}^{x}" for i, x in enumerate(m) if x)
            h = "*".join(hl[i] if x == 1 else f"{hl[i]}^{x}" for i, x in enumerate(mod.staircase[j]) if x)
            mono = "*".join(s for s in (e, h, "u") if s)
            parts.append(mono if c == 1 else f"{c}*{mono}")
        tail = "" if self.K is None else f"  (+ O(height > {self.K}))"
        return " + ".join(parts) + tail

    def __repr__(self):
        return f"SphericalElement({self.format()})"

    def to_json(self):
        return {
            "K": self.K,
            "terms": [[list(m), j, f"{c.numerator}/{c.denominator}"] for (m, j), c in sorted(self.terms.items())],
        }


def _min_k(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class SphericalModule:
    """U(lambda) for one catalog algebra and one rational lambda."""

    def __init__(self, algebra: LieAlgebraData, lam: Weight):
        self.algebra = algebra
        self.lam = lam
        self.regular, bad = algebra.is_regular(lam)
        self.singular_w = bad
        self.eng: PBWEngine = engine(algebra.name, "iwasawa")
        n, l = algebra.n_dim, algebra.rank
        self._n, self._l = n, l
        self._select_relations()
        self._build_groebner()
        self._reduce_memo = {}
        self._nmul_memo = {}
        self._act_memo = {}
        self._check_relations()

    # construction ---------------------------------------------------------
    def _select_relations(self):
        alg = self.algebra
        invs = find_invariants(alg.name, INVARIANT_DEGREE[alg.name])
        used, polys, npart, skipped = [], [], [], []
        G = None
        for z in invs:
            if z.degree() <= 0:
                continue
            p1 = chi1(z)
            a_part, n_part, _ = split_iwasawa(z)
            if p1.is_zero() or p1.degree() < z.degree():
                # no usable relation: chi_1 drops filtration degree
                if p1.is_zero() and not n_part.is_zero():
                    raise ConsistencyError("invariant with vanishing chi_1 but nonzero n-part")
                skipped.append(z)
                continue
            f = p1 - chi_lambda(z, self.lam)
            if G is not None and normal_form(f, G).is_zero():
                skipped.append(z)
                continue
            for w, comp in weight_decomposition(z - chi_lambda(z, self.lam)).items():
                if not w.in_lattice("2P"):
                    raise ConsistencyError(f"relation has a component of weight {w} outside 2P")
            used.append(z)
            polys.append(f)
            npart.append(n_part)
            G = buchberger(polys)
        self.invariants_used = used
        self.invariants_skipped = skipped
        self.relations = polys
        self._npart = npart
        self.J = G

    def _build_groebner(self):
        tops = [f.top_form() for f in self.relations]
        degs = [f.degree() for f in self.relations]
        gtop, cof = buchberger_with_cofactors(tops)
        lifted, lifted_cof = [], []
        for g, row in zip(gtop, cof):
            D = g.degree()
            proj = [c.homogeneous_part(D - d) for c, d in zip(row, degs)]
            full = CommutativePoly(self._l)
            for c, f in zip(proj, self.relations):
                full = full + c * f
            if full.top_form() != g:
                raise ConsistencyError("lifted Groebner element has the wrong top form")
            lifted.append(full)
            lifted_cof.append(proj)
        if not is_groebner(lifted):
            raise ConsistencyError("lifted basis fails the Buchberger criterion")
        self._lifted = lifted
        self._lifted_cof = lifted_cof
        self.staircase = GroebnerBasis(gtop).staircase()
        if len(self.staircase) != len(self.algebra.weyl):
            raise ConsistencyError(f"dim Harm = {len(self.staircase)} but |W| = {len(self.algebra.weyl)}")
        self._stair_index = {e: i for i, e in enumerate(self.staircase)}

    def _check_relations(self):
        for f in self.relations:
            if not normal_form(f, self.J).is_zero():
                raise ConsistencyError("relation not in its own ideal")

    # heights and weights ---------------------------------------------------
    def height(self, m):
        return prefix_height(self.algebra, tuple(m) + (0,) * (self.algebra.dim - self._n))

    def n_weight(self, m):
        w = Weight.zero(self._l)
        for i, e in enumerate(m):
            if e:
                w = w + self.algebra.root_weights[i] * e
        return w

    def _weight_values(self, m):
        w = self.n_weight(m)
        return [self.algebra.evaluate(w, k) for k in range(self._l)]

    # U(n) products -----------------------------------------------------------
    def nmul(self, m1, m2):
        """E^{m1} E^{m2} in normal form, as ``{n-exponents: coeff}``."""
        key = (m1, m2)
        hit = self._nmul_memo.get(key)
        if hit is None:
            pad = (0,) * (self.algebra.dim - self._n)
            word = PBWEngine.monomial_word(m1)
            res = self.eng.word_times(word, {m2 + pad: Fraction(1)})
            hit = {m[: self._n]: c for m, c in res.items()}
            self._nmul_memo[key] = hit
        return hit

    def _n_times(self, m, terms):
        out = {}
        for (m2, j), c in terms.items():
            for m3, d in self.nmul(m, m2).items():
                key = (m3, j)
                out[key] = out.get(key, 0) + c * d
        return {k: v for k, v in out.items() if v}

    # reduction of U(a) u_lambda ---------------------------------------------
    def reduce_a(self, exps):
        """H^exps u_lambda expanded in the basis E^m h_j u_lambda."""
        exps = tuple(exps)
        hit = self._reduce_memo.get(exps)
        if hit is not None:
            return hit
        zero = (0,) * self._n
        q = CommutativePoly.monomial(exps)
        quots, rem = divide(q, self._lifted)
        out = {}
        for e, c in rem.terms.items():
            out[(zero, self._stair_index[e])] = c
        for p in range(len(self.relations)):
            Cp = CommutativePoly(self._l)
            for qg, row in zip(quots, self._lifted_cof):
                if not qg.is_zero() and not row[p].is_zero():
                    Cp = Cp + qg * row[p]
            if Cp.is_zero():
                continue
            if Cp.degree() + self.relations[p].degree() > sum(exps):
                raise ConsistencyError("cofactor degree exceeds the degree of the reduced monomial")
            # C_p f_p u = -C_p (n-part of z_p) u and C_p(H) E^m = E^m C_p(H + f(m))
            for mono, c in self._npart[p].terms.items():
                m = mono[: self._n]
                b = mono[self._n : self._n + self._l]
                poly = Cp.shift(self._weight_values(m)).mul_monomial(b)
                for e, d in poly.terms.items():
                    if sum(e) >= sum(exps):
                        raise ConsistencyError("rewriting did not lower the a-degree")
                    sub = self._n_times(m, self.reduce_a(e))
                    _add_into(out, sub, -c * d)
        self._reduce_memo[exps] = out
        return out

    # the action --------------------------------------------------------------
    def act_generator(self, i, key):
        """Iwasawa basis vector i applied to the basis vector ``key``."""
        mk = (i, key)
        hit = self._act_memo.get(mk)
        if hit is not None:
            return hit
        m, j = key
        l = self._l
        mono = m + self.staircase[j] + (0,) * (self.algebra.dim - self._n - l)
        prod = self.eng.left_mul(i, mono)
        out = {}
        kstart = self._n + l
        for pm, c in prod.items():
            if any(pm[kstart:]):
                continue  # U(g)k kills u_lambda
            nm, am = pm[: self._n], pm[self._n : kstart]
            _add_into(out, self._n_times(nm, self.reduce_a(am)), c)
        self._act_memo[mk] = out
        return out

    def act_word(self, word, terms, cutoff=None):
        """Apply Iwasawa letters (rightmost first) to a terms dict."""
        out = terms
        for i in reversed(word):
            new = {}
            for key, c in out.items():
                _add_into(new, self.act_generator(i, key), c)
            if cutoff is not None:
                new = {k: v for k, v in new.items() if self.height(k[0]) <= cutoff}
            out = new
        return out

    def act(self, P, x: SphericalElement) -> SphericalElement:
        """Exact action of a U(g) element on an element of U(lambda)."""
        if P.engine.basis != "iwasawa":
            P = convert(P, self.eng)
        drop = max((_iwasawa_drop(self.algebra, m) for m in P.terms), default=0)
        K = None if x.K is None else x.K - drop
        if K is not None and K < 0:
            raise TruncationError("element not known to a sufficient height", required=drop)
        out = {}
        for mono, c in P.terms.items():
            _add_into(out, self.act_word(PBWEngine.monomial_word(mono), x.terms), c)
        return SphericalElement(self, out, K)

    def basis_element(self, m=None, j=0):
        m = tuple(m) if m is not None else (0,) * self._n
        return SphericalElement(self, {(m, j): Fraction(1)})

    def u_lambda(self):
        return self.basis_element()

    # summaries ----------------------------------------------------------------
    def a_matrices(self):
        """Matrices of H_k on Harm: H_k h_j = sum_i M[j][i] h_i (mod J)."""
        mats = []
        for k in range(self._l):
            M = []
            for e in self.staircase:
                prod = CommutativePoly.monomial(e).mul_monomial(tuple(int(t == k) for t in range(self._l)))
                nf = normal_form(prod, self.J)
                row = [Fraction(0)] * len(self.staircase)
                for ee, c in nf.terms.items():
                    row[self._stair_index[ee]] = c
                M.append(row)
            mats.append(M)
        return mats

    def expected_eigenvalues(self):
        alg = self.algebra
        return [[alg.evaluate(alg.rho + alg.act(w, self.lam), k) for w in alg.weyl] for k in range(self._l)]

    def check_eigenvalues(self):
        for M, expect in zip(self.a_matrices(), self.expected_eigenvalues()):
            if sorted(rational_eigenvalues(M)) != sorted(expect):
                raise ConsistencyError("a-eigenvalues on Harm differ from (rho + w lambda)(H)")
        return True

    def summary(self):
        names = ["H"] if self._l == 1 else [f"H{i + 1}" for i in range(self._l)]
        return {
            "lambda": self.lam.to_json(),
            "lambda_values": [str(self.algebra.evaluate(self.lam, k)) for k in range(self._l)],
            "regular": self.regular,
            "J_lambda": [g.format(names) for g in self.J.generators],
            "staircase": [list(e) for e in self.staircase],
            "eigenvalues": [[str(v) for v in row] for row in self.expected_eigenvalues()],
            "invariants_used": [chi1(z).format(names) for z in self.invariants_used],
        }


def _iwasawa_drop(alg, mono):
    off = alg.n_dim + alg.rank
    return sum(mono[i] * int(alg.root_weights[i - off].height()) for i in alg.k_range)


def build_module(algebra, lam) -> SphericalModule:
    """Build U(lambda); singular lambda is accepted but flagged."""
    alg = load_algebra(algebra) if isinstance(algebra, str) else algebra
    if not isinstance(lam, Weight):
        lam = Weight(lam)
    mod = SphericalModule(alg, lam)
    mod.check_eigenvalues()
    return mod


def require_regular(mod: SphericalModule):
    if not mod.regular:
        w = mod.algebra.weyl[mod.singular_w]
        mat = [[str(x) for x in row] for row in w]
        raise SingularWeightError(f"lambda = {mod.lam} is singular: fixed by the Weyl element {mat}")


def act(P, x: SphericalElement) -> SphericalElement:
    return x.module.act(P, x)


def act_series(f: TruncatedSeries, x: SphericalElement, K=None) -> SphericalElement:
    """Apply a truncated E^(g,n) series to x; the horizon is tracked."""
    mod = x.module
    alg = mod.algebra
    drop = f.tail_drop()
    horizon = f.K if x.K is None else min(f.K, x.K - drop)
    if K is not None:
        horizon = min(horizon, K)
    if horizon < 0:
        raise TruncationError(f"series horizon too small (drop {drop})", required=drop)
    n, l = alg.n_dim, alg.rank
    off = n + l
    out = {}
    for mono, c in f.terms.items():
        state = x.terms
        remaining = tail_drop(alg, mono)
        word = PBWEngine.monomial_word(mono)
        for letter in reversed(word):
            if letter in alg.k_range:
                remaining -= int(alg.root_weights[letter - off].height())
                # F_i = E_i - K_i
                new = {}
                _add_into(new, mod.act_word([letter - off], state))
                _add_into(new, mod.act_word([letter], state), -1)
                state = new
            else:
                state = mod.act_word([letter], state)
            state = {k: v for k, v in state.items() if mod.height(k[0]) <= horizon + remaining}
        _add_into(out, state, c)
    return SphericalElement(mod, out, horizon)


def u0_generators(mod: SphericalModule, K=None):
    """Generators h_j u_lambda of U(lambda)_0 over U(n)_{2P}.

    With K given, check that every basis vector E^m h_j u_lambda of 2P-weight
    and height <= K is E^m applied to a generator.
    """
    gens = [mod.basis_element(None, j) for j in range(len(mod.staircase))]
    if K is not None:
        from itertools import product

        alg = mod.algebra
        hs = [int(w.height()) for w in alg.root_weights]
        for m in product(*[range(K // h + 1) for h in hs]):
            if mod.height(m) > K or not mod.n_weight(m).in_lattice("2P"):
                continue
            word = PBWEngine.monomial_word(m + (0,) * (alg.dim - alg.n_dim))
            for j, g in enumerate(gens):
                got = mod.act_word(word, g.terms)
                if got != {(tuple(m), j): Fraction(1)}:
                    raise ConsistencyError(f"basis vector {m}, {j} not reached from the generators")
    return gens
