"""PBW normal ordering in U(g), weight grading and the restricted
Harish-Chandra projection.

Elements are sparse maps from exponent vectors (one entry per basis vector,
in basis order) to Fractions.  Two engines exist per algebra: the Iwasawa
engine (k-part last, used for chi and the module action) and the root engine
(every basis vector is an ad(a)-weight vector, used for grading).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import ConfigurationError
from .liedata import LieAlgebraData, Weight, load_algebra
from .polykernel import CommutativePoly, rref, sparse_nullspace

BASIS_ORDER_VERSION = 1


def _add_into(target, source, scale=1):
    for m, c in source.items():
        v = target.get(m, 0) + scale * c
        if v:
            target[m] = v
        else:
            target.pop(m, None)


class PBWEngine:
    """Normal-ordering machine for one algebra and one ordered basis."""

    def __init__(self, algebra: LieAlgebraData, basis="iwasawa"):
        self.algebra = algebra
        self.basis = basis
        self.dim = algebra.dim
        self.labels = algebra.labels if basis == "iwasawa" else algebra.labels_root
        self._br = {(i, j): algebra.bracket(i, j, basis) for i in range(self.dim) for j in range(self.dim)}
        self._memo = {}

    def unit(self, i):
        return tuple(1 if k == i else 0 for k in range(self.dim))

    def one(self):
        return (0,) * self.dim

    def left_mul(self, i, mono):
        """b_i * (normal monomial) as a normal-ordered dict."""
        key = (i, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        j = next((k for k, e in enumerate(mono) if e), None)
        if j is None or i <= j:
            m = list(mono)
            m[i] += 1
            out = {tuple(m): Fraction(1)}
        else:
            rest = list(mono)
            rest[j] -= 1
            rest = tuple(rest)
            out = {}
            # b_i b_j = b_j b_i + [b_i, b_j]
            for m, c in self.left_mul(i, rest).items():
                _add_into(out, self.left_mul(j, m), c)
            for k, c in self._br[(i, j)].items():
                _add_into(out, self.left_mul(k, rest), c)
        self._memo[key] = out
        return out

    def left_mul_element(self, i, terms):
        out = {}
        for m, c in terms.items():
            _add_into(out, self.left_mul(i, m), c)
        return out

    def word_times(self, word, terms):
        """(b_{w0} b_{w1} ... ) * terms."""
        out = terms
        for i in reversed(word):
            out = self.left_mul_element(i, out)
        return out

    @staticmethod
    def monomial_word(mono):
        return [i for i, e in enumerate(mono) for _ in range(e)]

    def multiply(self, p, q):
        out = {}
        for m, c in p.items():
            _add_into(out, self.word_times(self.monomial_word(m), q), c)
        return out

    def normal_order(self, word):
        return self.word_times(list(word), {self.one(): Fraction(1)})


@lru_cache(maxsize=None)
def engine(name, basis="iwasawa") -> PBWEngine:
    return PBWEngine(load_algebra(name), basis)


class NormalOrderedElement:
    """A finite element of U(g) in PBW normal form."""

    __slots__ = ("engine", "terms")

    def __init__(self, eng: PBWEngine, terms=None):
        self.engine = eng
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    # constructors -------------------------------------------------------
    @classmethod
    def generator(cls, eng, i, coeff=1):
        return cls(eng, {eng.unit(i): coeff})

    @classmethod
    def scalar(cls, eng, c):
        return cls(eng, {eng.one(): c})

    @classmethod
    def from_word(cls, eng, word):
        return cls(eng, eng.normal_order(word))

    def _wrap(self, terms):
        return NormalOrderedElement(self.engine, terms)

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, NormalOrderedElement):
            other = NormalOrderedElement.scalar(self.engine, other)
        out = dict(self.terms)
        _add_into(out, other.terms)
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NormalOrderedElement):
            return self._wrap(self.engine.multiply(self.terms, other.terms))
        other = Fraction(other)
        return self._wrap({m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        other = Fraction(other)
        return self._wrap({m: c * other for m, c in self.terms.items()})

    def bracket(self, other):
        return self * other - other * self

    def __eq__(self, other):
        if not isinstance(other, NormalOrderedElement):
            return self.terms == NormalOrderedElement.scalar(self.engine, other).terms
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def to_json(self):
        return {
            "basis": self.engine.basis,
            "basis_order_version": BASIS_ORDER_VERSION,
            "terms": [[list(m), f"{c.numerator}/{c.denominator}"] for m, c in sorted(self.terms.items())],
        }

    def format(self):
        if not self.terms:
            return "0"
        labels = self.engine.labels
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(m), m)):
            c = self.terms[m]
            mono = "*".join(labels[i] if e == 1 else f"{labels[i]}^{e}" for i, e in enumerate(m) if e)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)

    def __repr__(self):
        return f"NormalOrderedElement({self.format()})"


def normal_order(word, algebra, basis="iwasawa"):
    """PBW normal form of the product of basis vectors listed in ``word``."""
    name = algebra if isinstance(algebra, str) else algebra.name
    return NormalOrderedElement.from_word(engine(name, basis), word)


# ---------------------------------------------------------------------------
# basis conversion and grading
# ---------------------------------------------------------------------------


def convert(element: NormalOrderedElement, target: PBWEngine):
    """Re-express an element in the other basis of the same algebra."""
    alg = element.engine.algebra
    if element.engine.basis == target.basis:
        return element
    images = alg.iwasawa_to_root() if element.engine.basis == "iwasawa" else alg.root_to_iwasawa()
    out = {}
    for mono, c in element.terms.items():
        acc = {target.one(): Fraction(c)}
        for i in reversed(PBWEngine.monomial_word(mono)):
            new = {}
            for k, v in images[i].items():
                _add_into(new, target.left_mul_element(k, acc), v)
            acc = new
        _add_into(out, acc)
    return NormalOrderedElement(target, out)


def monomial_weight(algebra, mono):
    """Weight of a root-basis monomial."""
    w = Weight.zero(algebra.rank)
    for i, e in enumerate(mono):
        if e and (i in algebra.n_range or i in algebra.k_range):
            w = w + algebra.basis_weight(i) * e
    return w


def weight_decomposition(P: NormalOrderedElement):
    """``{weight: component}`` with components in the input's basis."""
    alg = P.engine.algebra
    root = engine(alg.name, "root")
    R = convert(P, root)
    parts = {}
    for m, c in R.terms.items():
        parts.setdefault(monomial_weight(alg, m), {})[m] = c
    return {w: convert(NormalOrderedElement(root, t), P.engine) for w, t in parts.items()}


def weight_component(P: NormalOrderedElement, mu: Weight) -> NormalOrderedElement:
    """The U(g)_mu part of P."""
    return weight_decomposition(P).get(mu, NormalOrderedElement(P.engine))


# ---------------------------------------------------------------------------
# chi and invariants
# ---------------------------------------------------------------------------


def split_iwasawa(P: NormalOrderedElement):
    """Split an Iwasawa-basis element into (pure a-part, n-part without k, k-tail part)."""
    alg = P.engine.algebra
    a_part, n_part, k_part = {}, {}, {}
    kstart = alg.n_dim + alg.rank
    for m, c in P.terms.items():
        if any(m[kstart:]):
            k_part[m] = c
        elif any(m[: alg.n_dim]):
            n_part[m] = c
        else:
            a_part[m] = c
    eng = P.engine
    return (NormalOrderedElement(eng, a_part), NormalOrderedElement(eng, n_part), NormalOrderedElement(eng, k_part))


def a_polynomial(P: NormalOrderedElement) -> CommutativePoly:
    """Read a pure U(a) element as a commutative polynomial in H_1..H_l."""
    alg = P.engine.algebra
    a0, a1 = alg.n_dim, alg.n_dim + alg.rank
    return CommutativePoly(alg.rank, {m[a0:a1]: c for m, c in P.terms.items()})


def chi1(P: NormalOrderedElement) -> CommutativePoly:
    """Projection to U(a) along nU(a+n) + U(g)k."""
    if P.engine.basis != "iwasawa":
        P = convert(P, engine(P.engine.algebra.name, "iwasawa"))
    return a_polynomial(split_iwasawa(P)[0])


def rho_values(algebra):
    return [algebra.evaluate(algebra.rho, k) for k in range(algebra.rank)]


def rho_shift(p: CommutativePoly, algebra, sign):
    """p(H) -> p(H + sign * rho(H))."""
    return p.shift([sign * v for v in rho_values(algebra)])


def weyl_substitution(algebra, w):
    """Matrix S with (w mu)(H_k) = sum_j S[k][j] mu(H_j)."""
    from .polykernel import inverse, matmul

    pair = algebra.pairing
    return matmul(matmul(pair, w), inverse(pair))


def is_weyl_invariant(p: CommutativePoly, algebra) -> bool:
    for w in algebra.weyl:
        if p.linear_substitute(weyl_substitution(algebra, w)) != p:
            return False
    return True


def _weight_zero_monomials(algebra, max_degree):
    """Root-basis monomials of weight 0 and degree <= max_degree."""
    dim = algebra.dim
    out = []

    def rec(pos, remaining, mono):
        if pos == dim:
            m = tuple(mono)
            if monomial_weight(algebra, m).is_zero():
                out.append(m)
            return
        for e in range(remaining + 1):
            mono.append(e)
            rec(pos + 1, remaining - e, mono)
            mono.pop()

    rec(0, max_degree, [])
    return sorted(out, key=lambda m: (sum(m), m))


@lru_cache(maxsize=None)
def _find_invariants_cached(name, max_degree):
    alg = load_algebra(name)
    root = engine(name, "root")
    iw = engine(name, "iwasawa")
    monos = _weight_zero_monomials(alg, max_degree)
    # k is spanned by E_i - F_i and the m-basis
    k_gens = []
    for i in alg.n_range:
        k_gens.append({root.unit(i): Fraction(1), root.unit(i + alg.n_dim + alg.rank): Fraction(-1)})
    for i in alg.m_range:
        k_gens.append({root.unit(i): Fraction(1)})
    equations = {}
    for col, m in enumerate(monos):
        mono = {m: Fraction(1)}
        for g, X in enumerate(k_gens):
            br = root.multiply(X, mono)
            _add_into(br, root.multiply(mono, X), -1)
            for out_m, c in br.items():
                equations.setdefault((g, out_m), {})[m] = c
    # eliminate high-degree columns first so the free columns are low degree
    columns = sorted(monos, key=lambda m: (-sum(m), m))
    sols = sparse_nullspace(list(equations.values()), columns)
    # echelonize with high degree first: each row then has the degree of its
    # pivot, giving a basis adapted to the filtration
    support = sorted({m for v in sols for m in v}, key=lambda m: (-sum(m), m))
    rows, _ = rref([[v.get(m, Fraction(0)) for m in support] for v in sols])
    elements = []
    for row in rows:
        z = convert(NormalOrderedElement(root, {m: c for m, c in zip(support, row) if c}), iw)
        p = chi1(z)
        scale = p.leading_coeff() if not p.is_zero() else z.terms[max(z.terms)]
        elements.append(z * (1 / scale))
    elements.sort(key=lambda z: (z.degree(), sorted(z.terms)))
    return tuple(elements)


def find_invariants(algebra, max_degree):
    """Basis of the weight-zero k-invariants of filtration degree <= max_degree.

    The weight-zero condition is imposed on top of commutation with k so that
    every z - chi_lambda(z) lies in U(g)_{2P}.
    """
    name = algebra if isinstance(algebra, str) else algebra.name
    return list(_find_invariants_cached(name, max_degree))


@lru_cache(maxsize=None)
def validated_shift(name):
    """Sign s such that H -> H + s*rho(H) makes chi of degree-2 invariants W-invariant."""
    alg = load_algebra(name)
    zs = [z for z in find_invariants(name, 2) if z.degree() == 2]
    good = []
    for sign in (1, -1):
        if zs and all(is_weyl_invariant(rho_shift(chi1(z), alg, sign), alg) for z in zs):
            good.append(sign)
    if len(good) != 1:
        raise ConfigurationError(f"rho-shift self-validation selected {good} for {name}")
    return good[0]


def chi(P: NormalOrderedElement) -> CommutativePoly:
    """chi = chi_2 o chi_1 with the validated rho-shift."""
    alg = P.engine.algebra
    return rho_shift(chi1(P), alg, validated_shift(alg.name))


def chi_lambda(P: NormalOrderedElement, lam: Weight) -> Fraction:
    """chi(P) evaluated at lambda."""
    alg = P.engine.algebra
    return chi(P).evaluate([alg.evaluate(lam, k) for k in range(alg.rank)])
