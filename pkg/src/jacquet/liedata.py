"""Root data, weights, Weyl groups and structure constants for the catalog.

Weights live in simple-root coordinates.  Each algebra carries two ordered
bases sharing the n- and a-parts:

* the Iwasawa basis ``E.., H.., K.., M..`` with ``K_i = E_i + theta(E_i)``,
  used for normal ordering with k last;
* the root basis ``E.., H.., F.., M..`` with ``F_i = -theta(E_i)``, in which
  every vector has a definite ad(a)-weight.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

from .catalog_build import CATALOG_PATH, CATALOG_VERSION
from .errors import CatalogError, ConsistencyError, DimensionError, ResourceError
from .polykernel import matmul, parse_rational

CATALOG_NAMES = ("sl2r", "sl3r", "sp4r", "sl2c")
LATTICES = ("P", "P+", "2P", "2P+", "2P++")


class Weight:
    """An element of a* written in the simple-root basis."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(parse_rational(c) if not isinstance(c, Fraction) else c for c in coords))

    def __setattr__(self, key, value):
        raise AttributeError("Weight is immutable")

    @classmethod
    def zero(cls, rank):
        return cls([0] * rank)

    @property
    def rank(self):
        return len(self.coords)

    def _check(self, other):
        if len(other.coords) != len(self.coords):
            raise DimensionError(f"rank mismatch: {len(self.coords)} vs {len(other.coords)}")

    def __add__(self, other):
        self._check(other)
        return Weight([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return Weight([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return Weight([-a for a in self.coords])

    def __mul__(self, s):
        s = Fraction(s)
        return Weight([a * s for a in self.coords])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Weight) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "Weight(" + ", ".join(str(c) for c in self.coords) + ")"

    def height(self):
        return sum(self.coords, Fraction(0))

    def is_zero(self):
        return not any(self.coords)

    def in_lattice(self, lattice):
        """Membership in P, P+, 2P, 2P+ or 2P++ (2P++ = 2P+ without 0)."""
        c = self.coords
        integral = all(x.denominator == 1 for x in c)
        if lattice == "P":
            return integral
        if lattice == "P+":
            return integral and all(x >= 0 for x in c)
        even = integral and all(x.numerator % 2 == 0 for x in c)
        if lattice == "2P":
            return even
        if lattice == "2P+":
            return even and all(x >= 0 for x in c)
        if lattice == "2P++":
            return even and all(x >= 0 for x in c) and any(c)
        raise ValueError(f"unknown lattice {lattice!r}")

    def to_json(self):
        return [f"{x.numerator}/{x.denominator}" for x in self.coords]


def weight_compare(mu: Weight, nu: Weight) -> int:
    """Lexicographic order on coordinates: returns -1, 0 or 1."""
    mu._check(nu)
    for a, b in zip(mu.coords, nu.coords):
        if a != b:
            return 1 if a > b else -1
    return 0


def enumerate_lattice(lattice, height_bound, rank):
    """Points of P+, 2P+ or 2P++ with height <= bound, ascending in the order."""
    if lattice not in ("P+", "2P+", "2P++"):
        raise ValueError(f"enumeration supports P+, 2P+, 2P++; got {lattice!r}")
    step = 1 if lattice == "P+" else 2
    bound = int(height_bound)
    pts = []
    for c in product(range(0, bound + 1, step), repeat=rank):
        if sum(c) <= bound:
            w = Weight(c)
            if lattice != "2P++" or not w.is_zero():
                pts.append(w)
    from functools import cmp_to_key

    return sorted(pts, key=cmp_to_key(weight_compare))


def _parse_table(rows):
    table = {}
    for i, j, k, c in rows:
        table.setdefault((i, j), {})[k] = parse_rational(c)
    return table


class LieAlgebraData:
    """One catalog entry, validated on construction."""

    def __init__(self, entry):
        self.name = entry["name"]
        self.rank = entry["rank"]
        self.n_dim = entry["n_dim"]
        self.m_dim = entry["m_dim"]
        self.dim = 2 * self.n_dim + self.rank + self.m_dim
        self.labels = list(entry["labels_iwasawa"])
        self.labels_root = list(entry["labels_root"])
        self.root_weights = [Weight(w) for w in entry["root_weights"]]
        self.pairing = [[parse_rational(x) for x in row] for row in entry["pairing"]]
        self.gram = [[parse_rational(x) for x in row] for row in entry["gram"]]
        self.rho = Weight(entry["rho"])
        self.theta = [[parse_rational(x) for x in row] for row in entry["theta"]]
        self.matrices = [[[parse_rational(x) for x in row] for row in X] for X in entry["matrices"]]
        self._iw = self._full_table(_parse_table(entry["structure_iwasawa"]))
        self._rt = self._full_table(_parse_table(entry["structure_root"]))
        self.validate()

    # index ranges -------------------------------------------------------
    @property
    def n_range(self):
        return range(0, self.n_dim)

    @property
    def a_range(self):
        return range(self.n_dim, self.n_dim + self.rank)

    @property
    def k_range(self):
        """theta(n)-part in the Iwasawa basis (the K_i) or the root basis (the F_i)."""
        return range(self.n_dim + self.rank, 2 * self.n_dim + self.rank)

    @property
    def m_range(self):
        return range(2 * self.n_dim + self.rank, self.dim)

    def _full_table(self, upper):
        full = {}
        for (i, j), v in upper.items():
            full[(i, j)] = dict(v)
            full[(j, i)] = {k: -c for k, c in v.items()}
        return full

    def bracket(self, i, j, basis="iwasawa"):
        """[b_i, b_j] as ``{k: coeff}`` in the chosen basis."""
        table = self._iw if basis == "iwasawa" else self._rt
        return table.get((i, j), {})

    # weights ------------------------------------------------------------
    def basis_weight(self, i):
        """ad(a)-weight of root-basis vector ``i``."""
        if i in self.n_range:
            return self.root_weights[i]
        if i in self.k_range:
            return -self.root_weights[i - self.n_dim - self.rank]
        return Weight.zero(self.rank)

    def evaluate(self, mu: Weight, k: int) -> Fraction:
        """mu(a_k) for the k-th a-basis vector."""
        return sum((self.pairing[k][i] * c for i, c in enumerate(mu.coords)), Fraction(0))

    def simple_indices(self):
        """Indices of the E_i that span simple root spaces (first per root)."""
        out = []
        for i in range(self.rank):
            unit = Weight([int(t == i) for t in range(self.rank)])
            out.extend(k for k, w in enumerate(self.root_weights) if w == unit)
        return out

    def positive_roots(self):
        """Sigma+ as ``{weight: multiplicity}``."""
        out = {}
        for w in self.root_weights:
            out[w] = out.get(w, 0) + 1
        return out

    def inner(self, mu: Weight, nu: Weight) -> Fraction:
        return sum(
            (mu.coords[i] * self.gram[i][j] * nu.coords[j] for i in range(self.rank) for j in range(self.rank)),
            Fraction(0),
        )

    # Weyl group -----------------------------------------------------------
    def simple_reflection(self, i):
        """Matrix of s_i acting on coordinate columns."""
        l = self.rank
        mat = [[Fraction(int(r == c)) for c in range(l)] for r in range(l)]
        aii = self.gram[i][i]
        for c in range(l):
            # s_i(alpha_c) = alpha_c - 2(alpha_c, alpha_i)/(alpha_i, alpha_i) alpha_i
            mat[i][c] -= 2 * self.gram[c][i] / aii
        return mat

    @cached_property
    def weyl(self):
        """All elements of W as matrices; the identity comes first."""
        l = self.rank
        ident = tuple(tuple(Fraction(int(r == c)) for c in range(l)) for r in range(l))
        gens = [self.simple_reflection(i) for i in range(l)]
        seen = [ident]
        known = {ident}
        queue = [ident]
        while queue:
            g = queue.pop(0)
            for s in gens:
                h = tuple(tuple(r) for r in matmul(s, [list(r) for r in g]))
                if h not in known:
                    known.add(h)
                    seen.append(h)
                    queue.append(h)
            if len(seen) > 1000:
                raise ConsistencyError("Weyl group enumeration did not close")
        return [[list(r) for r in g] for g in seen]

    def act(self, w, mu: Weight) -> Weight:
        return Weight([sum((w[r][c] * mu.coords[c] for c in range(self.rank)), Fraction(0)) for r in range(self.rank)])

    def is_regular(self, lam: Weight):
        """Returns ``(True, None)`` or ``(False, index of a w != e fixing lam)``."""
        for idx, w in enumerate(self.weyl[1:], start=1):
            if self.act(w, lam) == lam:
                return False, idx
        return True, None

    # validation -----------------------------------------------------------
    def validate(self):
        for table, name in ((self._iw, "iwasawa"), (self._rt, "root")):
            self._check_jacobi(table, name)
        n = self.dim
        sq = matmul(self.theta, self.theta)
        if sq != [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]:
            raise ConsistencyError(f"{self.name}: theta is not an involution")
        # theta acts on coordinate rows: theta(b_i) = sum_j theta[i][j] b_j
        for i in range(n):
            row = self.theta[i]
            if i in self.a_range:
                expect = [Fraction(-int(j == i)) for j in range(n)]
            elif i in self.k_range or i in self.m_range:
                expect = [Fraction(int(j == i)) for j in range(n)]
            else:
                # theta(E_i) = K_i - E_i = -F_i lies in the -beta_i root space
                kk = i + self.n_dim + self.rank
                expect = [Fraction(-1 if j == i else (1 if j == kk else 0)) for j in range(n)]
            if row != expect:
                raise ConsistencyError(f"{self.name}: theta wrong on basis vector {self.labels[i]}")
        # root-basis brackets respect the weight grading
        for (i, j), v in self._rt.items():
            wt = self.basis_weight(i) + self.basis_weight(j)
            for k in v:
                if self.basis_weight(k) != wt:
                    raise ConsistencyError(f"{self.name}: bracket [{i},{j}] breaks the weight grading")
        for i in self.n_range:
            for h in self.a_range:
                k = h - self.n_dim
                val = self.evaluate(self.root_weights[i], k)
                if self._rt.get((h, i), {}) != ({i: val} if val else {}):
                    raise ConsistencyError(f"{self.name}: a does not act on E_{i + 1} by its weight")
        expected_order = {1: {2}, 2: {6, 8}}[self.rank]
        if len(self.weyl) not in expected_order:
            raise ConsistencyError(f"{self.name}: |W| = {len(self.weyl)}")
        roots = set(self.positive_roots()) | {-w for w in self.positive_roots()}
        for w in self.weyl:
            if {self.act(w, r) for r in roots} != roots:
                raise ConsistencyError(f"{self.name}: Weyl element does not permute the roots")
            for a in roots:
                for b in roots:
                    if self.inner(self.act(w, a), self.act(w, b)) != self.inner(a, b):
                        raise ConsistencyError(f"{self.name}: Weyl element not orthogonal")
        rho = Weight.zero(self.rank)
        for wt, mult in self.positive_roots().items():
            rho = rho + wt * Fraction(mult, 2)
        if rho != self.rho:
            raise ConsistencyError(f"{self.name}: stored rho disagrees with multiplicities")
        if self.name in ("sl2r", "sl3r", "sp4r") and self.m_dim != 0:
            raise ConsistencyError(f"{self.name}: split algebra with nonzero m")

    def _check_jacobi(self, table, name):
        n = self.dim

        def br(x, y):
            out = {}
            for i, a in x.items():
                for j, b in y.items():
                    for k, c in table.get((i, j), {}).items():
                        out[k] = out.get(k, 0) + a * b * c
            return {k: v for k, v in out.items() if v}

        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    x, y, z = {i: 1}, {j: 1}, {k: 1}
                    tot = {}
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        for key, v in br(br(a, b), c).items():
                            tot[key] = tot.get(key, 0) + v
                    if any(tot.values()):
                        raise ConsistencyError(f"{self.name}: Jacobi identity fails ({name} basis)")

    # conversions between the two bases -------------------------------------
    def iwasawa_to_root(self):
        """Linear map on basis vectors: iwasawa b_i -> {root index: coeff}."""
        out = []
        for i in range(self.dim):
            if i in self.k_range:
                out.append({i - self.n_dim - self.rank: Fraction(1), i: Fraction(-1)})
            else:
                out.append({i: Fraction(1)})
        return out

    def root_to_iwasawa(self):
        out = []
        for i in range(self.dim):
            if i in self.k_range:
                # F_i = E_i - K_i
                out.append({i - self.n_dim - self.rank: Fraction(1), i: Fraction(-1)})
            else:
                out.append({i: Fraction(1)})
        return out

    def summary(self):
        return {
            "name": self.name,
            "rank": self.rank,
            "dim": self.dim,
            "weyl_order": len(self.weyl),
            "rho": self.rho.to_json(),
            "positive_roots": [[w.to_json(), m] for w, m in self.positive_roots().items()],
            "basis": self.labels,
        }


@lru_cache(maxsize=1)
def _catalog():
    data = json.loads(CATALOG_PATH.read_text())
    if data.get("version") != CATALOG_VERSION:
        raise CatalogError(f"catalog version {data.get('version')} does not match {CATALOG_VERSION}")
    return data


@lru_cache(maxsize=None)
def load_algebra(name) -> LieAlgebraData:
    """Load and validate a catalog entry (cached; entries are immutable)."""
    data = _catalog()
    if name not in data["algebras"]:
        raise CatalogError(f"unknown algebra {name!r}; choose one of {', '.join(CATALOG_NAMES)}")
    return LieAlgebraData(data["algebras"][name])


def _separates(X_vals, diffs, rank, budget_height=None):
    """Check the resonance-separation property for X given by values on simple roots."""
    # alpha(X) for alpha = sum c_i alpha_i is sum c_i X_vals[i]
    def val(mu):
        return sum((c * x for c, x in zip(mu.coords, X_vals)), Fraction(0))

    bound = max((abs(val(d)) for d in diffs), default=Fraction(0))
    min_x = min(X_vals)
    # alpha in 2P++ has alpha(X) >= height(alpha) * min_x, so height <= bound / min_x
    hmax = int(bound / min_x) if min_x > 0 else 0
    lattice = enumerate_lattice("2P++", hmax, rank)
    for d in diffs:
        target = val(d)
        hits = {a for a in lattice if val(a) == target}
        expect = {d} if d.in_lattice("2P++") else set()
        if hits != expect:
            return False
    return True


def oshima_constants(algebra: LieAlgebraData, eigenvalues, budget=64):
    """Positive integers C with X = sum C_i H_i separating lattice resonances.

    For every pair of eigenvalues the only alpha in 2P++ with
    alpha(X) = (lambda_i - lambda_j)(X) is lambda_i - lambda_j itself (when it
    lies in 2P++).  Candidates are scanned by increasing max-norm.
    """
    rank = algebra.rank
    diffs = [a - b for a in eigenvalues for b in eigenvalues if a != b]
    for norm in range(1, budget + 1):
        for C in product(range(1, norm + 1), repeat=rank):
            if max(C) != norm:
                continue
            # alpha_i(X) for X = sum_k C_k H_k, with H_k the a-basis
            X_vals = [sum((C[k] * algebra.pairing[k][i] for k in range(rank)), Fraction(0)) for i in range(rank)]
            if _separates(X_vals, diffs, rank):
                return list(C)
    raise ResourceError(f"no separating constants with max-norm <= {budget}", bound=budget)


def oshima_element_values(algebra, C):
    """alpha_i(X) for X = sum C_k H_k."""
    return [sum((C[k] * algebra.pairing[k][i] for k in range(algebra.rank)), Fraction(0)) for i in range(algebra.rank)]
