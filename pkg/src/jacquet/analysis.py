"""Consequences of the boundary-value construction.

Relation certificates (theta(n)- and m-relations among the generators v_i),
the filtration by V_i with the direct-sum lattice criterion, weight
multiplicity bookkeeping, and an exact-linear-algebra splitting detector.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .boundary import BoundaryValueResult
from .completion import (
    TruncatedSeries,
    series_component,
    series_multiply,
    series_monomial_weight,
)
from .enveloping import NormalOrderedElement, engine
from .errors import SingularWeightError, TruncationError, VerificationError
from .liedata import Weight
from .polykernel import rank, rref, solve
from .spherical import SphericalElement, act_series

SPLITS = "splits"
DOES_NOT_SPLIT = "does_not_split_within_horizon"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# relation certificates
# ---------------------------------------------------------------------------


class RelationCertificate:
    """Sum_j P_ij v_j = 0 for one generator v_i and one acting element."""

    def __init__(self, i, X, kind, P, residual, leading, W_i):
        self.i = i
        self.X = X
        self.kind = kind
        self.P = P
        self.residual = residual
        self.leading = leading
        self.W_i = W_i

    @property
    def passed(self):
        return self.residual.is_zero()

    def to_json(self):
        return {
            "generator": self.i + 1,
            "acting_element": self.X,
            "kind": self.kind,
            "W_i": [j + 1 for j in self.W_i],
            "W_i_proper": [j + 1 for j in self.W_i if j != self.i],
            "P": {str(j + 1): p.to_json() for j, p in self.P.items()},
            "P_text": {str(j + 1): p.format() for j, p in self.P.items()},
            "leading_coefficient": f"{self.leading.numerator}/{self.leading.denominator}",
            "residual_horizon": self.residual.K,
            "residual_zero": self.passed,
        }


def W_set(result: BoundaryValueResult, i):
    """W(i) = {j : w_i lambda - w_j lambda in 2P+}."""
    lam = result.eigen_weights
    return [j for j in range(result.r) if (lam[i] - lam[j]).in_lattice("2P+")]


def acting_elements(algebra):
    """Root-basis indices of the theta(n)-simple generators and of m."""
    off = algebra.n_dim + algebra.rank
    out = [(off + s, "theta") for s in algebra.simple_indices()]
    out += [(i, "m") for i in algebra.m_range]
    return out


def relation_certificate(result: BoundaryValueResult, i, X) -> RelationCertificate:
    """Certificate for the relation among v_j coming from Xt u_lambda = 0.

    ``X`` is a root-basis index: a theta(n) vector theta(E_alpha) (then
    Xt = E_alpha + theta(E_alpha) lies in k) or an m vector (then Xt = X).
    """
    mod = result.module
    alg = mod.algebra
    K = result.K
    n, l = alg.n_dim, alg.rank
    off = n + l
    if X in alg.k_range:
        s = X - off
        alpha = alg.root_weights[s]
        unit_E = tuple(int(t == s) for t in range(alg.dim))
        unit_F = tuple(int(t == X) for t in range(alg.dim))
        Xt = TruncatedSeries(alg, K, {unit_E: 1, unit_F: -1}, "P")
        shift = alpha
        kind = "theta"
        # theta(E_alpha) = -F_alpha in the catalog realization
        lead_mono, lead_sign = unit_F, -1
    elif X in alg.m_range:
        unit = tuple(int(t == X) for t in range(alg.dim))
        Xt = TruncatedSeries(alg, K, {unit: 1}, "P")
        shift = Weight.zero(l)
        kind = "m"
        lead_mono, lead_sign = unit, 1
    else:
        raise ValueError("X must index a theta(n) or m basis vector")
    A0 = result.A[i].constant_term()
    if A0 == 0:
        raise SingularWeightError(f"A_0 of generator {i + 1} vanishes; lambda is not regular")
    W_i = W_set(result, i)
    lam = result.eigen_weights
    P = {}
    residual = None
    for j in range(result.r):
        full = series_multiply(Xt, result.A[j])
        comp = series_component(full, lam[i] - lam[j] - shift)
        if comp.is_zero():
            continue
        if j not in W_i:
            raise VerificationError(f"P_{i + 1}{j + 1} nonzero outside W({i + 1})")
        P[j] = comp
        term = act_series(comp, result.v[j])
        residual = term if residual is None else residual + term
    if residual is None:
        residual = SphericalElement(mod, {}, K - 1)
    lead = P.get(i)
    got = {m: c for m, c in lead.terms.items() if not any(m[:n])} if lead is not None else {}
    if got != {lead_mono: lead_sign * A0}:
        raise VerificationError(f"height-0 part of P_{i + 1}{i + 1} is not A_0 times the acting element")
    return RelationCertificate(i, alg.labels_root[X], kind, P, residual, A0, W_i)


def all_certificates(result: BoundaryValueResult):
    alg = result.module.algebra
    return [relation_certificate(result, i, X) for i in range(result.r) for X, _ in acting_elements(alg)]


# ---------------------------------------------------------------------------
# filtration and the direct-sum criterion
# ---------------------------------------------------------------------------


def direct_sum_criterion(algebra, lam):
    """For each w != e, whether w lambda - lambda lies in 2P."""
    rows = []
    for idx, w in enumerate(algebra.weyl):
        if idx == 0:
            continue
        d = algebra.act(w, lam) - lam
        rows.append({"weyl_index": idx, "difference": d.to_json(), "in_2P": d.in_lattice("2P")})
    return {"passes": not any(r["in_2P"] for r in rows), "differences": rows}


def filtration_report(result: BoundaryValueResult, certificates=None):
    """Chain V_1 > ... > V_{r+1} = 0 with per-step witnesses."""
    mod = result.module
    alg = mod.algebra
    r = result.r
    if certificates is None:
        certificates = all_certificates(result)
    steps = []
    structural = True
    for i in range(r):
        # off-diagonal Q entries in row i may only point to later generators
        q_ok = all(
            result.Q[k][i][j].is_zero() for k in range(alg.rank) for j in range(r) if j < i
        )
        certs = [c for c in certificates if c.i == i]
        c_ok = all(c.passed and all(j >= i for j in c.P) for c in certs)
        structural = structural and q_ok and c_ok
        mu = result.eigen_weights[i] - alg.rho
        steps.append(
            {
                "step": i + 1,
                "verma_highest_weight": mu.to_json(),
                "eigenvalues": [str(alg.evaluate(result.eigen_weights[i], k)) for k in range(alg.rank)],
                "a_action_into_next": q_ok,
                "relations_into_next": c_ok,
                "W_i": [j + 1 for j in W_set(result, i)],
                "W_i_proper": [j + 1 for j in W_set(result, i) if j != i],
            }
        )
    crit = direct_sum_criterion(alg, mod.lam)
    if crit["passes"]:
        conclusion = "direct sum"
    else:
        conclusion = "extension undetermined by the criterion; see splitting_test"
    return {
        "length": r,
        "steps": steps,
        "structural_checks": structural,
        "criterion": crit,
        "conclusion": conclusion,
    }


# ---------------------------------------------------------------------------
# weight multiplicities
# ---------------------------------------------------------------------------


def kostant_partition(algebra, mu: Weight):
    """Number of ways to write mu as a sum of positive roots with multiplicity."""
    roots = list(algebra.root_weights)  # one entry per root vector
    memo = {}

    def count(k, rest):
        if rest.is_zero():
            return 1
        if k == len(roots) or any(c < 0 for c in rest.coords):
            return 0
        key = (k, rest)
        if key in memo:
            return memo[key]
        total = 0
        cur = rest
        while all(c >= 0 for c in cur.coords):
            total += count(k + 1, cur)
            cur = cur - roots[k]
        memo[key] = total
        return total

    if any(c < 0 for c in mu.coords) or any(Fraction(c).denominator != 1 for c in mu.coords):
        return 0
    return count(0, mu)


def formal_character(result: BoundaryValueResult, K):
    """Weight multiplicities of the ambient module against the Verma sum.

    Left side enumerates monomials E^m in each Harm eigen-block; right side is
    the Kostant partition count shifted by rho + w lambda.
    """
    mod = result.module
    alg = mod.algebra
    hs = [int(w.height()) for w in alg.root_weights]
    ambient = {}
    for lam_j in result.eigen_weights:
        for m in product(*[range(K // h + 1) for h in hs]):
            if sum(e * h for e, h in zip(m, hs)) > K:
                continue
            w = lam_j + mod.n_weight(m)
            ambient[w] = ambient.get(w, 0) + 1
    verma = {}
    for w in ambient:
        total = 0
        for lam_j in result.eigen_weights:
            d = w - lam_j
            if d.height() <= K:
                total += kostant_partition(alg, d)
        verma[w] = total
    rows = sorted(ambient, key=lambda w: (w.height(), w.coords))
    return {
        "K": K,
        "rows": [{"weight": w.to_json(), "ambient": ambient[w], "verma_sum": verma[w]} for w in rows],
        "agree": all(ambient[w] == verma[w] for w in rows),
    }


def character_multiplicity(table, weight: Weight):
    for row in table["rows"]:
        if row["weight"] == weight.to_json():
            return row["ambient"], row["verma_sum"]
    return 0, 0


# ---------------------------------------------------------------------------
# splitting detector
# ---------------------------------------------------------------------------


def _n_monos(alg, mu, K):
    hs = [int(w.height()) for w in alg.root_weights]
    out = []
    for m in product(*[range(K // h + 1) for h in hs]):
        w = Weight.zero(alg.rank)
        for e, rw in zip(m, alg.root_weights):
            if e:
                w = w + rw * e
        if w == mu:
            out.append(m)
    return out


def _split_system(result, i, K):
    """Constraint rows for u = v_i + sum c E^m v_j at exact weight lambda_i."""
    mod = result.module
    alg = mod.algebra
    n = alg.n_dim
    lam = result.eigen_weights
    pad = (0,) * (alg.dim - n)
    v = [x.truncate(K) for x in result.v]
    unknowns = []
    for j in range(i + 1, result.r):
        d = lam[i] - lam[j]
        if not d.in_lattice("P+"):
            continue
        for m in _n_monos(alg, d, K):
            s = TruncatedSeries(alg, K, {m + pad: 1}, "P")
            unknowns.append(((m, j), act_series(s, v[j])))
    eng_i = engine(alg.name, "iwasawa")
    eng_r = engine(alg.name, "root")
    ops = []
    for k in range(alg.rank):
        H = NormalOrderedElement.generator(eng_i, n + k) - alg.evaluate(lam[i], k)
        ops.append(H)
    for idx in alg.k_range:
        ops.append(NormalOrderedElement.generator(eng_r, idx))
    for idx in alg.m_range:
        ops.append(NormalOrderedElement.generator(eng_r, idx))
    rows = []
    for op in ops:
        base = mod.act(op, v[i])
        cols = [mod.act(op, x) for _, x in unknowns]
        horizon = min([base.K] + [c.K for c in cols])
        keys = set(base.terms)
        for c in cols:
            keys |= set(c.terms)
        for key in sorted(keys):
            if mod.height(key[0]) > horizon:
                continue
            rows.append(([c.terms.get(key, Fraction(0)) for c in cols], -base.terms.get(key, Fraction(0))))
    return [u for u, _ in unknowns], rows


def splitting_test(result: BoundaryValueResult, i, K=None, ladder=(8, 10, 12)):
    """Look for an exact eigenvector lifting v_i that theta(n) and m kill.

    Non-split verdicts require a rank-stable inconsistent system over every
    horizon in ``ladder`` that does not exceed K.
    """
    mod = result.module
    alg = mod.algebra
    K = result.K if K is None else K
    if K > result.K:
        raise TruncationError(f"result known to height {result.K}, asked for {K}", required=K)
    lam = result.eigen_weights
    need = max(
        [int((lam[i] - lam[j]).height()) for j in range(result.r) if (lam[i] - lam[j]).in_lattice("P+") and j != i],
        default=0,
    )
    # the operators lower height by at most the largest root height
    need += max(int(w.height()) for w in alg.root_weights)
    if K < need:
        return {"verdict": INCONCLUSIVE, "reason": f"horizon {K} below required {need}", "required": need}
    runs = []
    for Kp in sorted({k for k in ladder if need <= k <= K} | {K}):
        unknowns, rows = _split_system(result, i, Kp)
        mat = [row for row, _ in rows]
        rhs = [b for _, b in rows]
        if unknowns:
            sol = solve(mat, rhs) if mat else [Fraction(0)] * len(unknowns)
            rk = rank(mat) if mat else 0
            rk_aug = rank([row + [b] for row, b in rows]) if mat else 0
        else:
            sol = [] if all(b == 0 for b in rhs) else None
            rk = 0
            rk_aug = 0 if sol is not None else 1
        runs.append(
            {
                "K": Kp,
                "unknowns": [[list(m), j + 1] for (m, j) in unknowns],
                "equations": len(rows),
                "rank": rk,
                "augmented_rank": rk_aug,
                "solvable": sol is not None,
                "solution": None if sol is None else [str(x) for x in sol],
            }
        )
    last = runs[-1]
    if last["solvable"]:
        verdict = SPLITS
    else:
        # a non-split verdict needs the same ranks over at least two horizons
        ranks = {(r["rank"], r["augmented_rank"]) for r in runs}
        stable = len(runs) >= 2 and len(ranks) == 1 and not any(r["solvable"] for r in runs)
        verdict = DOES_NOT_SPLIT if stable else INCONCLUSIVE
    return {"verdict": verdict, "generator": i + 1, "K": K, "required": need, "runs": runs}


def open_question_probe(result: BoundaryValueResult, K=None):
    """Compare the detector with the two rank-one statements it could contradict.

    With alpha = beta/2 (so alpha(H) = 1 for the Chevalley H) write
    lambda = r*alpha.  Integer claim: for integer r the sequence does not
    split.  Lattice criterion: w lambda - lambda outside 2P gives a direct sum,
    with P generated by beta = 2*alpha.
    """
    mod = result.module
    alg = mod.algebra
    if alg.rank != 1:
        raise ValueError("the probe is defined for rank-one entries")
    split = splitting_test(result, 0, K)
    r_val = 2 * mod.lam.coords[0]
    claim = DOES_NOT_SPLIT if r_val.denominator == 1 else None
    crit = direct_sum_criterion(alg, mod.lam)
    verdict = split["verdict"]
    decided = verdict in (SPLITS, DOES_NOT_SPLIT)

    def agree(pred):
        if pred is None or not decided:
            return None
        return (pred == SPLITS) == (verdict == SPLITS)

    crit_pred = SPLITS if crit["passes"] else None
    return {
        "r": f"{r_val.numerator}/{r_val.denominator}",
        "detector": verdict,
        "integer_claim": "does not split" if claim else "no claim",
        "agrees_with_integer_claim": agree(claim),
        "lattice_criterion": "direct sum" if crit["passes"] else "not applicable",
        "agrees_with_lattice_criterion": agree(crit_pred),
        "claims_conflict": claim is not None and crit_pred is not None,
        "splitting": split,
    }
