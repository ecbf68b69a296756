"""Report sections and the JSON report document."""

from __future__ import annotations

import json

from .analysis import all_certificates, filtration_report, formal_character, open_question_probe, splitting_test
from .boundary import BoundaryValueResult
from .cache import SCHEMA_VERSION
from .enveloping import chi, chi1, find_invariants, is_weyl_invariant, validated_shift
from .liedata import CATALOG_NAMES, load_algebra
from .spherical import INVARIANT_DEGREE, SphericalModule


def a_names(algebra):
    return ["H"] if algebra.rank == 1 else [f"H{k + 1}" for k in range(algebra.rank)]


def catalog_section():
    rows = []
    for name in CATALOG_NAMES:
        alg = load_algebra(name)
        s = alg.summary()
        rows.append({"name": name, "rank": s["rank"], "dim": s["dim"], "weyl_order": s["weyl_order"], "rho": s["rho"]})
    return rows


def invariants_section(name, max_degree=None):
    alg = load_algebra(name)
    max_degree = INVARIANT_DEGREE[name] if max_degree is None else max_degree
    names = a_names(alg)
    out = []
    for z in find_invariants(name, max_degree):
        p = chi(z)
        out.append(
            {
                "degree": z.degree(),
                "element": z.format(),
                "chi1": chi1(z).format(names),
                "chi": p.format(names),
                "chi_json": p.to_json(),
                "weyl_invariant": is_weyl_invariant(p, alg),
            }
        )
    return {"algebra": name, "max_degree": max_degree, "rho_shift_sign": validated_shift(name), "invariants": out}


def spherical_section(mod: SphericalModule):
    return mod.summary()


def boundary_section(res: BoundaryValueResult):
    out = res.summary()
    out["verification"] = getattr(res, "verification", None)
    return out


def theorem4_section(res: BoundaryValueResult, certificates=None):
    certs = all_certificates(res) if certificates is None else certificates
    return {"certificates": [c.to_json() for c in certs], "all_residuals_zero": all(c.passed for c in certs)}


def splitting_section(res: BoundaryValueResult, generator=0, K=None):
    if res.module.algebra.rank == 1 and generator == 0:
        return open_question_probe(res, K)
    return splitting_test(res, generator, K)


def make_document(command, config, sections, timing=None, error=None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input": config,
        "sections": sections,
        "timing": timing or {},
    }
    if error is not None:
        doc["error"] = error
    return doc


def serialize(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def parse(text):
    return json.loads(text)
