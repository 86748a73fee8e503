"""Rendering of engine results as a human table, a JSON document or CSV.

Machine formats contain no timings or other run-dependent data, so equal
inputs give byte-identical output.
"""
from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path

from .catalog import format_combination
from .derivations import DerivationSpace
from .local import LocalDerivationSpace, Verdict
from .scalar import Scalar, format_scalar, parse_scalar
from .tables import RowResult

FORMATS = ("table", "json-like", "csv")

TABLE_COLUMNS = ("family", "n", "alpha", "dim_der_computed", "dim_der_expected",
                 "dim_locder_computed", "dim_locder_expected", "status")


def to_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render_grid(header, rows) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")


def map_doc(m) -> list[str]:
    """A linear map as the images of the basis vectors, e.g. ``["e1 -> 2*e2", ...]``."""
    n = len(m)
    return [f"e{j + 1} -> {format_combination([m[i][j] for i in range(n)])}" for j in range(n)]


def vector_doc(x) -> list[str]:
    return [format_scalar(c) for c in x]


# -- single-algebra reports ---------------------------------------------------

def der_doc(s: DerivationSpace) -> dict:
    return {
        "algebra": s.ambient.label,
        "n": s.n,
        "dim_der": s.dim,
        "basis": [map_doc(b) for b in s.basis],
    }


def der_report(s: DerivationSpace, fmt: str) -> str:
    doc = der_doc(s)
    if fmt == "json-like":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(("algebra", "n", "dim_der"), [(doc["algebra"], doc["n"], doc["dim_der"])])
    out = [f"algebra: {doc['algebra']}", f"dim Der = {s.dim}"]
    for k, b in enumerate(s.basis, 1):
        out.append(f"D{k}: " + ", ".join(map_doc(b)))
    return "\n".join(out) + "\n"


def locder_doc(sp: LocalDerivationSpace) -> dict:
    return {
        "algebra": sp.ambient.label,
        "n": sp.ambient.n,
        "dim_der": sp.der.dim,
        "dim_locder": sp.dim,
        "policy": sp.policy,
        "all_verified": sp.all_verified,
        "basis": [{"map": map_doc(b), "status": st} for b, st in zip(sp.basis, sp.status)],
        "loci": [k.locus.describe() for k in sp.strata.kernels],
        "components": sp.strata.nonlinear_components(),
        "uncovered": sp.strata.uncovered(),
        "refinement": [
            {"point": e["point"], "dim": e["dim"],
             "coords": None if e["coords"] is None else vector_doc(e["coords"])}
            for e in sp.log
        ],
    }


def locder_report(sp: LocalDerivationSpace, fmt: str) -> str:
    doc = locder_doc(sp)
    if fmt == "json-like":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(("algebra", "n", "dim_der", "dim_locder", "all_verified"),
                      [(doc["algebra"], doc["n"], doc["dim_der"], doc["dim_locder"],
                        doc["all_verified"])])
    tail = "all basis verified" if sp.all_verified else (
        f"{sp.status.count('unverified')} basis element(s) unverified")
    out = [f"algebra: {doc['algebra']}", f"dim Der = {sp.der.dim}",
           f"dim LocDer = {sp.dim}, {tail}",
           f"policy: {sp.policy}; loci checked: {len(doc['loci'])}; "
           f"nonlinear components: {len(doc['components'])}"]
    for k, (b, st) in enumerate(zip(sp.basis, sp.status), 1):
        out.append(f"L{k} [{st}]: " + ", ".join(map_doc(b)))
    out.append(f"not covered: {doc['uncovered']}")
    return "\n".join(out) + "\n"


def verdict_doc(v: Verdict, label: str) -> dict:
    doc = {
        "algebra": label,
        "status": v.status,
        "checks": [{"locus": c.stratum, "rank_E": c.rank_e, "rank_E_aug": c.rank_aug,
                    "verified": c.verified} for c in v.checks],
        "uncovered": v.uncovered,
        "degenerate": list(v.degenerate),
    }
    if v.witness is not None:
        doc["witness"] = vector_doc(v.witness)
    if v.certificate is not None:
        doc["certificate"] = certificate_doc(v.certificate)
    return doc


def certificate_doc(cert: dict) -> dict:
    return {k: _scalars(v) for k, v in cert.items()}


def _scalars(v):
    if isinstance(v, (list, tuple)):
        return [_scalars(x) for x in v]
    if isinstance(v, (str, int, bool)) or v is None:
        return v
    if isinstance(v, Scalar):
        return format_scalar(v)
    return str(v)


def twolocal_doc(label: str, description: str, report, witness, rigidity) -> dict:
    doc = {
        "algebra": label,
        "map": description,
        "pairs_tested": report.tested - report.degenerate_tested,
        "degenerate_pairs_tested": report.degenerate_tested,
        "pairs_solvable": report.solvable,
        "failing": [{"x": vector_doc(f["x"]), "y": vector_doc(f["y"]), "kind": f["kind"]}
                    for f in report.failing[:10]],
        "failing_count": len(report.failing),
        "rigidity": {"status": rigidity.status, "generator": rigidity.generator,
                     "rank": rigidity.rank, "dim_der": rigidity.der_dim},
        "additivity_witness": None,
    }
    if witness is not None:
        doc["additivity_witness"] = {k: vector_doc(v) for k, v in witness.items()}
    return doc


def twolocal_report(doc: dict, fmt: str) -> str:
    if fmt == "json-like":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(("algebra", "map", "pairs_tested", "pairs_solvable", "additivity_witness",
                       "rigidity"),
                      [(doc["algebra"], doc["map"],
                        doc["pairs_tested"] + doc["degenerate_pairs_tested"],
                        doc["pairs_solvable"], doc["additivity_witness"] is not None,
                        doc["rigidity"]["status"])])
    total = doc["pairs_tested"] + doc["degenerate_pairs_tested"]
    w = doc["additivity_witness"]
    out = [f"algebra: {doc['algebra']}", f"map: {doc['map']}",
           f"{doc['pairs_solvable']}/{total} pairs solvable "
           f"({doc['degenerate_pairs_tested']} degenerate); "
           + ("additivity witness found" if w else "no additivity witness found"),
           f"rigidity at e{doc['rigidity']['generator']}: {doc['rigidity']['status']} "
           f"(rank {doc['rigidity']['rank']} of {doc['rigidity']['dim_der']})"]
    if w:
        out.append(f"  x = ({', '.join(w['x'])}), y = ({', '.join(w['y'])})")
        out.append(f"  nabla(x) + nabla(y) = "
                   f"({', '.join(_add(w['nabla_x'], w['nabla_y']))}) != "
                   f"nabla(x+y) = ({', '.join(w['nabla_x_plus_y'])})")
    for f in doc["failing"]:
        out.append(f"  unsolvable pair ({f['kind']}): x = ({', '.join(f['x'])}), "
                   f"y = ({', '.join(f['y'])})")
    return "\n".join(out) + "\n"


def _add(a, b):
    return [format_scalar(parse_scalar(p) + parse_scalar(q)) for p, q in zip(a, b)]


# -- tables -------------------------------------------------------------------

def row_key(r: RowResult) -> str:
    parts = [r.row.family, f"n{r.n}"]
    if r.row.alpha is not None:
        parts.append("alpha" + r.row.alpha)
    return slug("_".join(parts))


def table_record(r: RowResult, cert_path: str | None) -> dict:
    return {
        "family": r.row.family,
        "display": r.row.display,
        "n": r.n,
        "alpha": r.row.alpha or "",
        "kind": r.kind,
        "dim_der_computed": r.der_computed,
        "dim_der_expected": r.row.der,
        "dim_locder_computed": r.locder_computed,
        "dim_locder_expected": r.row.locder,
        "all_verified": r.all_verified,
        "status": r.status,
        "certificate": cert_path,
    }


def write_certificates(results, out_dir: Path | None) -> dict:
    """Write one JSON certificate per disagreeing row; returns key -> relative path."""
    paths = {}
    for r in results:
        cert = r.certificate()
        if cert is None:
            continue
        rel = f"certificates/{row_key(r)}.json"
        paths[row_key(r)] = rel
        if out_dir is not None:
            target = out_dir / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            doc = {"row": table_record(r, None), **{k: _scalars(v) for k, v in cert.items()}}
            target.write_text(to_json(doc), encoding="utf-8")
    return paths


def tables_report(sections: dict, fmt: str, cert_paths: dict) -> str:
    """``sections`` maps a section title to its list of RowResult."""
    records = {title: [table_record(r, cert_paths.get(row_key(r))) for r in rs]
               for title, rs in sections.items()}
    if fmt == "json-like":
        return to_json({"sections": records, "summary": summary(sections)})
    if fmt == "csv":
        rows = [[rec[c] for c in TABLE_COLUMNS] for recs in records.values() for rec in recs]
        return to_csv(TABLE_COLUMNS, rows)
    out = []
    for title, recs in records.items():
        out.append(f"== {title} ==")
        rows = [(rec["display"], rec["n"], rec["alpha"] or "-",
                 f"{rec['dim_der_computed']}/{rec['dim_der_expected']}",
                 f"{rec['dim_locder_computed']}/{rec['dim_locder_expected']}",
                 "yes" if rec["all_verified"] else "no", rec["status"],
                 rec["certificate"] or "") for rec in recs]
        out.append(render_grid(("algebra", "n", "alpha", "Der (got/exp)", "LocDer (got/exp)",
                                "verified", "status", "certificate"), rows))
    s = summary(sections)
    out.append(f"formula rows: {s['formula_match']}/{s['formula_rows']} match; "
               f"fixed rows: {s['fixed_match']}/{s['fixed_rows']} match, "
               f"{s['fixed_flagged']} flagged")
    return "\n".join(out) + "\n"


def summary(sections: dict) -> dict:
    rs = [r for rows in sections.values() for r in rows]
    formula = [r for r in rs if r.kind == "formula"]
    fixed = [r for r in rs if r.kind == "fixed"]
    return {
        "formula_rows": len(formula),
        "formula_match": sum(r.status == "match" for r in formula),
        "fixed_rows": len(fixed),
        "fixed_match": sum(r.status == "match" for r in fixed),
        "fixed_flagged": sum(r.status == "flagged" for r in fixed),
    }
