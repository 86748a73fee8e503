"""Command-line front end.

Exit codes: 0 success, 2 a valid run whose finding is negative (refutation,
unsolvable pair, unverified basis, table mismatch, failed criterion), 1 error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .algebra import chi, classify_shape
from .catalog import (
    CatalogError, build, family, list_families, load_algebra, parse_combination, product_lines,
)
from .derivations import derivation_space
from .local import locder_space, verify_local
from .reports import (
    FORMATS, der_report, locder_report, render_grid, tables_report, to_csv, to_json, twolocal_doc,
    twolocal_report, verdict_doc, write_certificates,
)
from .scalar import ZERO, parse_scalar
from .tables import DEFAULT_ALPHA_SWEEP, compare, family_rows, five_dim_rows, three_dim_rows
from .twolocal import TwoLocalMap, additivity_witness, check_two_local, rigidity_check

EXT = {"table": "txt", "json-like": "json", "csv": "csv"}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    strata: str = "auto"
    samples: int = 1000
    fmt: str = "table"
    alphas: tuple | None = None
    out: Path | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("--samples must be >= 1")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        alphas = getattr(args, "alpha_sweep", None)
        return cls(seed=args.seed, strata=getattr(args, "strata", None) or "auto",
                   samples=getattr(args, "samples", 1000), fmt=args.format,
                   alphas=alphas, out=Path(args.out) if args.out else None)


def emit(text: str, cfg: RunConfig, name: str) -> None:
    sys.stdout.write(text)
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / f"{name}.{EXT[cfg.fmt]}").write_text(text, encoding="utf-8")


def resolve_algebra(args):
    if args.algebra:
        if args.id:
            raise CatalogError("give either a catalogue id or --algebra, not both")
        return load_algebra(args.algebra)
    if not args.id:
        raise CatalogError("an algebra is required (catalogue id or --algebra FILE)")
    return build(args.id, args.n, args.alpha)


# -- subcommands --------------------------------------------------------------

def cmd_catalog(args, cfg: RunConfig) -> int:
    if args.action == "list":
        fams = list_families()
        if cfg.fmt == "json-like":
            text = to_json([{"family": f, "dimension": a, "parameter": c} for f, a, c in fams])
        elif cfg.fmt == "csv":
            text = to_csv(("family", "dimension", "parameter"), fams)
        else:
            text = render_grid(("family", "dimension", "parameter"),
                               [(f, a, c or "-") for f, a, c in fams])
            text += f"{len(fams)} families\n"
        emit(text, cfg, "catalog")
        return 0
    if not args.id:
        raise CatalogError("catalog show needs a family id")
    family(args.id)
    a = build(args.id, args.n, args.alpha)
    prods = [p.replace(" ", "") for p in product_lines(a)]
    if cfg.fmt == "json-like":
        text = to_json({"algebra": a.label, "n": a.n, "shape": classify_shape(a),
                        "chi": list(chi(a)), "products": prods})
    elif cfg.fmt == "csv":
        text = to_csv(("algebra", "product"), [(a.label, p) for p in prods])
    else:
        text = (f"algebra: {a.label}\ndim: {a.n}\nshape: {classify_shape(a)}\n"
                f"chi: {chi(a)}\nproducts: {', '.join(prods) or '(none)'}\n")
    emit(text, cfg, "catalog")
    return 0


def cmd_der(args, cfg: RunConfig) -> int:
    a = resolve_algebra(args)
    emit(der_report(derivation_space(a), cfg.fmt), cfg, "der")
    return 0


def parse_map(text: str, n: int) -> list:
    """``"e2=e1; e3=2*e3"`` -> matrix with the given images (unlisted basis vectors map to 0)."""
    m = [[ZERO] * n for _ in range(n)]
    for part in filter(None, (p.strip() for p in text.split(";"))):
        lhs, sep, rhs = part.partition("=")
        lhs = lhs.strip()
        if not sep or not lhs.startswith("e") or not lhs[1:].isdigit():
            raise ValueError(f"bad map entry {part!r}; expected e<j>=<combination>")
        j = int(lhs[1:])
        if not 1 <= j <= n:
            raise ValueError(f"basis index {j} out of range 1..{n}")
        for i, c in enumerate(parse_combination(rhs, n)):
            m[i][j - 1] = c
    return m


def cmd_locder(args, cfg: RunConfig) -> int:
    a = resolve_algebra(args)
    if args.map:
        delta = parse_map(args.map, a.n)
        v = verify_local(delta, a, cfg.strata, seed=cfg.seed)
        doc = verdict_doc(v, a.label)
        if cfg.fmt == "json-like":
            text = to_json(doc)
        elif cfg.fmt == "csv":
            text = to_csv(("algebra", "status", "witness"),
                          [(a.label, v.status, " ".join(doc.get("witness", [])))])
        else:
            lines = [f"algebra: {a.label}", f"verdict: {v.status}"]
            lines += [f"  {c.stratum}: rank E = {c.rank_e}, rank [E|Dx] = {c.rank_aug}"
                      for c in v.checks if not c.verified]
            if v.witness is not None:
                lines.append(f"witness x = ({', '.join(doc['witness'])})")
                cert = doc["certificate"]
                lines.append(f"functional w = ({', '.join(cert['functional'])}): "
                             f"w.ev_x = 0, w.Delta(x) = {cert['functional_on_rhs']}")
            elif v.certificate is not None:
                lines.append(f"component: {doc['certificate']['component']}")
                lines.append(f"residuals: {', '.join(doc['certificate']['residuals'])}")
            lines.append(f"loci checked: {len(v.checks)}; not covered: {v.uncovered}")
            text = "\n".join(lines) + "\n"
        emit(text, cfg, "locder")
        return 0 if v.verified else 2
    sp = locder_space(a, seed=cfg.seed, rounds=args.rounds, policy=cfg.strata)
    emit(locder_report(sp, cfg.fmt), cfg, "locder")
    return 0 if sp.all_verified else 2


def cmd_twolocal(args, cfg: RunConfig) -> int:
    a = resolve_algebra(args)
    s = derivation_space(a)
    m = TwoLocalMap.f_construction(a, args.source, args.target)
    rep = check_two_local(m, s, samples=cfg.samples, seed=cfg.seed, degenerate=args.degenerate)
    w = additivity_witness(m, seed=cfg.seed)
    rig = rigidity_check(a, 1, s)
    doc = twolocal_doc(a.label, m.describe(), rep, w, rig)
    emit(twolocal_report(doc, cfg.fmt), cfg, "twolocal")
    return 0 if rep.ok else 2


def parse_range(text: str) -> tuple[int, int]:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            lo, hi = int(lo), int(hi)
            break
    else:
        lo = hi = int(text)
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def cmd_tables(args, cfg: RunConfig) -> int:
    lo, hi = parse_range(args.n_range)
    sections = {}
    wanted = set(args.section)
    if "three" in wanted:
        sections["3-dimensional algebras"] = [
            compare(r, "fixed", cfg.seed, cfg.strata) for r in three_dim_rows(cfg.alphas)]
    if "five" in wanted:
        sections["5-dimensional algebras"] = [
            compare(r, "fixed", cfg.seed, cfg.strata) for r in five_dim_rows(cfg.alphas)]
    if "families" in wanted:
        sections["families in n"] = [
            compare(r, "formula", cfg.seed, cfg.strata)
            for r in family_rows(hi, lo, cfg.alphas)]
    results = [r for rs in sections.values() for r in rs]
    paths = write_certificates(results, cfg.out)
    emit(tables_report(sections, cfg.fmt, paths), cfg, "tables")
    return 0 if all(r.status == "match" for r in results if r.kind == "formula") else 2


def cmd_check(args, cfg: RunConfig) -> int:
    from .acceptance import run_all

    numbers = [int(k) for k in args.criteria.split(",")] if args.criteria else None
    lines = []
    ok = True
    for res in run_all(numbers):
        lines.append(res.line())
        lines += [f"    {d}" for d in res.details]
        ok &= res.passed
        sys.stdout.write("\n".join(lines[-1 - len(res.details):]) + "\n")
        sys.stdout.flush()
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "check.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0 if ok else 2


# -- parser -------------------------------------------------------------------

def _alpha_list(text: str) -> tuple:
    vals = tuple(v.strip() for v in text.split(",") if v.strip())
    for v in vals:
        parse_scalar(v)
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="derivkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--out", metavar="DIR", help="also write the report (and certificates) here")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("id", nargs="?", help="catalogue family id (see `catalog list`)")
    alg.add_argument("--n", type=int, help="dimension for families in n")
    alg.add_argument("--alpha", help="parameter value, e.g. 2, -1/3, i, 1+2i")
    alg.add_argument("--algebra", metavar="PATH", help="YAML file with structure constants")

    strata = argparse.ArgumentParser(add_help=False)
    strata.add_argument("--strata", choices=("full", "prefix"),
                        help="coordinate zero-patterns to certify on (default: full for n<=8)")

    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("catalog", parents=[common], help="list families or show one algebra")
    c.add_argument("action", choices=("list", "show"))
    c.add_argument("id", nargs="?")
    c.add_argument("--n", type=int)
    c.add_argument("--alpha")
    c.set_defaults(func=cmd_catalog)

    d = sub.add_parser("der", parents=[common, alg], help="derivation algebra")
    d.set_defaults(func=cmd_der)

    ld = sub.add_parser("locder", parents=[common, alg, strata],
                        help="local derivations, or verify one map with --map")
    ld.add_argument("--rounds", type=int, default=3)
    ld.add_argument("--map", help='linear map to verify, e.g. "e2=e1; e3=2*e3"')
    ld.set_defaults(func=cmd_locder)

    tl = sub.add_parser("twolocal", parents=[common, alg], help="2-local f-construction")
    tl.add_argument("--samples", type=int, default=1000)
    tl.add_argument("--degenerate", type=int, default=50, help="pairs with x_s y_t = x_t y_s")
    tl.add_argument("--source", type=int, help="index s of f(x_s, x_t) e_t (default 1)")
    tl.add_argument("--target", type=int, help="index t of f(x_s, x_t) e_t (default n)")
    tl.set_defaults(func=cmd_twolocal)

    t = sub.add_parser("tables", parents=[common, strata], help="compare with reference tables")
    t.add_argument("--n", dest="n_range", default="4..10", help="range for families, e.g. 4..10")
    t.add_argument("--alpha", dest="alpha_sweep", type=_alpha_list,
                   default=DEFAULT_ALPHA_SWEEP, help="comma-separated alpha sweep")
    t.add_argument("--section", type=lambda s: s.split(","), default=["three", "five", "families"],
                   help="comma-separated subset of three,five,families")
    t.set_defaults(func=cmd_tables)

    ch = sub.add_parser("check", parents=[common], help="run the acceptance criteria")
    ch.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    ch.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "section", None):
            unknown = set(args.section) - {"three", "five", "families"}
            if unknown:
                raise ValueError(f"unknown section(s): {', '.join(sorted(unknown))}")
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except (CatalogError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
