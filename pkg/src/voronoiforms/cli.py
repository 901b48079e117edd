"""Exact lattice-form analyses: minima, perfection, stars, L-type scans.

Exit codes: 0 success, 1 reproduction failure, 2 input error, 3 domain error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import dataset as D
from .delaunay import NotDelaunay, RankDeficient, WindowOverflow, build_tiling, homology_classes
from .exactgeom import frac
from .ltype import DenominatorCap, commensurate, scan_segment
from .qform import (
    DimensionMismatch,
    NotEutactic,
    NotPositiveDefinite,
    ParseError,
    eutaxy,
    format_form,
    is_perfect,
    ldl,
    minima,
    parse_form,
)
from .serialize import dumps, star_export, vec
from .symmetry import automorphism_group

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3
CORRUPTIONS = ("U_STAR_INV", "F_E6", "P1")  # test hook: perturb one embedded constant


class InputError(Exception):
    pass


def _read_form(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    return parse_form(text)


def _pd(Q):
    ldl(Q)  # raises NotPositiveDefinite
    return Q


def _vectors(vs) -> list[str]:
    return [vec(v) for v in sorted(vs)]


# ---------------------------------------------------------------------------
# subcommands: each returns (payload dict, text lines, exit code)


def cmd_minima(args):
    Q = _pd(_read_form(args.form))
    r = minima(Q)
    payload = {"min": r.min_value, "minimal_vectors": sorted(r.minimal_vectors), "count": len(r.minimal_vectors),
               "second_min": r.second_min, "long_vectors": sorted(r.long_vectors), "long_count": len(r.long_vectors)}
    text = [f"m = {r.min_value}", f"minimal vectors ({len(r.minimal_vectors)}):", *_vectors(r.minimal_vectors),
            f"second minimum = {r.second_min}", f"long vectors ({len(r.long_vectors)}):", *_vectors(r.long_vectors)]
    return payload, text, EXIT_OK


def cmd_perfect(args):
    Q = _pd(_read_form(args.form))
    c = is_perfect(Q)
    payload = {"perfect": c.perfect, "rank": c.rank, "dimension": c.dimension}
    return payload, [f"perfect: {c.perfect} (rank {c.rank} of {c.dimension})"], EXIT_OK


def cmd_eutaxy(args):
    Q = _pd(_read_form(args.form))
    e = eutaxy(Q)
    w = sorted(e.weights.items())
    payload = {"eutactic": True, "uniform": e.is_uniform(), "weights": [[v, x] for v, x in w]}
    text = [f"eutactic, uniform weights: {e.is_uniform()}", *(f"{vec(v)}  {x}" for v, x in w)]
    return payload, text, EXIT_OK


def cmd_autgroup(args):
    Q = _pd(_read_form(args.form))
    G = automorphism_group(Q)
    gens = [g.tolist() for g in G.generators]
    payload = {"order": G.order, "generators": gens}
    text = [f"order {G.order}", f"{len(gens)} generators:"] + [str(g) for g in gens]
    return payload, text, EXIT_OK


def cmd_star(args):
    Q = _pd(_read_form(args.form))
    T = build_tiling(Q, args.window_cap)
    st = T.star()
    classes = homology_classes(st)
    payload = {"cells": len(st), "vertex_counts": dict(sorted(st.vertex_counts().items())),
               "homology_classes": len(classes), "translation_classes": len(T.classes),
               "faces_at_origin": st.faces_at_origin(),
               "star": [{"vertices": list(c.vertices), "c": c.certificate[0], "p": list(c.certificate[1])}
                        for c in st.cells]}
    text = star_export(st).splitlines() if args.export else [
        f"{len(st)} cells, vertex counts {dict(sorted(st.vertex_counts().items()))}",
        f"{len(classes)} homology classes, {len(T.classes)} cell classes up to translation and inversion",
        f"faces through the origin by dimension: {st.faces_at_origin()}",
    ]
    return payload, text, EXIT_OK


def cmd_commensurate(args):
    Q1 = _pd(_read_form(args.form_a))
    Q2 = _pd(_read_form(args.form_b))
    v = commensurate(Q1, Q2)
    payload = {"commensurate": v.commensurate}
    text = [f"commensurate: {v.commensurate}"]
    if v.witness:
        c1, c2, x = v.witness
        payload["witness"] = {"cell_a": list(c1), "cell_b": list(c2), "vertex": list(x)}
        text.append(f"non-integral vertex {vec(x)} of the intersection of a {len(c1)}-vertex and a {len(c2)}-vertex cell")
    elif v.intersection_star:
        payload["intersection_cells"] = [list(c) for c in v.intersection_star]
        text.append(f"{len(v.intersection_star)} common-refinement cell classes")
    return payload, text, EXIT_OK


def _progress(args):
    return (lambda msg: print(msg, file=sys.stderr, flush=True)) if args.verbose else None


def cmd_scan(args):
    Q0 = _pd(_read_form(args.form_a))
    Q1 = _pd(_read_form(args.form_b))
    r = scan_segment(Q0, Q1, denominator_cap=args.denominator_cap, window_cap=args.window_cap, progress=_progress(args))
    payload = {
        "endpoints": [Q0, Q1],
        "breakpoints": r.breakpoints,
        "intervals": [{"t": s.label(), "digest": s.digest, "classes": s.n_classes, "vertex_census": s.census}
                      for s in r.intervals],
        "walls": [[t, label] for t, label, _ in r.wall_crossings],
        "certified": r.certified,
    }
    text = [f"breakpoints: {[str(b) for b in r.breakpoints]}"]
    text += [f"  {s.label():>14}  {s.digest}  {s.n_classes} classes  {s.census}" for s in r.intervals]
    text += [f"wall at t={t}: {label}" for t, label, _ in r.wall_crossings]
    text.append(f"certified: {r.certified}")
    return payload, text, EXIT_OK


def cmd_dataset(args):
    if args.action == "verify":
        rep = D.verify_dataset(args.corrupt)
        payload = {"passed": rep.passed, "checks": [[c.name, c.passed, c.detail] for c in rep.checks]}
        text = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  {c.detail}" for c in rep.checks]
        return payload, text, EXIT_OK if rep.passed else EXIT_FAIL
    forms = {"pi_E6": D.PI_E6, "pi_E6_star": D.PI_E6_STAR, "phi_E6": D.PHI_E6, "phi_E6_star": D.PHI_E6_STAR}
    matrices = {"U_star": D.U_STAR, "U_star_inv": D.U_STAR_INV, "P_R_printed": D.P_R_PRINTED, "k0": D.K0,
                "i12": D.I12, "i1": D.I1}
    families = {"P1": D.P1, "P2": D.P2, "P3": D.P3, "S1": D.S1, "S2": D.S2, "S3": D.S3, "L_b": D.L_B}
    vertex_lists = {"G": D.G_VERTICES, "G_star": D.G_STAR_VERTICES, "Q": D.Q_VERTICES, "R": D.R_VERTICES,
                    "V_G": D.V_G, "V_Q": D.V_Q}
    payload = {"m": D.M, "forms": forms, "matrices": matrices,
               "families": {k: sorted(v) for k, v in families.items()},
               "vertex_lists": {k: sorted(v) for k, v in vertex_lists.items()}}
    text = [f"m = {D.M}"]
    for k, Q in forms.items():
        text += [f"# form {k}", format_form(Q).rstrip("\n")]
    for k, A in matrices.items():
        text += [f"# matrix {k}"] + [" ".join(str(x) for x in row) for row in A.rows]
    for k, vs in {**families, **vertex_lists}.items():
        text += [f"# vectors {k} ({len(vs)})"] + _vectors(vs)
    return payload, text, EXIT_OK


# sections sharing a context are grouped so heavy objects are computed once
_SECTIONS = [("D",), ("1", "2", "3", "4"), ("5", "6", "7", "8", "9", "10"), ("11",)]


def _run_group(keys, corrupt, seed, window_cap):
    from .reproduce import Context, dataset_checks, run_criterion

    ctx = Context(window_cap=window_cap)
    out = []
    for k in keys:
        out.extend(dataset_checks(ctx, corrupt) if k == "D" else run_criterion(k, ctx, seed))
    return out


def cmd_reproduce(args):
    from .reproduce import verdict

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            futs = [ex.submit(_run_group, g, args.corrupt, args.seed, args.window_cap) for g in _SECTIONS]
            checks = [c for f in futs for c in f.result()]
    else:
        checks = [c for g in _SECTIONS for c in _run_group(g, args.corrupt, args.seed, args.window_cap)]
    ok = verdict(checks)
    payload = {"passed": ok, "checks": [{"criterion": c.criterion, "name": c.name, "passed": c.passed,
                                         "detail": c.detail, "informational": c.informational} for c in checks]}
    text = []
    for c in checks:
        tag = "INFO" if c.informational else ("PASS" if c.passed else "FAIL")
        text.append(f"[{c.criterion:>2}] {tag}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    failed = [c for c in checks if not c.passed and not c.informational]
    text.append(f"{len(checks) - len(failed)} of {len(checks)} checks passed" + (
        "; failing: " + "; ".join(c.name for c in failed) if failed else ""))
    return payload, text, EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_rational(s: str) -> Fraction:
    v = frac(Fraction(s))
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--jobs", type=_positive_int, default=1)
    common.add_argument("--window-cap", type=_positive_rational, default=None,
                        help="largest quadric radius allowed when searching for lattice points")
    common.add_argument("--denominator-cap", type=_positive_int, default=2 ** 40)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    p = argparse.ArgumentParser(prog="voronoiforms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, nforms in (("minima", cmd_minima, 1), ("perfect", cmd_perfect, 1), ("eutaxy", cmd_eutaxy, 1),
                             ("autgroup", cmd_autgroup, 1), ("star", cmd_star, 1),
                             ("commensurate", cmd_commensurate, 2), ("scan", cmd_scan, 2)):
        sp = sub.add_parser(name, parents=[common])
        if nforms == 1:
            sp.add_argument("form")
        else:
            sp.add_argument("form_a")
            sp.add_argument("form_b")
        if name == "star":
            sp.add_argument("--export", action="store_true", help="text output in the star export format")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("dataset", parents=[common])
    sp.add_argument("action", choices=["dump", "verify"], nargs="?", default="dump")
    sp.add_argument("--corrupt", default=None, choices=CORRUPTIONS, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_dataset)
    sp = sub.add_parser("reproduce", parents=[common])
    sp.add_argument("--corrupt", default=None, choices=CORRUPTIONS, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        payload, text, code = args.func(args)
    except (InputError, ParseError, DimensionMismatch) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotPositiveDefinite, NotEutactic, NotDelaunay, RankDeficient, WindowOverflow, DenominatorCap) as exc:
        print(f"domain error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    out = dumps(payload) if args.format == "json" else "\n".join(text) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
