"""Command line front end: one subcommand per module plus the full pipeline report.

Exit codes: 0 success, 1 error, 2 red flag (rank deficiency or unequal
stabilized elementary divisors), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import covertop, jacobian, lattice, monodromy, netgeom, pencil, tube
from .config import RunConfig
from .errors import RankDeficient, VclabError

EXIT_OK, EXIT_ERROR, EXIT_RED_FLAG, EXIT_USAGE = 0, 1, 2, 64

CONVENTIONS = {
    "sheet_order": "roots of F(t0, y) sorted by (real, imaginary)",
    "loop_order": "counterclockwise angle of t_k - t0 from the direction +1, ties by modulus",
    "permutations": "p[i] is the sheet reached from sheet i; words act left to right",
    "intersection": "<a, b> = +1 when b crosses a from right to left (counterclockwise frame)",
    "symplectic_basis": "delta_1, gamma_1, ..., delta_g, gamma_g with <delta_i, gamma_i> = +1",
    "transvection": "T_c(x) = x + sign * <x, c> * c",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _cplx(z):
    return [float(complex(z).real), float(complex(z).imag)]


def _dump(doc):
    return json.dumps(doc, sort_keys=True)


# ---------------------------------------------------------------- pipeline


def _pipeline_front(spec_path, cfg: RunConfig):
    curve = pencil.load_curve(spec_path)
    branch = pencil.branch_points(curve, tol=cfg.precision)
    mdata = monodromy.monodromy_rep(curve, max_step=cfg.max_step, threads=cfg.threads,
                                    cache_dir=cfg.cache_dir, precision=cfg.precision)
    return curve, branch, mdata


def selfchecks():
    """Exact checks of the local models and the stable-submodule classifier."""
    hj = {f"{n}/{k}": list(netgeom.hj_expand(n, k).bs) for n, k in ((2, 1), (3, 2), (5, 3))}
    rel = {str(n): str(netgeom.cyclic_invariants(n).relation) for n in (2, 3)}
    split_ok = all(netgeom.quotient_splitting(N) == [1] + [0] * (N - 1) for N in range(1, 13))
    lat = covertop.SymplecticLattice.standard(2)
    gens = lattice.full_transvection_set(lat)
    alphas = [(1, 1, 0, 0), (2, 0, 0, 4), (0, 6, 0, 0), (3, -6, 9, 0)]
    agree = all(lattice.stable_saturation(a, lat).basis == lattice.orbit_closure(a, gens) for a in alphas)
    one = covertop.SymplecticLattice.standard(1)
    pl = lattice.pl_transvection(one.basis_vector("gamma1"), one.basis_vector("delta1"), 1, one).coords
    ok = (hj["2/1"] == [2] and hj["3/2"] == [2, 2] and split_ok and agree
          and rel == {"2": "u*w - v**2", "3": "u*w - v**3"})
    return {"hj": hj, "relations": rel, "quotient_splitting_ok": split_ok,
            "stable_matches_orbit_closure": agree, "transvection_gamma1_along_delta1": list(pl),
            "ok": ok}


def run_report(spec_path, cfg: RunConfig):
    """Full pipeline; returns (report document, exit code)."""
    red = []
    curve, branch, mdata = _pipeline_front(spec_path, cfg)
    doc = {"curve": curve.to_spec(), "curve_hash": curve.hash, "conventions": CONVENTIONS,
           "config": cfg.to_json()}
    doc["pencil"] = {"degree": curve.degree, "genus": curve.genus, "e": branch.e,
                     "branch_points": [_cplx(p) for p in branch.points],
                     "basepoint": _cplx(branch.basepoint),
                     "riemann_hurwitz": branch.e == 2 * (curve.degree + curve.genus - 1)}
    marked = monodromy.default_marked_pair(mdata) if mdata.e else None
    orbit = monodromy.pair_stabilizer(mdata, marked) if marked else None
    doc["monodromy"] = {
        "perms": [list(p) for p in mdata.perms],
        "product_identity": mdata.product() == monodromy.identity_perm(mdata.d),
        "transitive": monodromy.is_transitive(mdata.perms, mdata.d),
        "marked_pair": list(marked) if marked else None,
        "pair_orbit_index": orbit.index if orbit else 0,
        "stabilizer_generators": len(orbit.stabilizer_words) if orbit else 0,
    }
    cover = covertop.build_cover(mdata)
    symp = covertop.symplectic_reduce(cover)
    doc["cover"] = {"euler_characteristic": cover.euler_characteristic, "h1_rank": len(cover.h1_basis),
                    "faces": len(cover.faces), "pairing": [list(r) for r in cover.pairing],
                    "symplectic_change_of_basis": [list(r) for r in symp.change_of_basis]}
    rep = tube.tube_lattice(mdata, orbit, cover, cfg.max_word_len) if orbit else None
    if rep is not None:
        doc["tube"] = dict(rep.to_json(), words_tried=rep.words_tried, max_len=rep.max_len)
        if cover.genus and rep.m is None and all(rep.smith_form):
            red.append("stabilized elementary divisors are not all equal")
        if cover.genus and rep.m is None and not all(rep.smith_form):
            red.append("tube lattice is not of full rank within the word-length budget")
    if curve.genus:
        pdata = jacobian.periods(curve, cover, mdata.branch, tol=cfg.quad_tol,
                                 residual_tol=cfg.residual_tol, max_step=cfg.max_step)
        doc["periods"] = pdata.to_json()
        if curve.genus == 1:
            doc["periods"]["tau_reduced"] = _cplx(jacobian.reduce_tau(pdata.tau[0, 0]))
        try:
            rj = jacobian.ramification_jacobian(curve, pdata, rel_tol=cfg.rank_tol)
            doc["ramification"] = rj.to_json()
        except RankDeficient as exc:
            doc["ramification"] = {"error": str(exc),
                                   "null_vector": [_cplx(z) for z in exc.null_vector]}
            red.append("ramification matrix is rank deficient")
        prof = jacobian.bystander_derivative_profile(curve, 0, mdata.branch)
        doc["bystander"] = prof.to_json()
        pairs = jacobian.sample_base_points(mdata.branch, cfg.constancy_pairs, seed=cfg.seed)
        devs = [jacobian.fiber_sum_constancy(curve, pdata, a, b) for a, b in pairs]
        doc["abel_constancy"] = {"seed": cfg.seed, "pairs": [[_cplx(a), _cplx(b)] for a, b in pairs],
                                 "max_deviation": max(devs)}
    doc["selfchecks"] = selfchecks()
    if not doc["selfchecks"]["ok"]:
        red.append("local model or lattice self-check failed")
    doc["red_flags"] = red
    doc["status"] = "red_flag" if red else "ok"
    return doc, (EXIT_RED_FLAG if red else EXIT_OK)


# ---------------------------------------------------------------- subcommands


def _cmd_branch(args, cfg):
    curve = pencil.load_curve(args.spec)
    b = pencil.branch_points(curve, tol=cfg.precision)
    doc = {"degree": curve.degree, "genus": curve.genus, "shear": curve.shear, "e": b.e,
           "branch_points": [_cplx(p) for p in b.points], "basepoint": _cplx(b.basepoint)}
    text = "\n".join([f"d={curve.degree} g={curve.genus} e={b.e} t0={b.basepoint.real:.12g}"]
                     + [f"{p.real:+.12g} {p.imag:+.12g}i" for p in b.points])
    return doc, text, EXIT_OK


def _cmd_monodromy(args, cfg):
    curve, _, mdata = _pipeline_front(args.spec, cfg)
    doc = mdata.to_json(curve.hash)
    marked = monodromy.default_marked_pair(mdata) if mdata.e else None
    if marked:
        orbit = monodromy.pair_stabilizer(mdata, marked)
        doc.update(marked_pair=list(marked), pair_orbit_index=orbit.index,
                   stabilizer_words=[list(w) for w in orbit.stabilizer_words])
    text = "\n".join(f"sigma_{k + 1} = {list(p)}" for k, p in enumerate(mdata.perms))
    return doc, text, EXIT_OK


def _cmd_tube(args, cfg):
    _, _, mdata = _pipeline_front(args.spec, cfg)
    cover = covertop.build_cover(mdata)
    orbit = monodromy.pair_stabilizer(mdata, monodromy.default_marked_pair(mdata))
    rep = tube.tube_lattice(mdata, orbit, cover, cfg.max_word_len)
    doc = rep.to_json()
    code = EXIT_RED_FLAG if cover.genus and rep.m is None else EXIT_OK
    return doc, f"divisors={list(rep.smith_form)} m={rep.m} stabilized_at={rep.stabilized_at}", code


def _cmd_stable(args, cfg):
    try:
        alpha = [int(x) for x in args.alpha.split(",")]
    except ValueError as exc:
        raise UsageError(f"--alpha must be comma separated integers: {exc}") from exc
    if len(alpha) != 2 * args.rank:
        raise UsageError(f"--alpha needs 2*rank = {2 * args.rank} coordinates")
    lat = covertop.SymplecticLattice.standard(args.rank)
    res = lattice.stable_saturation(alpha, lat)
    doc = {"d": res.d, "alpha": alpha, "rank": args.rank, "basis": [list(r) for r in res.basis]}
    return doc, f"d={res.d}", EXIT_OK


def _cmd_periods(args, cfg):
    curve, _, mdata = _pipeline_front(args.spec, cfg)
    cover = covertop.build_cover(mdata)
    pdata = jacobian.periods(curve, cover, mdata.branch, tol=cfg.quad_tol,
                             residual_tol=cfg.residual_tol, max_step=cfg.max_step)
    doc = pdata.to_json()
    code = EXIT_OK
    try:
        doc["ramification"] = jacobian.ramification_jacobian(curve, pdata, rel_tol=cfg.rank_tol).to_json()
    except RankDeficient as exc:
        doc["ramification"] = {"error": str(exc)}
        code = EXIT_RED_FLAG
    text = f"g={pdata.genus} riemann={pdata.residuals['riemann']:.3e}"
    if pdata.genus:
        text += "\ntau=\n" + np.array2string(pdata.tau, precision=10)
    return doc, text, code


def _cmd_hj(args, cfg):
    data = netgeom.hj_expand(args.n, args.k)
    doc = {"n": data.n, "k": data.k, "bs": list(data.bs), "intersection": [list(r) for r in data.intersection]}
    return doc, "[" + ",".join(str(b) for b in data.bs) + "]", EXIT_OK


def _cmd_report(args, cfg):
    doc, code = run_report(args.spec, cfg)
    text = _dump(doc) if args.json else json.dumps(doc, sort_keys=True, indent=1)
    return doc, text, code


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")
    common.add_argument("--precision", type=float, default=None, help="branch point resolution")
    common.add_argument("--max-word-len", type=int, default=None, help="tube search length")
    common.add_argument("--cache-dir", default=None, help="monodromy cache directory")
    parser = _Parser(prog="vclab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, helptext in (("branch", "branch points of the vertical pencil"),
                           ("monodromy", "lasso sheet permutations"),
                           ("tube", "tube lattice of the marked vanishing cycle"),
                           ("periods", "period matrix and ramification rank"),
                           ("report", "full pipeline report")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("spec", help="curve spec JSON file")
    p = sub.add_parser("stable", parents=[common], help="stable submodule generated by a vector")
    p.add_argument("--alpha", required=True, help="comma separated coordinates a1,b1,...")
    p.add_argument("--rank", type=int, required=True, help="number l of (delta, gamma) pairs")
    p = sub.add_parser("hj", parents=[common], help="Hirzebruch-Jung continued fraction")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    return parser


COMMANDS = {"branch": _cmd_branch, "monodromy": _cmd_monodromy, "tube": _cmd_tube,
            "stable": _cmd_stable, "periods": _cmd_periods, "hj": _cmd_hj, "report": _cmd_report}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        overrides = {}
        if args.precision is not None:
            overrides["precision"] = args.precision
        if args.max_word_len is not None:
            overrides["max_word_len"] = args.max_word_len
        if args.cache_dir is not None:
            overrides["cache_dir"] = args.cache_dir
        try:
            cfg = replace(RunConfig.from_env(), **overrides)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        doc, text, code = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except VclabError as exc:
        print(str(exc), file=err)
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError) as exc:
        print(f"[cli] {type(exc).__name__}: {exc}", file=err)
        return EXIT_ERROR
    print(_dump(doc) if args.json else text, file=out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
