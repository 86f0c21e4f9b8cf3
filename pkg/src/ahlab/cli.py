"""ahlab command line: catalog runs and verification of user-supplied data, JSON certificates on stdout."""
import argparse
import json
import os
import sys
import time
from fractions import Fraction
from itertools import product

from .scalar import Scalar
from .poly import Polynomial
from .symtensor import SymTensor, Metric, norm2
from . import catalog as cat
from . import codazzi as cz
from . import curvature as cv
from . import lie as lz
from .catalog import Check


class InputError(Exception):
    pass


# ---------------------------------------------------------------- parsing

def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as ex:
        raise InputError("%s: %s" % (path, ex.strerror))
    except json.JSONDecodeError as ex:
        raise InputError("%s: line %d column %d: %s" % (path, ex.lineno, ex.colno, ex.msg))


def need(obj, key, where):
    if not isinstance(obj, dict):
        raise InputError("%s: expected an object" % where)
    if key not in obj:
        raise InputError("%s: missing field %r" % (where, key))
    return obj[key]


def as_int(v, where, lo=None, hi=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError("%s: expected an integer, got %r" % (where, v))
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise InputError("%s: %d out of range [%s, %s]" % (where, v, lo, hi))
    return v


def as_scalar(v, where):
    if isinstance(v, bool) or isinstance(v, float):
        raise InputError("%s: expected an exact literal (int or string), got %r" % (where, v))
    try:
        return Scalar.coerce(v if isinstance(v, int) else str(v))
    except (ValueError, TypeError) as ex:
        raise InputError("%s: %s" % (where, ex))


def as_list(v, where, length=None):
    if not isinstance(v, list):
        raise InputError("%s: expected a list" % where)
    if length is not None and len(v) != length:
        raise InputError("%s: expected %d entries, got %d" % (where, length, len(v)))
    return v


def parse_metric(obj, n, where="metric"):
    rows = as_list(obj, where, n)
    g = [[as_scalar(x, "%s[%d][%d]" % (where, i, j)) for j, x in enumerate(as_list(r, "%s[%d]" % (where, i), n))]
         for i, r in enumerate(rows)]
    for i in range(n):
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise InputError("%s: not symmetric at [%d][%d]" % (where, i, j))
    try:
        return Metric(g)
    except ValueError as ex:
        raise InputError("%s: %s" % (where, ex))


def parse_polynomial(obj, where="polynomial"):
    n = as_int(need(obj, "n", where), where + ".n", 1)
    P = Polynomial(n)
    for a, m in enumerate(as_list(need(obj, "monos", where), where + ".monos")):
        w = "%s.monos[%d]" % (where, a)
        exp = as_list(need(m, "exp", w), w + ".exp", n)
        exp = tuple(as_int(e, "%s.exp[%d]" % (w, b), 0) for b, e in enumerate(exp))
        term = Polynomial(n, {exp: as_scalar(need(m, "val", w), w + ".val")})
        P = P + term
    return P


def parse_symtensor_entries(entries, n, rank, where):
    c = {}
    for a, e in enumerate(as_list(entries, where)):
        w = "%s[%d]" % (where, a)
        idx = as_list(need(e, "idx", w), w + ".idx", rank)
        idx = tuple(as_int(i, "%s.idx[%d]" % (w, b), 0, n - 1) for b, i in enumerate(idx))
        v = as_scalar(need(e, "val", w), w + ".val")
        key = tuple(sorted(idx))
        if key in c and c[key] != v:
            raise InputError("%s: conflicts with an earlier entry for the same symmetric slot %s" % (w, list(key)))
        c[key] = v
    return SymTensor(n, rank, c)


def parse_algebra(obj, where="algebra"):
    n = as_int(need(obj, "n", where), where + ".n", 1)
    h = parse_metric(obj["metric"], n, where + ".metric") if "metric" in obj else Metric.identity(n)
    mu = parse_symtensor_entries(need(obj, "mu", where), n, 3, where + ".mu")
    return cz.CodazziAlgebra(mu, h, obj.get("name"))


def parse_lie(obj, where="lie"):
    n = as_int(need(obj, "n", where), where + ".n", 1)
    c = {}
    for a, e in enumerate(as_list(need(obj, "c", where), where + ".c")):
        w = "%s.c[%d]" % (where, a)
        i, j, k = (as_int(need(e, key, w), "%s.%s" % (w, key), 0, n - 1) for key in "ijk")
        v = as_scalar(need(e, "val", w), w + ".val")
        if i == j:
            if v:
                raise InputError("%s: [e_i, e_i] must vanish" % w)
            continue
        for key, val in (((i, j, k), v), ((j, i, k), -v)):
            if key in c and c[key] != val:
                raise InputError("%s: inconsistent with an earlier entry (antisymmetry)" % w)
            c[key] = val
    return n, c, obj.get("name")


# ---------------------------------------------------------------- output

def tensor_json(t):
    if t is None:
        return None
    if isinstance(t, SymTensor):
        return t.to_json()
    return {"n": t.n, "rank": t.rank,
            "comps": [{"idx": list(i), "val": str(v)} for i, v in sorted(t.items()) if v]}


def report_json(rep, emit="full"):
    v = {k: cat.render(x) for k, x in rep.verdicts().items()}
    out = {"verdicts": v, "scalar": str(rep.scalar)}
    if emit == "full":
        for name in ("R4", "T4", "U4", "F4", "G4", "E4", "A4", "L4", "C4", "ric", "Fij", "Eij", "Aij"):
            out[name] = tensor_json(getattr(rep, name))
    return out


def emit(doc, args):
    if getattr(args, "pretty", False):
        certs = doc if isinstance(doc, list) else [doc]
        for c in certs:
            print("== %s (%s)" % (c["subject"], c["mode"]))
            w = max([len(ch["name"]) for ch in c["checks"]] + [4])
            for ch in c["checks"]:
                print("  %-4s %-*s  %s | %s" % (ch["status"].upper(), w, ch["name"], ch["lhs"], ch["rhs"]))
            for key in sorted(c.get("info", {})):
                print("  info %s = %s" % (key, c["info"][key]))
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


def finish(subject, checks, args, info=None, t0=None, extra=None):
    mode = getattr(args, "mode", "exact")
    tol = getattr(args, "tol", 1e-9)
    elapsed = round(time.perf_counter() - t0, 3) if (t0 is not None and getattr(args, "timing", False)) else None
    cert = cat.certificate(subject, checks, mode, tol, elapsed)
    if info:
        cert["info"] = {k: cat.render(v) for k, v in info.items()}
    if extra:
        cert.update(extra)
    emit(cert, args)
    return 0 if cat.cert_passed(cert) else 1


# ---------------------------------------------------------------- commands

def cmd_catalog(args):
    only = None
    if args.only:
        only = [t.strip() for t in args.only.split(",") if t.strip()]
        bad = [t for t in only if t not in cat.ENTRIES]
        if bad:
            raise InputError("--only: unknown tag(s) %s (known: %s)" % (", ".join(bad), ", ".join(sorted(cat.ENTRIES))))
    threads = os.environ.get("AH_LAB_THREADS")
    try:
        threads = int(threads) if threads else min(4, os.cpu_count() or 1)
    except ValueError:
        raise InputError("AH_LAB_THREADS: expected an integer, got %r" % threads)
    certs = cat.run_catalog(only, args.mode, args.tol, max(1, threads))
    for c in certs:
        if not args.timing:
            c["elapsed"] = None
        for ch in c["checks"]:
            if (c["subject"], ch["name"]) in cat.KNOWN_DISCREPANCIES:
                ch["known_discrepancy"] = True
    emit(certs, args)
    return 0 if all(cat.cert_passed(c) for c in certs) else 1


def cmd_verify_polynomial(args):
    t0 = time.perf_counter()
    obj = load_json(args.file)
    P = parse_polynomial(obj)
    n = P.n
    h = parse_metric(obj["metric"], n) if "metric" in obj else Metric.identity(n)
    anchor = "einstein polynomials"
    checks = [Check("homogeneous cubic", P.is_homogeneous(3) and bool(P), True, anchor)]
    info = {}
    if checks[0].lhs:
        harmonic = not P.laplacian(h.inv)
        # second route: trace form of the algebra with cubic form P
        tau_ratio = cz.is_einstein(cz.from_cubic(P, h))
        ratio = cz.proportionality(cz.hess_norm2(P, h), h.quadratic())
        kappa = cz.check_einstein_polynomials(P, h)
        checks.append(Check("harmonic", harmonic, True, anchor))
        checks.append(Check("|Hess P|^2 proportional to E", ratio is not None, True, anchor))
        checks.append(Check("einstein (kappa found)", kappa is not None, True, anchor))
        checks.append(Check("trace form route agrees", tau_ratio == kappa, True, anchor))
        info["kappa"] = kappa
        info["hess_ratio"] = ratio
        if "expect_kappa" in obj:
            checks.append(Check("kappa = expected", kappa, as_scalar(obj["expect_kappa"], "expect_kappa"), anchor))
    return finish(obj.get("name", "polynomial"), checks, args, info, t0)


ALGEBRA_CHECKS = ("special", "einstein", "conf-assoc", "associative", "curvature")


def probe_witness(A):
    """Basis quadruple where the probe fails, preferring one with vanishing right side."""
    n = A.n
    first = None
    for q in product(range(n), repeat=4):
        lhs, rhs = cz.probe(A, *(cz.unit(n, i) for i in q))
        if lhs != rhs:
            if not rhs:
                return q, lhs, rhs
            first = first or (q, lhs, rhs)
    return first


def cmd_algebra(args):
    t0 = time.perf_counter()
    obj = load_json(args.file)
    A = parse_algebra(obj)
    wanted = [c.strip() for c in args.check.split(",") if c.strip()]
    bad = [c for c in wanted if c not in ALGEBRA_CHECKS]
    if bad:
        raise InputError("--check: unknown check(s) %s (known: %s)" % (", ".join(bad), ", ".join(ALGEBRA_CHECKS)))
    probe_idx = None
    if args.probe:
        try:
            probe_idx = [int(x) for x in args.probe.split(",")]
        except ValueError:
            raise InputError("--probe: expected four comma-separated basis indices")
        if len(probe_idx) != 4 or any(not 0 <= i < A.n for i in probe_idx):
            raise InputError("--probe: expected four indices in [0, %d)" % A.n)
    checks, info, extra = [], {}, {}
    anchor = "Codazzi algebras"
    kappa = cz.is_einstein(A)
    info["kappa"] = kappa
    if "special" in wanted:
        checks.append(Check("special", cz.is_special(A), True, anchor))
    if "einstein" in wanted:
        checks.append(Check("einstein", kappa is not None, True, anchor))
        if "expect_kappa" in obj:
            checks.append(Check("kappa = expected", kappa, as_scalar(obj["expect_kappa"], "expect_kappa"), anchor))
    if "associative" in wanted:
        checks.append(Check("associative", cz.is_associative(A), True, anchor))
    if "conf-assoc" in wanted:
        ok = cz.is_conformally_associative(A)
        checks.append(Check("conformally associative", ok, True, "conformal associativity probe"))
        if kappa is not None:
            if probe_idx:
                vecs = [cz.unit(A.n, i) for i in probe_idx]
                lhs, rhs = cz.probe(A, *vecs)
                checks.append(Check("probe%s" % list(probe_idx), lhs, rhs, "conformal associativity probe"))
            elif not ok:
                w = probe_witness(A)
                if w:
                    checks.append(Check("probe%s" % list(w[0]), w[1], w[2], "conformal associativity probe"))
    if "curvature" in wanted:
        try:
            s = cv.FlatAHStructure.from_algebra(A)
        except ValueError as ex:
            checks.append(Check("flat AH structure", str(ex), "ok", "flat AH curvature"))
        else:
            rep = cv.curvature_flat(s)
            checks.append(Check("E4=0, Eij=0, F=0", not rep.E4 and not rep.Eij and not rep.Fij, True,
                                "flat AH curvature"))
            checks.append(Check("scalar = -|L|^2/4", rep.scalar, norm2(s.L, s.h) * Fraction(-1, 4),
                                "flat AH curvature"))
            checks.append(Check("-4 A4 = C4", rep.A4 * -4 == rep.C4, True, "flat AH curvature"))
            if kappa is not None:
                checks.append(Check("einstein verdict = -kappa/4", cv.einstein_verdict(rep, s),
                                    kappa * Fraction(-1, 4), "flat AH curvature"))
            extra["curvature"] = report_json(rep, args.emit)
    return finish(obj.get("name", "algebra"), checks, args, info, t0, extra)


def load_lie(spec):
    if spec in lz.BUILTINS:
        return lz.builtin(spec)
    if not os.path.exists(spec):
        raise InputError("%r is neither a built-in Lie algebra (%s) nor a file" % (spec, ", ".join(lz.BUILTINS)))
    obj = load_json(spec)
    n, c, name = parse_lie(obj)
    try:
        return cz.LieAlgebraData(n, c, name or os.path.basename(spec))
    except ValueError as ex:
        raise InputError("lie: %s" % ex)


def parse_triple(path, lie):
    obj = load_json(path)
    out = []
    for key in ("e", "f", "h"):
        v = need(obj, key, "triple")
        rows = as_list(v, "triple." + key)
        if rows and isinstance(rows[0], list):
            M = [[as_scalar(x, "triple.%s[%d][%d]" % (key, i, j)) for j, x in enumerate(r)] for i, r in enumerate(rows)]
            try:
                out.append(lie.coords_of_matrix(M))
            except ValueError as ex:
                raise InputError("triple.%s: %s" % (key, ex))
        else:
            as_list(v, "triple." + key, lie.n)
            out.append([as_scalar(x, "triple.%s[%d]" % (key, i)) for i, x in enumerate(v)])
    return out


def cmd_lie(args):
    t0 = time.perf_counter()
    lie = load_lie(args.name)
    anchor = "left-invariant structures"
    info, checks = {}, []
    try:
        h = lz.killing_metric(lie)
    except ValueError as ex:
        return finish(lie.name, [Check("semisimple", str(ex), "nondegenerate Killing form", anchor)], args, t0=t0)
    info["killing_metric"] = [[str(x) for x in row] for row in h.g]
    if args.s3 and args.nilpotent:
        raise InputError("--s3 and --nilpotent are exclusive")
    if args.s3:
        t = as_scalar(args.t, "--t")
        try:
            s = lz.s3_family(t, lie)
        except ValueError as ex:
            raise InputError("--s3: %s" % ex)
        rep, fchecks = s.verify()
        info["scalar"] = rep.scalar
        info["E_norm2"] = norm2(rep.E4, s.h)
        for k in sorted(fchecks):
            checks.append(Check(k, fchecks[k], True, anchor))
        checks.append(Check("scalar = 3/4 - t^2/6", rep.scalar, Scalar(Fraction(3, 4)) - t * t / 6, anchor))
        checks.append(Check("|E|^2 = 2t^2/3", info["E_norm2"], t * t * Fraction(2, 3), anchor))
        checks.append(Check("E closed form", rep.E4 == lz.s3_E_closed_form(t, s.h), True, anchor))
        checks.append(Check("einstein criterion = t^2/18", lz.einstein_criterion(s.h, s.Gamma), t * t / 18, anchor))
        checks.append(Check("Gauduchon equations", lz.gauduchon_frame(s)["ok"], True, anchor))
        subject = "%s-s3-t=%s" % (lie.name, t)
    elif args.nilpotent:
        e, f, hh = parse_triple(args.nilpotent, lie)
        try:
            s = lz.nilpotent_structure(lie, e, f, hh)
        except ValueError as ex:
            raise InputError("--nilpotent: %s" % ex)
        rep, fchecks = s.verify()
        for k in sorted(fchecks):
            checks.append(Check(k, fchecks[k], True, anchor))
        disp = lz.nil_E_display(s, e)
        checks.append(Check("E4 = displayed formula", rep.E4 == disp, True, anchor))
        checks.append(Check("4 R_ij = h_ij", rep.ric * 4 == s.h.lower_t, True, anchor))
        checks.append(Check("conservation L^abc E_iabc = 0", not s.conservation_residual(rep.E4), True, anchor))
        info["B(e,f)"] = lz.killing(lie, e, f)
        info["E(h,f,f,f)"] = lz.contract4(rep.E4, hh, f, f, f)
        info["scalar"] = rep.scalar
        subject = "%s-nilpotent" % lie.name
    else:
        s = lz.InvariantAH(lie, SymTensor(lie.n, 3), h)
        rep, fchecks = s.verify()
        for k in sorted(fchecks):
            checks.append(Check(k, fchecks[k], True, anchor))
        checks.append(Check("bi-invariant scalar = n/4", rep.scalar, Scalar(Fraction(lie.n, 4)), anchor))
        info["scalar"] = rep.scalar
        subject = "%s-bi-invariant" % lie.name
    return finish(subject, checks, args, info, t0, {"curvature": report_json(rep, args.emit)})


def cmd_jet(args):
    import numpy as np
    t0 = time.perf_counter()
    obj = load_json(args.file)
    tol = args.tol
    checks, info = [], {}
    anchor = "orthant example"
    if "example" in obj:
        if obj["example"] != "orthant":
            raise InputError("example: only 'orthant' is built in")
        n = as_int(need(obj, "n", "jet"), "jet.n", 2)
        x = obj.get("x")
        if x is not None:
            x = [float(v) for v in as_list(x, "jet.x", n)]
            if min(x) <= 0:
                raise InputError("jet.x: the orthant example needs positive coordinates")
        step = float(obj.get("step", 1e-4))
        jet = cv.orthant_jet(n, x, step)
        subject = "orthant-n=%d" % n
    else:
        jet = {}
        try:
            for k in ("h", "dh", "ddh", "gamma", "dgamma", "L", "dL"):
                if k in obj:
                    jet[k] = np.asarray(obj[k], float)
        except (TypeError, ValueError) as ex:
            raise InputError("jet: %s" % ex)
        if "h" not in jet:
            raise InputError("jet: missing field 'h'")
        n = jet["h"].shape[0]
        shapes = {"h": (n, n), "dh": (n,) * 3, "ddh": (n,) * 4, "gamma": (n,), "dgamma": (n, n),
                  "L": (n,) * 3, "dL": (n,) * 4}
        for k, v in jet.items():
            if v.shape != shapes[k]:
                raise InputError("jet.%s: expected shape %s, got %s" % (k, shapes[k], v.shape))
        subject = obj.get("name", "jet")
    try:
        out = cv.curvature_from_jet(jet)
    except ValueError as ex:
        raise InputError("jet: %s" % ex)
    for k in ("scalar", "L_norm2", "metric_scalar", "gamma_norm2", "confscal_residual"):
        info[k] = float(out[k])
    checks.append(Check("scalar matches the trace identity", out["confscal_residual"], 0.0, anchor,
                        kind="float", tol=tol))
    if "example" in obj:
        checks.append(Check("|L|^2 = 4n(n-1)", out["L_norm2"], 4 * n * (n - 1), anchor, kind="float", tol=tol))
        checks.append(Check("scalar = n(1-n)", out["scalar"], n * (1 - n), anchor, kind="float", tol=tol))
        checks.append(Check("metric flat", out["metric_scalar"], 0.0, anchor, kind="float", tol=tol))
    for key, name in (("expect_scalar", "scalar"), ("expect_L_norm2", "L_norm2")):
        if key in obj:
            checks.append(Check("%s = expected" % name, out[name], float(obj[key]), anchor, kind="float", tol=tol))
    args.mode = "float"
    return finish(subject, checks, args, info, t0)


# ---------------------------------------------------------------- entry point

def build_parser():
    p = argparse.ArgumentParser(prog="ahlab", description="Exact verification of Einstein AH structures.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(q, tol=1e-9):
        q.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
        q.add_argument("--timing", action="store_true", help="fill in elapsed seconds (breaks byte stability)")
        q.add_argument("--tol", type=float, default=tol)

    q = sub.add_parser("catalog", help="run the built-in catalog")
    q.add_argument("--only", help="comma-separated tags: " + ", ".join(sorted(cat.ENTRIES)))
    q.add_argument("--mode", choices=("exact", "float"), default="exact")
    common(q)
    q.set_defaults(func=cmd_catalog)

    q = sub.add_parser("verify-polynomial", help="certify a cubic polynomial")
    q.add_argument("file")
    common(q)
    q.set_defaults(func=cmd_verify_polynomial)

    q = sub.add_parser("algebra", help="check a Codazzi algebra")
    q.add_argument("file")
    q.add_argument("--check", default="special,einstein", help="comma list from: " + ",".join(ALGEBRA_CHECKS))
    q.add_argument("--probe", help="basis indices i,j,k,l (0-based) for the associativity probe")
    q.add_argument("--emit", choices=("full", "verdicts"), default="verdicts")
    common(q)
    q.set_defaults(func=cmd_algebra)

    q = sub.add_parser("lie", help="left-invariant structure on a Lie algebra")
    q.add_argument("name", help="built-in name (%s) or Lie JSON file" % ", ".join(lz.BUILTINS))
    q.add_argument("--s3", action="store_true", help="the t X_(i Y_j Z_k) family")
    q.add_argument("--t", default="1", help="Scalar literal for --s3")
    q.add_argument("--nilpotent", metavar="TRIPLE", help="JSON with e, f, h as coordinates or matrices")
    q.add_argument("--emit", choices=("full", "verdicts"), default="verdicts")
    common(q)
    q.set_defaults(func=cmd_lie)

    q = sub.add_parser("jet", help="curvature at a point from a jet (float mode)")
    q.add_argument("file")
    common(q, tol=1e-6)
    q.set_defaults(func=cmd_jet)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if not hasattr(args, "mode"):
        args.mode = "exact"
    try:
        return args.func(args)
    except InputError as ex:
        print("ahlab: input error: %s" % ex, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
