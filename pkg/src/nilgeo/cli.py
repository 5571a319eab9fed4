"""Command-line front end.

Exit codes: 0 success, 1 mathematical negative (an ``--expect`` mismatch, an
invalid algebra under ``validate``, a failed flow comparison), 2 input or
usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Sequence

from . import catalog, fileformat
from . import report as rp
from .algebra import (
    DegenerateCenter,
    MetricNilAlgebra,
    center,
    is_ad_invariant,
    is_pseudo_H_type,
    metric_signature,
    nilpotency_class,
    split_v_z,
    validate,
)
from .derivations import derivation_space, rebase, skew_derivation_space
from .fileformat import FormatError, format_rational, parse_rational
from .geodesics import (
    SamplerConfig,
    SamplerExhausted,
    classify_space,
    geodesic_lemma_check,
    solve_geodesic_system,
    trivial_geodesic_constant,
)

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Loaded:
    alg: MetricNilAlgebra
    source: str
    digest: str


def load_input(arg: str) -> Loaded:
    """A file path, or ``catalog:NAME`` for a built-in fixture."""
    if arg.startswith("catalog:"):
        try:
            alg = catalog.get(arg.split(":", 1)[1])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        text = fileformat.dumps(alg)
        return Loaded(alg, arg, fileformat.sha256_hex(text))
    try:
        with open(arg, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UsageError(f"{arg}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError(f"{arg}: not UTF-8 text") from None
    try:
        alg = fileformat.loads(text)
    except FormatError as exc:
        raise UsageError("\n".join(f"{arg}: {loc}: {msg}" for loc, msg in exc.diagnostics)) from None
    return Loaded(alg, arg, fileformat.sha256_hex(raw))


def parse_vector(text: str, dim: int) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != dim:
        raise UsageError(f"--vector has {len(parts)} coordinates, algebra has dimension {dim}")
    try:
        return tuple(parse_rational(p, f"--vector[{i}]") for i, p in enumerate(parts))
    except FormatError as exc:
        raise UsageError(str(exc)) from None


def require_valid_input(alg: MetricNilAlgebra) -> None:
    rep = validate(alg)
    if not rep.ok:
        raise UsageError(f"{alg.name}: not a valid metric nilpotent algebra: "
                         + "; ".join(describe(v) for v in rep.violations))


def describe(v) -> str:
    return f"{v.kind} at {v.where}" + (f": {v.detail}" if v.detail else "")


def fmt_vec(v) -> str:
    return "(" + ", ".join(format_rational(a) for a in v) + ")"


def fmt_mat(m, indent: str = "  ") -> str:
    rows = [[format_rational(a) for a in r] for r in m.to_lists()]
    width = max((len(a) for r in rows for a in r), default=1)
    return "\n".join(indent + " ".join(a.rjust(width) for a in r) for r in rows)


class Output:
    def __init__(self, args, loaded: Loaded | None, seed: int | None = None,
                 arguments: dict | None = None):
        self.args = args
        self.loaded = loaded
        self.seed = seed
        self.arguments = arguments or {}
        self.lines: list[str] = []

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def emit(self, result: dict) -> None:
        if self.args.json:
            src = self.loaded.source if self.loaded else None
            dig = self.loaded.digest if self.loaded else None
            sys.stdout.write(rp.dumps(rp.make_report(self.args.command_name, src, dig, result,
                                                     self.seed, self.arguments)))
        else:
            sys.stdout.write("\n".join(self.lines) + "\n")


def check_expect(args, actual: Sequence[str]) -> int:
    """``--expect`` holds comma-separated values that must all appear among ``actual``."""
    if not getattr(args, "expect", None):
        return OK
    wanted = [w.strip() for w in args.expect.split(",") if w.strip()]
    missing = [w for w in wanted if w not in actual]
    if missing:
        print(f"expected {', '.join(missing)}; got {', '.join(actual)}", file=sys.stderr)
        return NEGATIVE
    return OK


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    ld = load_input(args.file)
    rep = validate(ld.alg)
    out = Output(args, ld)
    out.text(f"{ld.alg.name}: {'valid' if rep.ok else 'INVALID'} (dim {ld.alg.dim}, "
             f"nilpotency class {rep.nilpotency_class})")
    for v in rep.violations:
        out.text(f"  {describe(v)}")
    out.emit({"valid": rep.ok, "nilpotency_class": rep.nilpotency_class,
              "violations": [{"kind": v.kind, "where": list(v.where), "detail": v.detail}
                             for v in rep.violations]})
    return OK if rep.ok else NEGATIVE


def cmd_info(args) -> int:
    ld = load_input(args.file)
    alg = ld.alg
    require_valid_input(alg)
    z = center(alg)
    sig = metric_signature(alg.metric)
    ad_inv, witness = is_ad_invariant(alg)
    result = {
        "name": alg.name,
        "dim": alg.dim,
        "nilpotency_class": nilpotency_class(alg),
        "signature": {"positive": sig[0], "negative": sig[1], "zero": sig[2]},
        "center": [rp.rvec(b) for b in z.basis],
        "ad_invariant": ad_inv,
    }
    out = Output(args, ld)
    out.text(f"{alg.name}: dim {alg.dim}, nilpotency class {result['nilpotency_class']}, "
             f"signature ({sig[0]}, {sig[1]})")
    out.text(f"center (dim {z.dim}): " + ", ".join(fmt_vec(b) for b in z.basis))
    try:
        split = split_v_z(alg)
    except DegenerateCenter as exc:
        result["split"] = None
        result["degenerate_center"] = True
        result["pseudo_H_type"] = None
        out.text(f"split: none ({exc})")
    else:
        h = is_pseudo_H_type(alg, split)
        result["split"] = {"v": [rp.rvec(b) for b in split.v.basis],
                           "z": [rp.rvec(b) for b in split.z.basis]}
        result["degenerate_center"] = False
        result["pseudo_H_type"] = h
        out.text("v = z-perp: " + ", ".join(fmt_vec(b) for b in split.v.basis))
        out.text(f"pseudo-H-type: {'yes' if h else 'no'}")
    out.text(f"ad-invariant metric: {'yes' if ad_inv else 'no'}"
             + ("" if ad_inv else f" (fails at basis triple {witness})"))
    out.emit(result)
    return OK


def _dera_for(alg: MetricNilAlgebra):
    dera = skew_derivation_space(alg)
    preferred = catalog.preferred_dera_basis(alg)
    if preferred is not None:
        dera = rebase(dera, *preferred)
    return dera


def cmd_derivations(args) -> int:
    ld = load_input(args.file)
    alg = ld.alg
    require_valid_input(alg)
    der = derivation_space(alg)
    dera = _dera_for(alg)
    out = Output(args, ld)
    out.text(f"Der: dimension {len(der)}")
    out.text(f"Der^a (skew derivations): dimension {dera.dim}")
    for label, d in zip(dera.labels, dera.basis):
        out.text(f"{label} =")
        out.text(fmt_mat(d.matrix, "    "))
    brackets = []
    for a in range(dera.dim):
        for b in range(a + 1, dera.dim):
            coords = dera.bracket_coords(a, b)
            if any(coords):
                terms = " + ".join(f"{format_rational(c)}*{dera.labels[i]}"
                                   for i, c in enumerate(coords) if c)
                out.text(f"[{dera.labels[a]}, {dera.labels[b]}] = {terms}")
                brackets.append({"a": dera.labels[a], "b": dera.labels[b], "coords": rp.rvec(coords)})
    if not brackets:
        out.text("Der^a is abelian" if dera.dim else "")
    out.emit({
        "der_dim": len(der),
        "der_basis": [rp.rmat(d.matrix) for d in der],
        "dera_dim": dera.dim,
        "dera_labels": list(dera.labels),
        "dera_basis": [rp.rmat(d.matrix) for d in dera.basis],
        "dera_brackets": brackets,
    })
    return OK


def cmd_geodesic(args) -> int:
    ld = load_input(args.file)
    alg = ld.alg
    require_valid_input(alg)
    y = parse_vector(args.vector, alg.dim)
    out = Output(args, ld, arguments={"vector": rp.rvec(y), "presentation": args.presentation})
    if args.presentation == "trivial":
        k = trivial_geodesic_constant(alg, y)
        status = "geodesic" if k is not None else "not_geodesic"
        out.text(f"Y = {fmt_vec(y)}: {'geodesic' if k is not None else 'NOT geodesic'} "
                 "under left translations" + (f", k = {format_rational(k)}" if k is not None else ""))
        out.emit({"status": status, "k": None if k is None else format_rational(k)})
        return check_expect(args, [status])
    split = split_v_z(alg)
    dera = _dera_for(alg)
    sol = solve_geodesic_system(alg, split, dera, y)
    result = rp.solution_dict(sol, dera.labels)
    actual = [sol.status] + (["geodesic"] if sol.solvable else [])
    if sol.solvable:
        d = dera.combine(sol.xi)
        ok = geodesic_lemma_check(alg, y, d, sol.k)
        result["derivation"] = rp.rmat(d)
        result["lemma_check"] = ok
        out.text(f"Y = {fmt_vec(y)}: {sol.status}")
        out.text("xi = " + ", ".join(f"{lab}: {format_rational(c)}"
                                     for lab, c in zip(dera.labels, sol.xi)))
        out.text(f"k = {format_rational(sol.k)}" + ("" if sol.k_forced else " (varies over the family)"))
        for n, direction in enumerate(sol.family_basis):
            out.text(f"family direction {n + 1}: xi {fmt_vec(direction[:-1])}, k {format_rational(direction[-1])}")
        out.text("D =")
        out.text(fmt_mat(d, "    "))
        out.text(f"exact lemma check: {'pass' if ok else 'FAIL'}")
    else:
        out.text(f"Y = {fmt_vec(y)}: not geodesic (no skew derivation D and constant k exist)")
    out.emit(result)
    return check_expect(args, actual)


def cmd_classify(args) -> int:
    ld = load_input(args.file)
    alg = ld.alg
    require_valid_input(alg)
    config = SamplerConfig(samples=args.samples, null_samples=args.null_samples, seed=args.seed)
    dera = _dera_for(alg) if args.presentation == "iso" else None
    v = classify_space(alg, config, presentation=args.presentation, dera=dera)
    out = Output(args, ld, seed=args.seed, arguments={
        "samples": args.samples, "null_samples": args.null_samples,
        "presentation": args.presentation})
    out.text(f"{alg.name} ({v.presentation}): {v.verdict}, {v.null_verdict}"
             + (" [certified by exact case analysis]" if v.certified else " [sampling verdict]"))
    for pool in ("generic", "null", "probe"):
        s = v.sample_stats.get(pool)
        if s:
            out.text(f"  {pool}: {s['solvable']} solvable, {s['unsolvable']} unsolvable "
                     f"({s['unsolvable_regular']} at full rank), {s['null']} null")
    for w in v.witnesses:
        tag = "solvable" if w.solvable else "UNSOLVABLE"
        extra = f", k = {format_rational(w.candidate.k)}" if w.solvable else ""
        out.text(f"  witness [{w.pool}{', null vector' if w.null else ''}] {tag}: {fmt_vec(w.candidate.y)}{extra}")
    for note in v.notes:
        out.text(f"  note: {note}")
    out.emit(rp.verdict_dict(v))
    return check_expect(args, [v.verdict, v.null_verdict])


def cmd_flow_compare(args) -> int:
    from .flows import ClassTooHigh, ToleranceExceeded, compare_orbit_geodesic

    ld = load_input(args.file)
    alg = ld.alg
    require_valid_input(alg)
    y = parse_vector(args.vector, alg.dim)
    split = split_v_z(alg)
    dera = _dera_for(alg)
    sol = solve_geodesic_system(alg, split, dera, y)
    out = Output(args, ld, arguments={"vector": rp.rvec(y), "dt": args.dt, "T": args.T,
                                      "tol": args.tol})
    if not sol.solvable:
        out.text(f"Y = {fmt_vec(y)} is not geodesic; nothing to compare")
        out.emit({"status": sol.status})
        return NEGATIVE
    d = dera.combine(sol.xi)
    try:
        cmp = compare_orbit_geodesic(alg, d, y, sol.k, args.T, args.dt)
    except ClassTooHigh as exc:
        raise UsageError(str(exc)) from None
    if args.csv:
        cmp.orbit.to_csv(args.csv + ".orbit.csv")
        cmp.geodesic.to_csv(args.csv + ".geodesic.csv")
    passed = cmp.max_deviation <= args.tol
    out.text(f"Y = {fmt_vec(y)}, k = {format_rational(sol.k)}, xi = {fmt_vec(sol.xi)}")
    out.text(f"geodesic parameter at t = {args.T}: s = {cmp.final_parameter:.12g}")
    out.text(f"max |orbit(t) - geodesic(s(t))| = {cmp.max_deviation:.3e} at t = {cmp.worst_t:.6g} "
             f"({'within' if passed else 'EXCEEDS'} tol {args.tol:g})")
    out.emit({
        "status": sol.status,
        "xi": rp.rvec(sol.xi),
        "k": format_rational(sol.k),
        "max_deviation": float(f"{cmp.max_deviation:.6e}"),
        "worst_t": cmp.worst_t,
        "final_parameter": cmp.final_parameter,
        "within_tolerance": passed,
    })
    if not passed:
        print(str(ToleranceExceeded(cmp.max_deviation, cmp.worst_t, args.tol)), file=sys.stderr)
        return NEGATIVE
    return OK


def cmd_limit_scan(args) -> int:
    from .flows import xi3_limit_scan
    from .h3xh3 import norm_X

    ld = load_input(args.file)
    alg = ld.alg
    if alg.same_structure(catalog.paper6_e()):
        to_e = None
    elif alg.same_structure(catalog.paper6_X()):
        to_e = catalog.X_TO_E.inverse()
    else:
        raise UsageError("limit-scan applies only to the paper6 algebra (X or e basis)")
    y = parse_vector(args.vector, alg.dim)
    ye = y if to_e is None else to_e.apply(y)
    if norm_X(ye) != 0:
        raise UsageError("limit-scan needs a vector with <X, X> = 0")
    ts = [float(t) for t in args.t.split(",")]
    values = xi3_limit_scan(ye, ts)
    out = Output(args, ld, arguments={"vector": rp.rvec(y), "t": ts})
    out.text(f"xi3 along the curve through {fmt_vec(ye)} (e basis):")
    for t, v in zip(ts, values):
        out.text(f"  t = {t:<10g} xi3 = {v:.10g}")
    out.emit({"e_vector": rp.rvec(ye), "scan": [{"t": t, "xi3": v} for t, v in zip(ts, values)]})
    return OK


def cmd_catalog(args) -> int:
    from .catalog import A_tau, B1, B2, B3, X_TO_E

    if args.automorphisms:
        tau = [parse_rational(p, "--tau") for p in args.tau.split(",")]
        if len(tau) != 4:
            raise UsageError("--tau needs four entries t11,t12,t21,t22")
        mats = {"A_tau": A_tau([tau[:2], tau[2:]]), "B1": B1, "B2": B2, "B3": B3,
                "X_to_e": X_TO_E}
        if args.json:
            sys.stdout.write(rp.dumps({"algebra": "paper6_X", "tau": rp.rvec(tau),
                                       "matrices": {k: rp.rmat(m) for k, m in mats.items()}}))
        else:
            for k, m in mats.items():
                print(f"{k} (paper6_X basis):\n{fmt_mat(m)}")
        return OK
    if args.name and args.name not in catalog.names():
        raise UsageError(f"unknown catalog entry {args.name!r}")
    if args.out:
        import os

        os.makedirs(args.out, exist_ok=True)
        for name in [args.name] if args.name else catalog.names():
            fileformat.dump(catalog.get(name), os.path.join(args.out, f"{name}.json"))
        if args.name:
            return OK
    if args.name:
        sys.stdout.write(fileformat.dumps(catalog.get(args.name)))
        return OK
    if args.json:
        sys.stdout.write("[\n" + ",\n".join(fileformat.dumps(catalog.get(n)).rstrip("\n")
                                            for n in catalog.names()) + "\n]\n")
    else:
        for name in catalog.names():
            alg = catalog.get(name)
            print(f"{name:<26} dim {alg.dim}  {', '.join(alg.basis_names)}")
    return OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a machine-readable report")

    p = argparse.ArgumentParser(prog="nilgeo", description="Homogeneous geodesics on 2-step nilpotent groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, file=True):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func, command_name=name)
        if file:
            sp.add_argument("file", help="algebra file, or catalog:NAME")
        return sp

    add("validate", cmd_validate, "check Jacobi, antisymmetry, metric and nilpotency")
    add("info", cmd_info, "center, class, v + z split, pseudo-H-type")
    add("derivations", cmd_derivations, "Der and Der^a bases with brackets")

    sp = add("geodesic", cmd_geodesic, "is Y a geodesic vector?")
    sp.add_argument("--vector", required=True, help="comma-separated rationals, e.g. 0,1,1,0,1,0")
    sp.add_argument("--presentation", choices=("iso", "trivial"), default="iso")
    sp.add_argument("--expect", help="required status: unique, family, geodesic, not_geodesic")

    sp = add("classify", cmd_classify, "sampled g.o. / almost g.o. / n.g.o. verdict")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--null-samples", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--presentation", choices=("iso", "trivial"), default="iso")
    sp.add_argument("--expect", help="required verdicts, comma-separated (e.g. AlmostGO,NotNGO)")

    fp = sub.add_parser("flow", help="numerical orbit / geodesic checks")
    fsub = fp.add_subparsers(dest="flow_command", required=True)
    sp = fsub.add_parser("compare", parents=[common], help="orbit of D + Y versus the geodesic")
    sp.set_defaults(func=cmd_flow_compare, command_name="flow compare")
    sp.add_argument("file")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--dt", type=float, default=1e-4)
    sp.add_argument("--T", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--csv", metavar="PREFIX", help="write PREFIX.orbit.csv and PREFIX.geodesic.csv")

    sp = add("limit-scan", cmd_limit_scan, "xi3 of the geodesic graph near a vector with <X, X> = 0")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--t", default="0.1,0.01,0.001,0.0001", help="comma-separated t values")

    sp = add("catalog", cmd_catalog, "list or emit built-in algebras", file=False)
    sp.add_argument("name", nargs="?")
    sp.add_argument("--out", help="write the fixture (or every fixture) as NAME.json into this directory")
    sp.add_argument("--automorphisms", action="store_true",
                    help="print the paper6 automorphism fixtures instead")
    sp.add_argument("--tau", default="1,0,0,1", help="entries t11,t12,t21,t22 of A_tau")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nilgeo: {exc}", file=sys.stderr)
        return USAGE
    except FormatError as exc:
        print(f"nilgeo: {exc}", file=sys.stderr)
        return USAGE
    except DegenerateCenter as exc:
        print(f"nilgeo: {exc}", file=sys.stderr)
        return USAGE
    except SamplerExhausted as exc:
        print(f"nilgeo: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
