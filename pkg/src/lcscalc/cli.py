"""Command-line driver.

Exit codes: 0 when no check failed ("reported" findings do not fail),
1 when a mathematical check failed, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import dga, hodge, kerr
from .errors import DegenerateStructure, InvalidLeeForm, InvalidPresentation, LcsCalcError, ParseError
from .exterior import DifferentialForm, basis_monomials, exterior_derivative, wedge
from .lcs import (
    ContactForm,
    LcsStructure,
    build_collar,
    verify_contact,
    verify_lcs,
    volume_identity_sign,
)
from .parser import format_structure, parse_chart, parse_form, parse_structure
from .randomforms import random_mixed_form

PASS, FAIL, REPORTED = "pass", "fail", "reported"

DEFAULT_CONTACT_CHART = "coord x\ncoord y\ncoord z\n"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    witness: str = ""


@dataclass
class VerificationReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, status: str | bool, witness: str = "") -> None:
        if isinstance(status, bool):
            status = PASS if status else FAIL
        self.checks.append(Check(name, status, witness))

    @property
    def exit_status(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_text(self) -> str:
        lines = [f"subject: {self.subject}"]
        for c in self.checks:
            lines.append(f"[{c.status}] {c.name}" + (f": {c.witness}" if c.witness else ""))
        lines.append(f"result: {FAIL if self.exit_status else PASS}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "checks": [{"name": c.name, "status": c.status, "witness": c.witness} for c in self.checks],
            "exit_status": self.exit_status,
            "subject": self.subject,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _emit(report: VerificationReport, as_json: bool) -> int:
    sys.stdout.write(report.to_json() if as_json else report.to_text())
    return report.exit_status


# -- lcs ------------------------------------------------------------------------


def _lcs_checks(report: VerificationReport, s: LcsStructure) -> None:
    r = verify_lcs(s)
    report.add("theta-closed", r.theta_closed, f"d theta = {exterior_derivative(s.theta)}")
    if len(r.signs) == 2:
        report.add("lee-sign", PASS, "eps = +1 or -1 (d omega = 0 = theta ^ omega)")
    elif r.signs:
        report.add("lee-sign", PASS, f"eps = {r.signs[0]:+d}: d omega = {exterior_derivative(s.omega)}")
    else:
        report.add("lee-sign", FAIL, f"d omega = {exterior_derivative(s.omega)}; "
                                     f"theta ^ omega = {wedge(s.theta, s.omega)}")
    report.add("nondegenerate", r.nondegenerate, f"omega^n/n! = ({r.volume_coefficient})*vol")
    if r.nondegenerate:
        locus = r.degeneracy_locus
        report.add("degeneracy-locus", REPORTED if locus else PASS, "; ".join(f"{f} = 0" for f in locus) or "none")


def cmd_lcs_check(args) -> int:
    chart = parse_chart(_read(args.chart))
    if args.structure:
        if args.omega or args.theta:
            raise UsageError("give either --structure or --omega/--theta")
        omega, theta = parse_structure(_read(args.structure), chart)
    else:
        if not args.omega:
            raise UsageError("--omega (or --structure) is required")
        omega = parse_form(args.omega, chart)
        theta = parse_form(args.theta or "0", chart)
    report = VerificationReport("lcs check")
    _lcs_checks(report, LcsStructure(chart, omega, theta))
    return _emit(report, args.json)


def cmd_lcs_collar(args) -> int:
    chart = parse_chart(_read(args.chart) if args.chart else DEFAULT_CONTACT_CHART)
    alpha = parse_form(args.contact, chart)
    c = ContactForm(chart, alpha)
    report = VerificationReport("lcs collar")
    contact = verify_contact(c)
    coeff = contact.volume.coefficient(*range(chart.dimension)) if chart.dimension % 2 else None
    report.add("contact", contact.valid, f"alpha ^ d alpha = {contact.volume}")
    if not contact.valid:
        return _emit(report, args.json)
    if coeff is not None and contact.vanishing_locus:
        report.add("contact-locus", REPORTED, "; ".join(f"{f} = 0" for f in contact.vanishing_locus))
    s = build_collar(c, args.parameter)
    chart_text = str(s.chart).rstrip("\n") + "\n"
    structure_text = format_structure(s.omega, s.theta)
    report.add("omega", REPORTED, str(s.omega))
    report.add("theta", REPORTED, str(s.theta))
    _lcs_checks(report, s)
    eps2 = volume_identity_sign(c, s)
    report.add("volume-identity", eps2 is not None,
               f"omega ^ omega = {eps2:+d} * 2 theta ^ alpha ^ d alpha" if eps2 else str(wedge(s.omega, s.omega)))
    # round trip through the text grammar
    rechart = parse_chart(chart_text)
    re_omega, re_theta = parse_structure(structure_text, rechart)
    report.add("round-trip", rechart == s.chart and re_omega == s.omega and re_theta == s.theta)
    if args.chart_out:
        _write(args.chart_out, chart_text)
    if args.structure_out:
        _write(args.structure_out, structure_text)
    return _emit(report, args.json)


# -- hodge-lefschetz -------------------------------------------------------------


def _first_failure(items, predicate: Callable[[DifferentialForm], DifferentialForm]) -> str:
    for a in items:
        bad = predicate(a)
        if bad:
            return f"input {a} gives {bad}"
    return ""


def _offset_list(pairs) -> str:
    if len(pairs) == len(hodge.OFFSETS) ** 2:
        return "all pairs"
    return " ".join(f"({o1:+d},{o2:+d})" for o1, o2 in pairs) or "none"


def cmd_hl_verify(args) -> int:
    chart = parse_chart(_read(args.chart))
    omega, theta = parse_structure(_read(args.structure), chart)
    s = LcsStructure(chart, omega, theta)
    report = VerificationReport("hl verify")
    try:
        ctx = hodge.HLContext(s)
    except DegenerateStructure as exc:
        report.add("nondegenerate", FAIL, str(exc))
        return _emit(report, args.json)
    _lcs_checks(report, s)
    dim = chart.dimension
    ring = chart.ring
    monos = [DifferentialForm(chart, {i: ring.one}) for k in range(dim + 1) for i in basis_monomials(dim, k)]

    witness = ""
    for a in monos:
        for b in monos:
            if a.degree != b.degree:
                continue
            lhs = wedge(a, hodge.star(ctx, b))
            rhs = ctx.volume.scale(hodge.pairing(ctx, a, b))
            if lhs != rhs:
                witness = f"{a} ^ *{b} = {lhs}, expected {rhs}"
                break
        if witness:
            break
    report.add("star-defining-property", not witness, witness)
    witness = _first_failure(monos, lambda a: hodge.star(ctx, hodge.star(ctx, a)) - a)
    report.add("star-involution", not witness, witness)

    spectrum = hodge.commutator_spectrum(ctx)
    n = dim // 2
    scalars = [e.scalar for e in spectrum]
    if all(c is not None for c in scalars):
        table = ", ".join(f"c_{e.degree} = {e.scalar}" for e in spectrum)
        printed = ", ".join(f"{2 * n - e.degree}" for e in spectrum)
        report.add("commutator-spectrum", REPORTED, f"{table} (printed 2n-k: {printed})")
        steps = all(scalars[k] - scalars[k + 1] == 1 for k in range(dim)) and scalars[n] == 0
        report.add("spectrum-steps", steps, "c_k - c_(k+1) = 1, c_n = 0" if steps else table)
    else:
        bad = next(e for e in spectrum if e.scalar is None)
        report.add("commutator-spectrum", REPORTED, f"not scalar on degree {bad.degree}: {bad.witness}")

    rng = random.Random(args.seed)
    forms = [random_mixed_form(chart, rng) for _ in range(args.trials)]
    witness = _first_failure(forms, lambda a: hodge.symplectic_delta(ctx, hodge.symplectic_delta(ctx, a)))
    report.add("delta-nilpotency", not witness, witness)
    witness = _first_failure(forms, lambda a: hodge.symplectic_delta(ctx, a) - hodge.delta_via_commutator(ctx, a))
    if witness and exterior_derivative(omega):
        report.add("delta-formulas-agree", REPORTED, f"d omega != 0; {witness}")
    else:
        report.add("delta-formulas-agree", not witness, witness)

    try:
        failures = []
        for k in range(5):
            def twice(a, k=k):
                once = hodge.lichnerowicz_d(s, hodge.WeightedForm(a, k))
                return hodge.lichnerowicz_d(s, once).form
            w = _first_failure(forms, twice)
            if w:
                failures.append(f"k = {k}: {w}")
        report.add("lichnerowicz-nilpotency", not failures, "; ".join(failures) or "k = 0..4")
        scan = hodge.scan_relations(ctx, args.trials, args.seed)
        per = scan.by_degree()
        text = "; ".join(f"k = {k}: {_offset_list(pairs)}" for k, pairs in sorted(per.items()))
        uniform = _offset_list(scan.uniform_offsets)
        note = " [weight-independent: theta = 0]" if scan.weight_independent else ""
        report.add("relation-scan", PASS if scan.nonempty else REPORTED,
                   f"offsets (w - k) surviving per degree: {text or 'none'}; uniform: {uniform}{note}")
    except InvalidLeeForm as exc:
        report.add("lichnerowicz-nilpotency", FAIL, str(exc))
    return _emit(report, args.json)


# -- dga -----------------------------------------------------------------------------


def cmd_dga_betti(args) -> int:
    try:
        a = dga.parse_presentation(_read(args.presentation))
        if args.lee:
            table = dga.betti_twisted(a, args.lee, args.weight, args.max_degree)
        else:
            table = dga.betti(a, args.max_degree)
    except (InvalidPresentation, InvalidLeeForm) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    sys.stdout.write(json.dumps(table.to_json_dict(), sort_keys=True) + "\n")
    return 0


# -- kerr ----------------------------------------------------------------------------


def _power(base: str, e: int) -> str:
    if " " in base:
        base = f"({base})"
    return base if e == 1 else f"{base}^{e}"


def cmd_kerr_verify(args) -> int:
    report = VerificationReport("kerr verify")
    samples = [kerr.ProjectivePoint(1, 1, 0, 1), kerr.ProjectivePoint(1, 0, 1, 1), kerr.ProjectivePoint(0, 0, 1, 1)]
    report.add("quartic-values", REPORTED,
               ", ".join(f"Q[{':'.join(str(v) for v in p.coords)}] = {kerr.quartic_eval(p)}" for p in samples))
    homog = all(kerr.quartic_value(*(3 * v for v in p.coords)) == 81 * kerr.quartic_value(*p.coords)
                for p in samples)
    report.add("quartic-homogeneity", homog, "Q(3p) = 81 Q(p)")
    diff = kerr.normalization_difference()
    report.add("normalization", not diff, f"Q - a^4 N(x/a, r/a, z/a) = {diff}")

    bad = []
    for tp in (Fraction(0), Fraction(1, 2), Fraction(-3, 5), Fraction(1)):
        c = kerr.fiber(tp)
        if c.eccentricity_sq != 1 - tp * tp:
            bad.append(f"theta_p = {tp}: e^2 = {c.eccentricity_sq}")
    report.add("fiber-eccentricity", not bad, "; ".join(bad) or "e^2 = 1 - theta_p^2")
    half = kerr.fiber(theta_p_sq=Fraction(1, 2))
    report.add("fiber-irrational", half.eccentricity_sq == Fraction(1, 2) and half.kind == "ellipse",
               f"theta_p^2 = 1/2: {half.kind}, axes^2 = ({half.kappa_axis_sq}, {half.rho_axis_sq}), "
               f"e^2 = {half.eccentricity_sq}")
    rows = kerr.sample_pencil(1, 20, 0)
    on_quartic = all(r.quartic_value == 0 for r in rows)
    members = all(kerr.fiber_membership(r.theta_p, r.kappa, r.rho).member for r in rows)
    report.add("pencil-points", on_quartic and members, f"{len(rows)} sampled points on fibre and quartic")

    deg = kerr.degenerate_a0()
    factored = " * ".join(_power(str(p), e) for p, e in deg.factors)
    report.add("degenerate-a0", [(str(p), e) for p, e in deg.factors] == [("r", 2), ("x^2 + z^2", 1)],
               f"{deg.expanded} = {factored}")

    ks = kerr.verify_ks_identity()
    R = kerr.KS_SOURCE.ring
    expected = (R.symbol("r") ** 2 + R.symbol("a") ** 2) * R.sin("th") ** 2
    report.add("ks-radial", ks.radial_sq == expected, f"x^2 + y^2 = {ks.radial_sq}")
    report.add("ks-identity", REPORTED,
               f"x^2 + y^2 + z^2 = {ks.lhs}; printed rhs = {ks.printed_rhs}; difference = {ks.difference}")

    two = kerr.kerr_two_form()
    report.add("two-form-closed", two.closed, f"d(t lambda) = {two.form}")
    report.add("two-form-locus", REPORTED,
               f"omega^2/2 = ({two.top_coefficient})*vol; vanishes on " + "; ".join(f"{f} = 0" for f in two.degeneracy_locus))
    report.add("two-form-printed", REPORTED, f"difference = {two.difference}")
    return _emit(report, args.json)


def cmd_kerr_sample(args) -> int:
    text = kerr.pencil_csv(kerr.sample_pencil(args.a, args.n, args.seed))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    return 0


# -- argument parsing ------------------------------------------------------------------


def _positive_rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _seed(text: str) -> int:
    v = _nonneg_int(text)
    if v >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcscalc", description="Exact exterior calculus for lcs geometry.")
    top = p.add_subparsers(dest="group", required=True)

    lcs_p = top.add_parser("lcs", help="lcs structures and contact collars")
    lcs_sub = lcs_p.add_subparsers(dest="command", required=True)
    chk = lcs_sub.add_parser("check", help="verify an lcs structure")
    chk.add_argument("--chart", required=True, help="chart file")
    chk.add_argument("--omega", help="2-form expression")
    chk.add_argument("--theta", help="Lee form expression (default 0)")
    chk.add_argument("--structure", help="structure file instead of --omega/--theta")
    chk.add_argument("--json", action="store_true")
    chk.set_defaults(func=cmd_lcs_check)
    col = lcs_sub.add_parser("collar", help="build the collar of a contact form")
    col.add_argument("contact", help="contact 1-form expression")
    col.add_argument("--chart", help="contact chart file (default: coordinates x, y, z)")
    col.add_argument("--parameter", default="t", help="collar coordinate name")
    col.add_argument("--chart-out", help="write the collar chart here")
    col.add_argument("--structure-out", help="write omega and theta here")
    col.add_argument("--json", action="store_true")
    col.set_defaults(func=cmd_lcs_collar)

    hl = top.add_parser("hl", help="symplectic Hodge theory")
    hl_sub = hl.add_subparsers(dest="command", required=True)
    ver = hl_sub.add_parser("verify", help="star, sl2 and twisted-differential checks")
    ver.add_argument("chart")
    ver.add_argument("structure")
    ver.add_argument("--trials", type=_positive_int, default=50)
    ver.add_argument("--seed", type=_seed, default=0)
    ver.add_argument("--json", action="store_true")
    ver.set_defaults(func=cmd_hl_verify)

    dg = top.add_parser("dga", help="presented commutative dgas")
    dg_sub = dg.add_subparsers(dest="command", required=True)
    bt = dg_sub.add_parser("betti", help="Betti numbers as JSON")
    bt.add_argument("presentation")
    bt.add_argument("--max-degree", type=_nonneg_int, default=10)
    bt.add_argument("--lee", help="degree-1 closed generator for the twisted differential")
    bt.add_argument("--weight", type=int, default=1)
    bt.set_defaults(func=cmd_dga_betti)

    kr = top.add_parser("kerr", help="Kerr quartic and its pencil")
    kr_sub = kr.add_subparsers(dest="command", required=True)
    kv = kr_sub.add_parser("verify")
    kv.add_argument("--json", action="store_true")
    kv.set_defaults(func=cmd_kerr_verify)
    ks = kr_sub.add_parser("sample")
    ks.add_argument("--a", type=_positive_rational, required=True)
    ks.add_argument("--n", type=_positive_int, required=True)
    ks.add_argument("--seed", type=_seed, required=True)
    ks.add_argument("--out", help="CSV path (default stdout)")
    ks.set_defaults(func=cmd_kerr_sample)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except LcsCalcError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
