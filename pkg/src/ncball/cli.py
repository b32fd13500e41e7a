"""Command-line front end: every verb builds a report and prints it as JSON or text."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

import numpy as np

from . import __version__
from .errors import InvalidParameter, NcballError, ParseError
from .fock import check_q
from .gluing import (
    BetaSpec,
    build_double_rep,
    distinguish_mirror,
    index_class,
    ktheory_double,
    mirror_rep_consistency,
    verify_glued_relations,
)
from .graphs import build_graph, graph_from_spec, hereditary_saturated_lattice, is_chain, ktheory_graph, path_ck_family, verify_ck
from .ncalg import Family, build_presentation, normal_form, parse_expression, verify_identities_symbolic
from .ncalg.presentation import FAMILY_KINDS
from .report import VerificationReport, _jsonable
from .reps import (
    RepSpec,
    build_rep,
    catalog,
    check_suspension,
    check_sum_identities,
    check_tccr,
    injectivity_check,
    point_rep,
    suspension_matches_sigma,
    verify_catalog,
)

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VERIFY_CHECKS = ("catalog", "symbolic", "tccr", "sums", "glued", "mirror-reps", "ck")


class UsageError(Exception):
    pass


class Outcome:
    """What a verb produced: an optional check report plus free-form result fields."""

    def __init__(self, report: VerificationReport | None = None, result: dict | None = None, ok: bool | None = None):
        self.report = report
        self.result = result or {}
        self._ok = ok

    @property
    def ok(self) -> bool:
        if self._ok is not None:
            return self._ok
        return self.report.ok if self.report is not None else True


# --- argument types -------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _q_value(text: str) -> float:
    try:
        return check_q(float(text))
    except (ValueError, InvalidParameter) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {v}")
    return v


def _phases(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(p.strip().replace("i", "j")) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"phases must be comma-separated complex numbers, got {text!r}") from None


# --- verbs ------------------------------------------------------------------------------


def cmd_verify(a) -> Outcome:
    fam = Family(a.family, a.n)
    if a.check == "catalog":
        return Outcome(verify_catalog(fam, q=a.q, cutoff=a.cutoff, margin=a.margin, tol=a.tol))
    if a.check == "symbolic":
        return Outcome(verify_identities_symbolic(build_presentation(fam)))
    if a.check == "ck":
        if not fam.even:
            raise UsageError("--check ck uses the graph M(n) and needs an even family")
        return Outcome(verify_ck(path_ck_family(build_graph("M", fam.n), a.max_len)))
    if fam.kind != ("ball-odd" if a.check == "glued" and a.parity == "odd" else "ball-even"):
        raise UsageError(f"--check {a.check} needs --family ball-even (ball-odd for odd gluing)")
    if a.check == "tccr":
        return Outcome(check_tccr(fam.n, a.q, a.cutoff, tol=a.tol))
    if a.check == "sums":
        return Outcome(check_sum_identities(fam.n, a.q, min(a.cutoff, 6), tol=a.tol))
    if a.check == "mirror-reps":
        return Outcome(mirror_rep_consistency(fam.n, a.q, a.cutoff))
    # glued: sigma on the first copy, every catalog member on the second
    first = build_rep(RepSpec(fam, "sigma" if fam.even else "sigma_s", a.q, a.cutoff, s_param=None if fam.even else 0.5))
    phases = a.phases or (1,) * fam.n
    beta = BetaSpec(a.parity, phases)
    report = VerificationReport(f"glued relations over the catalog of {fam}")
    for second in catalog(fam, q=a.q, cutoff=a.cutoff):
        part = verify_glued_relations(build_double_rep(first, second, beta), tol=a.tol)
        report.extend(part, prefix=f"{first.label} + {second.label}: ")
    return Outcome(report)


def cmd_nf(a) -> Outcome:
    pres = build_presentation(Family(a.family, a.n))
    expr = parse_expression(a.expr, pres)
    nf = normal_form(expr, pres)
    return Outcome(result={"input": str(expr), "normal_form": str(nf), "zero": not nf}, ok=not nf)


def cmd_ktheory(a) -> Outcome:
    graph = build_graph(a.graph, a.n) if a.graph in ("M", "L-odd", "L-even") else graph_from_spec(a.graph)
    kt = ktheory_graph(graph)
    lattice = hereditary_saturated_lattice(graph)
    result = kt.to_dict()
    result["graph"] = graph.to_text()
    result["lattice"] = [sorted(graph.vertex_names[v] for v in h) for h in lattice]
    result["lattice_is_chain"] = is_chain(lattice)
    return Outcome(result=result)


def _beta_from_args(a) -> BetaSpec:
    if a.phases and len(a.phases) != a.n:
        raise UsageError(f"--phases needs {a.n} entries, got {len(a.phases)}")
    phases = a.phases or (1,) * a.n
    return BetaSpec("even", phases, conjugate_first=(a.beta == "mirror"))


def cmd_index(a) -> Outcome:
    beta = _beta_from_args(a)
    kd = ktheory_double(index_class(a.n, beta, a.max_len))
    return Outcome(result={"beta": beta.to_dict(), **kd.to_dict()})


def cmd_mirror(a) -> Outcome:
    cmp = distinguish_mirror(a.n, a.max_len)
    return Outcome(cmp.report(), result=cmp.to_dict())


def _matrix_json(M) -> list:
    dense = np.asarray(M.toarray())
    return [[[float(z.real), float(z.imag)] for z in row] for row in dense]


def cmd_reps(a) -> Outcome:
    fam = Family(a.family, a.n)
    reps = catalog(fam, q=a.q, cutoff=a.cutoff)
    listing = []
    report = VerificationReport(f"injectivity witnesses for the catalog of {fam}") if a.injectivity else None
    for rep in reps:
        entry: dict[str, Any] = {"label": rep.label, "kind": rep.spec.kind, "dim": rep.dim}
        if a.matrices:
            entry["matrices"] = {lab: _matrix_json(rep[lab]) for lab in rep.labels}
        if report is not None:
            res = injectivity_check(rep)
            entry["injective"] = res.injective
            report.add(f"{rep.label}: {res.criterion}", True, res.witness, f"injective={res.injective}; {res.note}")
        listing.append(entry)
    return Outcome(report, result={"family": str(fam), "count": len(listing), "representations": listing})


def cmd_suspend(a) -> Outcome:
    if a.n == 0:
        report = check_suspension(point_rep(a.q), a.cutoff)
    else:
        base = build_rep(RepSpec(Family("ball-even", a.n), "sigma", a.q, a.cutoff))
        report = check_suspension(base, a.cutoff)
        report.extend(suspension_matches_sigma(a.n, a.q, a.cutoff), prefix="sigma match: ")
    return Outcome(report)


VERBS: dict[str, Callable[[Any], Outcome]] = {
    "verify": cmd_verify,
    "nf": cmd_nf,
    "ktheory": cmd_ktheory,
    "index": cmd_index,
    "mirror": cmd_mirror,
    "reps": cmd_reps,
    "suspend": cmd_suspend,
}


# --- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncball", description="Verify noncommutative ball and sphere algebras.")
    p.add_argument("--version", action="version", version=f"ncball {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, family=True, numeric=True):
        if family:
            sp.add_argument("--family", choices=FAMILY_KINDS, default="ball-even")
        sp.add_argument("--n", type=_nonneg_int if not family else _positive_int, default=2)
        if numeric:
            sp.add_argument("--q", type=_q_value, default=0.5)
            sp.add_argument("--cutoff", type=_positive_int, default=8)
            sp.add_argument("--margin", type=_nonneg_int, default=2)
            sp.add_argument("--tol", type=_positive_float, default=1e-10)
        sp.add_argument("--format", choices=("json", "text"), default="json")

    v = sub.add_parser("verify", help="run a verification pipeline")
    common(v)
    v.add_argument("--check", choices=VERIFY_CHECKS, default="catalog")
    v.add_argument("--parity", choices=("even", "odd"), default="even", help="gluing parity for --check glued")
    v.add_argument("--phases", type=_phases, default=None)
    v.add_argument("--max-len", dest="max_len", type=_positive_int, default=6)

    nf = sub.add_parser("nf", help="normal form of an expression")
    common(nf, numeric=False)
    nf.add_argument("--expr", required=True)

    k = sub.add_parser("ktheory", help="K-theory and ideal lattice of a graph")
    k.add_argument("--graph", default="M", help="M, L-odd, L-even, or an edge list such as '3;1>2;2>3'")
    k.add_argument("--n", type=_positive_int, default=2)
    k.add_argument("--format", choices=("json", "text"), default="json")

    for name, helptext in (("index", "index map of a glued sphere"), ("mirror", "identity versus mirror gluing")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--n", type=_positive_int, default=2)
        sp.add_argument("--max-len", dest="max_len", type=_positive_int, default=6)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if name == "index":
            sp.add_argument("--beta", choices=("identity", "mirror"), default="identity")
            sp.add_argument("--phases", type=_phases, default=None, help="Gaussian rationals of modulus one")

    r = sub.add_parser("reps", help="list the representation catalog")
    common(r)
    r.add_argument("--matrices", action="store_true", help="include dense matrices as [re, im] pairs")
    r.add_argument("--injectivity", action="store_true", help="attach injectivity witnesses")

    s = sub.add_parser("suspend", help="check the double suspension of sigma (n = 0: the point)")
    common(s, family=False)
    s.set_defaults(cutoff=6)
    return p


# --- output ------------------------------------------------------------------------------


def _echo(a) -> dict:
    return {k: _jsonable(v) for k, v in sorted(vars(a).items()) if k != "format" and v is not None}


def render(a, out: Outcome) -> str:
    doc: dict[str, Any] = {"schema": SCHEMA, "command": _echo(a), "status": "pass" if out.ok else "fail"}
    doc.update(_jsonable(out.result))
    if out.report is not None:
        doc["title"] = out.report.title
        doc["checks"] = [c.to_dict() for c in out.report.checks]
        doc["summary"] = out.report.summary()
    if a.format == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    return _render_text(doc)


def _render_text(doc: dict) -> str:
    lines = [f"ncball {doc['command']['verb']}: {doc['status']}"]
    for key, value in doc.items():
        if key in ("schema", "command", "status", "checks", "summary", "title"):
            continue
        if key == "representations":
            for r in value:
                lines.append(f"  {r['label']}  dim={r['dim']}")
            continue
        lines.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
    if "checks" in doc:
        lines.append(doc["title"])
        for c in doc["checks"]:
            lines.append(f"  {c['status'].upper():4}  {c['name']}  {json.dumps(c['value'], ensure_ascii=False)}")
        s = doc["summary"]
        lines.append(f"{s['passed']} passed, {s['failed']} failed")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        out = VERBS[a.verb](a)
    except ParseError as exc:
        text = getattr(a, "expr", "")
        print(f"ncball: parse error: {exc}", file=sys.stderr)
        if text:
            print(f"  {text}\n  {' ' * exc.position}^", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InvalidParameter, ValueError) as exc:
        print(f"ncball: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NcballError as exc:
        # numeric trouble is a failed check, not a crash
        report = VerificationReport(f"{a.verb} aborted")
        report.add(type(exc).__name__, False, str(exc))
        out = Outcome(report)
    sys.stdout.write(render(a, out))
    return EXIT_OK if out.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
