"""Command-line front end.

Every subcommand writes either readable text (``--format human``) or JSON
lines (``--format structured``) whose first record is a ``{"schema": 1}``
header.  Exit status: 0 when all checks pass (a negative isomorphism verdict
counts as a successful run), 1 when a mathematical check fails, 2 on bad
input.  Flags default to the ``POISSONALG_*`` environment variables.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import __version__
from .catalog import FAMILIES, SUITE_SIZES, CatalogError, CatalogInstance, FamilyParams, build, draw_instances
from .cauchon import (DEFAULT_CUTOFF, DeletionContext, gk_normalize, infer_s, theta, theta_inverse,
                      verify_eq_3_2, verify_theta_poisson)
from .documents import (SCHEMA, DocumentError, load_json, matrix_from_doc, poly_to_doc,
                        quadratic_from_doc, spec_from_doc, spec_to_doc)
from .errors import HypothesisError, NilpotencyError
from .exactalg import LaurentPoly, rational_str
from .poisson import (IteratedPPASpec, LaurentInputError, QuadraticSpec, SpecError, center_lattice,
                      ppa_to_table, verify_all_steps, verify_jacobi)
from .report import Report
from .skewfields import (decide_iso_2x2, decide_iso_case_b,
                         orbit_membership_bounded, rational_structure, search_gl_witness,
                         witness_isomorphism)
from .torus import TorusData, enumerate_variable_hstable, resolve_s, verify_thm17

ENV_PREFIX = "POISSONALG_"
INPUT_ERRORS = (DocumentError, CatalogError, SpecError, LaurentInputError)


class UsageError(ValueError):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{name}={raw!r} is not an integer") from None


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class Output:
    """Collects records and renders them in the chosen format."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def header(self, command: str, config: dict[str, Any]):
        if self.fmt == "structured":
            self._line({"schema": SCHEMA, "command": command, "version": __version__, "config": config})

    def record(self, kind: str, data: dict[str, Any], text: str | None = None):
        if self.fmt == "structured":
            self._line({"record": kind, **data})
        else:
            print(text if text is not None else f"{kind}: {json.dumps(data, sort_keys=True)}",
                  file=self.stream)

    def report(self, rep: Report, label: str = ""):
        prefix = f"{label} " if label else ""
        text = f"{prefix}{rep.name}: {'pass' if rep.passed else 'FAIL'}"
        if rep.witness is not None:
            text += f"\n  witness: {json.dumps(rep.witness, sort_keys=True)}"
        data = rep.to_dict()
        if label:
            data["subject"] = label
        self.record("check", data, text)

    def _line(self, obj):
        print(json.dumps(obj, sort_keys=True, separators=(",", ":")), file=self.stream)


# ---------------------------------------------------------------------------
# algebra sources


def _params_from_doc(family: str, n: int, doc) -> FamilyParams:
    if not isinstance(doc, dict):
        raise DocumentError("$", "parameter document must be an object")
    allowed = {"lambda": "lam", "p_matrix": "p_matrix", "gamma": "gamma",
               "q_matrix": "q_matrix", "P": "P", "Q": "Q"}
    kwargs = {}
    for key, value in doc.items():
        if key in ("family", "n", "schema"):
            continue
        if key not in allowed:
            raise DocumentError(key, f"unknown parameter; expected one of {', '.join(allowed)}")
        kwargs[allowed[key]] = value
    try:
        return FamilyParams(family, n, **kwargs)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, CatalogError):
            raise
        raise DocumentError("$", str(exc)) from exc


class Subject:
    """One algebra to operate on: from a file or from a catalog instance."""

    def __init__(self, label: str, spec: IteratedPPASpec, torus: TorusData | None,
                 instance: CatalogInstance | None = None):
        self.label = label
        self.spec = spec
        self.torus = torus
        self.instance = instance


def _subjects(args) -> list[Subject]:
    if args.spec and args.family:
        raise UsageError("give either an algebra document or --family, not both")
    if args.spec:
        spec, torus, _ = spec_from_doc(load_json(args.spec))
        return [Subject(os.path.basename(args.spec), spec, torus)]
    if not args.family:
        raise UsageError("need an algebra document or --family")
    n = args.n if args.n is not None else SUITE_SIZES[args.family]
    if args.params:
        inst = build(_params_from_doc(args.family, n, load_json(args.params)))
        insts = [inst]
    else:
        insts = draw_instances(args.seed, args.draws, {args.family: n}, [args.family])
    return [Subject(f"{args.family}[n={n}, draw {k + 1}]", c.spec, c.torus, c)
            for k, c in enumerate(insts)]


def _truncate(spec: IteratedPPASpec, m: int) -> IteratedPPASpec:
    """The subalgebra on the first ``m`` generators."""
    def cut(f: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(m, {e[:m]: c for e, c in f.items()})
    alpha = [{j: cut(v) for j, v in spec.alpha[i].items()} for i in range(m)]
    delta = [{j: cut(v) for j, v in spec.delta[i].items()} for i in range(m)]
    return IteratedPPASpec(m, alpha, delta, spec.s[:m], spec.names[:m])


def _lambda_rows(q: QuadraticSpec) -> list[list[str]]:
    return [[rational_str(v) for v in row] for row in q.lam]


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(args, out: Output) -> int:
    n = args.n if args.n is not None else SUITE_SIZES[args.family]
    if args.params:
        params = _params_from_doc(args.family, n, load_json(args.params))
        inst = build(params)
    else:
        inst = draw_instances(args.seed, 1, {args.family: n}, [args.family])[0]
    doc = spec_to_doc(inst.spec, inst.torus, extra={
        "family": args.family, "size": n,
        "expected_lambda": _lambda_rows(inst.expected_lambda),
        "output_names": list(inst.output_names)})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        out.record("written", {"path": args.out, "generators": inst.spec.n},
                   f"wrote {args.family} (n={n}, {inst.spec.n} generators) to {args.out}")
    else:
        out.record("algebra", {"document": doc}, json.dumps(doc, indent=2, sort_keys=True))
    return 0


def cmd_verify(args, out: Output) -> int:
    status = 0
    for sub in _subjects(args):
        table = ppa_to_table(sub.spec)
        checks = [verify_jacobi(table), verify_all_steps(sub.spec, table)]
        if sub.torus is not None:
            rep = verify_thm17(sub.spec, sub.torus)
            grading = rep.details["grading"]
            witness = None if grading else rep.witness
            checks.append(Report("grading", grading, witness))
        for rep in checks:
            out.report(rep, sub.label)
            if not rep:
                status = 1
    return status


def _resolved_s(sub: Subject, args) -> list:
    if args.s:
        vals = [None if v in ("", "-") else v for v in args.s.split(",")]
        if len(vals) != sub.spec.n:
            raise UsageError(f"--s needs {sub.spec.n} comma-separated entries")
        return vals
    if sub.torus is not None:
        rep = verify_thm17(sub.spec, sub.torus)
        # torus-derived s only when the eta data is admissible (not so for affine space)
        if rep.details["eta_matches_alpha"] and rep.details["eigenvalues_nonzero"]:
            return resolve_s(sub.spec, sub.torus)
    return list(sub.spec.s)


def cmd_gk(args, out: Output) -> int:
    status = 0
    for sub in _subjects(args):
        res = gk_normalize(sub.spec, _resolved_s(sub, args), cutoff=args.cutoff, reorder=args.reorder)
        names = list(sub.instance.output_names) if sub.instance else list(res.names)
        data = res.to_dict()
        data["subject"] = sub.label
        data["output_names"] = names
        lines = [f"{sub.label}: quadratic skew field in {', '.join(names)}"]
        for i in range(len(names)):
            for j in range(i):
                c = res.lambda_out.lam[i][j]
                if c:
                    lines.append(f"  {{{names[i]}, {names[j]}}} = {rational_str(c)} {names[i]}{names[j]}")
        if sub.instance is not None:
            ok = res.lambda_out == sub.instance.expected_lambda
            data["matches_expected"] = ok
            lines.append(f"  matches catalog formulas: {'yes' if ok else 'NO'}")
            if not ok:
                status = 1
        out.record("gk", data, "\n".join(lines))
    return status


def _step_index(spec: IteratedPPASpec, step: str | None) -> int:
    if step is None:
        with_delta = [i for i in range(spec.n) if spec.delta[i]]
        if not with_delta:
            raise UsageError("no step has a nonzero delta; name one with --step")
        return with_delta[-1]
    if step in spec.names:
        return spec.names.index(step)
    raise UsageError(f"unknown step {step!r}; generators are {', '.join(spec.names)}")


def cmd_theta(args, out: Output) -> int:
    status = 0
    for sub in _subjects(args):
        t = _step_index(sub.spec, args.step)
        if t == 0:
            raise UsageError("the first generator carries no extension data")
        part = _truncate(sub.spec, t + 1)
        s = _resolved_s(sub, args)[t]
        if s is None:
            s = infer_s(part, t)
        ctx = DeletionContext.from_spec(part, s=s, cutoff=args.cutoff)
        names = ctx.names
        gens = LaurentPoly.gens(ctx.n)
        images = {}
        reports = []
        for j in ctx.base_generators():
            img = theta(ctx, gens[j])
            images[names[j]] = img
            reports.append(verify_eq_3_2(ctx, gens[j]))
            back = theta(ctx, theta_inverse(ctx, gens[j]))
            ok = back == gens[j]
            reports.append(Report("theta-inverse-roundtrip", ok, None if ok else {
                "generator": names[j], "result": back.format(names)}))
        base = ctx.base_generators()
        for ia, a in enumerate(base):
            for b in base[ia + 1:]:
                reports.append(verify_theta_poisson(ctx, gens[a], gens[b]))
        text = [f"{sub.label}: deleting derivations at {names[t]} (s = {rational_str(ctx.s)})"]
        text += [f"  theta({k}) = {v.format(names)}" for k, v in images.items()]
        out.record("theta", {
            "subject": sub.label, "step": names[t], "s": rational_str(ctx.s),
            "images": {k: poly_to_doc(v) for k, v in images.items()},
            "display": {k: v.format(names) for k, v in images.items()}}, "\n".join(text))
        for rep in reports:
            if args.verbose or not rep:
                out.report(rep, sub.label)
            if not rep:
                status = 1
        passed = sum(1 for r in reports if r)
        out.record("summary", {"subject": sub.label, "checks": len(reports), "passed": passed},
                   f"  {passed}/{len(reports)} checks pass")
    return status


def cmd_hstable(args, out: Output) -> int:
    for sub in _subjects(args):
        table = ppa_to_table(sub.spec)
        subsets = enumerate_variable_hstable(table)
        names = sub.spec.names
        data: dict[str, Any] = {"subject": sub.label, "count": len(subsets), "bound": 2 ** sub.spec.n,
                                "ideals": [[names[k] for k in s] for s in subsets]}
        text = [f"{sub.label}: {len(subsets)} Poisson ideals generated by variables (at most {2 ** sub.spec.n})"]
        if args.verbose:
            text += ["  <" + ", ".join(names[k] for k in s) + ">" for s in subsets]
        if sub.torus is not None:
            rep = verify_thm17(sub.spec, sub.torus)
            data["torus"] = rep.to_dict()
            hold = rep.passed
            text.append(f"  torus hypotheses: {'hold' if hold else 'do not hold'}"
                        + (f" (bound {2 ** sub.spec.n} applies)" if hold else ""))
            if not hold and rep.witness:
                text.append(f"  first failure: {json.dumps(rep.witness, sort_keys=True)}")
        out.record("hstable", data, "\n".join(text))
    return 0


def _decide(lam, mu, mode: str, budget: int):
    if mode == "auto":
        if lam.n == 2 and lam.is_rational() and mu.is_rational():
            mode = "2x2"
        elif rational_structure(lam).kind in ("zero", "cyclic"):
            mode = "case-b"
        else:
            mode = "search"
    if mode == "2x2":
        return mode, decide_iso_2x2(lam, mu)
    if mode == "case-b":
        return mode, decide_iso_case_b(lam, mu)
    if mode == "orbit":
        return mode, orbit_membership_bounded(lam, mu, budget)
    return mode, search_gl_witness(lam, mu, budget)


def cmd_iso(args, out: Output) -> int:
    lam = matrix_from_doc(load_json(args.lam))
    mu = matrix_from_doc(load_json(args.mu))
    if lam.n != mu.n:
        raise UsageError(f"matrices have sizes {lam.n} and {mu.n}")
    mode, dec = _decide(lam, mu, args.mode, args.budget)
    data = {"mode": mode, **dec.to_dict()}
    text = [f"verdict: {dec.verdict} ({dec.reason})", f"method: {mode}"]
    status = 0
    if dec.witness is not None:
        text.append(f"witness A = {dec.witness}")
        if mode != "orbit":
            check = witness_isomorphism(dec.witness, lam, seed=args.seed).report
            data["witness_check"] = check.to_dict()
            text.append(f"witness substitution check: {'pass' if check else 'FAIL'}")
            if not check:
                status = 1
    if "obstruction" in dec.details:
        text.append(f"obstruction: {dec.details['obstruction']}")
    out.record("iso", data, "\n".join(text))
    return status


def cmd_center(args, out: Output) -> int:
    if args.matrix:
        if args.family:
            raise UsageError("give either a matrix document or --family, not both")
        items = [(os.path.basename(args.matrix), quadratic_from_doc(load_json(args.matrix)), None)]
    else:
        subs = _subjects(args)
        items = []
        for sub in subs:
            if sub.instance is None:
                raise UsageError("center needs a quadratic matrix document or --family")
            items.append((sub.label, sub.instance.expected_lambda, sub.instance.output_names))
    for label, q, names in items:
        lat = center_lattice(q)
        basis = [list(r) for r in lat.basis]
        data = {"subject": label, "rank": lat.rank, "basis": basis}
        text = [f"{label}: center lattice of rank {lat.rank}"]
        names = list(names) if names else [f"x{i + 1}" for i in range(q.n)]
        for r in basis:
            text.append("  " + LaurentPoly.monomial(r).format(names))
        out.record("center", data, "\n".join(text))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_nonneg, default=_env_int("SEED", 0),
                        help="random seed (env POISSONALG_SEED)")
    common.add_argument("--draws", type=_positive, default=_env_int("DRAWS", 3),
                        help="random parameter draws per family (env POISSONALG_DRAWS)")
    common.add_argument("--cutoff", type=_positive, default=_env_int("CUTOFF", DEFAULT_CUTOFF),
                        help="nilpotency cutoff (env POISSONALG_CUTOFF)")
    common.add_argument("--budget", type=_nonneg, default=_env_int("BUDGET", 2),
                        help="entry bound for witness searches (env POISSONALG_BUDGET)")
    fmt = os.environ.get(ENV_PREFIX + "FORMAT") or "human"
    if fmt not in ("human", "structured"):
        raise UsageError(f"{ENV_PREFIX}FORMAT={fmt!r} must be 'human' or 'structured'")
    common.add_argument("--format", choices=("human", "structured"), default=fmt,
                        help="output format (env POISSONALG_FORMAT)")
    common.add_argument("-v", "--verbose", action="store_true")

    algebra = argparse.ArgumentParser(add_help=False)
    algebra.add_argument("spec", nargs="?", help="algebra document (JSON)")
    algebra.add_argument("--family", choices=FAMILIES, help="use a catalog family instead of a file")
    algebra.add_argument("--n", type=_positive, help="family size")
    algebra.add_argument("--params", help="family parameter document (JSON); default is seeded random draws")

    p = argparse.ArgumentParser(prog="poissonalg", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="emit the algebra document of a family")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("--n", type=_positive)
    c.add_argument("--params")
    c.add_argument("--out", help="write the document here instead of stdout")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("verify", parents=[common, algebra], help="Jacobi, step and grading checks")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("gk", parents=[common, algebra], help="reduce to a quadratic skew field")
    c.add_argument("--s", help="comma-separated s values per step ('-' for none)")
    c.add_argument("--reorder", choices=("single", "block"), default="single")
    c.set_defaults(func=cmd_gk)

    c = sub.add_parser("theta", parents=[common, algebra], help="deleting derivations at one step")
    c.add_argument("--step", help="generator name of the step (default: last step with delta)")
    c.add_argument("--s", help="comma-separated s values per step ('-' for none)")
    c.set_defaults(func=cmd_theta)

    c = sub.add_parser("hstable", parents=[common, algebra], help="Poisson ideals generated by variables")
    c.set_defaults(func=cmd_hstable)

    c = sub.add_parser("iso", parents=[common], help="decide isomorphism of quadratic Poisson fields")
    c.add_argument("lam", help="matrix document for lambda")
    c.add_argument("mu", help="matrix document for mu")
    c.add_argument("--mode", choices=("auto", "2x2", "case-b", "orbit", "search"), default="auto")
    c.set_defaults(func=cmd_iso)

    c = sub.add_parser("center", parents=[common, algebra], help="monomial Poisson center lattice")
    c.add_argument("--matrix", help="quadratic matrix document")
    c.set_defaults(func=cmd_center)
    return p


def _config(args) -> dict[str, Any]:
    return {k: getattr(args, k) for k in ("seed", "draws", "cutoff", "budget")}


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"poissonalg: {exc}", file=stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format, stdout)
    out.header(args.command, _config(args))
    try:
        return args.func(args, out)
    except (*INPUT_ERRORS, UsageError) as exc:
        if args.format == "structured":
            out.record("error", {"kind": "input", "message": str(exc)})
        print(f"poissonalg: input error: {exc}", file=stderr)
        return 2
    except (HypothesisError, NilpotencyError) as exc:
        witness = getattr(exc, "witness", None)
        out.record("failure", {"message": str(exc), "witness": witness},
                   f"FAIL: {exc}" + (f"\n  witness: {json.dumps(witness, sort_keys=True)}" if witness else ""))
        return 1


if __name__ == "__main__":
    sys.exit(main())
