"""Command dispatcher and report emitter.

Commands:

    tduality cohom   --complex NAME [--max-degree D] FILE
    tduality dualize --bundle NAME [--flux NAME] FILE
    tduality borel   --action NAME [--route mw|bunke|both] FILE
    tduality verify  [--all] FILE

``FILE`` is a model file in the line-oriented format of :mod:`tduality.dsl`,
or ``-`` for stdin.  ``--json`` switches to structured output carrying the
same numeric content as the text report.  Output is byte-identical across
re-runs for identical input.

Exit codes: 0 success, 1 parse error, 2 precondition violation,
3 internal invariant failure (always a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import borel as borel_mod
from . import tdual as tdual_mod
from .complexes import cohomology, validate_complex
from .dsl import ActionSpec, ResolvedSpec, SpecFile, build_euler_model, parse_spec, resolve
from .errors import InternalCheckError, ParseError, PreconditionError
from .gysin import SIGN_CONVENTION, gysin_sequence, total_space
from .matrices import Vector

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_INTERNAL = 3


@dataclass(frozen=True)
class Report:
    payload: dict

    def render_text(self) -> str:
        lines = []

        def emit(value, indent=0):
            pad = "  " * indent
            if isinstance(value, dict):
                for k in value:
                    v = value[k]
                    if isinstance(v, (dict, list)):
                        lines.append(f"{pad}{k}:")
                        emit(v, indent + 1)
                    else:
                        lines.append(f"{pad}{k}: {v}")
            elif isinstance(value, list):
                for v in value:
                    if isinstance(v, (dict, list)):
                        emit(v, indent)
                    else:
                        lines.append(f"{pad}- {v}")

        emit(self.payload)
        return "\n".join(lines) + "\n"

    def render_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True, indent=2) + "\n"


def _group_entry(group) -> dict:
    return {
        "torsion": list(group.torsion),
        "free_rank": group.free_rank,
        "pretty": group.describe(),
    }


def _coords(vec: Vector) -> list[int]:
    return [int(x) for x in vec]


def _cmd_cohom(args, resolved: ResolvedSpec) -> Report:
    name = args.complex
    if name not in resolved.complexes:
        raise PreconditionError(f"no complex named {name!r} in the model file")
    entry = resolved.complexes[name]
    cx = entry.complex
    report = validate_complex(cx)
    if not report.valid:
        raise PreconditionError(f"complex {name!r} is invalid: {report.detail}")
    top = cx.top_degree
    if args.max_degree is not None:
        top = min(top, args.max_degree)
    groups = {str(d): _group_entry(cohomology(cx, d)) for d in range(top + 1)}
    return Report(
        {
            "command": f"cohom --complex {name}"
            + (f" --max-degree {args.max_degree}" if args.max_degree is not None else ""),
            "complex": entry.display_name,
            "degree_window": f"0..{top}",
            "cohomology": groups,
            "sign_convention": SIGN_CONVENTION,
        }
    )


def _dual_payload(result) -> dict:
    canonical = tdual_mod.canonical_flux_rep(result)
    dual_total = total_space(result.dual_model).total
    return {
        "dual_euler_coords": _coords(result.dual_euler),
        "dual_flux_coords": _coords(result.dual_flux_coords()),
        "canonical_flux_coords": _coords(canonical),
        "ambiguity_rank": result.ambiguity_rank,
        "defining_equation": "ok" if result.certificate.solved else "failed",
        "h3_dual_total": cohomology(dual_total, 3).describe(),
        "h2_dual_total": cohomology(dual_total, 2).describe(),
    }


def _cmd_dualize(args, resolved: ResolvedSpec) -> Report:
    name = args.bundle
    if name not in resolved.bundles:
        raise PreconditionError(f"no bundle named {name!r} in the model file")
    model = resolved.bundles[name]
    flux_part = ""
    if args.flux is not None:
        if args.flux not in resolved.fluxes:
            raise PreconditionError(f"no flux named {args.flux!r} in the model file")
        coords = resolved.fluxes[args.flux]
        t = tdual_mod.triple_from_flux_coords(model, coords)
        flux_part = f" --flux {args.flux}"
    else:
        t = tdual_mod.triple(model)
    result = tdual_mod.dualize(t)
    total = total_space(model).total
    payload = {
        "command": f"dualize --bundle {name}" + flux_part,
        "degree_window": f"0..{total.top_degree}",
        "h2_total": cohomology(total, 2).describe(),
        **_dual_payload(result),
        "sign_convention": SIGN_CONVENTION,
    }
    return Report(payload)


def _action_space(spec: ActionSpec, resolved: ResolvedSpec) -> borel_mod.SemiFreeSpace:
    bundle = None
    if spec.kind == "free_bundle":
        entry = resolved.complexes[spec.base]
        euler_spec = spec.euler
        if euler_spec is None:
            from .dsl import EulerSpec

            euler_spec = EulerSpec(coeffs={})
        bundle = build_euler_model(entry, euler_spec)
    return borel_mod.SemiFreeSpace(
        spec.kind, charges=spec.charges, bundle=bundle, flux=spec.flux
    )


def _cmd_borel(args, resolved: ResolvedSpec) -> Report:
    name = args.action
    if name not in resolved.actions:
        raise PreconditionError(f"no action named {name!r} in the model file")
    spec = resolved.actions[name]
    space = _action_space(spec, resolved)
    n = spec.truncation
    bundle = borel_mod.truncated_borel(space, n)
    total = total_space(bundle.euler_s1).total
    window = 2 * n - 1
    table = {
        str(d): _group_entry(cohomology(total, d))
        for d in range(min(window, total.top_degree) + 1)
    }
    payload = {
        "command": f"borel --action {name} --route {args.route}",
        "kind": spec.kind,
        "truncation": n,
        "valid_window": f"degrees <= {window}",
        "total_cohomology": table,
        "h2_total": cohomology(total, 2).describe(),
        "sign_convention": SIGN_CONVENTION,
    }
    routes = {}
    results = {}
    if args.route in ("mw", "both"):
        results["mathai_wu"] = borel_mod.mathai_wu_dual(space, n)
        routes["mathai_wu"] = _dual_payload(results["mathai_wu"])
    if args.route in ("bunke", "both"):
        results["bunke"] = borel_mod.bunke_route_dual(space, n)
        routes["bunke"] = _dual_payload(results["bunke"])
    payload["routes"] = routes
    if len(results) == 2:
        agree = (
            routes["mathai_wu"]["dual_euler_coords"] == routes["bunke"]["dual_euler_coords"]
            and routes["mathai_wu"]["canonical_flux_coords"]
            == routes["bunke"]["canonical_flux_coords"]
        )
        payload["routes_agree"] = agree
        if not agree:
            raise InternalCheckError(
                "dualization routes disagree on " + name
            )
    return Report(payload)


def _verify_checks(resolved: ResolvedSpec, include_catalog: bool):
    checks: list[tuple[str, bool, str, bool]] = []
    # entries: (name, ok, detail, internal) where internal marks engine bugs

    for name, entry in resolved.complexes.items():
        rep = validate_complex(entry.complex)
        checks.append(
            (f"complex {name}: coboundary squares to zero", rep.valid, rep.detail or "", False)
        )

    for name, model in resolved.bundles.items():
        tsm = total_space(model)
        rep = validate_complex(tsm.total)
        checks.append((f"bundle {name}: total complex valid", rep.valid, rep.detail or "", True))
        seq = gysin_sequence(model, 0, tsm.total.top_degree)
        checks.append(
            (
                f"bundle {name}: Gysin sequence exact at all nodes",
                seq.exact,
                "",
                True,
            )
        )

    for name in resolved.fluxes:
        checks.append((f"flux {name}: coordinate vector well-formed", True, "", False))

    for name, spec in resolved.actions.items():
        try:
            space = _action_space(spec, resolved)
            n = spec.truncation
            borel_mod.truncated_borel(space, n)
            checks.append((f"action {name}: Borel model builds", True, "", False))
            stability = borel_mod.stability_check(space, n, max(2 * n - 1, 0))
            checks.append((f"action {name}: stable under N -> N+1", stability.stable, "", True))
            if spec.kind in ("point_fixed", "monopole", "free_hopf"):
                mw = borel_mod.mathai_wu_dual(space, n)
                bk = borel_mod.bunke_route_dual(space, n)
                agree = (
                    mw.dual_euler == bk.dual_euler
                    and tdual_mod.canonical_flux_rep(mw) == tdual_mod.canonical_flux_rep(bk)
                )
                checks.append((f"action {name}: dualization routes agree", agree, "", True))
        except PreconditionError as exc:
            checks.append((f"action {name}: {exc}", False, str(exc), False))

    if include_catalog:
        from .catalog import SHIPPED_LENS_PARAMETERS, catalog_build, euler_model_from_label_coeffs

        for cname in ("cp", "lens", "circle", "point", "sphere2", "torus2", "rp2"):
            params = {"cp": (2,), "lens": (5, 1)}.get(cname, ())
            model = catalog_build(cname, params)
            rep = validate_complex(model.complex)
            checks.append(
                (f"catalog {model.display_name}: valid complex", rep.valid, rep.detail or "", True)
            )
        for k, n in SHIPPED_LENS_PARAMETERS:
            cp = catalog_build("cp", (n,))
            model = euler_model_from_label_coeffs(cp, {"u": k})
            total = total_space(model).total
            lens = catalog_build("lens", (k, n)).complex
            ok = all(
                cohomology(total, d).shape == cohomology(lens, d).shape
                for d in range(2 * n + 2)
            )
            checks.append(
                (
                    f"catalog: twisted cone over cp({n}) with k={k} matches the "
                    "explicit rank-one model",
                    ok,
                    "",
                    True,
                )
            )
    return checks


def _cmd_verify(args, resolved: ResolvedSpec) -> Report:
    checks = _verify_checks(resolved, include_catalog=args.all)
    payload = {
        "command": "verify" + (" --all" if args.all else ""),
        "checks": [
            {"name": name, "ok": ok, **({"detail": detail} if detail else {})}
            for name, ok, detail, _ in checks
        ],
        "failures": sum(1 for _, ok, _, _ in checks if not ok),
        "sign_convention": SIGN_CONVENTION,
    }
    report = Report(payload)
    internal_failures = [name for name, ok, _, internal in checks if not ok and internal]
    user_failures = [name for name, ok, _, internal in checks if not ok and not internal]
    if internal_failures:
        raise VerifyFailure(report, EXIT_INTERNAL)
    if user_failures:
        raise VerifyFailure(report, EXIT_PRECONDITION)
    return report


class VerifyFailure(Exception):
    """Carries the verify report alongside the exit classification."""

    def __init__(self, report: Report, exit_code: int):
        self.report = report
        self.exit_code = exit_code
        super().__init__("verification failed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tduality",
        description="Exact T-duality computations for circle bundles and semi-free actions",
    )
    parser.add_argument("--json", action="store_true", help="structured output")
    sub = parser.add_subparsers(dest="command", required=True)

    def json_flag(p):
        # accepted before or after the subcommand; SUPPRESS keeps the
        # subparser from clobbering a value set at the top level
        p.add_argument(
            "--json", action="store_true", default=argparse.SUPPRESS,
            help="structured output",
        )

    p = sub.add_parser("cohom", help="cohomology table of a complex")
    p.add_argument("--complex", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    json_flag(p)
    p.add_argument("file")

    p = sub.add_parser("dualize", help="T-dualize a bundle with optional flux")
    p.add_argument("--bundle", required=True)
    p.add_argument("--flux", default=None)
    json_flag(p)
    p.add_argument("file")

    p = sub.add_parser("borel", help="dualize a semi-free action through its Borel model")
    p.add_argument("--action", required=True)
    p.add_argument("--route", choices=("mw", "bunke", "both"), default="mw")
    json_flag(p)
    p.add_argument("file")

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--all", action="store_true", help="include catalog self-checks")
    json_flag(p)
    p.add_argument("file")
    return parser


def execute(argv: Sequence[str], spec: SpecFile) -> Report:
    """Run one command against a parsed model file."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    resolved = resolve(spec)
    if args.command == "cohom":
        return _cmd_cohom(args, resolved)
    if args.command == "dualize":
        return _cmd_dualize(args, resolved)
    if args.command == "borel":
        return _cmd_borel(args, resolved)
    if args.command == "verify":
        return _cmd_verify(args, resolved)
    raise PreconditionError(f"unknown command {args.command!r}")


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    use_json = args.json

    def emit(report: Report):
        sys.stdout.write(report.render_json() if use_json else report.render_text())

    try:
        text = _read_source(args.file)
        spec = parse_spec(text)
        report = execute(argv_without_json(argv), spec)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        sys.stderr.write(f"cannot read input: {exc}\n")
        return EXIT_PARSE
    except VerifyFailure as exc:
        emit(exc.report)
        sys.stderr.write("verification failed\n")
        return exc.exit_code
    except PreconditionError as exc:
        sys.stderr.write(f"precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    except InternalCheckError as exc:
        sys.stderr.write(f"internal invariant failure: {exc}\n")
        return EXIT_INTERNAL
    emit(report)
    return EXIT_OK


def argv_without_json(argv: Sequence[str]) -> list[str]:
    return [a for a in argv if a != "--json"]


if __name__ == "__main__":
    sys.exit(main())
