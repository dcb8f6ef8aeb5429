"""Command-line interface: one JSON record per line on stdout.

Exit status is 0 on success, 1 when the input (or a golden table) fails
validation and 2 when a computation fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .aq import AqDescriptor, AqError, aq_report, case_list_checksum, CASES_SHA256
from .characters import c_q, kostant_highest_weights
from .descent import DescentError, ExplicitModule, descend_if_possible, local_global_check
from .fs import (
    CompactFormDescriptor,
    FSError,
    admissibility_report,
    beta_map,
    class_S_indicator,
    classify_admissible_forms,
    fs_indicator_compact,
    fs_indicator_oracle,
    unconditional_forms,
)
from .lattice import LatticeError, parse_form
from .qfield import FieldError
from .roots import OrbitCapExceeded, RootSystemError, build_root_system

PROVENANCE = f"aqlam {__version__}"
GOLDEN = {"admissible": "admissible_forms.jsonl", "unconditional": "unconditional_forms.jsonl"}
GOLDEN_MAX_RANK = 8


class ValidationError(ValueError):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    return x


def emit(kind, query, result, rule_trace, provenance=PROVENANCE, out=None):
    out = out or sys.stdout
    rec = {"kind": kind, "query": query, "result": result, "rule_trace": list(rule_trace), "provenance": provenance}
    out.write(json.dumps(_jsonable(rec), sort_keys=True) + "\n")


def _ints(text):
    if text is None or text == "":
        return []
    try:
        return [int(x) for x in str(text).split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def _fractions(text):
    if text is None or text == "":
        return []
    try:
        return [Fraction(x) for x in str(text).split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from exc


def _load_file(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read descriptor {path}: {exc}") from exc


def _require(d: dict, keys, kind):
    if not isinstance(d, dict):
        raise ValidationError(f"{kind} descriptor must be an object")
    missing = [k for k in keys if k not in d]
    if missing:
        raise ValidationError(f"{kind} descriptor is missing {missing}")


# -- subcommands -------------------------------------------------------------------


def cmd_classify(args):
    rows = unconditional_forms(args.max_rank) if args.unconditional else classify_admissible_forms(args.max_rank)
    table = "unconditional" if args.unconditional else "admissible"
    for row in rows:
        if args.unconditional:
            trace = ["center dual of odd order" if row["subgroup_order"] % 2 else "center dual of even order"]
        else:
            trace = ["beta trivial on conjugation-fixed classes" if row["verdict"] == "yes"
                     else "beta nontrivial on a conjugation-fixed class"]
        emit("classify-forms", {"max_rank": args.max_rank, "table": table}, row, trace)
    return 0


def cmd_fs(args):
    d = _load_file(args.file) if args.file else None
    if d is not None and "admissibility" in d:
        rep = admissibility_report(d["admissibility"])
        emit("fs", d, rep.as_dict(), rep.rule_trace or ["required facts missing"])
        return 0
    if d is None:
        if not args.type or (args.lam is None and not args.beta):
            raise ValidationError("fs needs --type and --lambda or --beta (or --file)")
        d = {"cartan_type": args.type, "form": args.form}
        if args.beta:
            d["beta"] = True
        else:
            d.update({"lambda": _ints(args.lam), "oracle": args.oracle})
    if d.get("torus_rank"):
        desc = CompactFormDescriptor(None, int(d["torus_rank"]), d.get("outer"))
        ind = class_S_indicator(desc, tuple(int(x) for x in d["lambda"]))
        emit("fs", d, {"indicator": ind.value, "kind": ind.kind}, [ind.case])
        return 0
    _require(d, ["cartan_type"], "fs")
    rs = build_root_system(d["cartan_type"])
    form = parse_form(rs, d.get("form", "sc"))
    if d.get("beta"):
        res = beta_map(form)
        emit("fs", d, {"beta": [[list(k), v] for k, v in sorted(res.items())], "form_label": form.label},
             ["beta checked on two self-dual representatives per class", "beta is a homomorphism"])
        return 0
    _require(d, ["lambda"], "fs")
    lam = tuple(int(x) for x in d["lambda"])
    if d.get("outer") is not None:
        outer = d["outer"] if d["outer"] == "negate" else tuple(d["outer"])
        ind = class_S_indicator(CompactFormDescriptor(form, 0, outer), lam)
    else:
        ind = fs_indicator_compact(form, lam)
    result = {"indicator": ind.value, "kind": ind.kind, "form_label": form.label}
    trace = [ind.case]
    if d.get("oracle"):
        orc = fs_indicator_oracle(form, lam)
        result["oracle"] = orc.value
        trace.append("invariant count in Sym^2 minus Alt^2")
    emit("fs", d, result, trace)
    return 0


def cmd_descend(args):
    d = _load_file(args.file)
    _require(d, ["dimension", "generators"], "descend")
    m = ExplicitModule.from_json(d)
    res = descend_if_possible(m)
    trace = {
        "real": ["restriction of scalars has split endomorphism algebra", "model extracted from a zero divisor",
                 "model verified by an invertible intertwiner"],
        "complex": ["endomorphism algebra of the restriction is a quadratic field"],
        "quaternionic": ["endomorphism algebra of the restriction is a division quaternion algebra"],
    }[res.verdict]
    if res.model is None and m.field is None:
        trace = ["already defined over Q"]
    emit("descend", {"file": str(args.file)}, res.as_dict(), trace)
    return 0


def cmd_local_global(args):
    try:
        a, b = Fraction(args.a), Fraction(args.b)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    if a == 0 or b == 0:
        raise ValidationError("Hilbert symbol arguments must be nonzero")
    res = local_global_check(a, b)
    trace = [f"(a, b)_v = -1 at {res['ramified']}", "number of ramified places is even" if res["parity_ok"]
             else "parity check failed"]
    emit("local-global", {"a": str(a), "b": str(b)}, res, trace)
    return 0


def cmd_aq_report(args):
    if args.file:
        d = _load_file(args.file)
    else:
        if not args.type and args.form_kind not in ("gl_n_real", "gl_n_complex"):
            raise ValidationError("aq-report needs --type (or --file)")
        d = {
            "cartan_type": args.type,
            "form_kind": args.form_kind,
            "isogeny_form": args.form,
            "noncompact_marks": _ints(args.marks),
            "levi_subset": _ints(args.levi),
            "arithmetic_flags": {},
        }
        if args.n:
            d["n"] = args.n
        if args.lam:
            d["lambda_coords"] = [str(x) for x in _fractions(args.lam)]
        if args.semi_admissible is not None:
            d["arithmetic_flags"]["semi_admissible"] = args.semi_admissible == "yes"
    try:
        desc = AqDescriptor.from_dict(d)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed aq descriptor: {exc}") from exc
    rep = aq_report(desc, d.get("arithmetic_flags"))
    trace = rep.pop("rule_trace")
    emit("aq-report", d, rep, trace)
    return 0


def cmd_character(args):
    if args.file:
        d = _load_file(args.file)
    else:
        if not args.type:
            raise ValidationError("character needs --type (or --file)")
        d = {"cartan_type": args.type, "levi_subset": _ints(args.levi), "lambda": _ints(args.lam)}
    _require(d, ["cartan_type", "lambda"], "character")
    rs = build_root_system(d["cartan_type"])
    levi = frozenset(int(i) for i in d.get("levi_subset", []))
    lam = tuple(int(x) for x in d["lambda"])
    loc = c_q(rs, levi, lam)
    result = {
        "numerator": loc.numerator.to_list(),
        "denominator": loc.denominator.to_list(),
        "kostant": [[q, list(mu)] for q, mu in kostant_highest_weights(rs, levi, lam)],
    }
    emit("character", d, result, ["Kostant: constituents indexed by minimal coset representatives",
                                  "numerator is the Euler characteristic, denominator its value at the trivial module"])
    return 0


def _golden_rows(name, golden_dir):
    if golden_dir:
        text = (Path(golden_dir) / GOLDEN[name]).read_text()
    else:
        text = resources.files("aqlam.data").joinpath(GOLDEN[name]).read_text()
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def verify_golden_tables(max_rank: int = GOLDEN_MAX_RANK, golden_dir=None) -> dict:
    """Regenerate the computable tables and diff them against the golden files."""
    report = {"tables": {}, "ok": True}
    for name, gen in (("admissible", classify_admissible_forms), ("unconditional", unconditional_forms)):
        golden = _golden_rows(name, golden_dir)
        computed = gen(max_rank)
        key = lambda r: (r["series"], r["rank"], r["form_label"])  # noqa: E731
        gmap = {key(r): r for r in golden}
        cmap = {key(r): r for r in computed}
        diffs, uncovered = [], []
        for r in computed:
            k = key(r)
            if k not in gmap:
                uncovered.append(r)
            elif gmap[k] != r:
                diffs.append({"golden": gmap[k], "computed": r})
        missing = [g for k, g in gmap.items() if k not in cmap and g["rank"] <= max_rank]
        entry = {
            "rows": len(computed),
            "mismatches": len(diffs),
            "uncovered": len(uncovered),
            "missing": len(missing),
            "first_divergent": diffs[0] if diffs else (missing[0] if missing else None),
            "uncovered_rows": uncovered,
            "divergent_rows": diffs,
        }
        report["tables"][name] = entry
        if diffs or missing:
            report["ok"] = False
    digest = case_list_checksum()
    report["tables"]["standard_module_cases"] = {"sha256": digest, "expected": CASES_SHA256}
    if digest != CASES_SHA256:
        report["ok"] = False
    return report


def cmd_verify(args):
    rep = verify_golden_tables(args.max_rank, args.golden_dir)
    for name, entry in rep["tables"].items():
        if name == "standard_module_cases":
            ok = entry["sha256"] == entry["expected"]
            emit("verify", {"table": name}, {"pass": ok, **entry}, ["checksum of shipped case list"])
            continue
        ok = entry["mismatches"] == 0 and entry["missing"] == 0
        trace = [f"regenerated {entry['rows']} rows"]
        if entry["first_divergent"] is not None:
            trace.append(f"first divergent row: {json.dumps(entry['first_divergent'], sort_keys=True)}")
        if entry["uncovered"]:
            trace.append(f"{entry['uncovered']} rows beyond golden coverage flagged uncovered")
        result = {k: v for k, v in entry.items() if k not in ("uncovered_rows",)}
        result["uncovered_rows"] = [f"{r['series']}{r['rank']} {r['form_label']}" for r in entry["uncovered_rows"]]
        result["pass"] = ok
        emit("verify", {"table": name, "max_rank": args.max_rank}, result, trace)
    return 0 if rep["ok"] else 1


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aqlam", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=PROVENANCE)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify-forms", help="admissibility table of compact forms")
    s.add_argument("--max-rank", type=int, default=8)
    s.add_argument("--unconditional", action="store_true", help="forms admissible over every number field")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("fs", help="Frobenius-Schur indicator of a compact group representation")
    s.add_argument("--type")
    s.add_argument("--form", default="sc")
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--beta", action="store_true", help="report the beta map of the form")
    s.add_argument("--file")
    s.set_defaults(func=cmd_fs)

    s = sub.add_parser("descend", help="descent of an explicit module to Q")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_descend)

    s = sub.add_parser("local-global", help="ramification of the quaternion algebra (a, b) over Q")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_local_global)

    s = sub.add_parser("aq-report", help="invariants and field of definition of A_q(lambda)")
    s.add_argument("--file")
    s.add_argument("--type")
    s.add_argument("--form-kind", default="compact",
                   choices=["compact", "equal_rank_inner", "complex", "gl_n_real", "gl_n_complex"])
    s.add_argument("--form", default="sc")
    s.add_argument("--marks")
    s.add_argument("--levi")
    s.add_argument("--lambda", dest="lam")
    s.add_argument("--n", type=int)
    s.add_argument("--semi-admissible", choices=["yes", "no"])
    s.set_defaults(func=cmd_aq_report)

    s = sub.add_parser("character", help="localized character c_q of a finite-dimensional module")
    s.add_argument("--file")
    s.add_argument("--type")
    s.add_argument("--levi")
    s.add_argument("--lambda", dest="lam")
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("verify", help="diff regenerated tables against the golden files")
    s.add_argument("--max-rank", type=int, default=GOLDEN_MAX_RANK)
    s.add_argument("--golden-dir")
    s.set_defaults(func=cmd_verify)
    return p


VALIDATION_ERRORS = (ValidationError, LatticeError, RootSystemError, FieldError, AqError, FSError, DescentError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except OrbitCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VALIDATION_ERRORS as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, RuntimeError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
