"""Command-line front end.

Every command builds a plain-dict report first; the text output is rendered
from that same dict, so both renderings always carry the same numbers.

Exit codes: 0 success, 2 bad input or failed validation, 3 falsification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, catalog
from .cone import build_cone
from .invariants import betti, cohomology_table, semicharacteristics, verify_vanishing
from .model import GradedModel, validate
from .modelfile import ModelFileError, dump_model, load_model, model_hash
from .operators import D_kernel_parity, build_bundle, hodge_even_kernel_dim, laplacian_kernel_dims

EXIT_OK, EXIT_INVALID, EXIT_FALSIFIED = 0, 2, 3


def _provenance(model: GradedModel, p_values: list[int]) -> dict:
    return {
        "model": model.name,
        "model_hash": model_hash(model),
        "tool_version": __version__,
        "p_values": p_values,
    }


def _fmt_seq(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def ops_section(model: GradedModel) -> dict:
    bundle = build_bundle(build_cone(model, 1))
    hodge = hodge_even_kernel_dim(bundle)
    skew = D_kernel_parity(bundle)
    ell = semicharacteristics(model).ell
    out = {
        "hodge_even_kernel_dim": hodge.kernel_dim,
        "even_filtered_sum": hodge.even_sum,
        "laplacian_kernel_dims": laplacian_kernel_dims(bundle),
        "D_size": skew.size,
        "D_rank": skew.rank,
        "D_kernel_dim": skew.kernel_dim,
        "D_kernel_parity": skew.parity,
        "D_skew": skew.skew,
        "ell": ell,
        "parity_agrees": None if ell is None else skew.parity == ell,
    }
    return out


# --- report builders -------------------------------------------------------

def report_validate(model: GradedModel) -> tuple[dict, int]:
    rep = validate(model)
    failures = [{"invariant": f.invariant, "message": f.message, "witness": repr(f.witness)}
                for f in rep.failures]
    doc = {"command": "validate", "provenance": _provenance(model, []),
           "tables": {"validation": {"passed": rep.passed, "failures": failures}},
           "findings": [f"{f['invariant']}: {f['message']}" for f in failures]}
    return doc, EXIT_OK if rep.passed else EXIT_INVALID


def report_betti(model: GradedModel) -> tuple[dict, int]:
    doc = {"command": "betti", "provenance": _provenance(model, []),
           "tables": {"betti": {"b": betti(model)}}, "findings": []}
    return doc, EXIT_OK


def report_filtered(model: GradedModel, p: int) -> tuple[dict, int]:
    table = cohomology_table(model, p)
    findings = [] if table.paths_agree else ["formula and cone paths disagree"]
    doc = {"command": "filtered", "provenance": _provenance(model, [p]),
           "tables": {"filtered": table.as_dict()}, "findings": findings}
    return doc, EXIT_OK if table.paths_agree else EXIT_FALSIFIED


def report_semichar(model: GradedModel) -> tuple[dict, int]:
    sc = semicharacteristics(model)
    doc = {"command": "semichar", "provenance": _provenance(model, [0, 1]),
           "tables": {"semichar": sc.as_dict()}, "findings": []}
    return doc, EXIT_OK


def report_verify(model: GradedModel, with_ops: bool) -> tuple[dict, int]:
    rep = verify_vanishing(model)
    tables = {"verify": rep.as_dict()}
    findings = list(rep.findings)
    code = EXIT_OK if rep.passed else EXIT_FALSIFIED
    if with_ops and model.top_degree % 2 == 0:
        ops = ops_section(model)
        tables["ops"] = ops
        if ops["parity_agrees"] is False:
            findings.append("dim ker D parity differs from ell")
            code = EXIT_FALSIFIED
    doc = {"command": "verify", "provenance": _provenance(model, [1]),
           "tables": tables, "findings": findings}
    return doc, code


def report_ops(model: GradedModel) -> tuple[dict, int]:
    ops = ops_section(model)
    findings = []
    code = EXIT_OK
    if ops["parity_agrees"] is False:
        findings.append("dim ker D parity differs from ell")
        code = EXIT_FALSIFIED
    elif ops["ell"] is None:
        findings.append(
            f"top degree {model.top_degree} is not 2 mod 4; D kernel parity "
            f"{ops['D_kernel_parity']} vs even-sum parity {ops['even_filtered_sum'] % 2} recorded only")
    doc = {"command": "ops", "provenance": _provenance(model, [1]),
           "tables": {"ops": ops}, "findings": findings}
    return doc, code


# --- text rendering ------------------------------------------------------------

def render_text(doc: dict, all_degrees: bool = False) -> str:
    if "reports" in doc:
        return "\n".join(render_text(d, all_degrees) for d in doc["reports"])
    prov = doc.get("provenance", {})
    lines = [f"# {doc['command']}: {prov.get('model', '')}"]
    t = doc["tables"]
    if "validation" in t:
        lines.append("validation: " + ("pass" if t["validation"]["passed"] else "FAIL"))
        for f in t["validation"]["failures"]:
            lines.append(f"  {f['invariant']}: {f['message']} (witness {f['witness']})")
    if "betti" in t:
        lines.append("b = " + _fmt_seq(t["betti"]["b"]))
    if "filtered" in t:
        lines += _render_table(t["filtered"], all_degrees)
    if "semichar" in t:
        s = t["semichar"]
        lines.append(f"ell = {'n/a' if s['ell'] is None else s['ell']}")
        lines.append(f"kChar = {'n/a' if s['k_char'] is None else s['k_char']}")
        lines.append(f"p=1 even sum = {s['p1_even_sum']}")
        lines.append(f"p=0 even sum = {s['p0_even_sum']}")
    if "verify" in t:
        v = t["verify"]
        if v["theorem_applicable"]:
            lines.append(f"ell = {v['ell_direct']} (formula path {v['ell_formula']})")
        else:
            lines.append(f"theorem not applicable (top degree {v['top_degree']}); "
                         f"even-sum parity = {v['ell_direct']}")
        lines.append(f"even sum = {v['table']['even_sum']}")
        lines.append(f"paths agree = {v['paths_agree']}")
        lines.append("result: " + ("pass" if v["passed"] else "FAIL"))
        if all_degrees:
            lines += _render_table(v["table"], True)
    if "ops" in t:
        o = t["ops"]
        lines.append(f"hodge even kernel dim = {o['hodge_even_kernel_dim']} "
                     f"(even filtered sum {o['even_filtered_sum']})")
        lines.append("laplacian kernel dims = " + _fmt_seq(o["laplacian_kernel_dims"]))
        lines.append(f"D: {o['D_size']}x{o['D_size']}, skew = {o['D_skew']}, rank = {o['D_rank']}, "
                     f"kernel dim = {o['D_kernel_dim']}, parity = {o['D_kernel_parity']}")
        if o["ell"] is not None:
            lines.append(f"parity agrees with ell = {o['parity_agrees']}")
    for f in doc.get("findings", []):
        lines.append(f"finding: {f}")
    return "\n".join(lines)


def _render_table(tab: dict, all_degrees: bool) -> list[str]:
    lines = [f"p = {tab['p']}",
             "b = " + _fmt_seq(tab["b"]),
             "r = " + _fmt_seq(tab["r"])]
    direct = tab["b_phi_direct"]
    if all_degrees:
        lines.append("b_phi = " + _fmt_seq(direct))
        lines.append("b_phi (formula) = " + _fmt_seq(tab["b_phi_formula"]))
    lines.append("even part = " + _fmt_seq(direct[0::2]))
    lines.append(f"even sum = {tab['even_sum']}")
    lines.append(f"alternating sum = {tab['alternating_sum']}")
    lines.append(f"paths agree = {tab['paths_agree']}")
    return lines


# --- argument handling ---------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="filtcone", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, model: bool = True) -> None:
        if model:
            p.add_argument("model", help="@catalog_name or path to a JSON model file")
        p.add_argument("--json", "--out", dest="json", metavar="PATH",
                       help="write the machine-readable report here ('-' for stdout)")
        p.add_argument("--all-degrees", action="store_true", help="print every degree")

    common(sub.add_parser("validate", help="check the cdga invariants"))
    common(sub.add_parser("betti", help="de Rham Betti numbers"))
    p = sub.add_parser("filtered", help="p-filtered Betti numbers")
    common(p)
    p.add_argument("-p", type=int, default=1)
    common(sub.add_parser("semichar", help="semi-characteristics ell and k"))
    p = sub.add_parser("verify", help="check the vanishing of ell")
    common(p, model=False)
    p.add_argument("model", nargs="*")
    p.add_argument("--dir", type=Path, help="verify every *.json file in a directory")
    p.add_argument("--with-ops", action="store_true", help="include operator checks")
    common(sub.add_parser("ops", help="Hodge and skew operator checks"))
    p = sub.add_parser("catalog", help="built-in models")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    return ap


def _emit(doc: dict, args) -> None:
    if args.json == "-":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    if args.json:
        Path(args.json).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    sys.stdout.write(render_text(doc, getattr(args, "all_degrees", False)) + "\n")


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)

    if args.command == "catalog":
        if args.action == "list":
            sys.stdout.write("\n".join(catalog.names()) + "\n")
            return EXIT_OK
        if not args.name:
            sys.stderr.write("catalog show needs a model name\n")
            return EXIT_INVALID
        try:
            sys.stdout.write(dump_model(catalog.get(args.name)))
        except KeyError as exc:
            sys.stderr.write(f"error: {exc.args[0]}\n")
            return EXIT_INVALID
        return EXIT_OK

    if args.command == "verify":
        refs: list[str] = list(args.model)
        if args.dir:
            refs += [str(p) for p in sorted(args.dir.glob("*.json"), key=lambda p: p.name)]
        if not refs:
            sys.stderr.write("verify needs a model or --dir\n")
            return EXIT_INVALID
        docs, codes = [], []
        for ref in refs:
            try:
                model = load_model(ref)
            except ModelFileError as exc:
                sys.stderr.write(f"error: {ref}: {exc}\n")
                codes.append(EXIT_INVALID)
                continue
            doc, code = report_verify(model, args.with_ops)
            docs.append(doc)
            codes.append(code)
        _emit(docs[0] if len(refs) == 1 and docs else {"command": "verify", "reports": docs}, args)
        return max(codes)

    try:
        model = load_model(args.model)
    except ModelFileError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID

    if args.command == "validate":
        doc, code = report_validate(model)
    elif args.command == "betti":
        doc, code = report_betti(model)
    elif args.command == "filtered":
        if args.p < 0:
            sys.stderr.write("error: -p must be non-negative\n")
            return EXIT_INVALID
        doc, code = report_filtered(model, args.p)
    elif args.command == "semichar":
        doc, code = report_semichar(model)
    else:
        if model.top_degree % 2:
            sys.stderr.write("error: operator checks need an even top degree\n")
            return EXIT_INVALID
        doc, code = report_ops(model)
    _emit(doc, args)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
