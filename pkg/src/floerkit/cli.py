"""Command-line front end.

Exit codes: 0 success, 1 comparison mismatch, 2 invalid input, 3 window
refusal, 4 search bound exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Dict, List, Optional, Sequence

from . import __version__
from .cells import (CellError, SearchExhausted, connect_decorations,
                    enumerate_deperturbed, format_moves, iso, parse_cells, parse_moves, predicates,
                    replay, serialize_cells, validate_cells)
from .cobordism import (SHAPE_NAMES, WordError, evaluate_word, fixture_shapes, parse_word)
from .complex import (Complex, ParseError, PointedModel, identity, quasi_stabilize,
                      serialize_complex, serialize_map, validate)
from .fixtures import RegistryError, load_complex, load_maps, startup_check
from .homology import MAX_WINDOW_CELLS, HilbertTable, Window, WindowError
from .invariants import (compare_decomps, compare_torus, distinguish, hf_circ_decomp,
                         invariant_report, torus_closed_form, trace_class)
from .poly import Flavor

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_WINDOW, EXIT_SEARCH = 0, 1, 2, 3, 4


class CliFailure(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliFailure(EXIT_INVALID, f"cannot read {path}: {e.strerror}") from None


def _hash_inputs(parts: Sequence[str]) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()[:16]


def _table_lines(label: str, t: HilbertTable) -> List[str]:
    if not t:
        return [f"{label}: 0"]
    out = [f"{label}: total {t.total()}"]
    for g in sorted(t):
        out.append(f"  ({g.gr_w},{g.gr_z}) : {t[g]}")
    return out


def _window(args, C: Complex) -> Window:
    if args.window:
        W = Window(*args.window)
        if W.cells > MAX_WINDOW_CELLS:
            raise WindowError(f"window {W} exceeds the cap of {MAX_WINDOW_CELLS} cells")
        return W
    return Window.around(C)


def _model(C: Complex, stabilize: int) -> PointedModel:
    M = PointedModel.from_complex(C) if C.basepoint_pairs == 1 else None
    if M is None:
        raise CliFailure(EXIT_INVALID, "multi-pair fixtures need explicit basepoint maps")
    for _ in range(stabilize):
        M = quasi_stabilize(M)
    return M


# ---------------------------------------------------------------- commands

def cmd_compute(args) -> Dict:
    C = load_complex(args.fixture)
    flavor = Flavor.parse(args.flavor)
    W = _window(args, C)
    M = _model(C, args.stabilize)
    rep = invariant_report(M, flavor, W, fixture=args.fixture)
    groups = [args.group] if args.group else ["hfl", "hf", "hf_w"]
    if flavor is Flavor.HAT and "hf_w" in groups:
        if args.group:
            raise CliFailure(EXIT_INVALID, "hf_w is not defined for the hat flavor")
        groups.remove("hf_w")
    res = {"flavor": flavor.value, "window": W.as_list(),
           "trusted": W.interior(2).as_list()}
    lines = [f"fixture {args.fixture} flavor {flavor.value} window {W.as_list()}"]
    for g in groups:
        table = getattr(rep, g)
        res[g] = table.as_list()
        lines += _table_lines(g, table)
        dec = getattr(rep, f"{g}_decomp")
        if dec is not None:
            res[f"{g}_decomp"] = dec.as_list()
            lines.append(f"{g} module: {dec}")
    return {"results": res, "text": lines,
            "inputs": [serialize_complex(C), flavor.value, str(W.as_list()), args.group or "",
                       str(args.stabilize)]}


def cmd_verify(args) -> Dict:
    C = load_complex(args.fixture)
    target = args.against
    if target is None:
        if not args.fixture.startswith("torus:"):
            raise CliFailure(EXIT_INVALID, "give --against for non-torus fixtures")
        target = args.fixture
    if target.startswith("torus:"):
        try:
            p, q = (int(t) for t in target[6:].split(","))
            form = torus_closed_form(p, q, pairing=args.pairing)
        except ValueError as e:
            raise CliFailure(EXIT_INVALID, f"bad torus target {target!r}: {e}") from None
        cmp = compare_torus(C, form)
        expected = str(form.circ_w)
    elif target.startswith("shape:") or target in SHAPE_NAMES:
        name = target.split(":", 1)[-1]
        try:
            exp = fixture_shapes(name)
        except KeyError as e:
            raise CliFailure(EXIT_INVALID, str(e.args[0])) from None
        cmp = compare_decomps(hf_circ_decomp(C), exp)
        expected = str(exp)
    else:
        raise CliFailure(EXIT_INVALID, f"unknown comparator {target!r}")
    res = {"against": target, "match": cmp.match,
           "shift": list(cmp.shift) if cmp.shift is not None else None,
           "mismatches": cmp.mismatches, "expected": expected}
    lines = [f"verify {args.fixture} against {target}: {'match' if cmp.match else 'MISMATCH'}"]
    if cmp.match:
        lines.append(f"  global shift {tuple(cmp.shift)}")
    lines += [f"  {m}" for m in cmp.mismatches]
    return {"results": res, "text": lines, "code": EXIT_OK if cmp.match else EXIT_MISMATCH,
            "inputs": [serialize_complex(C), target, args.pairing]}


def _load_cells(path: str):
    text = _read(path)
    D = parse_cells(text)
    rep = validate_cells(D)
    if not rep.ok:
        raise CliFailure(EXIT_INVALID, f"{path}: " + "; ".join(rep.problems))
    return D, text


def cmd_moves(args) -> Dict:
    if args.action == "enumerate":
        try:
            classes = enumerate_deperturbed(args.genus, args.plus, args.minus)
        except CellError as e:
            raise CliFailure(EXIT_INVALID, str(e)) from None
        lines = [f"{len(classes)} deperturbed classes for genus {args.genus}, "
                 f"{args.plus} plus, {args.minus} minus"]
        for k, D in enumerate(classes):
            lines.append(f"# class {k}")
            lines += serialize_cells(D).splitlines()
        return {"results": {"count": len(classes),
                            "classes": [serialize_cells(D) for D in classes]},
                "text": lines, "inputs": ["enumerate", str(args.genus), str(args.plus), str(args.minus)]}
    if args.action == "connect":
        if len(args.files) != 2:
            raise CliFailure(EXIT_INVALID, "connect needs two cell files")
        (D1, t1), (D2, t2) = (_load_cells(p) for p in args.files)
        try:
            seq = connect_decorations(D1, D2, bound=args.bound)
        except SearchExhausted as e:
            raise CliFailure(EXIT_SEARCH, str(e)) from None
        except CellError as e:
            raise CliFailure(EXIT_INVALID, str(e)) from None
        ok = iso(replay(D1, seq), D2)
        script = format_moves(seq)
        return {"results": {"moves": len(seq), "script": script, "replay_verified": ok},
                "text": script.splitlines() + [f"# {len(seq)} moves, replay verified: {ok}"],
                "inputs": [t1, t2, str(args.bound)]}
    if args.action == "replay":
        if len(args.files) not in (2, 3):
            raise CliFailure(EXIT_INVALID, "replay needs a cell file, a script and optionally a target")
        D, t1 = _load_cells(args.files[0])
        script = _read(args.files[1])
        try:
            end = replay(D, parse_moves(script))
        except CellError as e:
            raise CliFailure(EXIT_INVALID, str(e)) from None
        res = {"result": serialize_cells(end), "genus": end.genus, "predicates": predicates(end)}
        lines = serialize_cells(end).splitlines()
        code = EXIT_OK
        inputs = [t1, script]
        if len(args.files) == 3:
            T, t3 = _load_cells(args.files[2])
            res["matches_target"] = iso(end, T)
            lines.append(f"# matches target: {res['matches_target']}")
            code = EXIT_OK if res["matches_target"] else EXIT_MISMATCH
            inputs.append(t3)
        return {"results": res, "text": lines, "code": code, "inputs": inputs}
    raise CliFailure(EXIT_INVALID, f"unknown moves action {args.action!r}")


def cmd_cobordism(args) -> Dict:
    text = args.word if args.word is not None else _read(args.script)
    word = parse_word(text)
    r = evaluate_word(word)
    flavor = Flavor.parse(args.flavor)
    note = r.notes()[flavor.value]
    lines = [str(r), f"{flavor.value}: {note}"]
    if flavor is not Flavor.HAT and r.hat_zero:
        lines.append("hat: zero")
    return {"results": {"scalar": str(r), "k": r.k, "notes": r.notes()}, "text": lines,
            "inputs": [text, flavor.value]}


def cmd_slice(args) -> Dict:
    C = load_complex(args.complex)
    L = load_maps(args.maps, C)
    if L.complex != C:
        raise CliFailure(EXIT_INVALID, "map fixture is defined on a different complex")
    names = list(L.maps)
    first = args.map or names[0]
    if first not in L.maps:
        raise CliFailure(EXIT_INVALID, f"no map {first!r}; available: {', '.join(names)}")
    f = L.maps[first]
    if args.other and args.other != "identity":
        if args.other not in L.maps:
            raise CliFailure(EXIT_INVALID, f"no map {args.other!r}")
        g = L.maps[args.other]
    else:
        g = identity(C)
    try:
        t1, t2 = trace_class(C, f), trace_class(C, g)
    except ValueError as e:
        raise CliFailure(EXIT_INVALID, str(e)) from None
    diff = t1 + t2
    verdict = {}
    for fl in Flavor:
        verdict[fl.value] = "distinct" if distinguish(t1, t2, fl) else "equal"
    distinct = [k for k, v in verdict.items() if v == "distinct"]
    summary = ("distinct in " + ", ".join(distinct)) if distinct else "equal"
    terms = sorted(diff.cycle)
    lines = [f"difference cycle: {' + '.join(terms) if terms else '0'} (closed)",
             *(f"{k}: {v}" for k, v in verdict.items()), summary]
    return {"results": {"difference": terms, "closed": True, "verdict": verdict,
                        "summary": summary},
            "text": lines,
            "inputs": [serialize_complex(C), serialize_map(first, C, f.entries),
                       serialize_map("other", C, g.entries)]}


def cmd_validate(args) -> Dict:
    text = _read(args.file) if args.file != "-" else sys.stdin.read()
    head = next((ln.split()[0] for ln in text.splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")), "")
    if head in ("vertex", "edge", "cell"):
        D = parse_cells(text)
        rep = validate_cells(D)
        res = {"kind": "cells", "ok": rep.ok, "genus": rep.genus, "problems": rep.problems}
        if rep.ok:
            res["predicates"] = predicates(D)
        lines = [f"cells: {'ok' if rep.ok else 'INVALID'}"]
        if rep.ok:
            lines.append(f"genus {rep.genus}; " + ", ".join(f"{k}={v}" for k, v in res["predicates"].items()))
        lines += [f"  {p}" for p in rep.problems]
        return {"results": res, "text": lines, "code": EXIT_OK if rep.ok else EXIT_INVALID,
                "inputs": [text]}
    from .complex import parse_complex
    C = parse_complex(text)
    rep = validate(C)
    res = {"kind": "complex", "ok": rep.ok, "d_squared_zero": rep.d_squared_zero,
           "homogeneous": rep.homogeneous, "reduced": rep.reduced, "problems": rep.problems}
    lines = [f"complex {C.name}: {'ok' if rep.ok else 'INVALID'}",
             f"  d^2 = 0: {rep.d_squared_zero}; homogeneous: {rep.homogeneous}; reduced: {rep.reduced}"]
    lines += [f"  {p}" for p in rep.problems]
    return {"results": res, "text": lines, "code": EXIT_OK if rep.ok else EXIT_INVALID,
            "inputs": [text]}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="floerkit", description="Bigraded knot Floer toolkit")
    p.add_argument("--version", action="version", version=f"floerkit {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="HFL / HF / HF_w tables")
    c.add_argument("fixture")
    c.add_argument("group", nargs="?", choices=["hfl", "hf", "hf_w"])
    c.add_argument("--flavor", default="minus", choices=[f.value for f in Flavor])
    c.add_argument("--window", nargs=4, type=int, metavar=("W_LO", "W_HI", "Z_LO", "Z_HI"))
    c.add_argument("--stabilize", type=int, default=0, help="quasi-stabilize N times first")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", parents=[common], help="compare with a closed form")
    v.add_argument("fixture")
    v.add_argument("--against", help="torus:p,q or shape:<name>")
    v.add_argument("--pairing", default="graded", choices=["graded", "literal"])
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("moves", parents=[common], help="cell decomposition moves")
    m.add_argument("action", choices=["connect", "enumerate", "replay"])
    m.add_argument("files", nargs="*")
    m.add_argument("--genus", type=int, default=0)
    m.add_argument("--plus", type=int, default=1)
    m.add_argument("--minus", type=int, default=1)
    m.add_argument("--bound", type=int, default=10 ** 5)
    m.set_defaults(func=cmd_moves)

    b = sub.add_parser("cobordism", parents=[common], help="evaluate a cobordism word")
    b.add_argument("script", nargs="?", default="-")
    b.add_argument("--word", help="inline word, tokens separated by ';'")
    b.add_argument("--flavor", default="circ", choices=[f.value for f in Flavor])
    b.set_defaults(func=cmd_cobordism)

    s = sub.add_parser("slice", parents=[common], help="compare trace classes of two maps")
    s.add_argument("complex")
    s.add_argument("maps")
    s.add_argument("--map")
    s.add_argument("--other", help="second map name (default: identity)")
    s.set_defaults(func=cmd_slice)

    x = sub.add_parser("validate", parents=[common], help="validate a complex or cell file")
    x.add_argument("file")
    x.set_defaults(func=cmd_validate)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    t0 = time.perf_counter()
    try:
        startup_check()
        rep = args.func(args)
    except CliFailure as e:
        print(f"error: {e}", file=err)
        return e.code
    except WindowError as e:
        print(f"refused: {e}", file=err)
        return EXIT_WINDOW
    except SearchExhausted as e:
        print(f"search exhausted: {e}", file=err)
        return EXIT_SEARCH
    except (ParseError, RegistryError, CellError, WordError, ValueError, KeyError,
            ArithmeticError) as e:
        print(f"error: {e}", file=err)
        return EXIT_INVALID
    code = rep.get("code", EXIT_OK)
    report = {"command": list(argv if argv is not None else sys.argv[1:]),
              "inputs_hash": _hash_inputs([args.command] + rep["inputs"]),
              "results": rep["results"],
              "timing_s": round(time.perf_counter() - t0, 4),
              "version": __version__}
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, default=str), file=out)
    else:
        for line in rep["text"]:
            print(line, file=out)
        print(f"# inputs {report['inputs_hash']} floerkit {__version__}", file=out)
    return code


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser"]
