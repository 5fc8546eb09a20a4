"""Command-line front end.

Every command can emit a JSON certificate (``--json``).  A certificate holds
the raw input, the normalized input and the canonical arguments; ``replay``
re-runs the command on those arguments and checks the document comes back
byte for byte.

Exit codes: 0 success, 2 a sound negative verdict, 1 error, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable

from . import __version__
from .cardinal import UnknownCardinal, assume_ch, ch_assumed
from .decide import (
    Route,
    Verdict,
    finite_index_kernels,
    leading_invariant_criterion,
    minap_admissible,
    pvn_test,
    zariski_connected,
)
from .decompose import PlanNode, minap_plan, nice_decomposition, w_split
from .descriptor import (
    DescriptorError,
    cardinality,
    essential_order,
    exponent_of,
    realize_designator,
    ulm_kaplansky,
    zariski_component,
)
from .extend import FinAbGroup, TorusTupleHom, check_extension, extend_mono, subgroup_of
from .hmdense import (
    OrdersExhausted,
    cyclic_sum_chain,
    density_audit,
    hds_generators,
    independent_exhaustive_prefix,
    prufer_chain,
)
from .hmstep import BasicNeighborhood, divide_in_open_set, parse_step, step_to_json, sup_support, torsion_divide
from .qtorus import ThresholdNotMet, parse_point
from .textio import ParseError, format_designator, parse_descriptor, parse_designator

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which means "negative verdict" here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# A handler takes canonical args and returns (normalized, result, text, exit code).
Outcome = tuple[object, dict, str, int]
HANDLERS: dict[str, Callable[[dict], Outcome]] = {}


def handler(name: str):
    def deco(fn):
        HANDLERS[name] = fn
        return fn

    return deco


def _verdict_line(label: str, v: Verdict) -> str:
    w = v.to_json()["witness"]
    detail = ", ".join(f"{k}={val}" for k, val in w.items() if k != "kind")
    route = ", ".join(r.value for r in v.route)
    return f"{label}: {'YES' if v.answer else 'NO'}  witness {w['kind']}({detail})  route [{route}]"


# ------------------------------------------------------------------ descriptor commands


@handler("analyze")
def _analyze(a: dict) -> Outcome:
    G = parse_descriptor(a["expr"])
    mv = minap_admissible(G)
    zv = zariski_connected(G)
    if not mv.answer:
        # report the finite-index obstruction G[m]; the leading-invariant witness is kept alongside
        mv = Verdict(False, zv.route + (Route.MINAP_IFF_CONNECTED,), zv.witness)
    res = {
        "cardinality": str(cardinality(G)),
        "bounded": G.is_bounded,
        "exponent": exponent_of(G),
        "essential_order": essential_order(G),
        "zariski_component": str(zariski_component(G)) if G.is_bounded else str(G),
        "finite_index_kernels": [[m, str(k)] for m, k in finite_index_kernels(G)],
        "zariski_connected": zv.to_json(),
        "minap": mv.to_json(),
    }
    if G.is_bounded and not G.is_trivial and not leading_invariant_criterion(G):
        res["minap_leading_invariant"] = minap_admissible(G).to_json()
    lines = [f"group: {G}", f"|G| = {res['cardinality']}, exponent {res['exponent'] or 'infinite'}"]
    if G.is_bounded and not G.is_trivial:
        uk = ulm_kaplansky(G)
        res["ulm_kaplansky"] = {f"{p},{i}": str(k) for (p, i), k in sorted(uk.table.items())}
        lines.append("Ulm-Kaplansky: " + ", ".join(f"a({p},{i})={k}" for (p, i), k in sorted(uk.table.items())))
        lines.append(f"essential order {res['essential_order']}, Zariski component {res['zariski_component']}")
    lines.append(_verdict_line("Zariski-connected", zv))
    lines.append(_verdict_line("MinAP", mv))
    if not mv.answer and "m" in res["minap"]["witness"]:
        w = res["minap"]["witness"]
        lines.append(f"G[{w['m']}] is a proper closed subgroup of index {w['card']}")
        lk = res["minap_leading_invariant"]["witness"]
        lines.append(f"leading Ulm-Kaplansky invariant a({lk['p']},{lk['i']}) = {lk['value']} is finite")
    return str(G), res, "\n".join(lines), EXIT_OK if mv.answer else EXIT_NEGATIVE


@handler("pvnk")
def _pvnk(a: dict) -> Outcome:
    G = parse_descriptor(a["expr"])
    H = parse_designator(G, a["sub"])
    H.validate()
    v = pvn_test(G, H)
    sub = realize_designator(H)
    res = {"designator": format_designator(H), "subgroup": str(sub), "pvn": v.to_json()}
    text = f"group: {G}\nsubgroup: {sub}\n" + _verdict_line("potential von Neumann kernel", v)
    return {"group": str(G), "sub": format_designator(H)}, res, text, EXIT_OK if v.answer else EXIT_NEGATIVE


@handler("decompose")
def _decompose(a: dict) -> Outcome:
    G = parse_descriptor(a["expr"])
    if a["mode"] == "nice":
        parts = [str(n) for n in nice_decomposition(G)]
        return str(G), {"mode": "nice", "summands": parts}, "\n".join(parts) or "0", EXIT_OK
    N, H = w_split(G)
    res = {"mode": "wsplit", "N": str(N), "H": str(H)}
    return str(G), res, f"N = {N}\nH = {H}", EXIT_OK


@handler("plan")
def _plan(a: dict) -> Outcome:
    G = parse_descriptor(a["expr"])
    p = minap_plan(G)
    if isinstance(p, PlanNode):
        return str(G), {"plan": p.to_json()}, p.render(), EXIT_OK
    return str(G), {"refused": p.to_json()}, _verdict_line("MinAP", p), EXIT_NEGATIVE


# ------------------------------------------------------------------ HM(T) commands


def _neighborhood(a: dict) -> BasicNeighborhood:
    return BasicNeighborhood(parse_step(a["center"]), Fraction(a["arc"]), Fraction(a["eps"]))


@handler("hm-divide")
def _hm_divide(a: dict) -> Outcome:
    V = _neighborhood(a)
    g = parse_step(a["g"])
    j, h = divide_in_open_set(V, g, int(a["k"]))
    res = {"V": V.to_json(), "threshold": j, "h": step_to_json(h)}
    return None, res, f"threshold {j}\nh = {h}", EXIT_OK


@handler("hm-torsion-divide")
def _hm_torsion(a: dict) -> Outcome:
    V = _neighborhood(a)
    h, s = torsion_divide(V, int(a["k"]), Fraction(a["eta"]))
    res = {"V": V.to_json(), "h": step_to_json(h), "witness": str(s), "sup_support": str(sup_support(h))}
    return None, res, f"h = {h}\nh({s}) != 0, sup support {sup_support(h)}", EXIT_OK


def _first(a: dict) -> list[BasicNeighborhood] | None:
    if not a.get("first"):
        return None
    arc, eps = a["first"].split(",")
    return [BasicNeighborhood(parse_step("0"), Fraction(arc), Fraction(eps))]


def _trace_outcome(t) -> Outcome:
    checks = t.verify()
    res = {"trace": t.to_json(), "checks": checks, "all_verified": all(checks.values())}
    lines = [f"{r.n}: divisor {r.divisor}, g = {r.g}" for r in t.steps]
    lines.append(f"conditions verified: {sum(checks.values())}/{len(checks)}")
    return None, res, "\n".join(lines), EXIT_OK if all(checks.values()) else EXIT_ERROR


@handler("hm-prufer")
def _hm_prufer(a: dict) -> Outcome:
    t = prufer_chain(int(a["p"]), int(a["steps"]), base=_first(a))
    return _trace_outcome(t)


@handler("hm-cyclic-sum")
def _hm_cyclic(a: dict) -> Outcome:
    orders = [int(x) for x in a["orders"].split(",")]
    t = cyclic_sum_chain(orders, int(a["steps"]), base=_first(a))
    out = _trace_outcome(t)
    out[1]["exhaustive_prefix"] = independent_exhaustive_prefix(t.generators)
    return out


@handler("hm-audit")
def _hm_audit(a: dict) -> Outcome:
    n = int(a["n"])
    if a.get("hds"):
        D = "QmodZ" if a["hds"] == "QmodZ" else parse_point(a["hds"])
        S = [Fraction(x) for x in a["S"].split(",")]
        report = density_audit(hds_generators(D, S, int(a["budget"])), n, int(a["budget"]))
    elif a.get("orders"):
        t = cyclic_sum_chain([int(x) for x in a["orders"].split(",")], int(a["steps"]), base=_first(a))
        report = density_audit(t, n)
    else:
        report = density_audit(prufer_chain(int(a["p"]), int(a["steps"]), base=_first(a)), n)
    text = f"{report.summary()} (mode {report.mode}); misses: {list(report.misses) or 'none'}"
    return None, report.to_json(), text, EXIT_OK


# ------------------------------------------------------------------ extension


def _int_rows(text: str) -> list[list[int]]:
    return [[int(x) for x in row.split(",")] for row in text.split(";") if row.strip()]


@handler("extend")
def _extend(a: dict) -> Outcome:
    G = FinAbGroup(tuple(int(x) for x in a["factors"].split(",")))
    H = subgroup_of(G, _int_rows(a["sub"]))
    images = [[Fraction(x) for x in row.split(",")] for row in a["images"].split(";") if row.strip()]
    j = TorusTupleHom.on(H, images)
    jp = extend_mono(H, j)
    checks = check_extension(H, j, jp)
    res = {
        "subgroup_factors": list(H.factors),
        "quotient_factors": list(H.quotient_factors),
        "extension": jp.to_json(),
        "checks": checks,
    }
    lines = [f"G = {G}, H invariants {list(H.factors)}, G/H invariants {list(H.quotient_factors)}"]
    for g, v in zip(jp.gens, jp.images):
        lines.append(f"j'({', '.join(map(str, g))}) = ({', '.join(str(x) for x in v)})")
    lines.append("checks: " + ", ".join(f"{k}={v}" for k, v in checks.items()))
    return str(G), res, "\n".join(lines), EXIT_OK if all(checks.values()) else EXIT_ERROR


# ------------------------------------------------------------------ certificates


def _document(command: str, raw: dict, args: dict, normalized, result: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": "minap",
        "version": __version__,
        "command": command,
        "input": raw,
        "normalized": normalized,
        "args": args,
        "result": result,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _canonical_args(command: str, a: dict, normalized) -> dict:
    """Arguments for replay: normalized expressions replace raw text."""
    out = dict(a)
    if command in ("analyze", "decompose", "plan") and normalized is not None:
        out["expr"] = normalized
    elif command == "pvnk":
        out["expr"], out["sub"] = normalized["group"], normalized["sub"]
    return out


def execute(command: str, a: dict) -> tuple[dict, str, int]:
    with assume_ch(bool(a.get("assume_ch", ch_assumed()))):
        normalized, result, text, code = HANDLERS[command](a)
    args = _canonical_args(command, a, normalized)
    args["assume_ch"] = bool(a.get("assume_ch", ch_assumed()))
    return _document(command, a.get("_raw", {k: v for k, v in a.items() if k != "assume_ch"}), args, normalized, result), text, code


def replay_document(doc: dict) -> tuple[bool, dict]:
    """Re-run the command recorded in ``doc``; True if the new document is identical."""
    command = doc["command"]
    a = dict(doc["args"])
    a["_raw"] = doc["input"]
    with assume_ch(bool(a.get("assume_ch", False))):
        normalized, result, _, _ = HANDLERS[command](a)
    new = _document(command, doc["input"], doc["args"], normalized, result)
    return dumps(new) == dumps(doc), new


# ------------------------------------------------------------------ argparse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="minap", description="MinAP topologies, potential von Neumann kernels and HM(T) builders.")
    p.add_argument("--version", action="version", version=f"minap {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON certificate instead of the report")
    common.add_argument("--assume-ch", action="store_true", default=None, help="decide w1 vs c comparisons by CH")
    common.add_argument("--config", help="JSON file with defaults (assume_ch, budget)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("analyze", parents=[common], help="invariants and MinAP verdict")
    s.add_argument("expr")
    s = sub.add_parser("pvnk", parents=[common], help="potential von Neumann kernel test")
    s.add_argument("expr")
    s.add_argument("--sub", required=True, help="designator: full | G[m] | mG | idx:atom^mult; ...")
    s = sub.add_parser("decompose", parents=[common], help="nice or w-divisible decomposition")
    s.add_argument("mode", choices=["nice", "wsplit"])
    s.add_argument("expr")
    s = sub.add_parser("plan", parents=[common], help="MinAP construction plan")
    s.add_argument("expr")

    hm = sub.add_parser("hm", help="HM(T) step-function tools")
    hsub = hm.add_subparsers(dest="hm_command", required=True, parser_class=_Parser)

    def nbhd(sp):
        sp.add_argument("--center", default="0", help="step function 't: v; ...' or 0")
        sp.add_argument("--arc", required=True, help="length of the arc U about 0")
        sp.add_argument("--eps", required=True)

    s = hsub.add_parser("divide", parents=[common])
    nbhd(s)
    s.add_argument("--g", required=True)
    s.add_argument("--k", required=True, type=int)
    s = hsub.add_parser("torsion-divide", parents=[common])
    nbhd(s)
    s.add_argument("--k", required=True, type=int)
    s.add_argument("--eta", default="1/2")
    s = hsub.add_parser("prufer", parents=[common])
    s.add_argument("--p", required=True, type=int)
    s.add_argument("--steps", required=True, type=int)
    s.add_argument("--first", help="override V_1 by 0 + O(U, eps), given as 'arc,eps'")
    s = hsub.add_parser("cyclic-sum", parents=[common])
    s.add_argument("--orders", required=True, help="comma-separated a_1,...,a_M")
    s.add_argument("--steps", required=True, type=int)
    s.add_argument("--first", help="override V_1 by 0 + O(U, eps), given as 'arc,eps'")
    s = hsub.add_parser("audit", parents=[common])
    s.add_argument("--n", required=True, type=int)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--steps", type=int)
    s.add_argument("--orders")
    s.add_argument("--first")
    s.add_argument("--hds", help="QmodZ or a torus point generating the value group")
    s.add_argument("--S", default="1", help="comma-separated breakpoints")
    s.add_argument("--budget", type=int, default=None)

    s = sub.add_parser("extend", parents=[common], help="extend a monomorphism from a subgroup")
    s.add_argument("--factors", required=True, help="invariant factors, e.g. 2,4")
    s.add_argument("--sub", required=True, help="subgroup generators, e.g. '0,2;1,1'")
    s.add_argument("--images", required=True, help="images of the generators in (Q/Z)^n, e.g. '1/2;1/4'")

    s = sub.add_parser("replay", help="re-run a certificate and compare")
    s.add_argument("certificate")
    return p


_DROP = {"json", "config", "command", "hm_command", "certificate"}


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        if ns.command == "replay":
            with open(ns.certificate) as fh:
                doc = json.load(fh)
            same, new = replay_document(doc)
            print("replay: identical" if same else "replay: MISMATCH")
            if not same:
                print(dumps(new))
            return EXIT_OK if same else EXIT_ERROR
        cfg = _load_config(ns.config)
        command = f"hm-{ns.hm_command}" if ns.command == "hm" else ns.command
        a = {k: v for k, v in vars(ns).items() if k not in _DROP and v is not None}
        a["assume_ch"] = bool(ns.assume_ch if ns.assume_ch is not None else cfg.get("assume_ch", ch_assumed()))
        if command == "hm-audit":
            a["budget"] = ns.budget if ns.budget is not None else int(cfg.get("budget", 1000))
            a["steps"] = ns.steps if ns.steps is not None else a["n"]
        doc, text, code = execute(command, a)
        print(dumps(doc) if ns.json else text)
        return code
    except (ParseError, DescriptorError, UnknownCardinal, ThresholdNotMet, OrdersExhausted, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
