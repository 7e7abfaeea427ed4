"""Command-line front end.

Exit codes: 0 success or true, 1 false or impossibility, 2 refusal (search bound
exceeded), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, List, Optional, Sequence, Tuple

from . import comm as C
from . import conjugacy as K
from . import families as FAM
from . import homs as HM
from . import propprobe as PP
from . import stallings as S
from .jsonio import DecodeError, comm_from_json, from_json, hom_from_json, subgroup_from_json, to_json
from .outcomes import BOUND_ENV, Impossibility, Refusal
from .words import RankContext, Word, WordError, abelianize, maximal_root, parse

EXIT_OK, EXIT_FALSE, EXIT_REFUSAL, EXIT_INPUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 by default
        raise UsageError(message)


# -- input helpers ------------------------------------------------------------

def _word(ctx: RankContext, text: Optional[str], what: str = "--word") -> Word:
    if text is None:
        raise UsageError(f"{what} is required")
    return parse(text, ctx)


def _split(text: str) -> List[str]:
    return [t.strip() for t in text.split(";") if t.strip()]


def _load(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _subgroups(ctx: RankContext, args) -> List[S.Subgroup]:
    out = [S.from_generators([parse(t, ctx) for t in _split(s)], ctx) for s in (args.sub or [])]
    for path in args.input or []:
        obj = _load(path)
        if obj.get("type") != "subgroup":
            raise UsageError(f"{path} does not hold a subgroup")
        out.append(subgroup_from_json(obj, ctx))
    return out


def _homs(ctx: RankContext, args) -> List[HM.FreeHom]:
    out = []
    if args.images:
        out.append(HM.aut_from_images(ctx, [parse(t, ctx) for t in _split(args.images)]))
    for path in args.input or []:
        obj = _load(path)
        if obj.get("type") == "commensuration":
            out.append(comm_from_json(obj, ctx).map)
        else:
            out.append(hom_from_json(obj, ctx))
    return out


def _comms(ctx: RankContext, args) -> List[C.Commensuration]:
    out = []
    if args.images:
        f = HM.aut_from_images(ctx, [parse(t, ctx) for t in _split(args.images)])
        out.append(C.from_automorphism(f, _flavor(args), args.p))
    for path in args.input or []:
        out.append(comm_from_json(_load(path), ctx))
    return out


def _flavor(args) -> str:
    f = getattr(args, "flavor", None) or C.PROFINITE
    if f in ("comm", "profinite"):
        return C.PROFINITE
    if f in ("commp", "pro-p"):
        if args.p is None:
            raise UsageError("the pro-p flavor needs --p")
        return C.PRO_P
    raise UsageError(f"unknown flavor {f!r}")


def _need(value, name: str):
    if value is None:
        raise UsageError(f"{name} is required")
    return value


def _count(n: int, what: str, items) -> List:
    items = list(items)
    if len(items) != n:
        raise UsageError(f"expected {n} {what}, got {len(items)}")
    return items


# -- commands ---------------------------------------------------------------------
# Each returns (payload, exit code).

def cmd_word(ctx: RankContext, args) -> Tuple[Any, int]:
    w = _word(ctx, args.word)
    if args.action == "reduce":
        return w, EXIT_OK
    if args.action == "root":
        v, m = maximal_root(w) if w.letters else (w, 1)
        return {"root": to_json(v), "exponent": m}, EXIT_OK
    if args.action == "abel":
        return {"vector": list(abelianize(w, args.p)), "modulus": args.p}, EXIT_OK
    raise UsageError(args.action)


def cmd_sub(ctx: RankContext, args) -> Tuple[Any, int]:
    subs = _subgroups(ctx, args)
    a = args.action
    if a == "intersect":
        H1, H2 = _count(2, "subgroups", subs)
        return S.intersect(H1, H2), EXIT_OK
    (H,) = _count(1, "subgroup", subs)
    if a == "index":
        return {"index": H.index, "rank": H.rank}, EXIT_OK
    if a == "basis":
        return H, EXIT_OK
    if a == "core":
        if H.index is None:
            raise UsageError("normal core needs a finite-index subgroup")
        return S.normal_core(H), EXIT_OK
    if a == "normal":
        ok = S.is_normal(H)
        return {"normal": ok}, EXIT_OK if ok else EXIT_FALSE
    if a == "popen":
        cert = S.is_p_open(H, _need(args.p, "--p"))
        return cert, EXIT_OK if cert else EXIT_FALSE
    if a == "hall":
        K_, ext = S.hall_completion(H)
        return {"completion": to_json(K_), "adapted_basis": [to_json(w)["word"] for w in ext]}, EXIT_OK
    raise UsageError(a)


def cmd_hom(ctx: RankContext, args) -> Tuple[Any, int]:
    a = args.action
    if a == "primitive":
        w = _word(ctx, args.word)
        subs = _subgroups(ctx, args)
        H = subs[0] if subs else S.whole(ctx)
        ok, seq = HM.whitehead_is_primitive(H, w)
        body = {"primitive": ok, "sequence": [to_json(f) for f in seq]}
        return body, EXIT_OK if ok else EXIT_FALSE
    hs = _homs(ctx, args)
    if a == "apply":
        (h,) = _count(1, "maps", hs)
        return h(_word(ctx, args.word)), EXIT_OK
    if a == "det":
        (h,) = _count(1, "maps", hs)
        return {"det": HM.det(h)}, EXIT_OK
    if a == "compose":
        h1, h2 = _count(2, "maps (applied in the given order)", hs)
        return HM.compose(h2, h1), EXIT_OK
    if a == "invert":
        (h,) = _count(1, "maps", hs)
        return HM.invert(h), EXIT_OK
    if a == "restrict":
        (h,) = _count(1, "maps", hs)
        (H,) = _count(1, "subgroup", [S.from_generators([parse(t, ctx) for t in _split(s)], ctx) for s in args.sub or []])
        return HM.restrict(h, H), EXIT_OK
    raise UsageError(a)


def cmd_comm(ctx: RankContext, args) -> Tuple[Any, int]:
    a = args.action
    if a == "inner":
        return C.inner(_word(ctx, args.word), _flavor(args), args.p), EXIT_OK
    cs = _comms(ctx, args)
    if a == "eq":
        c1, c2 = _count(2, "commensurations", cs)
        ok = C.equivalent(c1, c2)
        return {"equivalent": ok}, EXIT_OK if ok else EXIT_FALSE
    if a == "mul":
        c1, c2 = _count(2, "commensurations (applied in the given order)", cs)
        return C.multiply(c2, c1), EXIT_OK
    if a == "inv":
        (c,) = _count(1, "commensuration", cs)
        return C.invert(c), EXIT_OK
    if a == "decompose":
        (c,) = _count(1, "commensuration", cs)
        return C.decompose_p(c, _need(args.p, "--p"), args.saut), EXIT_OK
    raise UsageError(a)


def _outcome(x: Any) -> int:
    if isinstance(x, Refusal):
        return EXIT_REFUSAL
    if isinstance(x, Impossibility):
        return EXIT_FALSE
    return EXIT_OK


def _witness_payload(w: K.ConjugacyWitness) -> Any:
    body = to_json(w)
    body["verified"] = w.verify()
    return body


def cmd_conj(ctx: RankContext, args) -> Tuple[Any, int]:
    a = args.action
    if a == "dp":
        return {"dp": K.dp(_word(ctx, args.word), _need(args.p, "--p"))}, EXIT_OK
    if a == "witness":
        g, h = _word(ctx, args.source, "--source"), _word(ctx, args.target, "--target")
        flavor = args.flavor or "comm"
        res = K.conjugate(g, h, "commp" if flavor in ("commp", "pro-p") else "comm", args.p, args.bound)
    elif a == "bs":
        res = K.bs_witness(_word(ctx, args.word), _need(args.p, "--p"), args.bound)
    elif a == "subgroup":
        H1, H2 = _count(2, "subgroups", _subgroups(ctx, args))
        res = K.subgroup_conjugator(H1, H2, _flavor(args), args.p, args.bound)
    else:
        raise UsageError(a)
    if isinstance(res, K.ConjugacyWitness):
        return _witness_payload(res), EXIT_OK
    return res, _outcome(res)


def cmd_family(ctx: RankContext, args) -> Tuple[Any, int]:
    a = args.action
    if a == "sm":
        fam = FAM.sm_generators(ctx, _need(args.m, "--m"))
    elif a == "am":
        fam = FAM.am_generators(ctx, _need(args.m, "--m"))
    elif a == "spn":
        fam = FAM.spn_generators(ctx, _need(args.p, "--p"), _need(args.n, "--n"))
    else:
        raise UsageError(a)
    body = {
        "label": fam.label,
        "size": len(fam),
        "saut": fam.saut,
        "tags": fam.tags,
        "dets": [HM.det(c.map) for c in fam.members],
    }
    if args.members:
        body["members"] = [to_json(c) for c in fam.members]
    return body, EXIT_OK


def _ctx_of_rank(ctx: RankContext, d: Optional[int]) -> RankContext:
    if d is None or d == ctx.rank:
        return ctx
    return RankContext.of(" ".join(f"x{i + 1}" for i in range(d)))


def _verify_certificate(ctx: RankContext, obj: Any) -> bool:
    x = from_json(obj, ctx if "context" not in obj else None)
    if isinstance(x, (K.ConjugacyWitness, PP.ExclusionCertificate, S.PopennessCertificate)):
        return x.verify()
    if isinstance(x, C.DecompositionCertificate):
        return x.check()
    raise UsageError(f"no verification for objects of type {obj.get('type')!r}")


def cmd_verify(ctx: RankContext, args) -> Tuple[Any, int]:
    a = args.suite
    if a == "det-lemma":
        rep = FAM.det_lemma_suite(_ctx_of_rank(ctx, args.d), _need(args.m, "--m"))
    elif a == "r12":
        rep = FAM.r12_restriction_check(_ctx_of_rank(ctx, args.d), _need(args.m, "--m"))
    elif a == "nielsen":
        rep = FAM.nielsen_commutator_identities(_ctx_of_rank(ctx, args.d))
    elif a == "arithmetic":
        primes = [args.p] if args.p else None
        rep = FAM.arithmetic_identities(_need(args.m, "--m"), _need(args.l, "--l"), primes, args.kmax or 4)
    elif a == "certificate":
        paths = _need(args.input, "--input")
        results = {path: _verify_certificate(ctx, _load(path)) for path in paths}
        ok = all(results.values())
        return {"verified": results}, EXIT_OK if ok else EXIT_FALSE
    else:
        raise UsageError(f"unknown suite {a!r}")
    return rep, EXIT_OK if rep.passed else EXIT_FALSE


def cmd_probe(ctx: RankContext, args) -> Tuple[Any, int]:
    a = args.action
    if a == "k1":
        res = PP.k1_exclude(_word(ctx, args.word), _need(args.p, "--p"), args.bound if args.bound is not None else 3)
        return res, _outcome(res)
    if a == "phi":
        rep = PP.phi_iso_certificate(_need(args.p, "--p"), args.kmax or 3, args.d or 3)
    elif a == "kn":
        rep = PP.kn_report(ctx, _need(args.p, "--p"), _need(args.n, "--n"), args.exact)
    else:
        raise UsageError(a)
    return rep, EXIT_OK if rep.passed else EXIT_FALSE


COMMANDS = {
    "word": (cmd_word, ["reduce", "root", "abel"]),
    "sub": (cmd_sub, ["index", "basis", "intersect", "core", "normal", "popen", "hall"]),
    "hom": (cmd_hom, ["apply", "det", "compose", "invert", "restrict", "primitive"]),
    "comm": (cmd_comm, ["eq", "mul", "inv", "inner", "decompose"]),
    "conj": (cmd_conj, ["dp", "witness", "bs", "subgroup"]),
    "family": (cmd_family, ["sm", "am", "spn"]),
    "probe": (cmd_probe, ["k1", "phi", "kn"]),
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--context", default="a b", help='generator names, e.g. "a b c"')
    p.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("--word")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--sub", action="append", help='subgroup generators separated by ";"')
    p.add_argument("--input", action="append", help="JSON file (or - for stdin); repeatable")
    p.add_argument("--images", help='automorphism by generator images separated by ";"')
    p.add_argument("--p", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--flavor", choices=["comm", "commp", "profinite", "pro-p"])
    p.add_argument("--bound", type=int, help=f"search bound (default from ${BOUND_ENV}, else 3)")
    p.add_argument("--saut", action="store_true", help="decompose with determinant +1 factors")
    p.add_argument("--members", action="store_true", help="include family members in the output")
    p.add_argument("--exact", action="store_true", help="full containment scan in probe kn")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freecomm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, actions) in COMMANDS.items():
        sp = sub.add_parser(name)
        sp.add_argument("action", choices=actions)
        _common(sp)
    vp = sub.add_parser("verify")
    vp.add_argument("suite", choices=["det-lemma", "r12", "nielsen", "arithmetic", "certificate"])
    _common(vp)
    return parser


def _text(payload: Any) -> str:
    if isinstance(payload, Word):
        return str(payload)
    data = to_json(payload)
    if isinstance(data, dict) and data.get("type") == "report":
        lines = [f"{data['title']} {data['params']}: {'PASS' if data['passed'] else 'FAIL'}"]
        for c in data["checks"]:
            mark = "ok  " if c["passed"] else "FAIL"
            lines.append(f"  {mark} {c['name']}: expected {c['expected']}, got {c['actual']}")
        return "\n".join(lines)
    if isinstance(data, dict):
        return "\n".join(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in data.items())
    return json.dumps(data)


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        ctx = RankContext.of(args.context)
        if args.command == "verify":
            payload, code = cmd_verify(ctx, args)
        else:
            payload, code = COMMANDS[args.command][0](ctx, args)
    except (UsageError, WordError, DecodeError, S.SubgroupError, HM.HomError, C.CommError,
            K.ConjugacyError, FAM.FamilyError, PP.ProbeError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "text", False):
        print(_text(payload), file=out)
    else:
        print(json.dumps(to_json(payload), indent=2), file=out)
    return code


def main() -> None:
    sys.exit(run())
