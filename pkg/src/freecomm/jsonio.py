"""JSON encoding of words, subgroups, maps, commensurations and certificates.

Every object carries its generator names, so each document decodes on its own.
Maps are stored as images of the domain's listed generators, which form a basis.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from .comm import Commensuration, DecompositionCertificate
from .conjugacy import ConjugacyWitness
from .homs import FreeHom, hom_on_basis
from .outcomes import Impossibility, Refusal
from .propprobe import ExclusionCertificate, FpSubspace
from .reports import Report
from .stallings import PopennessCertificate, Subgroup, from_generators, from_graph
from .words import RankContext, Word, format_word, parse


class DecodeError(ValueError):
    pass


def _ctx(obj: Dict[str, Any]) -> RankContext:
    try:
        return RankContext.of(obj["context"])
    except KeyError:
        raise DecodeError("missing 'context'") from None


def _words(ctx: RankContext, texts: List[str]) -> List[Word]:
    return [parse(t, ctx) for t in texts]


def word_to_json(w: Word) -> Dict[str, Any]:
    return {"type": "word", "context": list(w.ctx.names), "word": format_word(w)}


def graph_to_json(H: Subgroup) -> Dict[str, Any]:
    edges: Dict[str, List[List[int]]] = {name: [] for name in H.ctx.names}
    for u, i, w in H.edges():
        edges[H.ctx.names[i]].append([u, w])
    return {"vertices": H.n, "base": 0, "edges": edges}


def graph_from_json(obj: Dict[str, Any], ctx: RankContext) -> Subgroup:
    edges = []
    for name, pairs in obj["edges"].items():
        i = ctx.index(name)
        edges.extend((u, i, w) for u, w in pairs)
    return from_graph(ctx, obj["vertices"], edges, obj.get("base", 0))


def subgroup_to_json(H: Subgroup) -> Dict[str, Any]:
    return {
        "type": "subgroup",
        "context": list(H.ctx.names),
        "generators": [format_word(b) for b in H.basis],
        "index": H.index,
        "rank": H.rank,
        "graph": graph_to_json(H),
    }


def subgroup_from_json(obj: Dict[str, Any], ctx: Optional[RankContext] = None) -> Subgroup:
    """Generators win over the graph when both are present."""
    ctx = ctx or _ctx(obj)
    if "generators" in obj:
        return from_generators(_words(ctx, obj["generators"]), ctx)
    if "graph" in obj:
        return graph_from_json(obj["graph"], ctx)
    raise DecodeError("subgroup needs 'generators' or 'graph'")


def _listed_basis(obj: Dict[str, Any], H: Subgroup, ctx: RankContext) -> List[Word]:
    return _words(ctx, obj["generators"]) if "generators" in obj else H.basis


def hom_to_json(f: FreeHom) -> Dict[str, Any]:
    """Images are listed in the order of ``domain.generators``."""
    return {
        "type": "hom",
        "context": list(f.ctx.names),
        "domain": subgroup_to_json(f.domain),
        "codomain": subgroup_to_json(f.codomain),
        "images": [format_word(x) for x in f.image_words],
        "iso": f.iso,
    }


def _hom_parts(obj: Dict[str, Any], dom_obj: Any, cod_obj: Any, ctx: RankContext) -> FreeHom:
    if isinstance(dom_obj, list):  # bare list of generator words
        dom_obj = {"generators": dom_obj}
    if isinstance(cod_obj, list):
        cod_obj = {"generators": cod_obj}
    U = subgroup_from_json(dom_obj, ctx)
    V = subgroup_from_json(cod_obj, ctx)
    basis = _listed_basis(dom_obj, U, ctx)
    return hom_on_basis(U, V, basis, _words(ctx, obj["images"]), obj.get("iso", True))


def hom_from_json(obj: Dict[str, Any], ctx: Optional[RankContext] = None) -> FreeHom:
    ctx = ctx or _ctx(obj)
    return _hom_parts(obj, obj["domain"], obj["codomain"], ctx)


def comm_to_json(c: Commensuration) -> Dict[str, Any]:
    return {
        "type": "commensuration",
        "context": list(c.ctx.names),
        "flavor": c.flavor,
        "p": c.p,
        "U": subgroup_to_json(c.U),
        "V": subgroup_to_json(c.V),
        "images": [format_word(x) for x in c.map.image_words],
    }


def comm_from_json(obj: Dict[str, Any], ctx: Optional[RankContext] = None) -> Commensuration:
    ctx = ctx or _ctx(obj)
    if obj.get("type") == "hom":
        return Commensuration(hom_from_json(obj, ctx))
    f = _hom_parts(obj, obj["U"], obj["V"], ctx)
    return Commensuration(f, obj.get("flavor", "profinite"), obj.get("p"))


def to_json(x: Any) -> Any:
    """Encode any library result."""
    if isinstance(x, Word):
        return word_to_json(x)
    if isinstance(x, Subgroup):
        return subgroup_to_json(x)
    if isinstance(x, FreeHom):
        return hom_to_json(x)
    if isinstance(x, Commensuration):
        return comm_to_json(x)
    if isinstance(x, ConjugacyWitness):
        return {
            "type": "witness",
            "context": list(x.source.ctx.names),
            "source": format_word(x.source),
            "target": format_word(x.target),
            "commensuration": comm_to_json(x.c),
        }
    if isinstance(x, DecompositionCertificate):
        return {
            "type": "decomposition",
            "p": x.p,
            "saut": x.saut,
            "chain": [subgroup_to_json(K) for K in x.chain],
            "factors": [hom_to_json(f) for f in x.factors],
            "dets": x.dets(),
        }
    if isinstance(x, PopennessCertificate):
        return {
            "type": "popen",
            "p": x.p,
            "p_open": x.is_p_open,
            "chain": None if x.chain is None else [subgroup_to_json(K) for K in x.chain],
            "reason": x.reason,
        }
    if isinstance(x, ExclusionCertificate):
        return {
            "type": "exclusion",
            "context": list(x.word.ctx.names),
            "word": format_word(x.word),
            "p": x.p,
            "kind": x.kind,
            "vector": list(x.vector),
            "steps": [{"tag": t, "commensuration": comm_to_json(c)} for t, c in x.steps],
            "final": None if x.final is None else format_word(x.final),
        }
    if isinstance(x, FpSubspace):
        return {"type": "fp_subspace", **x.to_dict()}
    if isinstance(x, Report):
        return {"type": "report", **x.to_dict()}
    if isinstance(x, Refusal):
        return {"type": "refusal", "reason": x.reason}
    if isinstance(x, Impossibility):
        return {"type": "impossibility", "reason": x.reason, "data": x.data}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if isinstance(x, dict):
        return {k: to_json(v) for k, v in x.items()}
    return x


def from_json(obj: Dict[str, Any], ctx: Optional[RankContext] = None) -> Any:
    """Decode an object written by :func:`to_json` (words, subgroups, maps and certificates)."""
    kind = obj.get("type")
    if kind == "word":
        return parse(obj["word"], ctx or _ctx(obj))
    if kind == "subgroup":
        return subgroup_from_json(obj, ctx)
    if kind == "hom":
        return hom_from_json(obj, ctx)
    if kind == "commensuration":
        return comm_from_json(obj, ctx)
    if kind == "witness":
        ctx = ctx or _ctx(obj)
        return ConjugacyWitness(comm_from_json(obj["commensuration"], ctx), parse(obj["source"], ctx), parse(obj["target"], ctx))
    if kind == "decomposition":
        chain = tuple(subgroup_from_json(K, ctx) for K in obj["chain"])
        factors = tuple(hom_from_json(f, ctx) for f in obj["factors"])
        return DecompositionCertificate(obj["p"], chain, factors, obj["saut"])
    if kind == "popen":
        chain = None if obj["chain"] is None else tuple(subgroup_from_json(K, ctx) for K in obj["chain"])
        return PopennessCertificate(obj["p"], chain, obj.get("reason", ""))
    if kind == "exclusion":
        ctx = ctx or _ctx(obj)
        steps = tuple((s["tag"], comm_from_json(s["commensuration"], ctx)) for s in obj["steps"])
        final = None if obj["final"] is None else parse(obj["final"], ctx)
        return ExclusionCertificate(parse(obj["word"], ctx), obj["p"], obj["kind"], tuple(obj["vector"]), steps, final)
    if kind == "refusal":
        return Refusal(obj["reason"])
    if kind == "impossibility":
        return Impossibility(obj["reason"], obj.get("data", {}))
    raise DecodeError(f"cannot decode object of type {kind!r}")
