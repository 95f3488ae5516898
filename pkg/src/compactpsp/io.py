"""JSON formats.

Set elements are written 1-indexed and converted here, and only here.
Graph vertices are 1-indexed everywhere.  Key order is fixed by the
builders below, so identical objects serialise to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import (
    BitSet,
    Graph,
    Isomorphism,
    PackingWitness,
    PspInstance,
    SetFamily,
    SubIsoInstance,
    XcoverInstance,
)
from .errors import ArgumentError
from .gadget import IssPair, ValidationReport
from .reduction import ReducedPspInstance, compactness_ratio, label_from_json
from .solvers.vecsum import VectorSumInstance


def dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=True) + "\n"


def write_json(path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path) -> Any:
    return json.loads(Path(path).read_text())


def _elements_out(s: BitSet) -> list[int]:
    return [e + 1 for e in s.elements()]


def _bitset_in(width: int, elems) -> BitSet:
    return BitSet.from_elements(width, (int(e) - 1 for e in elems))


def bitset_to_json(s: BitSet) -> dict:
    return {"width": s.width, "elements": _elements_out(s)}


def bitset_from_json(obj) -> BitSet:
    return _bitset_in(obj["width"], obj["elements"])


def label_to_json(label) -> Any:
    if label is None:
        return None
    if hasattr(label, "to_json"):
        return label.to_json()
    return label


def _label_in(obj) -> Any:
    if isinstance(obj, dict) and "kind" in obj:
        return label_from_json(obj)
    if isinstance(obj, list):
        return tuple(obj)
    return obj


def family_to_json(family: SetFamily, r: int | None = None) -> dict:
    out: dict[str, Any] = {
        "universe_size": family.universe_size,
        "sets": [_elements_out(s) for s in family.sets],
        "labels": [label_to_json(lab) for lab in family.labels],
    }
    if r is not None:
        out["r"] = r
    return out


def family_from_json(obj) -> SetFamily:
    u = int(obj["universe_size"])
    sets = tuple(_bitset_in(u, s) for s in obj["sets"])
    labels = tuple(_label_in(lab) for lab in obj.get("labels") or ())
    return SetFamily(u, sets, labels)


def psp_to_json(inst: PspInstance | XcoverInstance) -> dict:
    out = family_to_json(inst.family, inst.r)
    out["problem"] = "xcover" if isinstance(inst, XcoverInstance) else "psp"
    return out


def psp_from_json(obj) -> PspInstance:
    return PspInstance(family_from_json(obj), int(obj.get("r", 0)))


def xcover_from_json(obj) -> XcoverInstance:
    return XcoverInstance(family_from_json(obj), int(obj.get("r", 0)))


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_json(obj) -> Graph:
    return Graph(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))


def subiso_to_json(inst: SubIsoInstance) -> dict:
    return {"g": graph_to_json(inst.g), "h": graph_to_json(inst.h)}


def subiso_from_json(obj) -> SubIsoInstance:
    return SubIsoInstance(graph_from_json(obj["g"]), graph_from_json(obj["h"]))


def witness_to_json(w: PackingWitness) -> dict:
    return {"indices": list(w.indices)}


def witness_from_json(obj) -> PackingWitness:
    return PackingWitness(tuple(obj["indices"]))


def isomorphism_to_json(phi: Isomorphism) -> dict:
    return {"map": list(phi.map)}


def isomorphism_from_json(obj) -> Isomorphism:
    return Isomorphism(tuple(obj["map"]))


def vecsum_to_json(inst: VectorSumInstance) -> dict:
    def coords(v: int) -> list[int]:
        return [e + 1 for e in BitSet(inst.dim, v).elements()]

    return {
        "problem": "vecsum",
        "dim": inst.dim,
        "vectors": [coords(v) for v in inst.vectors],
        "labels": [label_to_json(lab) for lab in inst.labels],
        "target": coords(inst.target),
        "r": inst.r,
        "indicator_blocks": [[a + 1, b] for a, b in inst.indicator_blocks],
    }


def vecsum_from_json(obj) -> VectorSumInstance:
    dim = int(obj["dim"])
    return VectorSumInstance(
        dim=dim,
        vectors=tuple(_bitset_in(dim, v).bits for v in obj["vectors"]),
        target=_bitset_in(dim, obj["target"]).bits,
        r=int(obj["r"]),
        labels=tuple(_label_in(lab) for lab in obj.get("labels") or ()),
        indicator_blocks=tuple((a - 1, b) for a, b in obj.get("indicator_blocks") or ()),
    )


def iss_pair_to_json(pair: IssPair, report: ValidationReport | None = None) -> dict:
    out: dict[str, Any] = {
        "pair": {
            "n_elems": pair.n_elems,
            "m_sets": pair.m_sets,
            "s_a": family_to_json(pair.family_a()),
            "s_b": family_to_json(pair.family_b()),
        }
    }
    if report is not None:
        out["check"] = report.to_dict()
    return out


def iss_pair_from_json(obj) -> IssPair:
    body = obj["pair"]
    a = family_from_json(body["s_a"])
    b = family_from_json(body["s_b"])
    return IssPair(int(body["n_elems"]), int(body["m_sets"]), a.sets, b.sets)


def reduction_summary(red: ReducedPspInstance) -> dict:
    """Sizes recorded in manifests and compactness records."""
    g, h = red.source.g, red.source.h
    return {
        "n": g.n,
        "m": g.edge_count,
        "k": h.edge_count,
        "l": h.n,
        "N": red.gadget.n_elems,
        "r": red.r,
        "universe_size": red.family.universe_size,
        "set_count": len(red.family),
        "v_sets": red.v_set_count,
        "e_sets": red.e_set_count,
        "ratio": compactness_ratio(red.family.universe_size, red.r, len(red.family)),
    }


def reduced_to_json(red: ReducedPspInstance, target: str = "psp") -> dict:
    """A reduced instance in the set-family dialect plus its provenance."""
    if target == "vecsum":
        from .reduction import vectorize_instance

        out = vecsum_to_json(vectorize_instance(red))
    else:
        out = family_to_json(red.family, red.r)
        out["problem"] = target
    out["reduction"] = {
        "mode": red.mode,
        "ordering": list(red.pattern.p),
        "gadget_elems": red.gadget.n_elems,
        "graph": graph_to_json(red.source.g),
        "pattern": graph_to_json(red.source.h),
        "layout": red.layout.to_json(),
        "summary": reduction_summary(red),
    }
    return out


def load_problem(obj, problem: str):
    """Instance object for ``solve``: psp, xcover, vecsum or subiso."""
    if problem == "psp":
        return psp_from_json(obj)
    if problem == "xcover":
        return xcover_from_json(obj)
    if problem == "vecsum":
        return vecsum_from_json(obj)
    if problem == "subiso":
        return subiso_from_json(obj)
    raise ArgumentError(f"unknown problem {problem!r}")
