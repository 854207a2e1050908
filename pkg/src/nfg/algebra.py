"""Compound NFGs: formal scalar-weighted sums of graphs over one dangling
interface, plus disjoint stacking.  Evaluation delegates to the contraction
engine; no attempt is made to merge terms into a single graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple, Union

from . import scalars
from .contraction import ContractionPlan, exterior_brute, exterior_planned
from .graph import Nfg, NfgError
from .tensor import Tensor


@dataclass
class CompoundNfg:
    """Nonempty (coefficient, graph) terms sharing one ordered interface."""

    terms: List[Tuple[object, Nfg]]
    interface: Tuple[int, ...]

    def __post_init__(self):
        if not self.terms:
            raise NfgError("a compound NFG needs at least one term")
        for _, g in self.terms:
            if g.interface_signature() != self.interface:
                raise NfgError(
                    f"term interface {g.interface_signature()} != compound "
                    f"interface {self.interface}"
                )


def as_compound(g: Union[Nfg, CompoundNfg]) -> CompoundNfg:
    if isinstance(g, CompoundNfg):
        return g
    one = scalars.one(g.backend())
    return CompoundNfg([(one, g)], g.interface_signature())


def scale_nfg(g: Union[Nfg, CompoundNfg], lam) -> CompoundNfg:
    c = as_compound(g)
    backend = c.terms[0][1].backend()
    lam = scalars.coerce(backend, lam)
    return CompoundNfg([(lam * coef, graph) for coef, graph in c.terms], c.interface)


def add_nfgs(a: Union[Nfg, CompoundNfg], b: Union[Nfg, CompoundNfg]) -> CompoundNfg:
    ca, cb = as_compound(a), as_compound(b)
    if ca.interface != cb.interface:
        raise NfgError(f"interface mismatch: {ca.interface} vs {cb.interface}")
    return CompoundNfg(ca.terms + cb.terms, ca.interface)


def sub_nfgs(a: Union[Nfg, CompoundNfg], b: Union[Nfg, CompoundNfg]) -> CompoundNfg:
    return add_nfgs(a, scale_nfg(b, -1))


def stack(g1: Nfg, g2: Nfg) -> Nfg:
    """Disjoint union; the exterior function is the tensor product Z1 (x) Z2.

    Identifiers from g2 that collide with g1 are renamed automatically; the
    combined interface is g1's dangling order followed by g2's.
    """
    out = g1.copy()
    vmap = {}
    for vid, vtx in g2.vertices.items():
        new_vid = vid
        while new_vid in out.vertices:
            new_vid = new_vid + "'"
        vmap[vid] = new_vid
        out.vertices[new_vid] = type(vtx)(vtx.tensor, list(vtx.ciliation))
    emap = {}
    for eid, edge in g2.edges.items():
        new_eid = eid
        while new_eid in out.edges:
            new_eid = new_eid + "'"
        emap[eid] = new_eid
        pts = tuple(type(p)(vmap[p.vertex], p.slot) for p in edge.endpoints)
        out.edges[new_eid] = type(edge)(new_eid, edge.alphabet, pts)
    for vid in vmap.values():
        vtx = out.vertices[vid]
        vtx.ciliation = [emap[eid] for eid in vtx.ciliation]
    out.dangling = list(g1.dangling) + [emap[eid] for eid in g2.dangling]
    return out


def scale_via_constant_vertex(g: Nfg, lam) -> Nfg:
    """The stacked realization of scaling: a degree-0 vertex holding lam."""
    backend = g.backend()
    lam_t = Tensor.from_values((), [scalars.coerce(backend, lam)], backend)
    extra = Nfg()
    extra.add_vertex(lam_t, name="lam")
    return stack(g, extra)


def eval_compound(c: Union[Nfg, CompoundNfg], engine: str = "brute") -> Tensor:
    """Sum of coefficient * exterior(graph) over the terms."""
    c = as_compound(c)
    if engine == "brute":
        run = exterior_brute
    elif engine == "planned":
        run = exterior_planned
    else:
        raise ValueError(f"unknown engine {engine!r}")
    acc: Tensor = None
    for coef, g in c.terms:
        t = run(g).scale(coef)
        acc = t if acc is None else acc.add(t)
    return acc
