"""Exterior-function evaluation: brute-force oracle, vertex grouping and
splitting, and a greedy pairwise contraction planner.

The brute-force path literally enumerates every assignment to the internal
and dangling variables and is the ground truth for everything else.  The
planned path replays pairwise groupings (each one a two-tensor contraction)
and exploits sparse operands, which is what makes the large Levi-Civita
diagrams tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import scalars
from .graph import Edge, Nfg, NfgError, PortRef, Vertex
from .tensor import Tensor, _strides as _tensor_strides, pair_contract


@dataclass
class ContractionPlan:
    """Ordered pairwise groupings plus an estimated multiply-add count."""

    steps: List[Tuple[str, str]]
    estimated_cost: int = 0

    def to_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.steps)

    @staticmethod
    def from_text(text: str) -> "ContractionPlan":
        steps = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"malformed plan line: {line!r}")
            steps.append((parts[0], parts[1]))
        return ContractionPlan(steps)


def exterior_brute(g: Nfg) -> Tensor:
    """Z_G by literal iteration over all internal-edge assignments."""
    g.check_valid()
    backend = g.backend()
    dang = list(g.dangling)
    internal = sorted(g.internal_edge_ids())
    all_ids = dang + internal
    pos = {eid: i for i, eid in enumerate(all_ids)}
    sizes = [g.edges[eid].alphabet for eid in all_ids]

    # per-vertex fast lookup closures over the flat assignment tuple;
    # sparse factors go first so zero entries prune whole products early
    factors = []
    for vtx in g.vertices.values():
        tensor = vtx.tensor
        positions = tuple(pos[eid] for eid in vtx.ciliation)
        if tensor.is_sparse:
            store = tensor.sparse
            zero_v = scalars.zero(backend)

            def fget(assign, store=store, positions=positions, zero_v=zero_v):
                return store.get(tuple(assign[p] for p in positions), zero_v)
        else:
            data_v = tensor.dense
            strides = _tensor_strides(tensor.shape)

            def fget(assign, data_v=data_v, positions=positions, strides=strides):
                off = 0
                for p, st in zip(positions, strides):
                    off += assign[p] * st
                return data_v[off]
        factors.append((0 if tensor.is_sparse else 1, len(factors), fget))
    factors.sort()
    getters = [fget for _, _, fget in factors]

    nd = len(dang)
    zero = scalars.zero(backend)
    data = []
    for dassign in itertools.product(*(range(s) for s in sizes[:nd])):
        acc = zero
        for iassign in itertools.product(*(range(s) for s in sizes[nd:])):
            assign = dassign + iassign
            term = None
            for fget in getters:
                v = fget(assign)
                if not v:
                    term = None
                    break
                term = v if term is None else term * v
            if term is not None:
                acc = acc + term
        data.append(acc)
    if not g.vertices:
        data = [scalars.one(backend)]
    return Tensor(tuple(sizes[:nd]), backend, dense=data)


def group_vertices(g: Nfg, u: str, v: str) -> Nfg:
    """Replace u and v by one vertex realizing their pairwise contraction.

    Every edge joining u and v is summed out in this one step; edges to
    third vertices, self-loops, and dangling edges are re-attached.  The
    merged vertex keeps u's identifier; its ciliation is u's surviving slots
    in order, then v's surviving slots in order.
    """
    if u == v:
        raise NfgError("cannot group a vertex with itself")
    for vid in (u, v):
        if vid not in g.vertices:
            raise NfgError(f"unknown vertex {vid!r}")
    g = g.copy()
    vu, vv = g.vertices[u], g.vertices[v]

    shared: List[Tuple[int, int, str]] = []  # (slot on u, slot on v, edge id)
    for slot_u, eid in enumerate(vu.ciliation):
        edge = g.edges[eid]
        if len(edge.endpoints) != 2:
            continue
        (pa, pb) = edge.endpoints
        if {pa.vertex, pb.vertex} == {u, v} and pa.vertex != pb.vertex:
            slot_v = pa.slot if pa.vertex == v else pb.slot
            shared.append((slot_u, slot_v, eid))
    f_axes = [s for s, _, _ in shared]
    g_axes = [s for _, s, _ in shared]
    merged = pair_contract(vu.tensor, f_axes, vv.tensor, g_axes)

    keep_u = [s for s in range(len(vu.ciliation)) if s not in f_axes]
    keep_v = [s for s in range(len(vv.ciliation)) if s not in g_axes]
    new_cil = [vu.ciliation[s] for s in keep_u] + [vv.ciliation[s] for s in keep_v]

    slot_map: Dict[Tuple[str, int], int] = {}
    for new_slot, old in enumerate(keep_u):
        slot_map[(u, old)] = new_slot
    for new_slot, old in enumerate(keep_v, start=len(keep_u)):
        slot_map[(v, old)] = new_slot

    for _, _, eid in shared:
        del g.edges[eid]
    del g.vertices[v]
    g.vertices[u] = Vertex(merged, new_cil)
    for eid, edge in g.edges.items():
        pts = tuple(
            PortRef(u, slot_map[(p.vertex, p.slot)]) if p.vertex in (u, v) else p
            for p in edge.endpoints
        )
        g.edges[eid] = Edge(eid, edge.alphabet, pts)
    return g


def split_vertex(g: Nfg, h: str, f: Tensor, f_slots: Sequence[int],
                 gt: Tensor, g_slots: Sequence[int],
                 shared_alphabets: Sequence[int]) -> Nfg:
    """Replace vertex h by two vertices f and gt whose contraction equals h.

    f's leading axes carry h's edges at f_slots (in order) and its trailing
    axes the new internal edges; gt's leading axes are the new edges followed
    by h's edges at g_slots.  The factorization is checked exactly before
    rewriting, so the exterior function cannot change.
    """
    if h not in g.vertices:
        raise NfgError(f"unknown vertex {h!r}")
    vh = g.vertices[h]
    deg = len(vh.ciliation)
    f_slots = list(f_slots)
    g_slots = list(g_slots)
    if sorted(f_slots + g_slots) != list(range(deg)):
        raise NfgError(f"f_slots {f_slots} and g_slots {g_slots} do not partition 0..{deg - 1}")
    s = len(shared_alphabets)
    if f.rank != len(f_slots) + s or gt.rank != s + len(g_slots):
        raise NfgError("factor ranks do not match the slot partition plus shared edges")
    if list(f.shape[len(f_slots):]) != list(shared_alphabets) or \
            list(gt.shape[:s]) != list(shared_alphabets):
        raise NfgError("shared alphabets do not match factor axis sizes")
    recombined = pair_contract(f, list(range(len(f_slots), f.rank)), gt, list(range(s)))
    target = vh.tensor.permute_axes(f_slots + g_slots)
    if not recombined.equal(target):
        raise NfgError("factorization check failed: <f|g> differs from the vertex tensor")

    g = g.copy()
    base = h
    hf, hg = f"{base}_f", f"{base}_g"
    while hf in g.vertices or hg in g.vertices:
        base += "_"
        hf, hg = f"{base}_f", f"{base}_g"
    old_cil = list(vh.ciliation)
    del g.vertices[h]
    new_eids = []
    for _ in range(s):
        eid = g.fresh_edge_id()
        # reserve the id before generating the next one
        g.edges[eid] = Edge(eid, 0, ())
        new_eids.append(eid)
    cil_f = [old_cil[sl] for sl in f_slots] + list(new_eids)
    cil_g = list(new_eids) + [old_cil[sl] for sl in g_slots]
    g.vertices[hf] = Vertex(f, cil_f)
    g.vertices[hg] = Vertex(gt, cil_g)
    for k, eid in enumerate(new_eids):
        g.edges[eid] = Edge(eid, int(shared_alphabets[k]),
                            (PortRef(hf, len(f_slots) + k), PortRef(hg, k)))
    slot_map: Dict[int, PortRef] = {}
    for new_slot, old in enumerate(f_slots):
        slot_map[old] = PortRef(hf, new_slot)
    for new_slot, old in enumerate(g_slots, start=s):
        slot_map[old] = PortRef(hg, new_slot)
    for eid, edge in list(g.edges.items()):
        if eid in new_eids:
            continue
        pts = tuple(slot_map[p.slot] if p.vertex == h else p for p in edge.endpoints)
        g.edges[eid] = Edge(eid, edge.alphabet, pts)
    return g


def brute_cost(g: Nfg) -> int:
    """Multiplication count of the literal sum-of-products enumeration."""
    terms = 1
    for edge in g.edges.values():
        terms *= edge.alphabet
    return max(len(g.vertices) - 1, 1) * terms


def plan_greedy(g: Nfg) -> ContractionPlan:
    """Repeatedly group the adjacent pair with the cheapest grouping step.

    A step's cost is the product of the alphabet sizes of all edges incident
    on the pair, counting shared edges once.  Ties break on the smallest
    (vertex id, vertex id) pair; the merged vertex keeps the first id.
    """
    g.check_valid()
    incident: Dict[str, Set[str]] = {vid: set() for vid in g.vertices}
    endpoints: Dict[str, Set[str]] = {}
    alphabet = {eid: e.alphabet for eid, e in g.edges.items()}
    for eid, edge in g.edges.items():
        vs = {p.vertex for p in edge.endpoints}
        endpoints[eid] = vs
        for vid in vs:
            incident[vid].add(eid)

    steps: List[Tuple[str, str]] = []
    total = 0
    while True:
        pairs = set()
        for eid, vs in endpoints.items():
            if len(vs) == 2:
                pairs.add(tuple(sorted(vs)))
        if not pairs:
            break
        best = None
        for u, v in sorted(pairs):
            cost = 1
            for eid in incident[u] | incident[v]:
                cost *= alphabet[eid]
            if best is None or (cost, u, v) < best:
                best = (cost, u, v)
        cost, u, v = best
        shared = {eid for eid in incident[u] & incident[v] if endpoints[eid] == {u, v}}
        incident[u] = (incident[u] | incident[v]) - shared
        del incident[v]
        for eid in shared:
            del endpoints[eid]
            del alphabet[eid]
        for eid, vs in endpoints.items():
            if v in vs:
                vs.discard(v)
                vs.add(u)
        steps.append((u, v))
        total += cost
    return ContractionPlan(steps, total)


def _trace_out_self_loops(g: Nfg, vid: str) -> None:
    """Sum out every self-loop on a vertex, in slot order (mutates g in place)."""
    while True:
        vtx = g.vertices[vid]
        loop_eid = None
        for eid in vtx.ciliation:
            if vtx.ciliation.count(eid) == 2:
                loop_eid = eid
                break
        if loop_eid is None:
            return
        s1 = vtx.ciliation.index(loop_eid)
        s2 = vtx.ciliation.index(loop_eid, s1 + 1)
        keep = [s for s in range(len(vtx.ciliation)) if s not in (s1, s2)]
        new_tensor = vtx.tensor.trace_axes(s1, s2)
        new_cil = [vtx.ciliation[s] for s in keep]
        slot_map = {old: new for new, old in enumerate(keep)}
        del g.edges[loop_eid]
        g.vertices[vid] = Vertex(new_tensor, new_cil)
        for eid, edge in g.edges.items():
            pts = tuple(
                PortRef(vid, slot_map[p.slot]) if p.vertex == vid else p
                for p in edge.endpoints
            )
            g.edges[eid] = Edge(eid, edge.alphabet, pts)


def exterior_planned(g: Nfg, plan: Optional[ContractionPlan] = None) -> Tensor:
    """Replay a grouping plan (greedy by default), then combine components.

    After all groupings each remaining vertex has its self-loops summed out;
    remaining vertices carry only dangling edges and are combined by tensor
    product, then the axes are reordered to the declared interface.
    """
    g.check_valid()
    if plan is None:
        plan = plan_greedy(g)
    backend = g.backend()
    work = g.copy()
    for u, v in plan.steps:
        if u not in work.vertices or v not in work.vertices:
            raise NfgError(f"plan step ({u!r}, {v!r}) is not replayable")
        work = group_vertices(work, u, v)
    for vid in sorted(work.vertices):
        _trace_out_self_loops(work, vid)
    acc: Optional[Tensor] = None
    axis_edges: List[str] = []
    for vid in sorted(work.vertices):
        vtx = work.vertices[vid]
        acc = vtx.tensor if acc is None else pair_contract(acc, [], vtx.tensor, [])
        axis_edges.extend(vtx.ciliation)
    if acc is None:
        return Tensor((), backend, dense=[scalars.one(backend)])
    # axes currently follow axis_edges; reorder to the dangling interface
    order = [axis_edges.index(eid) for eid in g.dangling]
    return acc.permute_axes(order)
