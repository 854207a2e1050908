"""Diagram constructors and independent oracles for the linear-algebra
identities: trace, cross product, Levi-Civita contraction, the cross-product
identity suites, determinant, and the Pfaffian diagram.

Every ``check_*`` function evaluates both sides of an identity through
separate routes (NFG contraction on one side, independent combinatorics or a
differently wired NFG on the other) and reports exact equality on the
rational backend.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import scalars
from .algebra import CompoundNfg, add_nfgs, eval_compound, stack, sub_nfgs
from .builtins import Permutation, delta2, delta_point, levi_civita, perm_sign
from .contraction import exterior_brute, exterior_planned
from .graph import Nfg, NfgError
from .scalars import EXACT
from .tensor import Tensor, pair_contract

PFAFFIAN_ORACLE_MAX_DIM = 8    # factorial enumeration bound (2n)
PFAFFIAN_DIAGRAM_MAX_DIM = 10  # sparse-epsilon diagram bound (2n)


@dataclass
class IdentityCheckReport:
    name: str
    lhs: Tensor
    rhs: Tensor
    equal: bool
    backend: str

    def line(self) -> str:
        status = "PASS" if self.equal else "FAIL"
        return f"{self.name} {status} {_render(self.lhs)} {_render(self.rhs)}"


def _render(t: Tensor) -> str:
    dense = t.to_dense()
    vals = ",".join(scalars.format_scalar(t.backend, v) for v in dense.dense)
    if t.rank == 0:
        return vals
    return f"[{vals}]"


def _report(name: str, lhs: Tensor, rhs: Tensor) -> IdentityCheckReport:
    return IdentityCheckReport(name, lhs, rhs, lhs.equal(rhs), lhs.backend)


# -- small vector/matrix plumbing -------------------------------------------


def vec_values(t: Tensor) -> list:
    if t.rank != 1:
        raise NfgError("expected a rank-1 tensor")
    return [t.get((i,)) for i in range(t.shape[0])]


def matrix_column(a: Tensor, j: int) -> Tensor:
    """Column j (0-based) of a rank-2 tensor, as a rank-1 tensor."""
    rows = a.shape[0]
    return Tensor(
        (rows,), a.backend,
        dense=[a.get((i, j)) for i in range(rows)],
    )


def transpose(a: Tensor) -> Tensor:
    return a.permute_axes([1, 0])


def matmul_oracle(a: Tensor, b: Tensor) -> Tensor:
    """Schoolbook triple-loop matrix product."""
    n, k = a.shape
    k2, m = b.shape
    if k != k2:
        raise NfgError("inner dimensions disagree")
    z = scalars.zero(a.backend)
    data = []
    for i in range(n):
        for j in range(m):
            acc = z
            for t in range(k):
                acc = acc + a.get((i, t)) * b.get((t, j))
            data.append(acc)
    return Tensor((n, m), a.backend, dense=data)


def trace_oracle(a: Tensor):
    if a.rank != 2 or a.shape[0] != a.shape[1]:
        raise NfgError("trace needs a square matrix")
    acc = scalars.zero(a.backend)
    for i in range(a.shape[0]):
        acc = acc + a.get((i, i))
    return acc


def dot_oracle(u: Tensor, v: Tensor):
    acc = scalars.zero(u.backend)
    for x, y in zip(vec_values(u), vec_values(v)):
        acc = acc + x * y
    return acc


def cross_oracle(u: Tensor, v: Tensor) -> Tensor:
    """Componentwise cross product of two length-3 vectors."""
    a, b = vec_values(u), vec_values(v)
    return Tensor((3,), u.backend, dense=[
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def scalar_tensor(value, backend: str = EXACT) -> Tensor:
    return Tensor.from_values((), [value], backend)


# -- diagram builder ---------------------------------------------------------


class DiagramBuilder:
    """Combinators for wiring cross/dot diagrams out of epsilon vertices.

    A pending port is a (vertex id, slot) pair that is not yet covered by an
    edge; ``cross`` consumes two ports and yields the epsilon vertex's first
    slot, ``dot`` joins two ports, ``out`` turns a port into a dangling edge.
    """

    def __init__(self, backend: str = EXACT):
        self.g = Nfg()
        self.backend = backend
        self._eps = levi_civita(3, backend)

    def vec(self, t: Tensor) -> Tuple[str, int]:
        vid = self.g.add_vertex(t)
        return (vid, 0)

    def cross(self, px: Tuple[str, int], py: Tuple[str, int]) -> Tuple[str, int]:
        eps_id = self.g.add_vertex(self._eps)
        self.g.connect((eps_id, 1), px)
        self.g.connect((eps_id, 2), py)
        return (eps_id, 0)

    def dot(self, p: Tuple[str, int], q: Tuple[str, int]) -> "DiagramBuilder":
        self.g.connect(p, q)
        return self

    def out(self, p: Tuple[str, int]) -> str:
        return self.g.add_dangling(p)


# -- trace and cross-product diagrams ---------------------------------------


def trace_diagram(a: Tensor) -> Nfg:
    """One vertex with a self-loop; the exterior function is tr(a)."""
    if a.rank != 2 or a.shape[0] != a.shape[1]:
        raise NfgError("trace diagram needs a square matrix")
    g = Nfg()
    vid = g.add_vertex(a, name="a")
    g.connect((vid, 0), (vid, 1), name="loop")
    return g


def matrix_cycle_diagram(mats: Sequence[Tuple[Tensor, bool]]) -> Nfg:
    """The trace of a product of matrices, each optionally transposed.

    Wires column of each factor to row of the next, cyclically; transposition
    is realized purely by ciliation (plugging the other slot), with the
    stored tensor untouched.
    """
    g = Nfg()
    vids = [g.add_vertex(t, name=f"m{k}") for k, (t, _) in enumerate(mats)]
    n = len(mats)
    for k in range(n):
        _, tr_k = mats[k]
        _, tr_next = mats[(k + 1) % n]
        out_slot = 0 if tr_k else 1      # column axis of the k-th factor
        in_slot = 1 if tr_next else 0    # row axis of the next factor
        g.connect((vids[k], out_slot), (vids[(k + 1) % n], in_slot))
    return g


def matrix_chain_diagram(a: Tensor, b: Tensor, a_transposed: bool = False,
                         b_transposed: bool = False) -> Nfg:
    """Two matrices joined by one edge, dangling row/column ends.

    The fully un-transposed wiring realizes the matrix product AB with the
    interface ordered (row index, column index).
    """
    g = Nfg()
    va = g.add_vertex(a, name="a")
    vb = g.add_vertex(b, name="b")
    a_out = 0 if a_transposed else 1
    a_free = 1 - a_out
    b_in = 1 if b_transposed else 0
    b_free = 1 - b_in
    g.connect((va, a_out), (vb, b_in), name="mid")
    g.add_dangling((va, a_free), name="x1")
    g.add_dangling((vb, b_free), name="x2")
    return g


def cross_diagram(u: Tensor, v: Tensor) -> Nfg:
    """Epsilon vertex with u and v on its second and third arguments; the
    dangling first argument carries u x v."""
    if u.shape != (3,) or v.shape != (3,):
        raise NfgError("cross product needs two length-3 vectors")
    b = DiagramBuilder(u.backend)
    p = b.cross(b.vec(u), b.vec(v))
    b.out(p)
    return b.g


# -- identity checks ---------------------------------------------------------


def check_eps_contraction(backend: str = EXACT) -> IdentityCheckReport:
    """Contraction of two Levi-Civita symbols over one shared argument equals
    a difference of Kronecker-delta pairs; checked exhaustively over {1,2,3}^4.

    Interface order is (x1, x2, y1, y2) on both sides.
    """
    eps = levi_civita(3, backend)
    lhs_g = Nfg()
    e1 = lhs_g.add_vertex(eps, name="eps1")
    e2 = lhs_g.add_vertex(eps, name="eps2")
    lhs_g.connect((e1, 2), (e2, 0), name="t")
    y1 = lhs_g.add_dangling((e1, 0), name="y1")
    y2 = lhs_g.add_dangling((e1, 1), name="y2")
    x2 = lhs_g.add_dangling((e2, 1), name="x2")
    x1 = lhs_g.add_dangling((e2, 2), name="x1")
    lhs_g.set_interface([x1, x2, y1, y2])

    def delta_pairs(pair_a, pair_b) -> Nfg:
        g = Nfg()
        d1 = g.add_vertex(delta2(3, backend), name="d1")
        d2 = g.add_vertex(delta2(3, backend), name="d2")
        ids = {}
        ids[pair_a[0]] = g.add_dangling((d1, 0), name=pair_a[0])
        ids[pair_a[1]] = g.add_dangling((d1, 1), name=pair_a[1])
        ids[pair_b[0]] = g.add_dangling((d2, 0), name=pair_b[0])
        ids[pair_b[1]] = g.add_dangling((d2, 1), name=pair_b[1])
        g.set_interface([ids["x1"], ids["x2"], ids["y1"], ids["y2"]])
        return g

    rhs = sub_nfgs(delta_pairs(("x1", "y2"), ("x2", "y1")),
                   delta_pairs(("x1", "y1"), ("x2", "y2")))
    return _report("fig8-eps-contraction", exterior_brute(lhs_g), eval_compound(rhs))


def check_cross_chain(u: Tensor, v: Tensor, s: Tensor, w: Tensor) -> IdentityCheckReport:
    """The six-way chain from (u x v).(s x w) down to (u.s)(v.w) - (u.w)(v.s)."""
    def rank0(build) -> Tensor:
        b = DiagramBuilder(u.backend)
        build(b)
        return exterior_brute(b.g)

    values = [
        rank0(lambda b: b.dot(b.cross(b.vec(u), b.vec(v)), b.cross(b.vec(s), b.vec(w)))),
        rank0(lambda b: b.dot(b.cross(b.cross(b.vec(u), b.vec(v)), b.vec(s)), b.vec(w))),
        rank0(lambda b: b.dot(b.cross(b.vec(w), b.cross(b.vec(u), b.vec(v))), b.vec(s))),
        rank0(lambda b: b.dot(b.cross(b.cross(b.vec(s), b.vec(w)), b.vec(u)), b.vec(v))),
        rank0(lambda b: b.dot(b.cross(b.vec(v), b.cross(b.vec(s), b.vec(w))), b.vec(u))),
    ]

    def dot_pair(x1, y1, x2, y2) -> Nfg:
        b = DiagramBuilder(u.backend)
        b.dot(b.vec(x1), b.vec(y1))
        b.dot(b.vec(x2), b.vec(y2))
        return b.g

    rhs_val = eval_compound(sub_nfgs(dot_pair(u, s, v, w), dot_pair(u, w, v, s)))
    values.append(rhs_val)
    equal = all(t.equal(values[0]) for t in values[1:])
    return IdentityCheckReport("fig9-cross-chain", values[0], values[-1], equal, u.backend)


def _sum_over_columns(graphs: List[Nfg]) -> CompoundNfg:
    acc = None
    for g in graphs:
        acc = g if acc is None else add_nfgs(acc, g)
    from .algebra import as_compound

    return as_compound(acc)


def check_fig10(a: Tensor, b: Tensor, c: Tensor, d: Tensor) -> IdentityCheckReport:
    """sum_ij (a_i x b_j).(c_j x d_i) = tr(AD^T BC^T) - tr(BC^T) tr(AD^T)."""
    for t in (a, b, c, d):
        if t.rank != 2 or t.shape[0] != 3:
            raise NfgError("fig10 needs rank-2 tensors with 3 rows")
    if a.shape[1] != d.shape[1] or b.shape[1] != c.shape[1]:
        raise NfgError("fig10 needs the column counts of A,D and of B,C to agree")
    m, mp = a.shape[1], b.shape[1]

    def term(i: int, j: int) -> Nfg:
        bd = DiagramBuilder(a.backend)
        bd.dot(bd.cross(bd.vec(matrix_column(a, i)), bd.vec(matrix_column(b, j))),
               bd.cross(bd.vec(matrix_column(c, j)), bd.vec(matrix_column(d, i))))
        return bd.g

    lhs = eval_compound(_sum_over_columns([term(i, j) for i in range(m) for j in range(mp)]))
    rhs = eval_compound(sub_nfgs(
        matrix_cycle_diagram([(a, False), (d, True), (b, False), (c, True)]),
        stack(matrix_cycle_diagram([(b, False), (c, True)]),
              matrix_cycle_diagram([(a, False), (d, True)])),
    ))
    return IdentityCheckReport("fig10-cross-matrix", lhs, rhs, lhs.equal(rhs), a.backend)


def check_fig11a(a: Tensor, b: Tensor, c: Tensor, d: Tensor) -> IdentityCheckReport:
    """sum_ij (a_i x b_i).(c_j x d_j) = tr(AB^T DC^T) - tr(AB^T CD^T)."""
    for t in (a, b, c, d):
        if t.rank != 2 or t.shape[0] != 3:
            raise NfgError("fig11a needs rank-2 tensors with 3 rows")
    if a.shape[1] != b.shape[1] or c.shape[1] != d.shape[1]:
        raise NfgError("fig11a needs the column counts of A,B and of C,D to agree")
    m, mp = a.shape[1], c.shape[1]

    def term(i: int, j: int) -> Nfg:
        bd = DiagramBuilder(a.backend)
        bd.dot(bd.cross(bd.vec(matrix_column(a, i)), bd.vec(matrix_column(b, i))),
               bd.cross(bd.vec(matrix_column(c, j)), bd.vec(matrix_column(d, j))))
        return bd.g

    lhs = eval_compound(_sum_over_columns([term(i, j) for i in range(m) for j in range(mp)]))
    rhs = eval_compound(sub_nfgs(
        matrix_cycle_diagram([(a, False), (b, True), (d, False), (c, True)]),
        matrix_cycle_diagram([(a, False), (b, True), (c, False), (d, True)]),
    ))
    return IdentityCheckReport("fig11a-cross-matrix", lhs, rhs, lhs.equal(rhs), a.backend)


def check_fig11b(a1: Tensor, b: Tensor, c: Tensor) -> IdentityCheckReport:
    """sum_i (a1 x b_i) x c_i = (BC^T) a1 - tr(BC^T) a1."""
    if a1.shape != (3,):
        raise NfgError("fig11b needs a length-3 vector a1")
    for t in (b, c):
        if t.rank != 2 or t.shape[0] != 3:
            raise NfgError("fig11b needs rank-2 tensors with 3 rows")
    if b.shape[1] != c.shape[1]:
        raise NfgError("fig11b needs the column counts of B and C to agree")
    m = b.shape[1]

    def term(i: int) -> Nfg:
        bd = DiagramBuilder(a1.backend)
        p = bd.cross(bd.cross(bd.vec(a1), bd.vec(matrix_column(b, i))),
                     bd.vec(matrix_column(c, i)))
        bd.out(p)
        return bd.g

    lhs = eval_compound(_sum_over_columns([term(i) for i in range(m)]))

    # (BC^T) a1: B.row dangles, B.col--C.col, C.row--a1
    g1 = Nfg()
    vb = g1.add_vertex(b, name="b")
    vc = g1.add_vertex(c, name="c")
    va = g1.add_vertex(a1, name="a1")
    g1.connect((vb, 1), (vc, 1), name="i")
    g1.connect((vc, 0), (va, 0), name="y")
    g1.add_dangling((vb, 0), name="x")
    # tr(BC^T) a1: the trace cycle stacked beside a lone dangling a1
    g2a = matrix_cycle_diagram([(b, False), (c, True)])
    g2b = Nfg()
    va2 = g2b.add_vertex(a1, name="a1")
    g2b.add_dangling((va2, 0), name="x")
    rhs = eval_compound(sub_nfgs(g1, stack(g2a, g2b)))
    return IdentityCheckReport("fig11b-cross-matrix", lhs, rhs, lhs.equal(rhs), a1.backend)


def check_cross_matrix_identities(a: Tensor, b: Tensor, c: Tensor,
                                  d: Tensor) -> List[IdentityCheckReport]:
    """All three matrix cross-product identities on one admissible quadruple."""
    return [
        check_fig10(a, b, c, d),
        check_fig11a(a, b, c, d),
        check_fig11b(matrix_column(a, 0), b, c),
    ]


# -- determinant -------------------------------------------------------------


def det_diagram(a: Tensor) -> Nfg:
    """Epsilon vertex whose argument j reads the j-th column of a, selected by
    a point-mass vector; the exterior function equals det(a)."""
    if a.rank != 2 or a.shape[0] != a.shape[1]:
        raise NfgError("determinant needs a square matrix")
    n = a.shape[0]
    g = Nfg()
    eps_id = g.add_vertex(levi_civita(n, a.backend), name="eps")
    for j in range(1, n + 1):
        va = g.add_vertex(a, name=f"a{j}")
        vd = g.add_vertex(delta_point(n, j, a.backend), name=f"d{j}")
        g.connect((eps_id, j - 1), (va, 0), name=f"x{j}")
        g.connect((va, 1), (vd, 0), name=f"c{j}")
    return g


def det_oracle(a: Tensor):
    """Permutation sum: sum over sigma of sgn(sigma) prod_j a(j, sigma(j))."""
    if a.rank != 2 or a.shape[0] != a.shape[1]:
        raise NfgError("determinant needs a square matrix")
    n = a.shape[0]
    acc = scalars.zero(a.backend)
    one = scalars.one(a.backend)
    for images in itertools.permutations(range(1, n + 1)):
        sgn = perm_sign(Permutation(images))
        term = one if sgn > 0 else -one
        for j in range(n):
            term = term * a.get((j, images[j] - 1))
            if not term:
                break
        acc = acc + term
    return acc


def det_cofactor(a: Tensor):
    """Cofactor (Laplace) expansion along the first row; second oracle route."""
    n = a.shape[0]
    if n == 1:
        return a.get((0, 0))
    acc = scalars.zero(a.backend)
    for j in range(n):
        v = a.get((0, j))
        if not v:
            continue
        minor_vals = [
            a.get((i, k)) for i in range(1, n) for k in range(n) if k != j
        ]
        minor = Tensor((n - 1, n - 1), a.backend, dense=minor_vals)
        term = v * det_cofactor(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def check_triple_product(a1: Tensor, a2: Tensor, a3: Tensor) -> IdentityCheckReport:
    """(a1 x a2).a3 = (a2 x a3).a1 = (a3 x a1).a2 = det(a1 a2 a3)."""
    for t in (a1, a2, a3):
        if t.shape != (3,):
            raise NfgError("triple product needs three length-3 vectors")

    def triple(x, y, z) -> Tensor:
        bd = DiagramBuilder(a1.backend)
        bd.dot(bd.cross(bd.vec(x), bd.vec(y)), bd.vec(z))
        return exterior_brute(bd.g)

    cols = [a1, a2, a3]
    mat = Tensor((3, 3), a1.backend,
                 dense=[cols[j].get((i,)) for i in range(3) for j in range(3)])
    det_val = exterior_planned(det_diagram(mat))
    values = [triple(a1, a2, a3), triple(a2, a3, a1), triple(a3, a1, a2), det_val]
    equal = all(t.equal(values[0]) for t in values[1:])
    return IdentityCheckReport("triple-product", values[0], det_val, equal, a1.backend)


# -- Pfaffian ----------------------------------------------------------------


def _check_skew(a: Tensor) -> int:
    if a.rank != 2 or a.shape[0] != a.shape[1]:
        raise NfgError("Pfaffian needs a square matrix")
    dim = a.shape[0]
    if dim % 2 != 0:
        raise NfgError(f"Pfaffian needs an even dimension, got {dim}")
    for i in range(dim):
        for j in range(i, dim):
            if a.get((i, j)) + a.get((j, i)):
                raise NfgError(f"matrix is not skew-symmetric at ({i}, {j})")
    return dim


def pfaffian_diagram(a: Tensor, limit: int = PFAFFIAN_DIAGRAM_MAX_DIM) -> Nfg:
    """One epsilon(2n) vertex and n copies of a: copy k reads epsilon's k-th
    and (2n-k+1)-th arguments.  The exterior function is n! 2^n Pf(a)."""
    dim = _check_skew(a)
    if dim > limit:
        raise NfgError(f"dimension {dim} exceeds the diagram limit {limit}")
    n = dim // 2
    g = Nfg()
    eps_id = g.add_vertex(levi_civita(dim, a.backend), name="eps")
    for k in range(1, n + 1):
        va = g.add_vertex(a, name=f"a{k}")
        g.connect((eps_id, k - 1), (va, 0), name=f"i{k}")
        g.connect((eps_id, 2 * n - k), (va, 1), name=f"j{k}")
    return g


def pfaffian_oracle(a: Tensor, limit: int = PFAFFIAN_ORACLE_MAX_DIM):
    """Exact Pfaffian by literal enumeration of S_2n:
    (1 / 2^n n!) sum over sigma of sgn(sigma) prod_i a(sigma(2i-1), sigma(2i))."""
    dim = _check_skew(a)
    if dim > limit:
        raise NfgError(f"dimension {dim} exceeds the oracle limit {limit}")
    n = dim // 2
    acc = scalars.zero(a.backend)
    one = scalars.one(a.backend)
    for images in itertools.permutations(range(1, dim + 1)):
        term = one if perm_sign(Permutation(images)) > 0 else -one
        for i in range(n):
            term = term * a.get((images[2 * i] - 1, images[2 * i + 1] - 1))
            if not term:
                break
        acc = acc + term
    denom = 2 ** n
    for k in range(2, n + 1):
        denom *= k
    if a.backend == EXACT:
        return acc / scalars.rat(denom)
    return acc / float(denom)


def pfaffian_factor(n: int) -> int:
    """The proportionality constant n! 2^n between the diagram and Pf."""
    f = 2 ** n
    for k in range(2, n + 1):
        f *= k
    return f


def check_prop1(a: Tensor, engine: str = "planned") -> IdentityCheckReport:
    """The Pfaffian diagram's exterior equals n! 2^n Pf(a)."""
    dim = _check_skew(a)
    n = dim // 2
    run = exterior_brute if engine == "brute" else exterior_planned
    lhs = run(pfaffian_diagram(a))
    pf = pfaffian_oracle(a)
    rhs = scalar_tensor(pf, a.backend).scale(pfaffian_factor(n))
    return _report(f"prop1-pfaffian-2n={dim}", lhs, rhs)


# -- edge utilities used by the delta-insertion property ----------------------


def insert_delta2(g: Nfg, eid: str) -> Nfg:
    """Splice an identity-matrix vertex into the middle of an edge; the
    exterior function is unchanged (the wire abbreviation)."""
    if eid not in g.edges:
        raise NfgError(f"unknown edge {eid!r}")
    edge = g.edges[eid]
    out = g.copy()
    size = edge.alphabet
    del out.edges[eid]
    was_dangling = eid in out.dangling
    if was_dangling:
        pos = out.dangling.index(eid)
        out.dangling.remove(eid)
    dv = out.add_vertex(delta2(size, g.backend()))
    # reopen the claimed ports so connect() can claim them again
    for p in edge.endpoints:
        out.vertices[p.vertex].ciliation[p.slot] = None
    if was_dangling:
        (p,) = edge.endpoints
        out.connect((dv, 0), (p.vertex, p.slot))
        new_eid = out.add_dangling((dv, 1), name=eid)
        out.dangling.remove(new_eid)
        out.dangling.insert(pos, new_eid)
    else:
        pa, pb = edge.endpoints
        out.connect((dv, 0), (pa.vertex, pa.slot))
        out.connect((dv, 1), (pb.vertex, pb.slot))
    return out
