"""Finite tensors over a scalar backend, dense or sparse, plus pair contraction.

The two-tensor contraction here is the workhorse of the whole package: it
realizes the sum over all shared variables of a product of two local
functions, which subsumes tensor, matrix, matrix-vector and dot products.
Sparse storage (a map from index tuple to nonzero value) exists so the
Levi-Civita symbol stays at n! entries instead of n**n; the contraction
iterates over nonzeros whenever an operand is sparse.
"""

from __future__ import annotations

import itertools
from operator import itemgetter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import scalars
from .scalars import BackendMismatch, EXACT

Shape = Tuple[int, ...]
Index = Tuple[int, ...]


class TensorError(ValueError):
    pass


def shape_size(shape: Shape) -> int:
    n = 1
    for d in shape:
        n *= d
    return n


def _strides(shape: Shape) -> Tuple[int, ...]:
    acc = 1
    out = []
    for d in reversed(shape):
        out.append(acc)
        acc *= d
    return tuple(reversed(out))


def _getter(indices: Sequence[int]):
    """Key -> tuple of the given positions, tuple-valued even for 0/1 positions."""
    if len(indices) == 0:
        return lambda key: ()
    if len(indices) == 1:
        k = indices[0]
        return lambda key: (key[k],)
    return itemgetter(*indices)


class Tensor:
    """Immutable multi-dimensional array over one scalar backend."""

    __slots__ = ("shape", "backend", "dense", "sparse")

    def __init__(self, shape: Shape, backend: str, *, dense=None, sparse=None):
        scalars.check_backend(backend)
        shape = tuple(shape)
        for d in shape:
            if not isinstance(d, int) or d <= 0:
                raise TensorError(f"alphabet sizes must be positive integers, got {d!r}")
        self.shape = shape
        self.backend = backend
        if (dense is None) == (sparse is None):
            raise TensorError("exactly one of dense/sparse storage must be given")
        if dense is not None and len(dense) != shape_size(shape):
            raise TensorError(
                f"dense storage length {len(dense)} != element count {shape_size(shape)}"
            )
        self.dense = dense
        self.sparse = sparse

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_values(shape: Sequence[int], values: Sequence, backend: str = EXACT) -> "Tensor":
        """Dense tensor from row-major values; each value admitted to the backend."""
        shape = tuple(shape)
        if len(values) != shape_size(shape):
            raise TensorError(
                f"expected {shape_size(shape)} values for shape {list(shape)}, got {len(values)}"
            )
        data = [scalars.coerce(backend, v) for v in values]
        return Tensor(shape, backend, dense=data)

    @staticmethod
    def from_sparse(shape: Sequence[int], entries: Dict[Index, object], backend: str = EXACT) -> "Tensor":
        shape = tuple(shape)
        store: Dict[Index, object] = {}
        for key, v in entries.items():
            key = tuple(key)
            _check_index(shape, key)
            v = scalars.coerce(backend, v)
            if v:
                store[key] = v
        return Tensor(shape, backend, sparse=store)

    @staticmethod
    def zeros(shape: Sequence[int], backend: str = EXACT) -> "Tensor":
        z = scalars.zero(backend)
        return Tensor(tuple(shape), backend, dense=[z] * shape_size(tuple(shape)))

    # -- basic access ------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.shape)

    @property
    def is_sparse(self) -> bool:
        return self.sparse is not None

    def get(self, index: Sequence[int]):
        """Entry at a multi-index; absent sparse keys read as zero."""
        index = tuple(index)
        _check_index(self.shape, index)
        if self.dense is not None:
            st = _strides(self.shape)
            return self.dense[sum(i * s for i, s in zip(index, st))]
        return self.sparse.get(index, scalars.zero(self.backend))

    def indices(self) -> Iterable[Index]:
        return itertools.product(*(range(d) for d in self.shape))

    def to_dense(self) -> "Tensor":
        if self.dense is not None:
            return self
        z = scalars.zero(self.backend)
        data = [z] * shape_size(self.shape)
        st = _strides(self.shape)
        for key, v in self.sparse.items():
            data[sum(i * s for i, s in zip(key, st))] = v
        return Tensor(self.shape, self.backend, dense=data)

    def to_sparse(self) -> "Tensor":
        if self.sparse is not None:
            return self
        store = {}
        st = _strides(self.shape)
        for key in self.indices():
            v = self.dense[sum(i * s for i, s in zip(key, st))]
            if v:
                store[key] = v
        return Tensor(self.shape, self.backend, sparse=store)

    # -- arithmetic --------------------------------------------------------

    def scale(self, lam) -> "Tensor":
        lam = scalars.coerce(self.backend, lam)
        if self.dense is not None:
            return Tensor(self.shape, self.backend, dense=[lam * v for v in self.dense])
        if not lam:
            return Tensor(self.shape, self.backend, sparse={})
        return Tensor(self.shape, self.backend, sparse={k: lam * v for k, v in self.sparse.items()})

    def add(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        if self.is_sparse and other.is_sparse:
            out = dict(self.sparse)
            for k, v in other.sparse.items():
                s = out.get(k)
                s = v if s is None else s + v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            return Tensor(self.shape, self.backend, sparse=out)
        a = self.to_dense()
        b = other.to_dense()
        return Tensor(self.shape, self.backend, dense=[x + y for x, y in zip(a.dense, b.dense)])

    def neg(self) -> "Tensor":
        return self.scale(-1 if self.backend == EXACT else -1.0)

    def equal(self, other: "Tensor", tol=None) -> bool:
        """Exact backend compares exactly (tol ignored); float entrywise within tol."""
        self._check_compatible(other)
        if self.is_sparse and other.is_sparse:
            keys = set(self.sparse) | set(other.sparse)
            z = scalars.zero(self.backend)
            return all(
                scalars.scalar_eq(self.backend, self.sparse.get(k, z), other.sparse.get(k, z), tol)
                for k in keys
            )
        a = self.to_dense()
        b = other.to_dense()
        return all(scalars.scalar_eq(self.backend, x, y, tol) for x, y in zip(a.dense, b.dense))

    def _check_compatible(self, other: "Tensor") -> None:
        if self.backend != other.backend:
            raise BackendMismatch(f"backend mismatch: {self.backend} vs {other.backend}")
        if self.shape != other.shape:
            raise TensorError(f"shape mismatch: {list(self.shape)} vs {list(other.shape)}")

    # -- axis surgery ------------------------------------------------------

    def permute_axes(self, order: Sequence[int]) -> "Tensor":
        """New axis k reads old axis order[k]."""
        order = tuple(order)
        if sorted(order) != list(range(self.rank)):
            raise TensorError(f"{list(order)} is not a permutation of the axes")
        new_shape = tuple(self.shape[a] for a in order)
        if self.is_sparse:
            getk = _getter(order)
            return Tensor(new_shape, self.backend,
                          sparse={getk(k): v for k, v in self.sparse.items()})
        st = _strides(self.shape)
        new_data = []
        for key in itertools.product(*(range(d) for d in new_shape)):
            old = [0] * self.rank
            for newpos, oldpos in enumerate(order):
                old[oldpos] = key[newpos]
            new_data.append(self.dense[sum(i * s for i, s in zip(old, st))])
        return Tensor(new_shape, self.backend, dense=new_data)

    def trace_axes(self, ax1: int, ax2: int) -> "Tensor":
        """Sum the diagonal of two equal-sized axes (a self-loop on one vertex)."""
        if ax1 == ax2:
            raise TensorError("trace needs two distinct axes")
        if self.shape[ax1] != self.shape[ax2]:
            raise TensorError("traced axes must share an alphabet size")
        keep = [a for a in range(self.rank) if a not in (ax1, ax2)]
        out_shape = tuple(self.shape[a] for a in keep)
        z = scalars.zero(self.backend)
        if self.is_sparse:
            getk = _getter(keep)
            out: Dict[Index, object] = {}
            for key, v in self.sparse.items():
                if key[ax1] != key[ax2]:
                    continue
                k2 = getk(key)
                s = out.get(k2)
                out[k2] = v if s is None else s + v
            return Tensor(out_shape, self.backend, sparse={k: v for k, v in out.items() if v})
        st = _strides(self.shape)
        data = []
        for key in itertools.product(*(range(d) for d in out_shape)):
            acc = z
            full = [0] * self.rank
            for pos, a in enumerate(keep):
                full[a] = key[pos]
            for t in range(self.shape[ax1]):
                full[ax1] = t
                full[ax2] = t
                acc = acc + self.dense[sum(i * s for i, s in zip(full, st))]
            data.append(acc)
        return Tensor(out_shape, self.backend, dense=data)

    # -- serialization -----------------------------------------------------

    def to_obj(self) -> dict:
        """Row-major {"shape": [...], "values": [...]} with rationals as "p/q"."""
        dense = self.to_dense()
        return {
            "shape": list(self.shape),
            "values": [scalars.format_scalar(self.backend, v) for v in dense.dense],
        }

    @staticmethod
    def from_obj(obj: dict, backend: str = EXACT) -> "Tensor":
        values = [scalars.parse_scalar(backend, str(v)) for v in obj["values"]]
        return Tensor.from_values(tuple(obj["shape"]), values, backend)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        kind = "sparse" if self.is_sparse else "dense"
        return f"Tensor(shape={list(self.shape)}, backend={self.backend}, {kind})"


def _check_index(shape: Shape, index: Index) -> None:
    if len(index) != len(shape):
        raise TensorError(f"index rank {len(index)} != tensor rank {len(shape)}")
    for i, d in zip(index, shape):
        if not (0 <= i < d):
            raise TensorError(f"index {list(index)} out of bounds for shape {list(shape)}")


def pair_contract(f: Tensor, f_axes: Sequence[int], g: Tensor, g_axes: Sequence[int]) -> Tensor:
    """Sum over all paired axes of the product of entries of f and g.

    Output axes are f's unmatched axes in order, then g's unmatched axes in
    order.  Empty axis lists give the tensor (outer) product.
    """
    f_axes = list(f_axes)
    g_axes = list(g_axes)
    if len(f_axes) != len(g_axes):
        raise TensorError("axis lists must have equal length")
    for t, axes in ((f, f_axes), (g, g_axes)):
        if len(set(axes)) != len(axes):
            raise TensorError(f"duplicate axis in {axes}")
        for a in axes:
            if not (0 <= a < t.rank):
                raise TensorError(f"axis {a} out of range for rank {t.rank}")
    for fa, ga in zip(f_axes, g_axes):
        if f.shape[fa] != g.shape[ga]:
            raise TensorError(
                f"paired axes disagree on alphabet size: {f.shape[fa]} vs {g.shape[ga]}"
            )
    if f.backend != g.backend:
        raise BackendMismatch(f"backend mismatch: {f.backend} vs {g.backend}")

    f_keep = [a for a in range(f.rank) if a not in f_axes]
    g_keep = [a for a in range(g.rank) if a not in g_axes]
    out_shape = tuple([f.shape[a] for a in f_keep] + [g.shape[a] for a in g_keep])

    if f.is_sparse or g.is_sparse:
        if f.is_sparse and g.is_sparse:
            return _contract_sparse_sparse(f, f_axes, f_keep, g, g_axes, g_keep, out_shape)
        if f.is_sparse:
            return _contract_sparse_dense(f, f_axes, f_keep, g, g_axes, g_keep, out_shape,
                                          sparse_first=True)
        return _contract_sparse_dense(g, g_axes, g_keep, f, f_axes, f_keep, out_shape,
                                      sparse_first=False)
    return _contract_dense_dense(f, f_axes, f_keep, g, g_axes, g_keep, out_shape)


def _contract_dense_dense(f, f_axes, f_keep, g, g_axes, g_keep, out_shape) -> Tensor:
    z = scalars.zero(f.backend)
    stf = _strides(f.shape)
    stg = _strides(g.shape)
    data = []
    match_sizes = [f.shape[a] for a in f_axes]
    for key in itertools.product(*(range(d) for d in out_shape)):
        fkey = [0] * f.rank
        gkey = [0] * g.rank
        nf = len(f_keep)
        for pos, a in enumerate(f_keep):
            fkey[a] = key[pos]
        for pos, a in enumerate(g_keep):
            gkey[a] = key[nf + pos]
        acc = z
        for mvals in itertools.product(*(range(d) for d in match_sizes)):
            for a, mv in zip(f_axes, mvals):
                fkey[a] = mv
            for a, mv in zip(g_axes, mvals):
                gkey[a] = mv
            acc = acc + f.dense[sum(i * s for i, s in zip(fkey, stf))] * \
                g.dense[sum(i * s for i, s in zip(gkey, stg))]
        data.append(acc)
    return Tensor(out_shape, f.backend, dense=data)


def _contract_sparse_dense(sp, sp_axes, sp_keep, dn, dn_axes, dn_keep, out_shape,
                           sparse_first: bool) -> Tensor:
    """Iterate the sparse operand's nonzeros; dense entries looked up by offset."""
    dense = dn.to_dense()
    ddata = dense.dense
    std = _strides(dn.shape)
    get_match = _getter(sp_axes)
    get_keep = _getter(sp_keep)
    match_strides = [std[a] for a in dn_axes]
    out: Dict[Index, object] = {}
    oget = out.get

    if not dn_keep:
        # hot path: the dense operand is fully contracted (e.g. epsilon x matrix)
        if len(sp_axes) == 1:
            (a0,), (st0,) = sp_axes, match_strides
            for key, val in sp.sparse.items():
                dv = ddata[st0 * key[a0]]
                if not dv:
                    continue
                k2 = get_keep(key)
                s = oget(k2)
                p = val * dv
                out[k2] = p if s is None else s + p
        elif len(sp_axes) == 2:
            (a0, a1), (st0, st1) = sp_axes, match_strides
            for key, val in sp.sparse.items():
                dv = ddata[st0 * key[a0] + st1 * key[a1]]
                if not dv:
                    continue
                k2 = get_keep(key)
                s = oget(k2)
                p = val * dv
                out[k2] = p if s is None else s + p
        else:
            for key, val in sp.sparse.items():
                off = 0
                for st, a in zip(match_strides, sp_axes):
                    off += st * key[a]
                dv = ddata[off]
                if not dv:
                    continue
                k2 = get_keep(key)
                s = oget(k2)
                p = val * dv
                out[k2] = p if s is None else s + p
    else:
        free_cells = []
        for fkey in itertools.product(*(range(dn.shape[a]) for a in dn_keep)):
            off = sum(i * std[a] for i, a in zip(fkey, dn_keep))
            free_cells.append((fkey, off))
        for key, val in sp.sparse.items():
            base = 0
            for st, a in zip(match_strides, sp_axes):
                base += st * key[a]
            ks = get_keep(key)
            for fkey, off in free_cells:
                dv = ddata[base + off]
                if not dv:
                    continue
                k2 = ks + fkey if sparse_first else fkey + ks
                s = oget(k2)
                p = val * dv
                out[k2] = p if s is None else s + p
    return Tensor(out_shape, sp.backend, sparse={k: v for k, v in out.items() if v})


def _contract_sparse_sparse(f, f_axes, f_keep, g, g_axes, g_keep, out_shape) -> Tensor:
    get_gm = _getter(g_axes)
    get_gk = _getter(g_keep)
    by_match: Dict[Index, List[Tuple[Index, object]]] = {}
    for key, val in g.sparse.items():
        by_match.setdefault(get_gm(key), []).append((get_gk(key), val))
    get_fm = _getter(f_axes)
    get_fk = _getter(f_keep)
    out: Dict[Index, object] = {}
    oget = out.get
    for key, val in f.sparse.items():
        hits = by_match.get(get_fm(key))
        if not hits:
            continue
        kf = get_fk(key)
        for kg, gval in hits:
            k2 = kf + kg
            s = oget(k2)
            p = val * gval
            out[k2] = p if s is None else s + p
    return Tensor(out_shape, f.backend, sparse={k: v for k, v in out.items() if v})


# Function-style aliases used throughout the package and the CLI.
tensor_from_values = Tensor.from_values
tensor_get = Tensor.get
tensor_pair_contract = pair_contract


def tensor_equal(a: Tensor, b: Tensor, tol=None) -> bool:
    return a.equal(b, tol)


def tensor_scale(t: Tensor, lam) -> Tensor:
    return t.scale(lam)


def tensor_add(a: Tensor, b: Tensor) -> Tensor:
    return a.add(b)
