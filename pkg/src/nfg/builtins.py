"""Special tensors and permutation machinery.

Permutations are 1-based at the API boundary (images over {1..n}); the
Levi-Civita tensor is exposed in sparse form only, since it has n! nonzeros
out of n**n cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from . import scalars
from .scalars import EXACT
from .tensor import Tensor

EPS_DEFAULT_LIMIT = 10


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}; images[j-1] is the image of j."""

    images: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"{list(self.images)} is not a permutation of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, i in enumerate(self.images, start=1):
            inv[i - 1] = j
        return Permutation(tuple(inv))


def perm_sign(p: Permutation) -> int:
    """Parity by inversion counting: (-1)**inversions."""
    inv = 0
    img = p.images
    n = len(img)
    for i in range(n):
        for j in range(i + 1, n):
            if img[i] > img[j]:
                inv += 1
    return -1 if inv % 2 else 1


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """p after q: (p o q)(j) = p(q(j))."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    return Permutation(tuple(p.images[q.images[j] - 1] for j in range(p.n)))


def tau(n: int) -> Permutation:
    """The interleaving permutation on 2n elements: 2k-1 -> k, 2k -> 2n-(k-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    images = [0] * (2 * n)
    for k in range(1, n + 1):
        images[2 * k - 2] = k
        images[2 * k - 1] = 2 * n - (k - 1)
    return Permutation(tuple(images))


def tau_swap_count(n: int) -> int:
    """Swap count of the construction behind tau: floor(n/2) + n(n-1)/2."""
    return n // 2 + n * (n - 1) // 2


def levi_civita(n: int, backend: str = EXACT, limit: int = EPS_DEFAULT_LIMIT) -> Tensor:
    """Rank-n, all axes size n, sparse: sign at permutation tuples, zero elsewhere.

    Internally 0-based like every tensor; entry (p1-1, ..., pn-1) holds
    sgn(p) for each permutation p of 1..n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise ValueError(f"n={n} exceeds the Levi-Civita limit {limit} (n! storage)")
    perms = list(itertools.permutations(range(n)))
    if n == 1:
        parity = [0]
    else:
        arr = np.array(perms, dtype=np.int8)
        inv = np.zeros(len(perms), dtype=np.int32)
        for i in range(n):
            for j in range(i + 1, n):
                inv += arr[:, i] > arr[:, j]
        parity = (inv & 1).tolist()
    pos = scalars.one(backend)
    neg = -pos
    entries: Dict[Tuple[int, ...], object] = {
        p: (neg if odd else pos) for p, odd in zip(perms, parity)
    }
    return Tensor((n,) * n, backend, sparse=entries)


def eps_get(eps: Tensor, args: Sequence[int]):
    """Levi-Civita lookup with 1-based arguments."""
    return eps.get(tuple(a - 1 for a in args))


def delta2(size: int, backend: str = EXACT) -> Tensor:
    """The equality indicator as a rank-2 tensor: the identity matrix."""
    if size < 1:
        raise ValueError("size must be positive")
    one = scalars.one(backend)
    return Tensor((size, size), backend, sparse={(i, i): one for i in range(size)})


def delta_point(size: int, i: int, backend: str = EXACT) -> Tensor:
    """Point mass at i (1-based): the standard basis vector e_i."""
    if not (1 <= i <= size):
        raise ValueError(f"i={i} out of range 1..{size}")
    one = scalars.one(backend)
    return Tensor((size,), backend, sparse={(i - 1,): one})
