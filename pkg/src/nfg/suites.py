"""Named verification suites over random or exhaustive instances.

Each suite returns (name, passed, detail) rows.  Random suites are seeded and
deterministic; the exact backend makes every comparison zero-tolerance.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Dict, List, Tuple

from . import scalars
from .builtins import levi_civita, perm_sign, tau, tau_swap_count
from .contraction import exterior_brute, exterior_planned, plan_greedy
from .diagrams import (
    check_cross_chain,
    check_eps_contraction,
    check_fig10,
    check_fig11a,
    check_fig11b,
    check_prop1,
    check_triple_product,
    det_cofactor,
    det_diagram,
    det_oracle,
    matmul_oracle,
    matrix_column,
    pfaffian_diagram,
    pfaffian_factor,
    pfaffian_oracle,
    scalar_tensor,
    transpose,
)
from .scalars import EXACT
from .tensor import Tensor

Row = Tuple[str, bool, str]

DEFAULT_SEED = 0
DEFAULT_TRIALS = 100


def rand_rat(rng: random.Random):
    return scalars.rat(rng.randint(-9, 9), rng.randint(1, 9))


def rand_vec(rng: random.Random, n: int = 3) -> Tensor:
    return Tensor((n,), EXACT, dense=[rand_rat(rng) for _ in range(n)])


def rand_mat(rng: random.Random, rows: int, cols: int) -> Tensor:
    return Tensor((rows, cols), EXACT,
                  dense=[rand_rat(rng) for _ in range(rows * cols)])


def rand_skew(rng: random.Random, dim: int) -> Tensor:
    zero = scalars.rat(0)
    data = [[zero] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            v = rand_rat(rng)
            data[i][j] = v
            data[j][i] = -v
    return Tensor((dim, dim), EXACT, dense=[x for row in data for x in row])


# -- suites -------------------------------------------------------------------


def suite_lemma2(nmax: int = 6, **_) -> List[Row]:
    """Cyclic-shift law of the Levi-Civita symbol, exhaustive over all tuples."""
    rows: List[Row] = []
    for n in range(1, nmax + 1):
        eps = levi_civita(n)
        sign = scalars.rat(1) if (n - 1) % 2 == 0 else scalars.rat(-1)
        ok = all(
            eps.get(x) == sign * eps.get(x[1:] + x[:1])
            for x in itertools.product(range(n), repeat=n)
        )
        if ok and n % 2 == 1 and n <= 5:
            ok = all(
                eps.get(x) == eps.get(x[k:] + x[:k])
                for x in itertools.product(range(n), repeat=n)
                for k in range(n)
            )
        rows.append((f"lemma2-n={n}", ok, f"{n ** n} tuples"))
    return rows


def suite_lemma3(nmax: int = 10, **_) -> List[Row]:
    rows: List[Row] = []
    for n in range(1, nmax + 1):
        sgn = perm_sign(tau(n))
        swaps = tau_swap_count(n)
        ok = sgn == 1 and swaps % 2 == 0
        rows.append((f"lemma3-n={n}", ok, f"sgn(tau)={sgn:+d} swaps={swaps}"))
    return rows


def suite_fig8(**_) -> List[Row]:
    rep = check_eps_contraction()
    return [(rep.name, rep.equal, "81 assignments")]


def suite_fig9(seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS, **_) -> List[Row]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        rep = check_cross_chain(*(rand_vec(rng) for _ in range(4)))
        if not rep.equal:
            failures += 1
    return [("fig9-cross-chain", failures == 0, f"{trials} trials, {failures} failures")]


def _matrix_identity_suite(name: str, runner, seed: int, trials: int,
                           max_cols: int = 4) -> List[Row]:
    rng = random.Random(seed)
    rows: List[Row] = []
    for m in range(1, max_cols + 1):
        for mp in range(1, max_cols + 1):
            failures = 0
            for _ in range(trials):
                if not runner(rng, m, mp).equal:
                    failures += 1
            rows.append((f"{name}-m={m}-m'={mp}", failures == 0,
                         f"{trials} trials, {failures} failures"))
    return rows


def suite_fig10(seed: int = DEFAULT_SEED, trials: int = 20, **_) -> List[Row]:
    def run(rng, m, mp):
        return check_fig10(rand_mat(rng, 3, m), rand_mat(rng, 3, mp),
                           rand_mat(rng, 3, mp), rand_mat(rng, 3, m))

    return _matrix_identity_suite("fig10", run, seed, trials)


def suite_fig11a(seed: int = DEFAULT_SEED, trials: int = 20, **_) -> List[Row]:
    def run(rng, m, mp):
        return check_fig11a(rand_mat(rng, 3, m), rand_mat(rng, 3, m),
                            rand_mat(rng, 3, mp), rand_mat(rng, 3, mp))

    return _matrix_identity_suite("fig11a", run, seed, trials)


def suite_fig11b(seed: int = DEFAULT_SEED, trials: int = 20, **_) -> List[Row]:
    rng = random.Random(seed)
    rows: List[Row] = []
    for m in range(1, 5):
        failures = 0
        for _ in range(trials):
            rep = check_fig11b(rand_vec(rng), rand_mat(rng, 3, m), rand_mat(rng, 3, m))
            if not rep.equal:
                failures += 1
        rows.append((f"fig11b-m={m}", failures == 0, f"{trials} trials, {failures} failures"))
    return rows


def suite_det_ids(seed: int = DEFAULT_SEED, trials: int = 5, **_) -> List[Row]:
    rng = random.Random(seed)
    rows: List[Row] = []
    for n in range(1, 7):
        ok = True
        for _ in range(trials):
            a = rand_mat(rng, n, n)
            d = det_oracle(a)
            if not exterior_planned(det_diagram(a)).equal(scalar_tensor(d)):
                ok = False
            if n <= 4 and det_cofactor(a) != d:
                ok = False
        rows.append((f"det-diagram-n={n}", ok, f"{trials} trials"))
    for n in range(1, 6):
        ok = True
        for _ in range(trials):
            a, b = rand_mat(rng, n, n), rand_mat(rng, n, n)
            if det_oracle(matmul_oracle(a, b)) != det_oracle(a) * det_oracle(b):
                ok = False
            if det_oracle(transpose(a)) != det_oracle(a):
                ok = False
        rows.append((f"det-product-transpose-n={n}", ok, f"{trials} trials"))
    return rows


def suite_triple(seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS, **_) -> List[Row]:
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        rep = check_triple_product(rand_vec(rng), rand_vec(rng), rand_vec(rng))
        if not rep.equal:
            failures += 1
    return [("triple-product", failures == 0, f"{trials} trials, {failures} failures")]


def suite_prop1(seed: int = DEFAULT_SEED, trials: int = 25, **_) -> List[Row]:
    rng = random.Random(seed)
    rows: List[Row] = []
    for n in (1, 2, 3):
        ok = True
        for _ in range(trials):
            a = rand_skew(rng, 2 * n)
            target = scalar_tensor(pfaffian_oracle(a)).scale(pfaffian_factor(n))
            diagram = pfaffian_diagram(a)
            if not exterior_brute(diagram).equal(target):
                ok = False
            if not exterior_planned(diagram).equal(target):
                ok = False
        rows.append((f"prop1-2n={2 * n}", ok, f"{trials} trials, both engines"))
    a = rand_skew(rng, 8)
    rep = check_prop1(a, engine="planned")
    rows.append(("prop1-2n=8", rep.equal, "planned engine vs S_8 oracle"))
    return rows


SUITES: Dict[str, Callable[..., List[Row]]] = {
    "fig8": suite_fig8,
    "fig9": suite_fig9,
    "fig10": suite_fig10,
    "fig11a": suite_fig11a,
    "fig11b": suite_fig11b,
    "det-ids": suite_det_ids,
    "triple": suite_triple,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "prop1": suite_prop1,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, trials: int = None) -> List[Row]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    kwargs = {"seed": seed}
    if trials is not None:
        kwargs["trials"] = trials
    return SUITES[name](**kwargs)
