"""Chain-geometry divisible designs on P(R) and their verification.

Blocks are the images of the base block P(K) under GL_2(R), stored as
sorted tuples of point indices.  Verification is by complete counting,
with an opt-in sampling mode for large orders.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .projline import AFFINE, IDEAL, ProjectiveLine, ProjPoint, invertible_mask, is_invertible, mat
from .ring import RingElement, RingSpec

log = logging.getLogger(__name__)


def gl2_order(q: int) -> int:
    """|GL_2(R)| for a local ring with residue field GF(q) and |I| = q."""
    return q**4 * (q * q - 1) * (q * q - q)


@dataclass
class Design:
    line: ProjectiveLine
    blocks: list[tuple[int, ...]]

    @property
    def ring(self) -> RingSpec:
        return self.line.ring

    @property
    def q(self):
        return self.line.q

    @property
    def v(self):
        return self.line.v

    @property
    def s(self):
        return self.line.s

    @property
    def k(self):
        return len(self.blocks[0])

    @property
    def b(self):
        return len(self.blocks)

    @property
    def parallel_classes(self):
        return self.line.classes

    @cached_property
    def block_array(self) -> np.ndarray:
        if len({len(B) for B in self.blocks}) != 1:
            raise ValueError("blocks have different sizes")
        arr = np.array(self.blocks, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean v x b matrix, entry [i, j] set iff point i lies on block j."""
        inc = np.zeros((self.v, self.b), dtype=bool)
        for j, B in enumerate(self.blocks):
            inc[list(B), j] = True
        inc.setflags(write=False)
        return inc

    def count_blocks_containing(self, pts) -> int:
        return int(np.logical_and.reduce(self.incidence[list(pts)], axis=0).sum())

    def blocks_containing(self, pts) -> list[tuple[int, ...]]:
        hit = np.logical_and.reduce(self.incidence[list(pts)], axis=0)
        return [self.blocks[j] for j in np.flatnonzero(hit)]

    def point(self, i) -> ProjPoint:
        return self.line.points[i]


# -- construction ------------------------------------------------------------

def base_block(line: ProjectiveLine) -> tuple[int, ...]:
    """P(K): the points R(x, 1) for x in K together with R(1, 0)."""
    R = line.ring
    pts = [line.index(ProjPoint(AFFINE, R.scalar(x))) for x in R.field.elements()]
    pts.append(line.infinity)
    block = tuple(sorted(pts))
    assert len(set(line.class_of[list(block)].tolist())) == len(block)
    return block


def field_subline(line: ProjectiveLine) -> tuple[int, ...]:
    """P(F) inside P(K), F the fixed field of sigma."""
    R = line.ring
    pts = [line.index(ProjPoint(AFFINE, R.scalar(x))) for x in R.aut.fixed_field]
    return tuple(sorted(pts + [line.infinity]))


def group_generators(R: RingSpec) -> list:
    K = R.field
    gens = []
    for r in (R.one, R.eps):
        gens.append(mat(R, ((1, r), (0, 1))))
        gens.append(mat(R, ((1, 0), (r, 1))))
    if K.q > 2:
        gens.append(mat(R, ((K.generator, 0), (0, 1))))
    for c in K.basis():
        gens.append(mat(R, ((RingElement(1, c), 0), (0, 1))))
    assert all(is_invertible(R, g) for g in gens)
    return gens


def orbit_blocks(line: ProjectiveLine, base, gens) -> np.ndarray:
    """Breadth-first closure of ``base`` under the generators.

    Returns the orbit as an array of sorted rows in lexicographic order.
    """
    perms = [line.permutation(g) for g in gens]
    start = np.array([sorted(base)], dtype=np.int64)
    seen = {start[0].tobytes()}
    found = [start]
    frontier = start
    while len(frontier):
        cand = np.unique(np.concatenate([np.sort(p[frontier], axis=1) for p in perms]), axis=0)
        fresh = []
        for row in cand:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(row)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, start.shape[1])
        found.append(frontier)
        log.debug("orbit: %d blocks", len(seen))
    return np.unique(np.concatenate(found), axis=0)


def exhaustive_blocks_oracle(line: ProjectiveLine) -> np.ndarray:
    """Apply every invertible matrix over R to P(K); only for q <= 4."""
    R = line.ring
    if R.q > 4:
        raise ValueError("exhaustive group enumeration is limited to q <= 4")
    entries, mask = invertible_mask(R)
    g = entries[mask]
    M, A = R.mul_table, R.add_table
    blocks = []
    for i in base_block(line):
        a, b = (R.index(x) for x in line.representative(line.points[i]))
        u = A[M[a, g[:, 0]], M[b, g[:, 2]]]
        w = A[M[a, g[:, 1]], M[b, g[:, 3]]]
        blocks.append(line.pair_table[u, w])
    images = np.sort(np.stack(blocks, axis=1), axis=1)
    assert (images >= 0).all()
    return np.unique(images, axis=0)


def build_design(R: RingSpec) -> Design:
    line = ProjectiveLine(R)
    arr = orbit_blocks(line, base_block(line), group_generators(R))
    return Design(line, [tuple(row) for row in arr.tolist()])


# -- parameters ----------------------------------------------------------------

def orbit_lambda(order_g, order_stab, v, s, k, t, strict=True) -> Fraction:
    """lambda_t = |G|/|G_B0| * C(k, t) / (C(v/s, t) * s**t)."""
    if min(order_g, order_stab, v, s, k, t) <= 0:
        raise ValueError("all arguments must be positive")
    if v % s:
        raise ValueError("s must divide v")
    lam = Fraction(order_g, order_stab) * comb(k, t) / (comb(v // s, t) * s**t)
    if strict and lam.denominator != 1:
        raise ValueError(f"non-integral lambda {lam}: inconsistent inputs")
    return lam


def lambda3_transversal(orbit_size, s) -> Fraction:
    """Transversal shortcut lambda_3 = b / s**3."""
    return Fraction(orbit_size, s**3)


def expected_parameters(q: int, m: int) -> dict:
    sigma_id = m == q
    return {"v": q * q + q, "s": q, "k": q + 1, "lambda3": 1 if sigma_id else q,
            "b": q**3 if sigma_id else q**4}


# -- verification --------------------------------------------------------------

@dataclass
class VerificationReport:
    t: int
    v: int
    s: int
    k: int | None
    b: int
    block_size_ok: bool = False
    distinct_points_ok: bool = False
    pairwise_nonparallel_ok: bool = False
    class_size_ok: bool = False
    transversal: bool = False
    bounds_ok: bool = False
    lambda_min: int | None = None
    lambda_max: int | None = None
    tsets_checked: int = 0
    sampled: bool = False
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def lambda_t(self) -> int | None:
        if self.lambda_min is not None and self.lambda_min == self.lambda_max:
            return self.lambda_min
        return None

    def summary(self) -> str:
        lam = (f"[{self.lambda_min},{self.lambda_max}]"
               if self.lambda_min is not None else "n/a")
        status = "PASS" if self.ok else "FAIL: " + "; ".join(self.failures)
        mode = "sampled" if self.sampled else "exhaustive"
        return (f"t={self.t} v={self.v} s={self.s} k={self.k} b={self.b} "
                f"lambda{self.t}={lam} ({self.tsets_checked} {mode} t-sets, "
                f"{self.seconds:.2f}s) {status}")


def _encode(sub, v):
    # sub is (..., t) with increasing entries
    key = np.zeros(sub.shape[:-1], dtype=np.int64)
    for j in range(sub.shape[-1]):
        key = key * v + sub[..., j]
    return key


def _decode(keys, v, t):
    out = np.empty((len(keys), t), dtype=np.int64)
    for j in range(t - 1, -1, -1):
        keys, out[:, j] = np.divmod(keys, v)
    return out


def _admissible(cls):
    srt = np.sort(cls, axis=-1)
    return (np.diff(srt, axis=-1) != 0).all(axis=-1)


def verify_dd(design: Design, t: int, sample: int | None = None, seed: int = 0) -> VerificationReport:
    """Check the divisible-design axioms for parameter t.

    With ``sample`` set, lambda_t is estimated from that many random
    t-sets of pairwise non-parallel points instead of all of them.
    """
    if t < 1:
        raise ValueError("t must be positive")
    start = time.perf_counter()
    line = design.line
    sizes = {len(B) for B in design.blocks}
    rep = VerificationReport(t=t, v=design.v, s=design.s,
                             k=sizes.pop() if len(sizes) == 1 else None, b=design.b)
    cls = line.class_of
    class_sizes = {len(c) for c in line.classes}
    n_classes = len(line.classes)

    rep.block_size_ok = rep.k is not None
    if not rep.block_size_ok:
        rep.failures.append("block size: blocks do not all have the same size")
    rep.distinct_points_ok = all(len(set(B)) == len(B) for B in design.blocks)
    if not rep.distinct_points_ok:
        rep.failures.append("block size: some block repeats a point")
    rep.pairwise_nonparallel_ok = all(
        len(set(cls[list(B)].tolist())) == len(B) for B in design.blocks)
    if not rep.pairwise_nonparallel_ok:
        rep.failures.append("non-parallel blocks: some block contains two parallel points")
    rep.class_size_ok = class_sizes == {design.s}
    if not rep.class_size_ok:
        rep.failures.append("class size: parallel classes differ in size")
    rep.transversal = rep.k == n_classes
    rep.bounds_ok = rep.k is not None and t <= rep.k <= design.v // design.s
    if not rep.bounds_ok:
        rep.failures.append(f"bounds: t <= k <= v/s violated (t={t}, k={rep.k})")
    if rep.failures:
        rep.seconds = time.perf_counter() - start
        return rep

    if sample is None:
        lo, hi, n = _lambda_exhaustive(design, t)
    else:
        lo, hi, n = _lambda_sampled(design, t, sample, seed)
        rep.sampled = True
    rep.lambda_min, rep.lambda_max, rep.tsets_checked = lo, hi, n
    if lo != hi:
        rep.failures.append(f"lambda: t-sets lie on between {lo} and {hi} blocks")
    elif lo == 0:
        rep.failures.append("lambda: t-sets lie on no block")
    rep.seconds = time.perf_counter() - start
    return rep


def _lambda_exhaustive(design: Design, t: int):
    line = design.line
    blocks, cls, v = design.block_array, line.class_of, design.v
    n_classes = len(line.classes)
    total = comb(n_classes, t) * design.s**t
    combos = np.array(list(combinations(range(design.k), t)), dtype=np.int64)
    use_bincount = v**t <= 1 << 26
    counts = np.zeros(v**t if use_bincount else 0, dtype=np.int64)
    keys_all = []
    step = max(1, (1 << 22) // max(1, len(blocks)))
    for lo in range(0, len(combos), step):
        sub = blocks[:, combos[lo:lo + step]]
        keys = _encode(sub, v)[_admissible(cls[sub])]
        if use_bincount:
            counts += np.bincount(keys, minlength=v**t)
        else:
            keys_all.append(keys)
    if use_bincount:
        hit = counts[counts > 0]
    else:
        hit = np.unique(np.concatenate(keys_all), return_counts=True)[1]
    lo = int(hit.min()) if len(hit) == total else 0
    return lo, int(hit.max()), total


def _lambda_sampled(design: Design, t: int, n: int, seed: int):
    rng = np.random.default_rng(seed)
    classes = design.line.classes
    counts = []
    for _ in range(n):
        chosen = rng.choice(len(classes), size=t, replace=False)
        pts = [classes[c][rng.integers(len(classes[c]))] for c in chosen]
        counts.append(design.count_blocks_containing(pts))
    return min(counts), max(counts), n


def admissible_tsets(line: ProjectiveLine, t: int):
    """All t-sets of pairwise non-parallel points, one point from each of t classes."""
    from itertools import product as _product
    for chosen in combinations(line.classes, t):
        for pts in _product(*chosen):
            yield tuple(sorted(pts))


# -- blocks through three points ------------------------------------------------

def u_hat(R: RingSpec, b: int):
    """diag(1 + b eps, 1 + b eps)."""
    u = RingElement(1, b)
    return ((u, R.zero), (R.zero, u))


def _check_triple(design, triple):
    line = design.line
    pts = [line.points[i] for i in triple]
    for x, y in combinations(pts, 2):
        if line.is_parallel(x, y):
            raise ValueError("points are not pairwise non-parallel")
    return pts


def blocks_through_triple(design: Design, p1: int, p2: int, p3: int) -> list[tuple[int, ...]]:
    """The blocks through three points as images of P(K) under U-hat, then g."""
    line = design.line
    R = line.ring
    g = line.map_standard_triple(*_check_triple(design, (p1, p2, p3)))
    base = base_block(line)
    out = set()
    for b in R.field.elements():
        w = u_hat(R, b)
        image = [line.act_index(g, line.act_index(w, i)) for i in base]
        out.add(tuple(sorted(image)))
    result = sorted(out)
    assert result == sorted(design.blocks_containing((p1, p2, p3)))
    return result


def trace(design: Design, p1: int, p2: int, p3: int) -> tuple[int, ...]:
    """Intersection of all blocks through three pairwise non-parallel points."""
    _check_triple(design, (p1, p2, p3))
    hit = design.blocks_containing((p1, p2, p3))
    if not hit:
        raise ValueError("no block through the triple")
    common = set(hit[0]).intersection(*hit[1:])
    T = tuple(sorted(common))
    assert len(T) == design.ring.m + 1
    return T


def trace_witness(design: Design, triple):
    """A matrix g with P(F)^g equal to the trace of ``triple``, or None."""
    line = design.line
    g = line.map_standard_triple(*_check_triple(design, triple))
    image = tuple(sorted(line.act_index(g, i) for i in field_subline(line)))
    return g if image == trace(design, *triple) else None


def predicted_fourth_count(design: Design, T, x: int) -> int:
    cls = design.line.class_of
    if x in T:
        return design.q
    if cls[x] in set(cls[list(T)].tolist()):
        return 0
    return 1


def classify_fourth_point(design: Design, p1: int, p2: int, p3: int, x: int) -> int:
    """Number of blocks through p1, p2, p3, x (one of q, 0, 1)."""
    if design.ring.aut.is_identity:
        raise ValueError("the q/0/1 count needs a non-trivial twist")
    line = design.line
    _check_triple(design, (p1, p2, p3))
    px = line.points[x]
    if any(line.is_parallel(px, line.points[p]) for p in (p1, p2, p3)):
        raise ValueError("fourth point is parallel to one of the triple")
    n = design.count_blocks_containing((p1, p2, p3, x))
    expected = predicted_fourth_count(design, trace(design, p1, p2, p3), x)
    assert n == expected, (n, expected)
    return n


# -- census over many triples ----------------------------------------------------

@dataclass
class TripleCensus:
    triples: int = 0
    sampled: bool = False
    trace_sizes: dict = field(default_factory=dict)
    branch_counts: dict = field(default_factory=lambda: {"q": 0, "0": 0, "1": 0})
    mismatches: int = 0
    witnesses_checked: int = 0
    witness_failures: int = 0
    prop_b_failures: int = 0
    seconds: float = 0.0

    @property
    def vacuous(self) -> list[str]:
        return [k for k, n in self.branch_counts.items() if n == 0]

    def ok(self, m: int) -> bool:
        return (self.mismatches == 0 and self.witness_failures == 0
                and self.prop_b_failures == 0 and set(self.trace_sizes) == {m + 1})

    def summary(self) -> str:
        vac = ",".join(self.vacuous) or "none"
        mode = "sampled" if self.sampled else "all"
        return (f"{self.triples} {mode} triples; |T| sizes {sorted(self.trace_sizes)}; "
                f"fourth-point counts q:{self.branch_counts['q']} "
                f"0:{self.branch_counts['0']} 1:{self.branch_counts['1']} "
                f"(vacuous: {vac}); mismatches {self.mismatches}; "
                f"witnesses {self.witnesses_checked - self.witness_failures}/"
                f"{self.witnesses_checked}")


def _all_triples_with_blocks(design: Design, lam: int):
    blocks, v = design.block_array, design.v
    combos = np.array(list(combinations(range(design.k), 3)), dtype=np.int64)
    keys = _encode(blocks[:, combos], v).ravel()
    bid = np.repeat(np.arange(len(blocks)), len(combos))
    order = np.argsort(keys, kind="stable")
    uniq, counts = np.unique(keys[order], return_counts=True)
    if not (counts == lam).all():
        raise ValueError("triples lie on different numbers of blocks")
    return _decode(uniq, v, 3), bid[order].reshape(-1, lam)


def _sampled_triples_with_blocks(design: Design, lam: int, n: int, seed: int):
    rng = np.random.default_rng(seed)
    classes = design.line.classes
    triples, tb = [], []
    for _ in range(n):
        chosen = rng.choice(len(classes), size=3, replace=False)
        pts = sorted(classes[c][rng.integers(len(classes[c]))] for c in chosen)
        hit = np.flatnonzero(np.logical_and.reduce(design.incidence[pts], axis=0))
        if len(hit) != lam:
            raise ValueError("triples lie on different numbers of blocks")
        triples.append(pts)
        tb.append(hit)
    return np.array(triples, dtype=np.int64), np.array(tb, dtype=np.int64)


def triple_census(design: Design, sample: int | None = None, seed: int = 0,
                  witness_limit: int | None = None) -> TripleCensus:
    """Trace sizes, the fourth-point counts and the trace witnesses over triples.

    Every triple is examined unless ``sample`` is given.  ``witness_limit``
    caps how many triples also get an explicit matrix witness for the trace.
    """
    if design.ring.aut.is_identity:
        raise ValueError("the census applies to a non-trivial twist")
    start = time.perf_counter()
    q, v, m = design.q, design.v, design.ring.m
    lam = q
    cls = design.line.class_of
    n_classes = len(design.line.classes)
    if sample is None:
        triples, tb = _all_triples_with_blocks(design, lam)
    else:
        triples, tb = _sampled_triples_with_blocks(design, lam, sample, seed)
    census = TripleCensus(triples=len(triples), sampled=sample is not None)
    blocks = design.block_array
    chunk = max(1, (1 << 22) // (v * lam))
    for lo in range(0, len(triples), chunk):
        tr, bl = triples[lo:lo + chunk], tb[lo:lo + chunk]
        n = len(tr)
        pts = blocks[bl]
        flat = (np.arange(n)[:, None, None] * v + pts).ravel()
        counts = np.bincount(flat, minlength=n * v).reshape(n, v)
        in_T = counts == lam
        sizes, freq = np.unique(in_T.sum(axis=1), return_counts=True)
        for s_, f_ in zip(sizes.tolist(), freq.tolist()):
            census.trace_sizes[s_] = census.trace_sizes.get(s_, 0) + f_
        t_classes = np.zeros((n, n_classes), dtype=bool)
        rows = np.repeat(np.arange(n), v)
        t_classes[rows[in_T.ravel()], np.tile(cls, n)[in_T.ravel()]] = True
        triple_classes = np.zeros((n, n_classes), dtype=bool)
        triple_classes[np.arange(n)[:, None], cls[tr]] = True
        admissible = ~triple_classes[:, cls]
        meets_T = t_classes[:, cls]
        predicted = np.where(in_T, lam, np.where(meets_T, 0, 1))
        census.mismatches += int((admissible & (counts != predicted)).sum())
        census.branch_counts["q"] += int((admissible & in_T).sum())
        census.branch_counts["0"] += int((admissible & ~in_T & meets_T).sum())
        census.branch_counts["1"] += int((admissible & ~meets_T).sum())
        # each block through the triple meets each class disjoint from T once
        block_classes = cls[pts]
        per_class = np.zeros((n, n_classes), dtype=np.int64)
        np.add.at(per_class, (np.repeat(np.arange(n), lam * design.k), block_classes.ravel()), 1)
        census.prop_b_failures += int((~t_classes & (per_class != lam)).sum())
        census.prop_b_failures += int((~meets_T & (counts != 1)).sum())
    todo = triples if witness_limit is None else triples[:witness_limit]
    for tr in todo.tolist():
        census.witnesses_checked += 1
        if trace_witness(design, tuple(tr)) is None:
            census.witness_failures += 1
    census.seconds = time.perf_counter() - start
    return census
