"""Brute-force hamiltonian cycle search and instance enumeration.

The solver is pruned backtracking over the Cayley graph.  It never
self-certifies: every word it returns is handed to the independent
checker by its callers, and cross_validate re-runs both paths.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    NotConnectedError,
    OracleTimeoutError,
    PreconditionError,
    SizeGuardError,
)
from .cayley import GenWord, is_hamiltonian_cycle
from .groups import (
    GroupElement,
    GroupSpec,
    commutator_subgroup,
    crt_recombine,
    generated_subgroup_order,
    inv,
    is_prime,
    mul,
)

HEURISTICS = ("degree-order", "input-order")

# Delegated construction paths get a longer budget than ad-hoc searches.
DEFAULT_TIMEOUT = 10.0
DELEGATED_TIMEOUT = 60.0

_TICK = 4096  # timeout poll interval, in search nodes


@dataclass(frozen=True)
class SearchConfig:
    timeout: float = DEFAULT_TIMEOUT
    max_vertices: int = 1 << 20
    heuristic: str = "degree-order"

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not 1 <= self.max_vertices <= 1 << 20:
            raise ValueError("max_vertices must be in [1, 2^20]")
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"heuristic must be one of {HEURISTICS}")


def _adjacency(
    G: GroupSpec, A: Sequence[GroupElement]
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Neighbor and edge-label tables; labels are signed 1-based gen indices."""
    n, p = G.n, G.p
    moves = []
    seen = set()
    for j, g in enumerate(A, start=1):
        for label, e in ((j, g), (-j, inv(G, g))):
            if e == G.identity or (e.i, e.x) in seen:
                continue
            seen.add((e.i, e.x))
            moves.append((label, e.i, e.x, G._alpha_pows[e.i]))
    nbrs: list[tuple[int, ...]] = []
    labels: list[tuple[int, ...]] = []
    for v in range(G.order):
        i, x = divmod(v, n)
        row_n = []
        row_l = []
        for label, di, dx, mult in moves:
            w = ((i + di) % p) * n + (x * mult + dx) % n
            row_n.append(w)
            row_l.append(label)
        nbrs.append(tuple(row_n))
        labels.append(tuple(row_l))
    return nbrs, labels


def brute_force_ham(
    G: GroupSpec, A: Sequence[GroupElement], cfg: SearchConfig | None = None
) -> GenWord | None:
    """Search Cay(G; A) for a hamiltonian cycle.

    Returns a word passing is_hamiltonian_cycle, or None when the pruned
    search space is exhausted.  Raises OracleTimeoutError when the budget
    runs out (which proves nothing about existence) and NotConnectedError
    when A does not generate.

    Symmetry reduction: walks start at the identity and the first step is
    the first generator; vertex-transitivity justifies rebasing.  Pruning:
    a branch is abandoned as soon as some unvisited vertex has fewer than
    two usable connections (unvisited neighbors, the current endpoint, or
    the start).
    """
    cfg = cfg or SearchConfig()
    A = list(A)
    for g in A:
        G.validate_element(g)
    m = G.order
    if m > cfg.max_vertices:
        raise PreconditionError(f"group order {m} exceeds max_vertices {cfg.max_vertices}")
    if generated_subgroup_order(G, A) != m:
        raise NotConnectedError("generators do not span the group; graph is disconnected")
    if m == 1:
        return None

    nbrs, labels = _adjacency(G, A)
    if not nbrs[0]:
        raise NotConnectedError("no non-trivial generators")
    degree_order = cfg.heuristic == "degree-order"

    start = 0
    first = nbrs[0][0]
    first_label = labels[0][0]
    visited = bytearray(m)
    avail = [len(row) for row in nbrs]
    start_adj = bytearray(m)
    for w in nbrs[start]:
        start_adj[w] = 1

    def _mark(v: int) -> None:
        visited[v] = 1
        for w in nbrs[v]:
            avail[w] -= 1

    def _unmark(v: int) -> None:
        visited[v] = 0
        for w in nbrs[v]:
            avail[w] += 1

    def _candidates(v: int) -> list[tuple[int, int]]:
        # Vertices with no remaining unvisited neighbors must be entered
        # now or never; two of them cannot both be served.
        out = []
        must = None
        must_count = 0
        row_n = nbrs[v]
        row_l = labels[v]
        for pos in range(len(row_n)):
            w = row_n[pos]
            if visited[w]:
                continue
            if avail[w] == 0:
                must_count += 1
                must = (w, row_l[pos])
            out.append((w, row_l[pos]))
        if must_count > 1:
            return []
        if must_count == 1:
            return [must]
        if degree_order:
            out.sort(key=lambda wl: avail[wl[0]])
        return out

    def _dead_after(v: int, prev: int) -> bool:
        # After moving prev -> v only neighbors of the two heads change
        # status.  Neighbors of v with no other exits are forced by
        # _candidates; former head-neighbors that lost their last usable
        # connection kill the branch.
        row_v = nbrs[v]
        for w in nbrs[prev]:
            if visited[w] or w in row_v:
                continue
            a = avail[w]
            if a == 0 or (a == 1 and not start_adj[w]):
                return True
        return False

    _mark(start)
    _mark(first)
    count = 2
    # stack frames: [vertex, candidates, next_index, entry_label]
    stack = [[first, _candidates(first), 0, first_label]]
    t0 = time.monotonic()
    nodes = 0

    while stack:
        frame = stack[-1]
        v, cands, pos = frame[0], frame[1], frame[2]
        if count == m:
            # all visited; close back to the start if an edge exists
            closing = None
            row_n, row_l = nbrs[v], labels[v]
            for k in range(len(row_n)):
                if row_n[k] == start:
                    closing = row_l[k]
                    break
            if closing is not None:
                steps = [first_label] + [f[3] for f in stack[1:]] + [closing]
                return GenWord(tuple(A), steps)
            _unmark(v)
            count -= 1
            stack.pop()
            continue
        if pos >= len(cands):
            _unmark(v)
            count -= 1
            stack.pop()
            continue
        frame[2] = pos + 1
        w, label = cands[pos]
        if visited[w]:
            continue
        nodes += 1
        if nodes % _TICK == 0 and time.monotonic() - t0 > cfg.timeout:
            raise OracleTimeoutError(f"search exceeded {cfg.timeout}s after {nodes} nodes")
        _mark(w)
        count += 1
        if count < m and _dead_after(w, v):
            _unmark(w)
            count -= 1
            continue
        stack.append([w, _candidates(w), 0, label])

    return None


def _remap_steps(steps: Iterable[int], perm: Sequence[int]) -> tuple[int, ...]:
    """Translate signed indices over a permuted generator list back to the original."""
    return tuple((1 if s > 0 else -1) * (perm[abs(s) - 1] + 1) for s in steps)


def _cascade_variants(G: GroupSpec, A: Sequence[GroupElement]) -> list[tuple[tuple[int, ...], str]]:
    from .groups import element_order

    identity_perm = tuple(range(len(A)))
    long_first = tuple(sorted(identity_perm, key=lambda j: (-element_order(G, A[j]), j)))
    variants = []
    for perm, heuristic in (
        (long_first, "input-order"),
        (identity_perm, "degree-order"),
        (long_first, "degree-order"),
        (identity_perm, "input-order"),
    ):
        if (perm, heuristic) not in variants:
            variants.append((perm, heuristic))
    return variants


def _cascade_search(
    G: GroupSpec, A: Sequence[GroupElement], cfg: SearchConfig, deadline: float
) -> GenWord | None:
    """Run the backtracking search under a cascade of orderings.

    Long runs of a high-order generator close coil-shaped cycles on
    twisted instances, while available-degree order snakes through
    near-abelian ones; trying both beats committing to either.  Variants
    whose search space is exhausted are final; timeouts rotate to the
    next variant, then get the remaining budget on a second pass.
    """
    variants = _cascade_variants(G, A)
    slice_budget = max(0.5, min(2.0, cfg.timeout / (2 * len(variants))))
    pending = list(variants)
    for attempt in (slice_budget, None):
        still_pending = []
        for perm, heuristic in pending:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise OracleTimeoutError("cycle search budget exhausted")
            budget = remaining if attempt is None else min(attempt, remaining)
            sub = SearchConfig(timeout=budget, max_vertices=cfg.max_vertices, heuristic=heuristic)
            try:
                word = brute_force_ham(G, [A[j] for j in perm], sub)
            except OracleTimeoutError:
                still_pending.append((perm, heuristic))
                continue
            if word is not None:
                return GenWord(tuple(A), _remap_steps(word.steps, perm))
        if not still_pending:
            return None
        pending = still_pending
    raise OracleTimeoutError("cycle search budget exhausted")


def _reduced_cycle(
    G: GroupSpec, A: Sequence[GroupElement], cfg: SearchConfig, deadline: float
) -> GenWord | None:
    """Find a hamiltonian cycle by quotient reduction and verified lifts.

    While the normal part has several prime factors, quotient away one
    prime, solve the smaller instance recursively, and lift whenever the
    voltage generates the prime kernel.  Searches only ever run on the
    single-prime bases; everything above is walks and voltage checks, all
    re-verified inside fgl_lift.
    """
    from .fgl import fgl_lift, generates_cyclic, voltage
    from .groups import commutator_subgroup, quotient_by_cyclic

    if len(G.prime_factors_n) <= 1:
        return _cascade_search(G, A, cfg, deadline)
    mask = commutator_subgroup(G)
    # untwisted primes first keeps the bases coil- or snake-friendly
    primes = sorted(G.prime_factors_n, key=lambda l: (l in mask, -l))
    for l in primes:
        if time.monotonic() > deadline:
            raise OracleTimeoutError("cycle search budget exhausted")
        quotient, project = quotient_by_cyclic(G, GroupElement(0, G.n // l))
        try:
            partial = _reduced_cycle(quotient, [project(g) for g in A], cfg, deadline)
        except OracleTimeoutError:
            if time.monotonic() > deadline:
                raise
            continue
        if partial is None:
            continue
        candidate = GenWord(tuple(A), partial.steps)
        if generates_cyclic(G, voltage(G, candidate), (l,)):
            return fgl_lift(G, candidate, l)
    # no kernel prime admitted a generating voltage: search this level whole
    return _cascade_search(G, A, cfg, deadline)


def oracle_cycle(
    G: GroupSpec, A: Sequence[GroupElement], cfg: SearchConfig | None = None
) -> GenWord | None:
    """Cycle finder for delegated cases and quotient workloads.

    Combines the backtracking search with iterated factor-group
    reduction, so large instances bottom out in small single-prime
    searches plus verified lifts.  Returns None when every avenue is
    exhausted; raises OracleTimeoutError when the budget runs out.
    """
    cfg = cfg or SearchConfig(timeout=DELEGATED_TIMEOUT)
    A = list(A)
    for g in A:
        G.validate_element(g)
    if generated_subgroup_order(G, A) != G.order:
        raise NotConnectedError("generators do not span the group; graph is disconnected")
    return _reduced_cycle(G, A, cfg, time.monotonic() + cfg.timeout)


def _prime_root_classes(p: int, primes: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Canonical p-th-root-of-unity residue vectors, one per twist class.

    Vectors are deduplicated under exponentiation by units of C_p and the
    lexicographically smallest vector represents each class.
    """
    per_prime = []
    for l in primes:
        roots = {1}
        if (l - 1) % p == 0:
            g = _primitive_root(l)
            w = pow(g, (l - 1) // p, l)
            r = w
            for _ in range(p):
                roots.add(r)
                r = (r * w) % l
        per_prime.append(sorted(roots))
    vectors = [()]
    for roots in per_prime:
        vectors = [v + (r,) for v in vectors for r in roots]
    classes = set()
    for vec in vectors:
        orbit = []
        for t in range(1, p):
            orbit.append(tuple(pow(c, t, l) for c, l in zip(vec, primes)))
        classes.add(min(orbit))
    return sorted(classes)


def _primitive_root(l: int) -> int:
    phi_factors = square_free_like_factors(l - 1)
    for g in range(2, l):
        if all(pow(g, (l - 1) // f, l) != 1 for f in phi_factors):
            return g
    raise ValueError(f"no primitive root found mod {l}")


def square_free_like_factors(m: int) -> tuple[int, ...]:
    """Distinct prime factors of m (m need not be square-free)."""
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return tuple(out)


def enumerate_groups(p: int, q: int, r: int, s: int) -> list[GroupSpec]:
    """All GroupSpec presentations of groups of order p*q*r*s.

    For each choice of quotient prime p', alpha ranges over the p'-th
    roots of unity mod the product of the rest, deduplicated by twist
    class.  Primes must be distinct and odd.
    """
    primes = (p, q, r, s)
    if len(set(primes)) != 4:
        raise ValueError(f"primes must be distinct, got {primes}")
    for l in primes:
        if not is_prime(l):
            raise ValueError(f"{l} is not prime")
        if l % 2 == 0:
            raise ValueError(f"primes must be odd, got {l}")
    specs = []
    for p_quot in sorted(primes):
        rest = tuple(sorted(l for l in primes if l != p_quot))
        n = math.prod(rest)
        for vec in _prime_root_classes(p_quot, rest):
            dummy = GroupSpec(p_quot, n, 1)
            alpha = crt_recombine(dummy, dict(zip(rest, vec)))
            specs.append(GroupSpec(p_quot, n, alpha))
    return specs


def cross_validate(G: GroupSpec, A: Sequence[GroupElement], cert) -> dict:
    """Re-check a certificate against an independent search run.

    Above 5000 elements the search is skipped and only the certificate is
    verified.  Timeouts propagate.
    """
    report: dict = {"order": G.order}
    t0 = time.monotonic()
    report["cert_verified"] = is_hamiltonian_cycle(G, cert.word)
    report["verify_millis"] = int((time.monotonic() - t0) * 1000)
    if G.order > 5000:
        report["search_skipped"] = True
        return report
    report["search_skipped"] = False
    t0 = time.monotonic()
    word = brute_force_ham(G, A)
    report["search_millis"] = int((time.monotonic() - t0) * 1000)
    report["search_found"] = word is not None
    report["search_verified"] = is_hamiltonian_cycle(G, word) if word is not None else False
    return report


def case2_generating_sets(G: GroupSpec, count: int) -> list[list[GroupElement]]:
    """Deterministic two-element generating sets avoiding the commutator subgroup.

    Requires the commutator subgroup to be the whole normal part.  Each
    set is {(1, 0), (1, y)} with y coprime to n, taking the smallest
    admissible y values.
    """
    if commutator_subgroup(G) != set(G.prime_factors_n):
        raise PreconditionError("commutator subgroup must be the full normal part")
    sets = []
    y = 1
    while len(sets) < count and y < G.n:
        if math.gcd(y, G.n) == 1:
            sets.append([GroupElement(1, 0), GroupElement(1, y)])
        y += 1
    if len(sets) < count:
        raise ValueError(f"only {len(sets)} admissible sets exist below n")
    return sets


def case3_generating_set(G: GroupSpec, k: int, l: int) -> list[GroupElement]:
    """An irredundant three-generator set realizing exponents (k, l).

    The two companions carry normal parts supported on two primes each
    with the middle prime shared; their shared-prime components sit in a
    common conjugate of the distinguished generator's cyclic subgroup,
    which blocks any two of the three generators from generating alone.
    """
    q, r, s = G.prime_factors_n
    if len(G.prime_factors_n) != 3 or commutator_subgroup(G) != {q, r, s}:
        raise PreconditionError("need a full three-prime commutator subgroup")
    if not 1 <= l <= k <= (G.p - 1) // 2:
        raise ValueError(f"need 1 <= l <= k <= (p-1)/2, got l={l}, k={k}")
    alpha_r = G.alpha % r
    geom_k = sum(pow(alpha_r, t, r) for t in range(k)) % r
    geom_l = sum(pow(alpha_r, t, r) for t in range(l)) % r
    y = crt_recombine(G, {q: 1, r: geom_k, s: 0})
    z = crt_recombine(G, {q: 0, r: geom_l, s: 1})
    return [GroupElement(1, 0), GroupElement(k, y), GroupElement(l, z)]


def sample_generating_sets(G: GroupSpec) -> list[list[GroupElement]]:
    """Deterministic generating-set sample used by batch enumeration."""
    sets = [
        [GroupElement(1, 0), GroupElement(0, 1)],
        [GroupElement(1, 0), GroupElement(1, 1)],
    ]
    if len(G.prime_factors_n) == 3 and commutator_subgroup(G) == set(G.prime_factors_n):
        k = 1 if G.p == 3 else 2
        sets.append(case3_generating_set(G, k, 1))
    return sets
