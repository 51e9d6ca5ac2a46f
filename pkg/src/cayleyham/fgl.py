"""Factor Group Lemma machinery: voltages, generation tests, lifts.

The lift contract is checked, not assumed: both hypotheses (quotient
hamiltonicity and voltage generation) are verified at runtime, and the
lifted word is re-verified before it is returned.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import PreconditionError, TheoremViolationError
from .cayley import GenWord, check_hamiltonian_cycle, is_hamiltonian_cycle
from .groups import (
    GroupElement,
    GroupSpec,
    centre,
    element_order,
    mul,
    quotient_by_cyclic,
    square_free_prime_factors,
)


def voltage(G: GroupSpec, word: GenWord) -> GroupElement:
    """Ordered product of the signed generators; equals the walk endpoint."""
    acc = G.identity
    for s in word.steps:
        acc = mul(G, acc, word.step_element(G, s))
    return acc


def voltage_projections(G: GroupSpec, v: GroupElement, primes: Iterable[int]) -> dict[int, int]:
    return {l: v.x % l for l in sorted(primes)}


def generates_cyclic(G: GroupSpec, v: GroupElement, n_primes: Iterable[int]) -> bool:
    """True iff v generates the cyclic subgroup N supported on n_primes.

    N is square-free, so generation is equivalent to a nonzero residue
    modulo every prime of |N|.  Raises if v lies outside N.
    """
    n_primes = frozenset(n_primes)
    unknown = n_primes - set(G.prime_factors_n)
    if unknown:
        raise PreconditionError(f"primes {sorted(unknown)} do not divide n={G.n}")
    if v.i != 0 or any(v.x % l for l in G.prime_factors_n if l not in n_primes):
        raise PreconditionError(f"element {v} lies outside the subgroup on primes {sorted(n_primes)}")
    return all(v.x % l != 0 for l in n_primes)


def _quotient_word(G: GroupSpec, word: GenWord, n_quotient: int) -> tuple[GroupSpec, GenWord]:
    quotient = GroupSpec(G.p, n_quotient, 1 if n_quotient == 1 else G.alpha % n_quotient)
    gens = [GroupElement(g.i, g.x % n_quotient) for g in word.gens]
    return quotient, GenWord(gens, word.steps)


def fgl_lift(G: GroupSpec, quotient_cycle: GenWord, n_order: int) -> GenWord:
    """Repeat a quotient hamiltonian cycle |N| times to cover G.

    N is the unique subgroup of the normal part with order n_order.  Both
    hypotheses are verified here; the lifted word is verified too.
    """
    if n_order < 1 or G.n % n_order != 0:
        raise PreconditionError(f"subgroup order {n_order} does not divide n={G.n}")
    n_primes = square_free_prime_factors(n_order)
    quotient, q_word = _quotient_word(G, quotient_cycle, G.n // n_order)
    ok, reason = check_hamiltonian_cycle(quotient, q_word)
    if not ok:
        raise PreconditionError(f"quotient cycle is not hamiltonian in G/N: {reason}")
    v = voltage(G, quotient_cycle)
    if not generates_cyclic(G, v, n_primes):
        dead = [l for l in n_primes if v.x % l == 0]
        raise PreconditionError(
            f"voltage {v} does not generate N: trivial projection mod {dead}"
        )
    lifted = GenWord(quotient_cycle.gens, quotient_cycle.steps * n_order)
    ok, reason = check_hamiltonian_cycle(G, lifted)
    if not ok:
        raise TheoremViolationError(f"verified-hypothesis lift failed verification: {reason}")
    return lifted


def normal_easy_lift(
    G: GroupSpec,
    A: Sequence[GroupElement],
    b: GroupElement,
    quotient_cycle: GenWord,
    search_cfg=None,
) -> GenWord:
    """Hamiltonian cycle in Cay(G; A) from one in Cay(G/<b>; A).

    Requires b in A, <b> normal (b in the normal part), and <b> meeting
    the centre trivially.  Strategy: try the lift on the given cycle, its
    rotations, and its reversal; fall back to a full search with a
    generous budget.  Any output passes is_hamiltonian_cycle.
    """
    from .search import SearchConfig, oracle_cycle

    gens = tuple(A)
    if b not in gens:
        raise PreconditionError(f"{b} is not one of the given generators")
    if b.i != 0:
        raise PreconditionError(f"<b> must lie in the cyclic normal part, got b={b}")
    b_order = element_order(G, b)
    z = centre(G)
    if b_order > 1 and (z.whole_group or set(square_free_prime_factors(b_order)) & z.primes):
        raise PreconditionError(f"<b> of order {b_order} meets the centre nontrivially")

    quotient, q_word = _quotient_word(G, quotient_cycle, G.n // b_order)
    ok, reason = check_hamiltonian_cycle(quotient, q_word)
    if not ok:
        raise PreconditionError(f"quotient cycle is not hamiltonian in G/<b>: {reason}")
    if b_order == 1:
        return quotient_cycle

    n_primes = square_free_prime_factors(b_order)
    seen = set()
    candidates = [quotient_cycle]
    candidates += [
        quotient_cycle.rotated(k) for k in range(1, min(b_order, len(quotient_cycle)))
    ]
    candidates.append(quotient_cycle.reversed_inverted())
    for cand in candidates:
        if cand.steps in seen:
            continue
        seen.add(cand.steps)
        v = voltage(G, cand)
        if generates_cyclic(G, v, n_primes):
            return fgl_lift(G, cand, b_order)

    cfg = search_cfg if search_cfg is not None else SearchConfig(timeout=60.0)
    word = oracle_cycle(G, list(gens), cfg)
    if word is None:
        raise TheoremViolationError(
            "search exhausted with no cycle, contradicting the guaranteed lift"
        )
    if not is_hamiltonian_cycle(G, word):
        raise TheoremViolationError("search returned a word the checker rejects")
    return word
