"""Generator normalization, candidate cycles, and the constructive pipeline."""

import random

import pytest

import _oracles as oracles
from cayleyham import (
    GenWord,
    GroupElement,
    GroupSpec,
    candidate_cycles,
    case3_generating_set,
    construct_hamiltonian,
    generates_cyclic,
    inv,
    irredundant_subset,
    is_hamiltonian_cycle,
    mul,
    normalize_generators,
    power,
    voltage,
)
from cayleyham.construct import _resolve_case3_frame
from cayleyham.errors import (
    NotGeneratingError,
    PreconditionError,
    StructureError,
    UnsupportedOrderError,
)

SPEC1729 = GroupSpec(3, 1729, 653)
A = GroupElement(1, 0)
G = GroupElement(0, 1)
U = GroupElement(1, 1)


def test_irredundant_subset_drops_redundant():
    # greedy removal in input order drops the first removable generator
    got = irredundant_subset(SPEC1729, [A, G, GroupElement(0, 2)])
    assert got == [A, GroupElement(0, 2)]
    assert irredundant_subset(SPEC1729, [A, G]) == [A, G]
    with pytest.raises(NotGeneratingError):
        irredundant_subset(SPEC1729, [A, GroupElement(0, 7)])


def test_irredundant_subset_unchanged_when_needed():
    # removing either generator loses the group
    assert irredundant_subset(SPEC1729, [A, G]) == [A, G]


def test_normalize_reduces_exponent_by_inversion():
    # handing over b^-1 puts its image at exponent 8 = 11 - 3; the frame
    # records k = 3 with the inversion flag instead
    spec = oracles.twisted_spec(11, (23, 67, 89))
    a, b, c = case3_generating_set(spec, 3, 2)
    ng = normalize_generators(spec, [a, inv(spec, b), c])
    comp = [x for x in ng.companions if x.position == 1][0]
    assert comp.exponent == 3 and comp.inverted


def test_normalize_sorts_exponents():
    spec = oracles.twisted_spec(7, (29, 43, 71))
    gens = case3_generating_set(spec, 3, 2)
    ng = normalize_generators(spec, gens)
    assert ng.ell == 2 and ng.k == 3
    assert ng.companions[0].exponent <= ng.companions[1].exponent


def test_normalize_reconstructs_generators():
    spec = oracles.twisted_spec(11, (23, 67, 89))
    gens = case3_generating_set(spec, 5, 4)
    ng = normalize_generators(spec, gens)
    for comp in ng.companions:
        rebuilt = mul(spec, power(spec, ng.a, comp.exponent), comp.gamma)
        original = gens[comp.position]
        assert rebuilt == (inv(spec, original) if comp.inverted else original)


def test_normalize_prime_relabeling():
    spec = oracles.twisted_spec(7, (29, 43, 71))
    ng = normalize_generators(spec, case3_generating_set(spec, 3, 2))
    assert (ng.q, ng.r, ng.s) == (29, 43, 71)
    assert ng.companions[1].support() == {29, 43}
    assert ng.companions[0].support() == {43, 71}


def test_normalize_structure_error_single_prime_support():
    # a companion supported on one prime contradicts irredundancy
    y = oracles.crt({7: 1, 13: 0, 19: 0})
    z = oracles.crt({7: 0, 13: 1, 19: 1})
    with pytest.raises(StructureError):
        normalize_generators(SPEC1729, [A, GroupElement(1, y), GroupElement(1, z)])


def test_candidate_cycles_case2_p3():
    assert candidate_cycles(3, 1, 0, "case2") == [(2, 2, 1)]


def test_candidate_cycles_31():
    assert candidate_cycles(3, 1, 1, "3.1") == [(1, 2, 3), (1, 3, 2)]


def test_candidate_cycles_33_length():
    words = candidate_cycles(11, 3, 2, "3.3")
    assert all(len(w) == 11 for w in words)
    assert words[0] == (2, -1, -1, 2, 3, -1, 3, 1, 1, 1, 1)


def test_candidate_cycles_34():
    words = candidate_cycles(7, 3, 2, "3.4")
    assert words[0] == (3, 1, 1, 3, -1, 2, -1)
    assert all(len(w) == 7 for w in words)


def test_candidate_cycles_side_conditions():
    with pytest.raises(PreconditionError):
        candidate_cycles(11, 5, 4, "3.3")  # k + ell > p - 3
    with pytest.raises(PreconditionError):
        candidate_cycles(5, 2, 2, "3.2")  # ell must be 1
    with pytest.raises(PreconditionError):
        candidate_cycles(5, 1, 1, "3.1")  # p must be 3


def test_candidate_cycles_exhaustive_quotient_check():
    """Every admissible (p, k, ell) yields quotient-hamiltonian candidates."""
    import cayleyham.groups as groups

    primes = [p for p in range(3, 102) if groups.is_prime(p)]
    checked = 0
    for p in primes:
        half = (p - 1) // 2
        for k in range(1, half + 1):
            candidate_cycles(p, k, 0, "case2")
            checked += 1
            if p == 3:
                candidate_cycles(p, 1, 1, "3.1")
                checked += 1
                continue
            if p - k >= 3:
                candidate_cycles(p, k, 1, "3.2")
                checked += 1
            for ell in range(1, k):
                if k + ell <= p - 3:
                    candidate_cycles(p, k, ell, "3.3")
                    checked += 1
    candidate_cycles(7, 3, 2, "3.4")
    assert checked > 500


def test_dispatch_totality():
    """Exactly one subcase applies to every admissible normalized frame."""
    import cayleyham.groups as groups

    primes = [p for p in range(3, 102) if groups.is_prime(p)]
    for p in primes:
        half = (p - 1) // 2
        for k in range(1, half + 1):
            for ell in range(1, k + 1):
                if p == 3:
                    label = "3.1"
                elif ell == 1 or ell == k:
                    label = "3.2"
                elif ell != (p - 3) // 2:
                    label = "3.3"
                elif p == 7:
                    label = "3.4"
                else:
                    label = "swap"
                assert label in ("3.1", "3.2", "3.3", "3.4", "swap")


def test_case2_construction_5187():
    cert = construct_hamiltonian(SPEC1729, [A, U])
    assert cert.case_label == "case2"
    assert len(cert.word) == 5187
    assert cert.voltage_record is not None
    assert all(v != 0 for v in cert.voltage_record.projections.values())


def test_case2_with_inverted_exponent():
    b = GroupElement(2, 5)
    cert = construct_hamiltonian(SPEC1729, [A, b])
    assert cert.case_label == "case2"
    assert len(cert.word) == 5187


def test_case2_voltage_never_cancels():
    """Random two-generator instances always produce full-support voltages."""
    rng = random.Random(99)
    spec = SPEC1729
    count = 0
    while count < 200:
        i_a = rng.randrange(1, 3)
        x_a = rng.randrange(spec.n)
        i_b = rng.randrange(1, 3)
        x_b = rng.randrange(spec.n)
        gens = [GroupElement(i_a, x_a), GroupElement(i_b, x_b)]
        gamma = mul(spec, inv(spec, power(spec, gens[0], i_b * pow(i_a, -1, 3) % 3)), gens[1])
        if any(gamma.x % l == 0 for l in (7, 13, 19)):
            continue  # not an irredundant case-2 instance
        cert = construct_hamiltonian(spec, gens)
        assert cert.case_label == "case2"
        assert all(v != 0 for v in cert.voltage_record.projections.values())
        count += 1


def test_case1_construction():
    cert = construct_hamiltonian(SPEC1729, [A, G])
    assert cert.case_label == "case1"
    assert len(cert.word) == 5187


def test_case1_partial_order_b():
    # the commutator element has order 91, quotient order 57
    gens = [A, GroupElement(0, 19), GroupElement(0, 91)]
    cert = construct_hamiltonian(SPEC1729, gens)
    assert cert.case_label == "case1"
    assert is_hamiltonian_cycle(SPEC1729, cert.word)


def test_oracle_paths():
    cert = construct_hamiltonian(GroupSpec(3, 385, 1), [A, G])
    assert cert.case_label == "oracle"
    assert len(cert.word) == 1155
    partial = GroupSpec(3, 1729, oracles.crt({7: 2, 13: 1, 19: 1}))
    cert = construct_hamiltonian(partial, [A, G])
    assert cert.case_label == "oracle"


def test_four_generator_oracle_path():
    gens = [A, U, GroupElement(1, 2), GroupElement(1, 3)]
    reduced = irredundant_subset(SPEC1729, gens)
    if len(reduced) >= 4:
        cert = construct_hamiltonian(SPEC1729, gens)
        assert cert.case_label == "oracle"
    else:
        cert = construct_hamiltonian(SPEC1729, gens)
        assert cert.case_label in ("case2", "3.1")


def test_subcase_31():
    gens = case3_generating_set(SPEC1729, 1, 1)
    cert = construct_hamiltonian(SPEC1729, gens)
    assert cert.case_label == "3.1"
    assert len(cert.word) == 5187


def test_subcase_32_small():
    spec = oracles.twisted_spec(5, (11, 31, 41))
    gens = case3_generating_set(spec, 2, 1)
    cert = construct_hamiltonian(spec, gens)
    assert cert.case_label == "3.2"
    assert len(cert.word) == spec.order


def test_role_swap_frame():
    spec = oracles.twisted_spec(11, (23, 67, 89))
    gens = case3_generating_set(spec, 5, 4)
    ng = normalize_generators(spec, gens)
    assert (ng.ell, ng.k) == (4, 5)
    frame, subcase, swapped = _resolve_case3_frame(spec, ng)
    assert swapped and subcase == "3.3"
    assert (frame.ell, frame.k) == (3, 4)
    assert frame.ell != (spec.p - 3) // 2


def test_unsupported_orders():
    with pytest.raises(UnsupportedOrderError):
        construct_hamiltonian(GroupSpec(3, 35, 11), [A, G])  # three primes only
    with pytest.raises(UnsupportedOrderError):
        construct_hamiltonian(GroupSpec(3, 70, 1), [A, G])  # even order
    with pytest.raises(NotGeneratingError):
        construct_hamiltonian(SPEC1729, [A])


def test_every_certificate_word_refers_to_reduced_gens():
    cert = construct_hamiltonian(SPEC1729, [A, G, GroupElement(0, 2)])
    assert len(cert.word.gens) == 2
    assert is_hamiltonian_cycle(SPEC1729, cert.word)


def test_instantiated_candidates_respect_inversion():
    spec = SPEC1729
    b = GroupElement(2, 5)
    cert = construct_hamiltonian(spec, [A, b])
    # the normalized frame inverts b, so its steps appear negated
    assert -2 in cert.word.steps and 2 not in cert.word.steps
