"""Backtracking search, instance enumeration, and cross-validation."""

import pytest

import _oracles as oracles
from cayleyham import (
    GenWord,
    GroupElement,
    GroupSpec,
    SearchConfig,
    brute_force_ham,
    case2_generating_sets,
    case3_generating_set,
    construct_hamiltonian,
    cross_validate,
    enumerate_groups,
    is_generating_set,
    is_hamiltonian_cycle,
    oracle_cycle,
)
from cayleyham.errors import NotConnectedError, OracleTimeoutError, PreconditionError

A = GroupElement(1, 0)
G = GroupElement(0, 1)


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(timeout=0)
    with pytest.raises(ValueError):
        SearchConfig(max_vertices=1 << 21)
    with pytest.raises(ValueError):
        SearchConfig(heuristic="random")


def test_search_cyclic_five():
    spec = GroupSpec(5, 1, 1)
    word = brute_force_ham(spec, [A])
    assert word.steps == (1, 1, 1, 1, 1)


def test_search_21_element_group():
    spec = GroupSpec(3, 7, 2)
    word = brute_force_ham(spec, [A, G])
    assert word is not None
    assert is_hamiltonian_cycle(spec, word)


def test_search_105_element_group():
    spec = GroupSpec(3, 35, 11)
    word = brute_force_ham(spec, [A, G])
    assert word is not None and len(word) == 105
    assert is_hamiltonian_cycle(spec, word)


def test_search_rejects_disconnected():
    spec = GroupSpec(3, 7, 2)
    with pytest.raises(NotConnectedError):
        brute_force_ham(spec, [A])


def test_search_respects_max_vertices():
    spec = GroupSpec(3, 35, 11)
    with pytest.raises(PreconditionError):
        brute_force_ham(spec, [A, G], SearchConfig(max_vertices=50))


def test_search_deterministic():
    spec = GroupSpec(3, 35, 11)
    cfg = SearchConfig()
    first = brute_force_ham(spec, [A, G], cfg)
    second = brute_force_ham(spec, [A, G], cfg)
    assert first.steps == second.steps


def test_search_timeout_fires():
    spec = oracles.twisted_spec(3, (7, 13, 19))
    with pytest.raises(OracleTimeoutError):
        # plain backtracking with this ordering thrashes; the budget stops it
        brute_force_ham(spec, [A, G], SearchConfig(timeout=0.2))


def test_oracle_cycle_reduces_large_instances():
    spec = oracles.twisted_spec(3, (7, 13, 19))
    word = oracle_cycle(spec, [A, G], SearchConfig(timeout=30))
    assert word is not None
    assert is_hamiltonian_cycle(spec, word)
    partial = GroupSpec(3, 1729, oracles.crt({7: 2, 13: 3, 19: 1}))
    word = oracle_cycle(partial, [A, GroupElement(1, 1)], SearchConfig(timeout=30))
    assert word is not None
    assert is_hamiltonian_cycle(partial, word)


def test_enumerate_groups_3_5_7_11():
    specs = enumerate_groups(3, 5, 7, 11)
    by_p = {}
    for spec in specs:
        by_p.setdefault(spec.p, []).append(spec)
    # cube roots of unity exist nontrivially only mod 7
    assert len(by_p[3]) == 2
    assert {s.alpha == 1 for s in by_p[3]} == {True, False}
    # 11 = 1 mod 5 gives one nontrivial fifth-root class
    assert len(by_p[5]) == 2
    assert len(by_p[7]) == 1 and by_p[7][0].alpha == 1
    assert len(by_p[11]) == 1 and by_p[11][0].alpha == 1


def test_enumerate_groups_3_7_13_19():
    specs = enumerate_groups(3, 7, 13, 19)
    with_full_commutator = [
        s for s in specs if s.p == 3 and all(s.alpha % l != 1 for l in (7, 13, 19))
    ]
    assert len(with_full_commutator) == 4
    p3 = [s for s in specs if s.p == 3]
    # 27 twist vectors fall into 14 classes under inversion of the exponent
    assert len(p3) == 14


def test_enumerate_groups_rejects_bad_primes():
    with pytest.raises(ValueError):
        enumerate_groups(3, 5, 7, 8)
    with pytest.raises(ValueError):
        enumerate_groups(3, 5, 7, 7)
    with pytest.raises(ValueError):
        enumerate_groups(2, 5, 7, 11)


def test_enumeration_deterministic_and_canonical():
    first = enumerate_groups(3, 7, 13, 19)
    second = enumerate_groups(3, 7, 13, 19)
    assert first == second
    assert all(s1 != s2 for i, s1 in enumerate(first) for s2 in first[i + 1 :])


def test_cross_validate_small():
    from cayleyham import HamCertificate

    spec = GroupSpec(3, 35, 11)
    word = brute_force_ham(spec, [A, G])
    cert = HamCertificate.checked(spec, word, "oracle")
    report = cross_validate(spec, [A, G], cert)
    assert report["cert_verified"] and not report["search_skipped"]
    assert report["search_found"] and report["search_verified"]


def test_cross_validate_size_guard():
    spec = GroupSpec(3, 1729, 653)
    cert = construct_hamiltonian(spec, [A, GroupElement(1, 1)])
    report = cross_validate(spec, [A, GroupElement(1, 1)], cert)
    assert report["cert_verified"] and report["search_skipped"]


def test_cross_validate_detects_corruption():
    spec = GroupSpec(3, 35, 11)
    cert = construct_hamiltonian(spec, [A, G])
    steps = list(cert.word.steps)
    steps[3] = -steps[3]
    corrupted = GenWord(cert.word.gens, steps)
    assert not is_hamiltonian_cycle(spec, corrupted)


def test_case2_generating_sets_are_valid():
    spec = GroupSpec(3, 1729, 653)
    sets = case2_generating_sets(spec, 10)
    assert len(sets) == 10
    for gens in sets:
        assert is_generating_set(spec, gens)
        assert all(g.i != 0 for g in gens)
    assert sets == case2_generating_sets(spec, 10)


def test_case3_generating_set_is_irredundant():
    spec = GroupSpec(3, 1729, 653)
    gens = case3_generating_set(spec, 1, 1)
    assert is_generating_set(spec, gens)
    from cayleyham import generated_subgroup_order

    for skip in range(3):
        subset = [g for i, g in enumerate(gens) if i != skip]
        assert generated_subgroup_order(spec, subset) != spec.order
