"""Cayley-graph semantics: generator words, walks, hamiltonicity, DOT export.

A word stores signed indices into its own generator list, so the same
symbolic cycle can be instantiated over any group; +j steps by gens[j-1]
and -j by its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import SizeGuardError
from .groups import GroupElement, GroupSpec, inv, mul
from .groups import MAX_ORDER

DOT_MAX_VERTICES = 200


@dataclass(frozen=True)
class GenWord:
    """A walk: generating set plus a sequence of nonzero signed 1-based indices."""

    gens: tuple[GroupElement, ...]
    steps: tuple[int, ...]

    def __init__(self, gens: Sequence[GroupElement], steps: Sequence[int]) -> None:
        gens = tuple(GroupElement(int(g[0]), int(g[1])) for g in gens)
        steps = tuple(int(s) for s in steps)
        limit = len(gens)
        for s in steps:
            if s == 0 or abs(s) > limit:
                raise ValueError(f"step {s} out of range for {limit} generators")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "steps", steps)

    def __len__(self) -> int:
        return len(self.steps)

    def step_element(self, G: GroupSpec, step: int) -> GroupElement:
        g = self.gens[abs(step) - 1]
        return g if step > 0 else inv(G, g)

    def rotated(self, k: int) -> "GenWord":
        k %= len(self.steps)
        return GenWord(self.gens, self.steps[k:] + self.steps[:k])

    def reversed_inverted(self) -> "GenWord":
        """The same closed walk traversed backwards."""
        return GenWord(self.gens, tuple(-s for s in reversed(self.steps)))


def _step_table(G: GroupSpec, word: GenWord) -> dict[int, tuple[int, int, int]]:
    """Map signed step -> (di, dx, alpha^di) for the raw-integer walk loop."""
    table = {}
    for j, g in enumerate(word.gens, start=1):
        G.validate_element(g)
        ig = inv(G, g)
        table[j] = (g.i, g.x, G._alpha_pows[g.i])
        table[-j] = (ig.i, ig.x, G._alpha_pows[ig.i])
    return table


def eval_walk(G: GroupSpec, start: GroupElement, word: GenWord) -> list[GroupElement]:
    """Vertex sequence of the walk from start; length len(word) + 1.

    Materializes every vertex, so prefer is_hamiltonian_cycle for
    full-group words.
    """
    G.validate_element(start)
    table = _step_table(G, word)
    p, n = G.p, G.n
    i, x = start.i, start.x
    out = [start]
    for s in word.steps:
        di, dx, mult = table[s]
        i = (i + di) % p
        x = (x * mult + dx) % n
        out.append(GroupElement(i, x))
    return out


def check_hamiltonian_cycle(G: GroupSpec, word: GenWord) -> tuple[bool, str | None]:
    """Hamiltonicity check with a diagnostic for the first violation.

    True iff the word has length |G|, the walk from the identity visits
    |G| pairwise distinct vertices, and returns to the identity.
    """
    order = G.order
    if order > MAX_ORDER:
        raise SizeGuardError(f"verification supports at most 2^27 elements, got {order}")
    m = len(word.steps)
    if m != order:
        return False, f"length mismatch: word has {m} steps, group has {order} elements"
    table = _step_table(G, word)
    p, n = G.p, G.n
    visited = bytearray((order + 7) >> 3)
    visited[0] = 1  # identity, index 0
    i = x = 0
    last = m - 1
    for t, s in enumerate(word.steps):
        di, dx, mult = table[s]
        i = (i + di) % p
        x = (x * mult + dx) % n
        idx = i * n + x
        if t == last:
            if idx != 0:
                return False, f"wrong endpoint: walk ends at vertex index {idx}, not the identity"
            return True, None
        byte, bit = idx >> 3, 1 << (idx & 7)
        if visited[byte] & bit:
            return False, f"revisited vertex index {idx} at step {t + 1}"
        visited[byte] |= bit
    # m == 0 only when order == 0, which GroupSpec rules out
    return False, "empty word"


def is_hamiltonian_cycle(G: GroupSpec, word: GenWord) -> bool:
    ok, _ = check_hamiltonian_cycle(G, word)
    return ok


def export_dot(G: GroupSpec, gens: Iterable[GroupElement]) -> str:
    """Undirected DOT graph of Cay(G; A), vertices labeled "i,x".

    One edge per unordered pair adjacent under A and its inverses;
    deterministic ordering.  Guarded to |G| <= 200.
    """
    order = G.order
    if order > DOT_MAX_VERTICES:
        raise SizeGuardError(f"DOT export supports at most {DOT_MAX_VERTICES} vertices, got {order}")
    connection = []
    seen = set()
    for g in gens:
        G.validate_element(g)
        for e in (g, inv(G, g)):
            if e == G.identity or e in seen:
                continue
            seen.add(e)
            connection.append(e)
    edges = set()
    for idx in range(order):
        u = G.element_at(idx)
        for c in connection:
            w = G.index(mul(G, u, c))
            if w != idx:
                edges.add((min(idx, w), max(idx, w)))
    lines = ["graph cayley {"]
    for idx in range(order):
        u = G.element_at(idx)
        lines.append(f'  "{u.i},{u.x}";')
    for a, b in sorted(edges):
        ua, ub = G.element_at(a), G.element_at(b)
        lines.append(f'  "{ua.i},{ua.x}" -- "{ub.i},{ub.x}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VoltageRecord:
    """How a lifted cycle was obtained: quotient cycle, its voltage, projections."""

    quotient_steps: tuple[int, ...]
    element: GroupElement
    projections: dict[int, int]
    candidate_index: int | None = None

    def to_dict(self) -> dict:
        return {
            "x": self.element.x,
            "projections": {str(l): r for l, r in sorted(self.projections.items())},
        }


CASE_LABELS = ("case1", "case2", "3.1", "3.2", "3.3", "3.4", "3.5-swap", "oracle")


@dataclass(frozen=True)
class HamCertificate:
    """A verified hamiltonian cycle word plus the proof path that produced it."""

    group: GroupSpec
    word: GenWord
    case_label: str
    voltage_record: VoltageRecord | None = None

    def __post_init__(self) -> None:
        if self.case_label not in CASE_LABELS:
            raise ValueError(f"unknown case label {self.case_label!r}")

    @classmethod
    def checked(
        cls,
        G: GroupSpec,
        word: GenWord,
        case_label: str,
        voltage_record: VoltageRecord | None = None,
    ) -> "HamCertificate":
        """Build a certificate, re-verifying the cycle unconditionally."""
        ok, reason = check_hamiltonian_cycle(G, word)
        if not ok:
            raise ValueError(f"refusing to certify a non-hamiltonian word: {reason}")
        return cls(G, word, case_label, voltage_record)

    def to_dict(self) -> dict:
        return {
            "group": self.group.to_dict(),
            "gens": [g.to_dict() for g in self.word.gens],
            "word": list(self.word.steps),
            "case": self.case_label,
            "voltage": self.voltage_record.to_dict() if self.voltage_record else None,
            "verified": True,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HamCertificate":
        G = GroupSpec.from_dict(data["group"])
        word = GenWord([GroupElement.from_dict(g) for g in data["gens"]], data["word"])
        record = None
        return cls(G, word, data["case"], record)
