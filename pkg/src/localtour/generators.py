"""Deterministic fixtures, seeded random families, and exhaustive
enumerations feeding the verification harness.

Randomness comes from one fixed 64-bit generator (splitmix) so witnesses
reproduce bit-exactly across runs and implementations:

    state' = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state'
    z = ((z xor (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z xor (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output = z xor (z >> 31)

Bounded draws are ``output mod bound``.  Identical seed plus parameters
always reproduces the identical digraph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .digraph import (
    Digraph,
    classify_shape,
    composition,
    is_connected,
    is_locally_semicomplete,
    is_strong,
    iter_bits,
    mask_of,
)
from .errors import DigraphError, EnumerationCapError, GenerationError
from .structure import (
    ClassKind,
    RoundDecomposition,
    RoundLabelling,
    check_round_labelling,
    classify_local_tournament,
    find_round_labelling,
)
from .sullivan import sullivan_report

MAX_TOURNAMENT_ENUM = 7
MAX_ORIENTED_ENUM = 5

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """The library-wide RNG; see the module docstring for the exact
    state transition."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def randrange(self, bound: int) -> int:
        if bound <= 0:
            raise DigraphError("randrange bound must be positive")
        return self.next_u64() % bound


# ---- random families -----------------------------------------------------------


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def random_tournament(n: int, seed: int) -> Digraph:
    """Uniform orientation of every pair, pairs in lexicographic order."""
    if n < 1:
        raise DigraphError("a tournament needs at least one vertex")
    rng = SplitMix64(seed)
    arcs = []
    for i, j in _pairs(n):
        arcs.append((i, j) if rng.randrange(2) == 0 else (j, i))
    return Digraph(n, arcs)


def random_strong_tournament(n: int, seed: int, attempts: int = 1000) -> Digraph:
    """Rejection-sample tournaments until strong.  There is no strong
    tournament on two vertices, so n = 2 is rejected up front."""
    if n == 1:
        return Digraph(1)
    if n == 2:
        raise DigraphError("no strong tournament on two vertices exists")
    if n < 1:
        raise DigraphError("a tournament needs at least one vertex")
    rng = SplitMix64(seed)
    for _ in range(attempts):
        sub = rng.next_u64()
        t = random_tournament(n, sub)
        if is_strong(t):
            return t
    raise GenerationError(
        f"no strong tournament on {n} vertices in {attempts} draws"
        " (the strong fraction grows with n; this indicates a broken seed stream)"
    )


def random_round_local_tournament(n: int, seed: int, attempts: int = 500) -> Digraph:
    """Sample out-degrees in [1, n-2], lay the out-intervals on the cyclic
    order 0..n-1, and keep the result when that order is a genuine round
    labelling of a local tournament without 2-cycles.  The degree cap
    avoids forced 2-cycles; residual collisions and non-interval
    in-neighbourhoods are handled by rejection.  n = 2 has no positive
    degree range and returns the single arc 0 -> 1."""
    if n < 2:
        raise DigraphError("round generation needs at least two vertices")
    if n == 2:
        return Digraph(2, [(0, 1)])
    rng = SplitMix64(seed)
    identity = tuple(range(n))
    for _ in range(attempts):
        degs = [1 + rng.randrange(n - 2) for _ in range(n)]
        out = [0] * n
        inn = [0] * n
        ok = True
        for v in range(n):
            for k in range(1, degs[v] + 1):
                w = (v + k) % n
                out[v] |= 1 << w
                inn[w] |= 1 << v
        for v in range(n):
            if out[v] & inn[v]:
                ok = False
                break
        if not ok:
            continue
        d = Digraph._from_masks(n, out, inn, sum(degs))
        if not check_round_labelling(d, identity):
            continue
        if not is_locally_semicomplete(d):
            continue
        return d
    raise GenerationError(f"no round local tournament on {n} vertices in {attempts} draws")


def random_round_decomposable(
    n_parts: int, max_part: int, seed: int
) -> tuple[Digraph, RoundDecomposition]:
    """Compose a random round local tournament quotient with random strong
    tournament parts and return the planted decomposition.  Part sizes are
    drawn from {1, 3, 4, ..., max_part}: no strong tournament on two
    vertices exists, so 2 is never drawn."""
    if n_parts < 2:
        raise DigraphError("a round decomposition needs at least two parts")
    rng = SplitMix64(seed)
    quotient = random_round_local_tournament(n_parts, rng.next_u64())
    sizes = [1] + [s for s in range(3, max_part + 1)]
    parts = []
    for _ in range(n_parts):
        size = sizes[rng.randrange(len(sizes))]
        parts.append(Digraph(1) if size == 1 else random_strong_tournament(size, rng.next_u64()))
    d = composition(quotient, parts)
    flags = classify_shape(d)
    if not flags.local_tournament:
        raise GenerationError("composition failed to produce a local tournament")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n
    planted = tuple(
        frozenset(range(offsets[i], offsets[i] + parts[i].n)) for i in range(n_parts)
    )
    labelling = find_round_labelling(quotient)
    if labelling is None:
        raise GenerationError("generated quotient lost its round labelling")
    return d, RoundDecomposition(quotient=quotient, parts=planted, labelling=labelling)


def hub_circulant_tournament(m: int, seed: int = 0) -> Digraph:
    """A lone hub completely dominating the rotational tournament on m
    vertices (odd m: each vertex beats the next (m-1)/2 cyclically, so
    out- and in-degrees agree inside the dominated part).  These are the
    tournaments with a unique Sullivan-2 vertex.  The construction is
    canonical; the seed parameter is accepted for generator-API
    uniformity and ignored."""
    if m < 3 or m % 2 == 0:
        raise DigraphError("the dominated rotational tournament needs odd m >= 3")
    arcs = [(0, v) for v in range(1, m + 1)]
    half = (m - 1) // 2
    for i in range(m):
        for k in range(1, half + 1):
            arcs.append((1 + i, 1 + (i + k) % m))
    return Digraph(m + 1, arcs)


# ---- exhaustive enumeration ------------------------------------------------------


def tournament_from_index(n: int, index: int) -> Digraph:
    """Decode a labeled tournament from its enumeration index: bit k of
    the index orients the k-th pair (lexicographic pair order, bit 0 keeps
    the ascending direction)."""
    pairs = _pairs(n)
    out = [0] * n
    inn = [0] * n
    for k, (i, j) in enumerate(pairs):
        if index >> k & 1:
            i, j = j, i
        out[i] |= 1 << j
        inn[j] |= 1 << i
    return Digraph._from_masks(n, out, inn, len(pairs))


def oriented_from_index(n: int, index: int) -> Digraph:
    """Decode a labeled oriented graph: the k-th base-3 digit of the index
    sets the k-th pair to absent (0), ascending (1), or descending (2)."""
    out = [0] * n
    inn = [0] * n
    m = 0
    for i, j in _pairs(n):
        digit = index % 3
        index //= 3
        if digit == 1:
            out[i] |= 1 << j
            inn[j] |= 1 << i
            m += 1
        elif digit == 2:
            out[j] |= 1 << i
            inn[i] |= 1 << j
            m += 1
    return Digraph._from_masks(n, out, inn, m)


def tournament_count(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def oriented_count(n: int) -> int:
    return 3 ** (n * (n - 1) // 2)


def enumerate_tournaments(n: int):
    """Every labeled tournament on n vertices exactly once, in index order."""
    if n > MAX_TOURNAMENT_ENUM:
        raise EnumerationCapError(f"tournament enumeration capped at n<={MAX_TOURNAMENT_ENUM}")
    if n < 1:
        raise DigraphError("enumeration needs at least one vertex")
    for index in range(tournament_count(n)):
        yield tournament_from_index(n, index)


def enumerate_oriented(n: int):
    """Every labeled oriented graph on n vertices exactly once."""
    if n > MAX_ORIENTED_ENUM:
        raise EnumerationCapError(f"oriented enumeration capped at n<={MAX_ORIENTED_ENUM}")
    if n < 1:
        raise DigraphError("enumeration needs at least one vertex")
    for index in range(oriented_count(n)):
        yield oriented_from_index(n, index)


def enumerate_local_tournaments(n: int, connected_only: bool = False):
    """Labeled local tournaments, filtered out of the oriented stream."""
    for d in enumerate_oriented(n):
        if not is_locally_semicomplete(d):
            continue
        if connected_only and not is_connected(d):
            continue
        yield d


# ---- fixtures -------------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    digraph: Digraph
    expected: dict = field(default_factory=dict)


_FIXTURE_ARCS: dict[str, tuple[int, list[tuple[int, int]], dict]] = {
    # 4-cycle with two chords: strong, round, a tournament; exactly two
    # Sullivan-2 vertices.
    "FIG1_D": (
        4,
        [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (0, 2)],
        {
            "sullivan1": {0, 1, 3},
            "sullivan2": {0, 1},
            "classification": ClassKind.ROUND_DECOMPOSABLE,
        },
    ),
    # 5-vertex strong round local tournament (not a tournament); exactly
    # two Sullivan-1 and two Sullivan-2 vertices.
    "FIG1_DPRIME": (
        5,
        [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 0), (4, 0), (4, 1), (4, 2)],
        {
            "sullivan1": {3, 4},
            "sullivan2": {3, 4},
            "classification": ClassKind.ROUND_DECOMPOSABLE,
        },
    ),
    "C3": (
        3,
        [(0, 1), (1, 2), (2, 0)],
        {
            "sullivan1": {0, 1, 2},
            "sullivan2": {0, 1, 2},
            "classification": ClassKind.ROUND_DECOMPOSABLE,
        },
    ),
    "TT3": (
        3,
        [(0, 1), (0, 2), (1, 2)],
        {"sullivan1": {0, 2}, "classification": ClassKind.ROUND_DECOMPOSABLE},
    ),
    "P2": (
        2,
        [(0, 1)],
        {"sullivan1": {0, 1}, "sullivan2": {0}, "classification": ClassKind.ROUND_DECOMPOSABLE},
    ),
    # Hub completely dominating a 3-cycle; the hub is the unique
    # Sullivan-2 vertex.
    "STAR_C3": (
        4,
        [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)],
        {
            "sullivan1": {0},
            "sullivan2": {0},
            "classification": ClassKind.ROUND_DECOMPOSABLE,
        },
    ),
    # One 3-cycle completely dominating another.
    "C3_TO_C3": (
        6,
        [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
        + [(i, j) for i in range(3) for j in range(3, 6)],
        {"sullivan1": {0, 1, 2}, "classification": ClassKind.ROUND_DECOMPOSABLE},
    ),
    # Smallest non-round non-tournament local tournament: a 4-cycle of
    # singleton components around a one-vertex separator that both feeds
    # and drains the middle.
    "NONROUND5": (
        5,
        [(0, 1), (1, 2), (1, 4), (2, 3), (2, 4), (3, 0), (3, 1), (3, 4), (4, 0)],
        {
            "sullivan1": {0, 1, 2, 3},
            "sullivan2": {1, 2, 3},
            "classification": ClassKind.NON_ROUND_NON_TOURNAMENT,
        },
    ),
}


def fixtures() -> list[Fixture]:
    """The named fixtures, with every expected record re-derived by the
    brute-force oracle at load time; a mismatch aborts immediately."""
    out = []
    for name, (n, arcs, expected) in _FIXTURE_ARCS.items():
        d = Digraph(n, arcs)
        report = sullivan_report(d)
        for key in ("sullivan1", "sullivan2", "seymour", "slack2"):
            if key in expected and getattr(report, key) != frozenset(expected[key]):
                raise GenerationError(
                    f"fixture {name}: {key} expected {sorted(expected[key])},"
                    f" oracle says {sorted(getattr(report, key))}"
                )
        if "classification" in expected:
            kind = classify_local_tournament(d).kind
            if kind is not expected["classification"]:
                raise GenerationError(
                    f"fixture {name}: classification expected"
                    f" {expected['classification'].value}, got {kind.value}"
                )
        out.append(Fixture(name, d, dict(expected)))
    return out


def fixture(name: str) -> Fixture:
    for f in fixtures():
        if f.name == name:
            return f
    raise DigraphError(f"unknown fixture {name!r}")


# ---- the non-round corpus ----------------------------------------------------------


def _random_nonround_candidate(rng: SplitMix64) -> Digraph | None:
    """One structured sample for the non-round hunt above the exhaustive
    cap: a cyclically dominating chain of components around a separator
    that exchanges arcs with the middle layer, random inner tournaments,
    then the usual filters."""
    # Component sizes: bottom components, middle components, terminal, separator.
    n_bottom = 1 + rng.randrange(2)
    n_middle = 1 + rng.randrange(2)
    sizes = []
    for _ in range(n_bottom + n_middle):
        sizes.append(1 if rng.randrange(3) else 3)
    sizes.append(1 if rng.randrange(2) else 3)  # terminal component
    n_sep = 1 + rng.randrange(2)
    sep_sizes = [1 if rng.randrange(3) else 3 for _ in range(n_sep)]

    blocks: list[list[int]] = []
    total = 0
    for s in sizes + sep_sizes:
        blocks.append(list(range(total, total + s)))
        total += s
    if total > 11:
        return None
    comp_blocks = blocks[: len(sizes)]
    sep_blocks = blocks[len(sizes):]

    arcs: set[tuple[int, int]] = set()
    for b in blocks:
        if len(b) == 3:
            arcs |= {(b[0], b[1]), (b[1], b[2]), (b[2], b[0])}

    def dominate(src: list[int], dst: list[int]):
        for u in src:
            for v in dst:
                arcs.add((u, v))

    chain = comp_blocks + sep_blocks
    for i in range(len(chain) - 1):
        dominate(chain[i], chain[i + 1])
    dominate(chain[-1], chain[0])

    terminal = comp_blocks[-1]
    middle_blocks = comp_blocks[n_bottom:-1]
    bottom_blocks = comp_blocks[:n_bottom]
    for mb in middle_blocks:
        dominate(mb, terminal)
    for bb in bottom_blocks:
        for mb in middle_blocks:
            if rng.randrange(2):
                dominate(bb, mb)
    for sb in sep_blocks:
        dominate(terminal, sb)
        dominate(sb, bottom_blocks[0])
        for mb in middle_blocks:
            r = rng.randrange(3)
            if r == 0:
                dominate(sb, mb)
            elif r == 1:
                dominate(mb, sb)

    seen = set()
    for u, v in arcs:
        if (v, u) in arcs:
            return None
        seen.add((u, v))
    try:
        return Digraph(total, sorted(seen))
    except DigraphError:
        return None


def find_nonround_examples(
    n_max: int, seed: int = 0, random_samples: int = 2000
) -> list[Digraph]:
    """Connected non-round non-tournament local tournaments: exhaustive up
    to the oriented-enumeration cap, then (only when the exhaustive range
    is empty or out of reach) a seeded structured search up to n_max <= 10.
    An empty result is a legitimate finding and is simply returned empty."""
    found: list[Digraph] = []
    for n in range(1, min(n_max, MAX_ORIENTED_ENUM) + 1):
        for d in enumerate_local_tournaments(n, connected_only=True):
            if classify_local_tournament(d).kind is ClassKind.NON_ROUND_NON_TOURNAMENT:
                found.append(d)
    if found or n_max <= MAX_ORIENTED_ENUM:
        return found
    if n_max > 10:
        raise EnumerationCapError("the random non-round hunt is capped at n<=10")
    rng = SplitMix64(seed)
    seen: set[Digraph] = set()
    for _ in range(random_samples):
        cand = _random_nonround_candidate(rng)
        if cand is None or cand.n > n_max or cand in seen:
            continue
        flags = classify_shape(cand)
        if not (flags.local_tournament and flags.connected and flags.strong):
            continue
        if flags.tournament:
            continue
        if classify_local_tournament(cand).kind is ClassKind.NON_ROUND_NON_TOURNAMENT:
            seen.add(cand)
            found.append(cand)
    return found
