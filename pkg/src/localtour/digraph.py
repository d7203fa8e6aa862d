"""Loop-free digraphs over dense integer vertex ids.

Vertices are the integers ``0..n-1``.  Adjacency is held as one out-mask
and one in-mask per vertex; Python's arbitrary-precision ints serve as
bitsets, so arc queries and the set algebra behind neighbourhood and
reachability computations are a handful of word operations at desk scale.

Most query operations take an optional ``within`` vertex mask and then
behave as if evaluated on the induced subdigraph while keeping the
original vertex ids.  The decomposition machinery leans on this to reason
about restrictions such as "D minus a separating set" without relabelling.

2-cycles are representable on purpose: recognition has to *see* them to
reject non-oriented inputs.  Everything downstream that requires oriented
input checks explicitly via :func:`require_oriented`.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import DigraphError, NotOrientedError


def mask_of(vertices: Iterable[int]) -> int:
    """Pack an iterable of vertex ids into a bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


class DegreeTriple(NamedTuple):
    """Out-degree, in-degree and second out-degree of one vertex."""

    outdeg: int
    indeg: int
    second: int

    def to_json_dict(self) -> dict:
        return {"out": self.outdeg, "in": self.indeg, "second": self.second}


@dataclass(frozen=True)
class ShapeFlags:
    """Recognition flags for one digraph, each per its textbook definition.

    ``connected`` refers to the underlying undirected graph.  A digraph on
    at most one vertex counts as both strong and connected.
    """

    oriented: bool
    semicomplete: bool
    tournament: bool
    locally_semicomplete: bool
    local_tournament: bool
    strong: bool
    connected: bool

    def to_json_dict(self) -> dict:
        return {
            "oriented": self.oriented,
            "semicomplete": self.semicomplete,
            "tournament": self.tournament,
            "locally_semicomplete": self.locally_semicomplete,
            "local_tournament": self.local_tournament,
            "strong": self.strong,
            "connected": self.connected,
        }


class Digraph:
    """Immutable loop-free digraph without duplicate arcs."""

    __slots__ = ("n", "_out", "_in", "_m")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise DigraphError("vertex count must be non-negative")
        out = [0] * n
        inn = [0] * n
        m = 0
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise DigraphError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise DigraphError(f"loop at vertex {u}")
            if out[u] >> v & 1:
                raise DigraphError(f"duplicate arc ({u}, {v})")
            out[u] |= 1 << v
            inn[v] |= 1 << u
            m += 1
        self.n = n
        self._out = tuple(out)
        self._in = tuple(inn)
        self._m = m

    @classmethod
    def _from_masks(cls, n: int, out: Sequence[int], inn: Sequence[int], m: int) -> "Digraph":
        # Trusted fast path for generators and enumeration kernels.
        d = object.__new__(cls)
        d.n = n
        d._out = tuple(out)
        d._in = tuple(inn)
        d._m = m
        return d

    # ---- basic queries ----------------------------------------------------

    @property
    def arc_count(self) -> int:
        return self._m

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self._out[u])]

    def has_arc(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self._out[u] >> v & 1)

    def _check_vertex(self, x: int) -> None:
        if not (0 <= x < self.n):
            raise DigraphError(f"vertex {x} out of range for n={self.n}")

    def _within(self, within: int | None) -> int:
        return self.full_mask if within is None else within & self.full_mask

    # ---- neighbourhoods ---------------------------------------------------

    def out_mask(self, x: int, within: int | None = None) -> int:
        self._check_vertex(x)
        return self._out[x] & self._within(within)

    def in_mask(self, x: int, within: int | None = None) -> int:
        self._check_vertex(x)
        return self._in[x] & self._within(within)

    def adj_mask(self, x: int, within: int | None = None) -> int:
        """Vertices adjacent to ``x`` in either direction."""
        self._check_vertex(x)
        return (self._out[x] | self._in[x]) & self._within(within)

    def out_neighbours(self, x: int) -> frozenset[int]:
        return frozenset(iter_bits(self.out_mask(x)))

    def in_neighbours(self, x: int) -> frozenset[int]:
        return frozenset(iter_bits(self.in_mask(x)))

    def second_out_mask(self, x: int, within: int | None = None) -> int:
        """Union of out-neighbourhoods of out-neighbours, minus the
        out-neighbourhood itself.

        The vertex ``x`` is *not* removed: it can legitimately appear when
        some out-neighbour points back at it, which is impossible exactly
        when the digraph is oriented.
        """
        w = self._within(within)
        om = self._out[x] & w
        acc = 0
        for u in iter_bits(om):
            acc |= self._out[u]
        return acc & w & ~om

    def second_out_neighbourhood(self, x: int) -> frozenset[int]:
        return frozenset(iter_bits(self.second_out_mask(x)))

    def degree_profile(self, x: int, within: int | None = None) -> DegreeTriple:
        return DegreeTriple(
            self.out_mask(x, within).bit_count(),
            self.in_mask(x, within).bit_count(),
            self.second_out_mask(x, within).bit_count(),
        )

    # ---- kings ------------------------------------------------------------

    def is_king(self, x: int, within: int | None = None) -> bool:
        """True iff every other vertex (of the restriction) is reachable
        from ``x`` by a path of length at most 2."""
        w = self._within(within)
        self._check_vertex(x)
        first = self._out[x] & w
        reach = first
        for u in iter_bits(first):
            reach |= self._out[u] & w
        return (w & ~(reach | (1 << x))) == 0

    # ---- induced subdigraphs ---------------------------------------------

    def induced(self, vertices: Iterable[int]) -> tuple["Digraph", tuple[int, ...]]:
        """Subdigraph induced by ``vertices``.

        Returns the new digraph together with the mapping ``new id -> old
        id`` (ascending in the old ids); the inverse map is recoverable by
        enumeration.
        """
        keep = sorted(set(vertices))
        for v in keep:
            self._check_vertex(v)
        pos = {v: i for i, v in enumerate(keep)}
        sub_n = len(keep)
        out = [0] * sub_n
        inn = [0] * sub_n
        m = 0
        kmask = mask_of(keep)
        for v in keep:
            i = pos[v]
            for t in iter_bits(self._out[v] & kmask):
                out[i] |= 1 << pos[t]
                inn[pos[t]] |= 1 << i
                m += 1
        return Digraph._from_masks(sub_n, out, inn, m), tuple(keep)

    # ---- dunder plumbing ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self._out == other._out

    def __hash__(self) -> int:
        return hash((self.n, self._out))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arcs()!r})"


# ---- orientation ------------------------------------------------------------


def has_two_cycle(d: Digraph) -> bool:
    return any(d._out[v] & d._in[v] for v in range(d.n))


def require_oriented(d: Digraph) -> None:
    if has_two_cycle(d):
        raise NotOrientedError("digraph contains a 2-cycle")


# ---- reachability and connectivity ------------------------------------------


def _spread(d: Digraph, seed: int, within: int, use_out: bool, use_in: bool) -> int:
    seen = seed & within
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            if use_out:
                nxt |= d._out[v]
            if use_in:
                nxt |= d._in[v]
        frontier = nxt & within & ~seen
        seen |= frontier
    return seen


def is_strong(d: Digraph, within: int | None = None) -> bool:
    w = d._within(within)
    if w.bit_count() <= 1:
        return True
    seed = w & -w
    if _spread(d, seed, w, True, False) != w:
        return False
    return _spread(d, seed, w, False, True) == w


def is_connected(d: Digraph, within: int | None = None) -> bool:
    """Connectivity of the underlying undirected graph."""
    w = d._within(within)
    if w.bit_count() <= 1:
        return True
    return _spread(d, w & -w, w, True, True) == w


# ---- shape classification ----------------------------------------------------


def is_semicomplete_within(d: Digraph, within: int) -> bool:
    for v in iter_bits(within):
        if (d._out[v] | d._in[v]) & within != within & ~(1 << v):
            return False
    return True


def is_tournament_within(d: Digraph, within: int) -> bool:
    for v in iter_bits(within):
        o, i = d._out[v] & within, d._in[v] & within
        if o & i or (o | i) != within & ~(1 << v):
            return False
    return True


def is_locally_semicomplete(d: Digraph) -> bool:
    return all(
        is_semicomplete_within(d, d._out[v]) and is_semicomplete_within(d, d._in[v])
        for v in range(d.n)
    )


def classify_shape(d: Digraph) -> ShapeFlags:
    full = d.full_mask
    oriented = not has_two_cycle(d)
    semicomplete = is_semicomplete_within(d, full)
    locally = is_locally_semicomplete(d)
    return ShapeFlags(
        oriented=oriented,
        semicomplete=semicomplete,
        tournament=semicomplete and oriented,
        locally_semicomplete=locally,
        local_tournament=locally and oriented,
        strong=is_strong(d),
        connected=is_connected(d),
    )


# ---- dominance ---------------------------------------------------------------


def completely_dominates(d: Digraph, v1: Iterable[int], v2: Iterable[int]) -> bool:
    """True iff there is no arc from ``v2`` to ``v1`` and every vertex of
    ``v1`` dominates every vertex of ``v2``.  Vacuously true when either
    side is empty."""
    m1, m2 = mask_of(v1), mask_of(v2)
    if m1 & m2:
        raise DigraphError("sets overlap")
    for a in iter_bits(m1):
        if d._out[a] & m2 != m2:
            return False
        if d._in[a] & m2:
            return False
    return True


def completely_dominates_mask(d: Digraph, m1: int, m2: int) -> bool:
    if m1 & m2:
        raise DigraphError("sets overlap")
    for a in iter_bits(m1):
        if d._out[a] & m2 != m2 or d._in[a] & m2:
            return False
    return True


# ---- strong components -------------------------------------------------------


@dataclass(frozen=True)
class StrongDecomposition:
    """Strong components in an acyclic ordering: every arc between distinct
    components goes from an earlier component to a later one."""

    components: tuple[frozenset[int], ...]

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(c) for c in self.components)

    def component_of(self, v: int) -> int:
        for i, c in enumerate(self.components):
            if v in c:
                return i
        raise DigraphError(f"vertex {v} not covered by the decomposition")

    def to_json_dict(self) -> list[list[int]]:
        return [sorted(c) for c in self.components]


def strong_components(d: Digraph, within: int | None = None) -> StrongDecomposition:
    """Tarjan over the (restricted) digraph; components come out in the
    acyclic ordering.  Vertex ids are preserved, so the result of a masked
    call speaks about the original digraph."""
    w = d._within(within)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    emitted: list[int] = []  # component masks, sinks first
    counter = 0

    for root in iter_bits(w):
        if root in index:
            continue
        work: list[tuple[int, Iterator[int]]] = [(root, iter_bits(d._out[root] & w))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for t in it:
                if t not in index:
                    index[t] = low[t] = counter
                    counter += 1
                    stack.append(t)
                    on_stack.add(t)
                    work.append((t, iter_bits(d._out[t] & w)))
                    advanced = True
                    break
                if t in on_stack:
                    low[v] = min(low[v], index[t])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = 0
                while True:
                    u = stack.pop()
                    on_stack.discard(u)
                    comp |= 1 << u
                    if u == v:
                        break
                emitted.append(comp)

    ordered = [frozenset(iter_bits(c)) for c in reversed(emitted)]
    return StrongDecomposition(tuple(ordered))


# ---- composition -------------------------------------------------------------


def composition(d: Digraph, parts: Sequence[Digraph]) -> Digraph:
    """Replace vertex ``i`` of ``d`` by the digraph ``parts[i]``; every arc
    of ``d`` becomes a complete set of arcs between the corresponding
    blocks.  New ids are assigned blockwise in part order."""
    if len(parts) != d.n:
        raise DigraphError(f"arity mismatch: digraph has {d.n} vertices, got {len(parts)} parts")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.n
    out = [0] * total
    inn = [0] * total
    m = 0
    for i, p in enumerate(parts):
        base = offsets[i]
        for u in range(p.n):
            shifted = p._out[u] << base
            out[base + u] |= shifted
            m += p._out[u].bit_count()
        for u in range(p.n):
            inn[base + u] |= p._in[u] << base
    for i in range(d.n):
        bi, ni = offsets[i], parts[i].n
        block_i = ((1 << ni) - 1) << bi
        for j in iter_bits(d._out[i]):
            bj, nj = offsets[j], parts[j].n
            block_j = ((1 << nj) - 1) << bj
            for u in range(bi, bi + ni):
                out[u] |= block_j
            for v in range(bj, bj + nj):
                inn[v] |= block_i
            m += ni * nj
    return Digraph._from_masks(total, out, inn, m)
