"""Structural recognition and decomposition of local tournaments.

The three pillars here:

* round labellings: cyclic vertex orders in which every out- and
  in-neighbourhood is a consecutive interval;
* the round decomposition ``R[S_1, ..., S_r]`` of a connected local
  tournament into a round quotient and strong-tournament parts, unique
  when it exists;
* the layered ("semicomplete") decomposition of connected non-strong
  locally semicomplete digraphs, plus the structure checks that
  characterize strong local tournaments with *no* round decomposition.

Everything is exact and deterministic; tie-breaks are by smallest vertex
id or lexicographically smallest sorted vertex list so that repeated runs
produce identical witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .digraph import (
    Digraph,
    StrongDecomposition,
    bit_list,
    completely_dominates_mask,
    is_connected,
    is_locally_semicomplete,
    is_semicomplete_within,
    is_strong,
    is_tournament_within,
    iter_bits,
    mask_of,
    require_oriented,
    strong_components,
)
from .errors import (
    DigraphError,
    EnumerationCapError,
    NotConnectedError,
    NotLocalTournamentError,
    NotStrongError,
    TheoremViolation,
)

MAX_SEPARATOR_SCAN = 16  # subset-lattice scans stay exact below this order
MAX_PARTITION_FALLBACK = 12  # exhaustive partition search bound


# ---- round labellings --------------------------------------------------------


@dataclass(frozen=True)
class RoundLabelling:
    """A cyclic vertex order witnessing roundness.

    With the order ``v_0, ..., v_{n-1}``, each vertex's out-neighbourhood
    is the next ``outdeg`` positions and its in-neighbourhood the previous
    ``indeg`` positions, indices mod n.
    """

    order: tuple[int, ...]

    def rotated_to(self, first: int) -> "RoundLabelling":
        i = self.order.index(first)
        return RoundLabelling(self.order[i:] + self.order[:i])

    def to_json_dict(self) -> list[int]:
        return list(self.order)


def check_round_labelling(d: Digraph, order: tuple[int, ...]) -> bool:
    """Verify both interval conditions for every vertex."""
    n = d.n
    if sorted(order) != list(range(n)):
        return False
    for i, v in enumerate(order):
        expect = 0
        for k in range(1, d.out_mask(v).bit_count() + 1):
            expect |= 1 << order[(i + k) % n]
        if d.out_mask(v) != expect:
            return False
        expect = 0
        for k in range(1, d.in_mask(v).bit_count() + 1):
            expect |= 1 << order[(i - k) % n]
        if d.in_mask(v) != expect:
            return False
    return True


def _forced_successors(d: Digraph) -> dict[int, int] | None:
    """For oriented input, the cyclic successor of any vertex with
    out-degree >= 1 is forced: it is the unique out-neighbour w with
    N+(v) - {w} contained in N+(w).  (Two such candidates would dominate
    each other, a 2-cycle.)  Returns None when some vertex has no
    candidate, which already rules out roundness."""
    succ: dict[int, int] = {}
    for v in range(d.n):
        om = d.out_mask(v)
        if not om:
            continue
        found = None
        for w in iter_bits(om):
            if (om & ~(1 << w)) & ~d.out_mask(w) == 0:
                if found is not None:
                    return None  # impossible for oriented input; defensive
                found = w
        if found is None:
            return None
        succ[v] = found
    return succ


def find_round_labelling(d: Digraph) -> RoundLabelling | None:
    """A witness labelling if the digraph is round, else None.

    Strategy: every round digraph is locally semicomplete, so that filter
    runs first.  Forced successor/predecessor links then pin the cyclic
    order down to an arrangement of chains; chains are joined in every
    cyclically distinct order (there are few, one per out-degree-zero
    vertex) and each candidate is verified against both interval
    conditions before being returned.
    """
    require_oriented(d)
    n = d.n
    if n == 0:
        return RoundLabelling(())
    if n == 1:
        return RoundLabelling((0,))
    if not is_locally_semicomplete(d):
        return None

    succ = _forced_successors(d)
    if succ is None:
        return None
    # Predecessor forcing mirrors successor forcing and must agree.
    for v in range(n):
        im = d.in_mask(v)
        if not im:
            continue
        found = None
        for w in iter_bits(im):
            if (im & ~(1 << w)) & ~d.in_mask(w) == 0:
                found = w
                break
        if found is None or succ.get(found) != v:
            return None
    if len(set(succ.values())) != len(succ):
        return None

    # Assemble forced chains.  Heads are exactly the in-degree-zero
    # vertices, tails the out-degree-zero ones.
    has_pred = set(succ.values())
    heads = [v for v in range(n) if v not in has_pred]
    chains: list[list[int]] = []
    seen: set[int] = set()
    for h in heads:
        chain = [h]
        seen.add(h)
        while chain[-1] in succ:
            nxt = succ[chain[-1]]
            if nxt in seen:
                return None
            chain.append(nxt)
            seen.add(nxt)
        chains.append(chain)
    if not chains:
        # No heads: the forced links must form a single n-cycle.
        order = [0]
        while len(order) < n:
            nxt = succ.get(order[-1])
            if nxt is None or nxt in order:
                return None
            order.append(nxt)
        if succ.get(order[-1]) != 0:
            return None
        cand = tuple(order)
        return RoundLabelling(cand) if check_round_labelling(d, cand) else None
    if len(seen) != n:
        return None  # a forced sub-cycle coexists with chains

    if len(chains) > 8:
        raise DigraphError("too many free chain arrangements for the roundness search")
    first, rest = chains[0], chains[1:]
    for perm in itertools.permutations(rest):
        order: list[int] = list(first)
        for c in perm:
            order.extend(c)
        cand = tuple(order)
        if check_round_labelling(d, cand):
            idx = cand.index(0)
            rotated = cand[idx:] + cand[:idx]
            return RoundLabelling(rotated)
    return None


def brute_force_round_labelling(d: Digraph, cap: int = 8) -> RoundLabelling | None:
    """Oracle: try every cyclic order with vertex 0 pinned first."""
    require_oriented(d)
    if d.n > cap:
        raise EnumerationCapError(f"brute-force roundness capped at n<={cap}")
    if d.n <= 1:
        return find_round_labelling(d)
    for perm in itertools.permutations(range(1, d.n)):
        cand = (0,) + perm
        if check_round_labelling(d, cand):
            return RoundLabelling(cand)
    return None


# ---- round decomposition -----------------------------------------------------


@dataclass(frozen=True)
class RoundDecomposition:
    """``quotient[parts[0], ..., parts[r-1]]`` equals the source digraph.

    ``parts[i]`` is the vertex set substituted for quotient vertex ``i``;
    each part induces a strong tournament, the quotient is a round local
    tournament on r >= 2 vertices, and ``labelling`` is a round labelling
    of the quotient.
    """

    quotient: Digraph
    parts: tuple[frozenset[int], ...]
    labelling: RoundLabelling

    @property
    def part_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(p) for p in self.parts)

    def part_of(self, v: int) -> int:
        for i, p in enumerate(self.parts):
            if v in p:
                return i
        raise DigraphError(f"vertex {v} not covered by the decomposition")

    def to_json_dict(self) -> dict:
        return {
            "quotient_n": self.quotient.n,
            "quotient_arcs": [list(a) for a in self.quotient.arcs()],
            "parts": [sorted(p) for p in self.parts],
            "labelling": self.labelling.to_json_dict(),
        }


def _module_closure(d: Digraph, seed: int) -> int:
    """Smallest vertex set containing ``seed`` that no outside vertex can
    distinguish (outside vertices must relate to all members uniformly:
    dominate all, be dominated by all, or be adjacent to none)."""
    full = d.full_mask
    m = seed
    dom_all = dominated_all = nonadj_all = full
    for v in iter_bits(seed):
        dom_all &= d._in[v]
        dominated_all &= d._out[v]
        nonadj_all &= ~(d._out[v] | d._in[v])
    while True:
        mixed = full & ~m & ~(dom_all | dominated_all | (nonadj_all & full))
        if not mixed:
            return m
        x = mixed & -mixed
        v = x.bit_length() - 1
        m |= x
        dom_all &= d._in[v]
        dominated_all &= d._out[v]
        nonadj_all &= ~(d._out[v] | d._in[v])


def _part_candidates(d: Digraph) -> dict[int, list[int]]:
    """Candidate part masks per vertex: module closures of adjacent pairs
    that induce strong tournaments, plus the singleton."""
    full = d.full_mask
    by_vertex: dict[int, set[int]] = {v: {1 << v} for v in range(d.n)}
    seen: set[int] = set()
    for u in range(d.n):
        for v in iter_bits(d._out[u]):
            m = _module_closure(d, (1 << u) | (1 << v))
            if m in seen or m == full:
                continue
            seen.add(m)
            if m.bit_count() < 3:
                continue
            if is_tournament_within(d, m) and is_strong(d, m):
                for w in iter_bits(m):
                    by_vertex[w].add(m)
    return {v: sorted(s, key=lambda m: (-m.bit_count(), m)) for v, s in by_vertex.items()}


def _quotient_of_partition(d: Digraph, parts: list[int]) -> Digraph | None:
    """Build the quotient if every pair of parts relates uniformly
    (complete one-way domination or no arcs at all); None otherwise.
    Uniformity plus untouched internal arcs is exactly the statement that
    recomposing the quotient with the parts reproduces the source."""
    r = len(parts)
    and_out = []
    or_out = []
    for p in parts:
        a = d.full_mask
        o = 0
        for v in iter_bits(p):
            a &= d._out[v]
            o |= d._out[v]
        and_out.append(a)
        or_out.append(o)
    qout = [0] * r
    qin = [0] * r
    m = 0
    for i in range(r):
        for j in range(i + 1, r):
            fwd = or_out[i] & parts[j]
            bwd = or_out[j] & parts[i]
            if fwd and bwd:
                return None
            if fwd:
                if and_out[i] & parts[j] != parts[j]:
                    return None
                qout[i] |= 1 << j
                qin[j] |= 1 << i
                m += 1
            elif bwd:
                if and_out[j] & parts[i] != parts[i]:
                    return None
                qout[j] |= 1 << i
                qin[i] |= 1 << j
                m += 1
    return Digraph._from_masks(r, qout, qin, m)


def _assemble_partition(
    d: Digraph, candidates: dict[int, list[int]]
) -> RoundDecomposition | None:
    """Backtracking over candidate parts, largest first, smallest
    uncovered vertex driving the branching.  A candidate partition is
    accepted only if the quotient is well defined (uniform cross-part
    relations) and itself a round local tournament; uniqueness of the
    round decomposition makes the first valid assembly the answer."""
    full = d.full_mask

    def rec(assigned: int, parts: list[int]) -> RoundDecomposition | None:
        if assigned == full:
            if len(parts) < 2:
                return None
            ordered = sorted(parts, key=lambda m: m & -m)
            q = _quotient_of_partition(d, ordered)
            if q is None:
                return None
            lab = find_round_labelling(q)
            if lab is None:
                return None
            return RoundDecomposition(
                quotient=q,
                parts=tuple(frozenset(iter_bits(p)) for p in ordered),
                labelling=lab,
            )
        v = (full & ~assigned)
        v = (v & -v).bit_length() - 1
        for cand in candidates[v]:
            if cand & assigned:
                continue
            parts.append(cand)
            res = rec(assigned | cand, parts)
            if res is not None:
                return res
            parts.pop()
        return None

    return rec(0, [])


def _exhaustive_candidates(d: Digraph) -> dict[int, list[int]]:
    """All proper modules inducing strong tournaments, any size, plus
    singletons.  Fallback for small orders only."""
    full = d.full_mask
    by_vertex: dict[int, set[int]] = {v: {1 << v} for v in range(d.n)}
    verts = list(range(d.n))
    for size in range(3, d.n):
        for combo in itertools.combinations(verts, size):
            m = mask_of(combo)
            if _module_closure(d, m) != m:
                continue
            if is_tournament_within(d, m) and is_strong(d, m):
                for w in combo:
                    by_vertex[w].add(m)
    return {v: sorted(s, key=lambda m: (-m.bit_count(), m)) for v, s in by_vertex.items()}


def round_decomposition(d: Digraph) -> RoundDecomposition | None:
    """The unique round decomposition of a connected local tournament, or
    None when the digraph is not round decomposable.

    A round digraph decomposes into singletons (uniqueness forces this);
    otherwise candidate parts are module closures of adjacent pairs and
    assembly is validated by quotient roundness plus recomposition.  An
    exhaustive module search backs the closure candidates up at small
    orders.
    """
    if not is_connected(d):
        raise NotConnectedError("round decomposition needs a connected digraph")
    require_oriented(d)
    if not is_locally_semicomplete(d):
        raise NotLocalTournamentError("round decomposition needs a local tournament")
    if d.n < 2:
        return None
    lab = find_round_labelling(d)
    if lab is not None:
        singles = tuple(frozenset((v,)) for v in range(d.n))
        return RoundDecomposition(quotient=d, parts=singles, labelling=lab)
    res = _assemble_partition(d, _part_candidates(d))
    if res is None and d.n <= MAX_PARTITION_FALLBACK:
        res = _assemble_partition(d, _exhaustive_candidates(d))
    return res


def validate_round_decomposition(d: Digraph, rd: RoundDecomposition) -> None:
    """Raise DigraphError unless ``rd`` is a correct decomposition of ``d``."""
    masks = rd.part_masks
    if len(masks) < 2:
        raise DigraphError("round decomposition needs at least two parts")
    acc = 0
    for m in masks:
        if m & acc:
            raise DigraphError("parts overlap")
        acc |= m
    if acc != d.full_mask:
        raise DigraphError("parts do not cover the vertex set")
    for m in masks:
        if not (is_tournament_within(d, m) and is_strong(d, m)):
            raise DigraphError("a part does not induce a strong tournament")
    if rd.quotient.n != len(masks):
        raise DigraphError("quotient order does not match the part count")
    q = _quotient_of_partition(d, list(masks))
    if q is None or q != rd.quotient:
        raise DigraphError("quotient does not recompose to the source digraph")
    if not check_round_labelling(rd.quotient, rd.labelling.order):
        raise DigraphError("labelling is not a round labelling of the quotient")


# ---- semicomplete decomposition ------------------------------------------------


@dataclass(frozen=True)
class SemicompleteDecomposition:
    """Layers of a connected non-strong locally semicomplete digraph.

    ``layers[0]`` is the terminal strong component; each next layer is the
    run of strong components, contiguous in the acyclic ordering, whose
    lowest member is the least component sending an arc into the previous
    layer.  ``layer_starts[k]`` is that least component index (0-based)
    for ``layers[k]``.
    """

    layers: tuple[frozenset[int], ...]
    layer_starts: tuple[int, ...]
    components: StrongDecomposition

    @property
    def layer_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(ly) for ly in self.layers)

    def to_json_dict(self) -> dict:
        return {
            "layers": [sorted(ly) for ly in self.layers],
            "layer_starts": list(self.layer_starts),
            "components": self.components.to_json_dict(),
        }


def semicomplete_decomposition(
    d: Digraph, within: int | None = None
) -> SemicompleteDecomposition:
    """Layered decomposition, verified against all of its structural
    guarantees before being returned (TheoremViolation on any breach)."""
    w = d._within(within)
    if not is_connected(d, w):
        raise NotConnectedError("layered decomposition needs a connected digraph")
    if is_strong(d, w):
        raise NotStrongError("layered decomposition is for non-strong digraphs")
    for v in iter_bits(w):
        if not (
            is_semicomplete_within(d, d.out_mask(v, w))
            and is_semicomplete_within(d, d.in_mask(v, w))
        ):
            raise NotLocalTournamentError("layered decomposition needs locally semicomplete input")

    comps = strong_components(d, w)
    cmasks = comps.masks
    p = len(cmasks)
    out_of = [0] * p
    for i, cm in enumerate(cmasks):
        acc = 0
        for v in iter_bits(cm):
            acc |= d._out[v]
        out_of[i] = acc & w & ~cm

    starts = [p - 1]
    layers = [cmasks[p - 1]]
    while starts[-1] > 0:
        prev_layer = layers[-1]
        nxt = None
        for j in range(p):
            if out_of[j] & prev_layer:
                nxt = j
                break
        if nxt is None or nxt >= starts[-1]:
            raise TheoremViolation("layer-recursion-stuck", at_layer=len(layers))
        lo, hi = nxt, starts[-1] - 1
        layer = 0
        for j in range(lo, hi + 1):
            layer |= cmasks[j]
        starts.append(lo)
        layers.append(layer)

    dec = SemicompleteDecomposition(
        layers=tuple(frozenset(iter_bits(m)) for m in layers),
        layer_starts=tuple(starts),
        components=comps,
    )
    _verify_layers(d, w, dec)
    return dec


def _verify_layers(d: Digraph, w: int, dec: SemicompleteDecomposition) -> None:
    lmasks = dec.layer_masks
    r = len(lmasks)
    cmasks = dec.components.masks
    if sum(m.bit_count() for m in lmasks) != w.bit_count():
        raise TheoremViolation("layers-not-a-partition")
    for k, lm in enumerate(lmasks):
        if not is_semicomplete_within(d, lm):
            raise TheoremViolation("layer-not-semicomplete", layer=k)
    for k in range(r - 1):
        initial = cmasks[dec.layer_starts[k]]
        if not completely_dominates_mask(d, lmasks[k + 1], initial):
            raise TheoremViolation("layer-does-not-dominate-initial", layer=k + 1)
        for v in iter_bits(lmasks[k]):
            if d._out[v] & lmasks[k + 1]:
                raise TheoremViolation("arc-into-next-layer", layer=k, vertex=v)
    if r >= 3:
        for i in range(r):
            for j in range(i + 2, r):
                for v in iter_bits(lmasks[i]):
                    if (d._out[v] | d._in[v]) & lmasks[j]:
                        raise TheoremViolation("arc-between-distant-layers", layers=(i, j))


# ---- separating sets -----------------------------------------------------------


def minimal_separating_sets(d: Digraph) -> list[frozenset[int]]:
    """All inclusion-minimal vertex sets whose removal destroys strong
    connectivity.  Subset-lattice scan by ascending size: a candidate that
    contains a known minimal separating set is skipped, everything else is
    tested directly, which is exact because every separating set contains
    a minimal one."""
    if not is_strong(d):
        raise NotStrongError("separating sets are defined for strong digraphs")
    if d.n > MAX_SEPARATOR_SCAN:
        raise EnumerationCapError(f"separator scan capped at n<={MAX_SEPARATOR_SCAN}")
    full = d.full_mask
    found: list[int] = []
    for size in range(1, max(0, d.n - 1)):
        for combo in itertools.combinations(range(d.n), size):
            sm = mask_of(combo)
            if any(f & sm == f for f in found):
                continue
            if not is_strong(d, full & ~sm):
                found.append(sm)
    return [frozenset(iter_bits(m)) for m in sorted(found, key=lambda m: (m.bit_count(), bit_list(m)))]


def is_minimal_separating_set(d: Digraph, s: frozenset[int]) -> bool:
    """Exact check: removal breaks strongness and removal of every proper
    subset does not."""
    full = d.full_mask
    sm = mask_of(s)
    if not sm or sm & ~full:
        return False
    if is_strong(d, full & ~sm):
        return False
    members = sorted(s)
    for size in range(1, len(members)):
        for combo in itertools.combinations(members, size):
            if not is_strong(d, full & ~mask_of(combo)):
                return False
    return True


def select_separating_set(d: Digraph) -> frozenset[int]:
    """The canonical separating set for the non-round analysis: minimum
    cardinality among all minimal separating sets whose removal leaves a
    non-tournament, ties broken by lexicographically smallest sorted
    vertex list."""
    full = d.full_mask
    candidates = [
        s
        for s in minimal_separating_sets(d)
        if not is_tournament_within(d, full & ~mask_of(s))
    ]
    if not candidates:
        raise DigraphError("every minimal separating set leaves a tournament")
    return min(candidates, key=lambda s: (len(s), sorted(s)))


# ---- classification -------------------------------------------------------------


class ClassKind(Enum):
    ROUND_DECOMPOSABLE = "round-decomposable"
    NON_ROUND_NON_TOURNAMENT = "non-round-non-tournament"
    NON_ROUND_TOURNAMENT = "non-round-tournament"


@dataclass(frozen=True)
class Classification:
    kind: ClassKind
    round_decomposition: RoundDecomposition | None

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "round_decomposition": (
                None
                if self.round_decomposition is None
                else self.round_decomposition.to_json_dict()
            ),
        }


def classify_local_tournament(d: Digraph) -> Classification:
    """Exactly one of: round decomposable, non-round tournament, non-round
    non-tournament."""
    if not is_connected(d):
        raise NotConnectedError("classification needs a connected digraph")
    require_oriented(d)
    if not is_locally_semicomplete(d):
        raise NotLocalTournamentError("classification needs a local tournament")
    rd = round_decomposition(d)
    if rd is not None:
        return Classification(ClassKind.ROUND_DECOMPOSABLE, rd)
    if is_tournament_within(d, d.full_mask):
        return Classification(ClassKind.NON_ROUND_TOURNAMENT, None)
    return Classification(ClassKind.NON_ROUND_NON_TOURNAMENT, None)


# ---- non-round structure verification --------------------------------------------


@dataclass(frozen=True)
class ClauseResult:
    name: str
    passed: bool
    detail: str = ""
    witness: dict | None = None
    skipped: bool = False

    def to_json_dict(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        if self.skipped:
            out["skipped"] = True
        return out


@dataclass(frozen=True)
class NonRoundStructureReport:
    clauses: tuple[ClauseResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {"passed": self.passed, "clauses": [c.to_json_dict() for c in self.clauses]}


def verify_nonround_structure(d: Digraph, separator: frozenset[int]) -> NonRoundStructureReport:
    """Check the full structural characterization of strong non-round
    local tournaments against one chosen separating set.

    The clauses are reported individually: the separator must induce a
    tournament whose removal leaves exactly three layers; the layered
    remainder and the separator components must exhibit the crossing-arc
    pattern; the terminal component must dominate the separator and the
    separator the initial one; every separator-to-middle-layer arc must
    propagate the stated dominations; and the combined component cycle
    must dominate consecutively, wrapping around.  On a round-decomposable
    digraph at least one clause fails (that is the contrapositive of the
    characterization and is exercised by the test suite).
    """
    if not is_strong(d):
        raise NotStrongError("the non-round structure lives in strong digraphs")
    require_oriented(d)
    if not is_locally_semicomplete(d):
        raise NotLocalTournamentError("non-round structure needs a local tournament")
    full = d.full_mask
    if is_tournament_within(d, full):
        raise DigraphError("tournament input: the non-round structure needs a non-tournament")
    smask = mask_of(separator)
    if smask & ~full or not smask:
        raise DigraphError("separator out of range or empty")
    rest = full & ~smask
    if is_tournament_within(d, rest):
        raise DigraphError("the chosen separator leaves a tournament")
    if not is_minimal_separating_set(d, separator):
        raise DigraphError("the chosen set is not a minimal separating set")

    clauses: list[ClauseResult] = []

    sep_semicomplete = is_semicomplete_within(d, smask)
    clauses.append(
        ClauseResult(
            "separator-semicomplete",
            sep_semicomplete,
            detail="" if sep_semicomplete else "separator does not induce a semicomplete digraph",
        )
    )

    layers = None
    try:
        layers = semicomplete_decomposition(d, rest)
        three = len(layers.layers) == 3
        clauses.append(
            ClauseResult(
                "three-layers",
                three,
                detail=f"layer count {len(layers.layers)}",
            )
        )
    except (NotConnectedError, NotStrongError, NotLocalTournamentError, TheoremViolation) as e:
        clauses.append(ClauseResult("three-layers", False, detail=str(e)))

    if layers is None or len(layers.layers) != 3:
        clauses.append(ClauseResult("crossing-arcs", False, detail="no three-layer decomposition"))
        clauses.append(ClauseResult("terminal-separator-initial", False, detail="skipped"))
        clauses.append(ClauseResult("separator-arc-propagation", False, detail="skipped"))
        clauses.append(ClauseResult("cyclic-domination", False, detail="skipped"))
        return NonRoundStructureReport(tuple(clauses))

    comps = layers.components
    cmasks = comps.masks
    p = len(cmasks)
    scomps = strong_components(d, smask)
    smasks = scomps.masks
    q = len(smasks)
    lam = layers.layer_starts[1]  # first component of the middle layer

    # Crossing-arc pattern between the middle layer and the separator.
    witness = None
    out_of_comp = []
    in_of_comp = []
    for cm in cmasks:
        o = i = 0
        for v in iter_bits(cm):
            o |= d._out[v]
            i |= d._in[v]
        out_of_comp.append(o & ~cm)
        in_of_comp.append(i & ~cm)
    s_out = []
    s_in = []
    for sm in smasks:
        o = i = 0
        for v in iter_bits(sm):
            o |= d._out[v]
            i |= d._in[v]
        s_out.append(o & ~sm)
        s_in.append(i & ~sm)
    for alpha in range(lam, p - 1):
        for mu in range(q):
            if not in_of_comp[alpha] & smasks[mu]:
                continue
            for nu in range(mu, q):
                if out_of_comp[alpha] & smasks[nu]:
                    witness = {"form": "middle-first", "alpha": alpha, "mu": p + mu, "nu": p + nu}
                    break
            if witness:
                break
        if witness:
            break
    if witness is None:
        for mu in range(q):
            for alpha in range(lam, p - 1):
                if not s_in[mu] & cmasks[alpha]:
                    continue
                for beta in range(alpha, p - 1):
                    if s_out[mu] & cmasks[beta]:
                        witness = {
                            "form": "separator-first",
                            "alpha": alpha,
                            "beta": beta,
                            "mu": p + mu,
                        }
                        break
                if witness:
                    break
            if witness:
                break
    clauses.append(
        ClauseResult(
            "crossing-arcs",
            witness is not None,
            detail="" if witness else "no crossing-arc quadruple",
            witness=witness,
        )
    )

    ok = completely_dominates_mask(d, cmasks[p - 1], smask) and completely_dominates_mask(
        d, smask, cmasks[0]
    )
    clauses.append(ClauseResult("terminal-separator-initial", ok))

    # Every arc s -> v with s in the separator and v in the middle layer
    # forces: s's separator component and all later ones dominate the
    # bottom layer, and the bottom layer dominates the middle-layer prefix
    # ending at v's component.
    middle = layers.layer_masks[1]
    bottom = layers.layer_masks[2]
    prop_ok = True
    prop_witness = None
    for si in range(q):
        upper = 0
        for k in range(si, q):
            upper |= smasks[k]
        for s in iter_bits(smasks[si]):
            hits = d._out[s] & middle
            if not hits:
                continue
            for v in iter_bits(hits):
                j = comps.component_of(v)
                prefix = 0
                for k in range(lam, j + 1):
                    prefix |= cmasks[k]
                if not completely_dominates_mask(d, upper, bottom):
                    prop_ok = False
                elif not completely_dominates_mask(d, bottom, prefix):
                    prop_ok = False
                if not prop_ok:
                    prop_witness = {"s": s, "v": v}
                    break
            if not prop_ok:
                break
        if not prop_ok:
            break
    clauses.append(
        ClauseResult("separator-arc-propagation", prop_ok, witness=prop_witness)
    )

    seq = list(cmasks) + list(smasks)
    cyc_ok = completely_dominates_mask(d, smasks[-1], bottom)
    cyc_witness = None
    if cyc_ok:
        for f in range(len(seq)):
            g = (f + 1) % len(seq)
            if not completely_dominates_mask(d, seq[f], seq[g]):
                cyc_ok = False
                cyc_witness = {"from": f, "to": g}
                break
    clauses.append(ClauseResult("cyclic-domination", cyc_ok, witness=cyc_witness))

    return NonRoundStructureReport(tuple(clauses))
