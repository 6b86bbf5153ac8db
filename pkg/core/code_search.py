"""
Searches for disjoint self-complementary asymmetric 1-codes

A self-complementary code is a union of 1-shift orbits, so orbits are the
search atoms. Two orbits are compatible when every cross pair of words has
asymmetric distance at least 2; a part is a set of pairwise compatible
admissible orbits.

Pruning used by the exhaustive searches:

- packing: single-decrement balls of a 1-code are disjoint and every orbit
  carries q + n(q-1) ball mass, so a part has at most q^n / (q + n(q-1))
  orbits; at equality every word must be covered by every part
- forward checking: each open part keeps enough compatible undecided orbits
- clique cover: a part takes at most one orbit from each clique of a fixed
  cover of the conflict graph
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Literal, Optional, Sequence, Tuple
import logging
import random
import time

import networkx as nx
import numpy as np
from pydantic import BaseModel, Field

from config import settings
from .asym_metrics import are_disjoint, is_self_complementary, is_t_code
from .exceptions import ConstructionError
from .inner_codes import QUINARY_295_TILDE
from .qudit_core import ClassicalCode, QuditString, relift

logger = logging.getLogger(__name__)

Outcome = Literal["found", "exhausted_negative", "bound_reached"]

# Known codes used to warm-start greedy searches, keyed by (q, n)
WARM_STARTS: Dict[Tuple[int, int], List[str]] = {
    (5, 5): QUINARY_295_TILDE,
}


class SearchCertificate(BaseModel):
    """Outcome of a search with enough detail to re-check it"""
    problem: Dict = Field(description="q, n, parts, size per part and mode")
    outcome: Outcome
    codes: List[List[str]] = Field(default_factory=list, description="Orbit representatives per part")
    best_size: int = Field(0, description="Words per part of the best codes found")
    nodes: int = 0
    elapsed_seconds: float = 0.0
    notes: List[str] = Field(default_factory=list)


class _NodeCapReached(Exception):
    pass


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass
class OrbitSpace:
    """Admissible 1-orbits of Z_q^n with bitset compatibility"""
    q: int
    n: int
    reps: List[Tuple[int, ...]]
    compat: List[int]
    words: np.ndarray  # (orbits, q, n)
    inadmissible: int

    @property
    def size(self) -> int:
        return len(self.reps)

    @property
    def all_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def ball_mass(self) -> int:
        return self.q + self.n * (self.q - 1)

    def packing_bound(self) -> int:
        """Most orbits a single part can hold"""
        return self.q ** self.n // self.ball_mass

    def rep_string(self, o: int) -> str:
        return str(QuditString(self.reps[o], self.q))

    def conflict_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.size))
        for o in range(self.size):
            conflicts = self.all_mask & ~self.compat[o] & ~(1 << o)
            graph.add_edges_from((o, p) for p in range(o + 1, self.size) if conflicts >> p & 1)
        return graph


def _orbit_words(q: int, n: int) -> np.ndarray:
    reps = np.array([(0,) + rest for rest in product(range(q), repeat=n - 1)], dtype=np.int16)
    shifts = np.arange(q, dtype=np.int16)
    return (reps[:, None, :] + shifts[None, :, None]) % q


def _close(diff: np.ndarray) -> np.ndarray:
    """Asymmetric distance at most 1 along the last axis"""
    up = np.clip(diff, 0, None).sum(axis=-1)
    down = np.clip(-diff, 0, None).sum(axis=-1)
    return np.maximum(up, down) <= 1


@lru_cache(maxsize=8)
def build_orbit_space(q: int, n: int, chunk: int = 64) -> OrbitSpace:
    """Enumerate orbits, drop those with an internal Delta <= 1 pair, and tabulate compatibility"""
    words = _orbit_words(q, n)
    intra = words[:, :, None, :] - words[:, None, :, :]
    close = _close(intra)
    close[:, np.arange(q), np.arange(q)] = False
    admissible = ~close.any(axis=(1, 2))
    words = words[admissible]
    count = words.shape[0]

    flat = words.reshape(count * q, n)
    conflict = np.zeros((count, count), dtype=bool)
    for start in range(0, count, chunk):
        block = words[start:start + chunk].reshape(-1, n)
        near = _close(flat[None, :, :] - block[:, None, :])
        conflict[start:start + chunk] = near.reshape(-1, q, count, q).any(axis=(1, 3))

    compat = []
    for o in range(count):
        mask = 0
        for p in np.flatnonzero(~conflict[o]):
            if p != o:
                mask |= 1 << int(p)
        compat.append(mask)
    reps = [tuple(int(d) for d in w[0]) for w in words]
    space = OrbitSpace(q, n, reps, compat, words, int((~admissible).sum()))
    logger.info(f"Orbit space q={q}, n={n}: {count} admissible orbits, {space.inadmissible} dropped")
    return space


def orbit_compatibility_graph(q: int, n: int) -> nx.Graph:
    """Admissible orbits (labelled by representative) joined when they can share a code"""
    space = build_orbit_space(q, n)
    graph = nx.Graph()
    graph.add_nodes_from(space.rep_string(o) for o in range(space.size))
    for o in range(space.size):
        for p in range(o + 1, space.size):
            if space.compat[o] >> p & 1:
                graph.add_edge(space.rep_string(o), space.rep_string(p))
    return graph


def _clique_cover(space: OrbitSpace) -> List[int]:
    """Greedy partition of the conflict graph into cliques, as bitmasks"""
    uncovered = space.all_mask
    cover = []
    for o in range(space.size):
        if not uncovered >> o & 1:
            continue
        clique = 1 << o
        candidates = uncovered & ~space.compat[o] & ~(1 << o)
        while candidates:
            p = (candidates & -candidates).bit_length() - 1
            clique |= 1 << p
            candidates &= ~space.compat[p] & ~(1 << p)
        cover.append(clique)
        uncovered &= ~clique
    return cover


def _cover_bound(cover: Sequence[int], mask: int) -> int:
    return sum(1 for clique in cover if clique & mask)


def _word_index(space: OrbitSpace) -> Dict[Tuple[int, ...], int]:
    index = {}
    for o in range(space.size):
        for w in space.words[o]:
            index[tuple(int(d) for d in w)] = o
    return index


def _coverage_refutes(space: OrbitSpace, tight_parts: int) -> Optional[str]:
    """
    In the tight packing case every part covers every word; a word coverable
    by fewer orbits than there are parts refutes the problem
    """
    index = _word_index(space)
    for x in product(range(space.q), repeat=space.n):
        sources = set()
        if x in index:
            sources.add(index[x])
        for i, d in enumerate(x):
            if d < space.q - 1:
                y = x[:i] + (d + 1,) + x[i + 1:]
                if y in index:
                    sources.add(index[y])
        if len(sources) < tight_parts:
            word = "".join(str(d) for d in x)
            return f"word {word} can be covered by {len(sources)} orbit(s) but {tight_parts} parts must cover it"
    return None


class _PartitionSearch:
    def __init__(self, space: OrbitSpace, parts: int, orbits_per_part: int, cap: int,
                 order: Optional[List[int]] = None):
        self.space = space
        self.parts = parts
        self.s = orbits_per_part
        self.cap = cap
        self.order = order if order is not None else list(range(space.size))
        self.cover = _clique_cover(space)
        self.nodes = 0
        self.members: List[List[int]] = []
        self.cands: List[int] = []

    def run(self) -> Optional[List[List[int]]]:
        return self._descend(0, self.space.all_mask)

    def _feasible(self, remaining: int) -> bool:
        need_total = self.parts * self.s - sum(len(m) for m in self.members)
        if _popcount(remaining) < need_total:
            return False
        for members, cand in zip(self.members, self.cands):
            need = self.s - len(members)
            if need == 0:
                continue
            pool = cand & remaining
            if _popcount(pool) < need or _cover_bound(self.cover, pool) < need:
                return False
        unopened = self.parts - len(self.members)
        if unopened and _cover_bound(self.cover, remaining) < self.s:
            return False
        return True

    def _descend(self, position: int, remaining: int) -> Optional[List[List[int]]]:
        self.nodes += 1
        if self.nodes > self.cap:
            raise _NodeCapReached()
        if self.nodes % settings.checkpoint_every == 0:
            logger.debug(f"Search checkpoint: {self.nodes} nodes, position {position}/{len(self.order)}")
        if len(self.members) == self.parts and all(len(m) == self.s for m in self.members):
            return [list(m) for m in self.members]
        if position == len(self.order) or not self._feasible(remaining):
            return None

        o = self.order[position]
        rest = remaining & ~(1 << o)
        for p, members in enumerate(self.members):
            if len(members) < self.s and self.cands[p] >> o & 1:
                members.append(o)
                saved = self.cands[p]
                self.cands[p] = saved & self.space.compat[o]
                found = self._descend(position + 1, rest)
                members.pop()
                self.cands[p] = saved
                if found:
                    return found
        # Parts are interchangeable: a new part may only be opened in order
        if len(self.members) < self.parts:
            self.members.append([o])
            self.cands.append(self.space.compat[o])
            found = self._descend(position + 1, rest)
            self.members.pop()
            self.cands.pop()
            if found:
                return found
        return self._descend(position + 1, rest)


def _codes_from_orbits(space: OrbitSpace, parts: List[List[int]]) -> List[ClassicalCode]:
    return [relift(space.q, [space.reps[o] for o in sorted(part)], name=f"part{i}") for i, part in enumerate(parts)]


def reverify(codes: Sequence[ClassicalCode], size: int) -> None:
    """Independent re-check of a found certificate"""
    for code in codes:
        if len(code) != size:
            raise ConstructionError(f"found code has {len(code)} words, expected {size}", "size")
        if not is_self_complementary(code):
            raise ConstructionError("found code is not self-complementary", "self-complementary")
        if not is_t_code(code, 1).is_t_code:
            raise ConstructionError("found code is not a 1-code", "1-code")
    if not are_disjoint(codes):
        raise ConstructionError("found codes overlap", "disjointness")


def partition_search(q: int, n: int, parts: int, size_per_part: int, cap: Optional[int] = None,
                     shuffle_seed: Optional[int] = None) -> SearchCertificate:
    """
    Find `parts` disjoint self-complementary 1-codes of `size_per_part` words
    each, or certify that none exist
    """
    cap = settings.node_cap if cap is None else cap
    started = time.perf_counter()
    problem = {"q": q, "n": n, "parts": parts, "size_per_part": size_per_part, "mode": "partition"}
    notes = ["atoms are 1-shift orbits (representatives start with 0)",
             "parts are interchangeable: new parts open in orbit order"]

    def finish(outcome: Outcome, codes=None, nodes=0) -> SearchCertificate:
        cert = SearchCertificate(
            problem=problem, outcome=outcome, codes=codes or [],
            best_size=size_per_part if outcome == "found" else 0,
            nodes=nodes, elapsed_seconds=round(time.perf_counter() - started, 3), notes=notes,
        )
        logger.info(f"partition_search q={q} n={n} {parts}x{size_per_part}: {outcome} after {nodes} nodes")
        return cert

    if size_per_part % q:
        notes.append(f"size {size_per_part} is not a multiple of q={q}")
        return finish("exhausted_negative")
    s = size_per_part // q
    space = build_orbit_space(q, n)
    if space.inadmissible:
        notes.append(f"{space.inadmissible} orbits excluded for an internal distance-1 pair")
    if s > space.packing_bound():
        notes.append(f"packing bound: {s} orbits x ball mass {space.ball_mass} exceeds {q ** n} words")
        return finish("exhausted_negative")
    if parts * s > space.size:
        notes.append(f"{parts * s} orbits needed but only {space.size} admissible")
        return finish("exhausted_negative")
    if s * space.ball_mass == q ** n and parts > 1:
        reason = _coverage_refutes(space, parts)
        if reason:
            notes.append(f"tight packing: {reason}")
            return finish("exhausted_negative")

    order = list(range(space.size))
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(order)
        notes.append(f"orbit order shuffled with seed {shuffle_seed}")
    search = _PartitionSearch(space, parts, s, cap, order)
    try:
        found = search.run()
    except _NodeCapReached:
        notes.append(f"node cap {cap} reached; no claim is made")
        logger.warning(f"partition_search q={q} n={n}: node cap {cap} reached")
        return finish("bound_reached", nodes=search.nodes)
    if found is None:
        return finish("exhausted_negative", nodes=search.nodes)
    codes = _codes_from_orbits(space, found)
    reverify(codes, size_per_part)
    return finish("found", [sorted(str(u) for u in c.tilde_transversal) for c in codes], search.nodes)


def single_part_maximum(space: OrbitSpace) -> Tuple[int, List[int]]:
    """Largest set of pairwise compatible orbits, by maximum clique"""
    graph = nx.Graph()
    graph.add_nodes_from(range(space.size))
    for o in range(space.size):
        graph.add_edges_from((o, p) for p in range(o + 1, space.size) if space.compat[o] >> p & 1)
    clique, size = nx.max_weight_clique(graph, weight=None)
    return int(size), sorted(clique)


def _greedy(space: OrbitSpace, parts: int, restarts: int, seed: int,
            warm: Optional[List[int]]) -> Tuple[List[List[int]], List[str]]:
    conflict = space.conflict_graph()
    rng = random.Random(seed)
    best: List[List[int]] = []
    notes = [f"greedy: {restarts} seeded restarts (seed {seed})"]
    for attempt in range(restarts):
        available = set(range(space.size))
        chosen = []
        for p in range(parts):
            sub = conflict.subgraph(available)
            if not sub:
                break
            start = [o for o in (warm or []) if o in available] if (p == 0 and attempt == 0) else None
            part = nx.maximal_independent_set(sub, nodes=start or None, seed=rng.randrange(2 ** 31))
            chosen.append(sorted(part))
            available -= set(part)
        if len(chosen) < parts:
            continue
        smallest = min(len(c) for c in chosen)
        if not best or smallest > len(best[0]):
            # Trimming a part keeps it a valid code
            best = [c[:smallest] for c in chosen]
    return best, notes


def max_code_search(q: int, n: int, parts: int, mode: str = "exhaustive", cap: Optional[int] = None,
                    seed: Optional[int] = None, restarts: Optional[int] = None) -> SearchCertificate:
    """
    Largest per-part size of `parts` disjoint self-complementary 1-codes

    Exhaustive mode proves optimality by refuting every larger size;
    greedy mode gives a lower bound.
    """
    cap = settings.node_cap if cap is None else cap
    seed = settings.default_seed if seed is None else seed
    started = time.perf_counter()
    space = build_orbit_space(q, n)
    problem = {"q": q, "n": n, "parts": parts, "mode": f"max/{mode}"}

    if mode == "greedy":
        warm = None
        if parts == 1 and (q, n) in WARM_STARTS:
            index = {rep: o for o, rep in enumerate(space.reps)}
            warm = [index[QuditString.parse(u, q).digits] for u in WARM_STARTS[(q, n)]]
        best, notes = _greedy(space, parts, restarts or settings.greedy_restarts, seed, warm)
        if warm:
            notes.append(f"warm start from a known {len(warm)}-orbit code")
        codes = _codes_from_orbits(space, best)
        size = len(best[0]) * q if best else 0
        reverify(codes, size)
        cert = SearchCertificate(
            problem=problem, outcome="found" if best else "bound_reached",
            codes=[sorted(str(u) for u in c.tilde_transversal) for c in codes], best_size=size,
            elapsed_seconds=round(time.perf_counter() - started, 3), notes=notes + ["lower bound only"],
        )
        logger.info(f"greedy max q={q} n={n} parts={parts}: {size} words per part")
        return cert
    if mode != "exhaustive":
        raise ValueError(f"unknown mode '{mode}'")

    single, _ = single_part_maximum(space)
    upper = min(single, space.packing_bound(), space.size // parts)
    notes = [f"single-part maximum {single} orbits; packing bound {space.packing_bound()}; upper bound {upper}"]
    nodes = 0
    for s in range(upper, 0, -1):
        cert = partition_search(q, n, parts, s * q, cap=cap)
        nodes += cert.nodes
        if cert.outcome == "found":
            notes.append(f"{s} orbits per part found")
            return cert.model_copy(update={
                "problem": problem, "nodes": nodes, "notes": notes + cert.notes,
                "elapsed_seconds": round(time.perf_counter() - started, 3),
            })
        if cert.outcome == "bound_reached":
            notes.append(f"{s} orbits per part undecided within the node cap")
            return SearchCertificate(problem=problem, outcome="bound_reached", nodes=nodes, notes=notes,
                                     elapsed_seconds=round(time.perf_counter() - started, 3))
        notes.append(f"{s} orbits per part refuted")
    return SearchCertificate(problem=problem, outcome="exhausted_negative", nodes=nodes, notes=notes,
                             elapsed_seconds=round(time.perf_counter() - started, 3))
