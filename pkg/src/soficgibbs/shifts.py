"""Shift spaces presented by finite directed graphs.

An :class:`EdgeShift` is a finite directed multigraph whose bi-infinite edge
paths are the points of a shift of finite type; the symbols of the shift are
the edge ids.  Structural invariants (essentiality, irreducibility, period,
cyclically moving vertex classes) and exact language enumeration live here.

All values are immutable after construction and every operation is a pure
function of its inputs, so they can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import EnumerationCapError, ReducibleShiftError

Word = tuple[str, ...]

DEFAULT_ENUMERATION_CAP = 500_000

# Separator used when composite ids are formed from paths of edges.
PATH_SEP = "~"


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite set of distinct symbol tokens."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(str(s) for s in self.symbols))
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._symbol_set

    @cached_property
    def _symbol_set(self):
        return frozenset(self.symbols)

    @cached_property
    def _single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)

    def word(self, text: str) -> Word:
        """Parse a word literal.

        One-character alphabets read plain strings ("010"); otherwise tokens
        are '.'-separated ("e1.e2").  The empty string is the empty word.
        """
        if text == "":
            return ()
        if "." in text or not self._single_char:
            parts = tuple(text.split("."))
        else:
            parts = tuple(text)
        for s in parts:
            if s not in self:
                raise ValueError(f"symbol {s!r} not in alphabet")
        return parts

    def format(self, word: Iterable[str]) -> str:
        word = tuple(word)
        if self._single_char:
            return "".join(word)
        return ".".join(word)


def format_word(word: Iterable[str]) -> str:
    """Join a word for display: plain when all tokens are single characters."""
    word = tuple(str(s) for s in word)
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return ".".join(word)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    id: str


@dataclass(frozen=True)
class EdgeShift:
    """A finite directed multigraph presenting an SFT by its bi-infinite paths.

    Vertices and edges are kept in sorted order so that every enumeration in
    the library is deterministic.  The empty graph is a legal value and
    presents the empty shift.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        vertices = tuple(sorted(str(v) for v in self.vertices))
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex")
        edges = tuple(sorted(self.edges, key=lambda e: e.id))
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate edge id")
        vset = set(vertices)
        for e in edges:
            if e.source not in vset or e.target not in vset:
                raise ValueError(f"edge {e.id!r} has undeclared endpoint")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

    # -- basic structure ---------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @cached_property
    def vertex_index(self) -> Mapping[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_by_id(self) -> Mapping[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _out(self) -> Mapping[str, tuple[Edge, ...]]:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def _in(self) -> Mapping[str, tuple[Edge, ...]]:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.target].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._in[v]

    def alphabet(self) -> Alphabet:
        """The symbol alphabet of the shift: the edge ids."""
        return Alphabet(tuple(e.id for e in self.edges))

    def adjacency(self) -> np.ndarray:
        """Vertex-indexed matrix of edge multiplicities."""
        n = len(self.vertices)
        a = np.zeros((n, n), dtype=np.int64)
        idx = self.vertex_index
        for e in self.edges:
            a[idx[e.source], idx[e.target]] += 1
        return a

    # -- essentiality ------------------------------------------------------

    def is_essential(self) -> bool:
        return all(self._out[v] and self._in[v] for v in self.vertices)

    def essential(self) -> "EdgeShift":
        """Prune vertices not on bi-infinite paths (iterated degree pruning)."""
        alive = set(self.vertices)
        out_deg = {v: len(self._out[v]) for v in self.vertices}
        in_deg = {v: len(self._in[v]) for v in self.vertices}
        changed = True
        while changed:
            changed = False
            for v in sorted(alive):
                if out_deg[v] == 0 or in_deg[v] == 0:
                    alive.discard(v)
                    for e in self._out[v]:
                        if e.target in alive:
                            in_deg[e.target] -= 1
                    for e in self._in[v]:
                        if e.source in alive:
                            out_deg[e.source] -= 1
                    changed = True
        edges = tuple(e for e in self.edges if e.source in alive and e.target in alive)
        return EdgeShift(tuple(sorted(alive)), edges)

    # -- connectivity and period -------------------------------------------

    def strongly_connected_components(self) -> tuple[tuple[str, ...], ...]:
        """Kosaraju SCCs, deterministic order."""
        order = []
        seen = set()
        for root in self.vertices:
            if root in seen:
                continue
            stack = [(root, iter(self._out[root]))]
            seen.add(root)
            while stack:
                v, it = stack[-1]
                advanced = False
                for e in it:
                    if e.target not in seen:
                        seen.add(e.target)
                        stack.append((e.target, iter(self._out[e.target])))
                        advanced = True
                        break
                if not advanced:
                    order.append(v)
                    stack.pop()
        comp_of = {}
        comps = []
        for root in reversed(order):
            if root in comp_of:
                continue
            comp = []
            todo = [root]
            comp_of[root] = len(comps)
            while todo:
                v = todo.pop()
                comp.append(v)
                for e in self._in[v]:
                    if e.source not in comp_of:
                        comp_of[e.source] = len(comps)
                        todo.append(e.source)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    def is_irreducible(self) -> bool:
        """True iff the graph is a single strongly connected component."""
        if self.is_empty:
            return False
        comps = self.strongly_connected_components()
        return len(comps) == 1 and len(comps[0]) == len(self.vertices) and bool(self.edges)

    # -- language ----------------------------------------------------------

    def count_words(self, n: int) -> int:
        """Exact number of length-n words over the edge alphabet."""
        if self.is_empty:
            return 0
        if n == 0:
            return 1
        a = np.array(self.adjacency(), dtype=object)
        power = np.identity(len(self.vertices), dtype=object)
        for _ in range(n):
            power = power @ a
        return int(power.sum())

    def words_of_length(self, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Word]:
        """All length-n edge-id words, sorted lexicographically."""
        if self.is_empty:
            return []
        if n == 0:
            return [()]
        count = self.count_words(n)
        if count > cap:
            raise EnumerationCapError(count, cap)
        words = []
        stack = [((), v) for v in reversed(self.vertices)]
        while stack:
            prefix, v = stack.pop()
            if len(prefix) == n:
                words.append(prefix)
                continue
            for e in reversed(self._out[v]):
                stack.append((prefix + (e.id,), e.target))
        return sorted(words)

    def in_language(self, word: Word) -> bool:
        """True iff the word is an edge path (all words of an essential graph
        extend to bi-infinite paths)."""
        return self.path_endpoints(word) is not None

    def path_endpoints(self, word: Word):
        """(source, target) of the path spelled by the word, or None."""
        if not word:
            return None
        prev = None
        for eid in word:
            e = self.edge_by_id.get(eid)
            if e is None or (prev is not None and e.source != prev):
                return None
            prev = e.target
        return self.edge_by_id[word[0]].source, prev


@dataclass(frozen=True)
class CyclicStructure:
    """Period p of an irreducible graph with its cyclically moving classes."""

    shift: EdgeShift
    period: int
    class_of: Mapping[str, int]

    def __post_init__(self):
        p = self.period
        for e in self.shift.edges:
            if (self.class_of[e.source] + 1) % p != self.class_of[e.target]:
                raise ValueError("classes do not advance cyclically along edges")

    def class_vertices(self, k: int) -> tuple[str, ...]:
        return tuple(v for v in self.shift.vertices if self.class_of[v] == k % self.period)


def cyclic_structure(shift: EdgeShift) -> CyclicStructure:
    """Period (gcd of cycle lengths via BFS level coloring) and vertex classes."""
    if not shift.is_irreducible():
        raise ReducibleShiftError("requires irreducible shift")
    root = shift.vertices[0]
    level = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for e in shift.out_edges(v):
                if e.target not in level:
                    level[e.target] = level[v] + 1
                    nxt.append(e.target)
        frontier = nxt
    g = 0
    for e in shift.edges:
        g = math.gcd(g, level[e.source] + 1 - level[e.target])
    class_of = {v: level[v] % g for v in shift.vertices}
    return CyclicStructure(shift, g, class_of)


def component_periods(shift: EdgeShift) -> dict[tuple[str, ...], int]:
    """Periods of the essential strongly connected components.

    Reducible shifts have no global period; this reports one per component
    (components without edges are skipped).
    """
    periods = {}
    for comp in shift.strongly_connected_components():
        keep = set(comp)
        edges = tuple(e for e in shift.edges
                      if e.source in keep and e.target in keep)
        if not edges:
            continue
        sub = EdgeShift(comp, edges)
        periods[comp] = cyclic_structure(sub).period
    return periods


def sft_from_forbidden_words(alphabet: Alphabet, forbidden: Iterable[Word],
                             window: int,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> EdgeShift:
    """Essential edge shift of the SFT over `alphabet` avoiding the given words.

    Vertices are the clean words of length window-1; an edge joins u to v when
    they overlap progressively and the combined window of length `window`
    avoids every forbidden word.  The result may be empty.
    """
    shift, _ = _forbidden_graph(alphabet, forbidden, window, cap)
    return shift


def _forbidden_graph(alphabet, forbidden, window, cap=DEFAULT_ENUMERATION_CAP):
    if window < 2:
        raise ValueError("window must be at least 2")
    forbidden = {tuple(w) for w in forbidden}
    for w in forbidden:
        if len(w) > window:
            raise ValueError(f"forbidden word {format_word(w)!r} longer than window {window}")
        for s in w:
            if s not in alphabet:
                raise ValueError(f"forbidden word symbol {s!r} not in alphabet")

    def clean(word):
        for f in forbidden:
            L = len(f)
            if L == 0:
                return False
            if any(word[i:i + L] == f for i in range(len(word) - L + 1)):
                return False
        return True

    count = len(alphabet) ** (window - 1)
    if count > cap:
        raise EnumerationCapError(count, cap)
    prefixes = [()]
    for _ in range(window - 1):
        prefixes = [p + (s,) for p in prefixes for s in alphabet if clean(p + (s,))]
    vertices = [alphabet.format(p) for p in prefixes]
    edges = []
    labels = {}
    for u in prefixes:
        for s in alphabet:
            full = u + (s,)
            if not clean(full):
                continue
            eid = alphabet.format(full)
            edges.append(Edge(alphabet.format(u), alphabet.format(full[1:]), eid))
            labels[eid] = s
    shift = EdgeShift(tuple(vertices), tuple(edges)).essential()
    labels = {eid: labels[eid] for eid in (e.id for e in shift.edges)}
    return shift, labels


def higher_power_shift(shift: EdgeShift, p: int) -> EdgeShift:
    """Same vertices, edges the directed paths of length p."""
    if p < 1:
        raise ValueError("power must be positive")
    if p == 1:
        return shift
    edges = tuple(Edge(src, tgt, PATH_SEP.join(path))
                  for path, src, tgt in _paths_of_length(shift, p))
    return EdgeShift(shift.vertices, edges)


def _paths_of_length(shift, p):
    """Yield (edge-id path, source, target) for every directed path of length p."""
    stack = [((), v, v) for v in reversed(shift.vertices)]
    while stack:
        path, src, at = stack.pop()
        if len(path) == p:
            yield path, src, at
            continue
        for e in reversed(shift.out_edges(at)):
            stack.append((path + (e.id,), src, e.target))


def cyclic_class_shift(structure: CyclicStructure, class_index: int = 0):
    """Restriction of the p-th higher power shift to one cyclic class.

    Returns the restricted EdgeShift together with the map from composite edge
    ids to the underlying edge-id paths.
    """
    shift = structure.shift
    p = structure.period
    keep = set(structure.class_vertices(class_index))
    edges = []
    expansion = {}
    for path, src, tgt in _paths_of_length(shift, p):
        if src in keep:
            eid = PATH_SEP.join(path)
            edges.append(Edge(src, tgt, eid))
            expansion[eid] = path
    restricted = EdgeShift(tuple(sorted(keep)), tuple(edges))
    return restricted, expansion
