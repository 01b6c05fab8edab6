"""Labeled graphs of Lyapunov inequalities and their path-completeness.

A graph over the alphabet ``1..m`` has one node per Lyapunov function and
one edge per inequality.  The inequality ``V_j(A_w x) <= V_i(x)`` becomes
the edge ``i -> j`` labeled with the reversed word of ``w``, so that reading
labels along a path spells switching sequences in time order.

A graph is path-complete when every finite word appears as a factor of the
label sequence of some directed path.  Factors may straddle label
boundaries, so the decision procedure works on the letter-expanded graph
where each multi-letter edge is split into a chain of single-letter edges.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import GraphError, InvalidWordError, ResourceLimitError

Word = tuple  # tuple[int, ...], symbols 1-based

DEFAULT_SUBSET_CAP = 2**20
DEFAULT_WORD_CAP = 2**22


def as_word(symbols: Iterable[int], m: int, *, allow_empty: bool = False) -> Word:
    w = tuple(int(x) for x in symbols)
    if not w and not allow_empty:
        raise InvalidWordError("empty word is not a legal label")
    for x in w:
        if not 1 <= x <= m:
            raise InvalidWordError(f"symbol {x} outside alphabet 1..{m}")
    return w


def mirror(w: Sequence[int]) -> Word:
    return tuple(reversed(tuple(w)))


def contains_factor(word: Sequence[int], factor: Sequence[int]) -> bool:
    word, factor = tuple(word), tuple(factor)
    k = len(factor)
    return any(word[i : i + k] == factor for i in range(len(word) - k + 1))


@dataclass(frozen=True)
class Edge:
    src: Hashable
    dst: Hashable
    label: Word


@dataclass(frozen=True)
class LabeledGraph:
    alphabet_size: int
    nodes: tuple
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if self.alphabet_size < 1:
            raise GraphError("alphabet_size must be >= 1")
        if not self.nodes:
            raise GraphError("a graph needs at least one node")
        if len(set(self.nodes)) != len(self.nodes):
            raise GraphError("duplicate node ids")
        known = set(self.nodes)
        edges = []
        for e in self.edges:
            if not isinstance(e, Edge):
                src, dst, label = e
                e = Edge(src, dst, tuple(label))
            if e.src not in known or e.dst not in known:
                raise GraphError(f"edge {e.src}->{e.dst} references an unknown node")
            edges.append(Edge(e.src, e.dst, as_word(e.label, self.alphabet_size)))
        object.__setattr__(self, "edges", tuple(edges))

    def index(self, node) -> int:
        return self.nodes.index(node)

    def out_edges(self, node) -> list[Edge]:
        return [e for e in self.edges if e.src == node]

    @property
    def single_letter(self) -> bool:
        return all(len(e.label) == 1 for e in self.edges)

    def with_edge(self, src, dst, label) -> "LabeledGraph":
        return LabeledGraph(self.alphabet_size, self.nodes, self.edges + (Edge(src, dst, tuple(label)),))


@dataclass(frozen=True)
class Nfa:
    alphabet_size: int
    states: tuple
    initial: tuple
    accepting: tuple
    transitions: tuple = ()

    def __post_init__(self):
        for name in ("states", "initial", "accepting"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.states:
            raise GraphError("an automaton needs at least one state")
        known = set(self.states)
        if not set(self.initial) <= known or not set(self.accepting) <= known:
            raise GraphError("initial and accepting states must be states")
        trans = []
        for s, a, t in self.transitions:
            if s not in known or t not in known:
                raise GraphError(f"transition {s}-{a}->{t} references an unknown state")
            (a,) = as_word([a], self.alphabet_size)
            trans.append((s, a, t))
        object.__setattr__(self, "transitions", tuple(trans))

    def accepts(self, word: Sequence[int]) -> bool:
        current = set(self.initial)
        for a in word:
            current = {t for s, b, t in self.transitions if b == a and s in current}
        return bool(current & set(self.accepting))


@dataclass(frozen=True)
class PathCompletenessVerdict:
    complete: bool
    missing_word: Word | None = None
    # nonempty subsets reached by the determinization (0 for the brute-force oracle)
    subsets: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Expansion:
    graph: LabeledGraph
    node_map: dict  # original node -> expanded node
    # intermediate node -> (index of the original edge, position in its label)
    intermediates: dict


def inequalities_to_graph(
    inequalities: Iterable[tuple], alphabet_size: int, nodes: Sequence | None = None
) -> LabeledGraph:
    """Build the graph of ``(i, j, w)`` triples meaning ``V_j(A_w x) <= V_i(x)``.

    Each triple becomes an edge ``i -> j`` labeled ``mirror(w)``.  Nodes are
    taken from ``nodes`` first, then in order of first appearance.
    """
    order = list(nodes or [])
    edges = []
    for i, j, w in inequalities:
        w = as_word(w, alphabet_size)
        for v in (i, j):
            if v not in order:
                order.append(v)
        edges.append(Edge(i, j, mirror(w)))
    if not order:
        raise GraphError("no nodes declared")
    return LabeledGraph(alphabet_size, tuple(order), tuple(edges))


def expand_labels(g: LabeledGraph) -> Expansion:
    """Split every multi-letter edge into a chain of single-letter edges.

    Original node ids are kept.  The ``t-1`` fresh nodes on the chain of edge
    number ``e`` are named ``"{src}>{dst}#{e}.{k}"`` for ``k = 1..t-1``.
    """
    nodes = list(g.nodes)
    taken = {str(v) for v in nodes} | set(nodes)
    edges = []
    intermediates = {}
    for idx, e in enumerate(g.edges):
        if len(e.label) == 1:
            edges.append(e)
            continue
        chain = [e.src]
        for k in range(1, len(e.label)):
            name = f"{e.src}>{e.dst}#{idx}.{k}"
            while name in taken:
                name += "'"
            taken.add(name)
            nodes.append(name)
            intermediates[name] = (idx, k)
            chain.append(name)
        chain.append(e.dst)
        for k, a in enumerate(e.label):
            edges.append(Edge(chain[k], chain[k + 1], (a,)))
    expanded = LabeledGraph(g.alphabet_size, tuple(nodes), tuple(edges))
    return Expansion(expanded, {v: v for v in g.nodes}, intermediates)


def _letter_successors(g: LabeledGraph) -> list[list[int]]:
    """succ[a-1][v] = bitmask of nodes reachable from node v by letter a."""
    index = {v: i for i, v in enumerate(g.nodes)}
    succ = [[0] * len(g.nodes) for _ in range(g.alphabet_size)]
    for e in g.edges:
        succ[e.label[0] - 1][index[e.src]] |= 1 << index[e.dst]
    return succ


def _step(mask: int, row: list[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= row[i]
        mask >>= 1
        i += 1
    return out


def check_path_complete(g: LabeledGraph, cap_subsets: int = DEFAULT_SUBSET_CAP) -> PathCompletenessVerdict:
    """Decide path-completeness; return the shortlex-least missing word if any.

    Every node of the expanded graph is a legal start, so the search starts
    from the full node set and follows letters; a word is missing exactly
    when it drives this set to the empty set.  BFS visits words in shortlex
    order, so the first word found is the shortest and, among those, the
    least by symbol index.
    """
    h = expand_labels(g).graph
    succ = _letter_successors(h)
    start = (1 << len(h.nodes)) - 1
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for a in range(1, h.alphabet_size + 1):
            nxt = _step(cur, succ[a - 1])
            if nxt == 0:
                word = [a]
                node = cur
                while parent[node] is not None:
                    node, b = parent[node]
                    word.append(b)
                return PathCompletenessVerdict(False, tuple(reversed(word)), len(parent))
            if nxt not in parent:
                if len(parent) >= cap_subsets:
                    raise ResourceLimitError(
                        f"subset construction exceeded {cap_subsets} subsets"
                    )
                parent[nxt] = (cur, a)
                queue.append(nxt)
    return PathCompletenessVerdict(True, None, len(parent))


def is_readable(g: LabeledGraph, word: Sequence[int]) -> bool:
    """Explicit path search: is ``word`` a factor of the labels along some path?

    Works on the original (possibly multi-letter) labels: the word may start
    at any offset inside the first edge's label and continue through
    successive edges.
    """
    word = tuple(word)
    if not word:
        return True
    out = {v: [] for v in g.nodes}
    for e in g.edges:
        out[e.src].append(e)
    dead = set()

    def follow(label, offset, pos, dst):
        while offset < len(label) and pos < len(word):
            if label[offset] != word[pos]:
                return False
            offset += 1
            pos += 1
        if pos == len(word):
            return True
        return continue_from(dst, pos)

    def continue_from(node, pos):
        if (node, pos) in dead:
            return False
        for e in out[node]:
            if follow(e.label, 0, pos, e.dst):
                return True
        dead.add((node, pos))
        return False

    for e in g.edges:
        for offset in range(len(e.label)):
            if follow(e.label, offset, 0, e.dst):
                return True
    return False


def brute_force_path_complete(
    g: LabeledGraph, max_len: int, cap_words: int = DEFAULT_WORD_CAP
) -> PathCompletenessVerdict:
    """Enumerate all words up to ``max_len`` and test each by path search.

    Intended as an independent oracle for :func:`check_path_complete` on
    small graphs.  ``complete=True`` only means no word of length
    ``<= max_len`` is missing.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    m = g.alphabet_size
    total = sum(m**k for k in range(1, max_len + 1))
    if total > cap_words:
        raise ResourceLimitError(f"{total} words exceed the cap of {cap_words}")
    for length in range(1, max_len + 1):
        for w in itertools.product(range(1, m + 1), repeat=length):
            if not is_readable(g, w):
                return PathCompletenessVerdict(False, w)
    return PathCompletenessVerdict(True, None)


def reduce_universality(n: Nfa) -> LabeledGraph:
    """Graph that is path-complete iff ``n`` accepts every word.

    States become nodes and transitions become single-letter edges.  A fresh
    letter ``m+1`` links every accepting state to every initial state.
    """
    f = n.alphabet_size + 1
    edges = [Edge(s, t, (a,)) for s, a, t in n.transitions]
    edges += [Edge(a, s, (f,)) for a in n.accepting for s in n.initial]
    return LabeledGraph(f, n.states, tuple(edges))


def nfa_universal(n: Nfa, cap_subsets: int = DEFAULT_SUBSET_CAP) -> bool:
    """Subset construction from the initial set, looking for a rejecting subset."""
    index = {s: i for i, s in enumerate(n.states)}
    succ = [[0] * len(n.states) for _ in range(n.alphabet_size)]
    for s, a, t in n.transitions:
        succ[a - 1][index[s]] |= 1 << index[t]
    accepting = 0
    for s in n.accepting:
        accepting |= 1 << index[s]
    start = 0
    for s in n.initial:
        start |= 1 << index[s]
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        if not cur & accepting:
            return False
        for a in range(n.alphabet_size):
            nxt = _step(cur, succ[a])
            if nxt not in seen:
                if len(seen) >= cap_subsets:
                    raise ResourceLimitError(
                        f"subset construction exceeded {cap_subsets} subsets"
                    )
                seen.add(nxt)
                stack.append(nxt)
    return True
