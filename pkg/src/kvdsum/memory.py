"""Working-memory simulation over propositions.

Reading proceeds in cycles, one sentence per cycle. Each cycle attaches the
sentence's propositions to the current memory tree via argument overlap,
prunes the tree back to the memory limit with the leading-edge strategy
(most general plus most recent nodes), re-roots it at the node that
references the most surviving material, and records one occurrence per
surviving node. Propositions dropped from the tree go to a long-term store;
at most two of them per cycle can be recalled to re-connect otherwise
unattachable input. The simulator is reset at each section boundary but the
long-term store spans the whole document.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import Document, SectionKind
from .propositions import PredKind, Proposition, shares_argument, sharing_lemmas

RECALL_BUDGET_PER_CYCLE = 2


@dataclass(frozen=True)
class Occurrence:
    prop_id: int
    cycle: int
    section: SectionKind
    depth: int
    degree: int
    subtree_size: int


@dataclass(frozen=True)
class TraceNode:
    id: int
    parent: int | None
    depth: int
    degree: int
    subtree: int
    recalled: bool


@dataclass(frozen=True)
class CycleSnapshot:
    cycle: int
    section: SectionKind
    sentence_id: int
    root: int | None
    nodes: tuple[TraceNode, ...]

    def kept_ids(self) -> frozenset[int]:
        return frozenset(n.id for n in self.nodes)

    def recalled_ids(self) -> frozenset[int]:
        return frozenset(n.id for n in self.nodes if n.recalled)


@dataclass(frozen=True)
class SimulationTrace:
    document_id: str
    memory_limit: int
    cycles: tuple[CycleSnapshot, ...]
    occurrences: tuple[Occurrence, ...]

    def kept_sets(self) -> list[frozenset[int]]:
        return [c.kept_ids() for c in self.cycles]

    def roots(self) -> list[int | None]:
        return [c.root for c in self.cycles]

    def to_dict(self) -> dict:
        return {
            "article_id": self.document_id,
            "memory_limit": self.memory_limit,
            "cycles": [
                {
                    "cycle": c.cycle,
                    "section": c.section.value,
                    "sentence_id": c.sentence_id,
                    "root": c.root,
                    "nodes": [
                        {
                            "id": n.id,
                            "parent": n.parent,
                            "depth": n.depth,
                            "degree": n.degree,
                            "subtree": n.subtree,
                            "recalled": n.recalled,
                        }
                        for n in c.nodes
                    ],
                }
                for c in self.cycles
            ],
        }


class MemoryTree:
    """Rooted tree over proposition ids with per-node recency."""

    def __init__(self):
        self.parent: dict[int, int] = {}   # root maps to itself
        self.root: int | None = None
        self.recency: dict[int, int] = {}

    @property
    def nodes(self) -> set[int]:
        return set(self.parent)

    def __len__(self) -> int:
        return len(self.parent)

    def __contains__(self, node: int) -> bool:
        return node in self.parent

    def children(self, node: int) -> list[int]:
        return sorted(n for n, p in self.parent.items() if p == node and n != node)

    def add(self, node: int, parent: int | None, cycle: int) -> None:
        if parent is None:
            self.parent[node] = node
            self.root = node
        else:
            self.parent[node] = parent
        self.recency[node] = cycle

    def remove(self, node: int) -> None:
        del self.parent[node]

    def depths(self) -> dict[int, int]:
        out: dict[int, int] = {}
        if self.root is None:
            return out
        stack = [(self.root, 1)]
        while stack:
            node, d = stack.pop()
            out[node] = d
            stack.extend((c, d + 1) for c in self.children(node))
        return out

    def subtree_nodes(self, node: int) -> set[int]:
        out = set()
        stack = [node]
        while stack:
            cur = stack.pop()
            out.add(cur)
            stack.extend(self.children(cur))
        return out

    def degree(self, node: int) -> int:
        deg = len(self.children(node))
        if node != self.root:
            deg += 1
        return deg


class Simulator:
    """One reading simulation over a single document's propositions."""

    def __init__(self, props: list[Proposition], memory_limit: int):
        if memory_limit < 1:
            raise ValueError("memory limit must be >= 1")
        self.memory_limit = memory_limit
        self.props = {p.id: p for p in props}
        self.forgotten: set[int] = set()
        self.tree = MemoryTree()
        self._share_cache: dict[tuple[int, int], bool] = {}

    # -- proposition relations -------------------------------------------------

    def _shares(self, a: int, b: int) -> bool:
        key = (a, b) if a < b else (b, a)
        hit = self._share_cache.get(key)
        if hit is None:
            hit = shares_argument(self.props[a], self.props[b])
            self._share_cache[key] = hit
        return hit

    def _ref_linked(self, a: int, b: int) -> bool:
        return (b in self.props[a].ref_targets()
                or a in self.props[b].ref_targets())

    def _is_modifier(self, node: int) -> bool:
        return self.props[node].kind is PredKind.MODIFIER

    # -- attachment --------------------------------------------------------------

    def _find_target(self, prop_id: int) -> int | None:
        """Best admissible attachment point for a proposition.

        Reference links always qualify; lexical overlap qualifies unless the
        candidate is a unary modifier. Reference beats overlap, then greater
        recency, then greater id.
        """
        best = None
        for node in self.tree.nodes:
            if node == prop_id:
                continue
            ref = self._ref_linked(prop_id, node)
            if not ref and (self._is_modifier(node) or not self._shares(prop_id, node)):
                continue
            rank = (ref, self.tree.recency[node], node)
            if best is None or rank > best[0]:
                best = (rank, node)
        return None if best is None else best[1]

    def _connectivity(self, prop_id: int, pool: list[int]) -> int:
        others = set(pool) | self.tree.nodes
        others.discard(prop_id)
        return sum(1 for q in others if self._shares(prop_id, q))

    def _recall_chain(self, prop_id: int, budget: int) -> list[int]:
        """Forgotten linkers (at most two, nearest the tree first) that would
        connect an otherwise unattachable proposition."""

        def ranked(candidates: list[int], anchor: int) -> list[int]:
            return sorted(
                candidates,
                key=lambda l: (self._ref_linked(l, anchor),
                               self.tree.recency.get(l, 0), l),
                reverse=True,
            )

        if budget < 1:
            return []
        near_p = [l for l in self.forgotten if self._shares(l, prop_id)]
        for linker in ranked(near_p, prop_id):
            if self._find_target(linker) is not None:
                return [linker]
        if budget < 2:
            return []
        for second in ranked(near_p, prop_id):
            bridge = [l for l in self.forgotten
                      if l != second and self._shares(l, second)]
            for first in ranked(bridge, second):
                if self._find_target(first) is not None:
                    return [first, second]
        return []

    def _place(self, prop_id: int, target: int | None, cycle: int,
               pre_existing: set[int], recalled: set[int],
               receivers: Counter) -> None:
        if target is None and self.tree.root is not None:
            target = self.tree.root
        self.tree.add(prop_id, target, cycle)
        if (target is not None and target in pre_existing
                and target not in recalled and prop_id not in recalled):
            receivers[target] += 1

    def _attach_all(self, pending: list[int], cycle: int, pre_existing: set[int],
                    recalled: set[int], receivers: Counter,
                    allow_recall: bool, recall_budget: int) -> int:
        """Pass loop: attach in id order, retry deferred props after others
        land, and fall back to the best-connected prop under the root when a
        full pass stalls. Returns the remaining recall budget."""
        unplaced = sorted(pending)
        while unplaced:
            progress = False
            for prop_id in list(unplaced):
                target = self._find_target(prop_id)
                if target is None and allow_recall and recall_budget > 0:
                    chain = self._recall_chain(prop_id, recall_budget)
                    if chain:
                        for linker in chain:
                            self.forgotten.discard(linker)
                            recalled.add(linker)
                            self._place(linker, self._find_target(linker), cycle,
                                        pre_existing, recalled, receivers)
                            recall_budget -= 1
                        target = self._find_target(prop_id)
                if target is not None:
                    self._place(prop_id, target, cycle, pre_existing, recalled,
                                receivers)
                    unplaced.remove(prop_id)
                    progress = True
            if unplaced and not progress:
                seed = max(unplaced,
                           key=lambda p: (self._connectivity(p, unplaced), -p))
                self._place(seed, None if self.tree.root is None else self.tree.root,
                            cycle, pre_existing, recalled, receivers)
                unplaced.remove(seed)
        return recall_budget

    def attach(self, incoming: list[Proposition], cycle: int) -> set[int]:
        """Attach one sentence's propositions; returns ids recalled this cycle.

        If afterwards exactly one pre-existing (non-recalled) node gained new
        children and it is not the root, the tree is re-rooted there and the
        displaced older nodes are re-attached.
        """
        pre_existing = set(self.tree.nodes)
        recalled: set[int] = set()
        receivers: Counter = Counter()
        self._attach_all([p.id for p in incoming], cycle, pre_existing, recalled,
                         receivers, allow_recall=True,
                         recall_budget=RECALL_BUDGET_PER_CYCLE)

        gained = [n for n, c in receivers.items() if c > 0]
        if len(gained) == 1 and gained[0] != self.tree.root:
            self._reroot_at_attach(gained[0], cycle, pre_existing)
        return recalled

    def _reroot_at_attach(self, new_root: int, cycle: int,
                          pre_existing: set[int]) -> None:
        keep = self.tree.subtree_nodes(new_root)
        displaced = sorted(n for n in self.tree.nodes if n not in keep)
        for node in displaced:
            self.tree.remove(node)
        self.tree.parent[new_root] = new_root
        self.tree.root = new_root
        # displaced nodes re-enter through the normal attachment machinery,
        # with recency refreshed to the current cycle
        self._attach_all(displaced, cycle, set(), set(), Counter(),
                         allow_recall=False, recall_budget=0)

    # -- pruning and re-rooting -----------------------------------------------

    def prune_leading_edge(self) -> frozenset[int]:
        """Keep the recency-greedy root-to-leaf path, topped up with the
        shallowest/most recent remaining nodes; forget the rest."""
        tree = self.tree
        if tree.root is None:
            return frozenset()
        path = [tree.root]
        while True:
            kids = tree.children(path[-1])
            if not kids:
                break
            path.append(max(kids, key=lambda n: (tree.recency[n], n)))
        limit = self.memory_limit
        if len(path) >= limit:
            kept = set(path[:limit])
        else:
            kept = set(path)
            depths = tree.depths()
            rest = sorted((n for n in tree.nodes if n not in kept),
                          key=lambda n: (depths[n], -tree.recency[n], -n))
            kept.update(rest[:limit - len(path)])

        ancestors = dict(tree.parent)
        for node in sorted(tree.nodes - kept):
            self.forgotten.add(node)
            tree.remove(node)
        # a filled node's parent may have been pruned: re-hang on the nearest
        # kept ancestor
        for node in list(tree.nodes):
            if node == tree.root or tree.parent[node] in tree.parent:
                continue
            cur = ancestors[node]
            while cur not in tree.parent:
                cur = ancestors[cur]
            tree.parent[node] = cur
        return frozenset(kept)

    def reroot(self) -> None:
        """Re-root at the kept node referencing the most kept nodes; the old
        root wins ties it participates in, else the smallest id does."""
        tree = self.tree
        if tree.root is None or len(tree) == 1:
            return
        kept = tree.nodes
        scores = {
            n: sum(1 for t in self.props[n].ref_targets() if t in kept)
            for n in kept
        }
        best = max(scores.values())
        if scores[tree.root] == best:
            return
        new_root = min(n for n, s in scores.items() if s == best)
        adjacency: dict[int, set[int]] = {n: set() for n in kept}
        for node, parent in tree.parent.items():
            if node != parent:
                adjacency[node].add(parent)
                adjacency[parent].add(node)
        parents = {new_root: new_root}
        queue = [new_root]
        while queue:
            cur = queue.pop(0)
            for nxt in sorted(adjacency[cur]):
                if nxt not in parents:
                    parents[nxt] = cur
                    queue.append(nxt)
        tree.parent = parents
        tree.root = new_root

    # -- recording ----------------------------------------------------------------

    def record_occurrences(self, cycle: int, section: SectionKind) -> list[Occurrence]:
        tree = self.tree
        depths = tree.depths()
        return [
            Occurrence(
                prop_id=node,
                cycle=cycle,
                section=section,
                depth=depths[node],
                degree=tree.degree(node),
                subtree_size=len(tree.subtree_nodes(node)),
            )
            for node in sorted(tree.nodes)
        ]

    def snapshot(self, cycle: int, section: SectionKind, sentence_id: int,
                 recalled: set[int]) -> CycleSnapshot:
        tree = self.tree
        depths = tree.depths()
        nodes = tuple(
            TraceNode(
                id=node,
                parent=None if node == tree.root else tree.parent[node],
                depth=depths[node],
                degree=tree.degree(node),
                subtree=len(tree.subtree_nodes(node)),
                recalled=node in recalled,
            )
            for node in sorted(tree.nodes)
        )
        return CycleSnapshot(cycle=cycle, section=section, sentence_id=sentence_id,
                             root=tree.root, nodes=nodes)

    def flush_tree(self) -> None:
        """Forget everything currently held (section boundary or end of text)."""
        for node in list(self.tree.nodes):
            self.forgotten.add(node)
            self.tree.remove(node)
        self.tree.root = None


def run_simulation(doc: Document, props: list[Proposition],
                   memory_limit: int) -> SimulationTrace:
    """Simulate reading the whole document, resetting the tree per section
    while keeping one long-term store; cycle numbering is document-global."""
    by_sentence: dict[int, list[Proposition]] = {}
    for prop in props:
        by_sentence.setdefault(prop.sentence_id, []).append(prop)

    sim = Simulator(props, memory_limit)
    cycles: list[CycleSnapshot] = []
    occurrences: list[Occurrence] = []
    cycle = 0
    for kind, sentence_range in doc.sections:
        sim.flush_tree()
        for sentence_id in sentence_range:
            cycle += 1
            incoming = by_sentence.get(sentence_id, [])
            recalled = sim.attach(incoming, cycle) if incoming else set()
            sim.prune_leading_edge()
            sim.reroot()
            occurrences.extend(sim.record_occurrences(cycle, kind))
            cycles.append(sim.snapshot(cycle, kind, sentence_id, recalled))
    sim.flush_tree()
    return SimulationTrace(
        document_id=doc.id,
        memory_limit=memory_limit,
        cycles=tuple(cycles),
        occurrences=tuple(occurrences),
    )
