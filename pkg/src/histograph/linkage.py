"""Linkage structures derived from the citation matrix: co-citation pairs,
bibliographic-coupling pairs, component clustering, and reference levels."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .network import CitationNetwork

CLUSTER_MODES = ("cited", "citing")


@dataclass(frozen=True)
class LinkPair:
    """Two nodes tied by shared neighbors; witnesses are the nodes that
    co-cite them (co-citation) or that both cite (coupling)."""

    a: int
    b: int
    witnesses: tuple[int, ...]

    @property
    def strength(self) -> int:
        return len(self.witnesses)


def _pairs_from_witnesses(member_sets, min_strength: int) -> list[LinkPair]:
    # Per-witness enumeration: output-sensitive on sparse networks, unlike
    # the all-pairs intersection the tests use as oracle.
    acc: dict[tuple[int, int], set[int]] = {}
    for witness, members in member_sets:
        for a, b in combinations(sorted(members), 2):
            acc.setdefault((a, b), set()).add(witness)
    pairs = [
        LinkPair(a=a, b=b, witnesses=tuple(sorted(ws)))
        for (a, b), ws in acc.items()
        if len(ws) >= min_strength
    ]
    pairs.sort(key=lambda p: (-p.strength, p.a, p.b))
    return pairs


def cocitations(net: CitationNetwork, min_strength: int = 1) -> list[LinkPair]:
    """Pairs of nodes cited together; strength = number of joint citers."""
    if min_strength < 1:
        raise ValueError("min_strength must be >= 1")
    return _pairs_from_witnesses(
        ((n.node_id, n.cited_nodes) for n in net.nodes), min_strength
    )


def bibliographic_couplings(net: CitationNetwork, min_strength: int = 1) -> list[LinkPair]:
    """Pairs of nodes sharing cited references; strength = shared count."""
    if min_strength < 1:
        raise ValueError("min_strength must be >= 1")
    return _pairs_from_witnesses(
        ((n.node_id, n.citing_nodes) for n in net.nodes), min_strength
    )


def cluster(net: CitationNetwork, mode: str = "cited", min_strength: int = 2) -> list[list[int]]:
    """Connected components of the pair graph for one linkage mode.

    mode="cited" links documents through co-citation, mode="citing" through
    bibliographic coupling.  Singletons are omitted; components come sorted
    by size descending, then smallest member id.
    """
    if mode not in CLUSTER_MODES:
        raise ValueError(f"mode must be one of {CLUSTER_MODES}, got {mode!r}")
    pairs = cocitations(net, min_strength) if mode == "cited" else bibliographic_couplings(net, min_strength)

    adjacency: dict[int, set[int]] = {}
    for pair in pairs:
        adjacency.setdefault(pair.a, set()).add(pair.b)
        adjacency.setdefault(pair.b, set()).add(pair.a)

    components: list[list[int]] = []
    visited: set[int] = set()
    for start in sorted(adjacency):
        if start in visited:
            continue
        stack = [start]
        found = []
        visited.add(start)
        while stack:
            current = stack.pop()
            found.append(current)
            for neighbor in adjacency[current]:
                if neighbor not in visited:
                    visited.add(neighbor)
                    stack.append(neighbor)
        components.append(sorted(found))
    components.sort(key=lambda comp: (-len(comp), comp[0]))
    return components


@dataclass
class LevelSet:
    """Reference levels of one origin node.

    levels[k] holds the nodes whose shortest cited-reference chain from the
    origin has length k+1 (minimal-level semantics, so the sets are pairwise
    disjoint).  With cumulative=True each level also contains all earlier
    ones, matching the additive reading of "level".
    """

    origin: int
    levels: list[set[int]]
    cumulative: bool = False

    def as_cumulative(self) -> "LevelSet":
        acc: set[int] = set()
        out = []
        for level in self.levels:
            acc = acc | level
            out.append(set(acc))
        return LevelSet(origin=self.origin, levels=out, cumulative=True)


def reference_levels(net: CitationNetwork, origin: int, max_depth: int | None = None) -> LevelSet:
    """BFS over cited edges from origin; stops at max_depth (a level index)
    or when a level comes up empty."""
    if max_depth is not None and max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    origin_node = net.node(origin)  # raises KeyError for unknown ids
    levels: list[set[int]] = []
    seen: set[int] = {origin}
    frontier = set(origin_node.cited_nodes)
    depth = 0
    while frontier and (max_depth is None or depth <= max_depth):
        levels.append(set(frontier))
        seen |= frontier
        nxt: set[int] = set()
        for node_id in frontier:
            nxt |= net.node(node_id).cited_nodes
        frontier = nxt - seen
        depth += 1
    return LevelSet(origin=origin, levels=levels, cumulative=False)


def citation_paths(net: CitationNetwork, origin: int, max_depth: int | None = None) -> list[tuple[int, ...]]:
    """Every citation chain leaving the origin, prefixes included.

    A chain origin -> a -> b appears both as (origin, a) and (origin, a, b),
    so indirect reading paths are inspectable even when their endpoint is
    also cited directly.  Chains are simple (no repeated node) and, when
    max_depth is given, at most max_depth+1 edges long.
    """
    net.node(origin)
    limit = None if max_depth is None else max_depth + 1
    out: list[tuple[int, ...]] = []

    def walk(path: list[int]) -> None:
        if limit is not None and len(path) - 1 >= limit:
            return
        for nxt in sorted(net.node(path[-1]).cited_nodes):
            if nxt in path:
                continue
            path.append(nxt)
            out.append(tuple(path))
            walk(path)
            path.pop()

    walk([origin])
    return out


def format_paths(paths) -> str:
    """Indented text chains, one full chain per line."""
    lines = []
    for path in paths:
        indent = "  " * (len(path) - 2)
        lines.append(indent + " -> ".join(str(n) for n in path))
    return "\n".join(lines) + ("\n" if lines else "")


def pairs_to_csv(pairs) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "strength", "witnesses"])
    for p in pairs:
        writer.writerow([p.a, p.b, p.strength, " ".join(str(w) for w in p.witnesses)])
    return buf.getvalue()


def pairs_to_json(pairs) -> str:
    data = [
        {"a": p.a, "b": p.b, "strength": p.strength, "witnesses": list(p.witnesses)}
        for p in pairs
    ]
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def clusters_to_csv(components) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cluster", "size", "members"])
    for i, comp in enumerate(components, start=1):
        writer.writerow([i, len(comp), " ".join(str(n) for n in comp)])
    return buf.getvalue()


def clusters_to_json(components) -> str:
    data = [{"cluster": i, "size": len(c), "members": list(c)} for i, c in enumerate(components, 1)]
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
