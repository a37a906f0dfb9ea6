"""Classical isomorphism and automorphism of colored graphs.

Color refinement (1-WL with vertex and edge colors) drives an
individualization-refinement backtracking search.  Refinement alone
cannot separate the quantum-isomorphic pairs produced elsewhere in this
package -- they are fractionally isomorphic by construction -- so the
search exhausts candidate branches, pruning on per-class count
imbalances after every refinement round.

The automorphism group is computed as a stabilizer chain: the orbit of a
base vertex is found by explicit searches, the stabilizer recursively,
and the order is the product of the orbit sizes.  No canonical form is
computed; isomorphism is decided by direct search.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import ColoredGraph


@dataclass(frozen=True)
class StableColoring:
    """Vertex classes stable under refinement, with the round history."""

    classes: tuple[int, ...]
    rounds: int
    history: tuple[int, ...]  # class count after each round

    @property
    def num_classes(self) -> int:
        return len(set(self.classes))


@dataclass(frozen=True)
class Bijection:
    """A vertex bijection held as sorted (source, image) pairs."""

    pairs: tuple[tuple[int, int], ...]

    def mapping(self) -> dict[int, int]:
        return dict(self.pairs)

    def inverse(self) -> Bijection:
        return Bijection(tuple(sorted((w, v) for v, w in self.pairs)))

    def apply(self, v: int) -> int:
        return self.mapping()[v]

    def to_json_dict(self) -> dict:
        return {str(v): w for v, w in self.pairs}


class _Instance:
    """Shared refinement workspace for one or two graphs."""

    def __init__(self, graphs: list[ColoredGraph], seeds=None):
        self.offsets = []
        self.side = []
        labels = []
        total = 0
        for gi, G in enumerate(graphs):
            self.offsets.append(total)
            total += G.num_vertices
            self.side.extend([gi] * G.num_vertices)
        self.size = total
        self.nsides = len(graphs)

        color_names = sorted({c.render() for G in graphs
                              for (_, _, c) in G.edges if c is not None})
        color_ids = {name: i + 1 for i, name in enumerate(color_names)}
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(total)]
        for gi, G in enumerate(graphs):
            base = self.offsets[gi]
            for (u, v, c) in G.edges:
                cid = color_ids[c.render()] if c is not None else 0
                self.adj[base + u].append((base + v, cid))
                self.adj[base + v].append((base + u, cid))

        tokens = []
        for gi, G in enumerate(graphs):
            seed = seeds[gi] if seeds else None
            for v in range(G.num_vertices):
                c = G.vertex_colors[v]
                tokens.append((c.render() if c is not None else "",
                               repr(seed[v]) if seed is not None else ""))
        uniq = sorted(set(tokens))
        token_ids = {t: i for i, t in enumerate(uniq)}
        self.init_colors = [token_ids[t] for t in tokens]

    def refine(self, individualized: list[tuple[int, int]] = (),
               balanced: bool = False):
        """Refine to stability; None when `balanced` and some class has
        unequal vertex counts on the two sides (no bijection can exist)."""
        current = list(self.init_colors)
        shift = max(current, default=0) + 1
        for serial, pair in enumerate(individualized):
            for vertex in pair:
                current[vertex] = shift + serial
        history = []
        num_classes = -1
        while True:
            sigs = []
            for v in range(self.size):
                nb = sorted((cid, current[u]) for (u, cid) in self.adj[v])
                sigs.append((current[v], tuple(nb)))
            ids = {s: i for i, s in enumerate(sorted(set(sigs)))}
            current = [ids[s] for s in sigs]
            history.append(len(ids))
            if balanced and self.nsides == 2:
                counts: dict[tuple[int, int], int] = {}
                for v, c in enumerate(current):
                    key = (c, self.side[v])
                    counts[key] = counts.get(key, 0) + 1
                for (c, s), n in counts.items():
                    if counts.get((c, 1 - s), 0) != n:
                        return None, tuple(history)
            if len(ids) == num_classes:
                return current, tuple(history)
            num_classes = len(ids)

    def cells(self, coloring: list[int]) -> dict[int, tuple[list[int], list[int]]]:
        out: dict[int, tuple[list[int], list[int]]] = {}
        for v, c in enumerate(coloring):
            out.setdefault(c, ([], []))[self.side[v]].append(v)
        return out


def refine(G: ColoredGraph, seed=None) -> StableColoring:
    """Stable 1-WL partition of one graph, optionally seeded by per-vertex
    fingerprints (e.g. vertex_invariants)."""
    inst = _Instance([G], seeds=[seed] if seed is not None else None)
    coloring, history = inst.refine()
    return StableColoring(tuple(coloring), len(history), history)


def verify_mapping(G1: ColoredGraph, G2: ColoredGraph,
                   f: Bijection) -> tuple[bool, tuple[int, str] | None]:
    """Check the deterministic win conditions: vertex colors (1) and
    edge/non-edge with equal colors both ways (3).  A non-bijective map is
    an error (it cannot satisfy condition 2)."""
    mapping = f.mapping()
    n1, n2 = G1.num_vertices, G2.num_vertices
    if sorted(mapping) != list(range(n1)) or sorted(mapping.values()) != list(range(n2)):
        raise ValueError("not a bijection between the vertex sets (condition 2)")

    for v, w in mapping.items():
        c1, c2 = G1.vertex_colors[v], G2.vertex_colors[w]
        r1 = c1.render() if c1 is not None else None
        r2 = c2.render() if c2 is not None else None
        if r1 != r2:
            return False, (1, f"vertex color: {v} has {r1}, image {w} has {r2}")

    def edge_map(G: ColoredGraph) -> dict[tuple[int, int], str | None]:
        return {(u, v): (c.render() if c is not None else None)
                for (u, v, c) in G.edges}

    e1, e2 = edge_map(G1), edge_map(G2)
    for (u, v), c in e1.items():
        iu, iv = mapping[u], mapping[v]
        image = e2.get((min(iu, iv), max(iu, iv)), "absent")
        if image != c:
            return False, (3, f"edge ({u},{v}) color {c} maps to {image}")
    inverse = f.inverse().mapping()
    for (u, v), c in e2.items():
        iu, iv = inverse[u], inverse[v]
        preimage = e1.get((min(iu, iv), max(iu, iv)), "absent")
        if preimage != c:
            return False, (3, f"edge ({u},{v}) color {c} pulls back to {preimage}")
    return True, None


def _quick_mismatch(G1: ColoredGraph, G2: ColoredGraph) -> bool:
    if G1.num_vertices != G2.num_vertices or G1.num_edges != G2.num_edges:
        return True

    def vhist(G):
        out: dict[str, int] = {}
        for c in G.vertex_colors:
            key = c.render() if c is not None else ""
            out[key] = out.get(key, 0) + 1
        return out

    def ehist(G):
        out: dict[str, int] = {}
        for (_, _, c) in G.edges:
            key = c.render() if c is not None else ""
            out[key] = out.get(key, 0) + 1
        return out

    return vhist(G1) != vhist(G2) or ehist(G1) != ehist(G2)


def _search(inst: _Instance, n1: int,
            forced: list[tuple[int, int]]) -> Bijection | None:
    coloring, _ = inst.refine(forced, balanced=True)
    if coloring is None:
        return None
    cells = inst.cells(coloring)
    target = None
    for cid, (left, right) in sorted(cells.items()):
        if len(left) != len(right):
            return None
        if len(left) > 1 and (target is None or len(left) < len(cells[target][0])):
            target = cid
    if target is None:
        pairs = []
        for cid, (left, right) in cells.items():
            pairs.append((left[0], right[0] - n1))
        return Bijection(tuple(sorted(pairs)))
    left, right = cells[target]
    v = min(left)
    # try the mirror vertex first: makes "G vs itself" return the identity
    candidates = sorted(right, key=lambda w: (w - n1 != v, w))
    for w in candidates:
        found = _search(inst, n1, forced + [(v, w)])
        if found is not None:
            return found
    return None


def find_isomorphism(G1: ColoredGraph, G2: ColoredGraph) -> Bijection | None:
    """A color- and edge-preserving bijection, or None when none exists.

    The result is re-checked with verify_mapping before being returned.
    """
    if _quick_mismatch(G1, G2):
        return None
    inst = _Instance([G1, G2])
    found = _search(inst, G1.num_vertices, [])
    if found is None:
        return None
    ok, violation = verify_mapping(G1, G2, found)
    assert ok, f"search produced an invalid mapping: {violation}"
    return found


@dataclass(frozen=True)
class AutomorphismGroup:
    generators: tuple[Bijection, ...]
    order: int


def automorphism_group(G: ColoredGraph) -> AutomorphismGroup:
    """Color-preserving automorphisms: generators and the exact order.

    Stabilizer chain: fix base vertices one at a time; the orbit of each
    base vertex is determined by one search per candidate image, and the
    order is the product of the orbit sizes.
    """
    inst = _Instance([G, G])
    n1 = G.num_vertices
    base: list[int] = []
    generators: list[Bijection] = []
    order = 1
    while True:
        forced = [(v, n1 + v) for v in base]
        coloring, _ = inst.refine(forced, balanced=True)
        assert coloring is not None
        cells = inst.cells(coloring)
        target = None
        for cid, (left, right) in sorted(cells.items()):
            if len(left) > 1 and (target is None or len(left) < len(cells[target][0])):
                target = cid
        if target is None:
            break
        left, _ = cells[target]
        v = min(left)
        orbit = 1
        for w in sorted(left):
            if w == v:
                continue
            g = _search(inst, n1, forced + [(v, n1 + w)])
            if g is not None:
                orbit += 1
                generators.append(g)
        order *= orbit
        base.append(v)
    return AutomorphismGroup(tuple(generators), order)
