"""Colored-graph data model and the block constructions over linear systems.

A constraint k of a system (M, b) has a block of vertices (k, alpha), one
per local solution alpha in +-1^{S_k}_{b_k}.  build_G connects everything
that shares variables and colors edges by the pointwise product
alpha * beta (restricted to the shared variables across blocks);
build_Gstar is the incidence-system variant where each cross-block pair
shares exactly one variable, the surviving inter edges all carry the
single color -1, and the +1 edges become non-edges.

Vertex order is canonical: blocks ascending, and within a block the sign
vectors in lexicographic order over the sorted domain with +1 < -1.  All
matrix-facing modules rely on those indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .f2core import LinearSystem, parse_system, render_system


# ---------------------------------------------------------------------------
# Sign vectors


@dataclass(frozen=True)
class SignVector:
    """A function S -> {+1, -1} on a sorted domain of variable indices."""

    domain: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.signs):
            raise ValueError("domain and signs must have equal length")
        if any(self.domain[i] >= self.domain[i + 1] for i in range(len(self.domain) - 1)):
            raise ValueError("domain must be strictly ascending")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    def sign(self, i: int) -> int:
        return self.signs[self.domain.index(i)]

    def product(self) -> int:
        out = 1
        for s in self.signs:
            out *= s
        return out

    def parity(self) -> int:
        """0 if the sign product is +1, else 1."""
        return 0 if self.product() == 1 else 1

    def pointwise(self, other: SignVector) -> SignVector:
        """The product alpha * beta on a shared domain."""
        if self.domain != other.domain:
            raise ValueError("pointwise product needs identical domains")
        return SignVector(self.domain,
                          tuple(a * b for a, b in zip(self.signs, other.signs)))

    def restrict(self, sub: tuple[int, ...]) -> SignVector:
        return SignVector(tuple(sub), tuple(self.sign(i) for i in sub))

    def is_all_plus(self) -> bool:
        return all(s == 1 for s in self.signs)

    def sort_key(self) -> tuple:
        # +1 sorts before -1, positionwise over the sorted domain
        return (self.domain, tuple(0 if s == 1 else 1 for s in self.signs))

    def render(self) -> str:
        return "".join("+" if s == 1 else "-" for s in self.signs)

    @classmethod
    def from_string(cls, domain: tuple[int, ...], text: str) -> SignVector:
        return cls(tuple(domain), tuple(1 if c == "+" else -1 for c in text))


def sign_vectors(domain: tuple[int, ...], parity: int) -> list[SignVector]:
    """All of +-1^S with the given sign-product parity, in canonical order."""
    out = []
    for signs in product((1, -1), repeat=len(domain)):
        sv = SignVector(tuple(domain), signs)
        if sv.parity() == parity:
            out.append(sv)
    return out


# ---------------------------------------------------------------------------
# Color tags


@dataclass(frozen=True)
class VertexColor:
    block: int

    def render(self) -> str:
        return f"v:{self.block}"

    def sort_key(self) -> tuple:
        return (0, self.block)


@dataclass(frozen=True)
class IntraEdgeColor:
    """Color alpha * beta of an edge inside block k; parity 0 and never all-plus."""

    block: int
    delta: SignVector

    def __post_init__(self):
        if self.delta.parity() != 0:
            raise ValueError("intra color must have sign product +1")
        if self.delta.is_all_plus():
            raise ValueError("intra color cannot be the all-plus vector (loop)")

    def render(self) -> str:
        return f"intra:{self.block}:{self.delta.render()}"

    def sort_key(self) -> tuple:
        return (1, self.block, self.delta.sort_key())


@dataclass(frozen=True)
class InterEdgeColor:
    """Restriction of alpha * beta to the shared variables, scoped to a block pair."""

    blocks: tuple[int, int]
    delta: SignVector

    def __post_init__(self):
        if self.blocks[0] >= self.blocks[1]:
            raise ValueError("block pair must be ascending")

    def render(self) -> str:
        return f"inter:{self.blocks[0]}-{self.blocks[1]}:{self.delta.render()}"

    def sort_key(self) -> tuple:
        return (2, self.blocks, self.delta.sort_key())


@dataclass(frozen=True)
class SharedEdgeColor:
    """The two-color scheme of the incidence construction; only -1 survives."""

    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def render(self) -> str:
        return f"shared:{'+1' if self.sign == 1 else '-1'}"

    def sort_key(self) -> tuple:
        return (3, 0 if self.sign == 1 else 1)


@dataclass(frozen=True)
class PlainColor:
    index: int

    def render(self) -> str:
        return f"plain:{self.index}"

    def sort_key(self) -> tuple:
        return (4, self.index)


ColorTag = VertexColor | IntraEdgeColor | InterEdgeColor | SharedEdgeColor | PlainColor


def parse_color(text: str, system: LinearSystem | None = None) -> ColorTag:
    """Rebuild a ColorTag from its canonical string.

    Sign-vector domains of intra/inter colors are recovered from the system
    when one is supplied (they are S_k and S_l & S_k); without a system a
    placeholder domain 0..len-1 is used, which still renders identically.
    """
    kind, _, rest = text.partition(":")
    if kind == "v":
        return VertexColor(int(rest))
    if kind == "intra":
        block, _, sig = rest.partition(":")
        k = int(block)
        domain = tuple(range(len(sig)))
        if system is not None and k < system.num_constraints:
            support = system.support(k)
            if len(support) == len(sig):
                domain = support
        return IntraEdgeColor(k, SignVector.from_string(domain, sig))
    if kind == "inter":
        pair, _, sig = rest.partition(":")
        l, k = (int(x) for x in pair.split("-"))
        domain = tuple(range(len(sig)))
        if system is not None and k < system.num_constraints:
            shared = tuple(sorted(set(system.support(l)) & set(system.support(k))))
            if len(shared) == len(sig):
                domain = shared
        return InterEdgeColor((l, k), SignVector.from_string(domain, sig))
    if kind == "shared":
        return SharedEdgeColor(1 if rest == "+1" else -1)
    if kind == "plain":
        return PlainColor(int(rest))
    raise ValueError(f"unknown color string {text!r}")


def color_sort_key(color: ColorTag) -> tuple:
    return color.sort_key()


# ---------------------------------------------------------------------------
# Vertex labels

@dataclass(frozen=True)
class VertexLabel:
    """The vertex (k, alpha): block index and local solution."""

    block: int
    assignment: SignVector

    def render(self) -> str:
        return f"{self.block}:{self.assignment.render()}"


def render_label(label) -> str:
    if hasattr(label, "render"):
        return label.render()
    return str(label)


# Loaders for structured labels; lcsq.decolor appends its own parser.
LABEL_PARSERS: list = []


def _parse_vertex_label(text: str, system: LinearSystem | None):
    head, sep, sig = text.partition(":")
    if sep and head.isdigit() and sig and set(sig) <= {"+", "-"}:
        block = int(head)
        if system is not None and block < system.num_constraints:
            domain = system.support(block)
            if len(domain) == len(sig):
                return VertexLabel(block, SignVector.from_string(domain, sig))
    return None


def parse_label(text: str, system: LinearSystem | None = None):
    for parser in LABEL_PARSERS:
        parsed = parser(text, system)
        if parsed is not None:
            return parsed
    if text.lstrip("-").isdigit():
        return int(text)
    return text


LABEL_PARSERS.append(_parse_vertex_label)


# ---------------------------------------------------------------------------
# Colored graphs


@dataclass(frozen=True)
class ColoredGraph:
    """Simple graph with optional vertex colors, edge colors, and provenance.

    Vertices are 0..n-1; `labels[i]` is the structured identity of vertex i
    (a VertexLabel, a decorated id from the decoloring pipeline, an int, or
    a string).  Edges are (u, v, color) with u < v.
    """

    labels: tuple
    vertex_colors: tuple
    edges: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if len(self.vertex_colors) != n:
            raise ValueError("vertex color list does not match vertex count")
        seen = set()
        for (u, v, _) in self.edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < v < n):
                raise ValueError(f"bad edge endpoints ({u}, {v})")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    # -- basic accessors ----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency_lists(self) -> list[list[tuple[int, object]]]:
        adj: list[list[tuple[int, object]]] = [[] for _ in range(self.num_vertices)]
        for (u, v, c) in self.edges:
            adj[u].append((v, c))
            adj[v].append((u, c))
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for (u, v, _) in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def vertex_palette(self) -> list:
        present = {c.render(): c for c in self.vertex_colors if c is not None}
        return sorted(present.values(), key=color_sort_key)

    def edge_palette(self) -> list:
        present = {c.render(): c for (_, _, c) in self.edges if c is not None}
        for extra in self.meta.get("edge_palette", []):
            c = parse_color(extra, self.system()) if isinstance(extra, str) else extra
            present.setdefault(c.render(), c)
        return sorted(present.values(), key=color_sort_key)

    def index_by_label(self) -> dict:
        return {render_label(lab): i for i, lab in enumerate(self.labels)}

    def system(self) -> LinearSystem | None:
        raw = self.meta.get("system")
        return parse_system(raw) if raw else None

    def decolored_adjacency(self) -> np.ndarray:
        A = np.zeros((self.num_vertices, self.num_vertices), dtype=np.float64)
        for (u, v, _) in self.edges:
            A[u, v] = A[v, u] = 1.0
        return A


def adjacency_matrix(G: ColoredGraph, color: ColorTag) -> np.ndarray:
    """0/1 adjacency matrix of the edges carrying one color."""
    palette = {c.render() for c in G.edge_palette()}
    if color.render() not in palette:
        raise ValueError(f"color {color.render()} is not in the graph's palette")
    A = np.zeros((G.num_vertices, G.num_vertices), dtype=np.int64)
    want = color.render()
    for (u, v, c) in G.edges:
        if c is not None and c.render() == want:
            A[u, v] = A[v, u] = 1
    return A


# ---------------------------------------------------------------------------
# Constructions


def _blocks(sys: LinearSystem) -> list[list[SignVector]]:
    blocks = []
    for k in range(sys.num_constraints):
        support = sys.support(k)
        if not support:
            raise ValueError(f"constraint {k} touches no variable")
        blocks.append(sign_vectors(support, sys.b[k]))
    return blocks


def _block_vertices(blocks: list[list[SignVector]]):
    labels = []
    colors = []
    offsets = []
    for k, block in enumerate(blocks):
        offsets.append(len(labels))
        for alpha in block:
            labels.append(VertexLabel(k, alpha))
            colors.append(VertexColor(k))
    return labels, colors, offsets


def build_G(sys: LinearSystem) -> ColoredGraph:
    """The colored graph G(M, b): blocks of local solutions, all edges between
    variable-sharing blocks, colored by the (restricted) pointwise product."""
    blocks = _blocks(sys)
    labels, colors, offsets = _block_vertices(blocks)
    edges = []

    for k, block in enumerate(blocks):
        base = offsets[k]
        for a in range(len(block)):
            for b_ in range(a + 1, len(block)):
                delta = block[a].pointwise(block[b_])
                edges.append((base + a, base + b_, IntraEdgeColor(k, delta)))

    for l in range(sys.num_constraints):
        for k in range(l + 1, sys.num_constraints):
            shared = tuple(sorted(set(sys.support(l)) & set(sys.support(k))))
            if not shared:
                continue
            for a, alpha in enumerate(blocks[l]):
                for b_, beta in enumerate(blocks[k]):
                    delta = SignVector(shared, tuple(alpha.sign(i) * beta.sign(i)
                                                     for i in shared))
                    edges.append((offsets[l] + a, offsets[k] + b_,
                                  InterEdgeColor((l, k), delta)))

    meta = {"construction": "G", "system": render_system(sys)}
    return ColoredGraph(tuple(labels), tuple(colors), tuple(edges), meta)


def build_Gstar(sys: LinearSystem) -> ColoredGraph:
    """The reduced graph G_*(M, b): cross-block pairs must share at most one
    variable; inter edges are colored by the single shared sign and the +1
    class is replaced by non-edges."""
    blocks = _blocks(sys)
    labels, colors, offsets = _block_vertices(blocks)

    edges = []
    for k, block in enumerate(blocks):
        base = offsets[k]
        for a in range(len(block)):
            for b_ in range(a + 1, len(block)):
                delta = block[a].pointwise(block[b_])
                edges.append((base + a, base + b_, IntraEdgeColor(k, delta)))

    for l in range(sys.num_constraints):
        for k in range(l + 1, sys.num_constraints):
            shared = tuple(sorted(set(sys.support(l)) & set(sys.support(k))))
            if not shared:
                continue
            if len(shared) > 1:
                raise ValueError(
                    f"constraints {l} and {k} share {len(shared)} variables; "
                    "the reduced construction needs at most one")
            i = shared[0]
            for a, alpha in enumerate(blocks[l]):
                for b_, beta in enumerate(blocks[k]):
                    if alpha.sign(i) * beta.sign(i) == -1:
                        edges.append((offsets[l] + a, offsets[k] + b_,
                                      SharedEdgeColor(-1)))

    meta = {"construction": "Gstar", "system": render_system(sys)}
    return ColoredGraph(tuple(labels), tuple(colors), tuple(edges), meta)


# ---------------------------------------------------------------------------
# Vertex invariants (refinement seeds)


def vertex_invariants(G: ColoredGraph, l_max: int = 3) -> list[tuple]:
    """Per-vertex fingerprint over the decolored adjacency matrix.

    Combines the degree, the diagonal of A^l for l = 1..l_max (closed walk
    counts), and the multiset of neighbor degrees at each BFS distance.
    Vertices with different fingerprints lie in different orbits.
    """
    if l_max < 1:
        raise ValueError("l_max must be at least 1")
    n = G.num_vertices
    A = G.decolored_adjacency()
    diags = []
    P = A.copy()
    for _ in range(l_max):
        diags.append(tuple(int(x) for x in np.round(np.diag(P))))
        P = P @ A
    deg = G.degrees()

    adj = [[] for _ in range(n)]
    for (u, v, _) in G.edges:
        adj[u].append(v)
        adj[v].append(u)

    out = []
    for v in range(n):
        dist = [-1] * n
        dist[v] = 0
        frontier = [v]
        rings: list[tuple[int, ...]] = []
        while frontier:
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            if nxt:
                rings.append(tuple(sorted(deg[y] for y in nxt)))
            frontier = nxt
        walks = tuple(d[v] for d in diags)
        out.append((deg[v], walks, tuple(rings)))
    return out


# ---------------------------------------------------------------------------
# Serialization


def to_json_dict(G: ColoredGraph) -> dict:
    return {
        "vertices": [
            {"id": i, "label": render_label(lab),
             **({"color": c.render()} if c is not None else {})}
            for i, (lab, c) in enumerate(zip(G.labels, G.vertex_colors))
        ],
        "edges": [
            {"u": u, "v": v, **({"color": c.render()} if c is not None else {})}
            for (u, v, c) in G.edges
        ],
        "meta": G.meta,
    }


def from_json_dict(data: dict) -> ColoredGraph:
    meta = data.get("meta", {})
    system = parse_system(meta["system"]) if "system" in meta else None
    verts = sorted(data["vertices"], key=lambda d: d["id"])
    if [d["id"] for d in verts] != list(range(len(verts))):
        raise ValueError("vertex ids must be 0..n-1")
    labels = tuple(parse_label(d.get("label", str(d["id"])), system) for d in verts)
    vcolors = tuple(parse_color(d["color"], system) if "color" in d else None
                    for d in verts)
    edges = []
    for d in data["edges"]:
        u, v = d["u"], d["v"]
        color = parse_color(d["color"], system) if "color" in d else None
        edges.append((min(u, v), max(u, v), color))
    return ColoredGraph(labels, vcolors, tuple(edges), meta)


def to_dot(G: ColoredGraph) -> str:
    lines = ["graph G {"]
    for i, (lab, c) in enumerate(zip(G.labels, G.vertex_colors)):
        attrs = [f'label="{render_label(lab)}"']
        if c is not None:
            attrs.append(f'tooltip="{c.render()}"')
        lines.append(f"  {i} [{', '.join(attrs)}];")
    for (u, v, c) in G.edges:
        attr = f' [label="{c.render()}"]' if c is not None else ""
        lines.append(f"  {u} -- {v}{attr};")
    lines.append("}")
    return "\n".join(lines)


def serialize(G: ColoredGraph, fmt: str = "json") -> str:
    """Render the graph as a JSON document or DOT source."""
    if fmt == "json":
        return json.dumps(to_json_dict(G), sort_keys=True, indent=1)
    if fmt == "dot":
        return to_dot(G)
    raise ValueError(f"unknown format {fmt!r}")


def parse_graph_json(text: str) -> ColoredGraph:
    return from_json_dict(json.loads(text))
