"""Magic-unitary certificates: construction from representations,
verification against the quantum automorphism / isomorphism relation
sets, round-trip extraction of the generators, quantum-symmetry
witnesses, and lifting through the decoloring pipeline.

A certificate is a block-sparse matrix of algebra elements indexed by
vertex pairs (row graph x column graph).  For certificates built from a
representation, the entry at ((k, alpha), (k, beta)) is the projection
v_delta = prod_{i in S_k} p_i^{delta_i} with delta = alpha * beta and
p_i^{+-} = (1 +- x_i)/2; entries across different blocks vanish.  The
same construction covers the automorphism case (both graphs equal) and
the isomorphism case (right-hand sides b and b' differ).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .f2core import LinearSystem
from .graphs import ColoredGraph, VertexLabel
from .decolor import Original, VertexPath, Subdivision, EdgePath, PathAssignment
from .reps import DenseElement, Representation, verify_representation

DEFAULT_TOL = 1e-10
LIFTED_TOL = 1e-9


class CertificateError(ValueError):
    """A certificate precondition failed (mismatched inputs, failed source)."""


@dataclass
class MagicUnitaryCert:
    """Block-sparse magic unitary over a pair of colored graphs.

    `entries` maps (row vertex, column vertex) to an algebra element;
    absent pairs are zero.  Entries that coincide by the block structure
    share one element object.  `block_table` (when built from a
    representation) maps (block, delta string) to that shared element.
    """

    row_graph: ColoredGraph
    col_graph: ColoredGraph
    entries: dict
    backend: str  # "dense" | "group_algebra"
    identity: object
    provenance: str = ""
    source_rep: Representation | None = None
    block_table: dict | None = None

    def entry(self, i: int, j: int):
        return self.entries.get((i, j))

    def zero(self):
        return self.identity - self.identity

    def distinct_elements(self) -> list[tuple[tuple[int, int], object]]:
        """One representative (key, element) per distinct stored object."""
        seen: dict[int, tuple[tuple[int, int], object]] = {}
        for key in sorted(self.entries):
            elem = self.entries[key]
            seen.setdefault(id(elem), (key, elem))
        return sorted(seen.values(), key=lambda kv: kv[0])

    def to_json_dict(self) -> dict:
        from .graphs import render_label
        from .reps import GroupAlgebraElement

        table: list = []
        index: dict[int, int] = {}
        entry_list = []
        for (i, j) in sorted(self.entries):
            elem = self.entries[(i, j)]
            if id(elem) not in index:
                index[id(elem)] = len(table)
                if isinstance(elem, GroupAlgebraElement):
                    table.append(elem.support())
                else:
                    table.append([[[float(z.real), float(z.imag)] for z in row]
                                  for row in elem.mat])
            entry_list.append({
                "row": render_label(self.row_graph.labels[i]),
                "col": render_label(self.col_graph.labels[j]),
                "element": index[id(elem)],
            })
        return {"backend": self.backend, "provenance": self.provenance,
                "elements": table, "entries": entry_list}


# ---------------------------------------------------------------------------
# Construction from a representation


def _require_shared_matrix(Gb: ColoredGraph, Gb2: ColoredGraph) -> tuple:
    s1, s2 = Gb.system(), Gb2.system()
    if s1 is None or s2 is None:
        raise CertificateError("graphs carry no system metadata")
    if s1.M != s2.M:
        raise CertificateError("graphs were built from different matrices")
    return s1, s2


def _block_vertices(G: ColoredGraph) -> dict[int, list[int]]:
    blocks: dict[int, list[int]] = {}
    for i, lab in enumerate(G.labels):
        if not isinstance(lab, VertexLabel):
            raise CertificateError("graph vertices are not block-labelled")
        blocks.setdefault(lab.block, []).append(i)
    return blocks


def build_magic_unitary(Gb: ColoredGraph, Gb2: ColoredGraph,
                        R: Representation, tol: float = DEFAULT_TOL) -> MagicUnitaryCert:
    """Certificate u with u[(k,alpha),(k,beta)] = prod_i p_i^{(alpha*beta)_i}.

    R must represent the relation set of (M, b + b'); this is verified
    before anything is built.  Works uniformly for b = b' (automorphism
    case) and b != b' (isomorphism case).
    """
    s1, s2 = _require_shared_matrix(Gb, Gb2)
    xor_b = tuple(x ^ y for x, y in zip(s1.b, s2.b))
    sys_xor = LinearSystem(s1.M, xor_b)
    if len(R.images) != s1.M.cols:
        raise CertificateError(f"{len(R.images)} images for {s1.M.cols} variables")
    report = verify_representation(R, sys_xor, "iso", tol)
    if not report.passed:
        raise CertificateError(
            f"representation fails for b+b': {report.worst} "
            f"(residual {report.max_residual:.3g})")

    one = R.identity()
    blocks1 = _block_vertices(Gb)
    blocks2 = _block_vertices(Gb2)

    block_table: dict = {}
    entries: dict = {}
    for k in sorted(blocks1):
        support = s1.support(k)
        projections = {i: (R.projection(i, 1), R.projection(i, -1)) for i in support}
        cache: dict[tuple[int, ...], object] = {}

        def v_elem(delta_signs: tuple[int, ...]) -> object:
            elem = cache.get(delta_signs)
            if elem is None:
                elem = one
                for i, s in zip(support, delta_signs):
                    elem = elem * (projections[i][0] if s == 1 else projections[i][1])
                cache[delta_signs] = elem
            return elem

        for i in blocks1[k]:
            alpha = Gb.labels[i].assignment
            for j in blocks2.get(k, []):
                beta = Gb2.labels[j].assignment
                delta = alpha.pointwise(beta)
                elem = v_elem(delta.signs)
                entries[(i, j)] = elem
                block_table[(k, delta.render())] = elem

    return MagicUnitaryCert(Gb, Gb2, entries, R.backend, one,
                            provenance=f"built:{R.name}", source_rep=R,
                            block_table=block_table)


def make_classical_cert(G1: ColoredGraph, G2: ColoredGraph,
                        mapping: dict[int, int]) -> MagicUnitaryCert:
    """0/1 scalar certificate of a classical bijection (entries are 1x1)."""
    if sorted(mapping) != list(range(G1.num_vertices)) or \
            sorted(mapping.values()) != list(range(G2.num_vertices)):
        raise CertificateError("mapping is not a bijection between the vertex sets")
    one = DenseElement.identity(1)
    entries = {(v, w): one for v, w in mapping.items()}
    return MagicUnitaryCert(G1, G2, entries, "dense", one, provenance="classical")


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class VerificationReport:
    """Residual per relation family, the worst offender, and the verdict."""

    families: tuple  # ((name, residual, worst description), ...)
    tol: float
    backend: str

    @property
    def max_residual(self) -> float:
        return max((r for _, r, _ in self.families), default=0.0)

    @property
    def worst(self) -> tuple:
        if not self.families:
            return ("", 0.0, "")
        return max(self.families, key=lambda f: f[1])

    @property
    def passed(self) -> bool:
        limit = 0.0 if self.backend == "group_algebra" else self.tol
        return all(r <= limit for _, r, _ in self.families)

    def residual(self, family: str) -> float:
        return max((r for n, r, _ in self.families if n == family), default=0.0)

    def to_json_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol, "backend": self.backend,
                "max_residual": self.max_residual,
                "families": [{"name": n, "residual": r, "worst": w}
                             for n, r, w in self.families]}


def _edge_classes(G: ColoredGraph) -> dict[str, list[tuple[int, int]]]:
    classes: dict[str, list[tuple[int, int]]] = {}
    for (u, v, c) in G.edges:
        classes.setdefault(c.render() if c is not None else "", []).append((u, v))
    for c in G.edge_palette():
        classes.setdefault(c.render(), [])
    return classes


def _dense_tensor(cert: MagicUnitaryCert) -> np.ndarray:
    d = cert.identity.dim
    W = np.zeros((cert.row_graph.num_vertices, cert.col_graph.num_vertices, d, d),
                 dtype=np.complex128)
    for (i, j), elem in cert.entries.items():
        W[i, j] = elem.mat
    return W


def _dense_intertwine(W: np.ndarray, A1: np.ndarray, A2: np.ndarray) -> float:
    V1, V2, d, _ = W.shape
    left = (A1.astype(np.complex128) @ W.reshape(V1, V2 * d * d)).reshape(W.shape)
    right = (W.transpose(0, 2, 3, 1).reshape(V1 * d * d, V2)
             @ A2.astype(np.complex128)).reshape(V1, d, d, V2).transpose(0, 3, 1, 2)
    return float(np.linalg.norm(left - right))


def _exact_intertwine(cert: MagicUnitaryCert,
                      pairs1: list[tuple[int, int]],
                      pairs2: list[tuple[int, int]]) -> float:
    adj1: dict[int, list[int]] = {}
    for (u, v) in pairs1:
        adj1.setdefault(u, []).append(v)
        adj1.setdefault(v, []).append(u)
    adj2: dict[int, list[int]] = {}
    for (u, v) in pairs2:
        adj2.setdefault(u, []).append(v)
        adj2.setdefault(v, []).append(u)

    left: dict = {}
    right: dict = {}
    for (k, j), elem in cert.entries.items():
        for i in adj1.get(k, ()):
            key = (i, j)
            left[key] = left[key] + elem if key in left else elem
    for (i, k), elem in cert.entries.items():
        for j in adj2.get(k, ()):
            key = (i, j)
            right[key] = right[key] + elem if key in right else elem

    worst = 0.0
    for key in left.keys() | right.keys():
        a = left.get(key)
        b = right.get(key)
        diff = (a - b) if (a is not None and b is not None) else (a if b is None else -b)
        worst = max(worst, diff.residual_norm())
    return worst


def verify_cert(cert: MagicUnitaryCert, mode: str,
                tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check the full relation set of the certificate.

    Families: entry projections; row and column sums = identity; color
    vanishing; intertwining with every edge-color adjacency matrix; and,
    when both graphs are block-labelled, the structural block form
    (entries depend only on alpha * beta and same-block entries commute).
    Failures are report entries, never exceptions.
    """
    if mode not in ("qut", "iso"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "qut" and cert.row_graph.num_vertices != cert.col_graph.num_vertices:
        raise CertificateError("qut mode needs equal row and column graphs")
    families: list[tuple[str, float, str]] = []
    G1, G2 = cert.row_graph, cert.col_graph

    # entry projections: e = e* = e^2
    worst, desc = 0.0, ""
    for key, elem in cert.distinct_elements():
        r = max((elem - elem.adjoint()).residual_norm(),
                (elem * elem - elem).residual_norm())
        if r > worst:
            worst, desc = r, f"entry {key}"
    families.append(("projection", worst, desc))

    # row and column sums
    one = cert.identity
    for axis, name, count in ((0, "row_sum", G1.num_vertices),
                              (1, "col_sum", G2.num_vertices)):
        sums: dict[int, object] = {}
        for (i, j), elem in cert.entries.items():
            idx = i if axis == 0 else j
            sums[idx] = sums[idx] + elem if idx in sums else elem
        worst, desc = 0.0, ""
        for idx in range(count):
            total = sums.get(idx)
            r = (total - one).residual_norm() if total is not None \
                else one.residual_norm()
            if r > worst:
                worst, desc = r, f"{name.split('_')[0]} {idx}"
        families.append((name, worst, desc))

    # color vanishing on stored entries
    worst, desc = 0.0, ""
    for (i, j), elem in cert.entries.items():
        c1, c2 = G1.vertex_colors[i], G2.vertex_colors[j]
        r1 = c1.render() if c1 is not None else None
        r2 = c2.render() if c2 is not None else None
        if r1 != r2:
            r = elem.residual_norm()
            if r > worst:
                worst, desc = r, f"entry ({i},{j}) colors {r1}/{r2}"
    families.append(("color", worst, desc))

    # intertwining per edge color
    classes1 = _edge_classes(G1)
    classes2 = _edge_classes(G2)
    W = _dense_tensor(cert) if cert.backend == "dense" else None
    for cname in sorted(classes1.keys() | classes2.keys()):
        pairs1 = classes1.get(cname, [])
        pairs2 = classes2.get(cname, [])
        if cert.backend == "dense":
            A1 = np.zeros((G1.num_vertices, G1.num_vertices))
            for (u, v) in pairs1:
                A1[u, v] = A1[v, u] = 1.0
            A2 = np.zeros((G2.num_vertices, G2.num_vertices))
            for (u, v) in pairs2:
                A2[u, v] = A2[v, u] = 1.0
            r = _dense_intertwine(W, A1, A2)
        else:
            r = _exact_intertwine(cert, pairs1, pairs2)
        families.append((f"intertwine:{cname or 'plain'}", r, cname or "plain"))

    # structural invariants of the block decomposition
    if all(isinstance(l, VertexLabel) for l in G1.labels) and \
            all(isinstance(l, VertexLabel) for l in G2.labels):
        groups: dict[tuple[int, str], list] = {}
        for (i, j), elem in cert.entries.items():
            li, lj = G1.labels[i], G2.labels[j]
            if li.block != lj.block:
                continue  # cross-block entries are caught by the color family
            delta = li.assignment.pointwise(lj.assignment)
            groups.setdefault((li.block, delta.render()), []).append(elem)
        worst, desc = 0.0, ""
        for (k, dname), elems in groups.items():
            first = elems[0]
            for other in elems[1:]:
                if other is first:
                    continue
                r = (other - first).residual_norm()
                if r > worst:
                    worst, desc = r, f"block {k} delta {dname}"
        families.append(("block_equal", worst, desc))

        worst, desc = 0.0, ""
        per_block: dict[int, list] = {}
        for (k, _), elems in groups.items():
            per_block.setdefault(k, []).append(elems[0])
        for k, elems in per_block.items():
            for a in range(len(elems)):
                for b in range(a + 1, len(elems)):
                    x, y = elems[a], elems[b]
                    r = (x * y - y * x).residual_norm()
                    if r > worst:
                        worst, desc = r, f"block {k}"
        families.append(("block_commute", worst, desc))

    return VerificationReport(tuple(families), tol, cert.backend)


# ---------------------------------------------------------------------------
# Generator extraction (the round-trip direction)


@dataclass(frozen=True)
class ExtractionReport:
    """Extracted generator images and how well they glue across blocks."""

    generators: tuple
    cross_block_discrepancy: float
    roundtrip_residual: float | None  # vs. the source representation


def _recover_block_table(cert: MagicUnitaryCert) -> dict:
    if cert.block_table is not None:
        return cert.block_table
    table: dict = {}
    for (i, j), elem in cert.entries.items():
        li, lj = cert.row_graph.labels[i], cert.col_graph.labels[j]
        delta = li.assignment.pointwise(lj.assignment)
        table.setdefault((li.block, delta.render()), elem)
    return table


def extract_generators(cert: MagicUnitaryCert,
                       tol: float = DEFAULT_TOL) -> ExtractionReport:
    """Recover y_i = sum_delta delta_i v^{(k)}_delta for every variable.

    The sum must not depend on which block k containing i is used; the
    maximal cross-block deviation is reported, together with the residual
    against the source representation when one is attached.
    """
    report = verify_cert(cert, "iso", tol)
    if not report.passed:
        raise CertificateError(
            f"certificate fails verification: {report.worst[0]} "
            f"(residual {report.worst[1]:.3g})")

    sys1, sys2 = _require_shared_matrix(cert.row_graph, cert.col_graph)
    parity = [x ^ y for x, y in zip(sys1.b, sys2.b)]
    table = _recover_block_table(cert)

    from .graphs import sign_vectors

    per_var_blocks: dict[int, dict[int, object]] = {}
    for k in range(sys1.num_constraints):
        support = sys1.support(k)
        for i in support:
            y = None
            for delta in sign_vectors(support, parity[k]):
                v = table[(k, delta.render())]
                term = v if delta.sign(i) == 1 else -v
                y = term if y is None else y + term
            per_var_blocks.setdefault(i, {})[k] = y

    generators = []
    discrepancy = 0.0
    for i in range(sys1.num_vars):
        blocks = per_var_blocks.get(i)
        if not blocks:
            raise CertificateError(f"variable {i} occurs in no constraint")
        ys = [blocks[k] for k in sorted(blocks)]
        generators.append(ys[0])
        for a in range(len(ys)):
            for b in range(a + 1, len(ys)):
                discrepancy = max(discrepancy, (ys[a] - ys[b]).residual_norm())

    roundtrip = None
    if cert.source_rep is not None:
        roundtrip = max((y - x).residual_norm()
                        for y, x in zip(generators, cert.source_rep.images))

    return ExtractionReport(tuple(generators), discrepancy, roundtrip)


# ---------------------------------------------------------------------------
# Quantum symmetry witness


def noncommuting_witness(cert: MagicUnitaryCert, tol: float = DEFAULT_TOL):
    """Some pair of nonzero entries whose commutator is nonzero, or None.

    Enumerates all pairs of distinct stored elements (each nonzero entry
    value appears once), so "None" means every pair of certificate
    entries commutes -- no quantum symmetry is witnessed.
    """
    limit = 0.0 if cert.backend == "group_algebra" else tol
    distinct = cert.distinct_elements()
    for a in range(len(distinct)):
        key_a, elem_a = distinct[a]
        for b in range(a + 1, len(distinct)):
            key_b, elem_b = distinct[b]
            r = (elem_a * elem_b - elem_b * elem_a).residual_norm()
            if r > limit:
                return (key_a, key_b, r)
    return None


# ---------------------------------------------------------------------------
# Lifting through the decoloring pipeline


def _decorated_index(G: ColoredGraph):
    orig: dict[int, int] = {}
    vpath: dict[tuple[int, int], int] = {}
    sub: dict[tuple[int, int], int] = {}
    epath: dict[tuple[tuple[int, int], int], int] = {}
    for idx, lab in enumerate(G.labels):
        if isinstance(lab, Original):
            orig[lab.vertex] = idx
        elif isinstance(lab, VertexPath):
            vpath[(lab.vertex, lab.i)] = idx
        elif isinstance(lab, Subdivision):
            sub[lab.edge] = idx
        elif isinstance(lab, EdgePath):
            epath[(lab.edge, lab.i)] = idx
        else:
            raise CertificateError("graph is not a decorated decoloring")
    return orig, vpath, sub, epath


def _assignment_of(G: ColoredGraph) -> dict:
    data = G.meta.get("assignment")
    if data is None:
        raise CertificateError("graph metadata carries no path assignment")
    return data


def lift_cert(cert: MagicUnitaryCert, Gpp1: ColoredGraph, Gpp2: ColoredGraph,
              tol: float = LIFTED_TOL) -> MagicUnitaryCert:
    """Transport a verified certificate over (G, G') to their decolorings.

    Original and path vertices inherit the source entry at equal path
    positions; subdivision vertices of same-colored edges e = (a, b) and
    f = (c, d) receive u_{ac} u_{bd} + u_{ad} u_{bc} (a projection because
    the same-block factors commute, which is checked here).
    """
    asg1, asg2 = _assignment_of(Gpp1), _assignment_of(Gpp2)
    if asg1 != asg2:
        raise CertificateError("the two decolorings used different path lengths")
    base1 = Gpp1.meta.get("base", {}).get("base", {}).get("system")
    base2 = Gpp2.meta.get("base", {}).get("base", {}).get("system")
    if base1 != cert.row_graph.meta.get("system") or \
            base2 != cert.col_graph.meta.get("system"):
        raise CertificateError("decolorings were not built from the certificate's graphs")

    report = verify_cert(cert, "iso", tol)
    if not report.passed:
        raise CertificateError(
            f"source certificate fails verification: {report.worst[0]} "
            f"(residual {report.worst[1]:.3g})")

    pa = PathAssignment.from_json_dict(asg1, cert.row_graph.system())
    c0_name = asg1["c0"]
    orig1, vpath1, sub1, epath1 = _decorated_index(Gpp1)
    orig2, vpath2, sub2, epath2 = _decorated_index(Gpp2)

    limit = 0.0 if cert.backend == "group_algebra" else tol
    out: dict = {}

    # vertex gadgets: w_{v_k, x_k} = u_{v, x}
    for (v, x), elem in cert.entries.items():
        out[(orig1[v], orig2[x])] = elem
        color = cert.row_graph.vertex_colors[v]
        n = pa.vertex_length(color) if color is not None else 0
        for i in range(1, n + 1):
            out[(vpath1[(v, i)], vpath2[(x, i)])] = elem

    # edge gadgets: w_{e_k, f_k} = u_{ac} u_{bd} + u_{ad} u_{bc}
    def colored_edges(G: ColoredGraph) -> dict[str, list[tuple[int, int]]]:
        grouped: dict[str, list[tuple[int, int]]] = {}
        for (u, v, c) in G.edges:
            if c is not None and c.render() != c0_name:
                grouped.setdefault(c.render(), []).append((u, v))
        return grouped

    edges1 = colored_edges(cert.row_graph)
    edges2 = colored_edges(cert.col_graph)
    zero = cert.zero()
    for cname, elist in sorted(edges1.items()):
        flist = edges2.get(cname, [])
        m = pa.edge_length(  # colors of subdivided edges must carry a length
            next(c for (_, _, c) in cert.row_graph.edges
                 if c is not None and c.render() == cname))
        for (a, b) in elist:
            for (c, d) in flist:
                u_ac = cert.entry(a, c) or zero
                u_bd = cert.entry(b, d) or zero
                u_ad = cert.entry(a, d) or zero
                u_bc = cert.entry(b, c) or zero
                swap = (u_ac * u_bd - u_bd * u_ac).residual_norm()
                if swap > limit:
                    raise CertificateError(
                        f"entries for edges {(a, b)}/{(c, d)} do not commute")
                elem = u_ac * u_bd + u_ad * u_bc
                out[(sub1[(a, b)], sub2[(c, d)])] = elem
                for i in range(1, m + 1):
                    out[(epath1[((a, b), i)], epath2[((c, d), i)])] = elem

    return MagicUnitaryCert(Gpp1, Gpp2, out, cert.backend, cert.identity,
                            provenance=f"lifted:{cert.provenance}",
                            source_rep=cert.source_rep)
