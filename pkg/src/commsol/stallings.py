"""Finite-index subgroups of F_k as folded covering graphs of the rose.

A subgroup graph is a based, k-edge-labeled graph in which each letter
defines a partial injection on vertices (folded).  Based loops spell
exactly the elements of the subgroup.  The subgroup has finite index
precisely when every letter is a total permutation (the graph covers the
rose); then index = vertex count.

The canonical form relabels vertices by breadth-first search from the base,
exploring, for each letter in order, first the outgoing then the incoming
edge.  Based isomorphism of covers is subgroup equality, so equal subgroups
have identical stored arrays.

Folding is implemented with a weighted union-find.  The weights are words
over an auxiliary alphabet (one symbol per input generator), which lets the
same pass record, for every canonical basis element of the folded graph, an
expression in the input generators — valid whenever the inputs freely
generate their subgroup (a relation fold is then impossible, and is
reported if it occurs).
"""

from __future__ import annotations

from functools import lru_cache

from . import limits
from .errors import InfiniteIndexError, ParseError, PreconditionError
from .freewords import Word, _LOWER

# -- decorations: reduced words over +-(i+1), i = generator index --------------


def _dec_mul(*parts):
    out = []
    for p in parts:
        for s in p:
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
    return tuple(out)


def _dec_inv(d):
    return tuple(-s for s in reversed(d))


class _Folder:
    """Union-find folding with per-vertex frame words (see module docstring)."""

    def __init__(self, k: int, track: bool):
        self.k = k
        self.track = track
        self.parent: list[int] = []
        self.weight: list[tuple] = []
        self.out: list[dict] = []
        self.inn: list[dict] = []
        self.pending: list[tuple] = []

    def new_vertex(self) -> int:
        v = len(self.parent)
        self.parent.append(v)
        self.weight.append(())
        self.out.append({})
        self.inn.append({})
        return v

    def find(self, v: int):
        """Return (root, p) with frame(v) = frame(root) * p."""
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        p = ()
        for u in reversed(path):
            p = _dec_mul(p, self.weight[u])
            self.parent[u] = v
            self.weight[u] = p
        return v, p

    def _absorb(self, keep: int, gone: int, w: tuple):
        """Merge root `gone` into root `keep`; frame(gone) = frame(keep) * w.

        The base vertex (id 0) is never absorbed: expressions are loop
        decorations at the base, and absorbing it would conjugate them by
        the absorbing vertex's frame.
        """
        if gone == self.find(0)[0]:
            keep, gone, w = gone, keep, _dec_inv(w)
        self.parent[gone] = keep
        self.weight[gone] = w
        for x, (t, d) in self.out[gone].items():
            self.pending.append((gone, x, t, d))
        for x, (s, d) in self.inn[gone].items():
            self.pending.append((s, x, gone, d))
        self.out[gone] = {}
        self.inn[gone] = {}

    def add_edge(self, u: int, x: int, v: int, d: tuple = ()):
        self.pending.append((u, x, v, d))

    def run(self):
        # Folding fixpoint: each popped edge is reconciled against both the
        # out-edge of its source and the in-edge of its target; a merge
        # re-queues the edge, since merging can surface new conflicts at the
        # surviving vertex.
        pending = self.pending
        while pending:
            item = pending.pop()
            u, x, v, d = item
            ru, pu = self.find(u)
            rv, pv = self.find(v)
            dd = _dec_mul(pu, d, _dec_inv(pv)) if self.track else ()
            got = self.out[ru].get(x)
            if got is not None:
                t, d0 = got
                rt, pt = self.find(t)
                d0 = _dec_mul(d0, _dec_inv(pt)) if self.track else ()
                self.out[ru][x] = (rt, d0)
                if rt != rv:
                    self._absorb(rt, rv, _dec_mul(_dec_inv(d0), dd))
                    pending.append(item)
                    continue
                if self.track and d0 != dd:
                    raise PreconditionError(
                        "generators are not a free basis of their subgroup"
                    )
            got = self.inn[rv].get(x)
            if got is not None:
                s, ds = got
                rs, ps = self.find(s)
                ds = _dec_mul(ps, ds) if self.track else ()
                self.inn[rv][x] = (rs, ds)
                if rs != ru:
                    self._absorb(ru, rs, _dec_mul(dd, _dec_inv(ds)))
                    pending.append(item)
                    continue
                if self.track and ds != dd:
                    raise PreconditionError(
                        "generators are not a free basis of their subgroup"
                    )
            self.out[ru][x] = (rv, dd)
            self.inn[rv][x] = (ru, dd)


class SubgroupGraph:
    """Folded based covering graph; immutable and canonically labeled.

    fwd[x][v] is the target of the x-edge out of v (-1 if absent);
    bwd[x][v] the source of the x-edge into v.  Base vertex is 0.
    """

    __slots__ = ("k", "m", "fwd", "bwd", "complete", "_hash")

    def __init__(self, k, m, fwd, bwd, complete):
        self.k = k
        self.m = m
        self.fwd = fwd
        self.bwd = bwd
        self.complete = complete
        self._hash = hash((k, fwd))

    def __eq__(self, other):
        return (
            isinstance(other, SubgroupGraph)
            and other.k == self.k
            and other.fwd == self.fwd
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        tag = "" if self.complete else ", infinite index"
        return f"SubgroupGraph(k={self.k}, m={self.m}{tag})"

    def sort_key(self):
        return (self.m, self.fwd)


def _canonicalize(k, base, out_maps, in_maps, decorations=None):
    """BFS relabeling from `base`; returns canonical arrays (+ decorations)."""
    order = [base]
    pos = {base: 0}
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for x in range(k):
            t = out_maps[v].get(x)
            if t is not None and t[0] not in pos:
                pos[t[0]] = len(order)
                order.append(t[0])
            s = in_maps[v].get(x)
            if s is not None and s[0] not in pos:
                pos[s[0]] = len(order)
                order.append(s[0])
    m = len(order)
    fwd = [[-1] * m for _ in range(k)]
    bwd = [[-1] * m for _ in range(k)]
    decf = [[None] * m for _ in range(k)] if decorations is not None else None
    complete = True
    for v in order:
        for x in range(k):
            t = out_maps[v].get(x)
            if t is None:
                complete = False
            else:
                fwd[x][pos[v]] = pos[t[0]]
                bwd[x][pos[t[0]]] = pos[v]
                if decf is not None:
                    decf[x][pos[v]] = t[1]
    graph = SubgroupGraph(
        k,
        m,
        tuple(tuple(r) for r in fwd),
        tuple(tuple(r) for r in bwd),
        complete,
    )
    if decf is None:
        return graph
    return graph, decf


def _fold_words(words, k: int, track: bool):
    folder = _Folder(k, track)
    base = folder.new_vertex()
    for gi, w in enumerate(words):
        if w.rank != k:
            raise PreconditionError(f"word rank {w.rank} does not match k={k}")
        cur = base
        n = len(w.letters)
        for i, ch in enumerate(w.letters):
            nxt = base if i == n - 1 else folder.new_vertex()
            dec = (gi + 1,) if (track and i == n - 1) else ()
            x = ord(ch.lower()) - ord("a")
            if x >= k:
                raise PreconditionError(f"letter {ch!r} outside alphabet of rank {k}")
            if ch.islower():
                folder.add_edge(cur, x, nxt, dec)
            else:
                folder.add_edge(nxt, x, cur, _dec_inv(dec))
            cur = nxt
        if n == 0 and track:
            raise PreconditionError("identity word cannot be part of a free basis")
    folder.run()
    rbase, pbase = folder.find(base)
    out_maps = {}
    in_maps = {}
    seen = {rbase}
    stack = [rbase]
    while stack:
        v = stack.pop()
        omap = {}
        imap = {}
        for x, (t, d) in folder.out[v].items():
            rt, pt = folder.find(t)
            omap[x] = (rt, _dec_mul(d, _dec_inv(pt)) if track else ())
            if rt not in seen:
                seen.add(rt)
                stack.append(rt)
        for x, (s, d) in folder.inn[v].items():
            rs, ps = folder.find(s)
            imap[x] = (rs, ())
            if rs not in seen:
                seen.add(rs)
                stack.append(rs)
        out_maps[v] = omap
        in_maps[v] = imap
    # frame of the base must be trivial for expressions to be based at it
    assert not track or pbase == (), "base frame must be trivial"
    return _canonicalize(
        k, rbase, out_maps, in_maps, decorations=True if track else None
    )


def from_generators(words, k: int) -> SubgroupGraph:
    """Fold the wedge of the given words.  The result is complete exactly
    when the generated subgroup has finite index; incomplete graphs are
    legal values and mark infinite index."""
    return _fold_words(list(words), k, track=False)


def fold_with_expressions(words, k: int):
    """Fold `words` (which must freely generate their subgroup) and express
    each canonical basis element of the result in terms of them.

    Returns (graph, exprs) where exprs[j] is a reduced tuple over +-(i+1)
    meaning words[i]^{+-1}, multiplying left to right.
    """
    graph, decf = _fold_words(list(words), k, track=True)
    data = _tree_data(graph)
    exprs = []
    potentials = [None] * graph.m
    potentials[0] = ()
    for v, x in data.tree_order:
        w = graph.fwd[x][v]
        if potentials[w] is None:
            potentials[w] = _dec_mul(potentials[v], decf[x][v])
        else:
            potentials[v] = _dec_mul(potentials[w], _dec_inv(decf[x][v]))
    for v, x in data.nontree:
        w = graph.fwd[x][v]
        exprs.append(_dec_mul(potentials[v], decf[x][v], _dec_inv(potentials[w])))
    return graph, tuple(exprs)


def whole_group(k: int) -> SubgroupGraph:
    fwd = tuple((0,) for _ in range(k))
    return SubgroupGraph(k, 1, fwd, fwd, True)


def from_permutations(k: int, perms) -> SubgroupGraph:
    """Covering graph from k permutations of {0..m-1} with transitive joint
    action; base is vertex 0 (then relabeled canonically)."""
    m = len(perms[0])
    for p in perms:
        if sorted(p) != list(range(m)):
            raise PreconditionError(f"not a permutation of 0..{m - 1}: {p}")
    if not _is_transitive(perms, m):
        raise PreconditionError("permutations do not act transitively")
    out_maps = {v: {x: (perms[x][v], ()) for x in range(k)} for v in range(m)}
    in_maps = {v: {} for v in range(m)}
    for x in range(k):
        for v in range(m):
            in_maps[perms[x][v]][x] = (v, ())
    return _canonicalize(k, 0, out_maps, in_maps)


def _is_transitive(perms, m: int) -> bool:
    seen = {0}
    stack = [0]
    inv = [[0] * m for _ in perms]
    for x, p in enumerate(perms):
        for v in range(m):
            inv[x][p[v]] = v
    while stack:
        v = stack.pop()
        for x in range(len(perms)):
            for t in (perms[x][v], inv[x][v]):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
    return len(seen) == m


# -- basic queries ---------------------------------------------------------------


def trace(graph: SubgroupGraph, word, start: int = 0):
    """Follow `word` (a Word or letter string) from `start`; None if it
    leaves the partial maps."""
    letters = word.letters if isinstance(word, Word) else word
    v = start
    for ch in letters:
        x = ord(ch.lower()) - ord("a")
        v = graph.fwd[x][v] if ch.islower() else graph.bwd[x][v]
        if v == -1 or v is None:
            return None
    return v


def contains(graph: SubgroupGraph, word) -> bool:
    return trace(graph, word) == 0


def index(graph: SubgroupGraph) -> int:
    if not graph.complete:
        raise InfiniteIndexError("subgroup has infinite index")
    return graph.m


def is_subgroup(inner: SubgroupGraph, outer: SubgroupGraph) -> bool:
    """True iff every based loop of `inner` is one of `outer`."""
    if inner.k != outer.k:
        raise PreconditionError("rank mismatch")
    for w in basis(inner):
        if not contains(outer, w):
            return False
    return True


@lru_cache(maxsize=2048)
def intersect(g1: SubgroupGraph, g2: SubgroupGraph) -> SubgroupGraph:
    """Based component of the fiber product."""
    if g1.k != g2.k:
        raise PreconditionError("rank mismatch")
    k = g1.k
    pos = {(0, 0): 0}
    order = [(0, 0)]
    qi = 0
    while qi < len(order):
        v1, v2 = order[qi]
        qi += 1
        for x in range(k):
            for t in (
                (g1.fwd[x][v1], g2.fwd[x][v2]),
                (g1.bwd[x][v1], g2.bwd[x][v2]),
            ):
                if -1 not in t and t not in pos:
                    pos[t] = len(order)
                    order.append(t)
    out_maps = {}
    in_maps = {}
    for pair in order:
        v1, v2 = pair
        omap = {}
        imap = {}
        for x in range(k):
            t = (g1.fwd[x][v1], g2.fwd[x][v2])
            if -1 not in t and t in pos:
                omap[x] = (t, ())
            s = (g1.bwd[x][v1], g2.bwd[x][v2])
            if -1 not in s and s in pos:
                imap[x] = (s, ())
        out_maps[pair] = omap
        in_maps[pair] = imap
    return _canonicalize(k, (0, 0), out_maps, in_maps)


# -- spanning tree, basis, rewriting ----------------------------------------------


class _TreeData:
    __slots__ = ("tree_edges", "tree_order", "tree_words", "nontree", "nontree_index", "basis")

    def __init__(self, tree_edges, tree_order, tree_words, nontree, nontree_index, basis):
        self.tree_edges = tree_edges
        self.tree_order = tree_order
        self.tree_words = tree_words
        self.nontree = nontree
        self.nontree_index = nontree_index
        self.basis = basis


@lru_cache(maxsize=4096)
def _tree_data(graph: SubgroupGraph) -> _TreeData:
    k, m = graph.k, graph.m
    tree_edges = set()  # forward pairs (v, x) used by the tree
    tree_order = []  # those pairs in discovery order
    tree_words = [None] * m
    tree_words[0] = ""
    queue = [0]
    qi = 0
    visited = [False] * m
    visited[0] = True
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for x in range(k):
            t = graph.fwd[x][v]
            if t != -1 and not visited[t]:
                visited[t] = True
                tree_edges.add((v, x))
                tree_order.append((v, x))
                tree_words[t] = tree_words[v] + _LOWER[x]
                queue.append(t)
            s = graph.bwd[x][v]
            if s != -1 and not visited[s]:
                visited[s] = True
                tree_edges.add((s, x))
                tree_order.append((s, x))
                tree_words[s] = tree_words[v] + _LOWER[x].upper()
                queue.append(s)
    nontree = []
    for v in range(m):
        for x in range(k):
            if graph.fwd[x][v] != -1 and (v, x) not in tree_edges:
                nontree.append((v, x))
    basis_words = []
    for v, x in nontree:
        w = graph.fwd[x][v]
        basis_words.append(
            Word(k, tree_words[v] + _LOWER[x] + tree_words[w][::-1].swapcase())
        )
    nontree_index = {e: i for i, e in enumerate(nontree)}
    return _TreeData(
        frozenset(tree_edges),
        tuple(tree_order),
        tuple(tree_words),
        tuple(nontree),
        nontree_index,
        tuple(basis_words),
    )


def basis(graph: SubgroupGraph) -> tuple[Word, ...]:
    """Free basis from the canonical spanning tree (Schreier generators);
    size m(k-1)+1 for a complete graph on m vertices."""
    return _tree_data(graph).basis


def tree_words(graph: SubgroupGraph) -> tuple[str, ...]:
    """Canonical coset representatives: the tree path to each vertex."""
    return _tree_data(graph).tree_words


def express(graph: SubgroupGraph, word) -> tuple[int, ...]:
    """Rewrite a subgroup element in the canonical basis.

    Returns signed 1-based indices into basis(graph), multiplying left to
    right.  Raises if the word is not in the subgroup.
    """
    data = _tree_data(graph)
    letters = word.letters if isinstance(word, Word) else word
    v = 0
    out = []
    for ch in letters:
        x = ord(ch.lower()) - ord("a")
        if ch.islower():
            t = graph.fwd[x][v]
            if t == -1:
                raise PreconditionError(f"{letters!r} leaves the subgroup graph")
            idx = data.nontree_index.get((v, x))
            if idx is not None:
                out.append(idx + 1)
            v = t
        else:
            s = graph.bwd[x][v]
            if s == -1:
                raise PreconditionError(f"{letters!r} leaves the subgroup graph")
            idx = data.nontree_index.get((s, x))
            if idx is not None:
                out.append(-(idx + 1))
            v = s
    if v != 0:
        raise PreconditionError(f"{letters!r} is not in the subgroup")
    return _dec_mul(out)


def substitute(expr, images) -> Word:
    """Evaluate a signed-index expression against image words."""
    if not images:
        raise PreconditionError("no images to substitute")
    rank = images[0].rank
    out = Word(rank, "", _reduced=True)
    for s in expr:
        w = images[s - 1] if s > 0 else ~images[-s - 1]
        out = out * w
    return out


# -- enumeration ----------------------------------------------------------------


def enumerate_subgroups(k: int, max_index: int) -> list[SubgroupGraph]:
    """All subgroups of F_k of index <= max_index, canonically sorted.

    Realized by enumerating k-tuples of permutations with transitive joint
    action and deduplicating by the canonical based relabeling.
    """
    from itertools import permutations, product

    if k < 1 or max_index < 1:
        raise PreconditionError("need k >= 1 and max_index >= 1")
    work = 0
    fact = 1
    for m in range(1, max_index + 1):
        fact *= m
        work += fact**k * m
    limits.guard(work, f"enumerate_subgroups(k={k}, N={max_index})")
    out = []
    for m in range(1, max_index + 1):
        seen = set()
        perms_m = list(permutations(range(m)))
        for tup in product(perms_m, repeat=k):
            if not _is_transitive(tup, m):
                continue
            g = from_permutations(k, tup)
            if g not in seen:
                seen.add(g)
                out.append(g)
    out.sort(key=SubgroupGraph.sort_key)
    return out


def profinite_kernel(k: int, max_index: int) -> SubgroupGraph:
    """Intersection of all subgroups of index <= max_index."""
    out = whole_group(k)
    for g in enumerate_subgroups(k, max_index):
        limits.guard(
            out.m * g.m * k * 4,
            f"profinite_kernel(k={k}, N={max_index}): partial index reached {out.m}",
        )
        out = intersect(out, g)
    return out


# -- text format ------------------------------------------------------------------
#
#   F <k>                         F <k> graph <m>
#   <one generator word per line> <k permutation lines, images of 1..m>


def format_subgroup(graph: SubgroupGraph) -> str:
    lines = [f"F {graph.k} graph {graph.m}"]
    for x in range(graph.k):
        lines.append(" ".join(str(t + 1) for t in graph.fwd[x]))
    return "\n".join(lines)


def format_subgroup_inline(graph: SubgroupGraph) -> str:
    perms = " ; ".join(
        " ".join(str(t + 1) for t in graph.fwd[x]) for x in range(graph.k)
    )
    return f"F {graph.k} graph {graph.m} : {perms}"


def parse_subgroup(text: str) -> SubgroupGraph:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty subgroup text")
    if ":" in lines[0]:
        return parse_subgroup_inline(lines[0])
    head = lines[0].split()
    if not head or head[0] != "F":
        raise ParseError(f"expected 'F <k>' header, got {lines[0]!r}")
    k = int(head[1])
    if len(head) == 4 and head[2] == "graph":
        m = int(head[3])
        if len(lines) != k + 1:
            raise ParseError(f"expected {k} permutation lines")
        perms = []
        for ln in lines[1:]:
            imgs = [int(p) - 1 for p in ln.split()]
            if len(imgs) != m:
                raise ParseError(f"expected {m} images per line, got {ln!r}")
            perms.append(imgs)
        return from_permutations(k, perms)
    if len(head) != 2:
        raise ParseError(f"bad subgroup header {lines[0]!r}")
    words = [Word(k, ln if ln != "1" else "") for ln in lines[1:]]
    return from_generators(words, k)


def parse_subgroup_inline(line: str) -> SubgroupGraph:
    head, _, body = line.partition(":")
    parts = head.split()
    if len(parts) != 4 or parts[0] != "F" or parts[2] != "graph":
        raise ParseError(f"expected 'F <k> graph <m> : ...', got {line!r}")
    k, m = int(parts[1]), int(parts[3])
    perms = []
    for chunk in body.split(";"):
        imgs = [int(p) - 1 for p in chunk.split()]
        if len(imgs) != m:
            raise ParseError(f"expected {m} images per permutation in {line!r}")
        perms.append(imgs)
    if len(perms) != k:
        raise ParseError(f"expected {k} permutations in {line!r}")
    return from_permutations(k, perms)
