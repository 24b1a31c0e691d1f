"""Truncated inverse systems of finite-index subgroups and their morphisms.

The depth-N system has one object per subgroup of index <= N, ordered by
reverse inclusion, with inclusion bonding maps.  Morphisms are stored in
straightened form: strictly commuting components, one per target object,
each a commensuration from a materialized source subgroup (which may have
index beyond N: truncation overflow is recorded, not an error).

zeta realizes a commensuration phi: H -> K as a system endomorphism: the
component at an object G is phi restricted to phi^-1(G ∩ K).  reconstruct
reads the commensuration back off the component at the top object (the
whole group), where the component is phi itself.
"""

from __future__ import annotations

from functools import lru_cache

from . import commensurations as comm_mod
from . import lattices, stallings
from .errors import PreconditionError


def _ops(tag):
    if tag == "Z":
        return lattices
    return stallings


@lru_cache(maxsize=4096)
def _meet(tag, a, b):
    return _ops(tag).intersect(a, b)


def _inline(tag, obj):
    if tag == "Z":
        return lattices.format_lattice_inline(obj)
    return stallings.format_subgroup_inline(obj)


def _enumerate(tag, rank, depth):
    if tag == "Z":
        return lattices.enumerate_lattices(rank, depth)
    return stallings.enumerate_subgroups(rank, depth)


class TruncatedSystem:
    """Objects, reverse-inclusion bonds, and recorded pairwise meets; a
    meet of index beyond the depth is flagged (idx None) but materialized."""

    __slots__ = ("tag", "rank", "depth", "objects", "index_of", "bonds", "meets")

    def __init__(self, tag, rank, depth, objects):
        self.tag = tag
        self.rank = rank
        self.depth = depth
        self.objects = tuple(objects)
        self.index_of = {obj: i for i, obj in enumerate(self.objects)}
        ops = _ops(tag)
        bonds = []
        for i, big in enumerate(self.objects):
            for j, small in enumerate(self.objects):
                if i != j and ops.is_subgroup(small, big):
                    bonds.append((i, j))
        self.bonds = tuple(bonds)
        # bonding maps are inclusions, so they compose automatically;
        # assert the transitivity that statement rests on
        bond_set = set(bonds)
        for i, j in bonds:
            for j2, l in bonds:
                if j2 == j:
                    assert (i, l) in bond_set, "inclusion bonds failed to compose"
        meets = {}
        for i in range(len(self.objects)):
            for j in range(i + 1, len(self.objects)):
                m = _meet(tag, self.objects[i], self.objects[j])
                meets[(i, j)] = (m, self.index_of.get(m))
        self.meets = meets

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSystem)
            and (other.tag, other.rank, other.depth, other.objects)
            == (self.tag, self.rank, self.depth, self.objects)
        )

    def __hash__(self):
        return hash((self.tag, self.rank, self.depth, self.objects))

    def __repr__(self):
        return (
            f"TruncatedSystem({self.tag} rank={self.rank}, depth={self.depth}, "
            f"{len(self.objects)} objects)"
        )

    @property
    def top(self):
        return self.objects[0]


@lru_cache(maxsize=64)
def build_system(tag: str, rank: int, depth: int) -> TruncatedSystem:
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    objects = _enumerate(tag, rank, depth)
    system = TruncatedSystem(tag, rank, depth, objects)
    assert _ops(tag).index(system.top) == 1
    return system


class SystemMorphism:
    """Strictly commuting morphism; components[j] maps a materialized
    source subgroup into target.objects[j]."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components, check=True):
        self.source = source
        self.target = target
        self.components = tuple(components)
        if check:
            self.check_strict()

    def check_strict(self):
        """Assert strict commutation: along every bond, the deeper
        component is the restriction of the shallower one (verified on
        basis elements)."""
        ops = _ops(self.target.tag)
        for i, j in self.target.bonds:
            fi, fj = self.components[i], self.components[j]
            if not ops.is_subgroup(fj.domain, fi.domain):
                raise PreconditionError(
                    f"components at bond ({i},{j}) have non-nested sources"
                )
            for b in _domain_basis(fj):
                if comm_mod.evaluate(fi, b) != comm_mod.evaluate(fj, b):
                    raise PreconditionError(
                        f"components at bond ({i},{j}) do not commute strictly"
                    )
        for j, f in enumerate(self.components):
            if not ops.is_subgroup(f.codomain, self.target.objects[j]):
                raise PreconditionError(f"component {j} does not land in its object")

    def component_at(self, subgroup):
        """The component at an arbitrary subgroup object (materializing
        beyond the recorded depth via the top component's rule)."""
        idx = self.target.index_of.get(subgroup)
        if idx is not None:
            return self.components[idx]
        top = self.components[0]
        return zeta_component(top, subgroup)

    def __repr__(self):
        return f"SystemMorphism({len(self.components)} components, depth {self.target.depth})"


def _domain_basis(comm):
    if comm.tag == "Z":
        return comm.domain.cols
    return stallings.basis(comm.domain)


def zeta_component(phi, obj):
    """phi restricted to phi^-1(obj ∩ codomain): the component of
    zeta(phi) at the object `obj`."""
    meet = _meet(phi.tag, obj, phi.codomain)
    src = comm_mod.preimage_subgroup(phi, meet)
    return comm_mod.restriction(phi, src)


@lru_cache(maxsize=512)
def zeta(phi, depth: int) -> SystemMorphism:
    """Realize a commensuration as a depth-N system endomorphism.  Source
    subgroups deeper than N are materialized and recorded, which keeps the
    commutation exact instead of approximate."""
    system = build_system(phi.tag, phi.rank, depth)
    components = [zeta_component(phi, obj) for obj in system.objects]
    return SystemMorphism(system, system, components)


def identity_morphism(system: TruncatedSystem) -> SystemMorphism:
    ident = comm_mod.identity_comm(system.tag, system.rank)
    comps = [comm_mod.restriction(ident, obj) for obj in system.objects]
    return SystemMorphism(system, system, comps, check=False)


def reconstruct(morphism: SystemMorphism):
    """Read the commensuration off the top component (at the whole group).

    For morphism = zeta(phi, N) this is phi itself (up to equivalence);
    for hand-built morphisms the declared preconditions are diagnosed.
    """
    ops = _ops(morphism.target.tag)
    if ops.index(morphism.target.top) != 1:
        raise PreconditionError(
            "not a pro-automorphism at this depth: no component at the whole group"
        )
    # injectivity and finite-index image are enforced by the Commensuration
    # type itself, so the top component is the answer
    return morphism.components[0]


def compose_morphisms(m1: SystemMorphism, m2: SystemMorphism) -> SystemMorphism:
    """m1 after m2, chasing index functions: the component at an object is
    m1's component there, precomposed with m2's component at its source."""
    if m2.target != m1.source:
        raise PreconditionError("systems do not match for composition")
    comps = []
    for f1 in m1.components:
        f2 = m2.component_at(f1.domain)
        comps.append(comm_mod.compose(f1, f2))
    return SystemMorphism(m2.source, m1.target, comps, check=False)


def morphisms_equivalent(m1: SystemMorphism, m2: SystemMorphism) -> bool:
    """Component-wise agreement after restriction to the intersection of
    the two source subgroups (the depth-N semantic of pro-equivalence)."""
    if m1.target != m2.target:
        return False
    return all(
        comm_mod.equivalent(c1, c2) for c1, c2 in zip(m1.components, m2.components)
    )


def cofinal_restrict(system: TruncatedSystem, predicate):
    """Restrict to the subsystem selected by `predicate`, with the
    restriction morphism and an explicit inverse up to equivalence.

    Cofinality within visible depth: every object must contain either a
    selected object, or a materialized intersection with one satisfying
    the predicate; otherwise the uncovered object is reported.
    """
    ops = _ops(system.tag)
    selected = [i for i, obj in enumerate(system.objects) if predicate(obj)]
    if not selected:
        raise PreconditionError("predicate selects no objects")
    covers = []
    for i, obj in enumerate(system.objects):
        cover = None
        for j in selected:
            if ops.is_subgroup(system.objects[j], obj):
                cover = system.objects[j]
                break
        if cover is None:
            for j in selected:
                meet = _meet(system.tag, obj, system.objects[j])
                if predicate(meet):
                    cover = meet
                    break
        if cover is None:
            raise PreconditionError(
                f"predicate is not cofinal within depth {system.depth}: "
                f"object not covered: {_inline(system.tag, obj)}"
            )
        covers.append(cover)
    sub = TruncatedSystem(
        system.tag, system.rank, system.depth, [system.objects[j] for j in selected]
    )
    ident = comm_mod.identity_comm(system.tag, system.rank)
    restr = SystemMorphism(
        system, sub, [comm_mod.restriction(ident, obj) for obj in sub.objects], check=False
    )
    inverse = SystemMorphism(
        sub, system, [comm_mod.restriction(ident, c) for c in covers], check=False
    )
    return sub, restr, inverse


# -- dump format -------------------------------------------------------------------


def format_system(system: TruncatedSystem) -> str:
    ops = _ops(system.tag)
    lines = []
    for i, obj in enumerate(system.objects):
        lines.append(
            f"idx={i} index={ops.index(obj)} subgroup={_inline(system.tag, obj)}"
        )
    for i, j in system.bonds:
        lines.append(f"bond {i} {j}")
    return "\n".join(lines)


def format_morphism(m: SystemMorphism) -> str:
    from .freewords import serialize_vector

    lines = [format_system(m.target)]
    for j, c in enumerate(m.components):
        if c.tag == "Z":
            for col in c.domain.cols:
                img = comm_mod.evaluate(c, col)
                lines.append(
                    f"comp {j}: {serialize_vector(col)} -> {serialize_vector(img)}"
                )
        else:
            for b, img in zip(stallings.basis(c.domain), c.images):
                lines.append(f"comp {j}: {b} -> {img}")
    return "\n".join(lines)
