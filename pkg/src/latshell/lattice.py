"""Finite posets and lattices presented by Hasse diagrams.

Elements are dense integer ids ``0..m-1`` carrying optional string names.
The order relation is stored as an m-by-m boolean matrix, and joins/meets
as m-by-m id tables, so every order query is a table lookup.  Instances
are immutable after construction and safe to share across threads or
worker processes; the only internal mutation is memoisation of interval
chain enumerations.

Use :func:`build_poset` / :func:`as_lattice` for validated construction.
The ``FinitePoset`` constructor itself trusts its arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, reduce
from math import factorial, prod

import numpy as np

from .errors import (
    BudgetExceeded,
    CycleDetected,
    NotALattice,
    NotTransitivelyReduced,
    UnknownElement,
    ValidationError,
)

DEFAULT_CHAIN_BUDGET = 1_000_000


class FinitePoset:
    """A finite poset: element names, cover pairs, and the full order matrix.

    ``covers`` holds id pairs ``(u, v)`` with u covered by v; ``leq[u, v]``
    is True iff u <= v.  Consistency of the three fields is the caller's
    responsibility; :func:`build_poset` validates untrusted input.
    """

    def __init__(self, names, covers, leq):
        self.names = tuple(names)
        self.covers = tuple(sorted(tuple(c) for c in covers))
        leq = np.array(leq, dtype=bool)
        leq.setflags(write=False)
        self.leq = leq

    @property
    def m(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(name) from None

    @cached_property
    def _index(self):
        return {nm: i for i, nm in enumerate(self.names)}

    def name_of(self, i):
        return self.names[i]

    def le(self, u, v):
        return bool(self.leq[u, v])

    def lt(self, u, v):
        return u != v and bool(self.leq[u, v])

    @cached_property
    def upper_covers(self):
        out = [[] for _ in range(self.m)]
        for u, v in self.covers:
            out[u].append(v)
        return [sorted(l) for l in out]

    @cached_property
    def lower_covers(self):
        out = [[] for _ in range(self.m)]
        for u, v in self.covers:
            out[v].append(u)
        return [sorted(l) for l in out]

    @cached_property
    def linear_extension(self):
        """Element ids sorted compatibly with the order (ties by id)."""
        below = self.leq.sum(axis=0)
        return tuple(sorted(range(self.m), key=lambda i: (below[i], i)))

    def __repr__(self):
        return f"FinitePoset({self.m} elements, {len(self.covers)} covers)"


def build_poset(elements, cover_pairs):
    """Validate and build a poset from element labels and cover pairs.

    ``cover_pairs`` must be the transitive reduction of the intended order:
    a pair already implied by other pairs raises NotTransitivelyReduced
    rather than being silently dropped.  Cycles and unknown or duplicate
    labels are rejected.
    """
    names = list(elements)
    if len(names) != len(set(names)):
        seen, dupes = set(), []
        for nm in names:
            (dupes if nm in seen else seen).__contains__  # noqa: B018
            if nm in seen:
                dupes.append(nm)
            seen.add(nm)
        raise ValidationError(f"duplicate element ids: {dupes!r}")
    index = {nm: i for i, nm in enumerate(names)}
    m = len(names)

    pairs = []
    seen_pairs = set()
    for u, v in cover_pairs:
        if u not in index:
            raise UnknownElement(u)
        if v not in index:
            raise UnknownElement(v)
        p = (index[u], index[v])
        if p[0] == p[1]:
            raise CycleDetected([u])
        if p in seen_pairs:
            raise ValidationError(f"duplicate cover pair ({u!r}, {v!r})")
        seen_pairs.add(p)
        pairs.append(p)
    pairs.sort()

    succ = [[] for _ in range(m)]
    indeg = [0] * m
    for u, v in pairs:
        succ[u].append(v)
        indeg[v] += 1

    # Kahn's algorithm; leftovers are exactly the elements on cycles.
    queue = [i for i in range(m) if indeg[i] == 0]
    topo = []
    while queue:
        u = queue.pop()
        topo.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(topo) != m:
        stuck = [names[i] for i in range(m) if indeg[i] > 0]
        raise CycleDetected(stuck)

    leq = np.zeros((m, m), dtype=bool)
    for u in reversed(topo):
        leq[u, u] = True
        for v in succ[u]:
            leq[u] |= leq[v]

    for u, v in pairs:
        for w in succ[u]:
            if w != v and leq[w, v]:
                raise NotTransitivelyReduced((names[u], names[v]))

    return FinitePoset(names, pairs, leq)


class FiniteLattice:
    """A finite lattice: a poset plus join/meet tables, bounds, and atoms.

    Build one with :func:`as_lattice`; the constructor trusts its inputs.
    """

    def __init__(self, poset, bottom, top, join_table, meet_table, atoms, atom_support):
        self.poset = poset
        self.bottom = bottom
        self.top = top
        self.join_table = join_table
        self.meet_table = meet_table
        self.atoms = tuple(atoms)
        self.atom_support = tuple(atom_support)
        self._chain_cache = {}

    # --- delegation to the underlying poset ---

    @property
    def names(self):
        return self.poset.names

    @property
    def m(self):
        return self.poset.m

    @property
    def covers(self):
        return self.poset.covers

    @property
    def leq(self):
        return self.poset.leq

    def index(self, name):
        return self.poset.index(name)

    def name_of(self, i):
        return self.poset.names[i]

    def le(self, u, v):
        return bool(self.poset.leq[u, v])

    def lt(self, u, v):
        return self.poset.lt(u, v)

    @property
    def upper_covers(self):
        return self.poset.upper_covers

    @property
    def lower_covers(self):
        return self.poset.lower_covers

    # --- lattice operations ---

    def join(self, u, v):
        return int(self.join_table[u, v])

    def meet(self, u, v):
        return int(self.meet_table[u, v])

    def join_set(self, ids):
        """Join of a collection of elements; the empty join is the bottom."""
        return reduce(lambda a, b: int(self.join_table[a, b]), ids, self.bottom)

    def meet_set(self, ids):
        return reduce(lambda a, b: int(self.meet_table[a, b]), ids, self.top)

    @cached_property
    def cover_set(self):
        return frozenset(self.covers)

    @cached_property
    def cover_position(self):
        return {pair: k for k, pair in enumerate(self.covers)}

    @cached_property
    def cover_new_atoms(self):
        """Per cover (u, v): the atoms below v but not below u, ascending.

        This is the label set of a minimal labeling, before an atom
        ordering is applied; it depends only on the lattice.
        """
        return tuple(
            tuple(sorted(self.atom_support[v] - self.atom_support[u]))
            for u, v in self.covers
        )

    @cached_property
    def interval_pairs(self):
        """All (lo, hi) with lo < hi, ascending by id pair."""
        m = self.m
        leq = self.poset.leq
        return tuple(
            (lo, hi) for lo in range(m) for hi in range(m) if lo != hi and leq[lo, hi]
        )

    def interval(self, lo, hi):
        return Interval(self, lo, hi)

    def _enumerate_chains(self, lo, hi, desc=False, budget=None):
        """DFS enumeration of maximal chains of [lo, hi] as
        (element tuple, cover-index tuple) pairs."""
        if not self.le(lo, hi):
            raise ValidationError(
                f"({self.name_of(lo)!r}, {self.name_of(hi)!r}) is not an interval"
            )
        cap = DEFAULT_CHAIN_BUDGET if budget is None else budget
        mask = self.poset.leq[lo] & self.poset.leq[:, hi]
        pos = self.cover_position
        ups = self.upper_covers
        chains = []
        path = [lo]
        covs = []

        def walk(x):
            if x == hi:
                if len(chains) >= cap:
                    raise BudgetExceeded(
                        f"more than {cap} maximal chains in interval "
                        f"({self.name_of(lo)!r}, {self.name_of(hi)!r})"
                    )
                chains.append((tuple(path), tuple(covs)))
                return
            children = ups[x]
            if desc:
                children = reversed(children)
            for y in children:
                if mask[y]:
                    path.append(y)
                    covs.append(pos[(x, y)])
                    walk(y)
                    path.pop()
                    covs.pop()

        walk(lo)
        return chains

    def _interval_chains(self, lo, hi, budget=None):
        """Cached ascending-order chain enumeration for [lo, hi]."""
        cached = self._chain_cache.get((lo, hi))
        if cached is None:
            cached = tuple(self._enumerate_chains(lo, hi))
            self._chain_cache[(lo, hi)] = cached
        if budget is not None and len(cached) > budget:
            raise BudgetExceeded(
                f"{len(cached)} maximal chains in interval exceed budget {budget}"
            )
        return cached

    def maximal_chains(self, lo, hi, reverse=False, budget=None):
        """All maximal chains of [lo, hi], in deterministic DFS order
        (ascending element id; descending when ``reverse`` is set)."""
        if reverse:
            raw = self._enumerate_chains(lo, hi, desc=True, budget=budget)
        else:
            raw = self._interval_chains(lo, hi, budget=budget)
        return [SaturatedChain(self, elems) for elems, _ in raw]

    def __repr__(self):
        return f"FiniteLattice({self.m} elements, {len(self.atoms)} atoms)"


def as_lattice(poset):
    """Check that a poset is a lattice and equip it with join/meet tables.

    Every pair must have a unique least upper bound and a unique greatest
    lower bound; the first offending pair is reported together with its
    minimal upper (or maximal lower) bounds.
    """
    m = poset.m
    if m == 0:
        raise ValidationError("the empty poset is not a lattice")
    leq = poset.leq
    geq = leq.T

    # The least upper bound z of {u, v} is characterised by
    # uppers(z) == uppers(u) & uppers(v), so a row fingerprint lookup
    # finds it (or proves it absent) in one step.
    row_id = {leq[i].tobytes(): i for i in range(m)}
    col_id = {geq[i].tobytes(): i for i in range(m)}

    join = np.zeros((m, m), dtype=np.int64)
    meet = np.zeros((m, m), dtype=np.int64)
    for u in range(m):
        for v in range(u, m):
            ups = leq[u] & leq[v]
            z = row_id.get(ups.tobytes())
            if z is None:
                bounds = _minimal_of(poset, np.flatnonzero(ups))
                raise NotALattice(
                    (poset.names[u], poset.names[v]), "join",
                    [poset.names[b] for b in bounds],
                )
            join[u, v] = join[v, u] = z
            downs = geq[u] & geq[v]
            w = col_id.get(downs.tobytes())
            if w is None:
                bounds = _maximal_of(poset, np.flatnonzero(downs))
                raise NotALattice(
                    (poset.names[u], poset.names[v]), "meet",
                    [poset.names[b] for b in bounds],
                )
            meet[u, v] = meet[v, u] = w

    bottom = next(i for i in range(m) if leq[i].all())
    top = next(i for i in range(m) if leq[:, i].all())
    join.setflags(write=False)
    meet.setflags(write=False)

    atoms = tuple(sorted(poset.upper_covers[bottom]))
    atom_support = tuple(
        frozenset(a for a in atoms if leq[a, x]) for x in range(m)
    )
    return FiniteLattice(poset, bottom, top, join, meet, atoms, atom_support)


def _minimal_of(poset, ids):
    return [i for i in ids if not any(poset.lt(j, i) for j in ids)]


def _maximal_of(poset, ids):
    return [i for i in ids if not any(poset.lt(i, j) for j in ids)]


@dataclass(frozen=True)
class Interval:
    """The interval [lo, hi] of a lattice."""

    lattice: FiniteLattice = field(repr=False, compare=False)
    lo: int
    hi: int

    def __post_init__(self):
        if not self.lattice.le(self.lo, self.hi):
            raise ValidationError(
                f"({self.lattice.name_of(self.lo)!r}, "
                f"{self.lattice.name_of(self.hi)!r}) is not an interval"
            )

    @cached_property
    def members(self):
        leq = self.lattice.poset.leq
        mask = leq[self.lo] & leq[:, self.hi]
        return tuple(int(i) for i in np.flatnonzero(mask))

    def maximal_chains(self, reverse=False, budget=None):
        return self.lattice.maximal_chains(self.lo, self.hi, reverse, budget)


@dataclass(frozen=True)
class SaturatedChain:
    """A chain x_1 < x_2 < ... < x_j in which consecutive elements are covers."""

    lattice: FiniteLattice = field(repr=False, compare=False)
    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise ValidationError("a saturated chain needs at least one element")
        cover_set = self.lattice.cover_set
        for u, v in zip(elems, elems[1:]):
            if (u, v) not in cover_set:
                raise ValidationError(
                    f"({self.lattice.name_of(u)!r}, {self.lattice.name_of(v)!r}) "
                    "is not a cover pair"
                )

    @property
    def length(self):
        return len(self.elements) - 1

    @property
    def names(self):
        return tuple(self.lattice.name_of(i) for i in self.elements)


def is_atomic(lattice):
    """Is every element the join of the atoms below it?

    Returns ``(True, None)`` or ``(False, failing_element_id)``.
    """
    for x in range(lattice.m):
        if lattice.join_set(lattice.atom_support[x]) != x:
            return False, x
    return True, None


@dataclass(frozen=True)
class GradedResult:
    ok: bool
    ranks: tuple | None
    failing_interval: tuple | None


def is_graded(lattice):
    """Do all maximal chains from bottom to top have the same length?

    On success the per-element rank function is returned; on failure,
    an interval witnessing chains of different lengths.
    """
    rank = [0] * lattice.m
    lower = lattice.lower_covers
    for x in lattice.poset.linear_extension:
        if lower[x]:
            rank[x] = max(rank[u] + 1 for u in lower[x])
    for u, v in lattice.covers:
        if rank[v] != rank[u] + 1:
            return GradedResult(False, None, (lattice.bottom, v))
    return GradedResult(True, tuple(rank), None)


def maximal_chains(interval, reverse=False, budget=None):
    """Module-level convenience wrapper over Interval.maximal_chains."""
    return interval.maximal_chains(reverse=reverse, budget=budget)


# --- isomorphism and canonical forms ---------------------------------------

def _element_invariants(poset, rounds=2):
    """Per-element isomorphism invariants by iterated neighbourhood refinement."""
    m = poset.m
    leq = poset.leq
    up = poset.upper_covers
    down = poset.lower_covers
    inv = [
        (int(leq[:, i].sum()), int(leq[i, :].sum()), len(down[i]), len(up[i]))
        for i in range(m)
    ]
    for _ in range(rounds):
        inv = [
            (
                inv[i],
                tuple(sorted(inv[j] for j in down[i])),
                tuple(sorted(inv[j] for j in up[i])),
            )
            for i in range(m)
        ]
    return inv


def _invariant_classes(poset):
    inv = _element_invariants(poset)
    classes = {}
    for i, v in enumerate(inv):
        classes.setdefault(v, []).append(i)
    return [classes[v] for v in sorted(classes)], inv


def canonical_key(poset, perm_limit=5_000_000):
    """A relabeling-invariant key: equal keys iff isomorphic posets.

    Minimises the sorted cover-pair tuple over all permutations that
    respect the element invariant classes.  The class restriction is
    itself isomorphism-invariant, so the minimum is a true canonical form.
    """
    classes, _ = _invariant_classes(poset)
    total = prod(factorial(len(c)) for c in classes)
    if total > perm_limit:
        raise BudgetExceeded(
            f"{total} candidate relabelings exceed the canonicalisation limit"
        )
    m = poset.m
    covers = poset.covers
    best = None
    perm = [0] * m
    for choice in itertools.product(*(itertools.permutations(c) for c in classes)):
        pos = 0
        for ordered in choice:
            for e in ordered:
                perm[e] = pos
                pos += 1
        key = tuple(sorted((perm[u], perm[v]) for u, v in covers))
        if best is None or key < best:
            best = key
    return (m, best)


def is_isomorphic(a, b):
    """Poset isomorphism test (works for lattices via their posets)."""
    pa = a.poset if isinstance(a, FiniteLattice) else a
    pb = b.poset if isinstance(b, FiniteLattice) else b
    if pa.m != pb.m or len(pa.covers) != len(pb.covers):
        return False
    if sorted(_element_invariants(pa)) != sorted(_element_invariants(pb)):
        return False
    return canonical_key(pa) == canonical_key(pb)
