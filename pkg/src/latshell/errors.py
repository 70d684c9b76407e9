"""Exception hierarchy for latshell."""


class LatShellError(Exception):
    """Base class for all latshell errors."""


class ValidationError(LatShellError):
    """Structurally invalid input: bad poset data, bad file contents, etc."""


class UnknownElement(ValidationError):
    def __init__(self, element):
        super().__init__(f"unknown element: {element!r}")
        self.element = element


class CycleDetected(ValidationError):
    def __init__(self, members=()):
        detail = f" among elements {sorted(members)!r}" if members else ""
        super().__init__(f"cover relation contains a cycle{detail}")
        self.members = tuple(members)


class NotTransitivelyReduced(ValidationError):
    """A cover pair is already implied by a chain of other cover pairs."""

    def __init__(self, pair):
        super().__init__(f"redundant cover pair {pair!r} (implied by other covers)")
        self.pair = pair


class NotALattice(ValidationError):
    """Some pair of elements lacks a unique least upper / greatest lower bound."""

    def __init__(self, pair, kind, bounds):
        self.pair = pair
        self.kind = kind  # "join" or "meet"
        self.bounds = tuple(bounds)
        side = "minimal upper bounds" if kind == "join" else "maximal lower bounds"
        super().__init__(
            f"no unique {kind} for pair {pair!r}; {side}: {list(self.bounds)!r}"
        )


class EmptyLabelSet(LatShellError):
    """A cover contributes no new atom, so the minimal labeling is undefined."""

    def __init__(self, pair):
        super().__init__(f"cover {pair!r} adds no new atom; minimal label undefined")
        self.pair = pair


class NotAtomic(LatShellError):
    def __init__(self, element):
        super().__init__(f"lattice is not atomic: element {element!r} is not a join of atoms")
        self.element = element


class NotELLabeled(LatShellError):
    """Raised by operations whose precondition is a verified EL-labeling."""

    def __init__(self, interval):
        super().__init__(f"labeling fails the EL condition on interval {interval!r}")
        self.interval = interval


class NotPure(LatShellError):
    def __init__(self, facet_sizes):
        super().__init__(f"complex is not pure: facet sizes {sorted(set(facet_sizes))!r}")
        self.facet_sizes = tuple(facet_sizes)


class DuplicateHyperplane(ValidationError):
    def __init__(self, index_a, index_b):
        super().__init__(f"hyperplanes {index_a} and {index_b} have parallel normals")
        self.indices = (index_a, index_b)


class DimensionMismatch(ValidationError):
    def __init__(self, expected, got):
        super().__init__(f"normal vector has {got} entries, expected {expected}")
        self.expected = expected
        self.got = got


class UnknownFamily(ValidationError):
    def __init__(self, family):
        super().__init__(f"unknown family: {family!r}")
        self.family = family


class ParseError(LatShellError):
    """JSON syntax error, with position information."""

    def __init__(self, message, line=None, column=None):
        pos = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{pos}")
        self.line = line
        self.column = column


class BudgetExceeded(LatShellError):
    """A configured resource cap (orderings, chains, permutations) was hit."""


class InternalContractError(LatShellError):
    """An internal invariant that should be mathematically impossible to break
    was violated; this always indicates an implementation bug."""
