"""Exception types shared across the package."""


class CitationCascadeError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(CitationCascadeError):
    """A CSV row could not be interpreted.

    File-level I/O failures are not wrapped; they surface as the builtin
    OSError family.
    """

    def __init__(self, row: int, reason: str):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason


class DuplicateId(CitationCascadeError):
    def __init__(self, pub_id: str):
        super().__init__(f"duplicate publication id {pub_id!r}")
        self.id = pub_id


class EdgeValidationError(CitationCascadeError):
    """Strict-mode edge loading hit a violation (the first one in input order)."""

    def __init__(self, row: int, kind: str):
        super().__init__(f"edge row {row}: {kind}")
        self.row = row
        self.kind = kind


class UnknownRoot(CitationCascadeError):
    def __init__(self, root: str):
        super().__init__(f"unknown root id {root!r}")
        self.root = root


class ViralityUndefined(CitationCascadeError):
    """Structural virality is undefined for a single-node cascade."""


class DepthCapExceeded(CitationCascadeError):
    def __init__(self, requested: int, cap: int):
        super().__init__(f"requested walk depth {requested} exceeds the cap of {cap}")
        self.requested = requested
        self.cap = cap


class GenerationOutOfRange(CitationCascadeError):
    def __init__(self, generation: int, depth: int):
        super().__init__(f"generation {generation} outside [1, {depth}]")
        self.generation = generation
        self.depth = depth


class MalformedCode(CitationCascadeError):
    def __init__(self, code: str, level: int):
        super().__init__(f"code {code!r} has fewer than {level} dot-separated segments")
        self.code = code
        self.level = level


class InsufficientEdges(CitationCascadeError):
    def __init__(self, edge_count: int):
        super().__init__(f"rewiring needs at least 2 edges, got {edge_count}")
        self.edge_count = edge_count


class EmptyCohort(CitationCascadeError):
    def __init__(self, depth: int):
        super().__init__(f"no cascade has depth exactly {depth}")
        self.depth = depth


class TooFewSeries(CitationCascadeError):
    def __init__(self, k: int, n: int):
        super().__init__(f"k={k} exceeds the number of series ({n})")
        self.k = k
        self.n = n


class EmptyInput(CitationCascadeError):
    """An aggregation received no usable values."""
