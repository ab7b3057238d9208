"""Citation graph loading, validation, and immutable in-memory storage.

Edges are stored in the knowledge-flow orientation: an edge ``u -> v`` means
"u is cited by v", i.e. knowledge flows from the cited publication to the
citing one. Every cascade traversal walks this direction, so the forward
adjacency is the primary structure; the reverse adjacency (citing -> cited)
is kept as its exact transpose.

External ids are opaque strings. Internally every node gets a dense integer
index so both adjacencies can live in CSR-style numpy arrays; corpora with
hundreds of thousands of nodes and millions of edges fit comfortably in
memory and traverse quickly.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass
from types import MappingProxyType

import numpy as np

from .errors import DuplicateId, EdgeValidationError, ParseError, UnknownRoot


@dataclass(frozen=True, slots=True)
class Publication:
    """A publication record.

    ``id`` must be non-empty and unique within a corpus. ``codes`` holds
    hierarchical classification codes with dot-separated segments (for
    example ``"03.67.Lx"``) and may be empty: corpora typically assign codes
    only within a bounded year range.
    """

    id: str
    year: int
    codes: frozenset[str] = frozenset()


@dataclass(frozen=True)
class MetadataSchema:
    """Column layout and sanity bounds for the metadata CSV."""

    id_column: str = "id"
    year_column: str = "year"
    codes_column: str = "codes"
    codes_separator: str = ";"
    min_year: int = 1800
    max_year: int = 2100


@dataclass(frozen=True)
class ValidationReport:
    """Counts accumulated while loading an edge list.

    ``temporal_violation_count`` counts edges whose cited year exceeds the
    citing year; those edges are kept in lenient mode because real corpora
    contain mutual citations. ``missing_metadata_count`` is the number of
    publications with an empty code set (informational; such nodes stay in
    the graph but are skipped by relevance pairing).
    """

    dangling_edge_count: int = 0
    self_loop_count: int = 0
    duplicate_edge_count: int = 0
    temporal_violation_count: int = 0
    missing_metadata_count: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def load_metadata(path, schema: MetadataSchema = MetadataSchema()) -> dict[str, Publication]:
    """Read a publication table from a CSV with header ``id,year,codes``.

    Codes within the codes cell are separated by ``schema.codes_separator``
    and may be absent. Raises ParseError (carrying the 1-based row number)
    for rows that cannot be interpreted, and DuplicateId when an id repeats.
    """
    pubs: dict[str, Publication] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(1, "empty file: expected a header row")
        for col in (schema.id_column, schema.year_column, schema.codes_column):
            if col not in reader.fieldnames:
                raise ParseError(1, f"missing required column {col!r}")
        for row_no, row in enumerate(reader, start=2):
            pub_id = (row[schema.id_column] or "").strip()
            if not pub_id:
                raise ParseError(row_no, "empty id")
            if pub_id in pubs:
                raise DuplicateId(pub_id)
            raw_year = (row[schema.year_column] or "").strip()
            try:
                year = int(raw_year)
            except ValueError:
                raise ParseError(row_no, f"unparseable year {raw_year!r}") from None
            if not schema.min_year <= year <= schema.max_year:
                raise ParseError(
                    row_no, f"year {year} outside [{schema.min_year}, {schema.max_year}]"
                )
            raw_codes = row[schema.codes_column] or ""
            codes = frozenset(
                c.strip() for c in raw_codes.split(schema.codes_separator) if c.strip()
            )
            pubs[pub_id] = Publication(pub_id, year, codes)
    return pubs


def _csr(n_nodes: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Build (indptr, indices) with each neighbor list sorted ascending."""
    counts = np.bincount(src, minlength=n_nodes)
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int32, copy=False)
    indices.flags.writeable = False
    indptr.flags.writeable = False
    return indptr, indices


class CitationGraph:
    """Immutable citation graph over a publication table.

    Construct through :func:`build_graph`, :func:`load_edges`, or
    :meth:`from_arrays`; instances are safe for concurrent reads. Degree
    conventions follow the knowledge-flow orientation: ``out_degree[v]`` is
    the number of direct citations v received, ``in_degree[v]`` the number
    of its references inside the corpus.
    """

    def __init__(self, publications, ids, years, codes, fwd, rev, edge_count):
        self._pubs = publications
        self._ids = ids
        self._index = {pub_id: i for i, pub_id in enumerate(ids)}
        self.years = years
        self.codes = codes
        self.fwd_indptr, self.fwd_indices = fwd
        self.rev_indptr, self.rev_indices = rev
        self.edge_count = edge_count
        self.out_degree = np.diff(self.fwd_indptr)
        self.in_degree = np.diff(self.rev_indptr)
        self.out_degree.flags.writeable = False
        self.in_degree.flags.writeable = False

    # -- construction -------------------------------------------------

    @classmethod
    def from_arrays(
        cls,
        publications: Sequence[Publication] | Mapping[str, Publication],
        cited: np.ndarray,
        citing: np.ndarray,
        mode: str = "lenient",
        rows: np.ndarray | None = None,
    ) -> tuple["CitationGraph", ValidationReport]:
        """Assemble a graph from pre-resolved edge index arrays.

        ``cited``/``citing`` hold internal node indices in the order the
        publications iterate; entries of -1 mark edges whose endpoint id was
        unknown (dangling). ``rows`` optionally maps each edge to a source
        row number for error messages. Lenient mode drops dangling edges,
        self-loops and duplicates (counting each) and keeps but counts
        temporal violations; strict mode raises EdgeValidationError at the
        first violation of any of those four kinds, in input order.
        """
        if mode not in ("strict", "lenient"):
            raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
        pub_list = list(publications.values()) if isinstance(publications, Mapping) else list(publications)
        ids = tuple(p.id for p in pub_list)
        years = np.asarray([p.year for p in pub_list], dtype=np.int32)
        years.flags.writeable = False
        codes = tuple(p.codes for p in pub_list)
        pubs_by_id = {p.id: p for p in pub_list}
        if len(pubs_by_id) != len(pub_list):
            seen: set[str] = set()
            for p in pub_list:
                if p.id in seen:
                    raise DuplicateId(p.id)
                seen.add(p.id)

        n = len(pub_list)
        cited = np.asarray(cited, dtype=np.int64)
        citing = np.asarray(citing, dtype=np.int64)
        if cited.shape != citing.shape:
            raise ValueError("cited and citing arrays must have equal length")
        m = cited.size

        dangling = (cited < 0) | (citing < 0) | (cited >= n) | (citing >= n)
        ok = ~dangling
        self_loop = ok & (cited == citing)
        survives = ok & ~self_loop

        # duplicates: every occurrence after the first among surviving rows
        dup = np.zeros(m, dtype=bool)
        if survives.any():
            surv_idx = np.flatnonzero(survives)
            enc = cited[surv_idx] * np.int64(n) + citing[surv_idx]
            _, first_pos = np.unique(enc, return_index=True)
            keep = np.zeros(surv_idx.size, dtype=bool)
            keep[first_pos] = True
            dup[surv_idx[~keep]] = True

        temporal = np.zeros(m, dtype=bool)
        if ok.any():
            idx = np.flatnonzero(ok)
            temporal[idx] = years[cited[idx]] > years[citing[idx]]

        if mode == "strict":
            any_violation = dangling | self_loop | dup | temporal
            if any_violation.any():
                at = int(np.flatnonzero(any_violation)[0])
                for kind, mask in (
                    ("dangling edge", dangling),
                    ("self-loop", self_loop),
                    ("duplicate edge", dup),
                    ("temporal violation (cited year exceeds citing year)", temporal),
                ):
                    if mask[at]:
                        row_no = int(rows[at]) if rows is not None else at
                        raise EdgeValidationError(row_no, kind)

        retained = survives & ~dup
        report = ValidationReport(
            dangling_edge_count=int(dangling.sum()),
            self_loop_count=int(self_loop.sum()),
            duplicate_edge_count=int(dup.sum()),
            temporal_violation_count=int((temporal & retained).sum()),
            missing_metadata_count=sum(1 for c in codes if not c),
        )

        src = cited[retained]
        dst = citing[retained]
        graph = cls(
            publications=pubs_by_id,
            ids=ids,
            years=years,
            codes=codes,
            fwd=_csr(n, src, dst),
            rev=_csr(n, dst, src),
            edge_count=int(src.size),
        )
        return graph, report

    def _with_edges(self, cited: np.ndarray, citing: np.ndarray) -> "CitationGraph":
        """New graph over the same publication table; no validation.

        Intended for degree-preserving transforms whose output is valid by
        construction.
        """
        return CitationGraph(
            publications=self._pubs,
            ids=self._ids,
            years=self.years,
            codes=self.codes,
            fwd=_csr(self.n_nodes, cited, citing),
            rev=_csr(self.n_nodes, citing, cited),
            edge_count=int(cited.size),
        )

    # -- accessors -----------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self._ids)

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def publications(self) -> Mapping[str, Publication]:
        return MappingProxyType(self._pubs)

    def publication(self, pub_id: str) -> Publication:
        try:
            return self._pubs[pub_id]
        except KeyError:
            raise UnknownRoot(pub_id) from None

    def index_of(self, pub_id: str) -> int:
        try:
            return self._index[pub_id]
        except KeyError:
            raise UnknownRoot(pub_id) from None

    def get_index(self, pub_id: str) -> int | None:
        return self._index.get(pub_id)

    def id_of(self, index: int) -> str:
        return self._ids[index]

    def ids_of(self, indices: Iterable[int]) -> list[str]:
        return [self._ids[int(i)] for i in indices]

    def out_neighbors(self, index: int) -> np.ndarray:
        return self.fwd_indices[self.fwd_indptr[index] : self.fwd_indptr[index + 1]]

    def in_neighbors(self, index: int) -> np.ndarray:
        return self.rev_indices[self.rev_indptr[index] : self.rev_indptr[index + 1]]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge list (cited, citing) as index arrays in CSR order."""
        cited = np.repeat(np.arange(self.n_nodes, dtype=np.int64), self.out_degree)
        return cited, self.fwd_indices.astype(np.int64)

    def structurally_equal(self, other: "CitationGraph") -> bool:
        return (
            self._ids == other._ids
            and np.array_equal(self.years, other.years)
            and self.codes == other.codes
            and np.array_equal(self.fwd_indptr, other.fwd_indptr)
            and np.array_equal(self.fwd_indices, other.fwd_indices)
        )

    def __repr__(self) -> str:
        return f"CitationGraph(nodes={self.n_nodes}, edges={self.edge_count})"


def build_graph(
    publications: Sequence[Publication] | Mapping[str, Publication],
    edges: Iterable[tuple[str, str]],
    mode: str = "lenient",
) -> tuple[CitationGraph, ValidationReport]:
    """Build a graph from (cited_id, citing_id) pairs.

    Unknown ids are treated as dangling edges; see
    :meth:`CitationGraph.from_arrays` for mode semantics.
    """
    pub_list = list(publications.values()) if isinstance(publications, Mapping) else list(publications)
    index = {p.id: i for i, p in enumerate(pub_list)}
    pairs = list(edges)
    cited = np.fromiter((index.get(a, -1) for a, _ in pairs), dtype=np.int64, count=len(pairs))
    citing = np.fromiter((index.get(b, -1) for _, b in pairs), dtype=np.int64, count=len(pairs))
    return CitationGraph.from_arrays(pub_list, cited, citing, mode=mode)


def load_edges(
    path,
    pubs: Mapping[str, Publication],
    mode: str = "lenient",
) -> tuple[CitationGraph, ValidationReport]:
    """Read an edge CSV with header ``cited_id,citing_id`` and build the graph.

    Edges are stored in knowledge-flow direction (cited -> citing).
    Strict-mode errors carry the offending 1-based file row number.
    """
    index = {pub_id: i for i, pub_id in enumerate(pubs)}
    cited_l: list[int] = []
    citing_l: list[int] = []
    rows_l: list[int] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(1, "empty file: expected a header row")
        header = [h.strip() for h in header]
        if header[:2] != ["cited_id", "citing_id"]:
            raise ParseError(1, f"expected header cited_id,citing_id, got {','.join(header)!r}")
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise ParseError(row_no, f"expected 2 columns, got {len(row)}")
            cited_l.append(index.get(row[0].strip(), -1))
            citing_l.append(index.get(row[1].strip(), -1))
            rows_l.append(row_no)
    return CitationGraph.from_arrays(
        pubs,
        np.asarray(cited_l, dtype=np.int64),
        np.asarray(citing_l, dtype=np.int64),
        mode=mode,
        rows=np.asarray(rows_l, dtype=np.int64),
    )


def degrees(graph: CitationGraph) -> tuple[np.ndarray, np.ndarray]:
    """Per-node (in_degree, out_degree) in knowledge-flow orientation.

    ``out_degree`` of a node equals its number of direct citations, i.e.
    its first-generation width when taken as a cascade root.
    """
    return graph.in_degree, graph.out_degree
