"""Spin-network topologies and their coupling edge sets.

Vertices are 0-based. Edges are stored as ordered unique pairs (j, k)
with j < k, so the coupling sum runs over each physical pair exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EdgeListParseError, LatticeError

__all__ = [
    "SpinLattice",
    "ring",
    "torus",
    "from_edge_list",
    "serialize",
    "connectivity_ratio",
]


@dataclass(frozen=True)
class SpinLattice:
    """A set of N spins plus the unique coupling pairs between them."""

    n_spins: int
    edges: tuple[tuple[int, int], ...]
    label: str = ""

    def __post_init__(self):
        if self.n_spins < 1:
            raise LatticeError(f"need at least one spin, got {self.n_spins}")
        seen = set()
        for j, k in self.edges:
            if j == k:
                raise LatticeError(f"self-loop on vertex {j}")
            if not (0 <= j < self.n_spins and 0 <= k < self.n_spins):
                raise LatticeError(
                    f"edge ({j},{k}) out of range for {self.n_spins} spins"
                )
            if j > k:
                raise LatticeError(f"edge ({j},{k}) not ordered j<k")
            if (j, k) in seen:
                raise LatticeError(f"duplicate edge ({j},{k})")
            seen.add((j, k))

    @property
    def n_couplings(self) -> int:
        return len(self.edges)

    def degree(self, vertex: int) -> int:
        return sum(1 for j, k in self.edges if vertex in (j, k))


def _normalize(pairs) -> tuple[tuple[int, int], ...]:
    # order each pair j<k, drop duplicates, sort for a canonical layout
    return tuple(sorted({(min(j, k), max(j, k)) for j, k in pairs}))


def ring(n: int) -> SpinLattice:
    """Nearest-neighbour 1D chain with periodic boundary.

    For n = 2 the wrap edge duplicates the bulk edge and is deduplicated,
    leaving a single coupling.
    """
    if n < 2:
        raise LatticeError(f"ring needs n >= 2, got {n}")
    pairs = [(k, (k + 1) % n) for k in range(n)]
    return SpinLattice(n, _normalize(pairs), label=f"ring:{n}")


def torus(rows: int, cols: int) -> SpinLattice:
    """2D square lattice with periodic boundary in both directions.

    Size-2 dimensions produce coincident parallel edges; each physical
    coupling is counted once. rows = 1 or cols = 1 degrades to a ring.
    """
    if rows < 1 or cols < 1:
        raise LatticeError(f"torus needs positive dimensions, got {rows}x{cols}")
    if rows == 1 or cols == 1:
        return ring(rows * cols)
    pairs = []
    for r in range(rows):
        for c in range(cols):
            here = r * cols + c
            pairs.append((here, r * cols + (c + 1) % cols))
            pairs.append((here, ((r + 1) % rows) * cols + c))
    return SpinLattice(rows * cols, _normalize(pairs), label=f"torus:{rows}x{cols}")


def from_edge_list(source: str, label: str = "edge_list") -> SpinLattice:
    """Parse a lattice from edge-list text.

    Format: first non-comment line is ``N <count>``, then one ``<j> <k>``
    pair per line. ``#`` starts a comment line. Pairs are normalized to
    j < k and deduplicated.
    """
    n_spins = None
    pairs = []
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n_spins is None:
            if len(tokens) != 2 or tokens[0] != "N":
                raise EdgeListParseError(
                    f"expected header 'N <count>', got {line!r}", line_no
                )
            try:
                n_spins = int(tokens[1])
            except ValueError:
                raise EdgeListParseError(
                    f"vertex count {tokens[1]!r} is not an integer", line_no
                ) from None
            if n_spins < 1:
                raise EdgeListParseError(f"vertex count {n_spins} < 1", line_no)
            continue
        if len(tokens) != 2:
            raise EdgeListParseError(f"expected '<j> <k>', got {line!r}", line_no)
        try:
            j, k = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer pair {line!r}", line_no) from None
        if j == k:
            raise EdgeListParseError(f"self-loop on vertex {j}", line_no)
        if not (0 <= j < n_spins and 0 <= k < n_spins):
            raise EdgeListParseError(
                f"edge ({j},{k}) out of range for {n_spins} vertices", line_no
            )
        pairs.append((j, k))
    if n_spins is None:
        raise EdgeListParseError("missing 'N <count>' header")
    return SpinLattice(n_spins, _normalize(pairs), label=label)


def serialize(lat: SpinLattice) -> str:
    """Edge-list text such that from_edge_list(serialize(lat)) == lat."""
    lines = [f"N {lat.n_spins}"]
    lines.extend(f"{j} {k}" for j, k in lat.edges)
    return "\n".join(lines) + "\n"


def connectivity_ratio(lat: SpinLattice) -> float:
    """Couplings per spin, n_C / N."""
    return lat.n_couplings / lat.n_spins
