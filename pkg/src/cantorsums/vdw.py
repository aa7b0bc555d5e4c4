"""
van der Waerden numbers W(s, k) and the inverse function w(s, N).

Only values this module can certify by search take part in pass/fail
checks; literature values are kept for reference and tagged as such.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from cantorsums.config import settings
from cantorsums.exceptions import InfeasibleSearch, InvalidParameter
from cantorsums.log import logger
from cantorsums.schemas import VdwCertificate, VdwLookup
from cantorsums.storage import load_json
from cantorsums.utils import SingletonMeta


class Provenance(str, Enum):
    VERIFIED = "exhaustively verified"
    LITERATURE = "literature"


@dataclass(frozen=True)
class VdwEntry:
    s: int
    k: int
    W: int
    provenance: Provenance


BUILTIN_ENTRIES: Tuple[VdwEntry, ...] = (
    VdwEntry(2, 3, 9, Provenance.VERIFIED),
    VdwEntry(2, 4, 35, Provenance.LITERATURE),
    VdwEntry(2, 5, 178, Provenance.LITERATURE),
    VdwEntry(2, 6, 1132, Provenance.LITERATURE),
    VdwEntry(3, 3, 27, Provenance.LITERATURE),
    VdwEntry(3, 4, 293, Provenance.LITERATURE),
    VdwEntry(4, 3, 76, Provenance.LITERATURE),
)


class VdwTable:
    """W(s, k) lookups.

    The families W(s,1) = 1, W(1,k) = k and W(s,2) = s+1 are answered by
    formula and count as verified for every s, k.
    """

    def __init__(
        self,
        entries: Sequence[VdwEntry] = BUILTIN_ENTRIES,
        table_path: Optional[Path] = None,
    ):
        self._entries: Dict[Tuple[int, int], VdwEntry] = {}
        for entry in entries:
            self._entries[(entry.s, entry.k)] = entry
        if table_path is not None:
            self.load(table_path)

    def load(self, path: Path):
        """Merge an external table; its entries are always treated as literature."""
        data = load_json(path)
        rows = data.get("entries", []) if isinstance(data, dict) else data
        added = 0
        for row in rows:
            try:
                s, k, W = int(row["s"]), int(row["k"]), int(row["W"])
            except (KeyError, TypeError, ValueError) as e:
                raise InvalidParameter(f"bad van der Waerden table row {row!r} in {path}: {e}")
            if (s, k) in self._entries and self._entries[(s, k)].provenance is Provenance.VERIFIED:
                continue
            self._entries[(s, k)] = VdwEntry(s, k, W, Provenance.LITERATURE)
            added += 1
        logger.info(f"loaded {added} literature entries from {path}")

    def entry(self, s: int, k: int) -> Optional[VdwEntry]:
        if s < 1 or k < 1:
            raise InvalidParameter(f"W(s, k) needs s, k >= 1, got ({s}, {k})")
        if k == 1:
            return VdwEntry(s, 1, 1, Provenance.VERIFIED)
        if s == 1:
            return VdwEntry(1, k, k, Provenance.VERIFIED)
        if k == 2:
            return VdwEntry(s, 2, s + 1, Provenance.VERIFIED)
        return self._entries.get((s, k))

    def lookup(self, s: int, k: int, include_literature: bool = False) -> Optional[int]:
        entry = self.entry(s, k)
        if entry is None:
            return None
        if entry.provenance is Provenance.LITERATURE and not include_literature:
            return None
        return entry.W

    def entries(self) -> List[VdwEntry]:
        return sorted(self._entries.values(), key=lambda e: (e.s, e.k))

    def inverse_vdw(self, s: int, N: int, include_literature: bool = False) -> VdwLookup:
        """max{k : W(s,k) ≤ N}; ``table_limited`` when W(s,k+1) is unknown."""
        if s < 1 or N < 1:
            raise InvalidParameter(f"inverse_vdw needs s, N >= 1, got ({s}, {N})")
        if s == 1:
            return VdwLookup(s=s, N=N, length=N)
        best = 1
        limited = False
        k = 2
        while True:
            W = self.lookup(s, k, include_literature)
            if W is None:
                limited = True
                break
            if W > N:
                break
            best = k
            k += 1
        return VdwLookup(s=s, N=N, length=best, table_limited=limited)


class DefaultVdwTable(VdwTable, metaclass=SingletonMeta):
    """Process-wide table: built-ins plus CSL_TABLE_PATH when set."""

    def __init__(self):
        super().__init__(BUILTIN_ENTRIES, settings.TABLE_PATH)


def default_table() -> VdwTable:
    return DefaultVdwTable()


def inverse_vdw(s: int, N: int, include_literature: bool = False) -> VdwLookup:
    return default_table().inverse_vdw(s, N, include_literature)


def find_monochromatic_ap(coloring: Sequence[int], k: int) -> Optional[Tuple[int, int]]:
    """(start, diff) of a monochromatic k-AP in a coloring of [1, len], 0-based start."""
    n = len(coloring)
    if k <= 1:
        return (0, 1) if n else None
    for d in range(1, (n - 1) // (k - 1) + 1):
        for start in range(n - (k - 1) * d):
            c = coloring[start]
            if all(coloring[start + j * d] == c for j in range(1, k)):
                return start, d
    return None


def _closes_ap(colors: List[int], pos: int, color: int, k: int) -> bool:
    for d in range(1, pos // (k - 1) + 1):
        if all(colors[pos - j * d] == color for j in range(1, k)):
            return True
    return False


def verify_vdw_small(s: int, k: int, node_budget: Optional[int] = None) -> VdwCertificate:
    """Certify W(s, k) by exhaustive backtracking.

    Colorings are explored up to permutation of colors (a new color is only
    opened in increasing order). The longest coloring without a
    monochromatic k-AP has length W − 1; exhausting the tree proves that no
    coloring of [1, W] exists.
    """
    if s < 1 or k < 1:
        raise InvalidParameter(f"verify_vdw_small needs s, k >= 1, got ({s}, {k})")
    if k == 1:
        return VdwCertificate(s=s, k=k, W=1, witness_coloring=[], verified=True)
    if s == 1:
        return VdwCertificate(s=s, k=k, W=k, witness_coloring=[0] * (k - 1), verified=True)
    if k == 2:
        return VdwCertificate(s=s, k=k, W=s + 1, witness_coloring=list(range(s)), verified=True)

    budget = settings.VDW_NODE_BUDGET if node_budget is None else node_budget
    colors: List[int] = []
    best: List[int] = []
    nodes = 0
    # 显式栈: (position, next color to try, highest color used before position)
    stack: List[Tuple[int, int, int]] = [(0, 0, -1)]
    while stack:
        pos, color, used = stack.pop()
        del colors[pos:]
        limit = min(used + 1, s - 1)
        while color <= limit:
            nodes += 1
            if nodes > budget:
                raise InfeasibleSearch(
                    f"W({s}, {k}) is infeasible at desk scale: node budget {budget} exhausted "
                    f"with longest coloring {len(best)}"
                )
            if not _closes_ap(colors, pos, color, k):
                break
            color += 1
        if color > limit:
            continue
        stack.append((pos, color + 1, used))
        colors.append(color)
        if len(colors) > len(best):
            best = list(colors)
        stack.append((pos + 1, 0, max(used, color)))

    W = len(best) + 1
    if find_monochromatic_ap(best, k) is not None:
        raise AssertionError(f"witness coloring for W({s}, {k}) contains a monochromatic AP")
    logger.info(f"W({s}, {k}) = {W} certified after {nodes} nodes")
    return VdwCertificate(s=s, k=k, W=W, witness_coloring=best, verified=True, nodes_explored=nodes)
