"""Knot identification against a bundled invariant table.

Matching is by HOMFLY polynomial up to mirror image (stick numbers are
insensitive to chirality and the table lists one chirality per knot), then
filtered by crossing number: a diagram with k crossings cannot realize a knot
whose crossing number exceeds k.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

from .diagram import PlanarDiagram, simplify
from .homfly import CrossingCapExceeded, HomflyPolynomial, SkeinEvaluator, homfly

UNKNOT_NAME = "0_1"


class ParseError(ValueError):
    """Malformed invariant table file."""


class DuplicateName(ValueError):
    """Invariant table lists the same knot name twice."""


def chirality_canonical(poly: HomflyPolynomial) -> str:
    """Serialization shared by a polynomial and its mirror (the lexicographically
    smaller of the two); used as the mirror-agnostic match key."""
    return min(poly.serialize(), poly.mirror().serialize())


@dataclass(frozen=True)
class TableEntry:
    name: str
    crossing_number: int
    homfly: HomflyPolynomial


@dataclass(frozen=True)
class InvariantTable:
    """Invariant table with a mirror-agnostic HOMFLY index."""

    entries: tuple
    _index: dict = field(repr=False, compare=False, default=None)

    @classmethod
    def from_entries(cls, entries) -> "InvariantTable":
        entries = tuple(entries)
        index = {}
        for e in entries:
            index.setdefault(chirality_canonical(e.homfly), []).append(e)
        return cls(entries=entries, _index=index)

    def matches(self, poly: HomflyPolynomial):
        """Entries whose polynomial equals poly or its mirror."""
        return list(self._index.get(chirality_canonical(poly), ()))

    def names(self):
        return [e.name for e in self.entries]

    def __len__(self):
        return len(self.entries)


def load_table(source) -> InvariantTable:
    """Load a `name<TAB>crossings<TAB>homfly` TSV (one header line) into a table.

    Raises
    ------
    ParseError
        On malformed rows or polynomials, with the offending line number.
    DuplicateName
        If a knot name occurs twice.
    """
    if hasattr(source, "read"):
        lines = source.read().splitlines()
        label = getattr(source, "name", "<table>")
    else:
        label = str(source)
        with open(source) as fh:
            lines = fh.read().splitlines()
    rows = [(i + 1, ln) for i, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise ParseError(f"{label}: empty table")
    header_no, header = rows[0]
    if header.rstrip("\n").split("\t") != ["name", "crossings", "homfly"]:
        raise ParseError(f"{label}:{header_no}: expected header 'name\\tcrossings\\thomfly'")
    entries = []
    seen = set()
    for line_no, line in rows[1:]:
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"{label}:{line_no}: expected 3 tab-separated fields")
        name, crossings, poly = parts
        if name in seen:
            raise DuplicateName(f"{label}:{line_no}: duplicate knot name {name!r}")
        seen.add(name)
        try:
            entries.append(TableEntry(name, int(crossings), HomflyPolynomial.parse(poly)))
        except ValueError as exc:
            raise ParseError(f"{label}:{line_no}: {exc}") from exc
    return InvariantTable.from_entries(entries)


def bundled_table() -> InvariantTable:
    """The invariant table shipped with the package (prime knots through 10
    crossings plus the 11-crossing entries needed by the bundled fixtures)."""
    ref = importlib.resources.files("polyknot.data").joinpath("homfly_table.tsv")
    with ref.open("r") as fh:
        return load_table(fh)


@dataclass(frozen=True)
class Classification:
    """Outcome of identifying one diagram.

    outcome is one of 'unknot', 'identified', 'ambiguous', 'unknown'; names
    holds the surviving candidates (one for 'identified', several sorted for
    'ambiguous'). capped marks diagrams skipped for exceeding the skein cap.
    """

    outcome: str
    names: tuple
    observed_crossings: int
    capped: bool = False

    @property
    def name(self) -> str | None:
        return self.names[0] if self.outcome == "identified" else None

    @property
    def is_nontrivial(self) -> bool:
        """Whether the sample counts as a nontrivial knot (HOMFLY != 1)."""
        return self.outcome != "unknot"

    def key(self) -> str:
        """Frequency-table bucket: knot name, 'unknot', 'ambiguous' or 'unknown'."""
        if self.outcome == "identified":
            return self.names[0]
        return self.outcome


def classify(dgm: PlanarDiagram, table: InvariantTable,
             evaluator: SkeinEvaluator | None = None,
             cap: int = 50) -> Classification:
    """Identify a knot diagram against the table.

    The diagram is R1/R2-reduced first; a reduced diagram with at most 2
    crossings is the unknot. Otherwise candidates are the table entries whose
    HOMFLY matches up to mirror, minus those whose crossing number exceeds the
    observed (reduced) crossing count.
    """
    reduced = simplify(dgm)
    observed = reduced.crossing_count
    if observed <= 2:
        return Classification("unknot", (), observed)
    try:
        poly = homfly(reduced, cap=cap, evaluator=evaluator)
    except CrossingCapExceeded:
        return Classification("unknown", (), observed, capped=True)
    candidates = [e for e in table.matches(poly) if e.crossing_number <= observed]
    if poly.is_one and not any(e.name != UNKNOT_NAME for e in candidates):
        # HOMFLY-trivial with no nontrivial table match: at this diagram scale
        # only the unknot fits.
        return Classification("unknot", (), observed)
    candidates = [e for e in candidates if e.name != UNKNOT_NAME]
    if not candidates:
        return Classification("unknown", (), observed)
    if len(candidates) == 1:
        return Classification("identified", (candidates[0].name,), observed)
    return Classification("ambiguous", tuple(sorted(e.name for e in candidates)), observed)
