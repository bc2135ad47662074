"""Attention-guided word boundary search over unsegmented phone sequences.

An attention map pairs the non-native phones (columns) with the
segmented native reference (rows). For every word but the last, the
column with the highest weight on the word's final row proposes a cut;
shifting those cuts within a small radius generates candidate
segmentations, and the one closest to the reference pronunciations by
edit distance wins. An utterance whose best candidate is still too far
from the reference is rejected.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import islice, pairwise, product

from .errors import (
    DimensionMismatch,
    DuplicateUtteranceId,
    MalformedLine,
    NegativeWeight,
    RowMismatch,
    UnknownPhone,
)
from .dpalign import pair_by_id
from .phonecore import PhoneInventory, ReferenceDictionary, SegmentedUtterance

#: Hard cap on candidates per utterance in per-boundary mode.
PER_BOUNDARY_CAP = 1000

GLOBAL_SHIFT = "global_shift"
PER_BOUNDARY = "per_boundary"


@dataclass(frozen=True)
class AttnConfig:
    """Boundary-search settings.

    ``shift_radius`` bounds how far a cut may move from its attention
    peak; ``threshold`` is the largest acceptable edit distance per
    reference phone. Column argmax ties always break to the earliest
    column.
    """

    shift_radius: int = 3
    mode: str = GLOBAL_SHIFT
    threshold: float = 0.5

    def __post_init__(self):
        if self.shift_radius < 0:
            raise ValueError("shift_radius must be >= 0")
        if self.mode not in (GLOBAL_SHIFT, PER_BOUNDARY):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must be in [0, 1]")


@dataclass(frozen=True)
class AttentionMap:
    """Weights pairing native rows with non-native columns, all finite, >= 0."""

    utterance_id: str
    col_phones: tuple[str, ...]
    row_phones: tuple[str, ...]
    weights: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "col_phones", tuple(self.col_phones))
        object.__setattr__(self, "row_phones", tuple(self.row_phones))
        object.__setattr__(self, "weights", tuple(tuple(row) for row in self.weights))
        if not self.row_phones or not self.col_phones:
            raise DimensionMismatch(self.utterance_id, "empty axis")
        if len(self.weights) != len(self.row_phones):
            raise DimensionMismatch(
                self.utterance_id,
                f"{len(self.weights)} weight rows for {len(self.row_phones)} row phones",
            )
        for r, row in enumerate(self.weights):
            if len(row) != len(self.col_phones):
                raise DimensionMismatch(
                    self.utterance_id,
                    f"row {r} has {len(row)} weights for {len(self.col_phones)} columns",
                )
            for c, w in enumerate(row):
                if not math.isfinite(w):
                    raise DimensionMismatch(self.utterance_id, f"non-finite weight at ({r}, {c})")
                if w < 0:
                    raise NegativeWeight(self.utterance_id, r, c)


@dataclass(frozen=True)
class Segmentation:
    """Cut indices into a phone sequence; cut k splits after phone k-1.

    Cuts increase strictly except that clamping at the sequence end may
    leave ties there, which show up as empty trailing spans. ``repaired``
    counts cuts that had to be moved to restore monotonicity or stay in
    range; it carries generation metadata and does not affect equality.
    """

    cuts: tuple[int, ...]
    length: int
    repaired: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cuts", tuple(self.cuts))
        prev = 0
        for cut in self.cuts:
            if not 1 <= cut <= self.length:
                raise ValueError(f"cut {cut} out of range for length {self.length}")
            if cut < prev or (cut == prev and cut != self.length):
                raise ValueError(f"cuts not increasing: {self.cuts}")
            prev = cut

    @property
    def word_count(self) -> int:
        return len(self.cuts) + 1

    @property
    def has_empty_span(self) -> bool:
        return bool(self.cuts) and (
            self.cuts[-1] == self.length or any(a == b for a, b in pairwise(self.cuts))
        )

    def spans(self, phones: Sequence[str]) -> tuple[tuple[str, ...], ...]:
        if len(phones) != self.length:
            raise ValueError(f"expected {self.length} phones, got {len(phones)}")
        bounds = (0, *self.cuts, self.length)
        return tuple(tuple(phones[a:b]) for a, b in pairwise(bounds))


def _repair(cuts: Sequence[int], length: int) -> tuple[tuple[int, ...], int]:
    """Force cuts strictly increasing and within range; count the moves."""
    out: list[int] = []
    moved = 0
    prev = 0
    for cut in cuts:
        fixed = min(max(cut, prev + 1), length)
        if fixed != cut:
            moved += 1
        out.append(fixed)
        prev = fixed
    return tuple(out), moved


def parse_attention_file(text: str, inventory: PhoneInventory) -> list[AttentionMap]:
    """Parse blank-line-separated attention records.

    Each record is ``utt_id R C`` on the first line, R row phones on the
    second, C column phones on the third, then R lines of C weights.
    """
    records: list[list[tuple[int, str]]] = []
    current: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.strip():
            current.append((lineno, raw))
        elif current:
            records.append(current)
            current = []
    if current:
        records.append(current)

    maps: list[AttentionMap] = []
    seen: set[str] = set()
    for record in records:
        lineno, header = record[0]
        fields = header.split()
        if len(fields) != 3:
            raise MalformedLine(lineno, f"expected 'utt_id R C', got {header!r}")
        utt_id = fields[0]
        try:
            n_rows, n_cols = int(fields[1]), int(fields[2])
        except ValueError:
            raise MalformedLine(lineno, f"bad dimensions in {header!r}") from None
        if n_rows < 1 or n_cols < 1:
            raise MalformedLine(lineno, f"dimensions must be positive in {header!r}")
        if utt_id in seen:
            raise DuplicateUtteranceId(utt_id)
        seen.add(utt_id)
        if len(record) != 3 + n_rows:
            raise DimensionMismatch(
                utt_id, f"expected {n_rows} weight rows, found {len(record) - 3}", lineno
            )

        row_phones = record[1][1].split()
        col_phones = record[2][1].split()
        if len(row_phones) != n_rows:
            raise DimensionMismatch(utt_id, f"{len(row_phones)} row phones declared {n_rows}", record[1][0])
        if len(col_phones) != n_cols:
            raise DimensionMismatch(utt_id, f"{len(col_phones)} col phones declared {n_cols}", record[2][0])
        for symbol in (*row_phones, *col_phones):
            if symbol not in inventory:
                raise UnknownPhone(symbol, f"attention map {utt_id!r}")

        weights: list[tuple[float, ...]] = []
        for r, (wlineno, wline) in enumerate(record[3:]):
            tokens = wline.split()
            if len(tokens) != n_cols:
                raise DimensionMismatch(utt_id, f"row {r} has {len(tokens)} weights, declared {n_cols}", wlineno)
            row: list[float] = []
            for c, token in enumerate(tokens):
                try:
                    value = float(token)
                except ValueError:
                    raise MalformedLine(wlineno, f"bad weight {token!r}") from None
                if not math.isfinite(value):
                    raise MalformedLine(wlineno, f"non-finite weight {token!r}")
                if value < 0:
                    raise NegativeWeight(utt_id, r, c)
                row.append(value)
            weights.append(tuple(row))
        maps.append(AttentionMap(utt_id, tuple(col_phones), tuple(row_phones), tuple(weights)))
    return maps


def emit_attention_file(maps: Iterable[AttentionMap]) -> str:
    blocks = []
    for amap in maps:
        lines = [f"{amap.utterance_id} {len(amap.row_phones)} {len(amap.col_phones)}"]
        lines.append(" ".join(amap.row_phones))
        lines.append(" ".join(amap.col_phones))
        for row in amap.weights:
            lines.append(" ".join(repr(w) for w in row))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def scan_attention_tokens(text: str):
    """Lenient phone-token scan of an attention file (axis lines only)."""
    block_line = 0
    for raw in text.splitlines():
        if not raw.strip():
            block_line = 0
            continue
        block_line += 1
        if block_line in (2, 3):
            yield from raw.split()


def place_boundaries(
    amap: AttentionMap, ref_seg: SegmentedUtterance, cfg: AttnConfig = AttnConfig()
) -> Segmentation:
    """Cut after the peak-attention column of each word's final phone.

    Ties take the earliest column; the resulting cuts are repaired to be
    strictly increasing and clamped to the sequence end.
    """
    if amap.row_phones != ref_seg.phones:
        raise RowMismatch(
            amap.utterance_id,
            f"{len(amap.row_phones)} rows vs {len(ref_seg.phones)} reference phones"
            if len(amap.row_phones) != len(ref_seg.phones)
            else "row phones disagree with the reference phones",
        )
    length = len(amap.col_phones)
    raw_cuts: list[int] = []
    row = -1
    for span in ref_seg.words[:-1]:
        row += len(span.phones)
        weights = amap.weights[row]
        best_col = max(range(length), key=weights.__getitem__)
        raw_cuts.append(best_col + 1)
    cuts, moved = _repair(raw_cuts, length)
    return Segmentation(cuts, length, repaired=moved)


def _offset_order(radius: int) -> list[int]:
    # zero first so the unshifted base is always generated before the cap hits
    order = [0]
    for d in range(1, radius + 1):
        order.extend((-d, d))
    return order


def split_by_attention(
    amap: AttentionMap, ref_seg: SegmentedUtterance, cfg: AttnConfig = AttnConfig()
) -> list[Segmentation]:
    """Enumerate candidate segmentations around the attention-derived cuts.

    In ``global_shift`` mode every cut moves together through shifts
    -n..n, giving at most 2n+1 candidates. In ``per_boundary`` mode each
    cut moves independently, capped at :data:`PER_BOUNDARY_CAP`
    candidates. Duplicates after repair keep their first occurrence.
    """
    base = place_boundaries(amap, ref_seg, cfg)
    length = base.length
    n = cfg.shift_radius

    unique: dict[tuple[int, ...], Segmentation] = {}
    if cfg.mode == GLOBAL_SHIFT:
        proposals = ([c + s for c in base.cuts] for s in range(-n, n + 1))
    else:
        offsets = _offset_order(n)
        proposals = (
            [c + o for c, o in zip(base.cuts, combo)]
            for combo in islice(product(offsets, repeat=len(base.cuts)), PER_BOUNDARY_CAP)
        )
    for proposal in proposals:
        cuts, moved = _repair(proposal, length)
        if cuts not in unique:
            unique[cuts] = Segmentation(cuts, length, repaired=moved)
    return list(unique.values())


def edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        current = [i] + [0] * len(b)
        for j, y in enumerate(b, 1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (0 if x == y else 1),
            )
        previous = current
    return previous[len(b)]


@dataclass(frozen=True)
class BoundaryOutcome:
    """Result of the search: the winning segmentation and its word spans.

    ``accepted`` is False when the best candidate's normalized distance
    exceeded the threshold; the fields still describe that best
    candidate.
    """

    utterance_id: str
    accepted: bool
    segmentation: Segmentation
    variants: tuple[tuple[str, tuple[str, ...]], ...]
    total_distance: int
    normalized_distance: float


def align_word_boundaries(
    amap: AttentionMap,
    ref_seg: SegmentedUtterance,
    cfg: AttnConfig = AttnConfig(),
    dictionary: ReferenceDictionary | None = None,
) -> BoundaryOutcome:
    """Pick the candidate segmentation closest to the reference pronunciations.

    Each candidate is scored by the sum over words of the edit distance
    between the word's hypothesis span and its reference pronunciation
    (minimum over dictionary variants when the word is listed). Ties
    prefer fewer repaired cuts, then generation order. The utterance is
    accepted when total distance divided by the reference phone count is
    within ``cfg.threshold``.
    """
    candidates = split_by_attention(amap, ref_seg, cfg)
    ref_variants: list[tuple[tuple[str, ...], ...]] = []
    for span in ref_seg.words:
        if dictionary is not None and span.word in dictionary:
            ref_variants.append(dictionary.pronunciations(span.word))
        else:
            ref_variants.append((span.phones,))

    best: Segmentation | None = None
    best_spans: tuple[tuple[str, ...], ...] = ()
    best_key: tuple[int, int, int] | None = None
    for order, candidate in enumerate(candidates):
        spans = candidate.spans(amap.col_phones)
        total = sum(
            min(edit_distance(span, pron) for pron in prons)
            for span, prons in zip(spans, ref_variants)
        )
        key = (total, candidate.repaired, order)
        if best_key is None or key < best_key:
            best, best_spans, best_key = candidate, spans, key

    total_ref = len(ref_seg.phones)
    normalized = best_key[0] / total_ref
    variants = tuple((span.word, hyp) for span, hyp in zip(ref_seg.words, best_spans))
    return BoundaryOutcome(
        utterance_id=amap.utterance_id,
        accepted=normalized <= cfg.threshold,
        segmentation=best,
        variants=variants,
        total_distance=best_key[0],
        normalized_distance=normalized,
    )


@dataclass(frozen=True)
class AttnExtraction:
    """Accepted variant pairs plus per-utterance rejects and segmentations."""

    pairs: tuple[tuple[str, tuple[str, ...]], ...]
    rejects: tuple[tuple[str, float], ...]
    segmentations: tuple[tuple[str, Segmentation], ...]
    empty_spans: int


def extract_variants_attn(
    maps: Iterable[AttentionMap],
    refs: Iterable[SegmentedUtterance],
    dictionary: ReferenceDictionary | None = None,
    cfg: AttnConfig = AttnConfig(),
) -> AttnExtraction:
    """Run the boundary search over a corpus, keeping accepted utterances only."""
    pairs: list[tuple[str, tuple[str, ...]]] = []
    rejects: list[tuple[str, float]] = []
    segmentations: list[tuple[str, Segmentation]] = []
    empty = 0
    for amap, ref_seg in pair_by_id(maps, refs):
        outcome = align_word_boundaries(amap, ref_seg, cfg, dictionary)
        if not outcome.accepted:
            rejects.append((outcome.utterance_id, outcome.normalized_distance))
            continue
        segmentations.append((outcome.utterance_id, outcome.segmentation))
        for word, span in outcome.variants:
            if span:
                pairs.append((word, span))
            else:
                empty += 1
    return AttnExtraction(tuple(pairs), tuple(rejects), tuple(segmentations), empty)
