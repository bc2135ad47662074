"""Global alignment of non-native phone sequences against native references.

The aligner minimizes total cost over matches, substitutions, and gaps
with a classic (n+1) x (m+1) score matrix, then backtracks from the
bottom-right corner. Native word boundaries are projected through the
alignment to carve the unsegmented hypothesis into per-word
pronunciation variants.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import (
    AlignmentReferenceMismatch,
    DuplicateUtteranceId,
    InventoryMismatch,
    MissingUtterance,
)
from .phonecore import (
    PhoneSequence,
    ReferenceDictionary,
    SegmentedUtterance,
    WordSpan,
)

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"


@dataclass(frozen=True)
class AlignConfig:
    """Costs (minimized). Defaults are unit Levenshtein costs."""

    match_score: float = 0.0
    mismatch_score: float = 1.0
    gap_penalty: float = 1.0

    def __post_init__(self):
        if self.mismatch_score < self.match_score:
            raise ValueError("mismatch_score must be >= match_score")
        if self.gap_penalty <= 0:
            raise ValueError("gap_penalty must be positive")


@dataclass(frozen=True)
class EditOp:
    """One alignment step. ``hyp_index`` is None for inserts, ``ref_index``
    for deletes (a delete consumes a hypothesis phone the reference lacks)."""

    kind: str
    hyp_index: int | None = None
    ref_index: int | None = None

    @classmethod
    def match(cls, i: int, j: int) -> "EditOp":
        return cls(MATCH, i, j)

    @classmethod
    def substitute(cls, i: int, j: int) -> "EditOp":
        return cls(SUBSTITUTE, i, j)

    @classmethod
    def delete(cls, i: int) -> "EditOp":
        return cls(DELETE, i, None)

    @classmethod
    def insert(cls, j: int) -> "EditOp":
        return cls(INSERT, None, j)


@dataclass(frozen=True)
class Alignment:
    """A monotone global alignment and its total cost."""

    hyp_phones: tuple[str, ...]
    ref_phones: tuple[str, ...]
    ops: tuple[EditOp, ...]
    total_cost: float


def nw_align(hyp: PhoneSequence, ref: Sequence[str], cfg: AlignConfig = AlignConfig()) -> Alignment:
    """Minimum-cost global alignment of ``hyp`` against ``ref``.

    Backtracking ties are broken deterministically: diagonal
    (match/substitute) first, then delete (gap in the reference), then
    insert.
    """
    a = hyp.phones
    b = tuple(ref)
    for symbol in b:
        if symbol not in hyp.inventory:
            raise InventoryMismatch(
                f"reference phone {symbol!r} not in the hypothesis inventory"
            )
    n, m = len(a), len(b)
    gap = cfg.gap_penalty

    score = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        score[i][0] = score[i - 1][0] + gap
    for j in range(1, m + 1):
        score[0][j] = score[0][j - 1] + gap
    for i in range(1, n + 1):
        row = score[i]
        prev = score[i - 1]
        ai = a[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (cfg.match_score if ai == b[j - 1] else cfg.mismatch_score)
            up = prev[j] + gap
            left = row[j - 1] + gap
            row[j] = min(diag, up, left)

    ops: list[EditOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            step = cfg.match_score if a[i - 1] == b[j - 1] else cfg.mismatch_score
            if score[i][j] == score[i - 1][j - 1] + step:
                kind = MATCH if a[i - 1] == b[j - 1] else SUBSTITUTE
                ops.append(EditOp(kind, i - 1, j - 1))
                i -= 1
                j -= 1
                continue
        if i > 0 and score[i][j] == score[i - 1][j] + gap:
            ops.append(EditOp.delete(i - 1))
            i -= 1
            continue
        ops.append(EditOp.insert(j - 1))
        j -= 1
    ops.reverse()
    return Alignment(a, b, tuple(ops), score[n][m])


def project_boundaries(
    alignment: Alignment, ref_seg: SegmentedUtterance
) -> list[tuple[str, tuple[str, ...]]]:
    """Carve the hypothesis into per-word spans using the reference boundaries.

    Each word receives the hypothesis phones whose alignment ops touch
    that word's reference positions. A hypothesis phone consumed by a
    delete attaches to the word of the nearest following reference
    position, or to the last word when the delete closes the utterance.
    Spans partition the hypothesis; a word may come out empty.
    """
    ref_phones = ref_seg.phones
    if alignment.ref_phones != ref_phones:
        raise AlignmentReferenceMismatch(
            f"alignment reference has {len(alignment.ref_phones)} phones, "
            f"segmentation has {len(ref_phones)}"
        )
    word_of: list[int] = []
    for wi, span in enumerate(ref_seg.words):
        word_of.extend([wi] * len(span.phones))

    spans: list[list[str]] = [[] for _ in ref_seg.words]
    pending: list[str] = []  # deleted hyp phones awaiting the next ref position
    for op in alignment.ops:
        if op.kind == DELETE:
            pending.append(alignment.hyp_phones[op.hyp_index])
            continue
        wi = word_of[op.ref_index]
        if pending:
            spans[wi].extend(pending)
            pending.clear()
        if op.hyp_index is not None:
            spans[wi].append(alignment.hyp_phones[op.hyp_index])
    if pending:
        spans[-1].extend(pending)
    return [(span.word, tuple(phones)) for span, phones in zip(ref_seg.words, spans)]


@dataclass(frozen=True)
class DpExtraction:
    """Variant pairs harvested by the aligner, plus the empty-span tally."""

    pairs: tuple[tuple[str, tuple[str, ...]], ...]
    empty_spans: int


def pair_by_id(left: Iterable, right: Iterable) -> list[tuple]:
    """Pair two utterance collections by id, preserving left order.

    Any id present on one side only raises :class:`MissingUtterance`.
    """
    left = list(left)
    right_map: dict[str, object] = {}
    for item in right:
        if item.utterance_id in right_map:
            raise DuplicateUtteranceId(item.utterance_id)
        right_map[item.utterance_id] = item
    seen: set[str] = set()
    pairs = []
    for item in left:
        if item.utterance_id in seen:
            raise DuplicateUtteranceId(item.utterance_id)
        seen.add(item.utterance_id)
        if item.utterance_id not in right_map:
            raise MissingUtterance(item.utterance_id)
        pairs.append((item, right_map[item.utterance_id]))
    for utt_id in right_map:
        if utt_id not in seen:
            raise MissingUtterance(utt_id)
    return pairs


def _resolve_reference(
    hyp: PhoneSequence,
    ref_seg: SegmentedUtterance,
    dictionary: ReferenceDictionary,
    cfg: AlignConfig,
) -> SegmentedUtterance:
    """Swap in the dictionary variant that aligns cheapest, word by word.

    Words with a single listed pronunciation (or none) keep the span they
    came with. For a word with alternatives, each is tried in place while
    the other spans stay fixed, and the full-utterance alignment cost
    decides; ties keep the dictionary's file order.
    """
    spans = list(ref_seg.words)
    changed = False
    for wi, span in enumerate(spans):
        if span.word not in dictionary:
            continue
        variants = dictionary.pronunciations(span.word)
        if len(variants) < 2:
            continue
        best = None
        best_cost = None
        for pron in variants:
            candidate = [p for s in spans[:wi] for p in s.phones]
            candidate.extend(pron)
            candidate.extend(p for s in spans[wi + 1 :] for p in s.phones)
            cost = nw_align(hyp, candidate, cfg).total_cost
            if best_cost is None or cost < best_cost:
                best, best_cost = pron, cost
        if best != span.phones:
            spans[wi] = WordSpan(span.word, best)
            changed = True
    if not changed:
        return ref_seg
    return SegmentedUtterance(ref_seg.utterance_id, tuple(spans), ref_seg.inventory)


def extract_variants_dp(
    hyps: Iterable[PhoneSequence],
    refs: Iterable[SegmentedUtterance],
    dictionary: ReferenceDictionary,
    cfg: AlignConfig = AlignConfig(),
) -> DpExtraction:
    """Align every utterance and emit one (word, span) pair per non-empty span.

    Hypotheses and references are paired by utterance id; output order
    follows the hypothesis order regardless of how work is scheduled.
    """
    pairs: list[tuple[str, tuple[str, ...]]] = []
    empty = 0
    for hyp, ref_seg in pair_by_id(hyps, refs):
        resolved = _resolve_reference(hyp, ref_seg, dictionary, cfg)
        alignment = nw_align(hyp, resolved.phones, cfg)
        for word, span in project_boundaries(alignment, resolved):
            if span:
                pairs.append((word, span))
            else:
                empty += 1
    return DpExtraction(tuple(pairs), empty)
