import random

import pytest

from pronvar.phonecore import (
    PhoneInventory,
    PhoneSequence,
    ReferenceDictionary,
    SegmentedUtterance,
    WordSpan,
)

# Enough ARPAbet to cover every fixture in the suite.
TEST_PHONES = (
    "AA AE AH AO AW AY B CH D DH EH ER EY F G HH IH IY JH K L M N NG OW OY P R S SH T TH UH UW V W Y Z ZH".split()
)


@pytest.fixture(scope="session")
def inv() -> PhoneInventory:
    return PhoneInventory.from_phones(TEST_PHONES)


@pytest.fixture
def seq(inv):
    def make(utt_id: str, phones) -> PhoneSequence:
        return PhoneSequence(utt_id, tuple(phones), inv)

    return make


@pytest.fixture
def seg(inv):
    def make(utt_id: str, words) -> SegmentedUtterance:
        return SegmentedUtterance(
            utt_id, tuple(WordSpan(w, tuple(p)) for w, p in words), inv
        )

    return make


def make_dictionary(n_words: int, seed: int, min_len: int = 2, max_len: int = 5) -> ReferenceDictionary:
    """Random single-pronunciation dictionary over the test phone set."""
    rng = random.Random(seed)
    entries = {}
    for i in range(n_words):
        length = rng.randint(min_len, max_len)
        entries[f"w{i:03d}"] = [tuple(rng.choice(TEST_PHONES) for _ in range(length))]
    return ReferenceDictionary(entries)


@pytest.fixture(scope="session")
def production_scale_lexicons():
    """Single-variant lexicons sized 336,882 and 35,204 sharing 26,597 entries."""
    from pronvar.phonecore import Lexicon

    shared = 26597
    rule_entries = {f"s{i}": {("AA",): 1} for i in range(shared)}
    rule_entries.update({f"a{i}": {("AA",): 1} for i in range(336882 - shared)})
    attn_entries = {f"s{i}": {("AA",): 1} for i in range(shared)}
    attn_entries.update({f"b{i}": {("AA",): 1} for i in range(35204 - shared)})
    return Lexicon(rule_entries), Lexicon(attn_entries)
