"""End-to-end acceptance suite.

Each test prints a single PASS/FAIL line so a plain ``pytest -s`` run
reads as a checklist. Time limits are asserted alongside the behavior.
"""

import random
import time

import pytest

from conftest import make_dictionary
from pronvar import lexbuild
from pronvar.attnalign import AttnConfig, edit_distance, extract_variants_attn, split_by_attention
from pronvar.cli import main
from pronvar.dpalign import AlignConfig, extract_variants_dp, nw_align
from pronvar.phonecore import (
    PhoneInventory,
    PhoneSequence,
    ReferenceDictionary,
    SegmentedUtterance,
    WordSpan,
)
from pronvar.synthbench import (
    DEFAULT_RULES,
    ConfusionRule,
    build_corpus,
    identity_attention,
    oracle_align,
    recovery_report,
)


def report(criterion: int, ok: bool, detail: str):
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


def test_criterion_1_oracle_equivalence():
    inv = PhoneInventory.from_phones(["A", "B", "C"])
    rng = random.Random(1000003)
    started = time.monotonic()
    mismatches = 0
    for _ in range(1000):
        a = [rng.choice("ABC") for _ in range(rng.randint(0, 6))]
        b = [rng.choice("ABC") for _ in range(rng.randint(0, 6))]
        fast = nw_align(PhoneSequence("u", tuple(a), inv), b).total_cost
        if fast != oracle_align(a, b):
            mismatches += 1
    elapsed = time.monotonic() - started
    report(
        1,
        mismatches == 0 and elapsed < 10.0,
        f"1000 random pairs, {mismatches} oracle mismatches, {elapsed:.2f}s",
    )


def test_criterion_2_edit_distance_metric():
    rng = random.Random(77)
    started = time.monotonic()
    violations = 0
    for _ in range(1000):
        a, b, c = (
            tuple(rng.choice("ABCD") for _ in range(rng.randint(0, 8))) for _ in range(3)
        )
        ok = (
            edit_distance(a, b) == edit_distance(b, a)
            and (edit_distance(a, b) == 0) == (a == b)
            and edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)
            and edit_distance(a, b) >= 0
        )
        if not ok:
            violations += 1
    elapsed = time.monotonic() - started
    report(
        2,
        violations == 0 and elapsed < 10.0,
        f"1000 random triples, {violations} metric violations, {elapsed:.2f}s",
    )


def test_criterion_3_lexicon_statistics_arithmetic(production_scale_lexicons):
    rule_like, attn_like = production_scale_lexicons
    assert rule_like.entry_count == 336882
    assert attn_like.entry_count == 35204
    merged = lexbuild.merge(rule_like, attn_like)
    result = lexbuild.stats(attn_like, baseline=rule_like)
    ok = (
        merged.entry_count == 345489
        and result.shared == 26597
        and abs(result.reduction_pct - 89.55) <= 0.01
    )
    report(
        3,
        ok,
        f"reduction {result.reduction_pct:.4f}%, shared {result.shared}, "
        f"merged {merged.entry_count}",
    )


def _pattern_corpus(dictionary, inventory, words, rules):
    """Utterances cycling through the given words, corrupted at p=1."""
    refs, hyps, maps = [], [], []
    for i in range(6):
        chosen = [words[(i + k) % len(words)] for k in range(1 + i % 2)]
        spans = tuple(WordSpan(w, dictionary.canonical(w)) for w in chosen)
        ref = SegmentedUtterance(f"u{i}", spans, inventory)
        from pronvar.synthbench import corrupt

        result = corrupt(ref, rules, seed=i)
        refs.append(ref)
        hyps.append(result.sequence)
        maps.append(identity_attention(f"u{i}", result.sequence.phones, ref.phones))
    return refs, hyps, maps


def test_criterion_4_qualitative_patterns():
    started = time.monotonic()
    dictionary = ReferenceDictionary(
        {
            "doesn't": [("D", "AH", "Z", "N", "T")],
            "everything": [("EH", "V", "R", "IY", "TH", "IH", "NG")],
            "cat": [("K", "AE", "T")],
        }
    )
    inventory = PhoneInventory.from_phones(
        ["D", "AH", "Z", "N", "T", "S", "EH", "V", "R", "IY", "TH", "IH", "NG", "B", "K", "AE"]
    )
    rules = (
        ConfusionRule("Z", "S", 1.0),
        ConfusionRule("V", "B", 1.0),
        ConfusionRule("TH", "T", 1.0),
    )
    words = ["doesn't", "everything", "cat"]
    refs, hyps, maps = _pattern_corpus(dictionary, inventory, words, rules)

    canonical = lexbuild.from_dictionary(dictionary)
    dp_pairs = extract_variants_dp(hyps, refs, dictionary, AlignConfig()).pairs
    dp_lex = lexbuild.merge(canonical, lexbuild.accumulate(dp_pairs))
    attn_result = extract_variants_attn(maps, refs, dictionary, AttnConfig())
    attn_lex = lexbuild.merge(canonical, lexbuild.accumulate(attn_result.pairs))

    expected = {
        "doesn't": [("D", "AH", "Z", "N", "T"), ("D", "AH", "S", "N", "T")],
        "everything": [
            ("EH", "V", "R", "IY", "TH", "IH", "NG"),
            ("EH", "B", "R", "IY", "T", "IH", "NG"),
        ],
    }
    ok = True
    for lex in (dp_lex, attn_lex):
        for word, prons in expected.items():
            for pron in prons:
                ok = ok and lex.has_variant(word, pron)
    elapsed = time.monotonic() - started
    report(4, ok and elapsed < 5.0, f"both aligners, {elapsed:.2f}s")


def test_criterion_5_synthetic_round_trip():
    started = time.monotonic()
    dictionary = make_dictionary(100, seed=20260808)
    corpus = build_corpus(
        dictionary, DEFAULT_RULES, vocabulary=100, utterances=1000, seed=20260808
    )
    result = extract_variants_attn(corpus.maps, corpus.references, dictionary, AttnConfig())
    built = lexbuild.accumulate(result.pairs)
    _, recall = recovery_report(built, corpus.truth_lexicon, dictionary)

    truth = dict(corpus.truth_bounds)
    correct = n_pred = n_truth = 0
    for utt_id, seg in result.segmentations:
        truth_cuts = set(truth[utt_id].cuts)
        cuts = set(seg.cuts)
        correct += len(cuts & truth_cuts)
        n_pred += len(cuts)
        n_truth += len(truth_cuts)
    precision_b = correct / n_pred if n_pred else 1.0
    recall_b = correct / n_truth if n_truth else 1.0
    f1 = 0.0 if precision_b + recall_b == 0 else 2 * precision_b * recall_b / (precision_b + recall_b)

    jittered = build_corpus(
        dictionary,
        DEFAULT_RULES,
        vocabulary=100,
        utterances=1000,
        seed=20260808,
        attention="jitter",
        jitter_radius=2,
    )
    wide = extract_variants_attn(
        jittered.maps, jittered.references, dictionary, AttnConfig(shift_radius=3)
    )
    narrow = extract_variants_attn(
        jittered.maps, jittered.references, dictionary, AttnConfig(shift_radius=0)
    )
    _, recall_wide = recovery_report(
        lexbuild.accumulate(wide.pairs), jittered.truth_lexicon, dictionary
    )
    _, recall_narrow = recovery_report(
        lexbuild.accumulate(narrow.pairs), jittered.truth_lexicon, dictionary
    )
    elapsed = time.monotonic() - started
    ok = recall >= 0.95 and f1 == 1.0 and recall_wide > recall_narrow and elapsed < 60.0
    report(
        5,
        ok,
        f"recall {recall:.3f}, boundary F1 {f1:.3f}, "
        f"jitter recall {recall_wide:.3f} vs {recall_narrow:.3f} at radius 0, {elapsed:.1f}s",
    )


def test_criterion_6_variant_count_law(seg):
    ref = seg("u1", [("left", ["K", "AE", "T", "S"]), ("right", ["D", "AO", "G", "Z", "IY", "UW"])])
    amap = identity_attention("u1", ref.phones, ref.phones)
    counts = {}
    for radius in (0, 1, 3):
        candidates = split_by_attention(amap, ref, AttnConfig(shift_radius=radius))
        counts[radius] = len(candidates)
    ok = all(counts[n] == 2 * n + 1 for n in counts)
    report(6, ok, f"candidate counts {counts} for radii 0, 1, 3")


def _run_cli_everything(base, capsys):
    """Run every subcommand once rooted at ``base``; return output bytes."""
    base.mkdir()
    dict_path = base / "dict.txt"
    dict_path.write_text("doesn't\tD AH Z N T\ncat\tK AE T\nvery\tV EH R IY\n", encoding="utf-8")
    rules_path = base / "rules.txt"
    rules_path.write_text("Z\tS\t0.5\nV\tB\t0.5\n", encoding="utf-8")

    corpus = base / "corpus"
    outputs = {}

    def run(argv):
        assert main([str(a) for a in argv]) == 0
        return capsys.readouterr().out

    run(["synth", "--dict", dict_path, "--rules", rules_path, "--words", "3",
         "--utts", "25", "--seed", "13", "--attn", "jitter:2", "--out-dir", corpus])
    run(["align-dp", "--hyp", corpus / "hyp.txt", "--ref", corpus / "ref.txt",
         "--dict", dict_path, "--out", base / "dp.pairs"])
    run(["align-attn", "--attn", corpus / "attn.txt", "--ref", corpus / "ref.txt",
         "--dict", dict_path, "--radius", "3", "--out", base / "attn.pairs",
         "--rejects", base / "attn.rejects", "--bounds", base / "attn.bounds"])
    run(["build", "--pairs", base / "dp.pairs", "--dict", dict_path,
         "--out", base / "dp.lex"])
    run(["build", "--pairs", base / "attn.pairs", "--min-count", "1",
         "--out", base / "attn.lex"])
    run(["merge", "--in", base / "dp.lex", "--in", base / "attn.lex",
         "--out", base / "merged.lex"])
    outputs["stats"] = run(["stats", "--lex", base / "attn.lex", "--baseline", base / "dp.lex"])
    outputs["eval"] = run(["eval", "--built", base / "attn.lex",
                           "--truth", corpus / "truth_lexicon.txt", "--dict", dict_path])
    outputs["eval-bounds"] = run(["eval-bounds", "--pred", base / "attn.bounds",
                                  "--truth", corpus / "truth_bounds.txt"])

    for path in sorted(base.rglob("*")):
        if path.is_file():
            outputs[str(path.relative_to(base))] = path.read_bytes()
    return outputs


def test_criterion_7_cli_determinism(tmp_path, capsys):
    first = _run_cli_everything(tmp_path / "one", capsys)
    second = _run_cli_everything(tmp_path / "two", capsys)
    differing = [name for name in first if first[name] != second.get(name)]
    ok = not differing and set(first) == set(second)
    report(7, ok, f"{len(first)} outputs compared, differing: {differing or 'none'}")
