"""Smoke tests for the python bindings."""

import math

import pytest

import rapgen


@pytest.fixture(scope="module")
def synth():
    spec = rapgen.SynthSpec()
    spec.n_songs = 4
    spec.sentences_per_song = 5
    spec.len_min = 3
    spec.len_max = 4
    spec.vocab_size = 24
    spec.n_vowel_classes = 4
    spec.ngram = 2
    spec.chain_len = 3
    spec.seed = 7
    return rapgen.generate_synthetic_corpus(spec)


@pytest.fixture(scope="module")
def trained(synth):
    model = rapgen.Model(synth.songs, synth.dict, hidden=32, heads=2, layers=1,
                         max_len=128, seed=3)
    losses = model.train(synth.songs, synth.dict, steps=60, batch_size=4, seed=3)
    return model, losses


def test_builtin_dictionary_rhymes():
    d = rapgen.builtin_dictionary()
    assert d.same_rhyme("寨", "菜")
    assert d.same_rhyme("象", "量")
    assert not d.same_rhyme("寨", "望")
    assert d.vowel_of("寨") == d.vowel_of("爱")
    with pytest.raises(ValueError):
        d.vowel_of("@")


def test_parse_render_round_trip(synth):
    for song in synth.songs:
        text = rapgen.render_song(song)
        back = rapgen.parse_song(text)
        assert rapgen.render_song(back) == text


def test_beat_aligned_parse():
    song = rapgen.parse_song("我长大的地方像一*个简朴*的寨\n")
    flags = [w.has_beat for w in song.sentences[0].words]
    assert sum(flags) == 2
    assert song.sentences[0].words[8].text == "个"
    assert song.sentences[0].words[8].has_beat


def test_metrics_match_ground_truth(synth):
    gt = synth.ground_truth
    assert rapgen.rhyme_density(synth.songs, synth.dict) == pytest.approx(gt.rd)
    assert rapgen.combo_n(synth.songs, synth.dict, 2) == pytest.approx(gt.combo2)
    assert rapgen.rhyme_repetition_rate(synth.songs, synth.dict) == pytest.approx(
        gt.rhyme_repetition)
    fod, sod = rapgen.beat_interval_distributions(synth.songs)
    assert fod == pytest.approx(gt.fod)
    assert rapgen.wasserstein_1d(fod, fod) == 0.0


def test_alignment():
    words = [rapgen.TimedWord("a", 1.0), rapgen.TimedWord("b", 2.0)]
    pairs = rapgen.align_beats(words, [1.1, 5.0], r=1.0)
    assert pairs == [(0, 0)]
    assert rapgen.average_word_duration(words, 4.0) == pytest.approx(2.0)


def test_adjusted_distribution_worked_example():
    q = rapgen.adjusted_distribution([0.5, 0.3, 0.2], 2, [1, 2, 3], 0.95)
    assert list(q) == pytest.approx([0.475, 0.335, 0.19])


def test_training_and_perplexity(synth, trained):
    model, losses = trained
    assert len(losses) == 60
    assert losses[-1] < losses[0]
    ppl = model.perplexity(synth.songs, synth.dict)
    assert math.isfinite(ppl)
    assert 1.0 < ppl < model.vocab_size


def test_forward_rows_are_distributions(synth, trained):
    model, _ = trained
    probs = model.forward(synth.songs[0], synth.dict)
    assert probs.shape[1] == model.vocab_size
    assert probs.min() >= 0.0
    for row_sum in probs.sum(axis=1):
        assert row_sum == pytest.approx(1.0, abs=1e-6)


def test_generation_conditions_on_seed(synth, trained):
    model, _ = trained
    seed_line = rapgen.render_song(synth.songs[0]).splitlines()[0]
    song = model.generate(seed_line, sentences=3, rng_seed=11)
    first = rapgen.render_song(song).splitlines()[0]
    assert first == seed_line
    again = model.generate(seed_line, sentences=3, rng_seed=11)
    assert rapgen.render_song(again) == rapgen.render_song(song)


def test_checkpoint_round_trip(tmp_path, synth, trained):
    model, _ = trained
    path = str(tmp_path / "model.ckpt")
    model.save(path)
    back = rapgen.Model.load(path)
    assert back.vocab_size == model.vocab_size
    assert back.perplexity(synth.songs, synth.dict) == pytest.approx(
        model.perplexity(synth.songs, synth.dict))


def test_teacher_forced_metrics_run(synth, trained):
    model, _ = trained
    ra = model.rhyme_accuracy(synth.songs, synth.dict)
    ba = model.beat_accuracy(synth.songs, synth.dict)
    assert 0.0 <= ra <= 100.0
    assert 0.0 <= ba <= 100.0
