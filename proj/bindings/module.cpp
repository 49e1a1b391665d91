#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "rapgen/align.hpp"
#include "rapgen/corpus.hpp"
#include "rapgen/decode.hpp"
#include "rapgen/error.hpp"
#include "rapgen/metrics.hpp"
#include "rapgen/model.hpp"
#include "rapgen/synth.hpp"
#include "rapgen/vowel.hpp"

namespace py = pybind11;
using namespace rapgen;

namespace {

VowelEquivalence eq_from_string(const std::string& s) {
    if (s == "identity") return VowelEquivalence::Identity;
    if (s == "strip") return VowelEquivalence::StripMedial;
    throw usage_error("equivalence must be 'strip' or 'identity'");
}

std::optional<FreqLabel> freq_from_opt(const std::optional<std::string>& s) {
    if (!s || s->empty()) return std::nullopt;
    const auto f = freq_label_from_char((*s)[0]);
    if (!f) throw usage_error("freq must be 's', 'm' or 'f'");
    return f;
}

SampleMode mode_from_string(const std::string& s) {
    if (s == "argmax") return SampleMode::Argmax;
    if (s == "topk") return SampleMode::TopK;
    if (s == "temperature") return SampleMode::Temperature;
    throw usage_error("mode must be 'argmax', 'topk' or 'temperature'");
}

// Model, vocabulary and encoding settings bundled the way the CLI and
// checkpoints keep them.
struct PyModel {
    Checkpoint ckpt;

    EncodeConfig encode_config() const {
        EncodeConfig ecfg;
        ecfg.max_len = ckpt.params.cfg.max_abs_pos;
        ecfg.max_intra_pos = ckpt.params.cfg.max_intra_pos;
        ecfg.max_sentences = ckpt.params.cfg.max_sentences;
        return ecfg;
    }

    std::vector<FeatureSequence> encode_corpus(const std::vector<Song>& songs,
                                               const VowelDictionary& dict) const {
        std::vector<FeatureSequence> seqs;
        for (const auto& s : songs) {
            seqs.push_back(encode_training_sequence(s, dict, ckpt.vocab, encode_config()));
        }
        return seqs;
    }
};

PyModel make_model(const std::vector<Song>& songs, const VowelDictionary& dict,
                   int hidden, int heads, int layers, int max_len, double dropout,
                   bool tie_output, uint64_t seed) {
    const Vocab vocab = Vocab::build(songs, dict);
    ModelConfig cfg = ModelConfig::desk_scale(vocab.size(), dict.num_classes() + 1);
    cfg.hidden_size = hidden;
    cfg.n_heads = heads;
    cfg.n_layers = layers;
    cfg.max_abs_pos = max_len;
    cfg.dropout = dropout;
    cfg.tie_output = tie_output;
    cfg.validate();
    return PyModel{Checkpoint{init_model(cfg, seed), vocab, dict.class_names()}};
}

}  // namespace

PYBIND11_MODULE(_rapgen, m) {
    m.doc() = "rap lyric toolkit: alignment, rhyme-aware modeling, constrained "
              "generation, metrics";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            switch (e.kind()) {
                case ErrorKind::Usage:
                case ErrorKind::Data:
                    PyErr_SetString(PyExc_ValueError, e.what());
                    return;
                case ErrorKind::Runtime:
                    PyErr_SetString(PyExc_RuntimeError, e.what());
                    return;
            }
        }
    });

    // --- vowel
    py::class_<VowelDictionary>(m, "VowelDictionary")
        .def("__len__", &VowelDictionary::size)
        .def("num_classes", &VowelDictionary::num_classes)
        .def("vowel_of",
             [](const VowelDictionary& d, const std::string& w) { return d.vowel_of(w).id; })
        .def("try_vowel_of",
             [](const VowelDictionary& d, const std::string& w) -> std::optional<int32_t> {
                 const auto v = d.try_vowel_of(w);
                 if (!v) return std::nullopt;
                 return v->id;
             })
        .def("class_name",
             [](const VowelDictionary& d, int32_t id) { return d.class_name(VowelId{id}); })
        .def("same_rhyme", &VowelDictionary::same_rhyme)
        .def("entries", [](const VowelDictionary& d) { return d.entries(); });

    m.def(
        "load_dictionary",
        [](const std::string& path, const std::string& eq) {
            return load_dictionary(path, eq_from_string(eq));
        },
        py::arg("path"), py::arg("equivalence") = "strip");
    m.def(
        "builtin_dictionary",
        [](const std::string& eq) { return builtin_dictionary(eq_from_string(eq)); },
        py::arg("equivalence") = "strip");

    // --- corpus
    py::class_<Word>(m, "Word")
        .def(py::init<std::string, bool>(), py::arg("text"), py::arg("has_beat") = false)
        .def_readwrite("text", &Word::text)
        .def_readwrite("has_beat", &Word::has_beat)
        .def("__repr__", [](const Word& w) {
            return (w.has_beat ? "*" : "") + w.text;
        });
    py::class_<Sentence>(m, "Sentence")
        .def(py::init<>())
        .def_readwrite("words", &Sentence::words);
    py::class_<Song>(m, "Song")
        .def(py::init<>())
        .def_readwrite("id", &Song::id)
        .def_readwrite("sentences", &Song::sentences)
        .def_property(
            "freq_label",
            [](const Song& s) -> std::optional<std::string> {
                if (!s.freq_label) return std::nullopt;
                return std::string(1, freq_label_char(*s.freq_label));
            },
            [](Song& s, const std::optional<std::string>& v) {
                s.freq_label = freq_from_opt(v);
            })
        .def("word_count", &Song::word_count)
        .def("beat_count", &Song::beat_count);

    m.def("parse_song", &parse_song);
    m.def("render_song", &render_song);
    m.def("read_corpus_file", &read_corpus_file);
    m.def("write_corpus_file", &write_corpus_file);

    py::class_<FeatureSequence>(m, "FeatureSequence")
        .def_readonly("tokens", &FeatureSequence::tokens)
        .def_readonly("vowels", &FeatureSequence::vowels)
        .def_readonly("intra", &FeatureSequence::intra)
        .def_readonly("sent", &FeatureSequence::sent)
        .def_readonly("abs", &FeatureSequence::abs)
        .def_readonly("truncated", &FeatureSequence::truncated)
        .def("__len__", &FeatureSequence::size);

    // --- align
    py::class_<TimedWord>(m, "TimedWord")
        .def(py::init<std::string, double>(), py::arg("word"), py::arg("t"))
        .def_static("from_interval", &TimedWord::from_interval)
        .def_readwrite("word", &TimedWord::word)
        .def_readwrite("t", &TimedWord::t);

    m.def("average_word_duration", &average_word_duration);
    m.def(
        "align_beats",
        [](const std::vector<TimedWord>& words, const std::vector<double>& beats,
           double r, bool injective) {
            std::vector<TimedBeat> tb;
            for (double t : beats) tb.push_back({t});
            AlignOptions opts;
            opts.injective = injective;
            return align_beats(words, tb, r, opts).pairs;
        },
        py::arg("words"), py::arg("beats"), py::arg("r"), py::arg("injective") = false);
    m.def(
        "beat_frequency",
        [](const Song& song, double center, double tol) {
            const auto bf = beat_frequency(song, {center, tol});
            return py::make_tuple(bf.ratio, std::string(1, freq_label_char(bf.label)));
        },
        py::arg("song"), py::arg("medium_center") = 3.0, py::arg("medium_tol") = 0.25);

    // --- decode helpers
    m.def(
        "adjusted_distribution",
        [](const Eigen::RowVectorXd& p, int32_t target,
           const std::vector<int32_t>& token_vowels, double alpha) {
            return adjusted_distribution(p, VowelId{target}, token_vowels, alpha);
        },
        py::arg("p"), py::arg("target_vowel"), py::arg("token_vowels"), py::arg("alpha"));

    // --- metrics over plain corpora
    m.def(
        "rhyme_density",
        [](const std::vector<Song>& songs, const VowelDictionary& dict, bool per_word) {
            return rhyme_density(songs, dict, per_word);
        },
        py::arg("songs"), py::arg("dict"), py::arg("per_word") = false);
    m.def("combo_n", &combo_n);
    m.def("rhyme_repetition_rate", &rhyme_repetition_rate);
    m.def("beat_interval_distributions", [](const std::vector<Song>& songs) {
        const auto [fod, sod] = beat_interval_distributions(songs);
        return py::make_tuple(fod.pmf, sod.pmf);
    });
    m.def("wasserstein_1d", [](const std::map<int, double>& a,
                               const std::map<int, double>& b) {
        return wasserstein_1d(IntervalDistribution{a}, IntervalDistribution{b});
    });

    // --- synth
    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("n_songs", &SynthSpec::n_songs)
        .def_readwrite("sentences_per_song", &SynthSpec::sentences_per_song)
        .def_readwrite("len_min", &SynthSpec::len_min)
        .def_readwrite("len_max", &SynthSpec::len_max)
        .def_readwrite("vocab_size", &SynthSpec::vocab_size)
        .def_readwrite("n_vowel_classes", &SynthSpec::n_vowel_classes)
        .def_readwrite("ngram", &SynthSpec::ngram)
        .def_readwrite("chain_len", &SynthSpec::chain_len)
        .def_readwrite("beat_pattern", &SynthSpec::beat_pattern)
        .def_readwrite("repeat_rhyme_words", &SynthSpec::repeat_rhyme_words)
        .def_readwrite("seed", &SynthSpec::seed)
        .def_property(
            "label_freq",
            [](const SynthSpec& s) { return s.label_freq.has_value(); },
            [](SynthSpec& s, bool on) {
                s.label_freq = on ? std::optional<FreqThresholds>(FreqThresholds{})
                                  : std::nullopt;
            });

    py::class_<SynthGroundTruth>(m, "SynthGroundTruth")
        .def_readonly("rd", &SynthGroundTruth::rd)
        .def_readonly("combo1", &SynthGroundTruth::combo1)
        .def_readonly("combo2", &SynthGroundTruth::combo2)
        .def_readonly("combo3", &SynthGroundTruth::combo3)
        .def_readonly("rhyme_repetition", &SynthGroundTruth::rhyme_repetition)
        .def_readonly("fod", &SynthGroundTruth::fod)
        .def_readonly("sod", &SynthGroundTruth::sod);

    py::class_<SynthResult>(m, "SynthResult")
        .def_readonly("songs", &SynthResult::songs)
        .def_readonly("dict", &SynthResult::dict)
        .def_readonly("ground_truth", &SynthResult::ground_truth);

    m.def("generate_synthetic_corpus", &generate_synthetic_corpus);

    // --- model
    py::class_<PyModel>(m, "Model")
        .def(py::init(&make_model), py::arg("songs"), py::arg("dict"),
             py::arg("hidden") = 128, py::arg("heads") = 4, py::arg("layers") = 2,
             py::arg("max_len") = 1024, py::arg("dropout") = 0.0,
             py::arg("tie_output") = false, py::arg("seed") = 0)
        .def_property_readonly("vocab_size",
                               [](const PyModel& pm) { return pm.ckpt.vocab.size(); })
        .def_property_readonly(
            "parameter_count",
            [](const PyModel& pm) { return pm.ckpt.params.parameter_count(); })
        .def(
            "train",
            [](PyModel& pm, const std::vector<Song>& songs, const VowelDictionary& dict,
               long steps, int batch_size, double lr, uint64_t seed,
               const std::string& phase) {
                TrainConfig tcfg;
                tcfg.max_steps = steps;
                tcfg.batch_size = batch_size;
                tcfg.lr = lr;
                tcfg.seed = seed;
                tcfg.phase =
                    phase == "pretrain" ? TrainPhase::Pretrain : TrainPhase::Finetune;
                const auto report = train(pm.ckpt.params, pm.encode_corpus(songs, dict),
                                          tcfg);
                return report.losses;
            },
            py::arg("songs"), py::arg("dict"), py::arg("steps"),
            py::arg("batch_size") = 8, py::arg("lr") = 0.00015, py::arg("seed") = 0,
            py::arg("phase") = "finetune")
        .def("perplexity",
             [](const PyModel& pm, const std::vector<Song>& songs,
                const VowelDictionary& dict) {
                 return perplexity(pm.ckpt.params, pm.encode_corpus(songs, dict));
             })
        .def("rhyme_accuracy",
             [](const PyModel& pm, const std::vector<Song>& songs,
                const VowelDictionary& dict) {
                 return rhyme_accuracy(pm.ckpt.params, songs, dict, pm.ckpt.vocab,
                                       pm.encode_config());
             })
        .def("beat_accuracy",
             [](const PyModel& pm, const std::vector<Song>& songs,
                const VowelDictionary& dict) {
                 return beat_accuracy(pm.ckpt.params, songs, dict, pm.ckpt.vocab,
                                      pm.encode_config());
             })
        .def(
            "forward",
            [](const PyModel& pm, const Song& song, const VowelDictionary& dict) {
                return forward(pm.ckpt.params,
                               encode_training_sequence(song, dict, pm.ckpt.vocab,
                                                        pm.encode_config()));
            },
            "Per-position next-token distributions for one song, teacher-forced.")
        .def(
            "generate",
            [](const PyModel& pm, const std::string& seed_sentence,
               const std::optional<std::string>& freq, double alpha, int ngram_max,
               const std::string& mode, double temperature, int top_k, int sentences,
               int max_tokens, uint64_t rng_seed, bool constraint) {
                GenControls controls;
                const Song seed = parse_song(seed_sentence);
                controls.seed_sentence = seed.sentences.front();
                controls.freq = freq_from_opt(freq);
                controls.alpha = alpha;
                controls.ngram_max = ngram_max;
                controls.mode = mode_from_string(mode);
                controls.temperature = temperature;
                controls.top_k = top_k;
                controls.max_sentences = sentences;
                controls.max_tokens = max_tokens;
                controls.rng_seed = rng_seed;
                controls.constraint_enabled = constraint;
                return generate(pm.ckpt.params, pm.ckpt.vocab, controls).song;
            },
            py::arg("seed_sentence"), py::arg("freq") = std::nullopt,
            py::arg("alpha") = 0.95, py::arg("ngram_max") = 3,
            py::arg("mode") = "temperature", py::arg("temperature") = 1.0,
            py::arg("top_k") = 0, py::arg("sentences") = 8, py::arg("max_tokens") = 512,
            py::arg("rng_seed") = 0, py::arg("constraint") = true)
        .def("save",
             [](const PyModel& pm, const std::string& path) {
                 save_checkpoint(path, pm.ckpt);
             })
        .def_static("load", [](const std::string& path) {
            return PyModel{load_checkpoint(path)};
        });
}
