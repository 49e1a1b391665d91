#include "rapgen/cli.hpp"

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rapgen/align.hpp"
#include "rapgen/corpus.hpp"
#include "rapgen/decode.hpp"
#include "rapgen/error.hpp"
#include "rapgen/metrics.hpp"
#include "rapgen/model.hpp"
#include "rapgen/synth.hpp"
#include "rapgen/vowel.hpp"

namespace fs = std::filesystem;

namespace rapgen {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fnv1a_hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Every command drops a manifest next to its outputs so a run can be
// reproduced from the recorded flags, seeds and input hashes.
struct RunManifest {
    std::vector<std::string> command;
    nlohmann::json config = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();
    std::vector<std::string> inputs, outputs;

    void write(const fs::path& out_dir) const {
        nlohmann::json j;
        j["tool"] = "rapgen";
        j["version"] = kVersion;
        j["timestamp_utc"] = utc_timestamp();
        j["command"] = command;
        j["config"] = config;
        j["seeds"] = seeds;
        auto hash_list = [](const std::vector<std::string>& paths) {
            nlohmann::json m = nlohmann::json::object();
            for (const auto& p : paths) m[p] = fnv1a_hash_file(p);
            return m;
        };
        j["inputs"] = hash_list(inputs);
        j["outputs"] = hash_list(outputs);
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        if (!out) throw data_error("cannot write manifest in " + out_dir.string());
        out << j.dump(2) << '\n';
    }
};

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw data_error("cannot create output directory " + out + ": " + ec.message());
    return dir;
}

VowelDictionary load_dict_option(const std::string& dict_path, const std::string& eq) {
    const VowelEquivalence mode =
        eq == "identity" ? VowelEquivalence::Identity : VowelEquivalence::StripMedial;
    if (dict_path.empty()) return builtin_dictionary(mode);
    return load_dictionary(dict_path, mode);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

std::vector<FeatureSequence> encode_corpus(const std::vector<Song>& songs,
                                           const VowelDictionary& dict, const Vocab& vocab,
                                           const EncodeConfig& ecfg, size_t* truncated) {
    std::vector<FeatureSequence> seqs;
    seqs.reserve(songs.size());
    size_t trunc = 0;
    for (const auto& song : songs) {
        seqs.push_back(encode_training_sequence(song, dict, vocab, ecfg));
        if (seqs.back().truncated) ++trunc;
    }
    if (truncated) *truncated = trunc;
    return seqs;
}

// --- align

struct AlignArgs {
    std::string timestamps, out;
    bool injective = false;
    bool freq_labels = false;
    double medium_center = 3.0, medium_tol = 0.25;
};

int cmd_align(const AlignArgs& a, const std::vector<std::string>& command) {
    const auto ts = read_timestamp_file(a.timestamps);
    AlignOptions opts;
    opts.injective = a.injective;
    const FreqThresholds th{a.medium_center, a.medium_tol};
    std::vector<Song> songs;
    for (const auto& block : ts) {
        Song song = align_song(block, opts);
        if (a.freq_labels && song.beat_count() > 0) {
            song.freq_label = beat_frequency(song, th).label;
        }
        songs.push_back(std::move(song));
    }
    const fs::path dir = prepare_out_dir(a.out);
    const auto corpus_path = (dir / "corpus.txt").string();
    write_corpus_file(corpus_path, songs);

    RunManifest m;
    m.command = command;
    m.config = {{"injective", a.injective},
                {"freq_labels", a.freq_labels},
                {"medium_center", a.medium_center},
                {"medium_tol", a.medium_tol}};
    m.inputs = {a.timestamps};
    m.outputs = {corpus_path};
    m.write(dir);
    std::cout << "aligned " << songs.size() << " songs -> " << corpus_path << "\n";
    return 0;
}

// --- synth

struct SynthArgs {
    std::string out;
    SynthSpec spec;
    std::string beat_pattern = "2,2,4";
    bool freq_labels = false;
};

int cmd_synth(const SynthArgs& a, const std::vector<std::string>& command) {
    SynthSpec spec = a.spec;
    spec.beat_pattern = parse_int_list(a.beat_pattern);
    if (a.freq_labels) spec.label_freq = FreqThresholds{};
    const SynthResult result = generate_synthetic_corpus(spec);

    const fs::path dir = prepare_out_dir(a.out);
    const auto corpus_path = (dir / "corpus.txt").string();
    const auto dict_path = (dir / "vowels.tsv").string();
    const auto gt_path = (dir / "ground_truth.tsv").string();
    write_corpus_file(corpus_path, result.songs);
    write_dictionary_file(dict_path, result.dict);
    write_ground_truth_file(gt_path, result.ground_truth);

    RunManifest m;
    m.command = command;
    m.seeds["synth"] = spec.seed;
    m.config = {{"n_songs", spec.n_songs},
                {"sentences_per_song", spec.sentences_per_song},
                {"len_min", spec.len_min},
                {"len_max", spec.len_max},
                {"vocab_size", spec.vocab_size},
                {"n_vowel_classes", spec.n_vowel_classes},
                {"ngram", spec.ngram},
                {"chain_len", spec.chain_len},
                {"beat_pattern", spec.beat_pattern},
                {"repeat_rhyme_words", spec.repeat_rhyme_words},
                {"freq_labels", a.freq_labels}};
    m.outputs = {corpus_path, dict_path, gt_path};
    m.write(dir);
    std::cout << "wrote " << result.songs.size() << " songs -> " << corpus_path << "\n";
    return 0;
}

// --- train

struct TrainArgs {
    std::string corpus, pretrain_corpus, dict_path, out;
    std::string preset = "desk";
    std::string equivalence = "strip";
    long steps = 500, pretrain_steps = -1;
    int batch_size = 8;
    double lr = 0.00015, beta1 = 0.9, beta2 = 0.999, eps = 1e-6;
    uint64_t seed = 0;
    int max_len = 1024;
    int hidden = 0, heads = 0, layers = 0;
    double dropout = -1.0;
    bool tie_output = false;
};

int cmd_train(const TrainArgs& a, const std::vector<std::string>& command) {
    const VowelDictionary dict = load_dict_option(a.dict_path, a.equivalence);
    const auto songs = read_corpus_file(a.corpus);
    std::vector<Song> all_songs = songs;
    std::vector<Song> pre_songs;
    if (!a.pretrain_corpus.empty()) {
        pre_songs = read_corpus_file(a.pretrain_corpus);
        all_songs.insert(all_songs.end(), pre_songs.begin(), pre_songs.end());
    }
    size_t unknown = 0;
    const Vocab vocab = Vocab::build(all_songs, dict, &unknown);
    if (unknown > 0) {
        std::cerr << "note: " << unknown
                  << " corpus words missing from the vowel dictionary (null vowel)\n";
    }

    ModelConfig cfg = a.preset == "paper"
                          ? ModelConfig{}
                          : ModelConfig::desk_scale(vocab.size(), dict.num_classes() + 1);
    cfg.vocab_size = vocab.size();
    cfg.n_vowels = dict.num_classes() + 1;
    cfg.max_abs_pos = a.max_len;
    if (a.hidden > 0) cfg.hidden_size = a.hidden;
    if (a.heads > 0) cfg.n_heads = a.heads;
    if (a.layers > 0) cfg.n_layers = a.layers;
    if (a.dropout >= 0.0) cfg.dropout = a.dropout;
    cfg.tie_output = a.tie_output;
    cfg.validate();

    EncodeConfig ecfg;
    ecfg.max_len = a.max_len;
    ecfg.max_intra_pos = cfg.max_intra_pos;
    ecfg.max_sentences = cfg.max_sentences;

    size_t truncated = 0;
    const auto seqs = encode_corpus(songs, dict, vocab, ecfg, &truncated);
    if (truncated > 0) {
        std::cerr << "note: " << truncated << " songs truncated to " << a.max_len
                  << " tokens\n";
    }

    ModelParams params = init_model(cfg, a.seed);
    TrainConfig tcfg;
    tcfg.lr = a.lr;
    tcfg.beta1 = a.beta1;
    tcfg.beta2 = a.beta2;
    tcfg.eps = a.eps;
    tcfg.batch_size = a.batch_size;
    tcfg.seed = a.seed;

    std::vector<TrainReport> reports;
    if (!pre_songs.empty()) {
        const auto pre_seqs = encode_corpus(pre_songs, dict, vocab, ecfg, nullptr);
        TrainConfig pre = tcfg;
        pre.max_steps = a.pretrain_steps >= 0 ? a.pretrain_steps : a.steps;
        pre.phase = TrainPhase::Pretrain;
        reports.push_back(train(params, pre_seqs, pre));
        std::cout << "pretrain: " << reports.back().steps << " steps, final loss "
                  << reports.back().final_loss() << "\n";
    }
    tcfg.max_steps = a.steps;
    tcfg.phase = TrainPhase::Finetune;
    reports.push_back(train(params, seqs, tcfg));
    const double ppl = perplexity(params, seqs);
    std::cout << "train: " << reports.back().steps << " steps, final loss "
              << reports.back().final_loss() << ", train ppl " << ppl << "\n";

    const fs::path dir = prepare_out_dir(a.out);
    const auto ckpt_path = (dir / "model.ckpt").string();
    Checkpoint ckpt{std::move(params), vocab, dict.class_names()};
    save_checkpoint(ckpt_path, ckpt);

    const auto report_path = (dir / "train_report.tsv").string();
    {
        std::ofstream rep(report_path, std::ios::binary);
        rep.precision(12);
        rep << "step\tphase\tloss\n";
        long step = 0;
        for (const auto& r : reports) {
            const char* phase = r.phase == TrainPhase::Pretrain ? "pretrain" : "finetune";
            for (double loss : r.losses) {
                rep << step++ << '\t' << phase << '\t' << loss << '\n';
            }
        }
        rep << "# final train ppl\t" << ppl << '\n';
    }

    RunManifest m;
    m.command = command;
    m.seeds["init"] = a.seed;
    m.seeds["train"] = a.seed;
    m.config = {{"preset", a.preset},
                {"steps", a.steps},
                {"batch_size", a.batch_size},
                {"lr", a.lr},
                {"beta1", a.beta1},
                {"beta2", a.beta2},
                {"eps", a.eps},
                {"max_len", a.max_len},
                {"hidden_size", ckpt.params.cfg.hidden_size},
                {"n_heads", ckpt.params.cfg.n_heads},
                {"n_layers", ckpt.params.cfg.n_layers},
                {"dropout", ckpt.params.cfg.dropout},
                {"tie_output", ckpt.params.cfg.tie_output},
                {"equivalence", a.equivalence}};
    m.inputs = {a.corpus};
    if (!a.pretrain_corpus.empty()) m.inputs.push_back(a.pretrain_corpus);
    if (!a.dict_path.empty()) m.inputs.push_back(a.dict_path);
    m.outputs = {ckpt_path, report_path};
    m.write(dir);
    return 0;
}

// --- generate

struct GenerateArgs {
    std::string checkpoint, seed_sentence, out;
    std::string freq, mode = "temperature";
    double alpha = 0.95, temperature = 1.0;
    int ngram_max = 3, top_k = 0;
    int sentences = 8, max_tokens = 512;
    uint64_t rng_seed = 0;
    bool no_constraint = false;
};

int cmd_generate(const GenerateArgs& a, const std::vector<std::string>& command) {
    const Checkpoint ckpt = load_checkpoint(a.checkpoint);

    GenControls controls;
    const Song seed = parse_song(a.seed_sentence);
    controls.seed_sentence = seed.sentences.front();
    if (!a.freq.empty()) {
        const auto f = freq_label_from_char(a.freq[0]);
        if (!f) throw usage_error("generate: --freq expects s, m or f");
        controls.freq = f;
    }
    if (a.mode == "argmax") {
        controls.mode = SampleMode::Argmax;
    } else if (a.mode == "topk") {
        controls.mode = SampleMode::TopK;
    } else if (a.mode == "temperature") {
        controls.mode = SampleMode::Temperature;
    } else {
        throw usage_error("generate: unknown mode '" + a.mode + "'");
    }
    controls.alpha = a.alpha;
    controls.ngram_max = a.ngram_max;
    controls.temperature = a.temperature;
    controls.top_k = a.top_k;
    controls.max_sentences = a.sentences;
    controls.max_tokens = a.max_tokens;
    controls.rng_seed = a.rng_seed;
    controls.constraint_enabled = !a.no_constraint;

    const GenResult result = generate(ckpt.params, ckpt.vocab, controls);

    const fs::path dir = prepare_out_dir(a.out);
    const auto song_path = (dir / "song.txt").string();
    write_corpus_file(song_path, {result.song});

    RunManifest m;
    m.command = command;
    m.seeds["rng"] = a.rng_seed;
    m.config = {{"alpha", a.alpha},
                {"ngram_max", a.ngram_max},
                {"mode", a.mode},
                {"temperature", a.temperature},
                {"top_k", a.top_k},
                {"sentences", a.sentences},
                {"max_tokens", a.max_tokens},
                {"freq", a.freq},
                {"constraint", !a.no_constraint}};
    m.inputs = {a.checkpoint};
    m.outputs = {song_path};
    m.write(dir);
    std::cout << render_song(result.song);
    return 0;
}

// --- evaluate

struct EvaluateArgs {
    std::string corpus, ref, checkpoint, dict_path, out;
    std::string equivalence = "strip";
    bool rd_per_word = false;
    int max_len = 1024;
};

int cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& command) {
    const auto songs = read_corpus_file(a.corpus);

    std::optional<Checkpoint> ckpt;
    if (!a.checkpoint.empty()) ckpt = load_checkpoint(a.checkpoint);
    const VowelDictionary dict = load_dict_option(a.dict_path, a.equivalence);

    MetricsReport report;
    report.rd = rhyme_density(songs, dict, a.rd_per_word);
    report.combo1 = combo_n(songs, dict, 1);
    report.combo2 = combo_n(songs, dict, 2);
    report.combo3 = combo_n(songs, dict, 3);
    report.rhyme_repetition = rhyme_repetition_rate(songs, dict);

    if (ckpt) {
        EncodeConfig ecfg;
        ecfg.max_len = std::min(a.max_len, ckpt->params.cfg.max_abs_pos);
        ecfg.max_intra_pos = ckpt->params.cfg.max_intra_pos;
        ecfg.max_sentences = ckpt->params.cfg.max_sentences;
        const auto seqs = encode_corpus(songs, dict, ckpt->vocab, ecfg, nullptr);
        report.ppl = perplexity(ckpt->params, seqs);
        report.ra = rhyme_accuracy(ckpt->params, songs, dict, ckpt->vocab, ecfg);
        report.ba = beat_accuracy(ckpt->params, songs, dict, ckpt->vocab, ecfg);
    }
    if (!a.ref.empty()) {
        const auto ref_songs = read_corpus_file(a.ref);
        const auto [fod_a, sod_a] = beat_interval_distributions(songs);
        const auto [fod_b, sod_b] = beat_interval_distributions(ref_songs);
        report.fod = wasserstein_1d(fod_a, fod_b);
        report.sod = wasserstein_1d(sod_a, sod_b);
    }

    const fs::path dir = prepare_out_dir(a.out);
    const auto tsv_path = (dir / "report.tsv").string();
    const auto txt_path = (dir / "report.txt").string();
    {
        std::ofstream tsv(tsv_path, std::ios::binary);
        tsv.precision(12);
        if (report.ppl) tsv << "ppl\t" << *report.ppl << '\n';
        if (report.ra) tsv << "ra\t" << *report.ra << '\n';
        tsv << "rd\t" << report.rd << '\n';
        tsv << "combo1\t" << report.combo1 << '\n';
        tsv << "combo2\t" << report.combo2 << '\n';
        tsv << "combo3\t" << report.combo3 << '\n';
        if (report.ba) tsv << "ba\t" << *report.ba << '\n';
        if (report.fod) tsv << "fod\t" << *report.fod << '\n';
        if (report.sod) tsv << "sod\t" << *report.sod << '\n';
        tsv << "rhyme_repetition\t" << report.rhyme_repetition << '\n';
    }
    {
        std::ofstream txt(txt_path, std::ios::binary);
        txt.precision(6);
        txt << "corpus: " << a.corpus << "  (" << songs.size() << " songs)\n";
        if (report.ppl) txt << "perplexity          " << *report.ppl << '\n';
        if (report.ra) txt << "rhyme accuracy      " << *report.ra << " %\n";
        txt << "rhyme density       " << report.rd << '\n';
        txt << "combo-1/2/3         " << report.combo1 << " / " << report.combo2 << " / "
            << report.combo3 << '\n';
        if (report.ba) txt << "beat accuracy       " << *report.ba << " %\n";
        if (report.fod) txt << "FOD distance        " << *report.fod << '\n';
        if (report.sod) txt << "SOD distance        " << *report.sod << '\n';
        txt << "rhyme repetition    " << report.rhyme_repetition << " %\n";
    }
    std::cout << std::ifstream(txt_path).rdbuf();

    RunManifest m;
    m.command = command;
    m.config = {{"rd_per_word", a.rd_per_word}, {"equivalence", a.equivalence}};
    m.inputs = {a.corpus};
    if (!a.ref.empty()) m.inputs.push_back(a.ref);
    if (!a.checkpoint.empty()) m.inputs.push_back(a.checkpoint);
    if (!a.dict_path.empty()) m.inputs.push_back(a.dict_path);
    m.outputs = {tsv_path, txt_path};
    m.write(dir);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"rap lyric toolkit: beat alignment, rhyme-aware training, "
                 "constrained generation, evaluation"};
    app.set_config("--config")->envname("RAPGEN_CONFIG");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    AlignArgs aa;
    auto* align_cmd = app.add_subcommand("align", "beat-lyric alignment from timestamps");
    align_cmd->add_option("--timestamps", aa.timestamps, "timestamp file")->required();
    align_cmd->add_option("--out", aa.out, "output directory")->required();
    align_cmd->add_flag("--injective", aa.injective, "at most one beat per word");
    align_cmd->add_flag("--freq-labels", aa.freq_labels, "attach #FREQ labels");
    align_cmd->add_option("--medium-center", aa.medium_center, "medium bucket center");
    align_cmd->add_option("--medium-tol", aa.medium_tol, "medium bucket half-width");

    SynthArgs sa;
    auto* synth_cmd = app.add_subcommand("synth", "synthetic corpus with ground truth");
    synth_cmd->add_option("--out", sa.out, "output directory")->required();
    synth_cmd->add_option("--seed", sa.spec.seed, "rng seed");
    synth_cmd->add_option("--songs", sa.spec.n_songs, "number of songs");
    synth_cmd->add_option("--sentences", sa.spec.sentences_per_song, "sentences per song");
    synth_cmd->add_option("--len-min", sa.spec.len_min, "min sentence length");
    synth_cmd->add_option("--len-max", sa.spec.len_max, "max sentence length");
    synth_cmd->add_option("--vocab", sa.spec.vocab_size, "synthetic vocabulary size");
    synth_cmd->add_option("--vowel-classes", sa.spec.n_vowel_classes, "rhyme classes");
    synth_cmd->add_option("--ngram", sa.spec.ngram, "rhyme width of chains");
    synth_cmd->add_option("--chain", sa.spec.chain_len, "sentences per rhyme chain");
    synth_cmd->add_option("--beat-pattern", sa.beat_pattern,
                          "comma-separated words-between-beats pattern");
    synth_cmd->add_flag("--repeat-rhymes", sa.spec.repeat_rhyme_words,
                        "realize rhymes with identical words");
    synth_cmd->add_flag("--freq-labels", sa.freq_labels, "attach #FREQ labels");

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "train a model on a corpus");
    train_cmd->add_option("--corpus", ta.corpus, "training corpus")->required();
    train_cmd->add_option("--out", ta.out, "output directory")->required();
    train_cmd->add_option("--pretrain-corpus", ta.pretrain_corpus, "pretraining corpus");
    train_cmd->add_option("--dict", ta.dict_path, "vowel dictionary (default: builtin)");
    train_cmd->add_option("--equivalence", ta.equivalence, "strip|identity");
    train_cmd->add_option("--steps", ta.steps, "training steps");
    train_cmd->add_option("--pretrain-steps", ta.pretrain_steps, "pretraining steps");
    train_cmd->add_option("--batch-size", ta.batch_size, "sequences per step");
    train_cmd->add_option("--lr", ta.lr, "learning rate");
    train_cmd->add_option("--beta1", ta.beta1, "Adam beta1");
    train_cmd->add_option("--beta2", ta.beta2, "Adam beta2");
    train_cmd->add_option("--eps", ta.eps, "Adam epsilon");
    train_cmd->add_option("--seed", ta.seed, "init/train seed");
    train_cmd->add_option("--preset", ta.preset, "desk|paper");
    train_cmd->add_option("--max-len", ta.max_len, "sequence length cap");
    train_cmd->add_option("--hidden", ta.hidden, "hidden size override");
    train_cmd->add_option("--heads", ta.heads, "attention heads override");
    train_cmd->add_option("--layers", ta.layers, "layer count override");
    train_cmd->add_option("--dropout", ta.dropout, "dropout override");
    train_cmd->add_flag("--tie-output", ta.tie_output, "tie word embedding and output");

    GenerateArgs ga;
    auto* gen_cmd = app.add_subcommand("generate", "generate a song from a checkpoint");
    gen_cmd->add_option("--checkpoint", ga.checkpoint, "model checkpoint")->required();
    gen_cmd->add_option("--seed-sentence", ga.seed_sentence, "conditioning sentence")
        ->required();
    gen_cmd->add_option("--out", ga.out, "output directory")->required();
    gen_cmd->add_option("--freq", ga.freq, "frequency control: s|m|f");
    gen_cmd->add_option("--alpha", ga.alpha, "rhyme constraint weight");
    gen_cmd->add_option("--ngram-max", ga.ngram_max, "max N-gram rhyme width");
    gen_cmd->add_option("--mode", ga.mode, "argmax|topk|temperature");
    gen_cmd->add_option("--temperature", ga.temperature, "sampling temperature");
    gen_cmd->add_option("--top-k", ga.top_k, "top-k cutoff");
    gen_cmd->add_option("--sentences", ga.sentences, "sentence budget (incl. seed)");
    gen_cmd->add_option("--max-tokens", ga.max_tokens, "token budget");
    gen_cmd->add_option("--rng-seed", ga.rng_seed, "sampling seed");
    gen_cmd->add_flag("--no-constraint", ga.no_constraint, "disable the rhyme constraint");

    EvaluateArgs ea;
    auto* eval_cmd = app.add_subcommand("evaluate", "objective metrics for a corpus");
    eval_cmd->add_option("--corpus", ea.corpus, "corpus to evaluate")->required();
    eval_cmd->add_option("--out", ea.out, "output directory")->required();
    eval_cmd->add_option("--ref", ea.ref, "reference corpus for FOD/SOD");
    eval_cmd->add_option("--checkpoint", ea.checkpoint, "model for PPL/RA/BA");
    eval_cmd->add_option("--dict", ea.dict_path, "vowel dictionary (default: builtin)");
    eval_cmd->add_option("--equivalence", ea.equivalence, "strip|identity");
    eval_cmd->add_option("--max-len", ea.max_len, "sequence length cap");
    eval_cmd->add_flag("--rd-per-word", ea.rd_per_word, "per-word rhyme density variant");

    std::vector<std::string> command(argv, argv + argc);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*align_cmd) return cmd_align(aa, command);
        if (*synth_cmd) return cmd_synth(sa, command);
        if (*train_cmd) return cmd_train(ta, command);
        if (*gen_cmd) return cmd_generate(ga, command);
        if (*eval_cmd) return cmd_evaluate(ea, command);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Usage: return 2;
            case ErrorKind::Data: return 3;
            case ErrorKind::Runtime: return 4;
        }
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace rapgen
