#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rapgen/corpus.hpp"

namespace rapgen {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ModelConfig {
    int hidden_size = 768;
    int n_heads = 12;
    int n_layers = 12;
    int vocab_size = 0;
    int n_vowels = 0;  // rhyme classes + 1 for the null vowel
    int max_abs_pos = 1024;
    int max_intra_pos = 32;
    int max_sentences = 128;
    int ffn_size = 0;  // 0 -> 4 * hidden_size
    double dropout = 0.1;
    bool tie_output = false;  // share the word embedding with the output projection

    // Laptop-sized preset used throughout the tests.
    static ModelConfig desk_scale(int vocab_size, int n_vowels);

    int ffn() const { return ffn_size > 0 ? ffn_size : 4 * hidden_size; }
    int head_dim() const { return hidden_size / n_heads; }
    void validate() const;  // throws a usage error on bad values
};

// All trainable tensors.  Biases and layer-norm parameters are stored as
// 1 x n matrices so every tensor can be visited uniformly.
struct ModelParams {
    ModelConfig cfg;

    Mat e_word, e_abs, e_vowel, e_intra, e_sent;

    struct Layer {
        Mat ln1_g, ln1_b;
        Mat wq, bq, wk, bk, wv, bv, wo, bo;
        Mat ln2_g, ln2_b;
        Mat w1, b1, w2, b2;
    };
    std::vector<Layer> layers;

    Mat lnf_g, lnf_b;
    Mat w_out, b_out;  // w_out unused when cfg.tie_output

    size_t parameter_count() const;

    // Tensors in a fixed order, with stable names ("layer0.wq", ...).
    std::vector<std::pair<std::string, Mat*>> tensors();
    std::vector<std::pair<std::string, const Mat*>> tensors() const;

    // Same shapes, all zeros (gradient / optimizer state buffers).
    static ModelParams zeros_like(const ModelParams& other);
};

// Deterministic scaled-normal init (std 0.02); layer-norm gains start at
// one, every bias at zero.
ModelParams init_model(const ModelConfig& cfg, uint64_t seed);

// --- Inference.

// Per-position next-token probability distributions, shape [T, vocab].
// Row t is the distribution over the token at position t+1 given tokens
// 0..t.  Inputs are validated against the config caps.
Mat forward(const ModelParams& params, const FeatureSequence& seq);

// Sum of next-token negative log likelihoods over the sequence and the
// number of predicted (non-[PAD]) targets.
struct SequenceNll {
    double nll_sum = 0.0;
    long n_targets = 0;
};
SequenceNll sequence_nll(const ModelParams& params, const FeatureSequence& seq);

// exp(mean NLL per predicted token) over the corpus; [BEAT]/[SEP] and
// frequency tokens count as targets, [PAD] does not.
double perplexity(const ModelParams& params, const std::vector<FeatureSequence>& corpus);

// Argmax next-token prediction at every position (teacher forcing).
std::vector<int32_t> argmax_predictions(const ModelParams& params,
                                        const FeatureSequence& seq);

// Incremental forward pass with cached keys/values, for token-by-token
// generation.  Produces the same distributions as forward() on the same
// prefix.
class IncrementalScorer {
public:
    explicit IncrementalScorer(const ModelParams& params);

    // Feeds one position and returns the distribution over the next
    // token.  The absolute position is the running length.
    Eigen::RowVectorXd append(int32_t token, int32_t vowel, int32_t intra,
                              int32_t sent_idx);

    int length() const { return len_; }

private:
    const ModelParams* params_;
    int len_ = 0;
    std::vector<Mat> k_cache_, v_cache_;  // per layer, one row per position
};

// --- Training.

enum class TrainPhase { Pretrain, Finetune };

struct TrainConfig {
    double lr = 0.00015;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-6;
    int batch_size = 8;
    long max_steps = 0;
    uint64_t seed = 0;
    TrainPhase phase = TrainPhase::Finetune;

    void validate() const;
};

struct TrainReport {
    std::vector<double> losses;  // mean batch NLL per step
    long steps = 0;
    TrainPhase phase = TrainPhase::Finetune;

    double final_loss() const { return losses.empty() ? 0.0 : losses.back(); }
};

// Adam with bias correction.  Owns first/second moment buffers so one
// optimizer can span a pretrain phase and a finetune phase.
class AdamOptimizer {
public:
    AdamOptimizer(const ModelParams& params, double lr, double beta1, double beta2,
                  double eps);
    void step(ModelParams& params, const ModelParams& grads);
    long t() const { return t_; }

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    ModelParams m_, v_;
};

// Runs `tcfg.max_steps` Adam steps over shuffled batches.  The RNG seed
// drives both batch order and dropout, so a fixed seed reproduces the
// final parameters bit for bit on a single worker.  A non-finite loss
// aborts with diagnostics.  An external optimizer can be supplied to
// continue across phases.
TrainReport train(ModelParams& params, const std::vector<FeatureSequence>& corpus,
                  const TrainConfig& tcfg, AdamOptimizer* optimizer = nullptr);

// Gradient of the mean-NLL loss for one sequence, accumulated into
// `grads` with weight `scale`; returns the sequence's mean NLL.
double accumulate_gradients(const ModelParams& params, const FeatureSequence& seq,
                            double scale, ModelParams& grads,
                            double dropout = 0.0, std::mt19937_64* rng = nullptr);

// --- Checkpoints.

struct Checkpoint {
    ModelParams params;
    Vocab vocab;
    std::vector<std::string> vowel_classes;  // rhyme-class names by id, from 1
};

// Versioned container: text manifest followed by raw little-endian f64
// tensors.  Loading refuses mismatched format versions.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rapgen
