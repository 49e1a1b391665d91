#include "rapgen/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "rapgen/error.hpp"

namespace rapgen {

namespace {

using RowArray = Eigen::Array<double, 1, Eigen::Dynamic>;

constexpr double kLnEps = 1e-5;
constexpr double kInitStd = 0.02;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_grad(double x) {
    return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) +
           x * std::exp(-0.5 * x * x) * kInvSqrt2Pi;
}

}  // namespace

ModelConfig ModelConfig::desk_scale(int vocab_size, int n_vowels) {
    ModelConfig cfg;
    cfg.hidden_size = 128;
    cfg.n_heads = 4;
    cfg.n_layers = 2;
    cfg.vocab_size = vocab_size;
    cfg.n_vowels = n_vowels;
    cfg.dropout = 0.0;  // memorization-friendly
    return cfg;
}

void ModelConfig::validate() const {
    auto req = [](bool ok, const std::string& what) {
        if (!ok) throw usage_error("model config: " + what);
    };
    req(hidden_size >= 1 && n_heads >= 1 && n_layers >= 1, "sizes must be >= 1");
    req(hidden_size % n_heads == 0, "hidden_size must be divisible by n_heads");
    req(vocab_size > FIRST_WORD_ID, "vocab_size must cover the special tokens");
    req(n_vowels >= 1, "n_vowels must be >= 1");
    req(max_abs_pos >= 2 && max_intra_pos >= 1 && max_sentences >= 1, "caps must be >= 1");
    req(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
    req(ffn_size >= 0, "ffn_size must be >= 0");
}

std::vector<std::pair<std::string, Mat*>> ModelParams::tensors() {
    std::vector<std::pair<std::string, Mat*>> out;
    out.reserve(8 + layers.size() * 16);
    out.emplace_back("e_word", &e_word);
    out.emplace_back("e_abs", &e_abs);
    out.emplace_back("e_vowel", &e_vowel);
    out.emplace_back("e_intra", &e_intra);
    out.emplace_back("e_sent", &e_sent);
    for (size_t i = 0; i < layers.size(); ++i) {
        auto& l = layers[i];
        const std::string p = "layer" + std::to_string(i) + ".";
        out.emplace_back(p + "ln1_g", &l.ln1_g);
        out.emplace_back(p + "ln1_b", &l.ln1_b);
        out.emplace_back(p + "wq", &l.wq);
        out.emplace_back(p + "bq", &l.bq);
        out.emplace_back(p + "wk", &l.wk);
        out.emplace_back(p + "bk", &l.bk);
        out.emplace_back(p + "wv", &l.wv);
        out.emplace_back(p + "bv", &l.bv);
        out.emplace_back(p + "wo", &l.wo);
        out.emplace_back(p + "bo", &l.bo);
        out.emplace_back(p + "ln2_g", &l.ln2_g);
        out.emplace_back(p + "ln2_b", &l.ln2_b);
        out.emplace_back(p + "w1", &l.w1);
        out.emplace_back(p + "b1", &l.b1);
        out.emplace_back(p + "w2", &l.w2);
        out.emplace_back(p + "b2", &l.b2);
    }
    out.emplace_back("lnf_g", &lnf_g);
    out.emplace_back("lnf_b", &lnf_b);
    out.emplace_back("w_out", &w_out);
    out.emplace_back("b_out", &b_out);
    return out;
}

std::vector<std::pair<std::string, const Mat*>> ModelParams::tensors() const {
    auto mut = const_cast<ModelParams*>(this)->tensors();
    std::vector<std::pair<std::string, const Mat*>> out;
    out.reserve(mut.size());
    for (auto& [name, ptr] : mut) out.emplace_back(name, ptr);
    return out;
}

size_t ModelParams::parameter_count() const {
    size_t n = 0;
    for (const auto& [name, t] : tensors()) n += static_cast<size_t>(t->size());
    return n;
}

namespace {

ModelParams allocate_params(const ModelConfig& cfg) {
    cfg.validate();
    const int h = cfg.hidden_size;
    ModelParams p;
    p.cfg = cfg;
    p.e_word = Mat::Zero(cfg.vocab_size, h);
    p.e_abs = Mat::Zero(cfg.max_abs_pos, h);
    p.e_vowel = Mat::Zero(cfg.n_vowels, h);
    p.e_intra = Mat::Zero(cfg.max_intra_pos, h);
    p.e_sent = Mat::Zero(cfg.max_sentences, h);
    p.layers.resize(cfg.n_layers);
    for (auto& l : p.layers) {
        l.ln1_g = Mat::Zero(1, h);
        l.ln1_b = Mat::Zero(1, h);
        l.wq = Mat::Zero(h, h);
        l.bq = Mat::Zero(1, h);
        l.wk = Mat::Zero(h, h);
        l.bk = Mat::Zero(1, h);
        l.wv = Mat::Zero(h, h);
        l.bv = Mat::Zero(1, h);
        l.wo = Mat::Zero(h, h);
        l.bo = Mat::Zero(1, h);
        l.ln2_g = Mat::Zero(1, h);
        l.ln2_b = Mat::Zero(1, h);
        l.w1 = Mat::Zero(h, cfg.ffn());
        l.b1 = Mat::Zero(1, cfg.ffn());
        l.w2 = Mat::Zero(cfg.ffn(), h);
        l.b2 = Mat::Zero(1, h);
    }
    p.lnf_g = Mat::Zero(1, h);
    p.lnf_b = Mat::Zero(1, h);
    p.w_out = cfg.tie_output ? Mat(0, 0) : Mat::Zero(h, cfg.vocab_size);
    p.b_out = Mat::Zero(1, cfg.vocab_size);
    return p;
}

}  // namespace

ModelParams ModelParams::zeros_like(const ModelParams& other) {
    ModelParams p = allocate_params(other.cfg);
    return p;
}

ModelParams init_model(const ModelConfig& cfg, uint64_t seed) {
    ModelParams p = allocate_params(cfg);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, kInitStd);
    auto fill = [&](Mat& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
    };
    fill(p.e_word);
    fill(p.e_abs);
    fill(p.e_vowel);
    fill(p.e_intra);
    fill(p.e_sent);
    for (auto& l : p.layers) {
        l.ln1_g.setOnes();
        l.ln2_g.setOnes();
        fill(l.wq);
        fill(l.wk);
        fill(l.wv);
        fill(l.wo);
        fill(l.w1);
        fill(l.w2);
    }
    p.lnf_g.setOnes();
    if (!cfg.tie_output) fill(p.w_out);
    return p;
}

// --- Forward / backward machinery.

namespace {

void validate_sequence(const ModelConfig& cfg, const FeatureSequence& seq) {
    const size_t n = seq.size();
    if (n == 0) throw data_error("model: empty sequence");
    if (seq.vowels.size() != n || seq.intra.size() != n || seq.sent.size() != n ||
        seq.abs.size() != n) {
        throw data_error("model: feature arrays have mismatched lengths");
    }
    for (size_t t = 0; t < n; ++t) {
        const bool ok = seq.tokens[t] >= 0 && seq.tokens[t] < cfg.vocab_size &&
                        seq.vowels[t] >= 0 && seq.vowels[t] < cfg.n_vowels &&
                        seq.intra[t] >= 0 && seq.intra[t] < cfg.max_intra_pos &&
                        seq.sent[t] >= 0 && seq.sent[t] < cfg.max_sentences &&
                        seq.abs[t] >= 0 && seq.abs[t] < cfg.max_abs_pos;
        if (!ok) {
            throw data_error("model: out-of-range feature index at position " +
                             std::to_string(t));
        }
    }
}

// Input row t is the sum of the five embeddings.
Mat embed(const ModelParams& p, const FeatureSequence& seq) {
    const auto T = static_cast<Eigen::Index>(seq.size());
    Mat x(T, p.cfg.hidden_size);
    for (Eigen::Index t = 0; t < T; ++t) {
        x.row(t) = p.e_word.row(seq.tokens[t]) + p.e_abs.row(seq.abs[t]) +
                   p.e_vowel.row(seq.vowels[t]) + p.e_intra.row(seq.intra[t]) +
                   p.e_sent.row(seq.sent[t]);
    }
    return x;
}

// Row-wise layer norm; xhat and the inverse stddev are kept for backward.
Mat layer_norm(const Mat& x, const Mat& g, const Mat& b, Mat* xhat_out,
               Eigen::VectorXd* inv_out) {
    const auto T = x.rows();
    const auto h = x.cols();
    Mat xhat(T, h);
    Eigen::VectorXd inv(T);
    for (Eigen::Index t = 0; t < T; ++t) {
        const double mu = x.row(t).mean();
        const double var = (x.row(t).array() - mu).square().mean();
        const double is = 1.0 / std::sqrt(var + kLnEps);
        xhat.row(t) = (x.row(t).array() - mu) * is;
        inv(t) = is;
    }
    Mat y = (xhat.array().rowwise() * g.row(0).array()).rowwise() + b.row(0).array();
    if (xhat_out) *xhat_out = std::move(xhat);
    if (inv_out) *inv_out = std::move(inv);
    return y;
}

void layer_norm_backward(const Mat& dy, const Mat& g, const Mat& xhat,
                         const Eigen::VectorXd& inv, Mat& dx, Mat& dg, Mat& db) {
    const auto T = dy.rows();
    dx.resize(T, dy.cols());
    for (Eigen::Index t = 0; t < T; ++t) {
        const RowArray dxh = dy.row(t).array() * g.row(0).array();
        const RowArray xh = xhat.row(t).array();
        const double m1 = dxh.mean();
        const double m2 = (dxh * xh).mean();
        dx.row(t) = (inv(t) * (dxh - m1 - xh * m2)).matrix();
    }
    dg.row(0) += (dy.array() * xhat.array()).colwise().sum().matrix();
    db.row(0) += dy.colwise().sum();
}

struct LayerCache {
    Mat x_in, ln1_xhat, a;
    Eigen::VectorXd ln1_inv;
    Mat q, k, v;
    std::vector<Mat> att;  // per head, row-softmax over positions <= row
    Mat ctx;
    Mat drop_attn;  // dropout masks; empty when inactive
    Mat x_mid, ln2_xhat, b;
    Eigen::VectorXd ln2_inv;
    Mat h1, g;
    Mat drop_ffn;
};

struct ForwardCache {
    Mat x0;
    Mat drop_embed;
    std::vector<LayerCache> layers;
    Mat y, lnf_xhat;
    Eigen::VectorXd lnf_inv;
};

Mat dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64& rng) {
    Mat m(rows, cols);
    std::bernoulli_distribution keep(1.0 - p);
    const double scale = 1.0 / (1.0 - p);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = keep(rng) ? scale : 0.0;
    return m;
}

// Causal self-attention + FFN stack; returns the logits and fills the
// cache when requested.  Dropout is active only when rng is non-null.
Mat forward_logits(const ModelParams& p, const FeatureSequence& seq, ForwardCache* cache,
                   double dropout = 0.0, std::mt19937_64* rng = nullptr) {
    validate_sequence(p.cfg, seq);
    const auto T = static_cast<Eigen::Index>(seq.size());
    const int nh = p.cfg.n_heads;
    const int dk = p.cfg.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
    const bool drop = dropout > 0.0 && rng != nullptr;

    Mat x = embed(p, seq);
    if (cache) cache->x0 = x;
    if (drop) {
        Mat m = dropout_mask(T, x.cols(), dropout, *rng);
        x = x.cwiseProduct(m);
        if (cache) cache->drop_embed = std::move(m);
    }
    if (cache) cache->layers.resize(p.layers.size());

    for (size_t li = 0; li < p.layers.size(); ++li) {
        const auto& l = p.layers[li];
        LayerCache lc;
        lc.x_in = x;
        lc.a = layer_norm(x, l.ln1_g, l.ln1_b, &lc.ln1_xhat, &lc.ln1_inv);
        lc.q.noalias() = lc.a * l.wq;
        lc.q.rowwise() += l.bq.row(0);
        lc.k.noalias() = lc.a * l.wk;
        lc.k.rowwise() += l.bk.row(0);
        lc.v.noalias() = lc.a * l.wv;
        lc.v.rowwise() += l.bv.row(0);

        lc.ctx.resize(T, p.cfg.hidden_size);
        lc.att.assign(nh, Mat());
        for (int hh = 0; hh < nh; ++hh) {
            const auto qh = lc.q.middleCols(hh * dk, dk);
            const auto kh = lc.k.middleCols(hh * dk, dk);
            const auto vh = lc.v.middleCols(hh * dk, dk);
            Mat att = Mat::Zero(T, T);
            for (Eigen::Index i = 0; i < T; ++i) {
                Eigen::RowVectorXd s = (qh.row(i) * kh.topRows(i + 1).transpose()) * scale;
                const double mx = s.maxCoeff();
                const RowArray e = (s.array() - mx).exp();
                att.row(i).head(i + 1) = (e / e.sum()).matrix();
            }
            lc.ctx.middleCols(hh * dk, dk).noalias() = att * vh;
            lc.att[hh] = std::move(att);
        }
        Mat attn_out;
        attn_out.noalias() = lc.ctx * l.wo;
        attn_out.rowwise() += l.bo.row(0);
        if (drop) {
            lc.drop_attn = dropout_mask(T, attn_out.cols(), dropout, *rng);
            attn_out = attn_out.cwiseProduct(lc.drop_attn);
        }
        x += attn_out;

        lc.x_mid = x;
        lc.b = layer_norm(x, l.ln2_g, l.ln2_b, &lc.ln2_xhat, &lc.ln2_inv);
        lc.h1.noalias() = lc.b * l.w1;
        lc.h1.rowwise() += l.b1.row(0);
        lc.g = lc.h1.unaryExpr([](double v) { return gelu(v); });
        Mat ffn_out;
        ffn_out.noalias() = lc.g * l.w2;
        ffn_out.rowwise() += l.b2.row(0);
        if (drop) {
            lc.drop_ffn = dropout_mask(T, ffn_out.cols(), dropout, *rng);
            ffn_out = ffn_out.cwiseProduct(lc.drop_ffn);
        }
        x += ffn_out;
        if (cache) (*cache).layers[li] = std::move(lc);
    }

    Mat y;
    if (cache) {
        y = layer_norm(x, p.lnf_g, p.lnf_b, &cache->lnf_xhat, &cache->lnf_inv);
        cache->y = y;
    } else {
        y = layer_norm(x, p.lnf_g, p.lnf_b, nullptr, nullptr);
    }
    Mat logits;
    if (p.cfg.tie_output) {
        logits.noalias() = y * p.e_word.transpose();
    } else {
        logits.noalias() = y * p.w_out;
    }
    logits.rowwise() += p.b_out.row(0);
    return logits;
}

// log-softmax of one row, in place.
void log_softmax_row(Eigen::Ref<Eigen::RowVectorXd> row) {
    const double mx = row.maxCoeff();
    const double lse = mx + std::log((row.array() - mx).exp().sum());
    row.array() -= lse;
}

void backward(const ModelParams& p, const FeatureSequence& seq, const ForwardCache& cache,
              const Mat& dlogits, ModelParams& grads) {
    const auto T = static_cast<Eigen::Index>(seq.size());
    const int nh = p.cfg.n_heads;
    const int dk = p.cfg.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    Mat dy;
    if (p.cfg.tie_output) {
        dy.noalias() = dlogits * p.e_word;
        grads.e_word.noalias() += dlogits.transpose() * cache.y;
    } else {
        dy.noalias() = dlogits * p.w_out.transpose();
        grads.w_out.noalias() += cache.y.transpose() * dlogits;
    }
    grads.b_out.row(0) += dlogits.colwise().sum();

    Mat dx;
    layer_norm_backward(dy, p.lnf_g, cache.lnf_xhat, cache.lnf_inv, dx, grads.lnf_g,
                        grads.lnf_b);

    for (size_t li = p.layers.size(); li-- > 0;) {
        const auto& l = p.layers[li];
        const auto& lc = cache.layers[li];
        auto& gl = grads.layers[li];

        // FFN block.
        Mat dffn = dx;
        if (lc.drop_ffn.size()) dffn = dffn.cwiseProduct(lc.drop_ffn).eval();
        Mat dg_act;
        dg_act.noalias() = dffn * l.w2.transpose();
        gl.w2.noalias() += lc.g.transpose() * dffn;
        gl.b2.row(0) += dffn.colwise().sum();
        Mat dh1 = dg_act.cwiseProduct(lc.h1.unaryExpr([](double v) { return gelu_grad(v); }));
        Mat db_ln2;
        db_ln2.noalias() = dh1 * l.w1.transpose();
        gl.w1.noalias() += lc.b.transpose() * dh1;
        gl.b1.row(0) += dh1.colwise().sum();
        Mat dx_mid;
        layer_norm_backward(db_ln2, l.ln2_g, lc.ln2_xhat, lc.ln2_inv, dx_mid, gl.ln2_g,
                            gl.ln2_b);
        dx_mid += dx;  // residual

        // Attention block.
        Mat dattn = dx_mid;
        if (lc.drop_attn.size()) dattn = dattn.cwiseProduct(lc.drop_attn).eval();
        Mat dctx;
        dctx.noalias() = dattn * l.wo.transpose();
        gl.wo.noalias() += lc.ctx.transpose() * dattn;
        gl.bo.row(0) += dattn.colwise().sum();

        Mat dq = Mat::Zero(T, p.cfg.hidden_size);
        Mat dkm = Mat::Zero(T, p.cfg.hidden_size);
        Mat dv = Mat::Zero(T, p.cfg.hidden_size);
        for (int hh = 0; hh < nh; ++hh) {
            const auto qh = lc.q.middleCols(hh * dk, dk);
            const auto kh = lc.k.middleCols(hh * dk, dk);
            const auto vh = lc.v.middleCols(hh * dk, dk);
            const auto dctxh = dctx.middleCols(hh * dk, dk);
            const Mat& att = lc.att[hh];

            Mat datt;
            datt.noalias() = dctxh * vh.transpose();
            dv.middleCols(hh * dk, dk).noalias() += att.transpose() * dctxh;

            Mat ds(T, T);
            for (Eigen::Index i = 0; i < T; ++i) {
                const auto pr = att.row(i).head(i + 1).array();
                const auto dpr = datt.row(i).head(i + 1).array();
                const double dot = (pr * dpr).sum();
                ds.row(i).setZero();
                ds.row(i).head(i + 1) = (pr * (dpr - dot)).matrix();
            }
            dq.middleCols(hh * dk, dk).noalias() += (ds * kh) * scale;
            dkm.middleCols(hh * dk, dk).noalias() += (ds.transpose() * qh) * scale;
        }
        Mat da;
        da.noalias() = dq * l.wq.transpose();
        da.noalias() += dkm * l.wk.transpose();
        da.noalias() += dv * l.wv.transpose();
        gl.wq.noalias() += lc.a.transpose() * dq;
        gl.bq.row(0) += dq.colwise().sum();
        gl.wk.noalias() += lc.a.transpose() * dkm;
        gl.bk.row(0) += dkm.colwise().sum();
        gl.wv.noalias() += lc.a.transpose() * dv;
        gl.bv.row(0) += dv.colwise().sum();

        Mat dx_in;
        layer_norm_backward(da, l.ln1_g, lc.ln1_xhat, lc.ln1_inv, dx_in, gl.ln1_g,
                            gl.ln1_b);
        dx = dx_in + dx_mid;  // residual
    }

    Mat dx0 = dx;
    if (cache.drop_embed.size()) dx0 = dx0.cwiseProduct(cache.drop_embed).eval();
    for (Eigen::Index t = 0; t < T; ++t) {
        grads.e_word.row(seq.tokens[t]) += dx0.row(t);
        grads.e_abs.row(seq.abs[t]) += dx0.row(t);
        grads.e_vowel.row(seq.vowels[t]) += dx0.row(t);
        grads.e_intra.row(seq.intra[t]) += dx0.row(t);
        grads.e_sent.row(seq.sent[t]) += dx0.row(t);
    }
}

}  // namespace

Mat forward(const ModelParams& params, const FeatureSequence& seq) {
    Mat logits = forward_logits(params, seq, nullptr);
    for (Eigen::Index t = 0; t < logits.rows(); ++t) {
        Eigen::RowVectorXd row = logits.row(t);
        log_softmax_row(row);
        logits.row(t) = row.array().exp();
    }
    return logits;
}

SequenceNll sequence_nll(const ModelParams& params, const FeatureSequence& seq) {
    Mat logits = forward_logits(params, seq, nullptr);
    SequenceNll out;
    const auto T = static_cast<Eigen::Index>(seq.size());
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
        const int32_t target = seq.tokens[t + 1];
        if (target == TOK_PAD) continue;
        Eigen::RowVectorXd row = logits.row(t);
        log_softmax_row(row);
        out.nll_sum -= row(target);
        ++out.n_targets;
    }
    return out;
}

double perplexity(const ModelParams& params, const std::vector<FeatureSequence>& corpus) {
    if (corpus.empty()) throw data_error("perplexity: empty corpus");
    double nll = 0.0;
    long n = 0;
    for (const auto& seq : corpus) {
        const auto r = sequence_nll(params, seq);
        nll += r.nll_sum;
        n += r.n_targets;
    }
    if (n == 0) throw data_error("perplexity: no predicted tokens");
    return std::exp(nll / static_cast<double>(n));
}

std::vector<int32_t> argmax_predictions(const ModelParams& params,
                                        const FeatureSequence& seq) {
    Mat logits = forward_logits(params, seq, nullptr);
    std::vector<int32_t> out(seq.size());
    for (Eigen::Index t = 0; t < logits.rows(); ++t) {
        Eigen::Index best = 0;
        logits.row(t).maxCoeff(&best);
        out[t] = static_cast<int32_t>(best);
    }
    return out;
}

IncrementalScorer::IncrementalScorer(const ModelParams& params) : params_(&params) {
    const auto& cfg = params.cfg;
    k_cache_.assign(cfg.n_layers, Mat(cfg.max_abs_pos, cfg.hidden_size));
    v_cache_.assign(cfg.n_layers, Mat(cfg.max_abs_pos, cfg.hidden_size));
}

Eigen::RowVectorXd IncrementalScorer::append(int32_t token, int32_t vowel, int32_t intra,
                                             int32_t sent_idx) {
    const ModelParams& p = *params_;
    const auto& cfg = p.cfg;
    if (len_ >= cfg.max_abs_pos) throw runtime_error("scorer: sequence cap reached");
    if (token < 0 || token >= cfg.vocab_size || vowel < 0 || vowel >= cfg.n_vowels ||
        intra < 0 || intra >= cfg.max_intra_pos || sent_idx < 0 ||
        sent_idx >= cfg.max_sentences) {
        throw data_error("scorer: out-of-range feature index");
    }
    const int nh = cfg.n_heads;
    const int dk = cfg.head_dim();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    Eigen::RowVectorXd x = p.e_word.row(token) + p.e_abs.row(len_) +
                           p.e_vowel.row(vowel) + p.e_intra.row(intra) +
                           p.e_sent.row(sent_idx);
    for (size_t li = 0; li < p.layers.size(); ++li) {
        const auto& l = p.layers[li];
        Mat xm = x;
        const Mat a = layer_norm(xm, l.ln1_g, l.ln1_b, nullptr, nullptr);
        k_cache_[li].row(len_) = a * l.wk + l.bk;
        v_cache_[li].row(len_) = a * l.wv + l.bv;
        const Eigen::RowVectorXd q = a * l.wq + l.bq;

        Eigen::RowVectorXd ctx(cfg.hidden_size);
        for (int hh = 0; hh < nh; ++hh) {
            const auto kh = k_cache_[li].middleCols(hh * dk, dk).topRows(len_ + 1);
            const auto vh = v_cache_[li].middleCols(hh * dk, dk).topRows(len_ + 1);
            Eigen::RowVectorXd s = (q.middleCols(hh * dk, dk) * kh.transpose()) * scale;
            const double mx = s.maxCoeff();
            const RowArray e = (s.array() - mx).exp();
            const Eigen::RowVectorXd att = (e / e.sum()).matrix();
            ctx.middleCols(hh * dk, dk).noalias() = att * vh;
        }
        x += ctx * l.wo + l.bo;

        xm = x;
        const Mat b = layer_norm(xm, l.ln2_g, l.ln2_b, nullptr, nullptr);
        Eigen::RowVectorXd h1 = b * l.w1 + l.b1;
        const Eigen::RowVectorXd g =
            h1.unaryExpr([](double v) { return gelu(v); });
        x += g * l.w2 + l.b2;
    }
    Mat xm = x;
    const Mat y = layer_norm(xm, p.lnf_g, p.lnf_b, nullptr, nullptr);
    Eigen::RowVectorXd logits =
        cfg.tie_output ? (y.row(0) * p.e_word.transpose()).eval()
                       : (y.row(0) * p.w_out).eval();
    logits += p.b_out.row(0);
    log_softmax_row(logits);
    ++len_;
    return logits.array().exp().matrix();
}

double accumulate_gradients(const ModelParams& params, const FeatureSequence& seq,
                            double scale, ModelParams& grads, double dropout,
                            std::mt19937_64* rng) {
    ForwardCache cache;
    Mat logits = forward_logits(params, seq, &cache, dropout, rng);
    const auto T = static_cast<Eigen::Index>(seq.size());

    long n_targets = 0;
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
        if (seq.tokens[t + 1] != TOK_PAD) ++n_targets;
    }
    if (n_targets == 0) return 0.0;

    double nll = 0.0;
    Mat dlogits = Mat::Zero(T, params.cfg.vocab_size);
    const double w = scale / static_cast<double>(n_targets);
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
        const int32_t target = seq.tokens[t + 1];
        if (target == TOK_PAD) continue;
        Eigen::RowVectorXd row = logits.row(t);
        log_softmax_row(row);
        nll -= row(target);
        dlogits.row(t) = row.array().exp() * w;
        dlogits(t, target) -= w;
    }
    backward(params, seq, cache, dlogits, grads);
    return nll / static_cast<double>(n_targets);
}

// --- Training.

void TrainConfig::validate() const {
    auto req = [](bool ok, const std::string& what) {
        if (!ok) throw usage_error("train config: " + what);
    };
    req(lr > 0.0, "lr must be positive");
    req(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
        "betas must be in [0, 1)");
    req(eps > 0.0, "eps must be positive");
    req(batch_size >= 1, "batch_size must be >= 1");
    req(max_steps >= 0, "max_steps must be >= 0");
}

AdamOptimizer::AdamOptimizer(const ModelParams& params, double lr, double beta1,
                             double beta2, double eps)
    : lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      m_(ModelParams::zeros_like(params)),
      v_(ModelParams::zeros_like(params)) {}

void AdamOptimizer::step(ModelParams& params, const ModelParams& grads) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto ps = params.tensors();
    auto gs = grads.tensors();
    auto ms = m_.tensors();
    auto vs = v_.tensors();
    for (size_t i = 0; i < ps.size(); ++i) {
        Mat& p = *ps[i].second;
        const Mat& g = *gs[i].second;
        Mat& m = *ms[i].second;
        Mat& v = *vs[i].second;
        if (p.size() == 0) continue;
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        p.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    }
}

TrainReport train(ModelParams& params, const std::vector<FeatureSequence>& corpus,
                  const TrainConfig& tcfg, AdamOptimizer* optimizer) {
    tcfg.validate();
    if (corpus.empty()) throw data_error("train: empty corpus");
    for (const auto& seq : corpus) validate_sequence(params.cfg, seq);

    TrainReport report;
    report.phase = tcfg.phase;
    if (tcfg.max_steps == 0) return report;

    std::unique_ptr<AdamOptimizer> own;
    if (!optimizer) {
        own = std::make_unique<AdamOptimizer>(params, tcfg.lr, tcfg.beta1, tcfg.beta2,
                                              tcfg.eps);
        optimizer = own.get();
    }

    std::mt19937_64 rng(tcfg.seed);
    std::vector<size_t> order(corpus.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    size_t cursor = 0;

    ModelParams grads = ModelParams::zeros_like(params);
    const double inv_b = 1.0 / static_cast<double>(tcfg.batch_size);
    for (long step = 0; step < tcfg.max_steps; ++step) {
        for (auto& [name, t] : grads.tensors()) t->setZero();
        double loss = 0.0;
        for (int b = 0; b < tcfg.batch_size; ++b) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), rng);
                cursor = 0;
            }
            const auto& seq = corpus[order[cursor++]];
            loss += inv_b * accumulate_gradients(params, seq, inv_b, grads,
                                                 params.cfg.dropout, &rng);
        }
        if (!std::isfinite(loss)) {
            throw runtime_error("train: non-finite loss " + std::to_string(loss) +
                                " at step " + std::to_string(step));
        }
        optimizer->step(params, grads);
        report.losses.push_back(loss);
        ++report.steps;
    }
    return report;
}

// --- Checkpoints.

namespace {

constexpr const char* kMagic = "RAPGEN-CKPT";
constexpr int kFormatVersion = 1;

void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little) {
        throw runtime_error("checkpoint io requires a little-endian host");
    }
}

nlohmann::json config_to_json(const ModelConfig& c) {
    return {{"hidden_size", c.hidden_size},
            {"n_heads", c.n_heads},
            {"n_layers", c.n_layers},
            {"vocab_size", c.vocab_size},
            {"n_vowels", c.n_vowels},
            {"max_abs_pos", c.max_abs_pos},
            {"max_intra_pos", c.max_intra_pos},
            {"max_sentences", c.max_sentences},
            {"ffn_size", c.ffn_size},
            {"dropout", c.dropout},
            {"tie_output", c.tie_output}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.hidden_size = j.at("hidden_size").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.n_layers = j.at("n_layers").get<int>();
    c.vocab_size = j.at("vocab_size").get<int>();
    c.n_vowels = j.at("n_vowels").get<int>();
    c.max_abs_pos = j.at("max_abs_pos").get<int>();
    c.max_intra_pos = j.at("max_intra_pos").get<int>();
    c.max_sentences = j.at("max_sentences").get<int>();
    c.ffn_size = j.at("ffn_size").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.tie_output = j.at("tie_output").get<bool>();
    return c;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    require_little_endian();
    nlohmann::json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["dtype"] = "f64";
    manifest["config"] = config_to_json(ckpt.params.cfg);
    manifest["vocab_words"] = ckpt.vocab.words();
    manifest["vocab_vowels"] = ckpt.vocab.word_vowels();
    manifest["vowel_classes"] = ckpt.vowel_classes;
    auto tensors = ckpt.params.tensors();
    nlohmann::json tl = nlohmann::json::array();
    for (const auto& [name, t] : tensors) {
        tl.push_back({{"name", name}, {"rows", t->rows()}, {"cols", t->cols()}});
    }
    manifest["tensors"] = tl;

    const std::string mstr = manifest.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write checkpoint: " + path);
    out << kMagic << ' ' << kFormatVersion << '\n' << mstr.size() << '\n' << mstr << '\n';
    for (const auto& [name, t] : tensors) {
        out.write(reinterpret_cast<const char*>(t->data()),
                  static_cast<std::streamsize>(sizeof(double) * t->size()));
    }
    if (!out) throw data_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open checkpoint: " + path);
    std::string magic;
    int version = -1;
    in >> magic >> version;
    if (magic != kMagic) throw data_error(path + ": not a checkpoint file");
    if (version != kFormatVersion) {
        throw data_error(path + ": unsupported checkpoint version " +
                         std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");
    }
    size_t mlen = 0;
    in >> mlen;
    in.ignore(1);  // newline
    std::string mstr(mlen, '\0');
    in.read(mstr.data(), static_cast<std::streamsize>(mlen));
    in.ignore(1);
    if (!in) throw data_error(path + ": truncated manifest");

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(mstr);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path + ": bad manifest: " + e.what());
    }
    if (manifest.at("dtype").get<std::string>() != "f64") {
        throw data_error(path + ": unsupported tensor dtype");
    }

    Checkpoint ckpt;
    ckpt.params = allocate_params(config_from_json(manifest.at("config")));
    ckpt.vocab = Vocab::from_lists(
        manifest.at("vocab_words").get<std::vector<std::string>>(),
        manifest.at("vocab_vowels").get<std::vector<int32_t>>());
    ckpt.vowel_classes = manifest.at("vowel_classes").get<std::vector<std::string>>();
    if (ckpt.vocab.size() != ckpt.params.cfg.vocab_size) {
        throw data_error(path + ": vocab size does not match config");
    }

    auto tensors = ckpt.params.tensors();
    const auto& tl = manifest.at("tensors");
    if (tl.size() != tensors.size()) throw data_error(path + ": tensor list mismatch");
    for (size_t i = 0; i < tensors.size(); ++i) {
        const auto& [name, t] = tensors[i];
        if (tl[i].at("name").get<std::string>() != name ||
            tl[i].at("rows").get<Eigen::Index>() != t->rows() ||
            tl[i].at("cols").get<Eigen::Index>() != t->cols()) {
            throw data_error(path + ": tensor '" + name + "' shape mismatch");
        }
        in.read(reinterpret_cast<char*>(t->data()),
                static_cast<std::streamsize>(sizeof(double) * t->size()));
    }
    if (!in) throw data_error(path + ": truncated tensor data");
    return ckpt;
}

}  // namespace rapgen
