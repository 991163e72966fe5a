#include "sst/classifier.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "sst/rng.hpp"

namespace sst {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kProbClamp = 1e-12;

void check_same_shape(const Mat& a, int rows, int cols, const char* what) {
    if (a.rows != rows || a.cols != cols)
        throw std::runtime_error(std::string("shape mismatch in ") + what);
}

Mat uniform_mat(int rows, int cols, Rng& rng) {
    Mat m(rows, cols);
    const double a = std::sqrt(6.0 / (rows + cols));
    for (auto& x : m.v) x = rng.uniform(-a, a);
    return m;
}

// Row softmax in place.
void softmax_rows(Mat& m) {
    for (int i = 0; i < m.rows; ++i) {
        double* r = m.row(i);
        double mx = r[0];
        for (int j = 1; j < m.cols; ++j) mx = std::max(mx, r[j]);
        double sum = 0.0;
        for (int j = 0; j < m.cols; ++j) {
            r[j] = std::exp(r[j] - mx);
            sum += r[j];
        }
        for (int j = 0; j < m.cols; ++j) r[j] /= sum;
    }
}

// dlogits = p .* (dp - rowdot(dp, p)), the softmax Jacobian transpose action.
Mat softmax_backward(const Mat& probs, const Mat& dprobs) {
    Mat dlogits(probs.rows, probs.cols);
    for (int i = 0; i < probs.rows; ++i) {
        const double* p = probs.row(i);
        const double* dp = dprobs.row(i);
        double dot = 0.0;
        for (int j = 0; j < probs.cols; ++j) dot += dp[j] * p[j];
        double* dl = dlogits.row(i);
        for (int j = 0; j < probs.cols; ++j) dl[j] = p[j] * (dp[j] - dot);
    }
    return dlogits;
}

struct LnCache {
    Mat input;
    Mat xhat;
    std::vector<double> inv_std;
};

Mat layer_norm(const Mat& x, const std::vector<double>& gain, const std::vector<double>& bias,
               LnCache& cache) {
    Mat y(x.rows, x.cols);
    cache.input = x;
    cache.xhat = Mat(x.rows, x.cols);
    cache.inv_std.assign(x.rows, 0.0);
    for (int i = 0; i < x.rows; ++i) {
        const double* r = x.row(i);
        double mean = 0.0;
        for (int j = 0; j < x.cols; ++j) mean += r[j];
        mean /= x.cols;
        double var = 0.0;
        for (int j = 0; j < x.cols; ++j) {
            const double d = r[j] - mean;
            var += d * d;
        }
        var /= x.cols;
        const double inv = 1.0 / std::sqrt(var + kLnEps);
        cache.inv_std[i] = inv;
        for (int j = 0; j < x.cols; ++j) {
            const double xh = (r[j] - mean) * inv;
            cache.xhat.at(i, j) = xh;
            y.at(i, j) = gain[j] * xh + bias[j];
        }
    }
    return y;
}

Mat layer_norm_backward(const Mat& dy, const std::vector<double>& gain, const LnCache& cache,
                        std::vector<double>& dgain, std::vector<double>& dbias) {
    const int rows = dy.rows, cols = dy.cols;
    Mat dx(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const double* dyr = dy.row(i);
        const double* xh = cache.xhat.row(i);
        double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
        for (int j = 0; j < cols; ++j) {
            const double dxhat = dyr[j] * gain[j];
            sum_dxhat += dxhat;
            sum_dxhat_xhat += dxhat * xh[j];
            dgain[j] += dyr[j] * xh[j];
            dbias[j] += dyr[j];
        }
        const double inv = cache.inv_std[i];
        const double m1 = sum_dxhat / cols;
        const double m2 = sum_dxhat_xhat / cols;
        for (int j = 0; j < cols; ++j) {
            const double dxhat = dyr[j] * gain[j];
            dx.at(i, j) = inv * (dxhat - m1 - xh[j] * m2);
        }
    }
    return dx;
}

double gelu(double u) { return 0.5 * u * (1.0 + std::erf(u / std::sqrt(2.0))); }

double gelu_grad(double u) {
    return 0.5 * (1.0 + std::erf(u / std::sqrt(2.0))) +
           u * std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
}

struct BlockCache {
    LnCache ln1, ln2;
    Mat q, k, v;            // tokens x dim
    std::vector<Mat> attn;  // per head, tokens x tokens, post-softmax
    Mat concat;             // attention output before wo
    Mat x_mid;              // input to the MLP half (after first residual)
    Mat mlp_pre;            // tokens x 4*dim, pre-activation
    Mat mlp_act;            // tokens x 4*dim, post-gelu
};

struct ForwardCache {
    std::vector<BlockCache> block;
    Mat final_x;  // tokens x dim, input to the head
    Mat logits;
    Mat probs;
};

Mat head_cols(const Mat& m, int head, int head_dim) {
    Mat out(m.rows, head_dim);
    for (int i = 0; i < m.rows; ++i)
        std::memcpy(out.row(i), m.row(i) + head * head_dim,
                    sizeof(double) * static_cast<size_t>(head_dim));
    return out;
}

void add_head_cols(Mat& dst, const Mat& src, int head, int head_dim) {
    for (int i = 0; i < dst.rows; ++i) {
        double* d = dst.row(i) + head * head_dim;
        const double* s = src.row(i);
        for (int j = 0; j < head_dim; ++j) d[j] += s[j];
    }
}

Mat forward_impl(const Mat& tokens, const ClassifierParams& params, ForwardCache& cache) {
    params.validate();
    if (tokens.cols != params.dim)
        throw std::runtime_error("token dim " + std::to_string(tokens.cols) +
                                 " != classifier dim " + std::to_string(params.dim));
    const int head_dim = params.dim / params.heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    Mat x = tokens;
    cache.block.resize(params.blocks);
    for (int b = 0; b < params.blocks; ++b) {
        const BlockParams& bp = params.block[b];
        BlockCache& bc = cache.block[b];

        const Mat h1 = layer_norm(x, bp.ln1_gain, bp.ln1_bias, bc.ln1);
        bc.q = matmul(h1, bp.wq);
        bc.k = matmul(h1, bp.wk);
        bc.v = matmul(h1, bp.wv);

        bc.attn.resize(params.heads);
        bc.concat = Mat(x.rows, params.dim);
        for (int h = 0; h < params.heads; ++h) {
            const Mat qh = head_cols(bc.q, h, head_dim);
            const Mat kh = head_cols(bc.k, h, head_dim);
            const Mat vh = head_cols(bc.v, h, head_dim);
            Mat scores = matmul_nt(qh, kh);
            for (auto& s : scores.v) s *= scale;
            softmax_rows(scores);
            bc.attn[h] = scores;
            const Mat oh = matmul(scores, vh);
            add_head_cols(bc.concat, oh, h, head_dim);
        }
        const Mat attn_out = matmul(bc.concat, bp.wo);
        for (size_t i = 0; i < x.v.size(); ++i) x.v[i] += attn_out.v[i];
        bc.x_mid = x;

        const Mat h2 = layer_norm(x, bp.ln2_gain, bp.ln2_bias, bc.ln2);
        bc.mlp_pre = matmul(h2, bp.w1);
        bc.mlp_act = bc.mlp_pre;
        for (auto& u : bc.mlp_act.v) u = gelu(u);
        const Mat mlp_out = matmul(bc.mlp_act, bp.w2);
        for (size_t i = 0; i < x.v.size(); ++i) x.v[i] += mlp_out.v[i];
    }

    cache.final_x = x;
    cache.logits = matmul(x, params.head_w);
    for (int i = 0; i < cache.logits.rows; ++i)
        for (int c = 0; c < cache.logits.cols; ++c) cache.logits.at(i, c) += params.head_b[c];
    cache.probs = cache.logits;
    softmax_rows(cache.probs);
    return cache.probs;
}

}  // namespace

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::runtime_error("matmul inner dim mismatch");
    Mat out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* ar = a.row(i);
        double* orow = out.row(i);
        for (int k = 0; k < a.cols; ++k) {
            const double av = ar[k];
            if (av == 0.0) continue;
            const double* br = b.row(k);
            for (int j = 0; j < b.cols; ++j) orow[j] += av * br[j];
        }
    }
    return out;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
    if (a.rows != b.rows) throw std::runtime_error("matmul_tn dim mismatch");
    Mat out(a.cols, b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* ar = a.row(k);
        const double* br = b.row(k);
        for (int i = 0; i < a.cols; ++i) {
            const double av = ar[i];
            if (av == 0.0) continue;
            double* orow = out.row(i);
            for (int j = 0; j < b.cols; ++j) orow[j] += av * br[j];
        }
    }
    return out;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
    if (a.cols != b.cols) throw std::runtime_error("matmul_nt dim mismatch");
    Mat out(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* ar = a.row(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* br = b.row(j);
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += ar[k] * br[k];
            out.at(i, j) = acc;
        }
    }
    return out;
}

void ClassifierParams::validate() const {
    if (dim < 1 || heads < 1 || blocks < 1 || classes < 1)
        throw std::runtime_error("classifier dims must be >= 1");
    if (dim % heads != 0) throw std::runtime_error("heads must divide dim");
    if (block.size() != static_cast<size_t>(blocks))
        throw std::runtime_error("block parameter count mismatch");
}

void ClassifierParams::for_each_tensor(const std::function<void(std::vector<double>&)>& fn) {
    for (auto& b : block) {
        fn(b.ln1_gain);
        fn(b.ln1_bias);
        fn(b.wq.v);
        fn(b.wk.v);
        fn(b.wv.v);
        fn(b.wo.v);
        fn(b.ln2_gain);
        fn(b.ln2_bias);
        fn(b.w1.v);
        fn(b.w2.v);
    }
    fn(head_w.v);
    fn(head_b);
}

void ClassifierParams::for_each_tensor(
    const std::function<void(const std::vector<double>&)>& fn) const {
    const_cast<ClassifierParams*>(this)->for_each_tensor(
        [&fn](std::vector<double>& t) { fn(t); });
}

size_t ClassifierParams::parameter_count() const {
    size_t n = 0;
    for_each_tensor([&n](const std::vector<double>& t) { n += t.size(); });
    return n;
}

ClassifierParams init_classifier(int dim, int heads, int blocks, int classes, uint64_t seed) {
    ClassifierParams p;
    p.dim = dim;
    p.heads = heads;
    p.blocks = blocks;
    p.classes = classes;
    p.seed = seed;
    Rng rng(seed);
    p.block.resize(blocks);
    for (auto& b : p.block) {
        b.ln1_gain.assign(dim, 1.0);
        b.ln1_bias.assign(dim, 0.0);
        b.wq = uniform_mat(dim, dim, rng);
        b.wk = uniform_mat(dim, dim, rng);
        b.wv = uniform_mat(dim, dim, rng);
        b.wo = uniform_mat(dim, dim, rng);
        b.ln2_gain.assign(dim, 1.0);
        b.ln2_bias.assign(dim, 0.0);
        b.w1 = uniform_mat(dim, 4 * dim, rng);
        b.w2 = uniform_mat(4 * dim, dim, rng);
    }
    p.head_w = uniform_mat(dim, classes, rng);
    p.head_b.assign(classes, 0.0);
    p.validate();
    return p;
}

ClassifierParams zeros_like(const ClassifierParams& params) {
    ClassifierParams g = params;
    g.for_each_tensor([](std::vector<double>& t) { std::fill(t.begin(), t.end(), 0.0); });
    return g;
}

Mat token_matrix(const SupertokenSet& tokens) {
    Mat m(tokens.count, tokens.dim);
    m.v = tokens.features;
    return m;
}

Mat forward(const Mat& tokens, const ClassifierParams& params) {
    ForwardCache cache;
    return forward_impl(tokens, params, cache);
}

std::vector<Mat> attention_maps(const Mat& tokens, const ClassifierParams& params) {
    ForwardCache cache;
    forward_impl(tokens, params, cache);
    std::vector<Mat> maps;
    maps.reserve(static_cast<size_t>(params.blocks) * params.heads);
    for (const auto& bc : cache.block)
        for (const auto& a : bc.attn) maps.push_back(a);
    return maps;
}

double soft_ce_loss(const Mat& probs, const SoftLabelMatrix& labels) {
    if (probs.rows != labels.tokens || probs.cols != labels.classes)
        throw std::runtime_error("loss shape mismatch");
    int valid = 0;
    double loss = 0.0;
    for (int m = 0; m < labels.tokens; ++m) {
        if (!labels.valid[m]) continue;
        ++valid;
        const double* l = labels.row(m);
        const double* p = probs.row(m);
        for (int c = 0; c < labels.classes; ++c)
            if (l[c] != 0.0) loss -= l[c] * std::log(std::max(p[c], kProbClamp));
    }
    if (valid == 0) throw std::runtime_error("no valid tokens for loss");
    return loss / valid;
}

double backward(const Mat& tokens, const ClassifierParams& params, const SoftLabelMatrix& labels,
                ClassifierParams& grads) {
    ForwardCache cache;
    const Mat probs = forward_impl(tokens, params, cache);
    const double loss = soft_ce_loss(probs, labels);

    int valid = 0;
    for (int m = 0; m < labels.tokens; ++m)
        if (labels.valid[m]) ++valid;

    // dL/dprobs, consistent with the clamp inside the loss
    Mat dprobs(probs.rows, probs.cols);
    for (int m = 0; m < labels.tokens; ++m) {
        if (!labels.valid[m]) continue;
        const double* l = labels.row(m);
        const double* p = probs.row(m);
        for (int c = 0; c < labels.classes; ++c) {
            if (l[c] == 0.0 || p[c] <= kProbClamp) continue;
            dprobs.at(m, c) = -l[c] / (p[c] * valid);
        }
    }

    grads = zeros_like(params);
    const int head_dim = params.dim / params.heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

    Mat dlogits = softmax_backward(cache.probs, dprobs);
    grads.head_w = matmul_tn(cache.final_x, dlogits);
    for (int m = 0; m < dlogits.rows; ++m)
        for (int c = 0; c < dlogits.cols; ++c) grads.head_b[c] += dlogits.at(m, c);
    Mat dx = matmul_nt(dlogits, params.head_w);

    for (int b = params.blocks - 1; b >= 0; --b) {
        const BlockParams& bp = params.block[b];
        BlockParams& gp = grads.block[b];
        const BlockCache& bc = cache.block[b];

        // MLP half: x3 = x_mid + gelu(LN2(x_mid) w1) w2
        grads.block[b].w2 = matmul_tn(bc.mlp_act, dx);
        Mat dact = matmul_nt(dx, bp.w2);
        for (size_t i = 0; i < dact.v.size(); ++i) dact.v[i] *= gelu_grad(bc.mlp_pre.v[i]);
        {
            // w1 gradient needs the LN2 output, reconstructed from xhat
            Mat h2(bc.ln2.xhat.rows, bc.ln2.xhat.cols);
            for (int i = 0; i < h2.rows; ++i)
                for (int j = 0; j < h2.cols; ++j)
                    h2.at(i, j) = bp.ln2_gain[j] * bc.ln2.xhat.at(i, j) + bp.ln2_bias[j];
            gp.w1 = matmul_tn(h2, dact);
        }
        const Mat dh2 = matmul_nt(dact, bp.w1);
        const Mat dx_mid_ln = layer_norm_backward(dh2, bp.ln2_gain, bc.ln2, gp.ln2_gain,
                                                  gp.ln2_bias);
        Mat dx_mid = dx;  // residual branch
        for (size_t i = 0; i < dx_mid.v.size(); ++i) dx_mid.v[i] += dx_mid_ln.v[i];

        // attention half: x_mid = x + (multi-head attn on LN1(x)) wo
        gp.wo = matmul_tn(bc.concat, dx_mid);
        const Mat dconcat = matmul_nt(dx_mid, bp.wo);

        Mat dq(dx.rows, params.dim), dk(dx.rows, params.dim), dv(dx.rows, params.dim);
        for (int h = 0; h < params.heads; ++h) {
            const Mat qh = head_cols(bc.q, h, head_dim);
            const Mat kh = head_cols(bc.k, h, head_dim);
            const Mat vh = head_cols(bc.v, h, head_dim);
            const Mat doh = head_cols(dconcat, h, head_dim);
            const Mat& ah = bc.attn[h];

            const Mat dattn = matmul_nt(doh, vh);
            const Mat dvh = matmul_tn(ah, doh);
            Mat dscores = softmax_backward(ah, dattn);
            for (auto& s : dscores.v) s *= scale;
            const Mat dqh = matmul(dscores, kh);
            const Mat dkh = matmul_tn(dscores, qh);
            add_head_cols(dq, dqh, h, head_dim);
            add_head_cols(dk, dkh, h, head_dim);
            add_head_cols(dv, dvh, h, head_dim);
        }

        Mat h1(bc.ln1.xhat.rows, bc.ln1.xhat.cols);
        for (int i = 0; i < h1.rows; ++i)
            for (int j = 0; j < h1.cols; ++j)
                h1.at(i, j) = bp.ln1_gain[j] * bc.ln1.xhat.at(i, j) + bp.ln1_bias[j];
        gp.wq = matmul_tn(h1, dq);
        gp.wk = matmul_tn(h1, dk);
        gp.wv = matmul_tn(h1, dv);

        Mat dh1 = matmul_nt(dq, bp.wq);
        {
            const Mat t1 = matmul_nt(dk, bp.wk);
            const Mat t2 = matmul_nt(dv, bp.wv);
            for (size_t i = 0; i < dh1.v.size(); ++i) dh1.v[i] += t1.v[i] + t2.v[i];
        }
        const Mat dx_ln = layer_norm_backward(dh1, bp.ln1_gain, bc.ln1, gp.ln1_gain, gp.ln1_bias);
        dx = dx_mid;
        for (size_t i = 0; i < dx.v.size(); ++i) dx.v[i] += dx_ln.v[i];
    }
    return loss;
}

GradCheckReport grad_check(const ClassifierParams& params, const Mat& tokens,
                           const SoftLabelMatrix& labels, int coords, double h, uint64_t seed) {
    if (coords < 1) throw std::runtime_error("grad_check needs coords >= 1");
    ClassifierParams grads;
    backward(tokens, params, labels, grads);

    // flatten views
    std::vector<std::vector<double>*> tensors;
    ClassifierParams work = params;
    work.for_each_tensor([&tensors](std::vector<double>& t) { tensors.push_back(&t); });
    std::vector<const std::vector<double>*> gtensors;
    grads.for_each_tensor(
        [&gtensors](const std::vector<double>& t) { gtensors.push_back(&t); });

    const size_t total = params.parameter_count();
    Rng rng(seed);
    GradCheckReport report;
    report.coords = coords;
    for (int n = 0; n < coords; ++n) {
        size_t flat = rng.next_below(total);
        size_t ti = 0;
        while (flat >= tensors[ti]->size()) {
            flat -= tensors[ti]->size();
            ++ti;
        }
        double& coord = (*tensors[ti])[flat];
        const double saved = coord;
        coord = saved + h;
        const double fp = soft_ce_loss(forward(tokens, work), labels);
        coord = saved - h;
        const double fm = soft_ce_loss(forward(tokens, work), labels);
        coord = saved;
        const double numeric = (fp - fm) / (2.0 * h);
        const double analytic = (*gtensors[ti])[flat];
        const double abs_err = std::abs(analytic - numeric);
        const double rel_err = abs_err / std::max(std::abs(analytic) + std::abs(numeric), 1e-8);
        report.max_abs_err = std::max(report.max_abs_err, abs_err);
        report.max_rel_err = std::max(report.max_rel_err, rel_err);
    }
    return report;
}

double cosine_lr(const TrainConfig& cfg, int epoch, int epochs_total) {
    const double phase = M_PI * static_cast<double>(epoch) / epochs_total;
    return cfg.lr_floor + 0.5 * (cfg.lr - cfg.lr_floor) * (1.0 + std::cos(phase));
}

ClassifierParams train(const std::vector<TrainScene>& scenes, const TrainConfig& cfg,
                       int dim, int heads, int blocks, int classes,
                       std::vector<EpochLog>* log) {
    if (scenes.empty()) throw std::runtime_error("train needs at least one scene");
    if (cfg.epochs < 1 || cfg.lr <= 0.0 || cfg.batch < 1)
        throw std::runtime_error("bad training config");

    ClassifierParams params = init_classifier(dim, heads, blocks, classes, cfg.seed);

    // Adam state, one slot per parameter
    std::vector<double> m(params.parameter_count(), 0.0);
    std::vector<double> v(params.parameter_count(), 0.0);
    long long step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = cosine_lr(cfg, epoch, cfg.epochs);
        double epoch_loss = 0.0;
        for (size_t s0 = 0; s0 < scenes.size(); s0 += cfg.batch) {
            const size_t s1 = std::min(scenes.size(), s0 + cfg.batch);
            ClassifierParams batch_grads = zeros_like(params);
            double batch_loss = 0.0;
            for (size_t s = s0; s < s1; ++s) {
                ClassifierParams g;
                batch_loss += backward(scenes[s].tokens, params, scenes[s].labels, g);
                std::vector<std::vector<double>*> acc;
                batch_grads.for_each_tensor(
                    [&acc](std::vector<double>& t) { acc.push_back(&t); });
                size_t ti = 0;
                g.for_each_tensor([&acc, &ti](std::vector<double>& t) {
                    for (size_t i = 0; i < t.size(); ++i) (*acc[ti])[i] += t[i];
                    ++ti;
                });
            }
            const double inv_batch = 1.0 / static_cast<double>(s1 - s0);
            batch_loss *= inv_batch;
            epoch_loss += batch_loss * (s1 - s0);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("training diverged at epoch " + std::to_string(epoch));

            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            size_t offset = 0;
            std::vector<std::vector<double>*> ptensors;
            params.for_each_tensor(
                [&ptensors](std::vector<double>& t) { ptensors.push_back(&t); });
            size_t ti = 0;
            batch_grads.for_each_tensor([&](std::vector<double>& g) {
                std::vector<double>& p = *ptensors[ti];
                for (size_t i = 0; i < g.size(); ++i) {
                    const double grad = g[i] * inv_batch;
                    m[offset + i] = cfg.beta1 * m[offset + i] + (1.0 - cfg.beta1) * grad;
                    v[offset + i] = cfg.beta2 * v[offset + i] + (1.0 - cfg.beta2) * grad * grad;
                    const double mhat = m[offset + i] / bc1;
                    const double vhat = v[offset + i] / bc2;
                    p[i] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
                }
                offset += g.size();
                ++ti;
            });
        }
        epoch_loss /= static_cast<double>(scenes.size());
        if (log) log->push_back(EpochLog{epoch, lr, epoch_loss});
    }
    return params;
}

void save_checkpoint(const ClassifierParams& params, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
    out << "dim = " << params.dim << "\n"
        << "heads = " << params.heads << "\n"
        << "blocks = " << params.blocks << "\n"
        << "classes = " << params.classes << "\n"
        << "seed = " << params.seed << "\n"
        << "end-header\n";
    params.for_each_tensor([&out](const std::vector<double>& t) {
        std::vector<float> f(t.begin(), t.end());
        out.write(reinterpret_cast<const char*>(f.data()),
                  static_cast<std::streamsize>(f.size() * sizeof(float)));
    });
    if (!out) throw std::runtime_error("checkpoint write failed: " + path.string());
}

ClassifierParams load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
    int dim = 0, heads = 0, blocks = 0, classes = 0;
    uint64_t seed = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line == "end-header") break;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("garbled checkpoint header: " + line);
        const std::string key = line.substr(0, eq - 1);
        const std::string value = line.substr(eq + 2);
        if (key == "dim") dim = std::stoi(value);
        else if (key == "heads") heads = std::stoi(value);
        else if (key == "blocks") blocks = std::stoi(value);
        else if (key == "classes") classes = std::stoi(value);
        else if (key == "seed") seed = std::stoull(value);
        else throw std::runtime_error("unknown checkpoint key: " + key);
    }
    ClassifierParams params = init_classifier(dim, heads, blocks, classes, seed);
    params.for_each_tensor([&in, &path](std::vector<double>& t) {
        std::vector<float> f(t.size());
        in.read(reinterpret_cast<char*>(f.data()),
                static_cast<std::streamsize>(f.size() * sizeof(float)));
        if (!in) throw std::runtime_error("truncated checkpoint: " + path.string());
        for (size_t i = 0; i < t.size(); ++i) t[i] = f[i];
    });
    return params;
}

}  // namespace sst
