#include "sweetdeep/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "sweetdeep/kernels.hpp"

namespace sweetdeep::model {

namespace {
constexpr double kBnEps = 1e-5;
constexpr double kBnMomentum = 0.1;
}

void ModelConfig::validate() const {
    if (layer_widths.size() < 3)
        throw ParamError("ModelConfig: need at least one hidden layer");
    for (int w : layer_widths)
        if (w < 1) throw ParamError("ModelConfig: layer widths must be >= 1");
    if (layer_widths.back() != 2) throw ParamError("ModelConfig: output width must be 2");
    if (dropout_p < 0.0 || dropout_p >= 1.0)
        throw ParamError("ModelConfig: dropout_p must lie in [0, 1)");
    if (batch_size < 1) throw ParamError("ModelConfig: batch_size must be >= 1");
    if (epochs < 1) throw ParamError("ModelConfig: epochs must be >= 1");
    if (!(adam.lr > 0.0)) throw ParamError("ModelConfig: learning rate must be > 0");
}

long count_params(const ModelConfig& config) {
    const auto& w = config.layer_widths;
    if (w.size() < 2) throw ParamError("count_params: need input and output widths");
    long total = 0;
    for (std::size_t i = 1; i < w.size(); i++) {
        long in = w[i - 1], out = w[i];
        total += in * out + out;
        bool hidden = i + 1 < w.size();
        if (hidden && config.batchnorm) total += 2 * out;
    }
    return total;
}

ModelParams init_params(const ModelConfig& config) {
    config.validate();
    ModelParams p;
    p.config = config;
    Rng rng = Rng(config.seed).fork("init");

    auto init_linear = [&](Matrix& w, std::vector<double>& b, int in, int out, int layer) {
        auto lr = rng.fork("layer-" + std::to_string(layer));
        double limit = std::sqrt(6.0 / double(in));
        w = Matrix(out, in);
        for (double& v : w.a) v = lr.uniform(-limit, limit);
        b.assign(std::size_t(out), 0.0);
    };

    const auto& widths = config.layer_widths;
    for (int l = 0; l < config.n_hidden(); l++) {
        LayerParams layer;
        init_linear(layer.w, layer.b, widths[std::size_t(l)], widths[std::size_t(l) + 1], l);
        if (config.batchnorm) {
            std::size_t out = std::size_t(widths[std::size_t(l) + 1]);
            layer.gamma.assign(out, 1.0);
            layer.beta.assign(out, 0.0);
            layer.run_mean.assign(out, 0.0);
            layer.run_var.assign(out, 1.0);
        }
        p.hidden.push_back(std::move(layer));
    }
    init_linear(p.w_out, p.b_out, widths[widths.size() - 2], widths.back(), config.n_hidden());
    return p;
}

// ── Forward / backward core ──────────────────────────────

namespace {

void softmax_rows(Matrix& logits) {
    for (int i = 0; i < logits.rows; i++) {
        auto row = logits.row(i);
        double m = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (double& v : row) {
            v = std::exp(v - m);
            sum += v;
        }
        for (double& v : row) v /= sum;
    }
}

struct LayerCache {
    Matrix input;  // activations entering the layer
    Matrix z;      // pre-BN
    Matrix xhat;
    std::vector<double> mu, var;
    Matrix y;     // pre-ReLU
    Matrix mask;  // dropout scaling (0 or 1/(1-p)); empty when unused
    Matrix act;   // layer output
};

// One train-mode pass. Fills caches; optionally applies dropout, updates
// running statistics, computes gradients. Returns mean cross-entropy.
double forward_backward(ModelParams& params, const Matrix& x, const std::vector<int>& y,
                        bool use_dropout, Rng* dropout_rng, bool update_running,
                        GradBuffer* grads, long* correct) {
    const int b_n = x.rows;
    const double drop_p = params.config.dropout_p;
    std::vector<LayerCache> caches(params.hidden.size());

    const Matrix* cur = &x;
    for (std::size_t l = 0; l < params.hidden.size(); l++) {
        LayerParams& lp = params.hidden[l];
        LayerCache& c = caches[l];
        c.input = *cur;
        const int out = lp.w.rows;

        c.z = Matrix(b_n, out);
        kernels::linear(c.input, lp.w, lp.b, c.z);

        if (lp.has_bn()) {
            c.mu.assign(std::size_t(out), 0.0);
            c.var.assign(std::size_t(out), 0.0);
            for (int o = 0; o < out; o++) {
                double s = 0.0;
                for (int i = 0; i < b_n; i++) s += c.z(i, o);
                c.mu[std::size_t(o)] = s / double(b_n);
                double v = 0.0;
                for (int i = 0; i < b_n; i++) {
                    double d = c.z(i, o) - c.mu[std::size_t(o)];
                    v += d * d;
                }
                c.var[std::size_t(o)] = v / double(b_n);  // biased, used for normalization
            }
            if (update_running) {
                for (int o = 0; o < out; o++) {
                    double unbiased = b_n > 1
                                          ? c.var[std::size_t(o)] * double(b_n) / double(b_n - 1)
                                          : c.var[std::size_t(o)];
                    lp.run_mean[std::size_t(o)] = (1.0 - kBnMomentum) * lp.run_mean[std::size_t(o)] +
                                                  kBnMomentum * c.mu[std::size_t(o)];
                    lp.run_var[std::size_t(o)] =
                        (1.0 - kBnMomentum) * lp.run_var[std::size_t(o)] + kBnMomentum * unbiased;
                }
            }
            c.xhat = Matrix(b_n, out);
            c.y = Matrix(b_n, out);
            for (int i = 0; i < b_n; i++)
                for (int o = 0; o < out; o++) {
                    double istd = 1.0 / std::sqrt(c.var[std::size_t(o)] + kBnEps);
                    double xh = (c.z(i, o) - c.mu[std::size_t(o)]) * istd;
                    c.xhat(i, o) = xh;
                    c.y(i, o) = lp.gamma[std::size_t(o)] * xh + lp.beta[std::size_t(o)];
                }
        } else {
            c.y = c.z;
        }

        c.act = Matrix(b_n, out);
        for (int i = 0; i < b_n; i++)
            for (int o = 0; o < out; o++) c.act(i, o) = std::max(0.0, c.y(i, o));

        if (use_dropout && drop_p > 0.0) {
            c.mask = Matrix(b_n, out);
            double scale = 1.0 / (1.0 - drop_p);
            for (int i = 0; i < b_n; i++)
                for (int o = 0; o < out; o++) {
                    double keep = dropout_rng->uniform() >= drop_p ? scale : 0.0;
                    c.mask(i, o) = keep;
                    c.act(i, o) *= keep;
                }
        }
        cur = &c.act;
    }

    Matrix logits(b_n, params.w_out.rows);
    kernels::linear(*cur, params.w_out, params.b_out, logits);

    // loss via log-sum-exp; probabilities reused for the backward pass
    double loss = 0.0;
    Matrix probs = logits;
    softmax_rows(probs);
    for (int i = 0; i < b_n; i++) {
        auto row = logits.row(i);
        double m = *std::max_element(row.begin(), row.end());
        double lse = 0.0;
        for (double v : row) lse += std::exp(v - m);
        loss += m + std::log(lse) - row[std::size_t(y[std::size_t(i)])];
        if (correct) {
            int pred = probs(i, 1) >= probs(i, 0) ? 1 : 0;
            if (pred == y[std::size_t(i)]) (*correct)++;
        }
    }
    loss /= double(b_n);
    if (!grads) return loss;

    // d loss / d logits
    Matrix dlogits = probs;
    for (int i = 0; i < b_n; i++) {
        dlogits(i, y[std::size_t(i)]) -= 1.0;
        for (int c = 0; c < dlogits.cols; c++) dlogits(i, c) /= double(b_n);
    }

    const std::size_t n_hidden = params.hidden.size();
    grads->w[n_hidden] = Matrix(params.w_out.rows, params.w_out.cols);
    kernels::matmul_at(dlogits, *cur, grads->w[n_hidden]);
    grads->b[n_hidden].assign(std::size_t(params.w_out.rows), 0.0);
    for (int i = 0; i < b_n; i++)
        for (int c = 0; c < dlogits.cols; c++) grads->b[n_hidden][std::size_t(c)] += dlogits(i, c);

    Matrix dact(b_n, params.w_out.cols);
    kernels::matmul(dlogits, params.w_out, dact);

    for (int l = int(n_hidden) - 1; l >= 0; l--) {
        LayerParams& lp = params.hidden[std::size_t(l)];
        LayerCache& c = caches[std::size_t(l)];
        const int out = lp.w.rows;

        if (c.mask.rows > 0)
            for (int i = 0; i < b_n; i++)
                for (int o = 0; o < out; o++) dact(i, o) *= c.mask(i, o);

        Matrix dy(b_n, out);
        for (int i = 0; i < b_n; i++)
            for (int o = 0; o < out; o++) dy(i, o) = c.y(i, o) > 0.0 ? dact(i, o) : 0.0;

        Matrix dz(b_n, out);
        if (lp.has_bn()) {
            grads->gamma[std::size_t(l)].assign(std::size_t(out), 0.0);
            grads->beta[std::size_t(l)].assign(std::size_t(out), 0.0);
            for (int o = 0; o < out; o++) {
                double istd = 1.0 / std::sqrt(c.var[std::size_t(o)] + kBnEps);
                double dgamma = 0.0, dbeta = 0.0, dxhat_sum = 0.0, dxhat_dot = 0.0;
                for (int i = 0; i < b_n; i++) {
                    double g = dy(i, o);
                    dgamma += g * c.xhat(i, o);
                    dbeta += g;
                    double dxh = g * lp.gamma[std::size_t(o)];
                    dxhat_sum += dxh;
                    dxhat_dot += dxh * c.xhat(i, o);
                }
                grads->gamma[std::size_t(l)][std::size_t(o)] = dgamma;
                grads->beta[std::size_t(l)][std::size_t(o)] = dbeta;
                for (int i = 0; i < b_n; i++) {
                    double dxh = dy(i, o) * lp.gamma[std::size_t(o)];
                    dz(i, o) = istd / double(b_n) *
                               (double(b_n) * dxh - dxhat_sum - c.xhat(i, o) * dxhat_dot);
                }
            }
        } else {
            dz = dy;
        }

        grads->w[std::size_t(l)] = Matrix(lp.w.rows, lp.w.cols);
        kernels::matmul_at(dz, c.input, grads->w[std::size_t(l)]);
        grads->b[std::size_t(l)].assign(std::size_t(out), 0.0);
        for (int i = 0; i < b_n; i++)
            for (int o = 0; o < out; o++) grads->b[std::size_t(l)][std::size_t(o)] += dz(i, o);

        if (l > 0) {
            Matrix dinput(b_n, lp.w.cols);
            kernels::matmul(dz, lp.w, dinput);
            dact = std::move(dinput);
        }
    }
    return loss;
}

GradBuffer make_grad_buffer(const ModelParams& params) {
    GradBuffer g;
    g.w.resize(params.hidden.size() + 1);
    g.b.resize(params.hidden.size() + 1);
    g.gamma.resize(params.hidden.size());
    g.beta.resize(params.hidden.size());
    return g;
}

void check_input(const ModelParams& params, const Matrix& x) {
    if (x.cols != params.config.input_width())
        throw ParamError("model: input width " + std::to_string(x.cols) + " does not match config " +
                         std::to_string(params.config.input_width()));
}

}  // namespace

// ── Inference entry points ───────────────────────────────

Prediction forward(const ModelParams& params, std::span<const double> x, Mode mode, Rng* rng) {
    if (int(x.size()) != params.config.input_width())
        throw ParamError("forward: feature vector width mismatch");
    if (mode == Mode::eval) {
        Matrix xm(1, int(x.size()));
        std::copy(x.begin(), x.end(), xm.a.begin());
        Matrix probs = forward_eval_batch(params, xm);
        return {probs(0, 0), probs(0, 1)};
    }

    // train mode, batch of one: BN batch statistics degenerate to mu = z,
    // var = 0; dropout applies when enabled and an RNG is supplied
    std::vector<double> cur(x.begin(), x.end());
    const double drop_p = params.config.dropout ? params.config.dropout_p : 0.0;
    for (const auto& lp : params.hidden) {
        std::vector<double> z(static_cast<std::size_t>(lp.w.rows));
        for (int o = 0; o < lp.w.rows; o++) {
            double s = lp.b[std::size_t(o)];
            for (int k = 0; k < lp.w.cols; k++) s += lp.w(o, k) * cur[std::size_t(k)];
            z[std::size_t(o)] = s;
        }
        if (lp.has_bn())
            for (int o = 0; o < lp.w.rows; o++)
                z[std::size_t(o)] = lp.beta[std::size_t(o)];  // xhat == 0 for a lone instance
        for (double& v : z) v = std::max(0.0, v);
        if (drop_p > 0.0 && rng)
            for (double& v : z) v *= rng->uniform() >= drop_p ? 1.0 / (1.0 - drop_p) : 0.0;
        cur = std::move(z);
    }
    double l0 = params.b_out[0], l1 = params.b_out[1];
    for (int k = 0; k < params.w_out.cols; k++) {
        l0 += params.w_out(0, k) * cur[std::size_t(k)];
        l1 += params.w_out(1, k) * cur[std::size_t(k)];
    }
    double m = std::max(l0, l1);
    double e0 = std::exp(l0 - m), e1 = std::exp(l1 - m);
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

Matrix forward_eval_batch(const ModelParams& params, const Matrix& x) {
    check_input(params, x);
    Matrix cur = x;
    for (const auto& lp : params.hidden) {
        Matrix z(cur.rows, lp.w.rows);
        kernels::linear(cur, lp.w, lp.b, z);
        if (lp.has_bn()) {
            for (int i = 0; i < z.rows; i++)
                for (int o = 0; o < z.cols; o++) {
                    double istd = 1.0 / std::sqrt(lp.run_var[std::size_t(o)] + kBnEps);
                    z(i, o) = lp.gamma[std::size_t(o)] * (z(i, o) - lp.run_mean[std::size_t(o)]) * istd +
                              lp.beta[std::size_t(o)];
                }
        }
        for (double& v : z.a) v = std::max(0.0, v);
        cur = std::move(z);
    }
    Matrix logits(cur.rows, params.w_out.rows);
    kernels::linear(cur, params.w_out, params.b_out, logits);
    softmax_rows(logits);
    return logits;
}

Matrix forward_train_batch(const ModelParams& params, const Matrix& x) {
    check_input(params, x);
    Matrix cur = x;
    for (const auto& lp : params.hidden) {
        Matrix z(cur.rows, lp.w.rows);
        kernels::linear(cur, lp.w, lp.b, z);
        if (lp.has_bn()) {
            for (int o = 0; o < z.cols; o++) {
                double mu = 0.0;
                for (int i = 0; i < z.rows; i++) mu += z(i, o);
                mu /= double(z.rows);
                double var = 0.0;
                for (int i = 0; i < z.rows; i++) {
                    double d = z(i, o) - mu;
                    var += d * d;
                }
                var /= double(z.rows);
                double istd = 1.0 / std::sqrt(var + kBnEps);
                for (int i = 0; i < z.rows; i++)
                    z(i, o) = lp.gamma[std::size_t(o)] * (z(i, o) - mu) * istd + lp.beta[std::size_t(o)];
            }
        }
        for (double& v : z.a) v = std::max(0.0, v);
        cur = std::move(z);
    }
    Matrix logits(cur.rows, params.w_out.rows);
    kernels::linear(cur, params.w_out, params.b_out, logits);
    softmax_rows(logits);
    return logits;
}

Matrix forward_eval_batch_f32(const ModelParams& params, const Matrix& x) {
    check_input(params, x);
    auto tof = [](const std::vector<double>& v) {
        std::vector<float> out(v.size());
        for (std::size_t i = 0; i < v.size(); i++) out[i] = float(v[i]);
        return out;
    };

    std::vector<float> cur(x.a.size());
    for (std::size_t i = 0; i < x.a.size(); i++) cur[i] = float(x.a[i]);
    int cur_cols = x.cols;

    auto dense = [&](const Matrix& w, const std::vector<double>& b) {
        std::vector<float> wf = tof(w.a);
        std::vector<float> bf = tof(b);
        std::vector<float> next(std::size_t(x.rows) * std::size_t(w.rows));
        for (int i = 0; i < x.rows; i++)
            for (int o = 0; o < w.rows; o++) {
                float s = bf[std::size_t(o)];
                for (int k = 0; k < w.cols; k++)
                    s += cur[std::size_t(i) * std::size_t(cur_cols) + std::size_t(k)] *
                         wf[std::size_t(o) * std::size_t(w.cols) + std::size_t(k)];
                next[std::size_t(i) * std::size_t(w.rows) + std::size_t(o)] = s;
            }
        cur = std::move(next);
        cur_cols = w.rows;
    };

    for (const auto& lp : params.hidden) {
        dense(lp.w, lp.b);
        if (lp.has_bn()) {
            std::vector<float> g = tof(lp.gamma), be = tof(lp.beta), rm = tof(lp.run_mean),
                               rv = tof(lp.run_var);
            for (int i = 0; i < x.rows; i++)
                for (int o = 0; o < cur_cols; o++) {
                    float& v = cur[std::size_t(i) * std::size_t(cur_cols) + std::size_t(o)];
                    v = g[std::size_t(o)] * (v - rm[std::size_t(o)]) /
                            std::sqrt(rv[std::size_t(o)] + float(kBnEps)) +
                        be[std::size_t(o)];
                }
        }
        for (float& v : cur) v = std::max(0.0f, v);
    }
    dense(params.w_out, params.b_out);

    Matrix probs(x.rows, 2);
    for (int i = 0; i < x.rows; i++) {
        float l0 = cur[std::size_t(i) * 2], l1 = cur[std::size_t(i) * 2 + 1];
        float m = std::max(l0, l1);
        float e0 = std::exp(l0 - m), e1 = std::exp(l1 - m);
        probs(i, 0) = double(e0 / (e0 + e1));
        probs(i, 1) = double(e1 / (e0 + e1));
    }
    return probs;
}

// ── Training ─────────────────────────────────────────────

TrainResult train(const ModelConfig& config, const Matrix& x, const std::vector<int>& y) {
    config.validate();
    if (x.rows == 0) throw DataError("train: empty training set");
    if (std::size_t(x.rows) != y.size()) throw ParamError("train: x/y size mismatch");
    if (x.cols != config.input_width()) throw ParamError("train: input width mismatch");
    for (int v : y)
        if (v != 0 && v != 1) throw ParamError("train: labels must be 0 or 1");

    TrainResult result;
    result.params = init_params(config);
    ModelParams& params = result.params;

    std::vector<double*> pview = param_view(params);
    std::vector<double> m(pview.size(), 0.0), v(pview.size(), 0.0);
    long t = 0;

    Rng base(config.seed);
    Rng dropout_rng = base.fork("dropout");

    std::vector<int> order(std::size_t(x.rows));
    for (std::size_t i = 0; i < order.size(); i++) order[i] = int(i);

    GradBuffer grads = make_grad_buffer(params);

    for (int epoch = 0; epoch < config.epochs; epoch++) {
        Rng shuffle_rng = base.fork("shuffle-" + std::to_string(epoch));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        long correct = 0;
        long seen = 0;

        for (int start = 0; start < x.rows; start += config.batch_size) {
            int bsz = std::min(config.batch_size, x.rows - start);
            Matrix xb(bsz, x.cols);
            std::vector<int> yb(static_cast<std::size_t>(bsz));
            for (int i = 0; i < bsz; i++) {
                int src = order[std::size_t(start + i)];
                std::copy(x.row(src).begin(), x.row(src).end(), xb.row(i).begin());
                yb[std::size_t(i)] = y[std::size_t(src)];
            }

            double loss = forward_backward(params, xb, yb, config.dropout && config.dropout_p > 0.0,
                                           &dropout_rng, true, &grads, &correct);
            epoch_loss += loss * double(bsz);
            seen += bsz;

            std::vector<double*> gview = grad_view(grads);
            t++;
            double bc1 = 1.0 - std::pow(config.adam.beta1, double(t));
            double bc2 = 1.0 - std::pow(config.adam.beta2, double(t));
            for (std::size_t i = 0; i < pview.size(); i++) {
                double g = *gview[i];
                m[i] = config.adam.beta1 * m[i] + (1.0 - config.adam.beta1) * g;
                v[i] = config.adam.beta2 * v[i] + (1.0 - config.adam.beta2) * g * g;
                double mhat = m[i] / bc1;
                double vhat = v[i] / bc2;
                *pview[i] -= config.adam.lr * mhat / (std::sqrt(vhat) + config.adam.eps);
            }
        }
        result.trace.push_back({epoch_loss / double(seen), double(correct) / double(seen)});
    }
    return result;
}

// ── Gradient access ──────────────────────────────────────

double batch_loss(const ModelParams& params, const Matrix& x, const std::vector<int>& y) {
    check_input(params, x);
    ModelParams copy = params;
    return forward_backward(copy, x, y, false, nullptr, false, nullptr, nullptr);
}

GradBuffer batch_gradients(const ModelParams& params, const Matrix& x, const std::vector<int>& y) {
    check_input(params, x);
    ModelParams copy = params;
    GradBuffer grads = make_grad_buffer(copy);
    forward_backward(copy, x, y, false, nullptr, false, &grads, nullptr);
    return grads;
}

std::vector<double*> param_view(ModelParams& params) {
    std::vector<double*> out;
    for (auto& lp : params.hidden) {
        for (double& v : lp.w.a) out.push_back(&v);
        for (double& v : lp.b) out.push_back(&v);
        for (double& v : lp.gamma) out.push_back(&v);
        for (double& v : lp.beta) out.push_back(&v);
    }
    for (double& v : params.w_out.a) out.push_back(&v);
    for (double& v : params.b_out) out.push_back(&v);
    return out;
}

std::vector<double*> grad_view(GradBuffer& grads) {
    std::vector<double*> out;
    const std::size_t n_hidden = grads.gamma.size();
    for (std::size_t l = 0; l < n_hidden; l++) {
        for (double& v : grads.w[l].a) out.push_back(&v);
        for (double& v : grads.b[l]) out.push_back(&v);
        for (double& v : grads.gamma[l]) out.push_back(&v);
        for (double& v : grads.beta[l]) out.push_back(&v);
    }
    for (double& v : grads.w[n_hidden].a) out.push_back(&v);
    for (double& v : grads.b[n_hidden]) out.push_back(&v);
    return out;
}

// ── Serialization ────────────────────────────────────────

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; i++) {
        json row = json::array();
        for (int j = 0; j < m.cols; j++) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw FormatError("weight file: matrix must be an array of rows");
    Matrix m(int(j.size()), int(j[0].size()));
    for (int i = 0; i < m.rows; i++) {
        if (int(j[std::size_t(i)].size()) != m.cols)
            throw FormatError("weight file: ragged matrix rows");
        for (int k = 0; k < m.cols; k++) m(i, k) = j[std::size_t(i)][std::size_t(k)].get<double>();
    }
    return m;
}

std::vector<double> vec_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("weight file: expected an array");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

json config_to_json(const ModelConfig& c) {
    return json{{"layer_widths", c.layer_widths},
                {"dropout_p", c.dropout_p},
                {"batchnorm", c.batchnorm},
                {"dropout", c.dropout},
                {"epochs", c.epochs},
                {"batch_size", c.batch_size},
                {"adam", {{"lr", c.adam.lr},
                          {"beta1", c.adam.beta1},
                          {"beta2", c.adam.beta2},
                          {"eps", c.adam.eps}}},
                {"seed", c.seed}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig c;
    c.layer_widths = j.at("layer_widths").get<std::vector<int>>();
    c.dropout_p = j.at("dropout_p").get<double>();
    c.batchnorm = j.at("batchnorm").get<bool>();
    c.dropout = j.at("dropout").get<bool>();
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.adam.lr = j.at("adam").at("lr").get<double>();
    c.adam.beta1 = j.at("adam").at("beta1").get<double>();
    c.adam.beta2 = j.at("adam").at("beta2").get<double>();
    c.adam.eps = j.at("adam").at("eps").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

void save_params(const ModelParams& params, const std::string& path) {
    json j;
    j["format"] = "sweetdeep-model";
    j["version"] = 1;
    j["config"] = config_to_json(params.config);
    json hidden = json::array();
    for (const auto& lp : params.hidden) {
        json layer;
        layer["w"] = matrix_to_json(lp.w);
        layer["b"] = lp.b;
        if (lp.has_bn())
            layer["bn"] = json{{"gamma", lp.gamma},
                               {"beta", lp.beta},
                               {"mean", lp.run_mean},
                               {"var", lp.run_var}};
        hidden.push_back(std::move(layer));
    }
    j["hidden"] = std::move(hidden);
    j["output"] = json{{"w", matrix_to_json(params.w_out)}, {"b", params.b_out}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_params: cannot open " + path);
    out << j.dump(1) << "\n";
}

ModelParams load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_params: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(std::string("load_params: corrupt weight file: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "sweetdeep-model")
            throw FormatError("load_params: not a sweetdeep model file");
        if (j.at("version").get<int>() != 1)
            throw FormatError("load_params: unsupported weight file version");

        ModelParams p;
        p.config = config_from_json(j.at("config"));
        p.config.validate();
        const auto& widths = p.config.layer_widths;
        const auto& hidden = j.at("hidden");
        if (int(hidden.size()) != p.config.n_hidden())
            throw FormatError("load_params: hidden layer count mismatch");
        for (int l = 0; l < p.config.n_hidden(); l++) {
            const auto& hj = hidden[std::size_t(l)];
            LayerParams lp;
            lp.w = matrix_from_json(hj.at("w"));
            lp.b = vec_from_json(hj.at("b"));
            int in = widths[std::size_t(l)], out = widths[std::size_t(l) + 1];
            if (lp.w.rows != out || lp.w.cols != in || int(lp.b.size()) != out)
                throw FormatError("load_params: layer shape does not match layer_widths");
            if (p.config.batchnorm != hj.contains("bn"))
                throw FormatError("load_params: batchnorm flag does not match stored layers");
            if (hj.contains("bn")) {
                lp.gamma = vec_from_json(hj.at("bn").at("gamma"));
                lp.beta = vec_from_json(hj.at("bn").at("beta"));
                lp.run_mean = vec_from_json(hj.at("bn").at("mean"));
                lp.run_var = vec_from_json(hj.at("bn").at("var"));
                if (int(lp.gamma.size()) != out || int(lp.beta.size()) != out ||
                    int(lp.run_mean.size()) != out || int(lp.run_var.size()) != out)
                    throw FormatError("load_params: BN vector shape mismatch");
                for (double rv : lp.run_var)
                    if (rv < 0.0) throw FormatError("load_params: negative running variance");
            }
            p.hidden.push_back(std::move(lp));
        }
        p.w_out = matrix_from_json(j.at("output").at("w"));
        p.b_out = vec_from_json(j.at("output").at("b"));
        if (p.w_out.rows != widths.back() || p.w_out.cols != widths[widths.size() - 2] ||
            int(p.b_out.size()) != widths.back())
            throw FormatError("load_params: output layer shape mismatch");
        return p;
    } catch (const json::exception& e) {
        throw FormatError(std::string("load_params: malformed weight file: ") + e.what());
    }
}

ModelParams load_params(const std::string& path, const ModelConfig& expect) {
    ModelParams p = load_params(path);
    if (p.config.layer_widths != expect.layer_widths)
        throw FormatError("load_params: stored layer widths do not match the expected config");
    return p;
}

}  // namespace sweetdeep::model
