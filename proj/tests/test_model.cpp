#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sweetdeep/kernels.hpp"
#include "sweetdeep/model.hpp"

using namespace sweetdeep;
using model::ModelConfig;
using model::ModelParams;

namespace {

// deterministic separable toy data: two shifted Gaussian blobs
std::pair<Matrix, std::vector<int>> blob_data(int n, int width, double gap, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, width);
    std::vector<int> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i++) {
        int label = i % 2;
        y[std::size_t(i)] = label;
        for (int j = 0; j < width; j++)
            x(i, j) = rng.normal() + (j < 2 ? (label ? gap : -gap) : 0.0);
    }
    return {x, y};
}

std::string temp_path(const char* name) {
    return std::string("/tmp/sweetdeep-test-") + name;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("parameter counts") {
    ModelConfig base;  // [35,64,8,2] with BN
    CHECK(model::count_params(base) == 2986);
    CHECK(model::count_params(base) < 3000);

    ModelConfig no_bn = base;
    no_bn.batchnorm = false;
    CHECK(model::count_params(no_bn) == 2842);

    ModelConfig single;
    single.layer_widths = {35, 2};
    single.batchnorm = false;
    CHECK(model::count_params(single) == 72);

    ModelConfig wider = base;
    wider.layer_widths = {35, 128, 16, 2};
    CHECK(model::count_params(wider) == (35 * 128 + 128) + 256 + (128 * 16 + 16) + 32 + (16 * 2 + 2));
}

TEST_CASE("softmax head sums to one and zero weights give 0.5") {
    ModelConfig cfg;
    auto params = model::init_params(cfg);
    Rng rng(3);
    std::vector<double> x(35);
    for (auto& v : x) v = rng.normal();
    auto pred = model::forward(params, x);
    CHECK(pred.p_nd + pred.p_t2d == doctest::Approx(1.0).epsilon(1e-9));

    for (auto& v : params.w_out.a) v = 0.0;
    for (auto& v : params.b_out) v = 0.0;
    auto uniform = model::forward(params, x);
    CHECK(uniform.p_nd == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(uniform.p_t2d == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("train/eval forward agree when running stats equal batch stats") {
    ModelConfig cfg;
    cfg.dropout_p = 0.0;
    auto params = model::init_params(cfg);
    auto [x, y] = blob_data(64, 35, 1.0, 5);

    // set running statistics to the exact batch statistics
    Matrix cur = x;
    for (auto& lp : params.hidden) {
        Matrix z(cur.rows, lp.w.rows);
        kernels::linear(cur, lp.w, lp.b, z);
        for (int o = 0; o < z.cols; o++) {
            double mu = 0.0;
            for (int i = 0; i < z.rows; i++) mu += z(i, o);
            mu /= double(z.rows);
            double var = 0.0;
            for (int i = 0; i < z.rows; i++) var += (z(i, o) - mu) * (z(i, o) - mu);
            var /= double(z.rows);
            lp.run_mean[std::size_t(o)] = mu;
            lp.run_var[std::size_t(o)] = var;
            double istd = 1.0 / std::sqrt(var + 1e-5);
            for (int i = 0; i < z.rows; i++)
                z(i, o) = lp.gamma[std::size_t(o)] * (z(i, o) - mu) * istd + lp.beta[std::size_t(o)];
        }
        for (double& v : z.a) v = std::max(0.0, v);
        cur = std::move(z);
    }

    Matrix train_probs = model::forward_train_batch(params, x);
    Matrix eval_probs = model::forward_eval_batch(params, x);
    for (std::size_t i = 0; i < train_probs.a.size(); i++)
        CHECK(train_probs.a[i] == doctest::Approx(eval_probs.a[i]).epsilon(1e-9));
}

TEST_CASE("initial loss is ln 2 for balanced labels") {
    ModelConfig cfg;
    cfg.seed = 9;
    auto params = model::init_params(cfg);
    auto [x, y] = blob_data(512, 35, 0.8, 6);
    double loss = model::batch_loss(params, x, y);
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(0.2 / std::log(2.0)));

    // exactly ln 2 when the output layer is zeroed
    for (auto& v : params.w_out.a) v = 0.0;
    for (auto& v : params.b_out) v = 0.0;
    CHECK(model::batch_loss(params, x, y) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("gradient check on a small network") {
    ModelConfig cfg;
    cfg.layer_widths = {7, 6, 4, 2};
    cfg.seed = 17;
    auto params = model::init_params(cfg);
    auto [x, y] = blob_data(32, 7, 0.7, 18);

    auto grads = model::batch_gradients(params, x, y);
    auto gview = model::grad_view(grads);
    auto pview = model::param_view(params);
    REQUIRE(gview.size() == pview.size());
    REQUIRE(long(pview.size()) == model::count_params(cfg));

    const double h = 1e-5;
    for (std::size_t i = 0; i < pview.size(); i++) {
        double orig = *pview[i];
        *pview[i] = orig + h;
        double up = model::batch_loss(params, x, y);
        *pview[i] = orig - h;
        double down = model::batch_loss(params, x, y);
        *pview[i] = orig;
        double fd = (up - down) / (2.0 * h);
        double denom = std::max({std::fabs(fd), std::fabs(*gview[i]), 1e-6});
        CHECK(std::fabs(fd - *gview[i]) / denom < 1e-4);
    }
}

TEST_CASE("gradient check without batchnorm") {
    ModelConfig cfg;
    cfg.layer_widths = {5, 4, 2};
    cfg.batchnorm = false;
    cfg.seed = 21;
    auto params = model::init_params(cfg);
    auto [x, y] = blob_data(16, 5, 0.5, 22);
    auto grads = model::batch_gradients(params, x, y);
    auto gview = model::grad_view(grads);
    auto pview = model::param_view(params);
    const double h = 1e-5;
    for (std::size_t i = 0; i < pview.size(); i++) {
        double orig = *pview[i];
        *pview[i] = orig + h;
        double up = model::batch_loss(params, x, y);
        *pview[i] = orig - h;
        double down = model::batch_loss(params, x, y);
        *pview[i] = orig;
        double fd = (up - down) / (2.0 * h);
        double denom = std::max({std::fabs(fd), std::fabs(*gview[i]), 1e-6});
        CHECK(std::fabs(fd - *gview[i]) / denom < 1e-4);
    }
}

TEST_CASE("training separates a linearly separable toy") {
    ModelConfig cfg;
    cfg.epochs = 50;
    cfg.batch_size = 64;
    cfg.seed = 33;
    auto [x, y] = blob_data(512, 35, 1.5, 34);
    auto result = model::train(cfg, x, y);
    CHECK(result.trace.size() == 50);
    CHECK(result.trace.back().accuracy >= 0.99);
    CHECK(result.trace.back().loss < result.trace.front().loss);
}

TEST_CASE("training is bit-deterministic under a seed") {
    ModelConfig cfg;
    cfg.epochs = 3;
    cfg.batch_size = 128;
    cfg.seed = 55;
    auto [x, y] = blob_data(300, 35, 1.0, 56);
    auto a = model::train(cfg, x, y);
    auto b = model::train(cfg, x, y);
    auto av = model::param_view(a.params);
    auto bv = model::param_view(b.params);
    REQUIRE(av.size() == bv.size());
    for (std::size_t i = 0; i < av.size(); i++) CHECK(*av[i] == *bv[i]);
    for (auto& lp_pair : {std::pair{&a.params, &b.params}}) {
        for (std::size_t l = 0; l < lp_pair.first->hidden.size(); l++) {
            CHECK(lp_pair.first->hidden[l].run_mean == lp_pair.second->hidden[l].run_mean);
            CHECK(lp_pair.first->hidden[l].run_var == lp_pair.second->hidden[l].run_var);
        }
    }
}

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
    // a dead input dimension gets exactly zero gradient throughout; emulate
    // by checking the update rule directly: m = v = 0, g = 0 -> step 0
    double m = 0.0, v = 0.0, g = 0.0, p = 1.234;
    double b1 = 0.9, b2 = 0.999, lr = 1e-3, eps = 1e-8;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    double mhat = m / (1 - b1);
    double vhat = v / (1 - b2);
    double next = p - lr * mhat / (std::sqrt(vhat) + eps);
    CHECK(next == p);
}

TEST_CASE("eval forward is pure and batch-independent") {
    ModelConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 64;
    cfg.seed = 77;
    auto [x, y] = blob_data(200, 35, 1.0, 78);
    auto trained = model::train(cfg, x, y);

    Matrix batch_probs = model::forward_eval_batch(trained.params, x);
    for (int i : {0, 57, 199}) {
        auto single = model::forward(trained.params, x.row(i));
        CHECK(single.p_t2d == batch_probs(i, 1));  // bit-identical
    }
}

TEST_CASE("float32 inference tracks float64 within 1e-4") {
    ModelConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 64;
    cfg.seed = 88;
    auto [x, y] = blob_data(256, 35, 1.2, 89);
    auto trained = model::train(cfg, x, y);
    Matrix p64 = model::forward_eval_batch(trained.params, x);
    Matrix p32 = model::forward_eval_batch_f32(trained.params, x);
    for (std::size_t i = 0; i < p64.a.size(); i++)
        CHECK(std::fabs(p64.a[i] - p32.a[i]) < 1e-4);
}

TEST_CASE("save/load round trip is bit-exact and byte-identical") {
    ModelConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 64;
    cfg.seed = 99;
    auto [x, y] = blob_data(128, 35, 1.0, 100);
    auto trained = model::train(cfg, x, y);

    auto path1 = temp_path("model1.json");
    auto path2 = temp_path("model2.json");
    model::save_params(trained.params, path1);
    auto loaded = model::load_params(path1);
    model::save_params(loaded, path2);

    std::ifstream f1(path1), f2(path2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);

    auto lv = model::param_view(loaded);
    auto tv = model::param_view(trained.params);
    for (std::size_t i = 0; i < lv.size(); i++) CHECK(*lv[i] == *tv[i]);
    std::remove(path1.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("load rejects corrupt and mismatched files") {
    auto path = temp_path("model-bad.json");
    {
        std::ofstream out(path);
        out << "{\"format\": \"sweetdeep-model\", \"version\": 1, \"config\": {";  // truncated
    }
    CHECK_THROWS_AS(model::load_params(path), FormatError);
    CHECK_THROWS_AS(model::load_params(temp_path("does-not-exist.json")), IoError);

    ModelConfig wider;
    wider.layer_widths = {35, 128, 16, 2};
    auto params = model::init_params(wider);
    model::save_params(params, path);
    ModelConfig baseline;
    CHECK_THROWS_AS(model::load_params(path, baseline), FormatError);
    std::remove(path.c_str());
}

TEST_CASE("config validation") {
    ModelConfig cfg;
    cfg.layer_widths = {35, 2};
    CHECK_THROWS_AS(cfg.validate(), ParamError);
    cfg = ModelConfig{};
    cfg.layer_widths.back() = 3;
    CHECK_THROWS_AS(cfg.validate(), ParamError);
    cfg = ModelConfig{};
    cfg.dropout_p = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ParamError);
    Matrix x(0, 35);
    CHECK_THROWS_AS(model::train(ModelConfig{}, x, {}), DataError);
}

}  // TEST_SUITE
