#include <doctest.h>

#include <cmath>
#include <functional>

#include "fnlc/nn/adam.hpp"
#include "fnlc/nn/layers.hpp"

using namespace fnlc;

namespace {

MatX random_mat(Eigen::Index r, Eigen::Index c, Pcg64& rng) {
    MatX m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
    return m;
}

// Central-difference gradient of a scalar loss with respect to one matrix.
MatX numeric_grad(MatX& x, const std::function<double()>& loss, double h = 1e-6) {
    MatX g(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double keep = x.data()[i];
        x.data()[i] = keep + h;
        const double up = loss();
        x.data()[i] = keep - h;
        const double dn = loss();
        x.data()[i] = keep;
        g.data()[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

double rel_err(const MatX& a, const MatX& b) {
    return (a - b).norm() / std::max(1e-12, a.norm() + b.norm());
}

}  // namespace

TEST_CASE("linear layer gradients") {
    Pcg64 rng(1, 0);
    MatX x = random_mat(5, 3, rng);
    MatX w = random_mat(3, 4, rng);
    MatX b = random_mat(4, 1, rng);
    const MatX t = random_mat(5, 4, rng);
    auto loss = [&] { return 0.5 * (linear_fwd(x, w, b) - t).squaredNorm(); };

    const MatX dy = linear_fwd(x, w, b) - t;
    MatX dx(5, 3), dw = MatX::Zero(3, 4), db = MatX::Zero(4, 1);
    linear_bwd(x, w, dy, dx, dw, db);

    CHECK(rel_err(dx, numeric_grad(x, loss)) < 1e-7);
    CHECK(rel_err(dw, numeric_grad(w, loss)) < 1e-7);
    CHECK(rel_err(db, numeric_grad(b, loss)) < 1e-7);
}

TEST_CASE("activation gradients") {
    Pcg64 rng(2, 0);
    MatX x = random_mat(6, 6, rng);
    const MatX t = random_mat(6, 6, rng);
    const double slope = 0.2;

    auto loss_leaky = [&] {
        return 0.5 * (leaky_relu_fwd(x, slope) - t).squaredNorm();
    };
    const MatX dy1 = leaky_relu_fwd(x, slope) - t;
    CHECK(rel_err(leaky_relu_bwd(x, dy1, slope), numeric_grad(x, loss_leaky)) <
          1e-6);

    auto loss_relu = [&] { return 0.5 * (relu_fwd(x) - t).squaredNorm(); };
    const MatX dy2 = relu_fwd(x) - t;
    CHECK(rel_err(relu_bwd(x, dy2), numeric_grad(x, loss_relu)) < 1e-6);
}

TEST_CASE("softmax rows and gradient") {
    Pcg64 rng(3, 0);
    MatX s = random_mat(4, 7, rng);
    const MatX a = softmax_rows(s);
    for (int r = 0; r < 4; ++r)
        CHECK(a.row(r).sum() == doctest::Approx(1.0).epsilon(1e-12));

    const MatX t = random_mat(4, 7, rng);
    auto loss = [&] { return 0.5 * (softmax_rows(s) - t).squaredNorm(); };
    const MatX da = softmax_rows(s) - t;
    CHECK(rel_err(softmax_rows_bwd(a, da), numeric_grad(s, loss)) < 1e-6);
}

TEST_CASE("softmax tolerates masked entries") {
    const double inf = std::numeric_limits<double>::infinity();
    MatX s(2, 3);
    s << 1.0, -inf, 2.0, -inf, -inf, -inf;
    const MatX a = softmax_rows(s);
    CHECK(a(0, 1) == 0.0);
    CHECK(a.row(0).sum() == doctest::Approx(1.0));
    CHECK(a(0, 2) / a(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(a.row(1).sum() == 0.0);  // fully masked row collapses to zeros
}

TEST_CASE("layer norm forward and gradients") {
    Pcg64 rng(4, 0);
    MatX x = random_mat(5, 8, rng);
    MatX gain = MatX::Ones(8, 1) + 0.1 * random_mat(8, 1, rng);
    MatX bias = 0.1 * random_mat(8, 1, rng);
    const MatX t = random_mat(5, 8, rng);

    LayerNormCache<double> cache;
    const MatX y = layer_norm_fwd(x, gain, bias, cache);
    // Rows are standardized before gain/bias.
    for (int r = 0; r < 5; ++r) {
        CHECK(cache.xhat.row(r).mean() == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(cache.xhat.row(r).squaredNorm() / 8.0 ==
              doctest::Approx(1.0).epsilon(1e-4));
    }
    CHECK(y.rows() == 5);

    auto loss = [&] {
        LayerNormCache<double> c2;
        return 0.5 * (layer_norm_fwd(x, gain, bias, c2) - t).squaredNorm();
    };
    const MatX dy = y - t;
    MatX dgain = MatX::Zero(8, 1), dbias = MatX::Zero(8, 1);
    const MatX dx = layer_norm_bwd(dy, gain, cache, dgain, dbias);
    CHECK(rel_err(dx, numeric_grad(x, loss)) < 1e-6);
    CHECK(rel_err(dgain, numeric_grad(gain, loss)) < 1e-7);
    CHECK(rel_err(dbias, numeric_grad(bias, loss)) < 1e-7);
}

TEST_CASE("im2col layout and adjoint") {
    MatX x(5, 2);
    x << 0, 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const MatX p = im2col(x, 3);
    REQUIRE(p.rows() == 3);
    REQUIRE(p.cols() == 6);
    CHECK(p(0, 0) == 0);
    CHECK(p(0, 5) == 5);
    CHECK(p(2, 0) == 4);
    CHECK(p(2, 5) == 9);
    CHECK_THROWS_AS(im2col(x, 6), ShapeError);

    // Adjoint identity: <im2col(x), y> == <x, im2col_bwd(y)>.
    Pcg64 rng(5, 0);
    const MatX y = random_mat(3, 6, rng);
    MatX dx = MatX::Zero(5, 2);
    im2col_bwd(y, 3, dx);
    CHECK(p.cwiseProduct(y).sum() ==
          doctest::Approx(x.cwiseProduct(dx).sum()).epsilon(1e-12));
}

TEST_CASE("positional encoding values") {
    const MatX pe = positional_encoding<double>(50, 8);
    CHECK(pe(0, 0) == 0.0);
    CHECK(pe(0, 1) == 1.0);
    CHECK(pe(3, 0) == doctest::Approx(std::sin(3.0)).epsilon(1e-12));
    CHECK(pe(3, 1) == doctest::Approx(std::cos(3.0)).epsilon(1e-12));
    const double div = std::pow(10000.0, 2.0 / 8.0);
    CHECK(pe(7, 2) == doctest::Approx(std::sin(7.0 / div)).epsilon(1e-12));
    CHECK(pe.maxCoeff() <= 1.0);
    CHECK(pe.minCoeff() >= -1.0);
}

TEST_CASE("warmup schedule") {
    CHECK(warmup_lr(64, 1, 4000) ==
          doctest::Approx(4.94105884401309e-07).epsilon(1e-12));
    CHECK(warmup_lr(64, 100, 4000) ==
          doctest::Approx(4.94105884401309e-05).epsilon(1e-12));
    CHECK(warmup_lr(64, 4000, 4000) ==
          doctest::Approx(0.00197642353760524).epsilon(1e-12));
    CHECK(warmup_lr(64, 16000, 4000) ==
          doctest::Approx(0.000988211768802618).epsilon(1e-12));
    // Scale multiplies through.
    CHECK(warmup_lr(64, 4000, 4000, 2.0) ==
          doctest::Approx(2.0 * warmup_lr(64, 4000, 4000)).epsilon(1e-12));
}

TEST_CASE("adam step against a hand-rolled update") {
    Param<double> p;
    p.init_shape("w", 2, 1);
    p.w << 1.0, -2.0;
    p.g << 0.5, -0.25;
    const MatX g0 = p.g;
    std::vector<Param<double>*> ps = {&p};
    const double lr = 0.1;
    AdamConfig cfg;
    adam_step(ps, 1, lr, cfg);
    for (int i = 0; i < 2; ++i) {
        const double m = (1 - cfg.beta1) * g0(i, 0) / (1 - cfg.beta1);
        const double v = (1 - cfg.beta2) * g0(i, 0) * g0(i, 0) / (1 - cfg.beta2);
        const double want = (i == 0 ? 1.0 : -2.0) -
                            lr * m / (std::sqrt(v) + cfg.eps);
        CHECK(p.w(i, 0) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(p.g.cwiseAbs().maxCoeff() == 0.0);  // gradients cleared

    // Second step keeps moments.
    p.g << 0.5, -0.25;
    adam_step(ps, 2, lr, cfg);
    CHECK(p.m(0, 0) == doctest::Approx(0.9 * 0.05 + 0.1 * 0.5).epsilon(1e-12));
}

TEST_CASE("uniform fill is seeded and bounded") {
    Param<double> a, b;
    a.init_shape("a", 10, 10);
    b.init_shape("b", 10, 10);
    Pcg64 r1(9, 0x11a7), r2(9, 0x11a7);
    a.fill_uniform(r1, 100);
    b.fill_uniform(r2, 100);
    CHECK(a.w == b.w);
    const double bound = std::sqrt(3.0 / 100.0);
    CHECK(a.w.maxCoeff() <= bound);
    CHECK(a.w.minCoeff() >= -bound);
    CHECK(a.w.cwiseAbs().maxCoeff() > 0.5 * bound);
}
