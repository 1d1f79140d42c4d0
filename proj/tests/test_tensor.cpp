#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phishgan/adam.hpp"
#include "phishgan/gradcheck.hpp"
#include "phishgan/kernels.hpp"
#include "phishgan/nn.hpp"
#include "phishgan/rng.hpp"
#include "phishgan/tensor.hpp"

using namespace phishgan;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, bool requires_grad = false,
                     double lo = -1.0, double hi = 1.0) {
    std::int64_t n = 1;
    for (int d : shape) n *= d;
    std::vector<double> data(static_cast<size_t>(n));
    for (auto& v : data) v = rng.uniform(lo, hi);
    return Tensor::from(std::move(shape), std::move(data), requires_grad);
}

}  // namespace

TEST_CASE("conv1d length formulas") {
    // k=3, s=1, p=1 preserves length; k=3, s=2, p=1 maps L -> floor((L-1)/2)+1
    CHECK(kernels::conv_out_len(200, 3, 1, 1) == 200);
    CHECK(kernels::conv_out_len(200, 3, 2, 1) == 100);
    CHECK(kernels::conv_out_len(100, 3, 2, 1) == 50);
    CHECK(kernels::conv_out_len(50, 3, 2, 1) == 25);
    CHECK(kernels::tconv_out_len(25, 3, 2, 1, 1) == 50);
    CHECK(kernels::tconv_out_len(50, 3, 2, 1, 1) == 100);
    CHECK(kernels::tconv_out_len(100, 3, 2, 1, 1) == 200);
    // Without output padding the chain would land one short.
    CHECK(kernels::tconv_out_len(25, 3, 2, 1, 0) == 49);
    for (int l : {7, 64, 123, 200})
        for (int s : {1, 2})
            CHECK(kernels::conv_out_len(l, 3, s, 1) == (l + 2 - 3) / s + 1);
}

TEST_CASE("fast kernels match the serial reference") {
    Rng rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        kernels::ConvGeom g;
        g.batch = 1 + static_cast<int>(rng.below(3));
        g.c_in = 1 + static_cast<int>(rng.below(8));
        g.c_out = 1 + static_cast<int>(rng.below(8));
        g.k = 3;
        g.stride = trial % 2 ? 2 : 1;
        g.pad = 1;
        g.l_in = 8 + static_cast<int>(rng.below(30));
        g.l_out = kernels::conv_out_len(g.l_in, g.k, g.stride, g.pad);

        auto x = random_tensor({g.batch, g.c_in, g.l_in}, rng);
        auto w = random_tensor({g.c_out, g.c_in, g.k}, rng);
        auto b = random_tensor({g.c_out}, rng);
        std::vector<double> y_fast(static_cast<size_t>(g.batch) * g.c_out * g.l_out);
        std::vector<double> y_ref(y_fast.size());
        kernels::conv_forward(x.data().data(), w.data().data(), b.data().data(),
                              y_fast.data(), g);
        kernels::ref::conv_forward(x.data().data(), w.data().data(), b.data().data(),
                                   y_ref.data(), g);
        for (size_t i = 0; i < y_fast.size(); ++i)
            CHECK(y_fast[i] == doctest::Approx(y_ref[i]).epsilon(1e-12));

        auto dy = random_tensor({g.batch, g.c_out, g.l_out}, rng);
        std::vector<double> dx_fast(x.size()), dx_ref(x.size());
        kernels::conv_backward_data(dy.data().data(), w.data().data(), dx_fast.data(), g);
        kernels::ref::conv_backward_data(dy.data().data(), w.data().data(), dx_ref.data(), g);
        for (size_t i = 0; i < dx_fast.size(); ++i)
            CHECK(dx_fast[i] == doctest::Approx(dx_ref[i]).epsilon(1e-12));

        std::vector<double> dw_fast(w.size()), dw_ref(w.size());
        std::vector<double> db_fast(b.size()), db_ref(b.size());
        kernels::conv_backward_filter(dy.data().data(), x.data().data(), dw_fast.data(),
                                      db_fast.data(), g);
        kernels::ref::conv_backward_filter(dy.data().data(), x.data().data(), dw_ref.data(),
                                           db_ref.data(), g);
        for (size_t i = 0; i < dw_fast.size(); ++i)
            CHECK(dw_fast[i] == doctest::Approx(dw_ref[i]).epsilon(1e-12));
        for (size_t i = 0; i < db_fast.size(); ++i)
            CHECK(db_fast[i] == doctest::Approx(db_ref[i]).epsilon(1e-12));
    }
}

TEST_CASE("backward basics") {
    SUBCASE("sum yields all-ones gradient") {
        Rng rng(1);
        auto x = random_tensor({3, 4}, rng, true);
        sum(x).backward();
        for (double gv : x.grad()) CHECK(gv == 1.0);
    }
    SUBCASE("mse at the minimum yields zero gradient") {
        auto x = Tensor::full({5}, 2.5, true);
        auto c = Tensor::full({5}, 2.5);
        mean(square(sub(x, c))).backward();
        for (double gv : x.grad()) CHECK(gv == 0.0);
    }
    SUBCASE("backward on a non-scalar is rejected") {
        auto x = Tensor::zeros({2, 2}, true);
        CHECK_THROWS(add_scalar(x, 1.0).backward());
    }
}

TEST_CASE("softmax") {
    auto z = Tensor::zeros({1, 2});
    auto p = softmax_rows(z);
    CHECK(p.data()[0] == doctest::Approx(0.5));
    CHECK(p.data()[1] == doctest::Approx(0.5));

    Rng rng(3);
    auto x = random_tensor({8, 67}, rng, false, -5.0, 5.0);
    auto s = softmax_rows(x);
    for (int r = 0; r < 8; ++r) {
        double total = 0.0;
        for (int c = 0; c < 67; ++c) {
            const double v = s.data()[static_cast<size_t>(r) * 67 + c];
            CHECK(v > 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("batchnorm normalizes per channel in training mode") {
    Rng rng(5);
    auto x = random_tensor({8, 4, 10}, rng, false, -3.0, 7.0);
    auto gamma = Tensor::full({4}, 1.0);
    auto beta = Tensor::zeros({4});
    BatchNormStats stats{std::vector<double>(4, 0.0), std::vector<double>(4, 1.0)};
    auto y = batchnorm(x, gamma, beta, stats, true);
    for (int c = 0; c < 4; ++c) {
        double m = 0.0, v = 0.0;
        for (int b = 0; b < 8; ++b)
            for (int i = 0; i < 10; ++i) m += y.data()[(b * 4 + c) * 10 + i];
        m /= 80.0;
        for (int b = 0; b < 8; ++b)
            for (int i = 0; i < 10; ++i) {
                const double d = y.data()[(b * 4 + c) * 10 + i] - m;
                v += d * d;
            }
        v /= 80.0;
        CHECK(std::abs(m) <= 1e-6);
        CHECK(std::abs(v - 1.0) <= 1e-5);
    }
}

TEST_CASE("dense shape mismatch names both shapes") {
    auto x = Tensor::zeros({2, 5});
    auto w = Tensor::zeros({3, 4});
    auto b = Tensor::zeros({3});
    CHECK_THROWS_WITH_AS(dense(x, w, b), doctest::Contains("dense"),
                         std::invalid_argument);
    auto xc = Tensor::zeros({1, 5, 10});
    auto wc = Tensor::zeros({3, 4, 3});
    auto bc = Tensor::zeros({3});
    CHECK_THROWS_AS(conv1d(xc, wc, bc, 1, 1), std::invalid_argument);
}

TEST_CASE("adam") {
    SUBCASE("zero gradient leaves parameters unchanged, bumps step count") {
        auto p = Tensor::from({3}, {1.0, -2.0, 0.5}, true);
        std::vector<Tensor> params{p};
        AdamState st;
        adam_step(params, st);
        CHECK(st.step_count == 1);
        CHECK(p.data()[0] == 1.0);
        CHECK(p.data()[1] == -2.0);
    }
    SUBCASE("single step with unit gradient moves by about alpha") {
        auto p = Tensor::from({1}, {1.0}, true);
        sum(p).backward();  // gradient 1
        std::vector<Tensor> params{p};
        AdamState st;
        adam_step(params, st);
        CHECK(p.data()[0] == doctest::Approx(0.9998).epsilon(1e-6));
    }
    SUBCASE("constant gradient approaches an alpha-sized signed step") {
        auto p = Tensor::from({1}, {0.0}, true);
        std::vector<Tensor> params{p};
        AdamState st;
        double prev = 0.0;
        double step = 0.0;
        for (int i = 0; i < 500; ++i) {
            sum(mul_scalar(p, 3.0)).backward();  // constant gradient 3
            adam_step(params, st);
            step = prev - p.data()[0];
            prev = p.data()[0];
        }
        CHECK(step == doctest::Approx(st.alpha).epsilon(1e-3));
        CHECK(st.step_count == 500);
    }
    SUBCASE("empty parameter set is a no-op") {
        std::vector<Tensor> params;
        AdamState st;
        adam_step(params, st);
        CHECK(st.step_count == 1);
    }
}

TEST_CASE("gradient checks per layer kind") {
    // Spec'd tolerances: 1e-6 dense, 1e-5 batchnorm, 1e-5 everything else.
    for (unsigned long long seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        {
            auto x = random_tensor({4, 5}, rng);
            auto w = random_tensor({3, 5}, rng);
            auto b = random_tensor({3}, rng);
            auto err = grad_check([&] { return mean(square(dense(x, w, b))); }, {w, b, x});
            CHECK(err <= 1e-6);
        }
        {
            auto x = random_tensor({2, 3, 9}, rng);
            auto w = random_tensor({4, 3, 3}, rng);
            auto b = random_tensor({4}, rng);
            auto err = grad_check(
                [&] { return mean(square(conv1d(x, w, b, seed % 2 ? 2 : 1, 1))); },
                {w, b, x});
            CHECK(err <= 1e-5);
        }
        {
            auto x = random_tensor({2, 3, 8}, rng);
            auto w = random_tensor({3, 4, 3}, rng);
            auto b = random_tensor({4}, rng);
            auto err = grad_check(
                [&] { return mean(square(conv1d_transposed(x, w, b, 2, 1, 1))); }, {w, b, x});
            CHECK(err <= 1e-5);
        }
        {
            auto x = random_tensor({4, 3, 6}, rng);
            auto gamma = random_tensor({3}, rng, false, 0.5, 1.5);
            auto beta = random_tensor({3}, rng);
            BatchNormStats stats{std::vector<double>(3, 0.0), std::vector<double>(3, 1.0)};
            auto err = grad_check(
                [&] {
                    return mean(square(batchnorm(x, gamma, beta, stats, true)));
                },
                {gamma, beta, x});
            CHECK(err <= 1e-5);
        }
        {
            auto x = random_tensor({3, 7}, rng);
            auto err = grad_check(
                [&] {
                    auto h = leaky_relu(x, 0.2);
                    h = sigmoid(h);
                    return mean(square(softmax_rows(h)));
                },
                {x});
            CHECK(err <= 1e-5);
        }
        {
            auto a = random_tensor({2, 2, 5}, rng);
            auto b2 = random_tensor({2, 3, 5}, rng);
            auto err = grad_check(
                [&] { return mean(square(flatten(concat_channels({a, b2})))); }, {a, b2});
            CHECK(err <= 1e-5);
        }
    }
}

TEST_CASE("grad_check rejects a non-deterministic builder") {
    Rng rng(7);
    auto x = Tensor::from({1}, {1.0}, true);
    int calls = 0;
    CHECK_THROWS_AS(grad_check(
                        [&] {
                            ++calls;
                            return mul_scalar(x, static_cast<double>(calls));
                        },
                        {x}),
                    std::runtime_error);
}

TEST_CASE("forward determinism") {
    Rng rng(13);
    auto x = random_tensor({2, 3, 16}, rng);
    auto w = random_tensor({5, 3, 3}, rng);
    auto b = random_tensor({5}, rng);
    auto y1 = conv1d(x, w, b, 2, 1);
    auto y2 = conv1d(x, w, b, 2, 1);
    CHECK(y1.data() == y2.data());
}
