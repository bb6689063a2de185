#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "smdg/kernels.hpp"

using namespace smdg;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

} // namespace

TEST_CASE("every compiled kernel variant matches the scalar reference") {
    const auto variants = kernels::available();
    REQUIRE(variants.size() >= 1);
    const auto& ref = kernels::scalar();
    std::mt19937_64 rng(7);

    // odd lengths exercise the SIMD remainder loops
    for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 8u, 31u, 64u, 67u, 255u}) {
        const auto x = random_vec(rng, n);
        const auto w = random_vec(rng, n);
        const auto y0 = random_vec(rng, n);
        const auto t1 = random_vec(rng, n);
        const auto t2 = random_vec(rng, n);
        const auto t3 = random_vec(rng, n);
        const double a = 1.37;

        for (const auto* k : variants) {
            CAPTURE(k->name);
            CAPTURE(n);

            auto ya = y0, yb = y0;
            ref.axpy(ya.data(), x.data(), a, n);
            k->axpy(yb.data(), x.data(), a, n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(yb[i] == doctest::Approx(ya[i]).epsilon(1e-14));

            ya = y0;
            yb = y0;
            ref.scal(ya.data(), x.data(), a, n);
            k->scal(yb.data(), x.data(), a, n);
            for (std::size_t i = 0; i < n; ++i) CHECK(yb[i] == ya[i]);

            ya = y0;
            yb = y0;
            ref.wxpy(ya.data(), w.data(), x.data(), a, n);
            k->wxpy(yb.data(), w.data(), x.data(), a, n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(yb[i] == doctest::Approx(ya[i]).epsilon(1e-14));

            const double* ts[3] = {t1.data(), t2.data(), t3.data()};
            const double cs[3] = {0.5, -1.25, 2.0};
            std::vector<double> la(n), lb(n);
            ref.lincomb(la.data(), y0.data(), ts, cs, 3, n);
            k->lincomb(lb.data(), y0.data(), ts, cs, 3, n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(lb[i] == doctest::Approx(la[i]).epsilon(1e-14));

            const double da = ref.dot(x.data(), w.data(), n);
            const double db = k->dot(x.data(), w.data(), n);
            CHECK(db == doctest::Approx(da).epsilon(1e-13));

            const double sa = ref.sumsq(x.data(), n);
            const double sb = k->sumsq(x.data(), n);
            CHECK(sb == doctest::Approx(sa).epsilon(1e-13));
        }
    }
}

TEST_CASE("kernel algebra properties") {
    const auto& K = kernels::active();
    std::mt19937_64 rng(11);
    const std::size_t n = 93;
    const auto x = random_vec(rng, n);

    SUBCASE("sumsq equals dot with itself") {
        CHECK(K.sumsq(x.data(), n) == doctest::Approx(K.dot(x.data(), x.data(), n)));
    }
    SUBCASE("axpy with zero coefficient is the identity") {
        auto y = random_vec(rng, n);
        const auto y0 = y;
        K.axpy(y.data(), x.data(), 0.0, n);
        CHECK(y == y0);
    }
    SUBCASE("lincomb with no terms copies the base") {
        std::vector<double> y(n, -1.0);
        K.lincomb(y.data(), x.data(), nullptr, nullptr, 0, n);
        CHECK(y == x);
    }
}
