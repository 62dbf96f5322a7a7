#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "painleve/asymptotics.hpp"

using namespace painleve;

namespace {

constexpr double pi = std::numbers::pi;

// ln Gamma(x) from the Stirling series after shifting the argument past 20.
double stirling_lgamma(double x) {
    double shift = 0.0;
    while (x < 20.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double x2 = x * x;
    // Bernoulli terms B_{2k} / (2k (2k-1) x^{2k-1}), k = 1..7.
    const double series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2) -
                          1.0 / (1680.0 * x * x2 * x2 * x2) +
                          1.0 / (1188.0 * x * x2 * x2 * x2 * x2) -
                          691.0 / (360360.0 * x * x2 * x2 * x2 * x2 * x2) +
                          1.0 / (156.0 * x * x2 * x2 * x2 * x2 * x2 * x2);
    return shift + (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * pi) + series;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

std::vector<double> tail(double limit, const std::vector<double>& coeffs, int n_terms,
                         int first_index = 1) {
    std::vector<double> s;
    for (int i = 0; i < n_terms; ++i) {
        const double n = first_index + i;
        double v = limit, p = 1.0;
        for (double c : coeffs) {
            p /= n;
            v += c * p;
        }
        s.push_back(v);
    }
    return s;
}

std::vector<EigenvalueRecord> records_from(const std::vector<double>& values) {
    std::vector<EigenvalueRecord> r;
    for (std::size_t i = 0; i < values.size(); ++i)
        r.push_back({static_cast<int>(i) + 1, values[i], 0.0, 0, SearchMode::slope()});
    return r;
}

}  // namespace

TEST_CASE("gamma function exact values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_fn(0.0), Error);
    CHECK_THROWS_AS(gamma_fn(-1.5), Error);
    CHECK_THROWS_AS(gamma_fn(NAN), Error);
}

TEST_CASE("gamma function against an independent Stirling evaluation") {
    const double g13 = std::exp(stirling_lgamma(1.0 / 3.0));
    CHECK(rel_close(g13, 2.678938534707747, 1e-14));
    CHECK(rel_close(gamma_fn(1.0 / 3.0), g13, 1e-13));
    for (double x : {0.25, 0.75, 11.0 / 6.0, 2.5, 7.3}) {
        CAPTURE(x);
        CHECK(rel_close(gamma_fn(x), std::exp(stirling_lgamma(x)), 1e-13));
    }
}

TEST_CASE("gamma recurrence on [0.1, 10]") {
    for (int i = 0; i <= 990; ++i) {
        const double x = 0.1 + 0.01 * i;
        CAPTURE(x);
        CHECK(rel_close(gamma_fn(x + 1.0), x * gamma_fn(x), 1e-12));
    }
}

TEST_CASE("WKB energies for the cubic and quartic PT-symmetric cases") {
    for (int n = 1; n <= 10; ++n) {
        const double cubic =
            2.0 * std::pow(std::sqrt(3.0 * pi) * gamma_fn(11.0 / 6.0) * n / gamma_fn(1.0 / 3.0), 1.2);
        CHECK(rel_close(wkb_energy({2.0, 1.0}, n), cubic, 1e-13));
        const double quartic =
            0.5 * std::pow(3.0 * n * std::sqrt(2.0 * pi) * gamma_fn(0.75) / gamma_fn(0.25), 4.0 / 3.0);
        CHECK(rel_close(wkb_energy({0.5, 2.0}, n), quartic, 1e-13));
    }
}

TEST_CASE("WKB coupling scaling") {
    for (double eps : {0.0, 0.5, 1.0, 2.0, 3.7}) {
        for (int n : {1, 4, 17}) {
            const double r = wkb_energy({2.4, eps}, n) / wkb_energy({1.2, eps}, n);
            CHECK(rel_close(r, std::pow(2.0, 2.0 / (4.0 + eps)), 1e-13));
        }
    }
    // eps = 0 is the harmonic oscillator p^2/2 + x^2: E_n ~ sqrt(2) n.
    CHECK(rel_close(wkb_energy({1.0, 0.0}, 3), 3.0 * std::sqrt(2.0), 1e-13));
    CHECK_THROWS_AS(wkb_energy({0.0, 1.0}, 1), Error);
    CHECK_THROWS_AS(wkb_energy({1.0, -0.5}, 1), Error);
    CHECK_THROWS_AS(wkb_energy({1.0, 1.0}, 0), Error);
}

TEST_CASE("Hermitian quartic energies") {
    // Gamma(7/4) = 3/4 Gamma(3/4), Gamma(5/4) = 1/4 Gamma(1/4) and sin(pi/4) = 1/sqrt(2)
    // reduce the two formulas to a fixed ratio 2 (1/sqrt 2)^(4/3) = 2^(1/3).
    for (int n = 1; n <= 12; ++n)
        CHECK(rel_close(hermitian_quartic_energy(n) / wkb_energy({0.5, 2.0}, n), std::cbrt(2.0), 1e-13));
    for (int n : {1, 3, 10})
        CHECK(std::log2(hermitian_quartic_energy(2 * n) / hermitian_quartic_energy(n)) ==
              doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(hermitian_quartic_energy(1) > 0.0);
    CHECK_THROWS_AS(hermitian_quartic_energy(0), Error);
}

TEST_CASE("closed-form constants") {
    const WkbConstants k = closed_form_constants();
    // High-precision reference values of the four closed forms.
    CHECK(rel_close(k.b_i, 2.0921467448844170, 1e-14));
    CHECK(rel_close(k.c_i, -1.0304844236968658, 1e-14));
    CHECK(rel_close(k.b_ii, 1.8624127646521557, 1e-14));
    CHECK(rel_close(k.c_ii, 1.2158116593057978, 1e-14));
    CHECK(k.b_i > 0.0);
    CHECK(k.c_i < 0.0);
    CHECK(k.b_ii > 0.0);
    CHECK(k.c_ii > 0.0);
}

TEST_CASE("constants follow from the WKB energies") {
    const WkbConstants k = closed_form_constants();
    for (int n = 1; n <= 20; ++n) {
        CAPTURE(n);
        const double e_cubic = wkb_energy({2.0, 1.0}, n);
        // Slope eigenvalues from b^2 / 2 = E, value eigenvalues from -2 c^3 = E.
        CHECK(rel_close(std::sqrt(2.0 * e_cubic) / std::pow(n, 0.6), k.b_i, 1e-12));
        CHECK(rel_close(-std::cbrt(e_cubic / 2.0) / std::pow(n, 0.4), k.c_i, 1e-12));
        const double e_quartic = wkb_energy({0.5, 2.0}, n);
        CHECK(rel_close(std::sqrt(2.0 * e_quartic) / std::pow(n, 2.0 / 3.0), k.b_ii, 1e-12));
        CHECK(rel_close(std::pow(hermitian_quartic_energy(n), 0.25) / std::cbrt(n), k.c_ii, 1e-12));
    }
}

TEST_CASE("Richardson is exact on polynomial tails") {
    const std::vector<double> seven(6, 7.0);
    for (int k = 0; k <= 5; ++k) CHECK(richardson(seven, k).estimate == doctest::Approx(7.0).epsilon(1e-13));

    const auto s1 = tail(1.0, {1.0}, 8);
    for (std::size_t end = 2; end <= s1.size(); ++end)
        CHECK(std::abs(richardson(std::span(s1).first(end), 1).estimate - 1.0) <= 1e-14);

    const auto s2 = tail(2.0, {3.0, 5.0}, 10);
    const RichardsonResult r2 = richardson(s2, 2);
    CHECK(std::abs(r2.estimate - 2.0) <= 1e-13);
    CHECK(r2.stability <= 1e-12);
    CHECK(r2.order == 2);

    for (int k = 1; k <= 6; ++k) {
        std::vector<double> c;
        for (int j = 1; j <= k; ++j) c.push_back((j % 2 ? 1.0 : -1.0) * (0.5 + j));
        const auto s = tail(-0.75, c, 12);
        CAPTURE(k);
        CHECK(std::abs(richardson(s, k).estimate + 0.75) <= 1e-9);
    }
    // Degree k+1 tails are not annihilated.
    const auto s3 = tail(0.0, {0.0, 0.0, 1.0}, 6);
    CHECK(std::abs(richardson(s3, 2).estimate) > 1e-6);
}

TEST_CASE("Richardson with a later first index") {
    const auto s = tail(4.0, {2.0, -1.0}, 5, 7);
    CHECK(std::abs(richardson(s, 2, 7).estimate - 4.0) <= 1e-12);
    CHECK(std::abs(richardson(s, 2, 1).estimate - 4.0) > 1e-3);
}

TEST_CASE("Richardson preconditions") {
    const std::vector<double> s = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(richardson(s, 3), Error);
    CHECK_THROWS_AS(richardson(s, -1), Error);
    CHECK_NOTHROW(richardson(s, 2));
    CHECK(richardson(s, 2).stability == 0.0);
}

TEST_CASE("shifted extrapolation") {
    const auto s = tail(1.5, {2.0, 3.0, -1.0}, 9);
    CHECK(richardson_shifted(s, 3, 0.0).estimate == richardson(s, 3).estimate);
    CHECK(std::abs(richardson_shifted(s, 3, 1e-9).estimate - richardson(s, 3).estimate) <= 1e-6);
    // Exact on tails in 1/(n + 1/2).
    std::vector<double> h;
    for (int n = 1; n <= 8; ++n) h.push_back(3.0 + 1.0 / (n + 0.5) - 2.0 / ((n + 0.5) * (n + 0.5)));
    CHECK(std::abs(richardson_shifted(h, 2, 0.5).estimate - 3.0) <= 1e-12);
    CHECK_THROWS_AS(richardson_shifted(h, 2, -1.5), Error);
}

TEST_CASE("extract_constant scaling and subsequences") {
    // value_n = 2 n^0.6 (1 + 1/n): the scaled sequence is 2 + 2/n.
    std::vector<double> v;
    for (int n = 1; n <= 9; ++n) v.push_back(2.0 * std::pow(n, 0.6) * (1.0 + 1.0 / n));
    const ConstantExtraction a = extract_constant(records_from(v), 0.6, 1);
    CHECK(std::abs(a.estimate.estimate - 2.0) <= 1e-13);
    CHECK_FALSE(a.odd_estimate.has_value());

    // b_{2m} = 3 m^(2/3) (1 + 1/m), b_{2m+1} = 3 m^(2/3) (1 - 2/m), b_1 arbitrary.
    std::vector<double> w = {0.5};
    for (int m = 1; m <= 6; ++m) {
        w.push_back(3.0 * std::pow(m, 2.0 / 3.0) * (1.0 + 1.0 / m));
        w.push_back(3.0 * std::pow(m, 2.0 / 3.0) * (1.0 - 2.0 / m));
    }
    const ConstantExtraction b = extract_constant(records_from(w), 2.0 / 3.0, 1, SubsequenceSplit::EvenOdd);
    REQUIRE(b.odd_estimate.has_value());
    CHECK(std::abs(b.estimate.estimate - 3.0) <= 1e-13);
    CHECK(std::abs(b.odd_estimate->estimate - 3.0) <= 1e-13);

    auto gap = records_from(v);
    gap[3].index = 5;
    CHECK_THROWS_AS(extract_constant(gap, 0.6, 1), Error);
    CHECK_THROWS_AS(extract_constant(records_from({1.0, 2.0}), 0.6, 2), Error);
}

TEST_CASE("appending a record barely moves a well-modelled extrapolation") {
    std::vector<double> v;
    for (int n = 1; n <= 14; ++n) v.push_back(std::pow(n, 0.4) * (-1.03 + 0.2 / n + 0.05 / (n * n) + 0.01 / std::pow(n, 6)));
    const auto r = records_from(v);
    const ConstantExtraction a = extract_constant(std::span(r).first(13), 0.4, 4);
    const ConstantExtraction b = extract_constant(r, 0.4, 4);
    CHECK(std::abs(a.estimate.estimate - b.estimate.estimate) <= a.estimate.stability);
    CHECK(std::abs(b.estimate.estimate + 1.03) <= 1e-6);
}
