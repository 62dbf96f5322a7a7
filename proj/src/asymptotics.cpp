#include "painleve/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace painleve {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

void require_index(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "eigenvalue index must be >= 1");
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Richardson value from the window of k+1 terms ending at position `last`.
double richardson_window(std::span<const double> seq, int k, std::size_t last, int first_index) {
    double r = 0.0;
    for (int j = 0; j <= k; ++j) {
        const std::size_t pos = last - static_cast<std::size_t>(k - j);
        const double n = static_cast<double>(first_index) + static_cast<double>(pos);
        const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
        r += seq[pos] * std::pow(n, k) * sign / (factorial(j) * factorial(k - j));
    }
    return r;
}

// Lagrange extrapolation to x = 0 through (1/(n + offset), s_n).
double shifted_window(std::span<const double> seq, int k, std::size_t last, double offset,
                      int first_index) {
    const std::size_t begin = last - static_cast<std::size_t>(k);
    double r = 0.0;
    for (std::size_t i = begin; i <= last; ++i) {
        const double xi = 1.0 / (static_cast<double>(first_index) + static_cast<double>(i) + offset);
        double w = 1.0;
        for (std::size_t j = begin; j <= last; ++j) {
            if (j == i) continue;
            const double xj =
                1.0 / (static_cast<double>(first_index) + static_cast<double>(j) + offset);
            w *= xj / (xj - xi);
        }
        r += w * seq[i];
    }
    return r;
}

template <class Window>
RichardsonResult extrapolate(std::span<const double> seq, int order, Window&& window) {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "Richardson order must be >= 0");
    if (static_cast<std::size_t>(order) >= seq.size())
        throw Error(ErrorCode::InvalidArgument, "Richardson order k needs at least k+1 terms");
    RichardsonResult out;
    out.order = order;
    const std::size_t last = seq.size() - 1;
    out.estimate = window(last);
    double lo = out.estimate, hi = out.estimate;
    for (std::size_t back = 1; back <= 2; ++back) {
        if (last < back || last - back < static_cast<std::size_t>(order)) break;
        const double r = window(last - back);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.stability = hi - lo;
    return out;
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw Error(ErrorCode::InvalidArgument, "gamma_fn requires a finite x > 0");
    if (x < 0.5) {
        // Reflection keeps the series argument in its accurate range.
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = kLanczosCoeff[0];
    for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i)
        a += kLanczosCoeff[i] / (z + static_cast<double>(i));
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double wkb_energy(const WkbSpec& spec, int n) {
    require_index(n);
    if (!(spec.g > 0.0)) throw Error(ErrorCode::InvalidArgument, "WKB coupling g must be positive");
    if (!(spec.epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "WKB epsilon must be >= 0");
    const double eps = spec.epsilon;
    const double q = 1.0 / (eps + 2.0);
    const double core = gamma_fn(1.5 + q) * std::sqrt(std::numbers::pi) * n /
                        (std::sin(std::numbers::pi * q) * gamma_fn(1.0 + q));
    return 0.5 * std::pow(2.0 * spec.g, 2.0 / (4.0 + eps)) *
           std::pow(core, (2.0 * eps + 4.0) / (eps + 4.0));
}

double hermitian_quartic_energy(int n) {
    require_index(n);
    const double core =
        3.0 * n * std::sqrt(std::numbers::pi) * gamma_fn(0.75) / gamma_fn(0.25);
    return std::pow(core, 4.0 / 3.0);
}

WkbConstants closed_form_constants() {
    const double pi = std::numbers::pi;
    const double cubic = std::sqrt(3.0 * pi) * gamma_fn(11.0 / 6.0) / gamma_fn(1.0 / 3.0);
    const double quartic_pt = 3.0 * std::sqrt(2.0 * pi) * gamma_fn(0.75) / gamma_fn(0.25);
    const double quartic_h = 3.0 * std::sqrt(pi) * gamma_fn(0.75) / gamma_fn(0.25);
    return {2.0 * std::pow(cubic, 0.6), -std::pow(cubic, 0.4), std::pow(quartic_pt, 2.0 / 3.0),
            std::cbrt(quartic_h)};
}

RichardsonResult richardson(std::span<const double> seq, int order, int first_index) {
    return extrapolate(seq, order, [&](std::size_t last) {
        return richardson_window(seq, order, last, first_index);
    });
}

RichardsonResult richardson_shifted(std::span<const double> seq, int order, double offset,
                                    int first_index) {
    if (offset == 0.0) return richardson(seq, order, first_index);
    if (!(static_cast<double>(first_index) + offset > 0.0))
        throw Error(ErrorCode::InvalidArgument, "shifted indices must stay positive");
    return extrapolate(seq, order, [&](std::size_t last) {
        return shifted_window(seq, order, last, offset, first_index);
    });
}

ConstantExtraction extract_constant(std::span<const EigenvalueRecord> records, double exponent,
                                    int order, SubsequenceSplit split, double offset) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].index != static_cast<int>(i) + 1)
            throw Error(ErrorCode::InvalidArgument, "records must be complete from index 1");
    }
    auto scaled = [&](std::size_t from, std::size_t stride) {
        std::vector<double> s;
        double m = 1.0;
        for (std::size_t i = from; i < records.size(); i += stride, m += 1.0) {
            const double n = stride == 1 ? static_cast<double>(records[i].index) : m;
            s.push_back(records[i].value / std::pow(n + offset, exponent));
        }
        return s;
    };

    ConstantExtraction out;
    if (split == SubsequenceSplit::None) {
        const std::vector<double> s = scaled(0, 1);
        out.estimate = richardson_shifted(s, order, offset);
        return out;
    }
    // b_{2m} sits at position 2m-1, b_{2m+1} at position 2m.
    const std::vector<double> even = scaled(1, 2);
    const std::vector<double> odd = scaled(2, 2);
    out.estimate = richardson_shifted(even, order, offset);
    out.odd_estimate = richardson_shifted(odd, order, offset);
    return out;
}

}  // namespace painleve
