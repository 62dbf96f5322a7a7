#pragma once

// Large-n constants of the eigenvalue sequences: Richardson extrapolation of
// computed tables and the closed forms obtained from WKB quantization of the
// PT-symmetric Hamiltonians p^2/2 + g x^2 (i x)^eps.

#include <optional>
#include <span>
#include <vector>

#include "painleve/eigensolver.hpp"

namespace painleve {

/// Euler gamma function for x > 0, Lanczos approximation (g = 7, 9 terms).
double gamma_fn(double x);

struct WkbSpec {
    double g = 1.0;
    double epsilon = 0.0;
};

/// Leading WKB eigenvalue of p^2/2 + g x^2 (i x)^eps:
///   E_n = (2g)^(2/(4+eps)) / 2
///         * [Gamma(3/2 + 1/(eps+2)) sqrt(pi) n / (sin(pi/(eps+2)) Gamma(1 + 1/(eps+2)))]^((2eps+4)/(eps+4))
double wkb_energy(const WkbSpec& spec, int n);

/// [3 n sqrt(pi) Gamma(3/4) / Gamma(1/4)]^(4/3), the large-n formula used for
/// the Hermitian quartic oscillator p^2/2 + x^4/2.
double hermitian_quartic_energy(int n);

struct WkbConstants {
    double b_i;
    double c_i;
    double b_ii;
    double c_ii;
};

/// B_I = 2 [sqrt(3 pi) Gamma(11/6) / Gamma(1/3)]^(3/5)
/// C_I = -[sqrt(3 pi) Gamma(11/6) / Gamma(1/3)]^(2/5)
/// B_II = [3 sqrt(2 pi) Gamma(3/4) / Gamma(1/4)]^(2/3)
/// C_II = [3 sqrt(pi) Gamma(3/4) / Gamma(1/4)]^(1/3)
WkbConstants closed_form_constants();

struct RichardsonResult {
    double estimate = 0.0;
    int order = 0;
    /// Spread (max - min) of the estimate over the last three admissible windows.
    double stability = 0.0;
};

/// Order-k Richardson extrapolation of s_n (n = first_index, first_index+1, ...)
/// assuming s_n = s_inf + a_1/n + ... + a_k/n^k + ..., using the last k+1 terms.
RichardsonResult richardson(std::span<const double> seq, int order, int first_index = 1);

/// Same extrapolation with the index shifted, n -> n + offset, done as
/// polynomial extrapolation in 1/(n + offset) to zero. Equals richardson()
/// for offset 0.
RichardsonResult richardson_shifted(std::span<const double> seq, int order, double offset,
                                    int first_index = 1);

enum class SubsequenceSplit { None, EvenOdd };

struct ConstantExtraction {
    /// Whole sequence, or the even-index subsequence b_2, b_4, ... when split.
    RichardsonResult estimate;
    /// Odd-index subsequence b_3, b_5, ... when split.
    std::optional<RichardsonResult> odd_estimate;
};

/// Extrapolates value_n / (n + offset)^exponent. With EvenOdd, the
/// subsequences b_{2m} and b_{2m+1} are each taken against m = 1, 2, ...
/// Records must be complete from index 1.
ConstantExtraction extract_constant(std::span<const EigenvalueRecord> records, double exponent,
                                    int order, SubsequenceSplit split = SubsequenceSplit::None,
                                    double offset = 0.0);

}  // namespace painleve
