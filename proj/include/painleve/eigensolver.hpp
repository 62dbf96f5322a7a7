#pragma once

// Critical initial conditions ("nonlinear eigenvalues"): the initial slopes
// b_n or initial values c_n whose solutions are unstable separatrices, and
// the critical values a_n of the toy model.

#include <optional>
#include <string>
#include <vector>

#include "painleve/classifier.hpp"

namespace painleve {

enum class SearchKind { SlopeEigen, ValueEigen, ToyEigen };

const char* to_string(SearchKind kind);

struct SearchMode {
    SearchKind kind = SearchKind::SlopeEigen;
    /// The initial datum held fixed: y(0) in slope mode, y'(0) in value mode.
    double fixed_value = 0.0;

    static SearchMode slope(double y0 = 0.0) { return {SearchKind::SlopeEigen, y0}; }
    static SearchMode value(double slope0 = 0.0) { return {SearchKind::ValueEigen, slope0}; }
    static SearchMode toy() { return {SearchKind::ToyEigen, 0.0}; }

    InitialData initial_data(double x) const;
};

/// Direction the IVP is integrated for a given search: towards -t except
/// P-II value mode and the toy model, which run towards +t.
Direction search_direction(const Equation& eq, const SearchMode& mode);

struct SolverConfig {
    /// One decade tighter than the integrator defaults so that the default
    /// bisection tolerance (1e-10) stays >= 10 * rel_tol.
    IntegrationConfig integration = [] {
        IntegrationConfig c;
        c.rel_tol = 1e-11;
        c.abs_tol = 1e-13;
        return c;
    }();
    ClassifierConfig classifier;
    /// Length of the window used to confirm a converged separatrix. Shorter
    /// than the terminal window: a double-precision eigenvalue only keeps the
    /// solution on the unstable branch for a few units of t.
    double validation_window = 2.0;
    /// Decay level confirming a positive-direction separatrix. The unstable
    /// growth seeded by a 1e-10 bracket caps the decay near 1e-4 for c_1.
    double validation_decay = 1e-3;
    /// Worker threads for scans and independent bisections (0 = hardware).
    unsigned threads = 0;
};

struct EigenvalueRecord {
    int index = 0;
    double value = 0.0;
    double bracket_width = 0.0;
    int pole_count = 0;
    SearchMode mode;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    /// Positive direction only: number of leading poles shared by both ends;
    /// the discriminant is the escape sign after that many poles.
    int shared_poles = 0;
};

struct ScanResult {
    std::vector<Bracket> brackets;
    std::vector<std::string> warnings;
};

struct BisectionResult {
    EigenvalueRecord record;
    /// Bracket width after each halving, starting with the initial width.
    std::vector<double> widths;
};

/// Discriminant class of one initial datum. Negative direction: the terminal
/// SolutionTag. Positive direction (P-II): the entry signs of successive
/// poles up to the horizon. Toy model: the number of maxima.
struct Discriminant {
    std::optional<SolutionTag> tag;
    std::vector<int> pole_signs;
    int maxima = 0;
};

Discriminant discriminant(const Equation& eq, const SearchMode& mode, double x,
                          const SolverConfig& cfg = {});

/// Grid points range_lo, range_lo + step, ... , range_hi (range may be given
/// in either order; scanning runs from the first bound to the second).
ScanResult scan_brackets(const Equation& eq, const SearchMode& mode, double from, double to,
                         double step, const SolverConfig& cfg = {});

/// Bisection of a bracket on the discriminant until its width is <= tol.
BisectionResult bisect(const Equation& eq, const SearchMode& mode, const Bracket& bracket,
                       double tol, const SolverConfig& cfg = {});

struct EigenTable {
    std::vector<EigenvalueRecord> records;
    /// Set when the table is partial: the index that could not be produced.
    std::optional<int> failed_index;
    std::string failure;
    std::vector<std::string> warnings;
};

/// Eigenvalues n = 1..n_max, scanning away from the origin (0) with a step
/// that shrinks with the observed spacing, then bisecting each bracket.
EigenTable eigen_table(const Equation& eq, const SearchMode& mode, int n_max, double tol = 1e-10,
                       const SolverConfig& cfg = {});

/// Toy-model critical values a_n. n_max <= 60.
EigenTable toy_eigen_table(int n_max, double tol = 1e-10, const SolverConfig& cfg = {});

/// Number of leading poles shared by the trajectories from the two ends of a
/// converged bracket: the pole count of the separatrix between them.
int separatrix_pole_count(const Equation& eq, const SearchMode& mode, double lo, double hi,
                          const SolverConfig& cfg = {});

/// Confirms that the trajectory from `record.value` follows an unstable branch
/// (negative direction) or decays towards zero (positive direction) after its
/// last pole. Returns the class observed over the confirming window.
std::optional<SolutionClass> validate_separatrix(const Equation& eq, const EigenvalueRecord& record,
                                                 const SolverConfig& cfg = {});

}  // namespace painleve
