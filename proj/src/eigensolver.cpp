#include "painleve/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

namespace painleve {

const char* to_string(SearchKind kind) {
    switch (kind) {
        case SearchKind::SlopeEigen: return "slope";
        case SearchKind::ValueEigen: return "value";
        case SearchKind::ToyEigen: return "toy";
    }
    return "unknown";
}

InitialData SearchMode::initial_data(double x) const {
    switch (kind) {
        case SearchKind::SlopeEigen: return {fixed_value, x, 0.0};
        case SearchKind::ValueEigen: return {x, fixed_value, 0.0};
        case SearchKind::ToyEigen: return {x, 0.0, 0.0};
    }
    return {};
}

Direction search_direction(const Equation& eq, const SearchMode& mode) {
    if (eq.kind() == EquationKind::ToyModel) return Direction::PositiveT;
    if (eq.kind() == EquationKind::PainleveII && mode.kind == SearchKind::ValueEigen)
        return Direction::PositiveT;
    return Direction::NegativeT;
}

namespace {

void check_mode(const Equation& eq, const SearchMode& mode) {
    const bool toy_eq = eq.kind() == EquationKind::ToyModel;
    const bool toy_mode = mode.kind == SearchKind::ToyEigen;
    if (toy_eq != toy_mode)
        throw Error(ErrorCode::InvalidArgument, "toy search mode goes with the toy model only");
}

unsigned worker_count(const SolverConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(i) for i in [0, n) on up to `workers` threads, results in index order.
template <class Fn>
auto parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t start = 0; start < n; start += workers) {
        const std::size_t stop = std::min(n, start + workers);
        std::vector<std::future<R>> jobs;
        for (std::size_t i = start + 1; i < stop; ++i)
            jobs.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
        out.push_back(fn(start));
        for (auto& j : jobs) out.push_back(j.get());
    }
    return out;
}

IntegrationConfig toy_integration(const IntegrationConfig& base) {
    IntegrationConfig cfg = base;
    cfg.max_step = std::min(cfg.max_step, 0.02);
    return cfg;
}

Trajectory trajectory_for(const Equation& eq, const SearchMode& mode, double x,
                          const IntegrationConfig& cfg) {
    const Direction dir = search_direction(eq, mode);
    if (eq.kind() == EquationKind::ToyModel)
        return integrate(eq, mode.initial_data(x), dir, toy_integration(cfg));
    return integrate(eq, mode.initial_data(x), dir, cfg);
}

// Terminal tag for a negative-direction probe. A probe close enough to an
// eigenvalue can still sit on the separatrix at the horizon; the horizon is
// then pushed out before giving up.
SolutionTag negative_tag(const Equation& eq, const SearchMode& mode, double x,
                         const SolverConfig& cfg) {
    IntegrationConfig icfg = cfg.integration;
    double horizon = icfg.t_horizon.value_or(default_horizon(eq, Direction::NegativeT));
    for (int attempt = 0;; ++attempt) {
        icfg.t_horizon = horizon;
        const Trajectory traj = trajectory_for(eq, mode, x, icfg);
        try {
            const SolutionClass cls = classify(eq, traj, Direction::NegativeT, cfg.classifier);
            if (cls.tag == SolutionTag::PoleCascade || cls.tag == SolutionTag::StableOscillation)
                return cls.tag;
            if (attempt >= 2) {
                std::ostringstream msg;
                msg << "probe x=" << x << " still on a separatrix at t=" << horizon;
                throw Error(ErrorCode::AmbiguousClassification, msg.str());
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::AmbiguousClassification || attempt >= 2) {
                std::ostringstream msg;
                msg << "probe x=" << x << ": " << e.what();
                throw Error(e.code(), msg.str());
            }
        }
        horizon *= 1.5;
    }
}

std::vector<int> pole_signs(const Trajectory& traj) {
    std::vector<int> out;
    out.reserve(traj.poles.size());
    for (const PoleEvent& p : traj.poles) out.push_back(p.entry_value >= 0.0 ? 1 : -1);
    return out;
}

// First index at which two pole-sign sequences disagree within their common
// prefix; empty when one is a prefix of the other.
std::optional<int> first_difference(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return static_cast<int>(i);
    return std::nullopt;
}

// Escape sign after `shared` poles (P-II, positive direction).
int escape_sign(const Equation& eq, const SearchMode& mode, double x, int shared,
                const SolverConfig& cfg) {
    IntegrationConfig icfg = cfg.integration;
    icfg.max_poles = shared;
    const Trajectory traj = trajectory_for(eq, mode, x, icfg);
    if (traj.termination == Termination::Horizon) {
        std::ostringstream msg;
        msg << "probe x=" << x << " reached the horizon before pole " << shared + 1;
        throw Error(ErrorCode::AmbiguousClassification, msg.str());
    }
    const SolutionClass cls = classify(eq, traj, Direction::PositiveT, cfg.classifier);
    return cls.tag == SolutionTag::DivergentPositive ? 1 : -1;
}

struct Probe {
    double x;
    Discriminant d;
};

std::optional<Bracket> compare(const Equation& eq, const Probe& a, const Probe& b) {
    const double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    if (eq.kind() == EquationKind::ToyModel) {
        if (a.d.maxima != b.d.maxima) return Bracket{lo, hi, 0};
        return std::nullopt;
    }
    if (a.d.tag) {
        if (*a.d.tag != *b.d.tag) return Bracket{lo, hi, 0};
        return std::nullopt;
    }
    if (const auto k = first_difference(a.d.pole_signs, b.d.pole_signs)) return Bracket{lo, hi, *k};
    return std::nullopt;
}

}  // namespace

Discriminant discriminant(const Equation& eq, const SearchMode& mode, double x,
                          const SolverConfig& cfg) {
    check_mode(eq, mode);
    Discriminant d;
    if (eq.kind() == EquationKind::ToyModel) {
        d.maxima = count_toy_maxima(trajectory_for(eq, mode, x, cfg.integration));
    } else if (search_direction(eq, mode) == Direction::NegativeT) {
        d.tag = negative_tag(eq, mode, x, cfg);
    } else {
        d.pole_signs = pole_signs(trajectory_for(eq, mode, x, cfg.integration));
    }
    return d;
}

ScanResult scan_brackets(const Equation& eq, const SearchMode& mode, double from, double to,
                         double step, const SolverConfig& cfg) {
    check_mode(eq, mode);
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to))
        throw Error(ErrorCode::InvalidArgument, "scan needs a finite range and a positive step");
    const double sign = to >= from ? 1.0 : -1.0;
    const auto n = static_cast<std::size_t>(std::floor(std::abs(to - from) / step + 1e-9)) + 1;

    const std::vector<Probe> probes = parallel_map(n, worker_count(cfg), [&](std::size_t i) {
        const double x = from + sign * step * static_cast<double>(i);
        return Probe{x, discriminant(eq, mode, x, cfg)};
    });

    ScanResult result;
    for (std::size_t i = 1; i < probes.size(); ++i) {
        const auto bracket = compare(eq, probes[i - 1], probes[i]);
        if (!bracket) continue;
        if (eq.kind() == EquationKind::ToyModel &&
            std::abs(probes[i].d.maxima - probes[i - 1].d.maxima) > 1) {
            std::ostringstream msg;
            msg << "maxima count jumps by more than one on [" << bracket->lo << ", " << bracket->hi
                << "]; shrink the step";
            result.warnings.push_back(msg.str());
        }
        if (!result.brackets.empty() &&
            (result.brackets.back().hi == bracket->lo || result.brackets.back().lo == bracket->hi)) {
            std::ostringstream msg;
            msg << "adjacent brackets near " << bracket->lo
                << ": eigenvalues may be closer than the step; shrink the step";
            result.warnings.push_back(msg.str());
        }
        if (!eq.pole_order() || !probes[i].d.tag) {
            // Positive direction: consecutive brackets should share one more pole each.
            if (eq.pole_order() && !result.brackets.empty() &&
                bracket->shared_poles > result.brackets.back().shared_poles + 1) {
                std::ostringstream msg;
                msg << "pole index jumps from " << result.brackets.back().shared_poles << " to "
                    << bracket->shared_poles << " near " << bracket->lo
                    << ": an eigenvalue may have been skipped";
                result.warnings.push_back(msg.str());
            }
        }
        result.brackets.push_back(*bracket);
    }
    if (sign < 0.0) {
        // Keep brackets ordered along the scan.
        std::sort(result.brackets.begin(), result.brackets.end(),
                  [](const Bracket& a, const Bracket& b) { return a.lo > b.lo; });
    }
    return result;
}

BisectionResult bisect(const Equation& eq, const SearchMode& mode, const Bracket& bracket,
                       double tol, const SolverConfig& cfg) {
    check_mode(eq, mode);
    if (!(bracket.hi > bracket.lo)) throw Error(ErrorCode::InvalidArgument, "empty bracket");
    if (!(tol >= 10.0 * cfg.integration.rel_tol))
        throw Error(ErrorCode::InvalidArgument, "bisection tolerance must be >= 10 * rel_tol");

    const Direction dir = search_direction(eq, mode);
    // Discriminant as a small integer; the concrete meaning depends on the search.
    auto classify_at = [&](double x) -> int {
        if (eq.kind() == EquationKind::ToyModel)
            return count_toy_maxima(trajectory_for(eq, mode, x, cfg.integration));
        if (dir == Direction::NegativeT) return static_cast<int>(negative_tag(eq, mode, x, cfg));
        return escape_sign(eq, mode, x, bracket.shared_poles, cfg);
    };

    double lo = bracket.lo, hi = bracket.hi;
    const int c_lo = classify_at(lo);
    const int c_hi = classify_at(hi);
    if (c_lo == c_hi) {
        std::ostringstream msg;
        msg << "bracket [" << lo << ", " << hi << "] does not straddle a class change";
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }

    BisectionResult out;
    out.widths.push_back(hi - lo);
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        const int c = classify_at(mid);
        if (c == c_lo) {
            lo = mid;
        } else if (c == c_hi) {
            hi = mid;
        } else {
            // Toy model: the count moved past both ends' values, keep the lower jump.
            if (eq.kind() != EquationKind::ToyModel) {
                std::ostringstream msg;
                msg << "probe x=" << mid << " matches neither end of the bracket";
                throw Error(ErrorCode::AmbiguousClassification, msg.str());
            }
            hi = mid;
        }
        out.widths.push_back(hi - lo);
    }

    EigenvalueRecord& rec = out.record;
    rec.value = lo + 0.5 * (hi - lo);
    rec.bracket_width = hi - lo;
    rec.mode = mode;
    rec.pole_count = eq.pole_order() ? separatrix_pole_count(eq, mode, lo, hi, cfg) : 0;
    return out;
}

int separatrix_pole_count(const Equation& eq, const SearchMode& mode, double lo, double hi,
                          const SolverConfig& cfg) {
    check_mode(eq, mode);
    if (!eq.pole_order()) return 0;
    const Trajectory a = trajectory_for(eq, mode, lo, cfg.integration);
    const Trajectory b = trajectory_for(eq, mode, hi, cfg.integration);
    const std::size_t n = std::min(a.poles.size(), b.poles.size());
    int shared = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const PoleEvent& p = a.poles[i];
        const PoleEvent& q = b.poles[i];
        const bool same_side = (p.entry_value >= 0.0) == (q.entry_value >= 0.0);
        if (!same_side || std::abs(p.location - q.location) > 1e-3) break;
        ++shared;
    }
    return shared;
}

std::optional<SolutionClass> validate_separatrix(const Equation& eq, const EigenvalueRecord& record,
                                                 const SolverConfig& cfg) {
    check_mode(eq, record.mode);
    if (!eq.pole_order()) return std::nullopt;
    const Direction dir = search_direction(eq, record.mode);
    const Trajectory traj = trajectory_for(eq, record.mode, record.value, cfg.integration);

    ClassifierConfig ccfg = cfg.classifier;
    ccfg.window = cfg.validation_window;
    ccfg.decay_threshold = cfg.validation_decay;
    const double sgn = dir == Direction::NegativeT ? -1.0 : 1.0;
    const double start =
        record.pole_count > 0 && static_cast<int>(traj.poles.size()) >= record.pole_count
            ? traj.poles[static_cast<std::size_t>(record.pole_count) - 1].location
            : 0.0;
    // Slide the confirming window outward from the last pole of the separatrix.
    for (double t_end = start + sgn * ccfg.window; sgn * (traj.terminal_t - t_end) > 0.0;
         t_end += sgn * 0.25) {
        const Trajectory cut = truncate_at(traj, t_end);
        if (static_cast<int>(cut.poles.size()) > record.pole_count) break;
        try {
            const SolutionClass cls = classify(eq, cut, dir, ccfg);
            const bool ok = dir == Direction::NegativeT
                                ? (cls.tag == SolutionTag::SeparatrixPlus ||
                                   cls.tag == SolutionTag::SeparatrixMinus)
                                : cls.tag == SolutionTag::DecayToZero;
            if (ok) return cls;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::AmbiguousClassification) throw;
        }
    }
    return std::nullopt;
}

EigenTable eigen_table(const Equation& eq, const SearchMode& mode, int n_max, double tol,
                       const SolverConfig& cfg) {
    check_mode(eq, mode);
    if (eq.kind() == EquationKind::ToyModel) return toy_eigen_table(n_max, tol, cfg);
    if (n_max < 1 || n_max > 30)
        throw Error(ErrorCode::InvalidArgument, "eigen_table supports 1 <= n_max <= 30");

    // P-I value eigenvalues are negative: scan downward from 0.
    const double sign =
        (eq.kind() == EquationKind::PainleveI && mode.kind == SearchKind::ValueEigen) ? -1.0 : 1.0;
    const double initial_step = 0.05;
    const double gap_fraction = 0.2;
    const double x_limit = 40.0;
    const unsigned workers = worker_count(cfg);

    EigenTable table;
    double x = 0.0;
    double step = initial_step;
    double last_value = 0.0;
    Probe prev{x, {}};
    try {
        prev.d = discriminant(eq, mode, x, cfg);
        while (static_cast<int>(table.records.size()) < n_max) {
            if (std::abs(x) > x_limit)
                throw Error(ErrorCode::InvalidArgument, "scan left the supported range");
            std::vector<Probe> probes = parallel_map(workers, workers, [&](std::size_t i) {
                const double xi = x + sign * step * static_cast<double>(i + 1);
                return Probe{xi, discriminant(eq, mode, xi, cfg)};
            });

            std::vector<Bracket> found;
            Probe left = prev;
            for (const Probe& p : probes) {
                if (auto b = compare(eq, left, p)) found.push_back(*b);
                left = p;
            }
            prev = probes.back();
            x = prev.x;
            if (found.empty()) continue;

            std::vector<BisectionResult> solved = parallel_map(
                found.size(), workers, [&](std::size_t i) { return bisect(eq, mode, found[i], tol, cfg); });
            for (std::size_t i = 0; i < solved.size(); ++i) {
                if (static_cast<int>(table.records.size()) >= n_max) break;
                EigenvalueRecord rec = solved[i].record;
                rec.index = static_cast<int>(table.records.size()) + 1;
                if (found[i].shared_poles != 0 && found[i].shared_poles != rec.index) {
                    std::ostringstream msg;
                    msg << "eigenvalue " << rec.index << " at " << rec.value << " shares "
                        << found[i].shared_poles << " poles";
                    table.warnings.push_back(msg.str());
                }
                step = std::min(initial_step, gap_fraction * std::abs(rec.value - last_value));
                last_value = rec.value;
                table.records.push_back(rec);
            }
        }
    } catch (const Error& e) {
        table.failed_index = static_cast<int>(table.records.size()) + 1;
        table.failure = e.what();
    }
    return table;
}

EigenTable toy_eigen_table(int n_max, double tol, const SolverConfig& cfg) {
    if (n_max < 1 || n_max > 60)
        throw Error(ErrorCode::InvalidArgument, "toy_eigen_table supports 1 <= n_max <= 60");
    const Equation eq = Equation::toy_model();
    const SearchMode mode = SearchMode::toy();
    const unsigned workers = worker_count(cfg);
    const double step = 0.02;

    EigenTable table;
    try {
        const int m0 = discriminant(eq, mode, 0.0, cfg).maxima;
        const int target_max = m0 + n_max;
        // Grid of maxima counts, extended until the largest target is passed.
        std::vector<Probe> grid{{0.0, {std::nullopt, {}, m0}}};
        while (grid.back().d.maxima < target_max) {
            if (grid.back().x > 40.0)
                throw Error(ErrorCode::InvalidArgument, "toy scan left the supported range");
            const double x0 = grid.back().x;
            auto more = parallel_map(workers * 4, workers, [&](std::size_t i) {
                const double xi = x0 + step * static_cast<double>(i + 1);
                return Probe{xi, discriminant(eq, mode, xi, cfg)};
            });
            grid.insert(grid.end(), more.begin(), more.end());
        }

        // a_n is where the count first reaches m0 + n.
        std::vector<Bracket> brackets;
        std::size_t j = 1;
        for (int n = 1; n <= n_max; ++n) {
            while (grid[j].d.maxima < m0 + n) ++j;
            brackets.push_back({grid[j - 1].x, grid[j].x, 0});
            if (grid[j].d.maxima - grid[j - 1].d.maxima > 1 && n < n_max &&
                grid[j].d.maxima >= m0 + n + 1) {
                std::ostringstream msg;
                msg << "toy eigenvalues " << n << " and " << n + 1 << " share a grid cell";
                table.warnings.push_back(msg.str());
            }
        }

        auto solved = parallel_map(brackets.size(), workers, [&](std::size_t i) {
            const int target = m0 + static_cast<int>(i) + 1;
            double lo = brackets[i].lo, hi = brackets[i].hi;
            while (hi - lo > tol) {
                const double mid = lo + 0.5 * (hi - lo);
                if (discriminant(eq, mode, mid, cfg).maxima >= target) hi = mid;
                else lo = mid;
            }
            return EigenvalueRecord{static_cast<int>(i) + 1, lo + 0.5 * (hi - lo), hi - lo, 0, mode};
        });
        table.records = std::move(solved);
    } catch (const Error& e) {
        table.failed_index = static_cast<int>(table.records.size()) + 1;
        table.failure = e.what();
    }
    return table;
}

}  // namespace painleve
