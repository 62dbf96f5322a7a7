#include "painleve/classifier.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace painleve {

const char* to_string(SolutionTag tag) {
    switch (tag) {
        case SolutionTag::SeparatrixPlus: return "separatrix-plus";
        case SolutionTag::SeparatrixMinus: return "separatrix-minus";
        case SolutionTag::StableOscillation: return "stable-oscillation";
        case SolutionTag::PoleCascade: return "pole-cascade";
        case SolutionTag::DecayToZero: return "decay-to-zero";
        case SolutionTag::DivergentPositive: return "divergent-positive";
        case SolutionTag::DivergentNegative: return "divergent-negative";
    }
    return "unknown";
}

SolutionTag mirrored(SolutionTag tag) {
    switch (tag) {
        case SolutionTag::SeparatrixPlus: return SolutionTag::SeparatrixMinus;
        case SolutionTag::SeparatrixMinus: return SolutionTag::SeparatrixPlus;
        case SolutionTag::DivergentPositive: return SolutionTag::DivergentNegative;
        case SolutionTag::DivergentNegative: return SolutionTag::DivergentPositive;
        default: return tag;
    }
}

namespace {

[[noreturn]] void ambiguous(const Trajectory& traj, const char* why) {
    std::ostringstream msg;
    msg << "ambiguous classification at t_end=" << traj.terminal_t << " ("
        << traj.poles.size() << " poles, " << to_string(traj.termination) << "): " << why;
    throw Error(ErrorCode::AmbiguousClassification, msg.str());
}

SolutionTag divergence_sign(double y) {
    return y >= 0.0 ? SolutionTag::DivergentPositive : SolutionTag::DivergentNegative;
}

SolutionClass classify_negative(const Equation& eq, const Trajectory& traj,
                                const ClassifierConfig& cfg) {
    const double t_end = traj.terminal_t;
    const double w_hi = std::min(t_end + cfg.window, 0.0);
    const std::pair<double, double> window{t_end, w_hi};
    const int poles = static_cast<int>(traj.poles.size());

    if (traj.termination == Termination::PoleCap) return {SolutionTag::PoleCascade, poles, window};
    if (traj.termination == Termination::StepUnderflow)
        ambiguous(traj, "integration stalled before the horizon");
    for (const PoleEvent& p : traj.poles)
        if (p.location <= w_hi) return {SolutionTag::PoleCascade, poles, window};

    std::vector<State> tail;
    for (const State& s : traj.samples)
        if (s.t.imag() == 0.0 && s.t.real() <= w_hi && s.t.real() < 0.0) tail.push_back(s);
    if (tail.size() < 2) ambiguous(traj, "too few samples in the trailing window");

    auto tracks = [&](Branch sign) {
        for (const State& s : tail) {
            const double b = asymptotic_branch(eq, s.t.real(), sign);
            if (std::abs(s.y.real() - b) > cfg.separatrix_band * std::abs(b)) return false;
        }
        return true;
    };
    if (tracks(Branch::Plus)) return {SolutionTag::SeparatrixPlus, poles, window};
    if (eq.kind() == EquationKind::PainleveII && tracks(Branch::Minus))
        return {SolutionTag::SeparatrixMinus, poles, window};

    // Trapezoid means over the window of y, of the stable centre and of the
    // branch magnitude.
    double span = 0.0, mean_y = 0.0, mean_center = 0.0, mean_branch = 0.0;
    for (std::size_t k = 1; k < tail.size(); ++k) {
        const double t0 = tail[k - 1].t.real(), t1 = tail[k].t.real();
        const double dt = std::abs(t1 - t0);
        const double b0 = asymptotic_branch(eq, t0, Branch::Plus);
        const double b1 = asymptotic_branch(eq, t1, Branch::Plus);
        span += dt;
        mean_y += 0.5 * dt * (tail[k - 1].y.real() + tail[k].y.real());
        mean_branch += 0.5 * dt * (b0 + b1);
        if (eq.kind() == EquationKind::PainleveI) mean_center -= 0.5 * dt * (b0 + b1);
    }
    mean_y /= span;
    mean_center /= span;
    mean_branch /= span;
    if (std::abs(mean_y - mean_center) <= cfg.oscillation_band * mean_branch)
        return {SolutionTag::StableOscillation, poles, window};
    ambiguous(traj, "no pole, separatrix or oscillation criterion holds in the trailing window");
}

SolutionClass classify_positive(const Trajectory& traj, const ClassifierConfig& cfg) {
    const int poles = static_cast<int>(traj.poles.size());
    const double t_end = traj.terminal_t;
    const double since = traj.poles.empty() ? 0.0 : traj.poles.back().location;
    const State& last = traj.samples.back();

    if (traj.termination != Termination::Horizon)
        return {divergence_sign(last.y.real()), poles, {since, t_end}};

    if (since >= t_end - cfg.window && !traj.poles.empty())
        return {SolutionTag::PoleCascade, poles, {t_end - cfg.window, t_end}};

    std::vector<State> tail;
    for (const State& s : traj.samples)
        if (s.t.imag() == 0.0 && s.t.real() >= t_end - cfg.window) tail.push_back(s);
    if (tail.size() < 2) ambiguous(traj, "too few samples in the trailing window");

    bool decreasing = true, increasing = true;
    for (std::size_t k = 1; k < tail.size(); ++k) {
        const double a = std::abs(tail[k - 1].y), b = std::abs(tail[k].y);
        decreasing = decreasing && b <= a;
        increasing = increasing && b >= a;
    }
    const std::pair<double, double> window{tail.front().t.real(), t_end};
    if (decreasing && std::abs(last.y) < cfg.decay_threshold)
        return {SolutionTag::DecayToZero, poles, window};
    if (increasing) return {divergence_sign(last.y.real()), poles, window};
    ambiguous(traj, "neither decay nor divergence in the trailing window");
}

}  // namespace

SolutionClass classify(const Equation& eq, const Trajectory& traj, Direction direction,
                       const ClassifierConfig& cfg) {
    if (eq.kind() == EquationKind::ToyModel)
        throw Error(ErrorCode::InvalidArgument, "toy-model trajectories are classified by maxima count");
    if (traj.samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
    if (direction == Direction::NegativeT) return classify_negative(eq, traj, cfg);
    return classify_positive(traj, cfg);
}

int count_toy_maxima(const Trajectory& traj) {
    int count = 0;
    bool have_prev = false;
    double prev = 0.0;
    for (const State& s : traj.samples) {
        if (s.t.imag() != 0.0 || s.t.real() <= 0.0) continue;
        const double d = s.yp.real();
        if (have_prev && prev > 0.0 && d <= 0.0) ++count;
        prev = d;
        have_prev = true;
    }
    return count;
}

Trajectory truncate_at(const Trajectory& traj, double t_end) {
    Trajectory out;
    if (traj.samples.empty()) return out;
    const double dir = traj.terminal_t >= traj.samples.front().t.real() ? 1.0 : -1.0;
    for (const State& s : traj.samples) {
        out.samples.push_back(s);
        if (s.t.imag() == 0.0 && dir * (s.t.real() - t_end) >= 0.0) break;
    }
    out.terminal_t = out.samples.back().t.real();
    for (const PoleEvent& p : traj.poles)
        if (dir * (p.location - out.terminal_t) < 0.0) out.poles.push_back(p);
    out.termination = dir * (out.terminal_t - t_end) >= 0.0 ? Termination::Horizon : traj.termination;
    return out;
}

}  // namespace painleve
