#include "painleve/core.hpp"

#include <cmath>
#include <numbers>

#include "painleve/integrator.hpp"

namespace painleve {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::DegenerateDerivative: return "degenerate-derivative";
        case ErrorCode::PurityViolation: return "purity-violation";
        case ErrorCode::StepUnderflow: return "step-underflow";
        case ErrorCode::AmbiguousClassification: return "ambiguous-classification";
        case ErrorCode::SchemaError: return "schema-error";
    }
    return "unknown";
}

const char* to_string(EquationKind kind) {
    switch (kind) {
        case EquationKind::PainleveI: return "p1";
        case EquationKind::PainleveII: return "p2";
        case EquationKind::ToyModel: return "toy";
    }
    return "unknown";
}

const char* to_string(Direction direction) {
    return direction == Direction::NegativeT ? "neg" : "pos";
}

cplx rhs(const Equation& eq, cplx t, cplx y, cplx /*yp*/) {
    switch (eq.kind()) {
        case EquationKind::PainleveI: return 6.0 * y * y + t;
        case EquationKind::PainleveII: return 2.0 * y * y * y + t * y;
        case EquationKind::ToyModel: return std::cos(std::numbers::pi * t * y);
    }
    return {};
}

cplx rhs_derivative(const Equation& eq, cplx t, cplx y, cplx yp) {
    switch (eq.kind()) {
        case EquationKind::PainleveI: return 12.0 * y * yp + 1.0;
        case EquationKind::PainleveII: return 6.0 * y * y * yp + y + t * yp;
        case EquationKind::ToyModel: {
            const double pi = std::numbers::pi;
            return -std::sin(pi * t * y) * pi * (y + t * yp);
        }
    }
    return {};
}

namespace {

void require_painleve(const Equation& eq, const char* what) {
    if (eq.kind() == EquationKind::ToyModel)
        throw Error(ErrorCode::InvalidArgument,
                    std::string(what) + " is not defined for the toy model");
}

struct IntegrandJet {
    cplx g, dg, d2g;
};

// Integrand of I(x) and its first two t-derivatives at a path point.
IntegrandJet integrand_jet(const Equation& eq, const State& s) {
    const cplx t = s.t, y = s.y, yp = s.yp;
    const cplx ypp = rhs(eq, t, y, yp);
    const cplx yppp = rhs_derivative(eq, t, y, yp);
    if (eq.kind() == EquationKind::PainleveI) {
        return {t * yp, yp + t * ypp, 2.0 * ypp + t * yppp};
    }
    return {t * y * yp,
            y * yp + t * yp * yp + t * y * ypp,
            2.0 * yp * yp + 2.0 * y * ypp + 3.0 * t * yp * ypp + t * y * yppp};
}

}  // namespace

double asymptotic_branch(const Equation& eq, double t, Branch sign) {
    require_painleve(eq, "asymptotic_branch");
    if (!(t < 0.0))
        throw Error(ErrorCode::InvalidArgument, "asymptotic_branch requires t < 0");
    const double divisor = eq.kind() == EquationKind::PainleveI ? 6.0 : 2.0;
    const double magnitude = std::sqrt(-t / divisor);
    return sign == Branch::Plus ? magnitude : -magnitude;
}

double energy(const Equation& eq, double y, double yp) {
    require_painleve(eq, "energy");
    if (eq.kind() == EquationKind::PainleveI) return 0.5 * yp * yp - 2.0 * y * y * y;
    return 0.5 * yp * yp - 0.5 * y * y * y * y;
}

std::vector<double> fluctuation_integral(const Equation& eq, const Trajectory& traj) {
    require_painleve(eq, "fluctuation_integral");
    std::vector<double> out;
    if (traj.samples.empty()) return out;

    // Trapezoid on the accepted steps with the two-point Hermite endpoint
    // corrections, so the quadrature error stays below the integration error.
    cplx acc = 0.0;
    IntegrandJet prev = integrand_jet(eq, traj.samples.front());
    if (traj.samples.front().t.imag() == 0.0) out.push_back(0.0);
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        const State& s = traj.samples[k];
        const IntegrandJet cur = integrand_jet(eq, s);
        const cplx h = s.t - traj.samples[k - 1].t;
        acc += h / 2.0 * (prev.g + cur.g) + h * h / 10.0 * (prev.dg - cur.dg) +
               h * h * h / 120.0 * (prev.d2g + cur.d2g);
        if (s.t.imag() == 0.0) out.push_back(acc.real());
        prev = cur;
    }
    return out;
}

std::vector<EnergyValue> energy_profile(const Equation& eq, const Trajectory& traj) {
    const std::vector<double> integral = fluctuation_integral(eq, traj);
    std::vector<EnergyValue> out;
    out.reserve(integral.size());
    std::size_t j = 0;
    for (const State& s : traj.samples) {
        if (s.t.imag() != 0.0) continue;
        out.push_back({energy(eq, s.y.real(), s.yp.real()), integral[j++]});
    }
    return out;
}

}  // namespace painleve
