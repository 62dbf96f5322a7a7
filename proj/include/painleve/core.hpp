#pragma once

// Dynamical systems: the first and second Painleve transcendents and the
// cos(pi t y) toy model, plus the energy reduction used to connect the
// nonlinear problems to linear Schrodinger spectra.

#include <complex>
#include <optional>
#include <vector>

#include "painleve/error.hpp"

namespace painleve {

using cplx = std::complex<double>;

enum class EquationKind { PainleveI, PainleveII, ToyModel };

enum class Branch { Plus, Minus };

enum class Direction { NegativeT, PositiveT };

/// The ODE being integrated. Pole order and ODE order are fixed by the kind.
class Equation {
public:
    constexpr explicit Equation(EquationKind kind) : kind_(kind) {}

    static constexpr Equation painleve_i() { return Equation(EquationKind::PainleveI); }
    static constexpr Equation painleve_ii() { return Equation(EquationKind::PainleveII); }
    static constexpr Equation toy_model() { return Equation(EquationKind::ToyModel); }

    constexpr EquationKind kind() const { return kind_; }

    /// 2 for P-I (double poles), 1 for P-II (simple poles), empty for the toy model.
    constexpr std::optional<int> pole_order() const {
        switch (kind_) {
            case EquationKind::PainleveI: return 2;
            case EquationKind::PainleveII: return 1;
            case EquationKind::ToyModel: return std::nullopt;
        }
        return std::nullopt;
    }

    constexpr int ode_order() const { return kind_ == EquationKind::ToyModel ? 1 : 2; }

    constexpr bool operator==(const Equation&) const = default;

private:
    EquationKind kind_;
};

const char* to_string(EquationKind kind);
const char* to_string(Direction direction);

/// Initial data at t = 0. For the toy model only y0 is used.
struct InitialData {
    double y0 = 0.0;
    double slope0 = 0.0;
    double t_start = 0.0;
};

/// A point on the integration path. For the toy model `yp` holds y'(t)
/// evaluated from the equation, which is what the maxima counter reads.
struct State {
    cplx t;
    cplx y;
    cplx yp;
};

struct EnergyValue {
    double h = 0.0;
    double i_of_x = 0.0;
};

/// y'' for P-I and P-II, y' for the toy model. `yp` is accepted for interface
/// uniformity and is not read by any of the three systems.
cplx rhs(const Equation& eq, cplx t, cplx y, cplx yp = {});

/// Derivative of rhs along a trajectory, d/dt rhs(t, y(t)). Used by the
/// corrected-trapezoid quadrature of the fluctuation integral.
cplx rhs_derivative(const Equation& eq, cplx t, cplx y, cplx yp);

/// +-sqrt(-t/6) for P-I, +-sqrt(-t/2) for P-II. Requires t < 0.
double asymptotic_branch(const Equation& eq, double t, Branch sign);

/// H = yp^2/2 - 2 y^3 (P-I) or yp^2/2 - y^4/2 (P-II).
double energy(const Equation& eq, double y, double yp);

struct Trajectory;

/// Cumulative I(x) = int_0^x t y'(t) dt (P-I) or int_0^x t y y' dt (P-II)
/// along the trajectory's path, including detour arcs. One entry per real-axis
/// sample, in sample order.
std::vector<double> fluctuation_integral(const Equation& eq, const Trajectory& traj);

/// H(x) and I(x) at every real-axis sample of the trajectory.
std::vector<EnergyValue> energy_profile(const Equation& eq, const Trajectory& traj);

}  // namespace painleve
