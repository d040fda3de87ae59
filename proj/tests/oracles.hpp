#pragma once

// Test-only oracles, independent of the library's own numerical paths:
// a doubling composite-Simpson integrator (the library uses recursive
// adaptive Simpson) and exhaustive vertex enumeration for small transport
// problems (the library uses network simplex).

#include <cstddef>
#include <functional>
#include <vector>

namespace orc {

/// Composite Simpson with interval doubling until successive refinements
/// agree within abs_tol. `splits` lists interior kinks of the integrand;
/// each smooth piece is integrated separately.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-11, const std::vector<double>& splits = {});

/// Nested 2-D version over [ax, bx] x [ay, by]. `inner_split` maps the outer
/// coordinate to a kink location of the inner integrand (or any value; points
/// outside the inner range are ignored).
double integrate2d(const std::function<double(double, double)>& f, double ax, double bx,
                   double ay, double by, double abs_tol = 1e-9,
                   const std::function<double(double)>& inner_split = {});

struct TransportVertexResult {
    double best_objective;
    std::vector<double> best_plan; // row-major
};

/// Enumerates every basic feasible solution (spanning-tree bases) of the
/// transportation polytope and returns the optimum. Feasible only for tiny
/// problems; intended for 3x3 and 4x4 oracles.
TransportVertexResult enumerate_transport_vertices(const std::vector<double>& supply,
                                                   const std::vector<double>& demand,
                                                   const std::vector<double>& cost,
                                                   bool maximize = false);

} // namespace orc
