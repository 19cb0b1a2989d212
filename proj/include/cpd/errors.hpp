#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpd {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDomain : Error {
    explicit InvalidDomain(const std::string& what) : Error("invalid domain: " + what) {}
};

struct DuplicateSites : Error {
    DuplicateSites(std::size_t i, std::size_t j)
        : Error("duplicate sites: generators " + std::to_string(i) + " and " + std::to_string(j) +
                " coincide within tolerance"),
          first(i), second(j) {}
    std::size_t first;
    std::size_t second;
};

struct InvalidMeasure : Error {
    explicit InvalidMeasure(const std::string& what) : Error("invalid measure: " + what) {}
};

struct NoConvergence : Error {
    NoConvergence(std::size_t iterations_, double residual_)
        : Error("no convergence after " + std::to_string(iterations_) +
                " iterations, residual " + std::to_string(residual_)),
          iterations(iterations_), residual(residual_) {}
    std::size_t iterations;
    double residual;
};

struct EmptyCell : Error {
    explicit EmptyCell(std::size_t index_)
        : Error("cell " + std::to_string(index_) + " is empty"), index(index_) {}
    std::size_t index;
};

struct AllCellsEmpty : Error {
    AllCellsEmpty() : Error("all power cells are empty") {}
};

struct NumericalRegression : Error {
    NumericalRegression(std::size_t iteration_, double delta_)
        : Error("energy increased at iteration " + std::to_string(iteration_) + " by " +
                std::to_string(delta_)),
          iteration(iteration_), delta(delta_) {}
    std::size_t iteration;
    double delta;
};

struct MassMismatch : Error {
    MassMismatch(double lhs_, double rhs_)
        : Error("total masses differ: " + std::to_string(lhs_) + " vs " + std::to_string(rhs_)),
          lhs(lhs_), rhs(rhs_) {}
    double lhs;
    double rhs;
};

struct InfeasibleScale : Error {
    explicit InfeasibleScale(const std::string& what) : Error("problem too large: " + what) {}
};

struct EmptyInterval : Error {
    EmptyInterval() : Error("cell-count interval contains no positive integer") {}
};

struct QuadratureSingularity : Error {
    QuadratureSingularity() : Error("quadrature node coincides with a singular point") {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("bad configuration: " + what) {}
};

}  // namespace cpd
