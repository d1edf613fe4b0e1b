#pragma once

#include <stdexcept>
#include <string>

namespace qbc {

// Base class for all library-specific failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A boundary unitary has an eigenvalue at -1 and therefore no Cayley preimage.
class SingularBoundaryCondition : public Error {
public:
    explicit SingularBoundaryCondition(const std::string& what) : Error(what) {}
};

// A boundary vector violates the constraint set of a singular boundary condition.
class ConstraintViolation : public Error {
public:
    explicit ConstraintViolation(const std::string& what) : Error(what) {}
};

// A secular-equation root bracket failed to refine below tolerance.
class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

// A state grid is too coarse to resolve the spectral basis paired with it.
class ResolutionMismatch : public Error {
public:
    explicit ResolutionMismatch(const std::string& what) : Error(what) {}
};

// Boundary condition not expressible in the finite-difference stencil encoding.
class UnsupportedBoundaryCondition : public Error {
public:
    explicit UnsupportedBoundaryCondition(const std::string& what) : Error(what) {}
};

} // namespace qbc
