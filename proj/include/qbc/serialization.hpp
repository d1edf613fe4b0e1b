#pragma once

// Boundary-condition input/output records.
//
// Two JSON forms are accepted everywhere a boundary condition is an input:
//   matrix form:  { "re": [[..,..],[..,..]], "im": [[..,..],[..,..]] }  (row-major)
//   named form:   { "family": "robin", "alpha": 1.5707963267948966 }
// Families: dirichlet, neumann, robin, mixed, pseudoperiodic.
//
// The CLI additionally takes the compact spec strings
//   dirichlet | neumann | robin:<alpha> | mixed:<alpha>
//   | pseudoperiodic:<alpha> | matrix:<path-to-json>

#include <string>

#include <json.hpp>

#include "qbc/bc_algebra.hpp"

namespace qbc {

nlohmann::json bc_to_json(const BoundaryCondition& bc);

// Throws std::invalid_argument on malformed records (including non-unitary
// matrices in the matrix form).
BoundaryCondition bc_from_json(const nlohmann::json& j);

// Parses the compact CLI form; matrix:<path> loads a JSON record from disk.
BoundaryCondition bc_from_spec_string(const std::string& spec);

} // namespace qbc
