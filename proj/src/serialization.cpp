#include "qbc/serialization.hpp"

#include <fstream>

namespace qbc {

using nlohmann::json;

json bc_to_json(const BoundaryCondition& bc) {
    const Mat2& u = bc.matrix();
    return json{
        {"re", {{u.m00.real(), u.m01.real()}, {u.m10.real(), u.m11.real()}}},
        {"im", {{u.m00.imag(), u.m01.imag()}, {u.m10.imag(), u.m11.imag()}}},
    };
}

namespace {

Family family_from_name(const std::string& name) {
    if (name == "dirichlet") return Family::Dirichlet;
    if (name == "neumann") return Family::Neumann;
    if (name == "robin") return Family::Robin;
    if (name == "mixed") return Family::MixedDirichletRobin;
    if (name == "pseudoperiodic") return Family::PseudoPeriodic;
    throw std::invalid_argument("unknown boundary-condition family: " + name);
}

double grid_entry(const json& rows, int i, int j) {
    if (!rows.is_array() || rows.size() != 2 || !rows[i].is_array() || rows[i].size() != 2 ||
        !rows[i][j].is_number()) {
        throw std::invalid_argument("matrix record must be a 2x2 numeric array");
    }
    return rows[i][j].get<double>();
}

} // namespace

BoundaryCondition bc_from_json(const json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("boundary-condition record must be a JSON object");
    }
    if (j.contains("family")) {
        const std::string name = j.at("family").get<std::string>();
        const Family family = family_from_name(name);
        double alpha = 0.0;
        if (j.contains("alpha")) {
            if (!j.at("alpha").is_number()) {
                throw std::invalid_argument("alpha must be a number");
            }
            alpha = j.at("alpha").get<double>();
        } else if (family != Family::Dirichlet && family != Family::Neumann) {
            throw std::invalid_argument("family '" + name + "' requires an alpha");
        }
        return make_named(family, alpha);
    }
    if (j.contains("re") && j.contains("im")) {
        const json& re = j.at("re");
        const json& im = j.at("im");
        Mat2 u{Complex{grid_entry(re, 0, 0), grid_entry(im, 0, 0)},
               Complex{grid_entry(re, 0, 1), grid_entry(im, 0, 1)},
               Complex{grid_entry(re, 1, 0), grid_entry(im, 1, 0)},
               Complex{grid_entry(re, 1, 1), grid_entry(im, 1, 1)}};
        return BoundaryCondition{u}; // throws if not unitary
    }
    throw std::invalid_argument("boundary-condition record needs 'family' or 're'+'im'");
}

BoundaryCondition bc_from_spec_string(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const bool has_arg = colon != std::string::npos;
    const std::string arg = has_arg ? spec.substr(colon + 1) : std::string{};

    if (head == "matrix") {
        if (!has_arg || arg.empty()) {
            throw std::invalid_argument("matrix form needs a file path: matrix:<path>");
        }
        std::ifstream in(arg);
        if (!in) {
            throw std::invalid_argument("cannot open boundary-condition file: " + arg);
        }
        json j;
        in >> j;
        return bc_from_json(j);
    }

    const Family family = family_from_name(head);
    if (family == Family::Dirichlet || family == Family::Neumann) {
        if (has_arg) {
            throw std::invalid_argument(head + " takes no parameter");
        }
        return make_named(family);
    }
    if (!has_arg || arg.empty()) {
        throw std::invalid_argument(head + " needs an angle: " + head + ":<alpha>");
    }
    std::size_t used = 0;
    double alpha = 0.0;
    try {
        alpha = std::stod(arg, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad angle in boundary-condition spec: " + spec);
    }
    if (used != arg.size()) {
        throw std::invalid_argument("bad angle in boundary-condition spec: " + spec);
    }
    return make_named(family, alpha);
}

} // namespace qbc
