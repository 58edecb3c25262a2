#include "pradius/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pradius {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& rows, const std::string& label) {
    if (!rows.is_array() || rows.empty()) {
        throw std::invalid_argument(label + ": expected a non-empty array of rows");
    }
    const std::size_t n_rows = rows.size();
    std::size_t n_cols = 0;
    Matrix out;
    for (std::size_t r = 0; r < n_rows; ++r) {
        const json& row = rows[r];
        if (!row.is_array() || row.empty()) {
            throw std::invalid_argument(label + " row " + std::to_string(r) +
                                        ": expected a non-empty array of numbers");
        }
        if (r == 0) {
            n_cols = row.size();
            out.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
        } else if (row.size() != n_cols) {
            throw std::invalid_argument(label + " row " + std::to_string(r) + " has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(n_cols) + " (ragged array)");
        }
        for (std::size_t c = 0; c < n_cols; ++c) {
            const json& cell = row[c];
            if (!cell.is_number()) {
                throw std::invalid_argument(label + " row " + std::to_string(r) + " entry " +
                                            std::to_string(c) + ": not a number");
            }
            const double v = cell.get<double>();
            if (!std::isfinite(v)) {
                throw std::invalid_argument(label + " row " + std::to_string(r) + " entry " +
                                            std::to_string(c) + ": not finite");
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return out;
}

}  // namespace

MarkovModel ProblemFile::model() const {
    if (!transition) throw std::invalid_argument("problem has no transition matrix");
    return MarkovModel(family(), *transition);
}

ProblemFile parse_problem(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("problem file: JSON syntax error at byte " +
                                    std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("problem file: top level must be an object");

    ProblemFile out;

    if (!doc.contains("matrices")) {
        throw std::invalid_argument("problem file: missing required field 'matrices'");
    }
    const json& mats = doc["matrices"];
    if (!mats.is_array() || mats.empty()) {
        throw std::invalid_argument("problem file: 'matrices' must be a non-empty array");
    }
    for (std::size_t i = 0; i < mats.size(); ++i) {
        Matrix m = parse_matrix(mats[i], "matrices[" + std::to_string(i) + "]");
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("matrices[" + std::to_string(i) + "] is " +
                                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                        ", expected square");
        }
        if (i > 0 && m.rows() != out.matrices.front().rows()) {
            throw std::invalid_argument("matrices[" + std::to_string(i) + "] has dimension " +
                                        std::to_string(m.rows()) + ", expected " +
                                        std::to_string(out.matrices.front().rows()));
        }
        out.matrices.push_back(std::move(m));
    }

    if (doc.contains("transition")) {
        Matrix q = parse_matrix(doc["transition"], "transition");
        const int N = static_cast<int>(out.matrices.size());
        if (q.rows() != N || q.cols() != N) {
            throw std::invalid_argument("transition is " + std::to_string(q.rows()) + "x" +
                                        std::to_string(q.cols()) + ", expected " +
                                        std::to_string(N) + "x" + std::to_string(N));
        }
        for (int r = 0; r < N; ++r) {
            double sum = 0.0;
            for (int c = 0; c < N; ++c) {
                if (q(r, c) < 0.0 || q(r, c) > 1.0) {
                    throw std::invalid_argument("transition row " + std::to_string(r) + " entry " +
                                                std::to_string(c) + " outside [0, 1]");
                }
                sum += q(r, c);
            }
            if (std::abs(sum - 1.0) > 1e-12) {
                throw std::invalid_argument("transition row " + std::to_string(r) + " sums to " +
                                            std::to_string(sum) + ", expected 1 (non-stochastic)");
            }
        }
        out.transition = std::move(q);
    }

    if (doc.contains("p")) {
        const json& p = doc["p"];
        if (!p.is_number_integer() || p.get<long long>() < 1) {
            throw std::invalid_argument("problem file: 'p' must be a positive integer");
        }
        out.p = p.get<int>();
    }

    if (doc.contains("metadata")) {
        const json& meta = doc["metadata"];
        if (!meta.is_object()) {
            throw std::invalid_argument("problem file: 'metadata' must be an object");
        }
        for (const auto& [key, value] : meta.items()) {
            if (!value.is_string()) {
                throw std::invalid_argument("problem file: metadata['" + key +
                                            "'] must be a string label");
            }
            out.metadata[key] = value.get<std::string>();
        }
    }

    return out;
}

ProblemFile load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open problem file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_problem(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

std::string serialize_problem(const ProblemFile& problem) {
    json doc;
    json mats = json::array();
    for (const Matrix& m : problem.matrices) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    doc["matrices"] = std::move(mats);
    if (problem.transition) {
        const Matrix& q = *problem.transition;
        json rows = json::array();
        for (Eigen::Index r = 0; r < q.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < q.cols(); ++c) row.push_back(q(r, c));
            rows.push_back(std::move(row));
        }
        doc["transition"] = std::move(rows);
    }
    doc["p"] = problem.p;
    if (!problem.metadata.empty()) {
        json meta = json::object();
        for (const auto& [k, v] : problem.metadata) meta[k] = v;
        doc["metadata"] = std::move(meta);
    }
    return doc.dump(2) + "\n";
}

}  // namespace pradius
