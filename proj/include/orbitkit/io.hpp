#ifndef ORBITKIT_IO_HPP
#define ORBITKIT_IO_HPP

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/norms.hpp"
#include "orbitkit/spectral.hpp"

namespace orbitkit {
namespace io {

using nlohmann::json;

/// Formats v with 12 significant digits; deterministic across platforms for
/// the report contract.
inline std::string sig12(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Rounds to 12 significant digits so serialized doubles match sig12 output.
inline double round12(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
    std::istringstream in(sig12(v));
    double r = v;
    in >> r;
    return r;
}

inline json complex_to_json(const cplx& z) {
    return json{{"re", round12(z.real())}, {"im", round12(z.imag())}};
}

inline cplx complex_from_json(const json& j) {
    return {j.at("re").get<double>(), j.value("im", 0.0)};
}

// ---- SpectralProfile ----

inline json profile_to_json(const SpectralProfile& p) {
    json eigs = json::array();
    for (const auto& e : p.eigenvalues)
        eigs.push_back({{"re", round12(e.value.real())},
                        {"im", round12(e.value.imag())},
                        {"mult", e.multiplicity}});
    json j;
    j["eigenvalues"] = std::move(eigs);
    if (p.infinite_kernel())
        j["kernel_dim"] = "inf";
    else
        j["kernel_dim"] = p.kernel_dim;
    json ess = json::array();
    for (const cplx& z : p.essential_points) ess.push_back(complex_to_json(z));
    j["essential_points"] = std::move(ess);
    j["tail_bound"] = round12(p.tail_bound);
    j["compact"] = p.compact;
    return j;
}

inline SpectralProfile profile_from_json(const json& j) {
    SpectralProfile p;
    for (const auto& e : j.at("eigenvalues")) {
        EigenvalueEntry ent;
        ent.value = {e.at("re").get<double>(), e.value("im", 0.0)};
        ent.multiplicity = e.value("mult", 1L);
        p.eigenvalues.push_back(ent);
    }
    if (j.contains("kernel_dim")) {
        const json& k = j.at("kernel_dim");
        if (k.is_string()) {
            const std::string s = k.get<std::string>();
            if (s != "inf" && s != "INFINITE")
                throw domain_error("ParseError", "kernel_dim must be an integer or \"inf\"");
            p.kernel_dim = kInfiniteDim;
        } else {
            p.kernel_dim = k.get<long>();
        }
    }
    if (j.contains("essential_points"))
        for (const auto& e : j.at("essential_points")) p.essential_points.push_back(complex_from_json(e));
    p.tail_bound = j.value("tail_bound", 0.0);
    p.compact = j.value("compact", false);
    validate_profile(p);
    return p;
}

// ---- Matrix ----

inline json matrix_to_json(const Matrix& m) {
    const std::size_t n = m.dim();
    json re = json::array(), im = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json rrow = json::array(), irow = json::array();
        for (std::size_t j = 0; j < n; ++j) {
            rrow.push_back(round12(m(i, j).real()));
            irow.push_back(round12(m(i, j).imag()));
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return json{{"dim", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const json& j) {
    const std::size_t n = j.at("dim").get<std::size_t>();
    Matrix m(n);
    const json& re = j.at("re");
    const json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (re.size() != n || (im && im->size() != n))
        throw domain_error("ParseError", "matrix rows do not match dim");
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != n || (im && (*im)[i].size() != n))
            throw domain_error("ParseError", "matrix columns do not match dim");
        for (std::size_t k = 0; k < n; ++k)
            m(i, k) = {re[i][k].get<double>(), im ? (*im)[i][k].get<double>() : 0.0};
    }
    if (!m.all_finite()) throw domain_error("NonFiniteInput", "matrix has NaN or Inf entries");
    return m;
}

/// CSV matrix: one row per matrix row, entries interleaved re,im.
inline std::string matrix_to_csv(const Matrix& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j) out << ',';
            out << sig12(m(i, j).real()) << ',' << sig12(m(i, j).imag());
        }
        out << '\n';
    }
    return out.str();
}

inline Matrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw domain_error("ParseError", "bad CSV number: " + cell);
            }
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != 2 * n)
            throw domain_error("ParseError", "CSV row length must be 2*dim (re,im pairs)");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = {rows[i][2 * j], rows[i][2 * j + 1]};
    }
    if (!m.all_finite()) throw domain_error("NonFiniteInput", "matrix has NaN or Inf entries");
    return m;
}

// ---- NormSpec ----

/// Parses "op" | "operator" | "schatten:<p>" | "kyfan:<k>" | "trace" |
/// "ratio:<r1,r2,...>" | "ratio:@<file>" (file: one value per line or CSV).
inline NormSpec parse_norm_spec(const std::string& text) {
    const std::size_t colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "op" || kind == "operator") return NormSpec::operator_norm();
    if (kind == "trace") return NormSpec::trace();
    if (kind == "schatten") {
        try {
            return NormSpec::schatten(std::stod(arg));
        } catch (const domain_error&) {
            throw;
        } catch (const std::exception&) {
            throw domain_error("ParseError", "schatten needs a numeric exponent");
        }
    }
    if (kind == "kyfan") {
        try {
            return NormSpec::ky_fan(std::stoul(arg));
        } catch (const domain_error&) {
            throw;
        } catch (const std::exception&) {
            throw domain_error("ParseError", "kyfan needs an integer order");
        }
    }
    if (kind == "ratio") {
        std::string data = arg;
        if (!arg.empty() && arg[0] == '@') {
            std::ifstream f(arg.substr(1));
            if (!f) throw domain_error("ParseError", "cannot open reference file " + arg.substr(1));
            std::ostringstream buf;
            buf << f.rdbuf();
            data = buf.str();
        }
        std::vector<double> ref;
        std::string cell;
        for (char c : data) {
            if (c == ',' || c == '\n' || c == '\r' || c == ' ' || c == '\t') {
                if (!cell.empty()) {
                    ref.push_back(std::stod(cell));
                    cell.clear();
                }
            } else {
                cell += c;
            }
        }
        if (!cell.empty()) ref.push_back(std::stod(cell));
        return NormSpec::ratio(std::move(ref));
    }
    throw domain_error("ParseError", "unknown norm spec kind: " + kind);
}

inline json norm_spec_to_json(const NormSpec& s) {
    json j;
    switch (s.kind) {
        case NormSpec::Kind::Operator: j["kind"] = "operator"; break;
        case NormSpec::Kind::Schatten: j["kind"] = "schatten"; j["p"] = s.p; break;
        case NormSpec::Kind::KyFan: j["kind"] = "kyfan"; j["k"] = s.k; break;
        case NormSpec::Kind::Trace: j["kind"] = "trace"; break;
        case NormSpec::Kind::Ratio:
            j["kind"] = "ratio";
            j["reference"] = s.reference;
            j["bi_normalizing"] = s.bi_normalizing();
            break;
    }
    return j;
}

// ---- files ----

inline json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw domain_error("IoError", "cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw domain_error("ParseError", std::string("bad JSON in ") + path + ": " + e.what());
    }
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw domain_error("IoError", "cannot write " + path);
    f << text;
}

} // namespace io
} // namespace orbitkit

#endif
