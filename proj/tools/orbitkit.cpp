// orbitkit: normal-operator orbit analysis on JSON/CSV inputs.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 domain error (the error
// code is included in the report). Reports are deterministic byte for byte.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbitkit/io.hpp"
#include "orbitkit/orbitkit.hpp"

namespace ok = orbitkit;
using nlohmann::json;

namespace {

// 12 significant digits with trailing zeros kept, e.g. 5 -> "5.00000000000"
std::string sig12f(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.12g", v);
    std::string s = buf;
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

double r12(double v) { return ok::io::round12(v); }

ok::Matrix load_matrix(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream f(path);
        if (!f) throw ok::domain_error("IoError", "cannot open " + path);
        std::ostringstream buf;
        buf << f.rdbuf();
        return ok::io::matrix_from_csv(buf.str());
    }
    return ok::io::matrix_from_json(ok::io::load_json(path));
}

ok::SpectralProfile load_profile(const std::string& path) {
    return ok::io::profile_from_json(ok::io::load_json(path));
}

ok::ProjectionFamily load_family(const std::string& path) {
    json j = ok::io::load_json(path);
    ok::ProjectionFamily fam;
    fam.dim = j.at("dim").get<std::size_t>();
    for (const auto& b : j.at("blocks")) fam.blocks.push_back(b.get<std::vector<std::size_t>>());
    return fam;
}

struct Output {
    std::string path;   // empty = stdout
    std::string format; // "json" or "csv"

    void emit(const json& report, const std::string& csv) const {
        const std::string text = format == "csv" ? csv : report.dump(2) + "\n";
        if (path.empty())
            std::cout << text;
        else
            ok::io::write_text(path, text);
    }
};

json verdict_json(const ok::OrbitVerdict& v) {
    return json{{"same_unitary_orbit", v.same_unitary_orbit},
                {"in_unitary_orbit_closure", v.in_unitary_orbit_closure},
                {"same_groupoid_orbit", v.same_groupoid_orbit},
                {"in_groupoid_orbit_closure", v.in_groupoid_orbit_closure},
                {"reasons", v.reasons}};
}

json values_json(const std::vector<double>& s) {
    json a = json::array();
    for (double v : s) a.push_back(r12(v));
    return a;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbitkit: computational analysis of normal operators under "
                 "unitary and partial-isometry conjugation"};
    app.require_subcommand(1);

    std::string spec_text = "op";
    double eps = 0.0, tol = 1e-9;
    std::size_t n_flag = 0, m_flag = 0, dim_flag = 0;
    Output out{"", "json"};
    std::vector<std::string> files;

    auto add_common = [&](CLI::App* sub, int nfiles, const char* file_desc) {
        if (nfiles > 0)
            sub->add_option("files", files, file_desc)->expected(nfiles)->required();
        sub->add_option("--spec", spec_text, "norm spec: op|trace|schatten:p|kyfan:k|ratio:r1,r2,..|ratio:@file");
        sub->add_option("--eps", eps, "partition / intertwiner cell size");
        sub->add_option("--n", n_flag, "index parameter");
        sub->add_option("--m", m_flag, "rank / sweep parameter");
        sub->add_option("--dim", dim_flag, "ambient dimension");
        sub->add_option("--tol", tol, "numeric tolerance");
        sub->add_option("--out", out.path, "output path (default stdout)");
        sub->add_option("--format", out.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* c_norm = app.add_subcommand("norm", "symmetric norm of a matrix");
    add_common(c_norm, 1, "matrix file");
    CLI::App* c_major = app.add_subcommand("majorize", "Ky Fan partial-sum dominance s(x) vs s(y)");
    add_common(c_major, 2, "matrix files x y");
    CLI::App* c_expect = app.add_subcommand("expectation", "block conditional expectation E(x)");
    add_common(c_expect, 2, "matrix file, family file");
    CLI::App* c_solve = app.add_subcommand("commutator-solve", "solve xa - ax = y on Ker E");
    add_common(c_solve, 3, "profile file, family file, y matrix file");
    CLI::App* c_wit = app.add_subcommand("witnesses", "rank-two closed-range witnesses");
    add_common(c_wit, 1, "profile file");
    CLI::App* c_tan = app.add_subcommand("tangent", "tangent-space split at a partial isometry");
    add_common(c_tan, 2, "profile file, v0 matrix file");
    CLI::App* c_verd = app.add_subcommand("verdict", "orbit and orbit-closure relations");
    add_common(c_verd, 2, "profile files a b");
    CLI::App* c_part = app.add_subcommand("partition", "epsilon-partition of the point spectrum");
    add_common(c_part, 1, "profile file");
    CLI::App* c_inter = app.add_subcommand("intertwine", "certified approximate intertwiner");
    add_common(c_inter, 2, "profile files a b");
    CLI::App* c_approx = app.add_subcommand("approx-seq", "finite-rank unitary approximant");
    add_common(c_approx, 2, "profile files a b");
    CLI::App* c_proj = app.add_subcommand("projector", "Lagrange spectral projector f_j(x)");
    add_common(c_proj, 2, "profile file, x matrix file");
    CLI::App* c_disc = app.add_subcommand("demo-isclosed", "escape-from-the-orbit sequence");
    add_common(c_disc, 0, "");
    c_disc->add_option("files", files, "optional eigenvalue file (JSON array)")->expected(0, 1);
    CLI::App* c_dnon = app.add_subcommand("demo-nonseparable", "ratio-norm non-separability demo");
    add_common(c_dnon, 0, "");
    CLI::App* c_dshift = app.add_subcommand("demo-shift", "shift vs cycle topology demo");
    add_common(c_dshift, 0, "");
    c_dshift->add_option("files", files, "optional eigenvalue file (JSON array)")->expected(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto eig_list = [&](std::size_t def_n, bool dyadic) {
        std::vector<double> eigs;
        if (!files.empty()) {
            json j = ok::io::load_json(files[0]);
            eigs = j.get<std::vector<double>>();
        } else {
            const std::size_t N = dim_flag ? dim_flag : def_n;
            for (std::size_t k = 1; k <= N; ++k)
                eigs.push_back(dyadic ? std::pow(2.0, -double(k)) : 1.0 / double(k));
        }
        return eigs;
    };

    try {
        if (*c_norm) {
            ok::Matrix x = load_matrix(files[0]);
            ok::NormSpec spec = ok::io::parse_norm_spec(spec_text);
            std::vector<double> s = ok::svd(x).singular_values;
            const double v = ok::ideal_norm(s, spec);
            json rep{{"value", r12(v)},
                     {"formatted", sig12f(v)},
                     {"singular_values", values_json(s)},
                     {"spec", ok::io::norm_spec_to_json(spec)}};
            std::ostringstream csv;
            csv << sig12f(v) << "\n";
            out.emit(rep, csv.str());
        } else if (*c_major) {
            std::vector<double> sx = ok::svd(load_matrix(files[0])).singular_values;
            std::vector<double> sy = ok::svd(load_matrix(files[1])).singular_values;
            ok::MajorizationReport r = ok::ky_fan_majorizes(sx, sy);
            json rep{{"dominated", r.dominated},
                     {"partial_sums_x", values_json(r.partial_sums_x)},
                     {"partial_sums_y", values_json(r.partial_sums_y)}};
            if (r.first_violation) rep["first_violation"] = *r.first_violation;
            std::ostringstream csv;
            for (std::size_t i = 0; i < r.partial_sums_x.size(); ++i)
                csv << i + 1 << ',' << sig12f(r.partial_sums_x[i]) << ','
                    << sig12f(r.partial_sums_y[i]) << "\n";
            out.emit(rep, csv.str());
        } else if (*c_expect) {
            ok::Matrix x = load_matrix(files[0]);
            ok::ProjectionFamily fam = load_family(files[1]);
            ok::Matrix e = ok::conditional_expectation(x, fam);
            out.emit(ok::io::matrix_to_json(e), ok::io::matrix_to_csv(e));
        } else if (*c_solve) {
            ok::SpectralProfile p = load_profile(files[0]);
            ok::ProjectionFamily fam = load_family(files[1]);
            ok::Matrix y = load_matrix(files[2]);
            ok::Matrix x = ok::solve_commutator(p, fam, y);
            out.emit(ok::io::matrix_to_json(x), ok::io::matrix_to_csv(x));
        } else if (*c_wit) {
            auto ws = ok::closed_range_witnesses(load_profile(files[0]));
            json arr = json::array();
            std::ostringstream csv;
            for (const auto& w : ws) {
                arr.push_back({{"index_lo", w.index_lo},
                               {"index_hi", w.index_hi},
                               {"gap", r12(w.gap)},
                               {"witness_norm_lower", r12(w.witness_norm_lower)},
                               {"commutator_norm", r12(w.commutator_norm)},
                               {"ratio", r12(w.ratio)}});
                csv << w.index_lo << ',' << w.index_hi << ',' << sig12f(w.gap) << ','
                    << sig12f(w.ratio) << "\n";
            }
            out.emit(json{{"witnesses", arr}}, csv.str());
        } else if (*c_tan) {
            ok::SpectralProfile p = load_profile(files[0]);
            ok::Matrix v0 = load_matrix(files[1]);
            ok::TangentSplit t = ok::tangent_split(p, v0);
            json rep{{"dim_total", t.dim_total},
                     {"dim_isotropy", t.dim_isotropy},
                     {"dim_complement", t.dim_complement},
                     {"range_dim", t.range_dim}};
            std::ostringstream csv;
            csv << t.dim_total << ',' << t.dim_isotropy << ',' << t.dim_complement << ','
                << t.range_dim << "\n";
            out.emit(rep, csv.str());
        } else if (*c_verd) {
            ok::OrbitVerdict v = ok::orbit_verdict(load_profile(files[0]), load_profile(files[1]));
            std::ostringstream csv;
            csv << v.same_unitary_orbit << ',' << v.in_unitary_orbit_closure << ','
                << v.same_groupoid_orbit << ',' << v.in_groupoid_orbit_closure << "\n";
            out.emit(verdict_json(v), csv.str());
        } else if (*c_part) {
            ok::PartitionCells cells = ok::epsilon_partition(load_profile(files[0]), eps);
            json arr = json::array();
            std::ostringstream csv;
            for (const auto& c : cells.cells) {
                arr.push_back({{"center", ok::io::complex_to_json(c.center)},
                               {"members", c.members}});
                csv << sig12f(c.center.real()) << ',' << sig12f(c.center.imag()) << ','
                    << c.members.size() << "\n";
            }
            out.emit(json{{"diameter_bound", r12(cells.diameter_bound)}, {"cells", arr}},
                     csv.str());
        } else if (*c_inter) {
            ok::SpectralProfile a = load_profile(files[0]);
            ok::SpectralProfile b = load_profile(files[1]);
            std::size_t dim = dim_flag;
            if (dim == 0) {
                long need = a.total_multiplicity() + (a.infinite_kernel() ? 1 : a.kernel_dim);
                long needb = b.total_multiplicity() + (b.infinite_kernel() ? 1 : b.kernel_dim);
                dim = std::size_t(std::max(need, needb));
            }
            ok::PartialIsometryCert cert = ok::construct_intertwiner(a, b, eps, dim);
            json rep{{"epsilon", r12(cert.epsilon)},
                     {"certified_bound", r12(cert.certified_bound)},
                     {"achieved_error", r12(cert.achieved_error)},
                     {"v", ok::io::matrix_to_json(cert.v)},
                     {"initial_proj", ok::io::matrix_to_json(cert.initial_proj)},
                     {"final_proj", ok::io::matrix_to_json(cert.final_proj)}};
            out.emit(rep, ok::io::matrix_to_csv(cert.v));
        } else if (*c_approx) {
            ok::SpectralProfile a = load_profile(files[0]);
            ok::SpectralProfile b = load_profile(files[1]);
            ok::NormSpec spec = ok::io::parse_norm_spec(spec_text);
            std::size_t dim = dim_flag;
            if (dim == 0) {
                long need = a.total_multiplicity() + (a.infinite_kernel() ? 1 : a.kernel_dim);
                long needb = b.total_multiplicity() + (b.infinite_kernel() ? 1 : b.kernel_dim);
                dim = std::size_t(std::max(need, needb));
            }
            ok::ApproxUnitary u = ok::finite_rank_unitary_sequence(a, b, m_flag, dim);
            json rep{{"m", m_flag},
                     {"error", r12(u.error_in(spec))},
                     {"guarantee", r12(u.guarantee_in(spec))},
                     {"u", ok::io::matrix_to_json(u.u)}};
            std::ostringstream csv;
            csv << m_flag << ',' << sig12f(u.error_in(spec)) << ','
                << sig12f(u.guarantee_in(spec)) << "\n";
            out.emit(rep, csv.str());
        } else if (*c_proj) {
            ok::SpectralProfile p = load_profile(files[0]);
            ok::Matrix x = load_matrix(files[1]);
            ok::Matrix f = ok::lagrange_spectral_projector(p, n_flag, x);
            out.emit(ok::io::matrix_to_json(f), ok::io::matrix_to_csv(f));
        } else if (*c_disc) {
            std::vector<double> eigs = eig_list(12, /*dyadic=*/true);
            ok::NormSpec spec = ok::io::parse_norm_spec(spec_text == "op" ? "trace" : spec_text);
            json arr = json::array();
            std::ostringstream csv;
            const std::size_t lo = n_flag ? n_flag : 1;
            const std::size_t hi = n_flag ? n_flag : eigs.size() - 1;
            for (std::size_t n = lo; n <= hi; ++n) {
                ok::EscapeReport r = ok::isclosed_escape(eigs, spec, n);
                arr.push_back({{"n", r.n},
                               {"distance", r12(r.distance)},
                               {"bound", r12(r.bound)},
                               {"limit_outside_orbit", r.limit_outside_orbit},
                               {"kernel_dim_orbit", r.kernel_dim_orbit},
                               {"kernel_dim_limit", r.kernel_dim_limit}});
                csv << r.n << ',' << sig12f(r.distance) << ',' << sig12f(r.bound) << "\n";
            }
            out.emit(json{{"reports", arr}}, csv.str());
        } else if (*c_dnon) {
            const std::size_t N = dim_flag ? dim_flag : 64;
            ok::NormSpec spec = [&] {
                if (spec_text != "op") return ok::io::parse_norm_spec(spec_text);
                std::vector<double> ref; // default: harmonic reference
                for (std::size_t k = 1; k <= 2 * N; ++k) ref.push_back(1.0 / double(k));
                return ok::NormSpec::ratio(std::move(ref));
            }();
            const std::size_t m_max = m_flag ? m_flag : 32;
            ok::NonseparableReport r = ok::nonseparable_demo(spec, N, m_max);
            json rep{{"N", r.N},
                     {"partial_ratio_a", values_json(r.partial_ratio_a)},
                     {"partial_ratio_b", values_json(r.partial_ratio_b)},
                     {"partial_ratio_diff", values_json(r.partial_ratio_diff)},
                     {"residual_norm_by_m", values_json(r.residual_norm_by_m)},
                     {"same_unitary_orbit", r.same_unitary_orbit}};
            std::ostringstream csv;
            for (std::size_t m = 1; m <= r.residual_norm_by_m.size(); ++m)
                csv << m << ',' << sig12f(r.residual_norm_by_m[m - 1]) << "\n";
            out.emit(rep, csv.str());
        } else if (*c_dshift) {
            std::vector<double> eigs = eig_list(16, /*dyadic=*/false);
            const std::size_t n = n_flag ? n_flag : 2;
            const std::size_t rk = m_flag ? m_flag : 2;
            ok::ShiftTopologyReport r = ok::shift_topology_demo(eigs, n, rk);
            json rep{{"n", r.n},
                     {"dim", r.dim},
                     {"block_rank", r.block_rank},
                     {"norm_diff", r12(r.norm_diff)},
                     {"bound", r12(r.bound)},
                     {"ww_defect", r12(r.ww_defect)},
                     {"w_distance", r12(r.w_distance)},
                     {"shift_initial_defect", r12(r.shift_initial_defect)},
                     {"conjugation_defect", r12(r.conjugation_defect)},
                     {"cycle_same_unitary_orbit", r.cycle_same_unitary_orbit},
                     {"spectrum_truncation_defect", r12(r.spectrum_truncation_defect)}};
            std::ostringstream csv;
            csv << r.n << ',' << sig12f(r.norm_diff) << ',' << sig12f(r.bound) << "\n";
            out.emit(rep, csv.str());
        }
    } catch (const ok::domain_error& e) {
        const std::string code = e.code();
        json rep{{"error", code}, {"message", e.what()}};
        const std::string text = rep.dump(2) + "\n";
        if (out.path.empty())
            std::cout << text;
        else
            std::ofstream(out.path) << text;
        const bool operational = code == "IoError" || code == "ParseError";
        return operational ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
