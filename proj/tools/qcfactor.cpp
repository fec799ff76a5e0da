// qcfactor: conversions, map construction, verification campaigns, and disk
// solves for div-form anisotropic semilinear problems.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 divergence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef QCF_HAVE_OPENMP
#include <omp.h>
#endif

#include "qcf/conformal.hpp"
#include "qcf/disk_solver.hpp"
#include "qcf/exact_solutions.hpp"
#include "qcf/qc_atlas.hpp"
#include "qcf/report_io.hpp"
#include "qcf/tensor_beltrami.hpp"
#include "qcf/verifier.hpp"

namespace {

using nlohmann::json;
using namespace qcf;

// "1/64" or "0.015625"; comma lists handled by the caller.
double parse_fraction(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_fraction(item));
    if (out.empty()) throw CLI::ValidationError("empty list: " + s);
    return out;
}

// Piecewise-linear profile from a two-column CSV (t,value).
std::function<double(double)> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open table " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '+' ||
                              line[0] == '.'))
            continue;  // header or blank
        std::stringstream ls(line);
        std::string a, b;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        pts.emplace_back(std::stod(a), std::stod(b));
    }
    if (pts.size() < 2) throw CLI::ValidationError("table needs at least two rows: " + path);
    std::sort(pts.begin(), pts.end());
    return [pts](double t) {
        if (t <= pts.front().first) return pts.front().second;
        if (t >= pts.back().first) return pts.back().second;
        auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(t, -1e300));
        auto lo = std::prev(it);
        const double w = (t - lo->first) / (it->first - lo->first);
        return (1.0 - w) * lo->second + w * it->second;
    };
}

// Mini-language: identity | spiral | const:<v> (tensor from real mu) |
// radial:<v> (volume-preserving radial, nu constant) | table:<path> (nu profile).
ConductivityTensor parse_tensor(const std::string& s) {
    if (s == "identity") return ConductivityTensor::identity();
    if (s == "spiral") return ConductivityTensor::log_spiral();
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
        const std::string head = s.substr(0, colon), arg = s.substr(colon + 1);
        if (head == "const") {
            const double mu = std::stod(arg);
            return ConductivityTensor(tensor_from_mu(Complex(mu, 0.0)));
        }
        if (head == "radial") {
            const double nu = std::stod(arg);
            const Complex k = volume_preserving_coefficient(nu, +1);
            return ConductivityTensor::radial([k](double) { return k; },
                                              ellipticity_constant(k));
        }
        if (head == "table") {
            auto nu = load_table(arg);
            double sup = 0.0;
            for (int i = 0; i <= 200; ++i) sup = std::max(sup, std::abs(nu(i / 200.0)));
            return ConductivityTensor::radial(
                [nu](double t) { return volume_preserving_coefficient(nu(t), +1); },
                ellipticity_constant(volume_preserving_coefficient(sup, +1)));
        }
    }
    throw CLI::ValidationError("unknown tensor spec: " + s);
}

void apply_thread_cap() {
#ifdef QCF_HAVE_OPENMP
    if (const char* env = std::getenv("QCFACTOR_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

struct VerifyCase {
    ScalarField u;
    ConductivityTensor A = ConductivityTensor::identity();
    Nonlinearity f = Nonlinearity::exp();
    GridSpec base;
};

int run_series(const std::string& command, const json& config, const std::string& id,
               const std::vector<double>& hs, double max_linf,
               const std::function<ResidualReport(double)>& runner, const std::string& out_json,
               const std::string& out_csv) {
    std::vector<ResidualReport> reports;
    for (double h : hs) reports.push_back(runner(h));

    std::optional<double> order;
    bool warning = false;
    if (reports.size() >= 3) {
        const auto est = convergence_order(reports);
        order = est.order;
        warning = est.warning;
    } else {
        warning = true;
        std::cerr << "warning: order estimate needs at least 3 grids\n";
    }

    bool pass = reports.back().linf <= max_linf;
    if (order) pass = pass && *order >= 1.8 && *order <= 2.2;

    json rep;
    rep["command"] = command;
    rep["config"] = config;
    rep["results"] = json::array();
    for (const auto& r : reports) {
        json jr = {{"id", id}, {"h", r.h}, {"linf", r.linf}, {"l2", r.l2}, {"pass", pass}};
        if (order) jr["order"] = *order;
        rep["results"].push_back(jr);
    }
    if (warning) rep["order_warning"] = true;

    std::cout << rep.dump(2) << '\n';
    if (!out_json.empty()) {
        std::ofstream os(out_json);
        os << rep.dump(2) << '\n';
    }
    if (!out_csv.empty()) write_residual_csv(out_csv, reports.back());

    for (const auto& r : reports)
        std::cout << id << " h=" << format_double(r.h) << " linf=" << format_double(r.linf)
                  << " l2=" << format_double(r.l2) << '\n';
    if (order)
        std::cout << "order=" << format_double(*order) << (warning ? " (warning)" : "") << '\n';
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"factorization toolkit for planar anisotropic semilinear equations"};
    app.require_subcommand(1);
    // --h is a grid flag below, so help gets only its long form
    app.set_help_flag("--help", "print help");

    // convert
    auto* convert = app.add_subcommand("convert", "tensor <-> dilatation conversion");
    std::vector<double> mu_args, tensor_args;
    convert->add_option("--mu", mu_args, "dilatation: Re Im")->expected(2);
    convert->add_option("--tensor", tensor_args, "entries: a11 a12 a22")->expected(3);

    // verify
    auto* verify = app.add_subcommand("verify", "residual campaign for a catalog solution");
    std::string verify_id, verify_tensor = "identity", h_list = "1/64,1/128,1/256";
    std::string nu_spec = "const:0.70710678118654752";
    double margin = 0.1, q = 0.5, lambda = 1.0, annulus_r = 0.25, max_linf = 1e9;
    std::string out_json, out_csv;
    verify->add_option("id", verify_id,
                       "lb-disk | lb-annulus | lb-punctured | halfplane-log | "
                       "halfplane-lambda | dead-zone")
        ->required();
    verify->add_option("--tensor", verify_tensor, "identity | spiral | const:<v> | radial:<v> | table:<p>");
    verify->add_option("--h", h_list, "grid spacings, comma list, fractions allowed");
    verify->add_option("--margin", margin, "interior margin");
    verify->add_option("--q", q, "dead-zone exponent");
    verify->add_option("--nu", nu_spec, "dead-zone profile: const:<v> | table:<p>");
    verify->add_option("--lambda", lambda, "halfplane-lambda rate");
    verify->add_option("--r", annulus_r, "annulus inner radius");
    verify->add_option("--max-linf", max_linf, "pass bound on the finest-grid Linf");
    verify->add_option("--out", out_json, "JSON report path");
    verify->add_option("--csv", out_csv, "CSV residual dump path");

    // solve
    auto* solve = app.add_subcommand("solve", "Dirichlet solve on the disk, optionally factorized");
    std::string f_spec = "exp", bc_spec = "lb-disk", solve_tensor = "identity";
    std::string solve_h = "1/64", solve_out, solve_csv;
    double rho = 0.9;
    int max_iter = 200;
    solve->add_option("--f", f_spec, "zero | exp | power:<q>");
    solve->add_option("--bc", bc_spec, "lb-disk | re | zero");
    solve->add_option("--tensor", solve_tensor, "identity | spiral | radial:<v>");
    solve->add_option("--rho", rho, "disk radius");
    solve->add_option("--h", solve_h, "grid spacing");
    solve->add_option("--max-iter", max_iter, "iteration cap");
    solve->add_option("--out", solve_out, "JSON report path");
    solve->add_option("--csv", solve_csv, "CSV field dump path");

    // heat
    auto* heat = app.add_subcommand("heat", "space-time residual of the heat kernel");
    std::string heat_tensor = "identity", heat_h = "1/32,1/64,1/128", t_list = "0.5,1,2";
    double a_rate = 1.0;
    std::string heat_out;
    heat->add_option("--a", a_rate, "diffusion rate");
    heat->add_option("--tensor", heat_tensor, "identity | radial:<v> | spiral");
    heat->add_option("--t", t_list, "sample times, comma list");
    heat->add_option("--h", heat_h, "grid spacings, comma list");
    heat->add_option("--out", heat_out, "JSON report path");

    for (auto* sub : {convert, verify, solve, heat}) sub->set_help_flag("--help", "print help");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (convert->parsed()) {
            if (mu_args.empty() == tensor_args.empty()) {
                std::cerr << "convert: give exactly one of --mu or --tensor\n";
                return 2;
            }
            TensorEntries e;
            Complex mu;
            if (!mu_args.empty()) {
                mu = Complex(mu_args[0], mu_args[1]);
                e = tensor_from_mu(mu);
            } else {
                e = {tensor_args[0], tensor_args[1], tensor_args[2]};
                mu = mu_from_tensor(e);
            }
            std::cout << "mu = " << format_double(mu.real()) << " + " << format_double(mu.imag())
                      << "i\n"
                      << "a11 = " << format_double(e.a11) << "\na12 = " << format_double(e.a12)
                      << "\na22 = " << format_double(e.a22) << '\n'
                      << "det = " << format_double(e.det()) << '\n'
                      << "K = " << format_double(ellipticity_constant(mu)) << '\n';
            return 0;
        }

        if (verify->parsed()) {
            const auto hs = parse_list(h_list);
            json config = {{"id", verify_id}, {"tensor", verify_tensor}, {"margin", margin},
                           {"h", h_list}};

            VerifyCase vc;
            if (verify_id == "lb-disk") {
                vc.u = lb_disk_field();
                vc.A = parse_tensor(verify_tensor);
                vc.base.domain = DomainDescriptor::unit_disk();
            } else if (verify_id == "lb-annulus") {
                vc.u = lb_annulus_field(annulus_r);
                vc.A = parse_tensor(verify_tensor);
                vc.base.domain = DomainDescriptor::annulus(annulus_r);
            } else if (verify_id == "lb-punctured") {
                vc.u = lb_punctured_disk_field();
                vc.A = parse_tensor(verify_tensor);
                vc.base.domain = DomainDescriptor::punctured_disk();
            } else if (verify_id == "halfplane-log" || verify_id == "halfplane-lambda") {
                vc.u = verify_id == "halfplane-log" ? halfplane_blowup_log_field()
                                                    : halfplane_blowup_lambda_field(lambda);
                if (verify_tensor == "identity")
                    vc.A = ConductivityTensor::identity();
                else
                    vc.A = parse_tensor(verify_tensor);
                vc.base.domain = DomainDescriptor::right_half_plane();
                vc.base.window = Rect{margin, 2.0, -1.0, 1.0};
            } else if (verify_id == "dead-zone") {
                double nu_const = 0.0;
                std::function<double(double)> nu;
                if (nu_spec.rfind("const:", 0) == 0) {
                    nu_const = std::stod(nu_spec.substr(6));
                    nu = [nu_const](double) { return nu_const; };
                } else if (nu_spec.rfind("table:", 0) == 0) {
                    nu = load_table(nu_spec.substr(6));
                } else {
                    std::cerr << "dead-zone: --nu must be const:<v> or table:<path>\n";
                    return 2;
                }
                DeadZoneSolution dz(q, nu, +1);
                vc.u = dz.field();
                vc.A = dz.tensor();
                vc.f = Nonlinearity::power(q);
                vc.base.domain = DomainDescriptor::plane();
                vc.base.window = Rect{-1.0, 1.0, -1.0, 1.0};
                vc.base.singular_distance = [dz](Complex z) {
                    return std::abs(z.imag() - dz.free_boundary(z.real()));
                };
            } else {
                std::cerr << "unknown catalog id: " << verify_id << '\n';
                return 2;
            }
            vc.base.margin = margin;
            // keep both annulus circles excluded even for generous margins
            if (verify_id == "lb-annulus")
                vc.base.margin = std::min(margin, 0.45 * (1.0 - annulus_r));
            // radial tensor families are direction-dependent at the origin
            if (vc.A.structure() == FieldStructure::Radial && !vc.base.singular_distance)
                vc.base.singular_distance = [](Complex z) { return std::abs(z); };

            return run_series("verify", config, verify_id, hs, max_linf,
                              [&vc](double h) {
                                  GridSpec g = vc.base;
                                  g.h = h;
                                  return strong_residual(vc.u, vc.A, vc.f, g);
                              },
                              out_json, out_csv);
        }

        if (solve->parsed()) {
            Nonlinearity f = Nonlinearity::exp();
            if (f_spec == "zero")
                f = Nonlinearity::zero();
            else if (f_spec == "exp")
                f = Nonlinearity::exp();
            else if (f_spec.rfind("power:", 0) == 0)
                f = Nonlinearity::power(std::stod(f_spec.substr(6)));
            else {
                std::cerr << "unknown nonlinearity: " << f_spec << '\n';
                return 2;
            }

            std::function<double(Complex)> bc;
            if (bc_spec == "lb-disk")
                bc = [](Complex z) { return lb_disk(z); };
            else if (bc_spec == "re")
                bc = [](Complex z) { return z.real(); };
            else if (bc_spec == "zero")
                bc = [](Complex) { return 0.0; };
            else {
                std::cerr << "unknown boundary data: " << bc_spec << '\n';
                return 2;
            }

            SolveOptions opts;
            opts.h = parse_fraction(solve_h);
            opts.max_iterations = max_iter;

            const ConductivityTensor A = parse_tensor(solve_tensor);
            FactorizeResult fr = factorize_disk(A, rho, f, bc, opts);
            const DiskSolveResult& sr = fr.solve;

            json rep;
            rep["command"] = "solve";
            rep["config"] = {{"f", f_spec}, {"bc", bc_spec}, {"tensor", solve_tensor},
                             {"rho", rho}, {"h", solve_h}};
            rep["iterations"] = sr.iterations;
            rep["final_residual"] = sr.final_residual;
            rep["converged"] = sr.converged;
            rep["diverged"] = sr.diverged;

            if (bc_spec == "lb-disk" && f.tag == Nonlinearity::Tag::Exp) {
                double err = 0.0;
                for (int i = 0; i < 200; ++i) {
                    const double th = 2.0 * M_PI * i / 200.0;
                    const Complex z = 0.8 * rho * Complex(std::cos(th), std::sin(th));
                    err = std::max(err, std::abs(fr.u.value(z) - lb_disk(z)));
                }
                rep["manufactured_linf_error"] = err;
            }

            std::cout << rep.dump(2) << '\n';
            if (!solve_out.empty()) {
                std::ofstream os(solve_out);
                os << rep.dump(2) << '\n';
            }
            if (!solve_csv.empty()) {
                std::ofstream os(solve_csv);
                os << "x,y,value\n";
                const MaskedGridField& g = sr.T;
                for (int j = 0; j < g.ny; ++j)
                    for (int i = 0; i < g.nx; ++i)
                        if (g.active[g.idx(i, j)]) {
                            const Complex w = g.node(i, j);
                            os << format_double(w.real()) << ',' << format_double(w.imag()) << ','
                               << format_double(g.values[g.idx(i, j)]) << '\n';
                        }
            }
            if (sr.diverged) return 3;
            return sr.converged ? 0 : 1;
        }

        if (heat->parsed()) {
            const auto hs = parse_list(heat_h);
            const auto times = parse_list(t_list);
            const ConductivityTensor A = parse_tensor(heat_tensor);
            json config = {{"a", a_rate}, {"tensor", heat_tensor}, {"t", t_list}, {"h", heat_h}};
            auto u = [a_rate](Complex z, double t) { return heat_kernel(z, t, a_rate); };
            return run_series("heat", config, "heat-kernel", hs, 1e9,
                              [&](double h) {
                                  GridSpec g;
                                  g.domain = DomainDescriptor::plane();
                                  g.window = Rect{-1.5, 1.5, -1.5, 1.5};
                                  g.margin = 2.0 * h;
                                  g.h = h;
                                  return heat_residual(u, A, a_rate, Nonlinearity::zero(), g,
                                                       times);
                              },
                              heat_out, "");
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
