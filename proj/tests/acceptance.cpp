// Acceptance gate: ten numbered criteria, one per invocation
// (`acceptance --criterion N`). Each prints a single PASS/FAIL line plus
// supporting measurements and exits nonzero on failure.

#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "qcf/disk_solver.hpp"
#include "qcf/exact_solutions.hpp"
#include "qcf/qc_atlas.hpp"
#include "qcf/tensor_beltrami.hpp"
#include "qcf/verifier.hpp"

using namespace qcf;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::vector<Complex> disk_samples(int n, unsigned seed, double rmin, double rmax) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> rad(rmin, rmax), ang(0.0, 2.0 * M_PI);
    std::vector<Complex> out;
    for (int i = 0; i < n; ++i) out.push_back(std::polar(rad(rng), ang(rng)));
    return out;
}

// ---- 1: tensor <-> dilatation round trip --------------------------------

Check criterion1() {
    Check c;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> mag(0.0, 0.99), ang(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Complex mu = std::polar(mag(rng), ang(rng));
        const TensorEntries e = tensor_from_mu(mu);
        const TensorEntries back = tensor_from_mu(mu_from_tensor(e));
        worst = std::max({worst, std::abs(back.a11 - e.a11), std::abs(back.a12 - e.a12),
                          std::abs(back.a22 - e.a22)});
    }
    std::cout << "  max entrywise round-trip error over 1e4 samples: " << worst << "\n";
    c.require(worst <= 1e-12, "round-trip error above 1e-12");

    const TensorEntries e = tensor_from_mu(Complex(0.5, 0.5));
    const double ce = std::max({std::abs(e.a11 - 1.0), std::abs(e.a12 + 2.0),
                                std::abs(e.a22 - 5.0)});
    const double cm = std::abs(mu_from_tensor(TensorEntries{1.0, -2.0, 5.0}) - Complex(0.5, 0.5));
    std::cout << "  constant-entry example errors: tensor " << ce << ", dilatation " << cm << "\n";
    c.require(ce <= 1e-14 && cm <= 1e-14, "constant-entry example beyond 1e-14");
    return c;
}

// ---- 2: volume-preserving radial maps -----------------------------------

Check criterion2() {
    Check c;
    QuadratureSpec tight;
    tight.abs_tol = 1e-12;
    tight.rel_tol = 1e-12;

    std::vector<std::pair<std::string, std::function<double(double)>>> profiles = {
        {"constant 0.3", [](double) { return 0.3; }},
        {"constant 1/sqrt(2)", [](double) { return 1.0 / std::sqrt(2.0); }},
        {"sin profile", [](double t) { return 0.9 * std::sin(M_PI * t); }},
        {"piecewise step", [](double t) { return t < 0.5 ? 0.2 : 0.6; }},
        {"tabulated ramp",
         [](double t) {
             // piecewise-linear through (0,0.1), (0.5,0.5), (1,0.2)
             return t < 0.5 ? 0.1 + 0.8 * t : 0.5 - 0.6 * (t - 0.5);
         }},
    };

    unsigned seed = 10;
    for (const auto& [name, nu] : profiles) {
        auto m = radial_map(
            [nu](double t) { return volume_preserving_coefficient(nu(t), +1); }, tight);
        double worst_mod = 0.0, worst_jac = 0.0;
        for (Complex z : disk_samples(100, seed++, 0.15, 0.9)) {
            if (std::abs(std::abs(z) - 0.5) < 0.03) z *= 1.2;  // keep FD off the step profile kink
            worst_mod = std::max(worst_mod, std::abs(std::abs(m(z)) - std::abs(z)));
            worst_jac = std::max(worst_jac, std::abs(numeric_jacobian(m, z, 3e-5).det() - 1.0));
        }
        std::cout << "  " << name << ": max ||omega|-|z|| = " << worst_mod
                  << ", max |J-1| = " << worst_jac << "\n";
        c.require(worst_mod <= 1e-9, name + ": modulus defect above 1e-9");
        c.require(worst_jac <= 1e-6, name + ": jacobian defect above 1e-6");
    }
    return c;
}

// ---- 3: log-spiral strong residual --------------------------------------

Check criterion3() {
    Check c;
    std::vector<ResidualReport> reps;
    for (double h : {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0}) {
        GridSpec g;
        g.domain = DomainDescriptor::unit_disk();
        g.h = h;
        g.margin = 0.1;
        g.singular_distance = [](Complex z) { return std::abs(z); };
        reps.push_back(strong_residual(lb_disk_field(), ConductivityTensor::log_spiral(),
                                       Nonlinearity::exp(), g));
    }
    const auto est = convergence_order(reps);
    std::cout << "  Linf: " << reps[0].linf << " -> " << reps[1].linf << " -> " << reps[2].linf
              << ", order " << est.order << "\n";
    c.require(est.order >= 1.8 && est.order <= 2.2, "order outside [1.8, 2.2]");
    c.require(reps[2].linf <= reps[0].linf / 10.0, "finest residual not 10x below coarsest");
    return c;
}

// ---- 4: catalog solutions x admissible tensors --------------------------

Check criterion4() {
    Check c;
    const Complex kvp = volume_preserving_coefficient(1.0 / std::sqrt(2.0), +1);
    const double Kvp = ellipticity_constant(kvp);
    auto radial_vp = ConductivityTensor::radial([kvp](double) { return kvp; }, Kvp);

    auto run3 = [&c](const std::string& name, const std::function<ResidualReport(double)>& runner,
                     std::initializer_list<double> hs) {
        std::vector<ResidualReport> reps;
        for (double h : hs) reps.push_back(runner(h));
        const auto est = convergence_order(reps);
        std::cout << "  " << name << ": order " << est.order << " (Linf " << reps.back().linf
                  << ")\n";
        c.require(est.order >= 1.8 && est.order <= 2.2, name + ": order outside [1.8, 2.2]");
    };

    run3("disk blow-up / radial tensor",
         [&](double h) {
             GridSpec g;
             g.domain = DomainDescriptor::unit_disk();
             g.h = h;
             g.margin = 0.1;
             g.singular_distance = [](Complex z) { return std::abs(z); };
             return strong_residual(lb_disk_field(), radial_vp, Nonlinearity::exp(), g);
         },
         {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0});

    run3("annulus blow-up / radial tensor",
         [&](double h) {
             GridSpec g;
             g.domain = DomainDescriptor::annulus(0.25);
             g.h = h;
             g.margin = 0.1;
             return strong_residual(lb_annulus_field(0.25), radial_vp, Nonlinearity::exp(), g);
         },
         {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0});

    run3("punctured-disk blow-up / radial tensor",
         [&](double h) {
             GridSpec g;
             g.domain = DomainDescriptor::punctured_disk();
             g.h = h;
             g.margin = 0.1;
             return strong_residual(lb_punctured_disk_field(), radial_vp, Nonlinearity::exp(), g);
         },
         {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0});

    const ConductivityTensor sheared(TensorEntries{1.0, -2.0, 5.0});
    run3("half-plane log variant / sheared tensor",
         [&](double h) {
             GridSpec g;
             g.domain = DomainDescriptor::right_half_plane();
             g.window = Rect{0.2, 1.8, -0.8, 0.8};
             g.h = h;
             g.margin = 0.1;
             return strong_residual(halfplane_blowup_log_field(), sheared, Nonlinearity::exp(), g);
         },
         {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0});

    run3("half-plane exponential variant / sheared tensor",
         [&](double h) {
             GridSpec g;
             g.domain = DomainDescriptor::right_half_plane();
             g.window = Rect{0.2, 1.8, -0.8, 0.8};
             g.h = h;
             g.margin = 0.1;
             return strong_residual(halfplane_blowup_lambda_field(1.0), sheared,
                                    Nonlinearity::exp(), g);
         },
         {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0});

    for (double q : {0.3, 0.5, 0.7}) {
        DeadZoneSolution dz(q, [](double) { return 1.0 / std::sqrt(2.0); }, +1);
        run3("dead zone q = " + std::to_string(q).substr(0, 3),
             [&](double h) {
                 GridSpec g;
                 g.domain = DomainDescriptor::plane();
                 g.window = Rect{-1.0, 1.0, -3.0, 1.0};
                 g.h = h;
                 g.margin = 0.1;
                 g.singular_distance = [&dz](Complex z) {
                     return std::abs(z.imag() - dz.free_boundary(z.real()));
                 };
                 return strong_residual(dz.field(), dz.tensor(), Nonlinearity::power(q), g);
             },
             {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0});
    }

    run3("heat kernel / radial tensor",
         [&](double h) {
             GridSpec g;
             g.domain = DomainDescriptor::plane();
             g.window = Rect{-1.5, 1.5, -1.5, 1.5};
             g.h = h;
             g.margin = 0.1;
             g.singular_distance = [](Complex z) { return std::abs(z); };
             return heat_residual([](Complex z, double t) { return heat_kernel(z, t, 1.0); },
                                  radial_vp, 1.0, Nonlinearity::zero(), g, {0.5, 1.0, 2.0});
         },
         {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0});

    return c;
}

// ---- 5: annulus -> punctured-disk limit ---------------------------------

Check criterion5() {
    Check c;
    auto sup_diff = [](double r) {
        double sup = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double rho = 0.1 + 0.8 * i / 400.0;
            sup = std::max(sup, std::abs(lb_annulus(Complex(rho, 0.0), r) -
                                         lb_punctured_disk(Complex(rho, 0.0))));
        }
        return sup;
    };
    const double s3 = sup_diff(1e-3), s4 = sup_diff(1e-4), s6 = sup_diff(1e-6);
    std::cout << "  sup difference on |z| in [0.1, 0.9]: r=1e-3: " << s3 << ", r=1e-4: " << s4
              << ", r=1e-6: " << s6 << "\n";
    c.require(s4 <= 1e-2, "sup difference at r = 1e-4 above 1e-2");
    c.require(s4 < s3 && s6 < s4, "difference not decreasing with r");
    return c;
}

// ---- 6: weak factorization identity -------------------------------------

Check criterion6() {
    Check c;
    struct Triple {
        std::string name;
        ScalarField T;
        PlanarMap omega;
        ConductivityTensor A;
        std::vector<TestBump> bumps;
        GridSpec grid;
    };
    std::vector<Triple> triples;

    {
        Triple t{"identity", lb_disk_field(), identity_map(), ConductivityTensor::identity()};
        t.bumps = {{Complex(0.1, -0.1), 0.3}, {Complex(-0.3, 0.2), 0.25}};
        t.grid.domain = DomainDescriptor::unit_disk();
        t.grid.h = 1.0 / 256.0;
        triples.push_back(std::move(t));
    }
    {
        Triple t{"log spiral", lb_disk_field(), log_spiral_map(),
                 ConductivityTensor::log_spiral()};
        std::mt19937 rng(6);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
        for (int i = 0; i < 10; ++i) t.bumps.push_back({std::polar(0.45, ang(rng)), 0.18});
        t.grid.domain = DomainDescriptor::unit_disk();
        t.grid.h = 1.0 / 256.0;
        triples.push_back(std::move(t));
    }
    {
        Triple t{"sheared half-plane",
                 ScalarField{[](Complex w) { return -2.0 * std::log(w.real()) + std::log(2.0); },
                             [](Complex w) { return Vec2{-2.0 / w.real(), 0.0}; }},
                 horizontal_map([](double) { return Complex(0.5, 0.5); }),
                 ConductivityTensor(TensorEntries{1.0, -2.0, 5.0})};
        t.bumps = {{Complex(1.0, 0.0), 0.3}, {Complex(1.5, 0.5), 0.4}, {Complex(0.8, -0.4), 0.25}};
        t.grid.domain = DomainDescriptor::right_half_plane();
        t.grid.window = Rect{0.2, 2.5, -1.0, 1.5};
        t.grid.h = 1.0 / 256.0;
        triples.push_back(std::move(t));
    }

    for (auto& t : triples) {
        auto fine = factorization_identity_check(t.T, t.omega, t.A, t.bumps, t.grid);
        GridSpec coarse_grid = t.grid;
        coarse_grid.h *= 4.0;
        auto coarse = factorization_identity_check(t.T, t.omega, t.A, t.bumps, coarse_grid);
        double worst_rel = 0.0, fine_max = 0.0, coarse_max = 0.0;
        for (size_t i = 0; i < fine.size(); ++i) {
            worst_rel = std::max(worst_rel, fine[i].defect / fine[i].scale);
            fine_max = std::max(fine_max, fine[i].defect);
            coarse_max = std::max(coarse_max, coarse[i].defect);
        }
        std::cout << "  " << t.name << ": max defect/scale " << worst_rel << ", defect "
                  << coarse_max << " -> " << fine_max << " under refinement\n";
        c.require(worst_rel <= 1e-4, t.name + ": defect above 1e-4 of scale");
        c.require(fine_max < coarse_max, t.name + ": defect not decaying under refinement");
    }
    return c;
}

// ---- 7: Dirichlet solver on the disk ------------------------------------

double solver_error(double h, const double rho, bool* monotone = nullptr,
                    int* iterations = nullptr) {
    SolveOptions opts;
    opts.h = h;
    std::vector<double> prev;
    if (monotone) {
        *monotone = true;
        opts.iterate_callback = [&prev, monotone](int, const std::vector<double>& v) {
            if (!prev.empty())
                for (size_t i = 0; i < v.size(); ++i)
                    if (v[i] > prev[i] + 1e-12) *monotone = false;
            prev = v;
        };
    }
    ScalarField one{[](Complex) { return 1.0; }, nullptr};
    auto res = solve_dirichlet(one, Nonlinearity::exp(),
                               [rho](double) { return lb_disk(Complex(rho, 0.0)); }, rho, opts);
    if (iterations) *iterations = res.iterations;
    if (!res.converged) return 1e300;
    double err = 0.0;
    for (int ring = 1; ring <= 7; ++ring)
        for (int i = 0; i < 64; ++i) {
            const Complex w = std::polar(0.1 * ring * rho, 2.0 * M_PI * i / 64.0);
            err = std::max(err, std::abs(res.T.interpolate(w) - lb_disk(w)));
        }
    return err;
}

Check criterion7() {
    Check c;
    const double rho = 0.9;

    bool monotone = true;
    int iters = 0;
    const double e32 = solver_error(1.0 / 32.0, rho, &monotone, &iters);
    const double e64 = solver_error(1.0 / 64.0, rho);
    const double e128 = solver_error(1.0 / 128.0, rho);
    std::vector<ResidualReport> reps(3);
    reps[0].h = 1.0 / 32.0;
    reps[0].linf = e32;
    reps[1].h = 1.0 / 64.0;
    reps[1].linf = e64;
    reps[2].h = 1.0 / 128.0;
    reps[2].linf = e128;
    const auto est = convergence_order(reps);
    std::cout << "  interior Linf error: " << e32 << " -> " << e64 << " -> " << e128
              << ", order " << est.order << "\n";
    std::cout << "  relaxed iterates monotone: " << (monotone ? "yes" : "no") << " (" << iters
              << " iterations at h = 1/32)\n";
    c.require(est.order >= 1.8 && est.order <= 2.2, "error order outside [1.8, 2.2]");
    c.require(e128 <= 5e-3, "error at h = 1/128 above 5e-3");
    c.require(monotone, "iterates not monotone non-increasing");

    SolveOptions opts;
    opts.h = 1.0 / 64.0;
    ScalarField one{[](Complex) { return 1.0; }, nullptr};
    auto psi = [](double th) { return std::sin(2.0 * th) + 0.3 * std::cos(th); };
    auto res = solve_dirichlet(one, Nonlinearity::zero(), psi, 1.0, opts);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 720; ++i) {
        lo = std::min(lo, psi(M_PI * i / 360.0));
        hi = std::max(hi, psi(M_PI * i / 360.0));
    }
    bool principle = true;
    for (size_t n = 0; n < res.T.values.size(); ++n)
        if (res.T.active[n] &&
            (res.T.values[n] < lo - 1e-10 || res.T.values[n] > hi + 1e-10))
            principle = false;
    std::cout << "  maximum principle for the homogeneous problem: "
              << (principle ? "holds" : "violated") << "\n";
    c.require(principle, "discrete maximum principle violated");
    return c;
}

// ---- 8: end-to-end factorization ----------------------------------------

Check criterion8() {
    Check c;
    const double rho = 0.9, h = 1.0 / 64.0;

    const double direct = solver_error(h, rho);

    SolveOptions opts;
    opts.h = h;
    auto fr = factorize_disk(ConductivityTensor::log_spiral(), rho, Nonlinearity::exp(),
                             [](Complex z) { return lb_disk(z); }, opts);
    c.require(fr.solve.converged, "factorized solve did not converge");
    double err = 0.0;
    for (int ring = 1; ring <= 7; ++ring)
        for (int i = 0; i < 64; ++i) {
            const Complex z = std::polar(0.1 * ring * rho, 2.0 * M_PI * i / 64.0);
            err = std::max(err, std::abs(fr.u(z) - lb_disk(z)));
        }
    std::cout << "  factorized error " << err << " vs direct solver error " << direct << "\n";
    c.require(err <= 2.0 * direct, "factorized error above 2x the direct solver error");
    return c;
}

// ---- 9: growth condition diagnostic -------------------------------------

Check criterion9() {
    Check c;
    const auto exp_res = keller_osserman_check([](double t) { return std::exp(t); }, 1.0);
    const auto sq_res = keller_osserman_check([](double t) { return t * t; }, 1.0);
    const auto lin_res = keller_osserman_check([](double t) { return t; }, 1.0);
    auto show = [](KellerOsserman r) {
        return r == KellerOsserman::Satisfied ? "satisfied"
               : r == KellerOsserman::Violated ? "violated" : "inconclusive";
    };
    std::cout << "  e^t: " << show(exp_res) << ", t^2: " << show(sq_res) << ", t: "
              << show(lin_res) << "\n";
    c.require(exp_res == KellerOsserman::Satisfied, "e^t not recognized");
    c.require(sq_res == KellerOsserman::Satisfied, "t^2 not recognized");
    c.require(lin_res == KellerOsserman::Violated, "t not rejected");
    return c;
}

// ---- 10: stream function -------------------------------------------------

Check criterion10() {
    Check c;
    ScalarField u{[](Complex z) { return z.real(); }, [](Complex) { return Vec2{1.0, 0.0}; }};
    const ConductivityTensor A(TensorEntries{1.0, -2.0, 5.0});

    auto defect_at = [&](double h) {
        GridSpec g;
        g.domain = DomainDescriptor::plane();
        g.window = Rect{-1.0, 1.0, -1.0, 1.0};
        g.h = h;
        g.margin = 2.0 * h;
        return stream_function(u, A, g, Complex(0.0), 10, 99);
    };

    const auto res = defect_at(1.0 / 256.0);
    const double c0 = res.v.interpolate(Complex(0.0));
    double worst = 0.0;
    for (int j = 0; j < res.v.ny; ++j)
        for (int i = 0; i < res.v.nx; ++i) {
            const Complex z = res.v.node(i, j);
            worst = std::max(worst,
                             std::abs(res.v.at(i, j) - (z.imag() + 2.0 * z.real() + c0)));
        }
    const auto coarse = defect_at(1.0 / 128.0);
    std::cout << "  Linf defect vs y + 2x: " << worst << "; loop defects " << coarse.max_loop_defect
              << " -> " << res.max_loop_defect << " under refinement\n";
    c.require(worst <= 1e-6, "reconstruction defect above 1e-6");
    const double bound = 1e-8 * std::max(res.scale, 1.0);
    c.require(res.max_loop_defect <= std::max(4.0 * coarse.max_loop_defect, bound),
              "loop defects not at second order");
    c.require(res.max_loop_defect <= 1e-6 * std::max(res.scale, 1.0), "loop defects too large");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0) criterion = std::atoi(argv[i + 1]);
    if (criterion < 1 || criterion > 10) {
        std::cerr << "usage: acceptance --criterion <1..10>\n";
        return 2;
    }

    using Fn = Check (*)();
    static const Fn table[10] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                 criterion6, criterion7, criterion8, criterion9, criterion10};
    Check c;
    try {
        c = table[criterion - 1]();
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << criterion << ": " << (c.ok ? "PASS" : "FAIL");
    if (!c.ok) std::cout << " (" << c.detail << ")";
    std::cout << std::endl;
    return c.ok ? 0 : 1;
}
