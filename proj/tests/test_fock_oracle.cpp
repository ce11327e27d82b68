#include <catch2/catch_amalgamated.hpp>

#include "support/dense_fock.hpp"
#include "tmsq/fock.hpp"
#include "tmsq/gaussian.hpp"
#include "tmsq/models.hpp"

#include <cmath>
#include <random>

using namespace tmsq;
using namespace tmsq::fock;
using Catch::Approx;

namespace {

gaussian::GaussianSystem single_loss(double kappa) {
    gaussian::GaussianSystem sys({"a"});
    sys.add_loss(0, kappa);
    return sys;
}

ComplexMatrix dense(const SparseMatrix& m) { return ComplexMatrix(m); }

// Random density matrix with no coherence across the sectors of `layout`.
ComplexMatrix random_block_state(const SectorLayout& layout, std::size_t d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n01;
    ComplexMatrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(n01(rng), n01(rng));
    ComplexMatrix rho = g * g.adjoint();
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
        for (Eigen::Index j = 0; j < rho.cols(); ++j)
            if (layout.sector_of_state(static_cast<std::size_t>(i)) != layout.sector_of_state(static_cast<std::size_t>(j))) rho(i, j) = 0.0;
    return rho / rho.trace();
}

}  // namespace

TEST_CASE("product space ordering and ladder operators", "[fock][space]") {
    ProductSpace space({3, 4});
    CHECK(space.dimension() == 12);
    CHECK(space.index_of({1, 2}) == 6);
    CHECK(space.local_index(6, 0) == 1);
    CHECK(space.local_index(6, 1) == 2);
    const auto a1 = dense(space.annihilator(1));
    const auto ref = testsupport::mode_op({2, 3}, 1);
    CHECK((a1 - ref).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(space.index_of({3, 0}), DimensionError);
}

TEST_CASE("FockConfig guards", "[fock][space]") {
    CHECK_THROWS_AS((FockConfig{{1, 4}}.validate()), ValidationError);
    FockConfig big{{200, 200}};
    CHECK_THROWS_AS(big.validate(), DimensionError);
    CHECK_NOTHROW(FockConfig{{2, 8}}.validate());
}

TEST_CASE("lowered cascade superoperator equals the direct cascade term", "[fock][cascade]") {
    const double kappa = 1.3;
    const std::vector<int> cutoffs{3, 3};
    const auto as = testsupport::mode_op(cutoffs, 0);
    const auto at = testsupport::mode_op(cutoffs, 1);
    for (double eta : {0.0, 0.25, 0.5, 0.96, 1.0}) {
        gaussian::GaussianSystem sys({"s", "t"});
        sys.add_cascade({0, 1, kappa, eta});
        const auto lowered = dense(Liouvillian::from_system(sys, {cutoffs}).superoperator());
        const auto direct = testsupport::cascade_block(as, at, kappa, eta);
        INFO("eta = " << eta);
        CHECK((lowered - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("liouvillian_apply", "[fock][liouvillian]") {
    SECTION("one-photon decay: d<n>/dt = -2 kappa") {
        const double kappa = 0.7;
        FockConfig cfg{{4}};
        const auto rho = FockState::number(cfg.dims(), {1});
        const auto drho = liouvillian_apply(single_loss(kappa), cfg, rho);
        const auto n = dense(ProductSpace(cfg.dims()).annihilator(0));
        const cplx rate = (n.adjoint() * n * drho).trace();
        CHECK(rate.real() == Approx(-2.0 * kappa).epsilon(1e-14));
        CHECK(std::abs(rate.imag()) < 1e-14);
    }
    SECTION("vacuum is stationary under the ideal generator at r = 0") {
        const auto sys = models::build_single_cavity_ideal({1.0, 0.0, 0.0, 2.0, 2.0});
        FockConfig cfg{{2, 2, 2, 2}};
        const auto drho = liouvillian_apply(sys, cfg, FockState::vacuum(cfg.dims()));
        CHECK(drho.cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("matches the dense Kronecker construction for a general system") {
        const auto sys = models::build_single_cavity_general(models::GeneralRamanParams::from_ideal({0.9, 0.4, 0.3, 1.5, 1.1}, 1.0, 1.2));
        FockConfig cfg{{2, 2, 2, 2}};
        const auto l = Liouvillian::from_system(sys, cfg);
        const auto rho = random_block_state(SectorLayout::trivial(ProductSpace(cfg.dims())), cfg.dimension(), 3);
        const ComplexMatrix via_super = testsupport::unvec_row(dense(l.superoperator()) * testsupport::vec_row(rho), rho.rows());
        CHECK((l.apply(rho) - via_super).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((l.apply_hermitian(rho) - via_super).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("dimension mismatch") {
        FockConfig cfg{{3}};
        CHECK_THROWS_AS(liouvillian_apply(single_loss(1.0), cfg, FockState::vacuum({3})), DimensionError);
        CHECK_THROWS_AS(Liouvillian::from_system(single_loss(1.0), {{3, 3}}), DimensionError);
    }
}

TEST_CASE("charge sectors", "[fock][sectors]") {
    SECTION("ideal single-cavity model conserves a +-1 charge") {
        const auto sys = models::build_single_cavity_ideal({1.0, 0.4, 0.0, 2.0, 2.0});
        const auto l = Liouvillian::from_system(sys, {{2, 2, 3, 3}});
        const auto layout = detect_layout(l);
        const auto& w = layout.grading().weights;
        CHECK(layout.grading().modulus == 0);
        CHECK(w == std::vector<int>{1, -1, 1, -1});
    }
    SECTION("single-mode squeezing leaves photon parity") {
        const auto l = Liouvillian::from_system(models::build_single_mode(0.25, 0.5, 0.0, 1.0), {{3, 5}});
        const auto layout = detect_layout(l);
        CHECK(layout.grading().modulus == 2);
        CHECK(layout.n_sectors() == 2);
    }
    SECTION("block action equals the full action on block-diagonal states") {
        const auto sys = models::build_cascaded({0.8, 0.5, 0.3, 4.0, 0.9});
        const auto l = Liouvillian::from_system(sys, {{2, 2, 2, 2, 2, 2}});
        const SectorGenerator gen(l, detect_layout(l));
        CHECK(gen.layout().n_sectors() > 1);
        const auto rho = random_block_state(gen.layout(), l.dimension(), 7);
        BlockDensity out;
        gen.apply(gen.to_blocks(rho), out);
        const ComplexMatrix full = l.apply(rho);
        CHECK((gen.to_full(out) - full).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(gen.off_block(full) < 1e-12);
    }
}

TEST_CASE("moments", "[fock][moments]") {
    SECTION("vacuum") {
        const auto m = moments(FockState::vacuum({4, 4}));
        CHECK((m.sigma - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(m.mean.cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("one photon has V(X) = V(P) = 3") {
        const auto m = moments(FockState::number({4}, {1}));
        CHECK(m.sigma(0, 0) == Approx(3.0).epsilon(1e-14));
        CHECK(m.sigma(1, 1) == Approx(3.0).epsilon(1e-14));
        CHECK(std::abs(m.sigma(0, 1)) < 1e-14);
    }
    SECTION("coherent state: vacuum noise, displaced mean") {
        const cplx alpha(0.6, -0.3);
        const auto m = moments(FockState::coherent({30}, 0, alpha));
        CHECK((m.sigma - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(m.mean(0) == Approx(2.0 * alpha.real()).epsilon(1e-10));
        CHECK(m.mean(1) == Approx(2.0 * alpha.imag()).epsilon(1e-10));
    }
}

TEST_CASE("RK4 integration", "[fock][integrate]") {
    SECTION("one-photon decay follows exp(-2 kappa t)") {
        const double kappa = 1.0;
        FockConfig cfg{{3}};
        const auto l = Liouvillian::from_system(single_loss(kappa), cfg);
        IntegrateOptions fine;
        fine.max_dt = 0.01;
        const auto traj = integrate(l, FockState::number(cfg.dims(), {1}), 2.0, 11, fine);
        REQUIRE(traj.size() == 11);
        for (const auto& s : traj) {
            INFO("t = " << s.t);
            CHECK(std::abs(mean_number(s.state, 0) - std::exp(-2.0 * kappa * s.t)) < 1e-6);
            CHECK(std::abs(s.state.trace() - 1.0) < 1e-8);
        }
    }
    SECTION("coherent states (inter-sector coherence) decay in amplitude at kappa") {
        const double kappa = 0.5;
        FockConfig cfg{{12}};
        const auto l = Liouvillian::from_system(single_loss(kappa), cfg);
        IntegrateOptions opts;
        opts.check_positivity = true;
        opts.max_dt = 0.01;
        const auto traj = integrate(l, FockState::coherent(cfg.dims(), 0, cplx(1.0, 0.5)), 1.0, 3, opts);
        const auto m0 = moments(traj.front().state), m1 = moments(traj.back().state);
        CHECK(m1.mean(0) == Approx(m0.mean(0) * std::exp(-kappa)).epsilon(1e-8));
        CHECK(m1.mean(1) == Approx(m0.mean(1) * std::exp(-kappa)).epsilon(1e-8));
    }
    SECTION("bad arguments") {
        FockConfig cfg{{3}};
        const auto l = Liouvillian::from_system(single_loss(1.0), cfg);
        CHECK_THROWS_AS(integrate(l, FockState::vacuum(cfg.dims()), 1.0, 1), ValidationError);
        CHECK_THROWS_AS(integrate(l, FockState::vacuum({5}), 1.0, 3), DimensionError);
        IntegrateOptions tiny;
        tiny.max_steps = 10;
        CHECK_THROWS_AS(integrate(l, FockState::vacuum(cfg.dims()), 100.0, 3, tiny), ToleranceError);
    }
}

TEST_CASE("oracle agrees with the covariance propagator", "[fock][oracle]") {
    SECTION("single-mode scheme, r = 0.5, beta = kappa/2, atom cutoff 16") {
        const double kappa = 1.0;
        const auto sys = models::build_single_mode(kappa / 2.0, 0.5, 0.0, kappa);
        const auto steady = fock_steady_state(sys, {{3, 16}});
        const auto fock_cov = moments(steady.state);
        const auto gauss = gaussian::steady_state(gaussian::assemble_generator(sys));
        CHECK(std::abs(fock_cov.sigma(2, 2) - gauss.sigma(2, 2)) < 2e-3);
        CHECK((fock_cov.sigma - gauss.sigma).cwiseAbs().maxCoeff() < 2e-3);
    }
    SECTION("ideal single-cavity scheme, r = 0.4, beta = kappa/2") {
        const auto sys = models::build_single_cavity_ideal({1.0, 0.4, 0.0, 2.0, 2.0});
        const auto steady = fock_steady_state(sys, {{2, 2, 8, 8}});
        const auto atoms = gaussian::reduce(moments(steady.state), {2, 3});
        const auto gauss = gaussian::reduce(gaussian::steady_state(gaussian::assemble_generator(sys)), {2, 3});
        CHECK((atoms.sigma - gauss.sigma).cwiseAbs().maxCoeff() < 1e-2);
        CHECK_NOTHROW(steady.state.validate());
    }
    SECTION("cascaded scheme at eta = 0.8, weak squeezing, minimal cutoffs") {
        const auto sys = models::build_cascaded({1.0, 0.3, 0.0, 2.0, 0.8});
        const auto steady = fock_steady_state(sys, {{2, 2, 2, 2, 2, 2}});
        const auto gauss = gaussian::steady_state(gaussian::assemble_generator(sys));
        const double err = (moments(steady.state).sigma - gauss.sigma).cwiseAbs().maxCoeff();
        INFO("max |sigma_fock - sigma_gauss| = " << err);
        CHECK(err < 3e-2);
    }
}

TEST_CASE("direct solve and time relaxation find the same steady state", "[fock][direct]") {
    const auto sys = models::build_single_cavity_ideal({1.0, 0.4, 0.3, 2.0, 1.5});
    FockConfig cfg{{2, 2, 3, 3}};
    const auto l = Liouvillian::from_system(sys, cfg);
    const double gap = gaussian::spectral_gap(gaussian::assemble_generator(sys));
    const auto direct = solve_steady(l);
    const auto relaxed = relax_to_steady(l, FockState::vacuum(cfg.dims()), gap);
    CHECK((direct.rho - relaxed.state.rho).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(l.apply(direct.rho).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_NOTHROW(direct.validate());
}

TEST_CASE("collective spin model", "[fock][spin]") {
    SECTION("N = 1 is a two-level atom") {
        const auto model = build_spin_single_mode(SingleEnsembleParams::from_bosonic(1, 0.3, 0.5, 0.0, 1.0), 2);
        ComplexMatrix sigma_minus = ComplexMatrix::Zero(2, 2);
        sigma_minus(0, 1) = 1.0;
        const auto expected = testsupport::embed({2, 1}, 1, sigma_minus);
        CHECK((dense(model.annihilators[1]) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("drive off: atoms stay in |0>, J_z = -N/2") {
        SingleEnsembleParams p;
        p.N = 6;
        p.kappa = 1.0;
        p.chi_r = 0.2;
        p.omega_z = 0.4;
        const auto model = build_spin_single_mode(p, 2);
        const auto traj = integrate(model.liouvillian, FockState::vacuum(model.liouvillian.dims()), 5.0, 3);
        const cplx jz = (model.jz[0] * traj.back().state.rho).trace();
        CHECK(jz.real() == Approx(-3.0).epsilon(1e-12));
    }
    SECTION("N = 10 single-mode scheme within 5/N of the bosonic variance") {
        const double beta = 0.25, r = 0.5, kappa = 1.0;
        const int N = 10;
        const auto model = build_spin_single_mode(SingleEnsembleParams::from_bosonic(N, beta, r, 0.0, kappa), 4);
        const auto bos = models::build_single_mode(beta, r, 0.0, kappa);
        const double gap = gaussian::spectral_gap(gaussian::assemble_generator(bos));
        SteadyOptions opts;
        opts.max_horizon = 200.0;
        const auto steady = relax_to_steady(model.liouvillian, FockState::vacuum(model.liouvillian.dims()), gap, opts);
        const double v_spin = moments(steady.state, model.annihilators).sigma(2, 2);
        const double v_boson = gaussian::steady_state(gaussian::assemble_generator(bos)).sigma(2, 2);
        CHECK(std::abs(v_spin - v_boson) < 5.0 / N);
    }
    SECTION("guard") {
        CHECK_THROWS_AS(build_spin_single_mode(SingleEnsembleParams::from_bosonic(30000, 0.1, 0.1, 0.0, 1.0), 2), DimensionError);
        TwoEnsembleParams p;
        p.N1 = p.N2 = 200;
        p.kappa_a = p.kappa_b = 1.0;
        CHECK_THROWS_AS(build_spin_two_ensemble(p, 2, 2), DimensionError);
    }
    SECTION("two ensembles reduce to the bosonic single-cavity model at large N") {
        const int N = 12;
        const double root = std::sqrt(static_cast<double>(N));
        TwoEnsembleParams p;
        p.N1 = p.N2 = N;
        p.beta_r1 = 1.0 / root;
        p.beta_s2 = 1.0 / root;
        p.beta_s1 = 0.3 / root;
        p.beta_r2 = 0.3 / root;
        p.kappa_a = p.kappa_b = 2.0;
        const auto model = build_spin_two_ensemble(p, 2, 2);
        const auto bos = models::build_single_cavity_ideal({1.0, 0.3, 0.0, 2.0, 2.0});
        // Check the coupling operators: the generator restricted to low excitation matches the boson one.
        const auto traj = integrate(model.liouvillian, FockState::vacuum(model.liouvillian.dims()), 0.5, 2);
        const auto spin_m = moments(traj.back().state, model.annihilators);
        const auto gen = gaussian::assemble_generator(bos);
        const auto bos_traj = gaussian::evolve(gen, gaussian::CovarianceState::vacuum(4), 0.5, 2);
        CHECK((spin_m.sigma - bos_traj.back().state.sigma).cwiseAbs().maxCoeff() < 2e-2);
    }
}

TEST_CASE("truncation_check", "[fock][truncation]") {
    SECTION("vacuum steady state converges at the minimal cutoff") {
        const auto sys = models::build_single_mode(0.5, 0.0, 0.0, 1.0);
        FockConfig cfg{{2, 2}};
        const auto res = truncation_check(sys, cfg, covariance_observable({1}));
        CHECK(res.converged);
        CHECK(res.cutoffs == std::vector<int>{2, 2});
    }
    SECTION("stronger squeezing needs larger cutoffs") {
        FockConfig cfg{{2, 2}};
        cfg.convergence_tol = 1e-3;
        const auto weak = truncation_check(models::build_single_mode(0.5, 0.3, 0.0, 1.0), cfg, covariance_observable({1}));
        const auto strong = truncation_check(models::build_single_mode(0.5, 0.7, 0.0, 1.0), cfg, covariance_observable({1}));
        REQUIRE(weak.converged);
        REQUIRE(strong.converged);
        CHECK(strong.cutoffs[1] > weak.cutoffs[1]);
        CHECK(strong.history.size() > weak.history.size());
    }
    SECTION("r near 1 under a small guard is reported as not converged") {
        FockConfig cfg{{2, 2}};
        cfg.max_dimension = 150;
        const auto res = truncation_check(models::build_single_mode(0.5, 0.95, 0.0, 1.0), cfg, covariance_observable({1}));
        CHECK_FALSE(res.converged);
        CHECK(res.message.find("not converged") != std::string::npos);
    }
}
