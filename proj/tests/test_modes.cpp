#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "stratwave/modes.hpp"

using namespace stratwave;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eta eta_of(double v) { return Eta::from_value(v, 0.25); }
}  // namespace

TEST_CASE("acoustic frequency closed form") {
    CHECK(acoustic_frequency({1, 0, 1}) ==
          doctest::Approx(kTwoPi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(acoustic_frequency({1, 0, 0}) == doctest::Approx(kTwoPi));
    CHECK_THROWS_AS(acoustic_frequency({0, 0, 0}), ZeroMode);
}

TEST_CASE("fast frequencies: eta -> 0 collapse and quartic residual") {
    auto f0 = fast_frequencies({1, 0, 1}, eta_of(0.0));
    CHECK(f0.omega_gw == 0.0);
    CHECK(f0.omega_aw == doctest::Approx(kTwoPi * std::sqrt(2.0)));

    WaveIndex k{1, 0, 1};
    auto f = fast_frequencies(k, eta_of(0.1));
    const double P = k.kh_norm() * k.kh_norm();
    const double Z = k.kz_phys() * k.kz_phys();
    const double e = 0.01;
    auto quartic = [&](double w) {
        double w2 = w * w;
        return w2 * w2 - (P + Z + e) * w2 + e * P;
    };
    // relative to the largest quartic coefficient scale at this root
    CHECK(std::abs(quartic(f.omega_gw)) < 1e-12 * e * P);
    CHECK(std::abs(quartic(f.omega_aw)) <
          1e-12 * (P + Z + e) * f.omega_aw * f.omega_aw);

    // Companion-matrix root oracle for the quadratic in w^2.
    Eigen::Matrix2d comp;
    comp << 0.0, -e * P, 1.0, P + Z + e;
    Eigen::VectorXcd roots = comp.eigenvalues();
    double lo = std::min(roots(0).real(), roots(1).real());
    double hi = std::max(roots(0).real(), roots(1).real());
    CHECK(f.omega_gw == doctest::Approx(std::sqrt(lo)).epsilon(1e-12));
    CHECK(f.omega_aw == doctest::Approx(std::sqrt(hi)).epsilon(1e-12));

    CHECK_THROWS_AS(fast_frequencies({0, 0, 0}, eta_of(0.1)), ZeroMode);
    CHECK_THROWS_AS(gw_frequency({1, 0, 0}, eta_of(0.1)), DomainError);
    CHECK_THROWS_AS(gw_frequency({0, 0, 1}, eta_of(0.1)), DomainError);
}

TEST_CASE("eigenvalue pinching for |index| <= 8") {
    Eta eta = eta_of(0.05);
    for (int kx = -8; kx <= 8; ++kx)
        for (int ky = -8; ky <= 8; ++ky)
            for (int kz = 0; kz <= 8; ++kz) {
                WaveIndex k{kx, ky, kz};
                if (k.is_zero()) continue;
                auto p = pinching_check(k, eta);
                CHECK(p.aw_sq_excess >= 0.0);
                CHECK(p.aw_sq_excess <= eta.value * eta.value * (1 + 1e-15));
                if (kz != 0) CHECK(p.aw_sq_excess > 0.0);
                CHECK(p.omega_gw >= 0.0);
                CHECK(p.omega_gw <= eta.value * (1 + 1e-15));
            }
}

TEST_CASE("Vieta identities for the quartic roots") {
    Eta eta = eta_of(0.07);
    for (WaveIndex k : {WaveIndex{1, 0, 1}, WaveIndex{3, -2, 5},
                        WaveIndex{0, 1, 4}, WaveIndex{2, 2, 0}}) {
        auto f = fast_frequencies(k, eta);
        double P = k.kh_norm() * k.kh_norm();
        double Z = k.kz_phys() * k.kz_phys();
        double e = eta.value * eta.value;
        double prod = f.omega_gw * f.omega_gw * f.omega_aw * f.omega_aw;
        double sum = f.omega_gw * f.omega_gw + f.omega_aw * f.omega_aw;
        CHECK(prod == doctest::Approx(e * P).epsilon(1e-12));
        CHECK(sum == doctest::Approx(P + Z + e).epsilon(1e-12));
    }
}

TEST_CASE("soundproof gw frequency and its gap bound") {
    WaveIndex k{1, 0, 1};
    CHECK(soundproof_gw_frequency(k, eta_of(0.1)) ==
          doctest::Approx(0.1 / std::sqrt(2.0)).epsilon(1e-14));
    for (double ev : {0.3, 0.1, 0.01})
        CHECK(soundproof_gw_frequency(k, eta_of(ev)) <= ev);
    CHECK_THROWS_AS(soundproof_gw_frequency({0, 0, 1}, eta_of(0.1)),
                    DomainError);

    // 0 < omega_sp - omega_gw <= C eta^3 with C the leading coefficient
    // |k_h||k_z|^2outer/(2|k|^5) plus slack for the higher-order tail.
    const double kh = k.kh_norm(), kz = k.kz_phys();
    const double kn = std::sqrt(kh * kh + kz * kz);
    const double lead = kh * kz * kz / (2.0 * std::pow(kn, 5));
    for (double ev : {0.2, 0.1, 0.05, 0.01}) {
        double gap = soundproof_gw_frequency(k, eta_of(ev)) -
                     gw_frequency(k, eta_of(ev));
        CHECK(gap > 0.0);
        CHECK(gap <= 1.1 * lead * ev * ev * ev);
    }
}

TEST_CASE("eigen-residuals of closed-form modes against assembled operators") {
    auto res = make_resolution(12);
    for (double ev : {0.2, 0.05}) {
        Eta eta = eta_of(ev);
        for (WaveIndex k : {WaveIndex{1, 0, 1}, WaveIndex{2, -1, 3},
                            WaveIndex{0, 0, 2}, WaveIndex{3, 1, 0},
                            WaveIndex{0, 2, 1}, WaveIndex{1, 1, 1}}) {
            for (auto& mode : testutil::enumerate_modes_at(k, eta)) {
                State u = place_mode(mode, res);
                State lu = testutil::apply_Leps(u, ev);
                State want = u;
                want *= 1.0;
                // residual L u - i omega u
                State r = lu;
                for (int c = 0; c < 5; ++c) {
                    auto& f = r.component(c);
                    for_each_index(res, [&](const WaveIndex&, std::size_t fl) {
                        f.raw()[fl] -= cplx{0.0, mode.omega} *
                                       u.component(c).raw()[fl];
                    });
                }
                double un = 0.0, rn = 0.0;
                for (int c = 0; c < 5; ++c)
                    for (auto& z : r.component(c).raw()) rn += std::norm(z);
                for (int c = 0; c < 5; ++c)
                    for (auto& z : u.component(c).raw()) un += std::norm(z);
                CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(un));
            }
        }
    }
}

TEST_CASE("soundproof and pure acoustic residuals") {
    auto res = make_resolution(12);
    Eta eta = eta_of(0.1);
    WaveIndex k{2, 1, 3};

    for (int s : {+1, -1}) {
        auto mode = eigenvector(ModeKind::internal_wave(s, Flavor::Soundproof),
                                k, eta);
        ReducedState u(res);
        u.h.at(k.kx, k.ky, k.kz) = mode.vec[1];
        u.v1.at(k.kx, k.ky, k.kz) = mode.vec[2];
        u.v2.at(k.kx, k.ky, k.kz) = mode.vec[3];
        u.w.at(k.kx, k.ky, k.kz) = mode.vec[4];
        ReducedState lu = testutil::apply_Lsp_projected(u, eta.value);
        double rn = 0.0, un = 0.0;
        for (int c = 0; c < 4; ++c) {
            for_each_index(res, [&](const WaveIndex&, std::size_t fl) {
                rn += std::norm(lu.component(c).raw()[fl] -
                                cplx{0.0, mode.omega} *
                                    u.component(c).raw()[fl]);
                un += std::norm(u.component(c).raw()[fl]);
            });
        }
        CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(un));
    }

    for (int s : {+1, -1}) {
        auto mode = eigenvector(
            ModeKind::acoustic_wave(s, Flavor::PureAcoustic), k, eta);
        State u = place_mode(mode, res);
        State lu = testutil::apply_La(u);
        double rn = 0.0, un = 0.0;
        for (int c = 0; c < 5; ++c)
            for_each_index(res, [&](const WaveIndex&, std::size_t fl) {
                rn += std::norm(lu.component(c).raw()[fl] -
                                cplx{0.0, mode.omega} *
                                    u.component(c).raw()[fl]);
                un += std::norm(u.component(c).raw()[fl]);
            });
        CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(un));
    }
}

TEST_CASE("mean flow kernel and kz=0 acoustic branch shapes") {
    auto res = make_resolution(12);
    Eta eta = eta_of(0.2);

    auto mf1 = eigenvector(ModeKind::mean_flow(1), {1, 0, 1}, eta);
    State u = place_mode(mf1, res);
    State lu = testutil::apply_Leps(u, eta.value);
    double rn = 0.0;
    for (int c = 0; c < 5; ++c)
        for (auto& z : lu.component(c).raw()) rn += std::norm(z);
    CHECK(std::sqrt(rn) < 1e-12);

    auto aw = eigenvector(ModeKind::acoustic_wave(+1), {1, 0, 0}, eta_of(0.1));
    CHECK(aw.vec[1] == cplx{0.0, 0.0});
    CHECK(aw.vec[4] == cplx{0.0, 0.0});
    CHECK(std::abs(aw.vec[2] - cplx{1.0, 0.0}) < 1e-14);  // kh/omega, omega=|kh|
    CHECK(std::abs(aw.vec[3]) < 1e-14);

    CHECK_THROWS_AS(eigenvector(ModeKind::internal_wave(+1), {1, 0, 0},
                                eta_of(0.1)),
                    InadmissibleMode);
    CHECK_THROWS_AS(eigenvector(ModeKind::mean_flow(2), {1, 0, 1},
                                eta_of(0.1)),
                    InadmissibleMode);
}

TEST_CASE("internal wave eigenvector matches dense block eigensolve") {
    auto res = make_resolution(8);
    Eta eta = eta_of(0.05);
    WaveIndex k{1, 0, 1};
    auto M = testutil::dense_block(res, k, [&](const State& s) {
        return testutil::apply_Leps(s, eta.value);
    });
    auto mode = eigenvector(ModeKind::internal_wave(+1), k, eta);

    Eigen::ComplexEigenSolver<testutil::Mat5> es(M);
    int best = -1;
    double bestd = 1e300;
    for (int i = 0; i < 5; ++i) {
        double d = std::abs(es.eigenvalues()(i) - cplx{0.0, mode.omega});
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    REQUIRE(best >= 0);
    CHECK(bestd < 1e-10);
    testutil::Vec5 v = es.eigenvectors().col(best);
    v /= v(0);  // paper normalization Q = 1
    for (int c = 0; c < 5; ++c)
        CHECK(std::abs(v(c) - mode.vec[c]) < 1e-10 * (1.0 + std::abs(v(c))));
}

TEST_CASE("decompose picks out single eigenmodes and mean-flow shear") {
    auto res = make_resolution(8);
    Eta eta = eta_of(0.1);

    WaveIndex k{1, -2, 2};
    auto mode = eigenvector(ModeKind::acoustic_wave(-1), k, eta);
    State u = place_mode(mode, res);
    auto dec = decompose(u, eta);
    CHECK(std::abs(dec.amplitude(ModeKind::acoustic_wave(-1), k) - 1.0) <
          1e-12);
    double leak = 0.0;
    for_each_index(res, [&](const WaveIndex& kk, std::size_t fl) {
        auto& A = dec.at(fl);
        for (int j = 0; j < 4; ++j) leak = std::max(leak, std::abs(A.mf[j]));
        for (int j = 0; j < 2; ++j) {
            leak = std::max(leak, std::abs(A.gw[j]));
            bool self = (kk.kx == k.kx && kk.ky == k.ky && kk.kz == k.kz);
            if (!(self && j == 1)) leak = std::max(leak, std::abs(A.aw[j]));
        }
    });
    CHECK(leak < 1e-12);

    // v = cos(2 pi z) e1: only the third mean-flow family at (0,0,1).
    State shear(res);
    shear.v1.at(0, 0, 1) = 1.0;
    auto dec2 = decompose(shear, eta);
    CHECK(std::abs(dec2.amplitude(ModeKind::mean_flow(3), {0, 0, 1}) - 1.0) <
          1e-13);
    double other = 0.0;
    for_each_index(res, [&](const WaveIndex& kk, std::size_t fl) {
        auto& A = dec2.at(fl);
        for (int j = 0; j < 4; ++j) {
            if (kk.kx == 0 && kk.ky == 0 && kk.kz == 1 && j == 2) continue;
            other = std::max(other, std::abs(A.mf[j]));
        }
        for (int j = 0; j < 2; ++j)
            other = std::max(
                other, std::max(std::abs(A.gw[j]), std::abs(A.aw[j])));
    });
    CHECK(other < 1e-13);
}

TEST_CASE("decompose matches weighted Gram least-squares at every index") {
    auto res = make_resolution(8);
    Eta eta = eta_of(0.1);
    std::mt19937_64 rng(17);
    State u = testutil::random_state(res, rng);
    auto dec = decompose(u, eta);

    for_each_index(res, [&](const WaveIndex& k, std::size_t flat) {
        auto modes = testutil::enumerate_modes_at(k, eta);
        if (modes.empty()) return;
        testutil::Vec5 coeffs;
        for (int c = 0; c < 5; ++c)
            coeffs(c) = u.component(c).raw()[flat];
        Eigen::VectorXcd alpha =
            testutil::gram_amplitudes(modes, coeffs, k);
        for (std::size_t j = 0; j < modes.size(); ++j) {
            cplx got = dec.amplitude(modes[j].kind, k);
            CHECK(std::abs(got - alpha(int(j))) < 1e-9);
        }
    });
}

TEST_CASE("reconstruct inverts decompose; projections are orthogonal") {
    auto res = make_resolution(8);
    Eta eta = eta_of(0.1);
    std::mt19937_64 rng(99);
    State u = testutil::random_state(res, rng);

    State back = reconstruct(decompose(u, eta));
    CHECK(norm(back - u) <= 1e-10 * norm(u));

    State zero(res);
    CHECK(norm(reconstruct(decompose(zero, eta))) == 0.0);

    State sum = project(u, eta, BranchSet::only_mf()) +
                project(u, eta, BranchSet::only_gw()) +
                project(u, eta, BranchSet::only_aw());
    CHECK(norm(sum - u) <= 1e-10 * norm(u));

    State aw = project(u, eta, BranchSet::only_aw());
    CHECK(norm(project(aw, eta, BranchSet::only_mf())) <= 1e-12 * norm(u));
    CHECK(norm(project(aw, eta, BranchSet::only_gw())) <= 1e-12 * norm(u));
    State awaw = project(aw, eta, BranchSet::only_aw());
    CHECK(norm(awaw - aw) <= 1e-11 * norm(u));

    // well-prepared construction: removing aw leaves no acoustic content
    State wp = project(u, eta, BranchSet{true, true, false});
    CHECK(norm(project(wp, eta, BranchSet::only_aw())) <= 1e-12 * norm(u));

    // single-amplitude reconstruction equals the placed eigenvector
    WaveIndex k{2, 1, 1};
    auto mode = eigenvector(ModeKind::internal_wave(+1), k, eta);
    ModalDecomposition one(res, eta);
    one.at(one.flat_index(k)).gw[0] = 1.0;
    State placed = place_mode(mode, res);
    CHECK(norm(reconstruct(one) - placed) < 1e-12);
}

TEST_CASE("reduce_dimension and truncate") {
    auto res = make_resolution(12);
    std::mt19937_64 rng(5);
    State u = testutil::random_state(res, rng);

    ReducedState r = reduce_dimension(u);
    CHECK(inner_product(r, r) ==
          doctest::Approx(inner_product(u, u) -
                          field_inner_product(u.q, u.q))
              .epsilon(1e-13));

    State zero(res);
    CHECK(norm(reduce_dimension(zero)) == 0.0);

    State full = truncated(u, res.max_kx());
    CHECK(norm(full - u) < 1e-15);

    State t0 = truncated(u, 0);
    for_each_index(res, [&](const WaveIndex& k, std::size_t fl) {
        if (k.kx != 0 || k.ky != 0 || k.kz != 0)
            for (int c = 0; c < 5; ++c)
                CHECK(std::abs(t0.component(c).raw()[fl]) == 0.0);
    });

    double prev = -1.0;
    for (int K = 0; K <= res.max_kx(); ++K) {
        double err = norm(u - truncated(u, K));
        if (prev >= 0.0) CHECK(err <= prev + 1e-14);
        prev = err;
    }

    // idempotent and commutes with derivatives on retained modes
    State t2 = truncated(u, 2);
    CHECK(norm(truncated(t2, 2) - t2) == 0.0);
    SpectralField a = derivative(truncated(u, 2).q, Axis::X);
    SpectralField b = truncated(State(u), 2).q;  // same field, via state
    SpectralField c = derivative(u.q, Axis::X);
    // truncate the derivative and compare
    State tmp(res);
    tmp.q = c;
    CHECK(field_norm(truncated(tmp, 2).q - a) < 1e-14);
}

TEST_CASE("soundproof decomposition round trip on divergence-free states") {
    auto res = make_resolution(8);
    Eta eta = eta_of(0.1);
    std::mt19937_64 rng(55);
    ReducedState s = testutil::random_reduced(res, rng);
    leray_project(s.v1, s.v2, s.w);

    ReducedState back = sp_reconstruct(sp_decompose(s, eta));
    CHECK(norm(back - s) <= 1e-10 * norm(s));
}

TEST_CASE("gap report slopes and leading constants at (1,0,1)") {
    WaveIndex k{1, 0, 1};
    std::vector<double> etas = {1e-1, std::pow(10.0, -1.5), 1e-2,
                                std::pow(10.0, -2.5), 1e-3};
    std::vector<double> lx, law, lgw, lva, lvg;
    for (double ev : etas) {
        auto rep = mode_gap_report(k, eta_of(ev));
        CHECK(rep.aw_freq_gap > 0.0);
        CHECK(rep.gw_freq_gap > 0.0);
        lx.push_back(std::log(ev));
        law.push_back(std::log(rep.aw_freq_gap));
        lgw.push_back(std::log(rep.gw_freq_gap));
        lva.push_back(std::log(rep.aw_vec_gap));
        lvg.push_back(std::log(rep.gw_vec_gap));
    }
    CHECK(testutil::slope_fit(lx, law) == doctest::Approx(2.0).epsilon(0.025));
    CHECK(testutil::slope_fit(lx, lgw) == doctest::Approx(3.0).epsilon(0.017));
    CHECK(testutil::slope_fit(lx, lva) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(testutil::slope_fit(lx, lvg) == doctest::Approx(1.0).epsilon(0.05));

    // Leading coefficients of the frequency gaps.
    const double kh = k.kh_norm(), kz = k.kz_phys();
    const double kn = std::sqrt(kh * kh + kz * kz);
    auto rep = mode_gap_report(k, eta_of(1e-3));
    CHECK(rep.aw_freq_gap / 1e-6 ==
          doctest::Approx(kz * kz / (2.0 * kn * kn * kn)).epsilon(1e-4));
    CHECK(rep.gw_freq_gap / 1e-9 ==
          doctest::Approx(kh * kz * kz / (2.0 * std::pow(kn, 5)))
              .epsilon(1e-4));
}

TEST_CASE("renormalization flags follow the eta bookkeeping") {
    Eta eta = eta_of(0.1);
    CHECK(ModalDecomposition::renormalized_slot(ModeKind::internal_wave(+1),
                                                {1, 0, 1}));
    CHECK(ModalDecomposition::renormalized_slot(ModeKind::mean_flow(2),
                                                {0, 0, 2}));
    CHECK(!ModalDecomposition::renormalized_slot(ModeKind::mean_flow(2),
                                                 {0, 0, 0}));
    CHECK(!ModalDecomposition::renormalized_slot(ModeKind::acoustic_wave(+1),
                                                 {1, 0, 1}));

    auto res = make_resolution(8);
    WaveIndex k{1, 0, 1};
    State u = place_mode(eigenvector(ModeKind::internal_wave(+1), k, eta), res);
    auto dec = decompose(u, eta);
    CHECK(std::abs(dec.renormalized_amplitude(ModeKind::internal_wave(+1), k) -
                   1.0 / eta.value) < 1e-10 / eta.value);
}
