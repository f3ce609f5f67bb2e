#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gicb/errors.hpp"
#include "gicb/gaussian_system.hpp"
#include "gicb/verifiers.hpp"

using namespace gicb;

namespace {

GaussianSystem make_system(const std::vector<std::string>& names,
                           const Eigen::MatrixXd& cov) {
    return GaussianSystem(names, CovMatrix(cov));
}

GaussianSystem random_system(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = nd(rng);
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("V" + std::to_string(i));
    return make_system(names, g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(dim, dim));
}

} // namespace

TEST_CASE("differential entropy closed forms") {
    Eigen::MatrixXd one(1, 1);

    one(0, 0) = 1.0 / kTwoPiE;
    CHECK(make_system({"X"}, one).differential_entropy({"X"}).value ==
          doctest::Approx(0.0).epsilon(1e-12));

    one(0, 0) = 2.0 / kTwoPiE;
    CHECK(make_system({"X"}, one).differential_entropy({"X"}).value ==
          doctest::Approx(0.5).epsilon(1e-12));

    Eigen::MatrixXd two = Eigen::MatrixXd::Identity(2, 2) / kTwoPiE;
    CHECK(make_system({"A", "B"}, two).differential_entropy({"A", "B"}).value ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("differential entropy label errors and degeneracy") {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, 0.5, 0.5, 1.0;
    auto sys = make_system({"X", "Y"}, c);
    CHECK_THROWS_AS((void)sys.differential_entropy({"Q"}), LabelError);
    CHECK_THROWS_AS((void)sys.differential_entropy({}), LabelError);
    CHECK_THROWS_AS((void)sys.differential_entropy({"X", "X"}), LabelError);

    GaussianSystemBuilder b;
    b.add_variable("X", 1.0);
    b.add_linear("D", {{"X", 1.0}});
    auto dup = b.build();
    auto h = dup.differential_entropy({"X", "D"}); // X and D perfectly dependent
    CHECK(h.degenerate);
    CHECK(h.value == -std::numeric_limits<double>::infinity());
}

TEST_CASE("conditional covariance is the Schur complement") {
    Eigen::MatrixXd c(2, 2);
    c << 2.0, 1.0, 1.0, 2.0;
    auto sys = make_system({"Y", "S"}, c);
    CHECK(sys.conditional_cov({"Y"}, {"S"})(0, 0) == doctest::Approx(1.5).epsilon(1e-12));

    Eigen::MatrixXd ind(2, 2);
    ind << 3.0, 0.0, 0.0, 5.0;
    auto sys2 = make_system({"Y", "S"}, ind);
    CHECK(sys2.conditional_cov({"Y"}, {"S"})(0, 0) == doctest::Approx(3.0).epsilon(1e-12));

    // conditioning on an exact copy drives the variance to zero
    GaussianSystemBuilder b;
    b.add_variable("Y", 2.0);
    b.add_linear("S", {{"Y", 1.0}});
    auto self = b.build();
    CHECK(self.conditional_cov({"Y"}, {"S"})(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("conditional covariance stays PSD on random systems") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto sys = random_system(rng, 5);
        const auto cc = sys.conditional_cov({"V0", "V1"}, {"V2", "V3", "V4"});
        CHECK(cc.min_eigenvalue() >= -1e-10);
    }
}

TEST_CASE("mutual information closed forms") {
    GaussianSystemBuilder b;
    b.add_variable("X", 3.0);
    b.add_variable("Z", 1.0);
    b.add_linear("Y", {{"X", 1.0}, {"Z", 1.0}});
    auto sys = b.build();
    CHECK(sys.mutual_information({"X"}, {"Y"}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sys.mutual_information({"X"}, {"Z"}) == doctest::Approx(0.0).epsilon(1e-12));

    // receiver-1 rate with interference treated as noise, P1=10, h12^2=0.04, P2=20
    GaussianSystemBuilder b2;
    b2.add_variable("X1", 10.0);
    b2.add_variable("X2", 20.0);
    b2.add_variable("Z1", 1.0);
    b2.add_linear("Y1", {{"X1", 1.0}, {"X2", 0.2}, {"Z1", 1.0}});
    const double expected = 0.5 * std::log2(1.0 + 10.0 / 1.8); // SINR form
    CHECK(b2.build().mutual_information({"X1"}, {"Y1"}) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.3563).epsilon(1e-4));
}

TEST_CASE("mutual information of linearly dependent sets is infinite") {
    GaussianSystemBuilder b;
    b.add_variable("X", 1.0);
    b.add_variable("Z", 1.0);
    b.add_linear("Y", {{"X", 1.0}, {"Z", 1.0}});
    b.add_linear("S", {{"X", 1.0}, {"Z", 1.0}}); // S == Y
    auto sys = b.build();
    CHECK(std::isinf(sys.mutual_information({"Y"}, {"S"})));
    // but within-set redundancy stays finite
    CHECK(std::isfinite(sys.mutual_information({"X"}, {"Y", "S"})));
    CHECK(sys.mutual_information({"X"}, {"Y", "S"}) ==
          doctest::Approx(sys.mutual_information({"X"}, {"Y"})).epsilon(1e-12));
}

TEST_CASE("chain rule and nonnegativity on random systems") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> dim_d(4, 6);
    for (int i = 0; i < 1000; ++i) {
        auto sys = random_system(rng, dim_d(rng));
        LabelSet a{"V0"}, bset{"V1"}, cset{"V2"};
        if (sys.size() > 4) a.push_back("V3");
        const double lhs = sys.mutual_information(a, {"V1", "V2"});
        const double rhs = sys.mutual_information(a, cset) +
                           sys.conditional_mutual_information(a, bset, cset);
        CHECK(std::abs(lhs - rhs) <= 1e-9);
        CHECK(sys.mutual_information(a, bset) >= -1e-12);
    }
}

namespace {

GaussianSystem scalar_markov_system(double px, double vz, double vn, double e_nz) {
    Eigen::MatrixXd zn(2, 2);
    zn << vz, e_nz, e_nz, vn;
    GaussianSystemBuilder b;
    b.add_variable("X", px);
    b.add_block({"Z", "N"}, zn);
    b.add_linear("Y", {{"X", 1.0}, {"Z", 1.0}});
    b.add_linear("S", {{"X", 1.0}, {"N", 1.0}});
    return b.build();
}

} // namespace

TEST_CASE("markov test: scalar characterization E[NZ] = E[Z^2]") {
    // N = Z: S is a degraded version of Y
    CHECK(scalar_markov_system(1.0, 1.0, 1.0, 1.0).markov_test({"X"}, {"Y"}, {"S"}));
    // N independent of Z with E[NZ] = 0 != E[Z^2]
    CHECK_FALSE(scalar_markov_system(1.0, 1.0, 1.0, 0.0).markov_test({"X"}, {"Y"}, {"S"}));
    // S = Y + V, V independent
    GaussianSystemBuilder b;
    b.add_variable("X", 2.0);
    b.add_variable("Z", 1.0);
    b.add_variable("V", 0.7);
    b.add_linear("Y", {{"X", 1.0}, {"Z", 1.0}});
    b.add_linear("S", {{"Y", 1.0}, {"V", 1.0}});
    auto sys = b.build();
    CHECK(sys.conditional_mutual_information({"X"}, {"S"}, {"Y"}) <= 1e-9);
    CHECK(sys.markov_test({"X"}, {"Y"}, {"S"}));
}

TEST_CASE("markov/algebraic agreement on randomized scalar systems") {
    std::mt19937_64 rng(2008);
    std::uniform_real_distribution<double> ud(0.3, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double px = ud(rng), vz = ud(rng);
        double vn, e_nz;
        if (i % 2 == 0) {
            vn = vz + ud(rng) - 0.3;
            e_nz = vz; // exactly Markov by construction
        } else {
            do {
                vn = ud(rng);
                std::uniform_real_distribution<double> rd(-0.9, 0.9);
                e_nz = rd(rng) * std::sqrt(vz * vn);
            } while (std::abs(e_nz - vz) < 1e-3);
        }
        const bool algebraic = std::abs(e_nz - vz) <= 1e-9;
        CHECK(scalar_markov_system(px, vz, vn, e_nz).markov_test({"X"}, {"Y"}, {"S"}) ==
              algebraic);
    }
}

TEST_CASE("scalar markov pair test equals the conjunction of single tests") {
    GaussianSystemBuilder b;
    b.add_variable("X", 1.5);
    b.add_variable("Z", 1.0);
    b.add_variable("V1", 0.5);
    b.add_variable("V2", 0.8);
    b.add_linear("Y", {{"X", 1.0}, {"Z", 1.0}});
    b.add_linear("S1", {{"Y", 1.0}, {"V1", 1.0}});
    b.add_linear("S2", {{"Y", 1.0}, {"V2", 1.0}});
    b.add_linear("T", {{"X", 1.0}, {"V2", 1.0}}); // not degraded
    auto sys = b.build();
    CHECK(sys.scalar_markov_pair_test("X", "Y", "S1", "S2"));
    CHECK_FALSE(sys.scalar_markov_pair_test("X", "Y", "S1", "T"));

    std::mt19937_64 rng(99);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 1000; ++i) {
        Eigen::MatrixXd g(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) g(r, c) = nd(rng);
        auto sys2 = make_system({"X", "Y", "S1", "S2"},
                                g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(4, 4));
        const bool pair = sys2.scalar_markov_pair_test("X", "Y", "S1", "S2");
        const bool both = sys2.markov_test({"X"}, {"Y"}, {"S1"}) &&
                          sys2.markov_test({"X"}, {"Y"}, {"S2"});
        CHECK(pair == both);
    }
}

namespace {

// Brute-force grid maximizer of the extremal objective over the feasible
// box, independent of the implementation path under test.
std::vector<double> oracle_grid_argmax(const std::vector<double>& powers, double sigma2,
                                       const std::vector<double>& lambdas, double width,
                                       double step) {
    const std::size_t m = powers.size();
    std::vector<double> center(m);
    for (std::size_t i = 0; i < m; ++i) center[i] = 0.5 * std::log2(kTwoPiE * powers[i]);
    std::vector<int> steps(m, static_cast<int>(std::round(width / step)));
    std::vector<int> counter(m, 0);
    std::vector<double> best = center, point(m);
    double best_val = -std::numeric_limits<double>::infinity();
    while (true) {
        for (std::size_t i = 0; i < m; ++i) point[i] = center[i] - width + counter[i] * step;
        bool ok = true;
        for (std::size_t i = 0; i < m; ++i) ok = ok && point[i] <= center[i] + 1e-12;
        if (ok) {
            const double v = extremal_objective(point, lambdas, sigma2);
            if (v > best_val) { best_val = v; best = point; }
        }
        std::size_t d = 0;
        while (d < m && ++counter[d] > steps[d]) counter[d++] = 0;
        if (d == m) break;
    }
    return best;
}

} // namespace

TEST_CASE("extremal inequality: M=1 grid maximizer and gradient") {
    const std::vector<double> p{2.0};
    const std::vector<double> lam{2.0 / 3.0}; // = P/(P + sigma2)
    auto v = verify_extremal_inequality(p, 1.0, lam);
    CHECK(v.passed);
    CHECK(v.maximizer_ok);
    CHECK(v.gradient_residual <= 1e-6);
    CHECK(std::abs(v.gradient_at_gaussian[0]) <= 1e-6);
    CHECK(v.gaussian_point[0] ==
          doctest::Approx(0.5 * std::log2(kTwoPiE * 2.0)).epsilon(1e-12));

    const auto oracle = oracle_grid_argmax(p, 1.0, lam, 2.0, 0.002);
    CHECK(std::abs(oracle[0] - v.gaussian_point[0]) <= 0.002 + 1e-12);
}

TEST_CASE("extremal inequality: M=2 grid maximizer at the Gaussian point") {
    const std::vector<double> p{1.0, 1.0};
    const std::vector<double> lam{1.0 / 3.0, 1.0 / 3.0};
    auto v = verify_extremal_inequality(p, 1.0, lam);
    CHECK(v.passed);
    const auto oracle = oracle_grid_argmax(p, 1.0, lam, 1.0, 0.01);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(oracle[i] - v.gaussian_point[i]) <= 0.01 + 1e-12);
        CHECK(std::abs(v.grid_maximizer[i] - v.gaussian_point[i]) <= 0.001 + 1e-12);
    }
}

TEST_CASE("extremal inequality: lambda below the threshold is rejected") {
    CHECK_THROWS_AS((void)verify_extremal_inequality({2.0}, 1.0, {0.5}), // < 2/3
                    PreconditionError);
}

TEST_CASE("EPI lower bound is tight for Gaussian inputs") {
    GaussianSystemBuilder b;
    b.add_variable("X", 1.0);
    b.add_variable("Z", 1.0);
    b.add_linear("Sum", {{"X", 1.0}, {"Z", 1.0}});
    auto sys = b.build();
    const auto bound = epi_lower_bound(sys.differential_entropy({"X"}), 1.0);
    CHECK(bound.value == doctest::Approx(0.5 * std::log2(kTwoPiE * 2.0)).epsilon(1e-12));
    CHECK(bound.value ==
          doctest::Approx(sys.differential_entropy({"Sum"}).value).epsilon(1e-12));

    // sigma2 = 0 returns the input unchanged
    const EntropyValue h{1.2345, false};
    CHECK(epi_lower_bound(h, 0.0).value == 1.2345);

    GaussianSystemBuilder b3;
    b3.add_variable("X", 3.0);
    const auto b3v = epi_lower_bound(b3.build().differential_entropy({"X"}), 1.0);
    CHECK(b3v.value == doctest::Approx(0.5 * std::log2(kTwoPiE * 4.0)).epsilon(1e-12));
}

TEST_CASE("worst-case noise equality for Gaussian inputs over a grid") {
    for (double p : {0.25, 1.0, 4.0, 20.0}) {
        for (double s2 : {0.05, 0.3, 0.7, 1.0}) {
            GaussianSystemBuilder b;
            b.add_variable("X", p);
            b.add_variable("Z", s2);
            b.add_linear("Sum", {{"X", 1.0}, {"Z", 1.0}});
            auto sys = b.build();
            const double lhs = sys.differential_entropy({"X"}).value -
                               sys.differential_entropy({"Sum"}).value;
            CHECK(lhs == doctest::Approx(0.5 * std::log2(p / (p + s2))).epsilon(1e-12));
        }
    }
}

TEST_CASE("verification suites pass and the fault hook breaks the named suite") {
    auto results = run_core_verification({});
    for (const auto& r : results) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.passed);
    }

    VerifyOptions broken;
    broken.inject_fault = "worst-case-noise";
    bool seen = false;
    for (const auto& r : run_core_verification(broken)) {
        if (r.name == "worst-case-noise") {
            seen = true;
            CHECK_FALSE(r.passed);
        } else {
            CHECK(r.passed);
        }
    }
    CHECK(seen);
}

TEST_CASE("repeated evaluation is bit-identical") {
    std::mt19937_64 rng(5);
    auto sys = random_system(rng, 5);
    const double a = sys.mutual_information({"V0", "V1"}, {"V2", "V3"});
    const double b = sys.mutual_information({"V0", "V1"}, {"V2", "V3"});
    CHECK(a == b);
}
