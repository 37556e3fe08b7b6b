#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qgate/error.hpp"
#include "qgate/linalg.hpp"
#include "qgate/matrix_io.hpp"
#include "qgate/random.hpp"
#include "support.hpp"

using namespace qgate;
using qgate::testing::max_abs_diff;
using qgate::testing::naive_dagger;
using qgate::testing::naive_matmul;
using qgate::testing::random_matrix;

namespace {

constexpr cplx I{0.0, 1.0};

// Kolmogorov-Smirnov statistic of samples against U(-pi, pi].
double ks_uniform_phase(std::vector<double> phases) {
    std::sort(phases.begin(), phases.end());
    const double n = static_cast<double>(phases.size());
    double d = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double cdf = (phases[i] + std::numbers::pi) / (2.0 * std::numbers::pi);
        d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
    }
    return d;
}

std::vector<double> eigenphases(const ComplexMatrix& u) {
    Eigen::MatrixXcd m(u.rows(), u.cols());
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.cols(); ++j) m(i, j) = u(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::arg(es.eigenvalues()(i)));
    return out;
}

}  // namespace

TEST_SUITE("random") {
    TEST_CASE("streams are pure functions of seed, stream and counter") {
        RandomStream a(RandomSource{7, 3});
        RandomStream b(RandomSource{7, 3});
        for (int i = 0; i < 100; ++i) CHECK(a() == b());
        RandomStream c(RandomSource{7, 4});
        RandomStream d(RandomSource{7, 3});
        int same = 0;
        for (int i = 0; i < 100; ++i) same += c() == d();
        CHECK(same == 0);
    }

    TEST_CASE("derived streams differ by index and are stable") {
        const RandomSource root{11, 0};
        CHECK(root.derive(1) == root.derive(1));
        CHECK_FALSE(root.derive(1) == root.derive(2));
        CHECK_FALSE(RandomSource{11, 0}.derive(1) == RandomSource{12, 0}.derive(1));
    }

    TEST_CASE("uniforms lie in [0, 1) and normals have unit variance") {
        RandomStream s(RandomSource{1, 1});
        double sum = 0.0, sum2 = 0.0, csum2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = s.uniform();
            CHECK((u >= 0.0 && u < 1.0));
            const double z = s.normal();
            sum += z;
            sum2 += z * z;
            csum2 += std::norm(s.complex_normal());
        }
        CHECK(std::abs(sum / n) < 0.01);
        CHECK(std::abs(sum2 / n - 1.0) < 0.01);
        CHECK(std::abs(csum2 / n - 1.0) < 0.01);
    }
}

TEST_SUITE("complex_matrix") {
    TEST_CASE("construction checks shape and finiteness") {
        CHECK_THROWS_AS(ComplexMatrix(0, 3), DimensionError);
        CHECK_THROWS_AS(ComplexMatrix::from_data(2, 2, {1.0, 2.0, 3.0}), DimensionError);
        CHECK_THROWS_AS(ComplexMatrix::from_data(1, 1, {cplx(std::nan(""), 0.0)}), DimensionError);
        CHECK_THROWS_AS(ComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}), DimensionError);
        const ComplexMatrix m = ComplexMatrix::from_rows({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
        CHECK(m.rows() == 2);
        CHECK(m.cols() == 3);
        CHECK(m(1, 0) == cplx(4.0));
    }

    TEST_CASE("arithmetic") {
        const ComplexMatrix a = ComplexMatrix::from_rows({{1.0, I}});
        const ComplexMatrix b = ComplexMatrix::from_rows({{2.0, 1.0}});
        CHECK(a + b == ComplexMatrix::from_rows({{3.0, 1.0 + I}}));
        CHECK(a - b == ComplexMatrix::from_rows({{-1.0, I - 1.0}}));
        CHECK(cplx(2.0) * a == ComplexMatrix::from_rows({{2.0, 2.0 * I}}));
        CHECK_THROWS_AS(ComplexMatrix(2, 2) += ComplexMatrix(2, 3), DimensionError);
    }
}

TEST_SUITE("linalg") {
    TEST_CASE("dagger") {
        CHECK(dagger(ComplexMatrix::from_rows({{I}})) == ComplexMatrix::from_rows({{-I}}));
        CHECK(dagger(ComplexMatrix::identity(3)) == ComplexMatrix::identity(3));
        const ComplexMatrix a = random_matrix(4, 4, 1);
        CHECK(dagger(dagger(a)) == a);
        const ComplexMatrix r = random_matrix(2, 5, 2);
        CHECK(dagger(r) == naive_dagger(r));
    }

    TEST_CASE("matmul") {
        const ComplexMatrix a = random_matrix(3, 3, 3);
        CHECK(max_abs_diff(matmul(ComplexMatrix::identity(3), a), a) == 0.0);

        const ComplexMatrix l = random_matrix(2, 3, 4);
        const ComplexMatrix r = random_matrix(3, 2, 5);
        CHECK(max_abs_diff(matmul(l, r), naive_matmul(l, r)) <= 1e-14);

        const ComplexMatrix big_l = random_matrix(13, 17, 6);
        const ComplexMatrix big_r = random_matrix(17, 11, 7);
        CHECK(max_abs_diff(matmul(big_l, big_r), naive_matmul(big_l, big_r)) <= 1e-12);

        const ComplexVector x = testing::random_vector(17, 8);
        const ComplexVector y = matmul(big_l, x);
        const ComplexVector y_ref = testing::naive_matvec(big_l, x);
        for (std::size_t i = 0; i < y.dim(); ++i) CHECK(std::abs(y[i] - y_ref[i]) <= 1e-12);

        CHECK_THROWS_AS(matmul(l, l), DimensionError);
        CHECK_THROWS_AS(matmul(l, ComplexVector(2)), DimensionError);
    }

    TEST_CASE("frobenius_distance") {
        const ComplexMatrix a = random_matrix(3, 2, 9);
        CHECK(frobenius_distance(a, a) == 0.0);
        CHECK(frobenius_distance(ComplexMatrix::from_rows({{1.0}}), ComplexMatrix::from_rows({{0.0}})) == 1.0);
        CHECK(frobenius_distance(ComplexMatrix::from_rows({{0.0, I}, {0.0, 0.0}}), ComplexMatrix(2, 2)) == 1.0);
        CHECK_THROWS_AS(frobenius_distance(a, ComplexMatrix(2, 3)), DimensionError);
    }

    TEST_CASE("unitarity_defect") {
        CHECK(unitarity_defect(ComplexMatrix::identity(4)) == 0.0);
        const std::vector<cplx> diag{1.0, 0.0};
        CHECK(unitarity_defect(ComplexMatrix::diagonal(diag)) == doctest::Approx(1.0).epsilon(1e-15));
        const ComplexMatrix a = random_matrix(5, 5, 10);
        CHECK(unitarity_defect(a) == doctest::Approx(testing::naive_defect(a)).epsilon(1e-12));
        CHECK_THROWS_AS(unitarity_defect(ComplexMatrix(2, 3)), DimensionError);
    }

    TEST_CASE("haar_unitary is unitary and deterministic") {
        const ComplexMatrix one = haar_unitary(1, RandomSource{3, 0});
        CHECK(std::abs(std::abs(one(0, 0)) - 1.0) <= 1e-12);

        CHECK(haar_unitary(5, RandomSource{42, 0}) == haar_unitary(5, RandomSource{42, 0}));
        CHECK_FALSE(haar_unitary(5, RandomSource{42, 0}) == haar_unitary(5, RandomSource{43, 0}));

        for (std::size_t m : {2u, 7u, 16u, 33u, 64u}) {
            const ComplexMatrix u = haar_unitary(m, RandomSource{m, 1});
            CHECK(unitarity_defect(u) <= 1e-12);
            CHECK(testing::naive_defect(naive_dagger(u)) <= 1e-12);
        }
        CHECK_THROWS_AS(haar_unitary(0, RandomSource{}), DimensionError);
    }

    TEST_CASE("haar eigenphases are uniform") {
        // Pooled eigenphases of 2000 samples; 1.628 is the asymptotic
        // Kolmogorov critical value at significance 0.01.
        std::vector<double> phases;
        const RandomSource root{2024, 0};
        for (std::uint64_t s = 0; s < 2000; ++s) {
            const auto p = eigenphases(haar_unitary(16, root.derive(s)));
            phases.insert(phases.end(), p.begin(), p.end());
        }
        const double d = ks_uniform_phase(phases);
        CHECK(d * std::sqrt(static_cast<double>(phases.size())) < 1.628);

        // A single sample's first-column moduli: E|u_i1|^2 = 1/m.
        double mean = 0.0;
        for (std::uint64_t s = 0; s < 2000; ++s) mean += std::norm(haar_unitary(16, root.derive(s))(3, 0));
        CHECK(mean / 2000 == doctest::Approx(1.0 / 16).epsilon(0.1));
    }

    TEST_CASE("block") {
        const ComplexMatrix a = random_matrix(5, 5, 11);
        const ComplexMatrix b = block(a, 1, 2, 3, 2);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(b(i, j) == a(1 + i, 2 + j));
        CHECK_THROWS_AS(block(a, 4, 0, 2, 1), DimensionError);
    }
}

TEST_SUITE("matrix_io") {
    TEST_CASE("json round trip is bit exact") {
        ComplexMatrix a = random_matrix(3, 4, 12);
        a(0, 0) = {0.1, -1e-300};
        a(1, 1) = {1.0 / 3.0, std::nextafter(1.0, 2.0)};
        const nlohmann::json j = nlohmann::json::parse(matrix_to_json(a).dump());
        CHECK(matrix_from_json(j) == a);

        const ComplexVector v = testing::random_vector(6, 13);
        const ComplexVector w = vector_from_json(nlohmann::json::parse(vector_to_json(v).dump()));
        for (std::size_t i = 0; i < v.dim(); ++i) CHECK(w[i] == v[i]);
    }

    TEST_CASE("interleaved form") {
        const auto j = nlohmann::json::parse(R"({"rows": 1, "cols": 2, "data": [1, 2, 3, -4]})");
        CHECK(matrix_from_json(j) == ComplexMatrix::from_rows({{cplx(1, 2), cplx(3, -4)}}));
    }

    TEST_CASE("malformed input names the field") {
        const auto missing = nlohmann::json::parse(R"({"rows": 2, "re": [1, 2], "im": [0, 0]})");
        CHECK_THROWS_WITH_AS(matrix_from_json(missing, "weights"), doctest::Contains("weights.cols"), ParseError);
        const auto short_re = nlohmann::json::parse(R"({"rows": 1, "cols": 2, "re": [1], "im": [0, 0]})");
        CHECK_THROWS_WITH_AS(matrix_from_json(short_re, "weights"), doctest::Contains("weights.re"), ParseError);
        const auto bad_type = nlohmann::json::parse(R"({"rows": 1, "cols": 1, "re": ["a"], "im": [0]})");
        CHECK_THROWS_AS(matrix_from_json(bad_type), ParseError);
    }

    TEST_CASE("files") {
        const auto dir = std::filesystem::temp_directory_path() / "qgate_test_linalg";
        std::filesystem::create_directories(dir);
        const ComplexMatrix u = haar_unitary(4, RandomSource{5, 5});
        write_json_file(dir / "u.json", matrix_to_json(u));
        CHECK(load_unitary(dir / "u.json", "reservoir") == u);

        write_json_file(dir / "bad.json", matrix_to_json(cplx(0.5) * u));
        CHECK_THROWS_WITH_AS(load_unitary(dir / "bad.json", "reservoir"), doctest::Contains("reservoir"),
                             ValidationError);

        std::ofstream(dir / "trunc.json") << R"({"rows": 2, "cols")";
        CHECK_THROWS_AS(read_json_file(dir / "trunc.json"), ParseError);
        CHECK_THROWS_AS(read_json_file(dir / "absent.json"), Error);
        std::filesystem::remove_all(dir);
    }
}
