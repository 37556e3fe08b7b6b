#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgate/error.hpp"
#include "qgate/experiments.hpp"
#include "qgate/linalg.hpp"
#include "qgate/slm.hpp"
#include "support.hpp"

using namespace qgate;

namespace {

constexpr cplx I{0.0, 1.0};

TrainRun preset_run(const ScanConfig& preset, std::size_t m, std::uint64_t seed) {
    const GateSpec gate = gate_by_name(preset.gate, preset.gate_dim);
    const TrialStreams s = trial_streams(seed, m);
    const ComplexMatrix u = haar_unitary(m, s.reservoir);
    const TargetEmbedding t = embed_target(gate, m, EmbeddingMode::unitary, s.complement);
    const Dataset data = generate_dataset(t.target, preset.n_train, preset.n_valid, s.dataset,
                                          preset.logical_inputs ? gate.dim : 0);
    TrainConfig cfg = preset.trainer;
    cfg.seed = s.weights_seed;
    cfg.logical_dim = gate.dim;
    cfg.max_epochs = preset.epoch_budget;
    return constrained_train(u, data, cfg);
}

}  // namespace

TEST_CASE("encode_input") {
    const ComplexMatrix s = testing::random_matrix(5, 5, 1);
    const ComplexVector ones{1.0, 1.0, 1.0};
    const SlmEncoding e = encode_input(s, ones, 5);
    const ComplexVector lhs = matmul(e.encoded, plane_wave(3, 5));
    const ComplexVector rhs = matmul(s, rig_input(ones, 5));
    for (std::size_t i = 0; i < 5; ++i) CHECK(lhs[i] == rhs[i]);
    CHECK(e.base_operator == s);

    CHECK(encode_input(s, ComplexVector(3), 5).encoded == ComplexMatrix(5, 5));

    const ComplexVector x = testing::random_vector(3, 2);
    const ComplexMatrix enc = encode_input(s, x, 5).encoded;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(enc(i, j) == (j < 3 ? s(i, j) * x[j] : cplx(0.0)));

    // S~ e_M reproduces S rig(x) for any input.
    const ComplexVector via_plane = matmul(enc, plane_wave(3, 5));
    const ComplexVector direct = testing::naive_matvec(s, rig_input(x, 5));
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(via_plane[i] - direct[i]) <= 1e-14);

    CHECK_THROWS_AS(encode_input(s, x, 4), DimensionError);
    CHECK_THROWS_AS(encode_input(s, testing::random_vector(6, 1), 5), DimensionError);
    CHECK_THROWS_AS(plane_wave(4, 3), DimensionError);
}

TEST_CASE("retract_phase") {
    CHECK(retract_phase(ComplexMatrix::from_rows({{3.0 + 4.0 * I}})) == ComplexMatrix::from_rows({{0.6 + 0.8 * I}}));
    CHECK(retract_phase(ComplexMatrix::from_rows({{0.0}})) == ComplexMatrix::from_rows({{1.0}}));

    const ComplexMatrix w = testing::random_matrix(6, 6, 3);
    const ComplexMatrix p = retract_phase(w);
    for (const cplx& z : p.data()) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-15);
    CHECK(testing::max_abs_diff(retract_phase(p), p) <= 1e-15);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(std::arg(p.data()[i]) - std::arg(w.data()[i])) <= 1e-15);

    const ComplexMatrix one_bit = retract_phase(w, 1);
    for (const cplx& z : one_bit.data()) CHECK((std::abs(z - 1.0) <= 1e-15 || std::abs(z + 1.0) <= 1e-15));
    const ComplexMatrix two_bit = retract_phase(w, 2);
    CHECK(testing::max_abs_diff(retract_phase(two_bit, 2), two_bit) <= 1e-15);
}

TEST_CASE("retract_amplitude") {
    const ComplexMatrix v = ComplexMatrix::from_rows({{0.4, 2.5 + 0.3 * I, -0.6, -3.0, 0.5}});
    CHECK(retract_amplitude(v, std::nullopt) == ComplexMatrix::from_rows({{0.4, 1.0, -0.6, -1.0, 0.5}}));
    const ComplexMatrix one_bit = retract_amplitude(v, 1);
    CHECK(one_bit(0, 0) == 0.0);
    CHECK(one_bit(0, 1) == 1.0);
    CHECK(one_bit(0, 2) == -1.0);
    CHECK(one_bit(0, 4) == 0.0);  // tie at 0.5 goes toward zero

    const ComplexMatrix w = cplx(1.5) * testing::random_matrix(8, 8, 4);
    const ComplexMatrix q = retract_amplitude(w, 8);
    for (const cplx& z : q.data()) {
        CHECK(z.imag() == 0.0);
        CHECK(std::abs(z.real()) <= 1.0);
        const double level = z.real() * 128.0;
        CHECK(level == std::round(level));
    }
    CHECK(retract_amplitude(q, 8) == q);
    const ComplexMatrix c = retract_amplitude(w, std::nullopt);
    CHECK(retract_amplitude(c, std::nullopt) == c);
}

TEST_CASE("constraint parsing and validation") {
    CHECK(constraint_kind_from_string("phase") == ModulatorConstraint::Kind::phase_only);
    CHECK(constraint_kind_from_string("amp") == ModulatorConstraint::Kind::amplitude_signed);
    CHECK(constraint_kind_from_string("none") == ModulatorConstraint::Kind::unconstrained);
    CHECK_THROWS_AS(constraint_kind_from_string("sign"), ConfigError);
    CHECK(describe(ModulatorConstraint::amplitude(8)) == "amp/8bit");
    CHECK_THROWS_AS(ModulatorConstraint::amplitude(0).validate(), ConfigError);
    CHECK_THROWS_AS((ModulatorConstraint{ModulatorConstraint::Kind::unconstrained, 4}.validate()), ConfigError);
    CHECK(retract(testing::random_matrix(3, 3, 5), ModulatorConstraint::none()) == testing::random_matrix(3, 3, 5));
}

TEST_CASE("unconstrained training is plain training") {
    const ComplexMatrix u = haar_unitary(5, RandomSource{1, 1});
    const Dataset data = generate_dataset(embed_target(gate_x(3), 5, EmbeddingMode::unitary, RandomSource{1, 2}).target,
                                          40, 20, RandomSource{1, 3});
    TrainConfig cfg;
    cfg.seed = 9;
    const TrainRun a = constrained_train(u, data, cfg);
    const TrainRun b = train(u, data, cfg);
    CHECK(a.weights == b.weights);
    CHECK(a.valid_history == b.valid_history);
}

TEST_CASE("constrained iterates stay feasible") {
    const ComplexMatrix u = haar_unitary(6, RandomSource{2, 1});
    const Dataset data = generate_dataset(embed_target(gate_x(3), 6, EmbeddingMode::unitary, RandomSource{2, 2}).target,
                                          30, 10, RandomSource{2, 3}, 3);
    TrainConfig cfg;
    cfg.max_epochs = 20;
    cfg.constraint = ModulatorConstraint::phase();
    const TrainRun phase = constrained_train(u, data, cfg);
    for (const cplx& z : phase.weights.data()) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-14);
    cfg.constraint = ModulatorConstraint::amplitude(3);
    const TrainRun amp = constrained_train(u, data, cfg);
    for (const cplx& z : amp.weights.data()) {
        CHECK(z.imag() == 0.0);
        CHECK(z.real() * 4.0 == std::round(z.real() * 4.0));
    }
}

TEST_CASE("phase-only modulator converges at M = 30") {
    const ScanConfig preset = preset_phase_only();
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 2; ++seed) total += preset_run(preset, 30, seed).valid_history.back();
    CHECK(total / 2.0 <= 1e-4);
}

TEST_CASE("signed amplitude modulator plateaus above 1e-4 at M = 30") {
    const ScanConfig preset = preset_amplitude(std::nullopt);
    const TrainRun run = preset_run(preset, 30, 1);
    REQUIRE(run.valid_history.size() == 1000);
    CHECK(run.valid_history.back() > 1e-4);
    const auto tail = std::vector<double>(run.valid_history.end() - 100, run.valid_history.end());
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    CHECK((*hi - *lo) <= 0.1 * run.valid_history.back());
}
