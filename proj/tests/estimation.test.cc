// Copyright 2026 The paulimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "paulimit/estimation.h"

#include "gtest/gtest.h"
#include "oracles.h"
#include "paulimit/errors.h"

using namespace paulimit;
using namespace paulimit_test;

namespace {

std::vector<size_t> range(size_t lo, size_t hi) {
    std::vector<size_t> out;
    for (size_t m = lo; m <= hi; m++) {
        out.push_back(m);
    }
    return out;
}

std::vector<BasisIndex> all_inputs(size_t n) {
    std::vector<BasisIndex> out;
    for (BasisIndex in = 0; in < ((BasisIndex)1 << n); in++) {
        out.push_back(in);
    }
    return out;
}

}  // namespace

TEST(estimation, aggregate_examples) {
    std::vector<CountsRecord> one{{2, 0, 0, 10, {{0, 10}}}};
    EXPECT_EQ(aggregate(one, 2, 0, 1).q_hat, (std::vector<double>{1, 0}));

    std::vector<CountsRecord> two{{2, 0, 0, 10, {{0, 10}}}, {2, 0, 1, 4, {{1, 4}}}, {3, 0, 0, 4, {{1, 4}}}};
    auto avg = aggregate(two, 2, 0, 1);
    EXPECT_EQ(avg.q_hat, (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(avg.circuits, 2u);
    EXPECT_THROW(aggregate(two, 5, 0, 1), CoverageError);

    auto cells = aggregate_all(two, 1);
    EXPECT_EQ(cells.size(), 2u);
    EXPECT_EQ(cells.at({2, 0}).q_hat, avg.q_hat);
}

TEST(estimation, spectralize_examples) {
    EXPECT_EQ(spectralize({1, 0, basis_vector(4, 0), 1}), std::vector<double>(4, 1.0));
    EXPECT_EQ(spectralize({1, 3, basis_vector(4, 3), 1}), std::vector<double>(4, 1.0));

    std::mt19937_64 rng(41);
    auto q = random_simplex(rng, 4);
    for (BasisIndex in = 0; in < 4; in++) {
        Dense Pi = Dense::Zero(4, 4);
        for (size_t i = 0; i < 4; i++) {
            for (size_t j = 0; j < 4; j++) {
                Pi(i, j) = (i ^ j) == in ? 1 : 0;
            }
        }
        auto expected = dense_apply(dense_walsh(2) * Pi, q);
        auto got = spectralize({1, in, q, 1});
        EXPECT_LT(max_abs_diff(got, expected), 1e-12);
        EXPECT_EQ(got[0], 1.0);
    }
}

TEST(estimation, fit_decay_exact_series) {
    std::map<size_t, std::vector<double>> series;
    for (size_t m = 1; m <= 50; m++) {
        series[m] = {1.0, 0.95 * std::pow(0.99, (double)m), 0.9, -0.5 * std::pow(0.9, (double)m)};
    }
    auto fit = fit_decay(series, range(1, 50));
    EXPECT_EQ(fit.A[0], 1.0);
    EXPECT_EQ(fit.lambda[0], 1.0);
    EXPECT_NEAR(fit.A[1], 0.95, 1e-6);
    EXPECT_NEAR(fit.lambda[1], 0.99, 1e-6);
    EXPECT_NEAR(fit.A[2], 0.9, 1e-12);
    EXPECT_NEAR(fit.lambda[2], 1.0, 1e-12);
    EXPECT_NEAR(fit.A[3], -0.5, 1e-6);
    EXPECT_NEAR(fit.lambda[3], 0.9, 1e-6);
    EXPECT_EQ(fit.diagnostics[1].points_used, 50u);
    EXPECT_LT(fit.diagnostics[1].residual, 1e-10);
}

TEST(estimation, fit_decay_clamps_and_flags) {
    std::map<size_t, std::vector<double>> series;
    for (size_t m = 1; m <= 10; m++) {
        // Growing coefficient clamps to 1; coefficient 2 is below the fit threshold except at m = 1;
        // coefficient 3 is identically zero.
        series[m] = {1.0, 0.5 * std::pow(1.01, (double)m), m == 1 ? 0.3 : 1e-9, 0.0};
    }
    auto fit = fit_decay(series, range(1, 10));
    EXPECT_EQ(fit.lambda[1], 1.0);
    EXPECT_NEAR(fit.A[1], 0.5 * std::pow(1.01, 5.5), 1e-9);
    EXPECT_TRUE(fit.diagnostics[2].underdetermined);
    EXPECT_EQ(fit.lambda[2], LAMBDA_MIN);
    EXPECT_EQ(fit.A[2], 0.3);
    EXPECT_EQ(fit.diagnostics[2].points_used, 1u);
    EXPECT_TRUE(fit.diagnostics[3].underdetermined);
    EXPECT_EQ(fit.A[3], 0.0);
    for (double l : fit.lambda) {
        EXPECT_GE(l, LAMBDA_MIN);
        EXPECT_LE(l, 1.0);
    }
}

TEST(estimation, fit_decay_errors) {
    std::map<size_t, std::vector<double>> series{{1, {1.0, 0.5}}, {2, {1.0, 0.25}}};
    std::vector<size_t> one{1};
    EXPECT_THROW(fit_decay(series, one), DomainError);
    std::vector<size_t> dup{1, 1};
    EXPECT_THROW(fit_decay(series, dup), DomainError);
    std::vector<size_t> missing{1, 3};
    EXPECT_THROW(fit_decay(series, missing), CoverageError);
}

TEST(estimation, noiseless_pipeline_is_exact) {
    std::mt19937_64 rng(42);
    for (size_t n = 1; n <= 4; n++) {
        size_t dim = (size_t)1 << n;
        NoiseModel planted;
        planted.num_qubits = n;
        for (BasisIndex in = 0; in < dim; in++) {
            planted.inputs[in] = {random_near_identity(rng, dim, 0.3), fwht(random_near_identity(rng, dim, 0.2))};
        }
        std::map<CellKey, std::vector<double>> exact;
        auto depths = range(1, 12);
        for (auto m : depths) {
            for (BasisIndex in = 0; in < dim; in++) {
                exact[{m, in}] = predict(planted, m, in);
            }
        }
        auto inputs = all_inputs(n);
        auto est = estimate_from_averages(exact, n, inputs, {depths, false, 1});
        for (BasisIndex in = 0; in < dim; in++) {
            EXPECT_LT(max_abs_diff(est.model.at(in).p, planted.at(in).p), 1e-6) << n << " " << in;
            EXPECT_LT(max_abs_diff(est.model.at(in).A, planted.at(in).A), 1e-6) << n << " " << in;
        }
    }
}

TEST(estimation, noiseless_device_gives_identity_model) {
    auto gt = preset_iid_bitflip(2, 0);
    auto records = generate_dataset(gt, {range(1, 5), 3, all_inputs(2), 64, 1, 1});
    auto inputs = all_inputs(2);
    auto est = estimate_model(records, 2, inputs, {range(1, 5), false, 1});
    for (BasisIndex in = 0; in < 4; in++) {
        EXPECT_LT(max_abs_diff(est.model.at(in).p, basis_vector(4, 0)), 1e-12);
        EXPECT_LT(max_abs_diff(est.model.at(in).A, std::vector<double>(4, 1.0)), 1e-12);
    }
}

TEST(estimation, spam_only_device_is_absorbed_by_A) {
    auto gt = preset_spam_only(2, 0.04);
    auto inputs = all_inputs(2);
    auto records = generate_dataset(gt, {range(1, 10), 200, inputs, 1024, 2, 1});
    auto est = estimate_model(records, 2, inputs, {range(1, 10), false, 1});
    auto A_true = gt.spam_diagonal();
    for (auto in : inputs) {
        EXPECT_LT(l1_distance(est.model.at(in).p, basis_vector(4, 0)), 0.01);
        EXPECT_LT(max_abs_diff(est.model.at(in).A, A_true), 0.01);
    }
}

TEST(estimation, planted_recovery_with_readout) {
    auto gt = preset_iid_bitflip(3, 0.02).with_readout(0.03);
    std::vector<BasisIndex> inputs{0};
    auto records = generate_dataset(gt, {range(1, 30), 200, inputs, 1024, 3, 1});
    auto est = estimate_model(records, 3, inputs, {range(1, 30), false, 1});
    EXPECT_LT(l1_distance(est.model.at(0).p, gt.rates), 0.02);
    EXPECT_LT(max_abs_diff(est.fits.at(0).lambda, fwht(gt.rates)), 0.005);
}

TEST(estimation, more_circuits_do_not_hurt) {
    auto gt = preset_correlated_pair(3, 0.02, 0.01, 0, 1).with_readout(0.02);
    std::vector<BasisIndex> inputs{0};
    std::vector<double> mean_l1;
    for (size_t K : {50, 200, 1000}) {
        double total = 0;
        for (uint64_t seed = 100; seed < 103; seed++) {
            auto records = generate_dataset(gt, {range(1, 20), K, inputs, 1024, seed, 1});
            auto est = estimate_model(records, 3, inputs, {range(1, 20), false, 1});
            total += l1_distance(est.model.at(0).p, gt.rates);
        }
        mean_l1.push_back(total / 3);
    }
    EXPECT_LE(mean_l1[1], mean_l1[0]);
    EXPECT_LE(mean_l1[2], mean_l1[1]);
}

TEST(estimation, average_rates_flag) {
    auto gt = preset_iid_bitflip(2, 0.03).with_readout(0.02);
    auto inputs = all_inputs(2);
    auto records = generate_dataset(gt, {range(1, 15), 200, inputs, 1024, 4, 1});
    auto per_input = estimate_model(records, 2, inputs, {range(1, 15), false, 1});
    auto averaged = estimate_model(records, 2, inputs, {range(1, 15), true, 1});
    const auto &p_avg = averaged.model.at(0).p;
    for (auto in : inputs) {
        EXPECT_EQ(averaged.model.at(in).p, p_avg);
        EXPECT_EQ(averaged.model.at(in).A, per_input.model.at(in).A);
        EXPECT_LT(l1_distance(per_input.model.at(in).p, p_avg), 0.01);
    }

    std::vector<BasisIndex> partial{0, 1};
    EXPECT_THROW(estimate_model(records, 2, partial, {range(1, 15), true, 1}), DomainError);
}

TEST(estimation, coverage_errors_name_missing_cells) {
    auto gt = preset_iid_bitflip(2, 0.03);
    std::vector<BasisIndex> inputs{0, 2};
    auto records = generate_dataset(gt, {{1, 2, 3}, 2, {0}, 64, 4, 1});
    try {
        estimate_model(records, 2, inputs, {{1, 2, 4}, false, 1});
        FAIL() << "expected CoverageError";
    } catch (const CoverageError &e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("(depth=4, input=00)"), std::string::npos) << msg;
        EXPECT_NE(msg.find("(depth=1, input=10)"), std::string::npos) << msg;
    }
}

TEST(estimation, rb_fit_examples) {
    EXPECT_EQ(rb_average_gate_error(1.0, 3), 0.0);
    EXPECT_NEAR(rb_average_gate_error(0.9, 1), 0.05, 1e-15);

    std::map<size_t, double> flat{{1, 0.7}, {2, 0.7}, {5, 0.7}};
    auto f = rb_fit(flat, 1);
    EXPECT_TRUE(f.degenerate);
    EXPECT_EQ(f.alpha, 1.0);
    EXPECT_EQ(f.r, 0.0);

    std::map<size_t, double> exact;
    for (size_t m = 1; m <= 100; m++) {
        exact[m] = 0.5 * std::pow(0.98, (double)m) + 0.5;
    }
    auto e = rb_fit(exact, 1);
    EXPECT_NEAR(e.alpha, 0.98, 1e-8);
    EXPECT_NEAR(e.A, 0.5, 1e-6);
    EXPECT_NEAR(e.B, 0.5, 1e-6);
    EXPECT_EQ(e.r, rb_average_gate_error(e.alpha, 1));

    std::map<size_t, double> short_series{{1, 0.9}, {2, 0.8}};
    EXPECT_THROW(rb_fit(short_series, 1), DomainError);
}

TEST(estimation, rb_fit_under_noise) {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> noise(0, 0.001);
    std::map<size_t, double> series;
    for (size_t m = 1; m <= 100; m++) {
        series[m] = 0.5 * std::pow(0.98, (double)m) + 0.5 + noise(rng);
    }
    auto fit = rb_fit(series, 1);
    EXPECT_NEAR(fit.alpha, 0.98, 1e-3);
    EXPECT_NEAR(fit.A, 0.5, 1e-2);
    EXPECT_NEAR(fit.B, 0.5, 1e-2);
    EXPECT_FALSE(fit.degenerate);
}

TEST(estimation, survival_series_from_dataset) {
    auto gt = preset_iid_bitflip(1, 0.02);
    auto records = generate_dataset(gt, {range(1, 40), 100, {1}, 1024, 5, 1});
    auto cells = aggregate_all(records, 1);
    auto series = survival_series(cells, 1);
    ASSERT_EQ(series.size(), 40u);
    auto fit = rb_fit(series, 1);
    // One qubit flipping with q per layer: survival = 0.5 (1 - 2q)^m + 0.5.
    EXPECT_NEAR(fit.alpha, 0.96, 0.005);
}
