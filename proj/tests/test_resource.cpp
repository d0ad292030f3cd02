#include <doctest.h>

#include <cmath>
#include <vector>

#include <json.hpp>

#include "snt/resource.hpp"

using namespace snt;

TEST_CASE("bias model fit recovers known coefficients") {
    const double a = 0.7, b = 1e-4;
    std::vector<std::pair<double, double>> pts;
    for (double x : {0.05, 0.1, 0.2, 0.4, 0.8}) pts.push_back({x, a * a * x * x * x * x + b});
    BiasModel m = fit_bias_model(pts, b);
    CHECK(m.a == doctest::Approx(a).epsilon(0.10));
    CHECK(m.b == b);

    // all points inside the shot floor: no quartic component claimed
    std::vector<std::pair<double, double>> flat;
    for (double x : {0.01, 0.03, 0.1, 0.3}) flat.push_back({x, b});
    BiasModel f = fit_bias_model(flat, b);
    CHECK(f.a == 0.0);
    CHECK(f.b == b);

    CHECK_THROWS_AS(fit_bias_model({{0.1, 1e-3}, {0.2, 1e-3}, {0.3, 1e-3}}, 0.0),
                    std::invalid_argument);
    std::vector<std::pair<double, double>> narrow{
        {0.1, 1e-3}, {0.12, 1e-3}, {0.15, 1e-3}, {0.2, 1e-3}};
    CHECK_THROWS_AS(fit_bias_model(narrow, 0.0), std::invalid_argument);

    std::vector<double> xs, ys;
    for (double x : {0.1, 0.2, 0.4, 0.8, 1.6}) {
        xs.push_back(x);
        ys.push_back(3.0 * std::pow(x, 2.0));
    }
    CHECK(loglog_slope(xs, ys) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("gate-count model favors the lowest-footprint grid encoding") {
    double n = 100;
    double dk = tqg_count_formula(EncodingKind::DK, 100, true);
    CHECK(dk < tqg_count_formula(EncodingKind::VC, 100, true));
    CHECK(dk < tqg_count_formula(EncodingKind::HX, 100, true));
    CHECK(dk < tqg_count_formula(EncodingKind::JW, 100, true));
    CHECK(dk < tqg_count_formula(EncodingKind::LE, 100, true));
    CHECK(dk == doctest::Approx(20 * n - 36 * 10 + 18));
}

TEST_CASE("rmse prediction is monotone in steps and fidelity") {
    HardwareProfile hw;
    Lattice l{4, 4};
    double prev = 0;
    for (std::size_t steps : {2, 4, 8, 16}) {
        double r = predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, steps, steps, hw).rmse;
        CHECK(r >= prev);
        prev = r;
    }
    double worse = 2;
    for (double f : {0.999, 0.9995, 0.9999, 1.0}) {
        HardwareProfile h = hw;
        h.f_avg_tqg = f;
        double r = predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, 10, 10, h).rmse;
        CHECK(r <= worse);
        worse = r;
    }

    // perfect gates leave only the sampling terms
    HardwareProfile perfect = hw;
    perfect.f_avg_tqg = 1.0;
    RmsePrediction p = predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, 10, 10, perfect);
    CHECK(p.lambda == 0.0);
    CHECK(p.c_total == doctest::Approx(1.5));
    double n_s = double(perfect.n_shots) / double(perfect.n_circuits);
    double expect_var = 1.5 * 1.5 / n_eff(double(perfect.n_circuits), n_s);
    CHECK(p.variance == doctest::Approx(expect_var).epsilon(1e-12));

    CHECK_THROWS_AS(predict_rmse(EncodingKind::DK, QemProtocol::PS, l, 10, 10, hw),
                    std::invalid_argument);
    HardwareProfile bad = hw;
    bad.n_circuits = bad.n_shots + 1;
    CHECK_THROWS_AS(predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, 10, 10, bad),
                    std::invalid_argument);
}

TEST_CASE("tailored bias depends only on the per-window rate") {
    HardwareProfile hw;
    hw.f_avg_tqg = 0.9992;
    Lattice l{4, 4};
    // scaling rounds with depth keeps lambda per window fixed
    RmsePrediction a = predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, 5, 4, hw);
    RmsePrediction b = predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, 10, 9, hw);
    RmsePrediction c = predict_rmse(EncodingKind::DK, QemProtocol::Snt, l, 20, 19, hw);
    CHECK(b.lambda == doctest::Approx(2 * a.lambda));
    CHECK(a.lambda_prime == doctest::Approx(b.lambda_prime).epsilon(1e-12));
    CHECK(a.bias_sq == doctest::Approx(b.bias_sq).epsilon(1e-12));
    CHECK(b.bias_sq == doctest::Approx(c.bias_sq).epsilon(1e-12));
    // while the sampling cost still grows with the total rate
    CHECK(b.c_total > a.c_total);
}

TEST_CASE("fidelity and depth anchors") {
    HardwareProfile hw;
    double f = required_fidelity(Lattice{6, 6}, 15, QemProtocol::Snt, 0.05, EncodingKind::DK, hw);
    CHECK(f >= 0.9990);
    CHECK(f <= 0.9997);

    // a perfect gate set is budget-limited, not noise-limited
    std::size_t cap =
        max_trotter(1.0, 0.05, EncodingKind::DK, QemProtocol::Snt, Lattice{6, 6}, hw);
    CHECK(cap == (1u << 20));

    // the tailored protocol reaches deeper circuits in the mid-fidelity band
    std::size_t snt =
        max_trotter(0.9995, 0.05, EncodingKind::DK, QemProtocol::Snt, Lattice{6, 6}, hw);
    std::size_t sv =
        max_trotter(0.9995, 0.05, EncodingKind::DK, QemProtocol::SV, Lattice{6, 6}, hw);
    std::size_t pec =
        max_trotter(0.9995, 0.05, EncodingKind::DK, QemProtocol::PecFull, Lattice{6, 6}, hw);
    CHECK(snt >= sv);
    CHECK(snt >= pec);
    CHECK(snt >= 10);

    CHECK(max_trotter(0.97, 0.05, EncodingKind::DK, QemProtocol::Snt, Lattice{6, 6}, hw) == 0);
    CHECK_THROWS_AS(required_fidelity(Lattice{6, 6}, 15, QemProtocol::Snt, 1e-9,
                                      EncodingKind::DK, hw),
                    std::runtime_error);
}

TEST_CASE("strategy grid reproduces the qualitative regions") {
    HardwareProfile few;
    few.n_circuits = 500;
    auto low = phase_diagram({Lattice{6, 6}}, {0.9995}, 10, few);
    REQUIRE(low.size() == 1);
    REQUIRE(low[0].feasible);
    CHECK(low[0].encoding == EncodingKind::DK);
    CHECK(low[0].protocol == QemProtocol::SV);

    HardwareProfile many;
    auto high = phase_diagram({Lattice{6, 6}}, {0.9999, 0.99995}, 10, many);
    for (const auto& s : high) {
        REQUIRE(s.feasible);
        CHECK(s.encoding == EncodingKind::DK);
        CHECK(s.protocol == QemProtocol::PecFull);
    }

    auto chain = phase_diagram({Lattice{6, 2}, Lattice{10, 2}}, {0.999, 0.9995, 0.9999}, 10,
                               many);
    for (const auto& s : chain) {
        if (!s.feasible) continue;
        bool one_dim =
            s.encoding == EncodingKind::JW || s.encoding == EncodingKind::LE;
        CHECK(one_dim);
    }

    // hopeless cells are marked rather than filled with the least-bad choice
    auto dead = phase_diagram({Lattice{6, 6}}, {0.99}, 10, few);
    CHECK(!dead[0].feasible);

    // the winner is the argmin over the candidate set
    auto cell = phase_diagram({Lattice{6, 6}}, {0.9996}, 10, many);
    REQUIRE(cell[0].feasible);
    HardwareProfile at = many;
    at.f_avg_tqg = 0.9996;
    ResourceModel model = default_resource_model();
    for (EncodingKind k : {EncodingKind::JW, EncodingKind::LE, EncodingKind::VC,
                           EncodingKind::DK, EncodingKind::HX})
        for (QemProtocol p : {QemProtocol::SV, QemProtocol::Snt, QemProtocol::PecFull}) {
            RmsePrediction pred = predict_rmse(k, p, Lattice{6, 6}, 10, 10, at, model);
            if (!pred.feasible || pred.rmse > model.rmse_ceiling) continue;
            CHECK(cell[0].prediction.rmse <= pred.rmse * (1 + 1e-9));
        }
}

TEST_CASE("full-inversion cost ceiling marks the white region") {
    HardwareProfile hw;
    hw.f_avg_tqg = 0.9990;
    RmsePrediction p =
        predict_rmse(EncodingKind::DK, QemProtocol::PecFull, Lattice{6, 6}, 15, 15, hw);
    CHECK(p.c_total * p.c_total > 1e6);
    CHECK(!p.feasible);
}

TEST_CASE("grid emitters") {
    HardwareProfile hw;
    auto grid = phase_diagram({Lattice{4, 4}, Lattice{6, 6}}, {0.9995, 0.9999}, 10, hw);
    std::string csv = phase_csv(grid);
    CHECK(csv.rfind("width,height,fidelity,encoding,protocol,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    std::string manifest =
        phase_manifest_json({Lattice{4, 4}}, {0.9995}, 10, hw, default_resource_model());
    auto j = nlohmann::json::parse(manifest);
    CHECK(j["n_trotter"] == 10);
    CHECK(j["model"]["encodings"].size() == 5);
    CHECK(double(j["model"]["encodings"]["DK"]["beta_snt"]) == doctest::Approx(0.81));
}
