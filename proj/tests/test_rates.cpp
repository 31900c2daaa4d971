#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "padmm/rates.hpp"

using namespace padmm;

namespace {

std::vector<double> geometric(double q, int count, double e0 = 1.0) {
    std::vector<double> e;
    double v = e0;
    for (int k = 0; k < count; ++k) {
        e.push_back(v);
        v *= q;
    }
    return e;
}

std::vector<double> power_law(int count) {
    std::vector<double> e;
    e.push_back(2.0);  // k = 0 placeholder above the k^-2 curve
    for (int k = 1; k < count; ++k) e.push_back(1.0 / (static_cast<double>(k) * k));
    return e;
}

Trace synthetic_trace(const std::vector<double>& fk, MeritRegime regime) {
    Trace t;
    t.regime = regime;
    t.status = "max_iter";
    for (size_t j = 0; j < fk.size(); ++j) {
        TraceRecord r;
        r.k = static_cast<int>(j);
        r.x = {0.0};
        r.z = {0.0};
        r.y = {0.0};
        r.fk = fk[j];
        r.lr = fk[j];
        t.records.push_back(std::move(r));
    }
    return t;
}

}  // namespace

TEST_CASE("error_sequence subtracts F_* and clips rounding negatives") {
    std::vector<double> fk;
    for (int k = 0; k <= 30; ++k) fk.push_back(3.0 + std::pow(2.0, -k));
    fk.push_back(3.0);
    fk.push_back(3.0);
    const Trace t = synthetic_trace(fk, MeritRegime::Tightened);
    const ErrorSequence es = error_sequence(t, FStarMode::Known, 3.0);
    CHECK(es.e[0] == doctest::Approx(std::pow(2.0, -1)));
    CHECK(es.e.back() == 0.0);

    // constant trace: all zeros
    const Trace tc = synthetic_trace(std::vector<double>(10, 1.0), MeritRegime::Tightened);
    const ErrorSequence ec = error_sequence(tc, FStarMode::LastValue);
    for (double v : ec.e) CHECK(v == 0.0);
    CHECK(ec.stable_tail);
}

TEST_CASE("verify_recurrence on the geometric identity") {
    const auto e = geometric(0.5, 60);
    const RecurrenceResult r = verify_recurrence(e, 0.5, 1, 5);
    CHECK(r.ok);
    // (e_{k-1} - e_k)/e_k = (1-q)/q = 1 exactly for q = 1/2
    CHECK(r.c_e_max == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify_recurrence on k^-2 with theta = 3/4") {
    std::vector<double> e;
    for (int k = 0; k <= 1000; ++k) {
        e.push_back(k == 0 ? 2.0 : 1.0 / (static_cast<double>(k) * k));
    }
    const RecurrenceResult r = verify_recurrence(e, 0.75, 1, 100);
    CHECK(r.ok);
    CHECK(r.c_e_max == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("verify_recurrence: constant positive sequence is not ok") {
    const std::vector<double> e(40, 0.7);
    const RecurrenceResult r = verify_recurrence(e, 0.5, 1, 5);
    CHECK_FALSE(r.ok);
    CHECK(r.c_e_max == 0.0);
}

TEST_CASE("recurrence constant is scale-covariant: C_e(s e) = s^(1-2theta) C_e(e)") {
    const auto e = geometric(0.7, 80);
    for (double theta : {0.3, 0.5, 0.8}) {
        const double c1 = verify_recurrence(e, theta, 1, 10).c_e_max;
        std::vector<double> scaled;
        const double s = 37.5;
        for (double v : e) scaled.push_back(s * v);
        const double c2 = verify_recurrence(scaled, theta, 1, 10).c_e_max;
        CHECK(c2 == doctest::Approx(std::pow(s, 1.0 - 2.0 * theta) * c1).epsilon(1e-9));
    }
}

TEST_CASE("fit_loj_exponent recovers the synthetic exponents") {
    {
        const RateFit f = fit_loj_exponent(geometric(0.5, 200), 1);
        CHECK(std::fabs(f.theta_hat - 0.5) <= 0.02);
        CHECK_FALSE(f.finite_time);
    }
    {
        const RateFit f = fit_loj_exponent(power_law(1001), 1, 100, 1000);
        CHECK(std::fabs(f.theta_hat - 0.75) <= 0.03);
    }
    {
        // lag-2 variant of the geometric family still fits theta = 1/2
        const RateFit f = fit_loj_exponent(geometric(0.6, 200), 2);
        CHECK(std::fabs(f.theta_hat - 0.5) <= 0.02);
    }
}

TEST_CASE("exact zero tail is classified finite-time") {
    auto e = geometric(0.5, 40);
    for (int i = 0; i < 30; ++i) e.push_back(0.0);
    const RateFit f = fit_loj_exponent(e, 1);
    CHECK(f.finite_time);
    CHECK(f.window_hi < 40);  // window truncated before the zeros
}

TEST_CASE("fit rejects short inputs") {
    CHECK_THROWS_AS(fit_loj_exponent(geometric(0.5, 8), 1), std::invalid_argument);
}

TEST_CASE("rate envelopes hold on matching synthetic sequences") {
    {
        const auto e = geometric(0.5, 120);
        const RecurrenceResult r = verify_recurrence(e, 0.5, 1, 3);
        const auto v = rate_envelope_check(e, 0.5, r.c_e_max, 1, 3);
        CHECK(v.empty());
    }
    {
        std::vector<double> e = power_law(1001);
        const RecurrenceResult r = verify_recurrence(e, 0.75, 1, 100);
        const auto v = rate_envelope_check(e, 0.75, r.c_e_max, 1, 100);
        CHECK(v.empty());
    }
}

TEST_CASE("inflated C_e breaks the envelope") {
    const auto e = geometric(0.5, 120);
    const RecurrenceResult r = verify_recurrence(e, 0.5, 1, 3);
    const auto v = rate_envelope_check(e, 0.5, 10.0 * r.c_e_max, 1, 3);
    CHECK_FALSE(v.empty());
}

TEST_CASE("envelope check validates theta") {
    const auto e = geometric(0.5, 50);
    CHECK_THROWS_AS(rate_envelope_check(e, 1.0, 1.0, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(rate_envelope_check(e, 0.5, 0.0, 1, 3), std::invalid_argument);
}

TEST_CASE("iterate_rate_check requires Tightened and C17 > 0") {
    const Trace t3 = synthetic_trace(std::vector<double>(20, 1.0), MeritRegime::Standard);
    ErrorSequence es;
    es.e = std::vector<double>(19, 0.0);
    ConstantsBundle c;
    const IterateRateReport r = iterate_rate_check(t3, es, 0.5, c);
    CHECK_FALSE(r.available);

    const Trace t4 = synthetic_trace(std::vector<double>(20, 1.0), MeritRegime::Tightened);
    const IterateRateReport r2 = iterate_rate_check(t4, es, 0.5, c);
    CHECK_FALSE(r2.available);  // C17 = 0 in a default bundle
    CHECK(r2.reason.find("C17") != std::string::npos);
}

TEST_CASE("stationary tail is trivially inside the iterate envelopes") {
    // constant trace at a point: all distances zero
    std::vector<double> fk(30, 2.0);
    Trace t = synthetic_trace(fk, MeritRegime::Tightened);
    ConstantsBundle c;
    c.C17 = 0.125;
    c.C20 = 7.0 / std::sqrt(c.C17) + 1.0 / c.C17;
    c.C21 = 0.5 * *c.C20;
    c.C22 = *c.C20;
    const ErrorSequence es = error_sequence(t, FStarMode::Known, 2.0);
    const IterateRateReport r = iterate_rate_check(t, es, 0.5, c);
    CHECK(r.available);
    CHECK(r.pass);
    CHECK(r.decay_class == "stationary");
}
