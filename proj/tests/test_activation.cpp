#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "samevo/activation.hpp"

using namespace samevo;

namespace {

// Independent reimplementation used as the oracle for every member.
double oracle(ActivationId id, double x) {
    switch (id) {
        case ActivationId::Sine: return std::sin(x);
        case ActivationId::NegativeSine: return -std::sin(x);
        case ActivationId::Absolute: return x < 0 ? -x : x;
        case ActivationId::NegativeAbsolute: return x < 0 ? x : -x;
        case ActivationId::Squared: return x * x;
        case ActivationId::NegativeSquared: return -(x * x);
        case ActivationId::SquaredAbsolute: return std::fabs(x) * std::fabs(x);
        case ActivationId::NegativeSquaredAbsolute: return -(std::fabs(x) * std::fabs(x));
        case ActivationId::Sigmoid: return 1.0 / (1.0 + std::exp(-4.9 * x));
        case ActivationId::Clamped: return x < -1 ? -1 : (x > 1 ? 1 : x);
        case ActivationId::Cubical: return x * x * x;
        case ActivationId::Exponential: return std::exp(x < -60 ? -60 : (x > 60 ? 60 : x));
        case ActivationId::Gaussian: return std::exp(-5.0 * x * x);
        case ActivationId::Hat: return std::fabs(x) >= 1 ? 0.0 : 1.0 - std::fabs(x);
        case ActivationId::Identity: return x;
        case ActivationId::Inverse: return std::fabs(x) < 1e-7 ? 0.0 : 1.0 / x;
        case ActivationId::Logarithmic: return std::log(x > 1e-7 ? x : 1e-7);
        case ActivationId::ReLU: return x > 0 ? x : 0.0;
        case ActivationId::SeLU:
            return x > 0 ? 1.0507 * x : 1.0507 * 1.6733 * (std::exp(x) - 1.0);
        case ActivationId::LeLU: return x > 0 ? x : 0.005 * x;
        case ActivationId::ELU: return x > 0 ? x : std::exp(x) - 1.0;
        case ActivationId::Softplus:
            if (x > 30.0) return x;
            if (x < -30.0) return 0.0;
            return std::log(1.0 + std::exp(x));
        case ActivationId::Tanh: return std::tanh(x);
    }
    return 0.0;
}

} // namespace

TEST_CASE("dictionary sizes and membership") {
    const auto& fd = dictionary_members(Dictionary::FD);
    const auto& rd = dictionary_members(Dictionary::RD);
    CHECK(fd.size() == 23);
    CHECK(rd.size() == 9);

    std::set<ActivationId> expected_rd = {
        ActivationId::Sine,    ActivationId::NegativeSine, ActivationId::Squared,
        ActivationId::NegativeSquared, ActivationId::Sigmoid, ActivationId::Cubical,
        ActivationId::Gaussian, ActivationId::Logarithmic,  ActivationId::Tanh};
    CHECK(std::set<ActivationId>(rd.begin(), rd.end()) == expected_rd);

    for (ActivationId id : rd) CHECK(dictionary_contains(Dictionary::FD, id));
    CHECK(std::set<ActivationId>(fd.begin(), fd.end()).size() == 23);
}

TEST_CASE("names round-trip and reject unknowns") {
    for (ActivationId id : dictionary_members(Dictionary::FD)) {
        CHECK(activation_from_name(activation_name(id)) == id);
    }
    CHECK_THROWS_AS(activation_from_name("sin"), ConfigError);
    CHECK_THROWS_AS(activation_from_name(""), ConfigError);
}

TEST_CASE("dictionary names round-trip") {
    CHECK(dictionary_from_name("fd") == Dictionary::FD);
    CHECK(dictionary_from_name("FD") == Dictionary::FD);
    CHECK(dictionary_from_name("rd") == Dictionary::RD);
    CHECK(dictionary_from_name("RD") == Dictionary::RD);
    CHECK(std::string(dictionary_name(Dictionary::FD)) == "fd");
    CHECK(std::string(dictionary_name(Dictionary::RD)) == "rd");
    CHECK_THROWS_AS(dictionary_from_name("full"), ConfigError);
}

TEST_CASE("reference values") {
    CHECK(activation_eval(ActivationId::Sigmoid, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(activation_eval(ActivationId::Gaussian, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(activation_eval(ActivationId::Inverse, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(activation_eval(ActivationId::Logarithmic, std::exp(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(activation_eval(ActivationId::Hat, 0.25) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(activation_eval(ActivationId::Clamped, -3.0) == -1.0);
    CHECK(activation_eval(ActivationId::ReLU, -2.0) == 0.0);
    CHECK(activation_eval(ActivationId::Identity, 1.25) == 1.25);
}

TEST_CASE("guards") {
    CHECK(activation_eval(ActivationId::Inverse, 1e-8) == 0.0);
    CHECK(activation_eval(ActivationId::Inverse, -1e-8) == 0.0);
    CHECK(activation_eval(ActivationId::Logarithmic, 0.0) == doctest::Approx(std::log(1e-7)));
    CHECK(activation_eval(ActivationId::Logarithmic, -5.0) == doctest::Approx(std::log(1e-7)));
    CHECK(activation_eval(ActivationId::Exponential, 100.0) == doctest::Approx(std::exp(60.0)));
    CHECK(activation_eval(ActivationId::Exponential, -100.0) == doctest::Approx(std::exp(-60.0)));
    CHECK(activation_eval(ActivationId::Softplus, 1e6) == 1e6);
    CHECK(activation_eval(ActivationId::Softplus, -1e6) == 0.0);
}

TEST_CASE("every member matches the oracle on a sample grid") {
    const double xs[] = {-7.3, -2.0, -1.0, -0.5, -1e-3, 0.0, 1e-3, 0.3, 0.99, 1.0, 1.7, 5.5};
    for (ActivationId id : dictionary_members(Dictionary::FD)) {
        for (double x : xs) {
            CAPTURE(activation_name(id));
            CAPTURE(x);
            CHECK(activation_eval(id, x) == doctest::Approx(oracle(id, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("every member is finite across the working range") {
    const double xs[] = {-1e6, -12345.6, -777.0, -30.0001, -1.0, 0.0,
                         1.0,  29.9999,  777.0,  12345.6,  1e6};
    for (ActivationId id : dictionary_members(Dictionary::FD)) {
        for (double x : xs) {
            CAPTURE(activation_name(id));
            CAPTURE(x);
            CHECK(std::isfinite(activation_eval(id, x)));
        }
    }
}
