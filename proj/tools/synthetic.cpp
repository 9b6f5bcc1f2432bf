#include "synthetic.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "slfm/errors.hpp"

namespace slfm::cli {

namespace {

Error bad(const std::string& what) { return Error(ErrorKind::InvalidArgument, "--synthetic: " + what); }

double parse_real(const std::string& key, const std::string& value) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(x)) {
        throw bad("'" + key + "' expects a real number, got '" + value + "'");
    }
    return x;
}

std::size_t parse_dim(const std::string& value) {
    std::size_t d = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
    if (ec != std::errc() || ptr != value.data() + value.size() || d < 2) {
        throw bad("'d' expects an integer >= 2, got '" + value + "'");
    }
    return d;
}

double radius_with(std::size_t d, std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::sqrt(static_cast<double>(d));
    const double r = parse_real(key, it->second);
    if (!(r > 0.0)) throw bad("'" + key + "' must be positive");
    return r;
}

}  // namespace

SyntheticSpec parse_synthetic(std::string_view text) {
    const auto colon = text.find(':');
    const std::string head(text.substr(0, colon));
    std::map<std::string, std::string> kv;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw bad("expected key=value, got '" + std::string(item) + "'");
            kv[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }

    SyntheticSpec spec;
    if (!kv.count("d")) throw bad("missing 'd'");
    spec.d = parse_dim(kv.at("d"));
    if (head == "sphere") {
        spec.kind = SyntheticSpec::Kind::Sphere;
        spec.radius = radius_with(spec.d, kv, "R");
        kv.erase("R");
    } else if (head == "gauss-shells") {
        spec.kind = SyntheticSpec::Kind::GaussShells;
        spec.r0 = radius_with(spec.d, kv, "r0");
        spec.r1 = radius_with(spec.d, kv, "r1");
        spec.cv = kv.count("cv") ? parse_real("cv", kv.at("cv")) : 0.0;
        if (spec.cv < 0.0) throw bad("'cv' must be nonnegative");
        kv.erase("r0");
        kv.erase("r1");
        kv.erase("cv");
    } else {
        throw bad("unknown family '" + head + "' (expected sphere or gauss-shells)");
    }
    kv.erase("d");
    if (!kv.empty()) throw bad("unknown key '" + kv.begin()->first + "'");
    return spec;
}

std::vector<TokenPair> synthetic_pairs(const SyntheticSpec& spec, std::size_t count, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto shell_token = [&](double mean) {
        Token dir = sample_uniform_sphere(spec.d, 1.0, rng).values();
        double r = 0.0;
        do {
            r = mean * (1.0 + spec.cv * gauss(rng));
        } while (!(r > 0.0));
        return scaled(dir, r);
    };

    std::vector<TokenPair> pairs;
    pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (spec.kind == SyntheticSpec::Kind::Sphere) {
            Token a = sample_uniform_sphere(spec.d, spec.radius, rng).values();
            Token b = sample_uniform_sphere(spec.d, spec.radius, rng).values();
            pairs.emplace_back(std::move(a), std::move(b));
        } else {
            Token a = shell_token(spec.r0);
            Token b = shell_token(spec.r1);
            pairs.emplace_back(std::move(a), std::move(b));
        }
    }
    return pairs;
}

}  // namespace slfm::cli
