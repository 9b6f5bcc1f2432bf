#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "slfm/errors.hpp"
#include "slfm/flow.hpp"

namespace {

using namespace slfm;
using oracle::Vec;
using std::numbers::pi;

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected slfm::Error";
    return ErrorKind::InvalidArgument;
}

std::vector<TrainingExample> sphere_batch(std::size_t d, std::size_t n, std::size_t classes, std::mt19937_64& rng) {
    const double r = std::sqrt(static_cast<double>(d));
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    std::vector<TrainingExample> batch;
    for (std::size_t i = 0; i < n; ++i) {
        batch.push_back({oracle::on_sphere(d, r, rng), oracle::on_sphere(d, r, rng), unif(rng),
                         classes ? i % classes : 0});
    }
    return batch;
}

// Affine field v = W [z; emb(t)] + b with no hidden layers.
VelocityField affine_field(std::size_t d, LossKind kind) {
    FieldSpec s;
    s.dim = d;
    s.time_embed = 2;
    s.hidden = {};
    s.kind = kind;
    return VelocityField(s);
}

double& weight(VelocityField& f, std::size_t row, std::size_t col) {
    return f.params()[row * f.spec().input_width() + col];
}

// ------------------------------------------------------------ losses

TEST(Loss, PerfectLinearFieldHasZeroLoss) {
    // Constant displacement is reproduced by the bias alone.
    auto f = affine_field(3, LossKind::Linear);
    const Vec delta{0.5, -1.0, 2.0};
    for (std::size_t i = 0; i < 3; ++i) f.params()[3 * 5 + i] = delta[i];
    std::mt19937_64 rng(1);
    std::vector<TrainingExample> batch;
    for (int i = 0; i < 8; ++i) {
        const Vec z0 = oracle::gaussian_vec(3, rng);
        batch.push_back({z0, oracle::lincomb(1.0, z0, 1.0, delta), 0.1 * i, 0});
    }
    const auto lg = loss_and_grad(f, batch, LossKind::Linear);
    // z1 - z0 reproduces delta up to one rounding.
    EXPECT_LE(lg.loss, 1e-28);
    for (double g : lg.grad) EXPECT_LE(std::abs(g), 1e-14);
}

TEST(Loss, PerfectRotationFieldHasZeroSlerpLoss) {
    // On a circle, rotation by a fixed angle has velocity omega J z at every point.
    const double omega = 0.8;
    const double r = std::sqrt(2.0);
    auto f = affine_field(2, LossKind::Slerp);
    weight(f, 0, 1) = -omega;
    weight(f, 1, 0) = omega;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    std::vector<TrainingExample> batch;
    for (int i = 0; i < 8; ++i) {
        const double a = angle(rng);
        batch.push_back({{r * std::cos(a), r * std::sin(a)}, {r * std::cos(a + omega), r * std::sin(a + omega)},
                         0.1 + 0.1 * i, 0});
    }
    EXPECT_LE(loss_value(f, batch, LossKind::Slerp), 1e-24);
}

TEST(Loss, SlerpLossIgnoresRadialOutput) {
    std::mt19937_64 rng(3);
    auto f = affine_field(4, LossKind::Slerp);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& p : f.params()) p = g(rng);
    const auto batch = sphere_batch(4, 16, 0, rng);
    const double base = loss_value(f, batch, LossKind::Slerp);
    const double linear_base = loss_value(f, batch, LossKind::Linear);
    for (double c : {-3.0, -0.5, 0.25, 2.0, 10.0}) {
        auto shifted = f;
        for (std::size_t i = 0; i < 4; ++i) weight(shifted, i, i) += c;  // output += c z_t
        EXPECT_NEAR(loss_value(shifted, batch, LossKind::Slerp), base, 1e-9 * std::max(1.0, base));
        EXPECT_GT(std::abs(loss_value(shifted, batch, LossKind::Linear) - linear_base), 1e-3);
    }
}

struct GradCase {
    LossKind kind;
    bool conditional;
};

void PrintTo(const GradCase& c, std::ostream* os) {
    *os << to_string(c.kind) << (c.conditional ? "/conditional" : "");
}

class GradientCheck : public ::testing::TestWithParam<GradCase> {};

TEST_P(GradientCheck, MatchesCentralDifferencesOnEveryParameter) {
    const auto [kind, conditional] = GetParam();
    constexpr std::size_t d = 4;
    FieldSpec s;
    s.dim = d;
    s.time_embed = 8;
    s.hidden = {16};
    s.kind = kind;
    if (conditional) {
        s.num_classes = 2;
        s.cond_embed = 3;
    }
    Rng init(10);
    auto f = VelocityField::initialized(s, init);
    std::mt19937_64 rng(11);
    const auto batch = sphere_batch(d, 4, conditional ? 2 : 0, rng);
    const auto lg = loss_and_grad(f, batch, kind);
    EXPECT_NEAR(lg.loss, loss_value(f, batch, kind), 1e-14 * lg.loss);
    ASSERT_EQ(lg.grad.size(), f.num_params());
    constexpr double h = 1e-5;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.num_params(); ++i) {
        const double saved = f.params()[i];
        f.params()[i] = saved + h;
        const double plus = loss_value(f, batch, kind);
        f.params()[i] = saved - h;
        const double minus = loss_value(f, batch, kind);
        f.params()[i] = saved;
        const double fd = (plus - minus) / (2 * h);
        const double scale = std::max({std::abs(fd), std::abs(lg.grad[i]), 1e-6});
        worst = std::max(worst, std::abs(fd - lg.grad[i]) / scale);
    }
    EXPECT_LE(worst, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Losses, GradientCheck,
                         ::testing::Values(GradCase{LossKind::Linear, false}, GradCase{LossKind::Slerp, false},
                                           GradCase{LossKind::Slerp, true}),
                         [](const auto& info) {
                             return std::string(to_string(info.param.kind)) +
                                    (info.param.conditional ? "_conditional" : "");
                         });

TEST(Loss, SlerpRejectsOffSphereEndpoints) {
    auto f = affine_field(2, LossKind::Slerp);
    const std::vector<TrainingExample> batch{{{1.0, 0.0}, {0.0, 1.0}, 0.5, 0}};
    EXPECT_EQ(kind_of([&] { loss_value(f, batch, LossKind::Slerp); }), ErrorKind::RadiusMismatch);
    EXPECT_NO_THROW(loss_value(f, batch, LossKind::Linear));
}

// ------------------------------------------------------------ time sampling

TEST(TimeShift, ReferenceValue) {
    // 4.63 * 0.5 / (1 + 3.63 * 0.5)
    EXPECT_NEAR(shift_time(0.5, 4.63), 0.8223801066, 1e-10);
}

TEST(TimeShift, IdentityAndFixedPoints) {
    for (double u : {0.0, 0.1, 0.37, 0.9, 1.0}) EXPECT_DOUBLE_EQ(shift_time(u, 1.0), u);
    for (double s : {0.2, 0.5, 1.0, 3.0, 4.63, 100.0}) {
        EXPECT_DOUBLE_EQ(shift_time(0.0, s), 0.0);
        EXPECT_DOUBLE_EQ(shift_time(1.0, s), 1.0);
    }
}

TEST(TimeShift, StrictlyMonotone) {
    for (double s : {0.1, 0.5, 1.0, 2.0, 4.63, 50.0}) {
        double prev = shift_time(0.0, s);
        for (int i = 1; i <= 10000; ++i) {
            const double cur = shift_time(i / 10000.0, s);
            EXPECT_GT(cur, prev) << "s=" << s << " i=" << i;
            prev = cur;
        }
    }
    EXPECT_EQ(kind_of([] { shift_time(0.5, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(TimeShift, SampledTimesInOpenInterval) {
    Rng rng(12);
    TrainConfig cfg;
    cfg.shift = 4.63;
    double sum = 0.0;
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double t = sample_time(rng, cfg);
        ASSERT_GT(t, 0.0);
        ASSERT_LT(t, 1.0);
        sum += t;
    }
    EXPECT_GT(sum / n, 0.6);  // shift > 1 pushes mass toward t = 1
    cfg.shift = 1.0;
    cfg.time_sampling = TimeSampling::Uniform;
    sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_time(rng, cfg);
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

// ------------------------------------------------------------ dataset

TEST(SyntheticDataset, CentersOnSphereAndWeightsRespected) {
    Rng rng(13);
    const auto ds = SyntheticDataset::random(4, 2.0, {0.3, 0.7}, 0.1, rng);
    for (const auto& c : ds.centers()) EXPECT_NEAR(oracle::norm(c), 2.0, 1e-12);
    int counts[2] = {0, 0};
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto draw = ds.sample(rng);
        EXPECT_NEAR(oracle::norm(draw.z), 2.0, 1e-12);
        ++counts[draw.center];
    }
    EXPECT_NEAR(counts[0] / static_cast<double>(n), 0.3, 0.015);
    EXPECT_EQ(ds.nearest_center(ds.centers()[1]), 1u);
}

TEST(SyntheticDataset, RejectsBadWeights) {
    Rng rng(14);
    EXPECT_EQ(kind_of([&] { SyntheticDataset::random(4, 2.0, {0.3, 0.3}, 0.1, rng); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([&] { SyntheticDataset::random(4, 2.0, {1.2, -0.2}, 0.1, rng); }), ErrorKind::InvalidArgument);
}

// ------------------------------------------------------------ training

struct Setup {
    VelocityField field;
    SyntheticDataset dataset;
};

Setup make_setup(Rng& rng) {
    FieldSpec s;
    s.dim = 4;
    s.hidden = {64, 64};
    auto dataset = SyntheticDataset::random(4, s.sphere_radius(), {0.3, 0.7}, 0.1, rng);
    auto field = VelocityField::initialized(s, rng);
    return {std::move(field), std::move(dataset)};
}

TEST(Train, ZeroLearningRateLeavesParametersUnchanged) {
    Rng rng(15);
    auto [field, dataset] = make_setup(rng);
    const std::vector<double> before(field.params().begin(), field.params().end());
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    cfg.steps = 30;
    const auto res = train(field, dataset, cfg, rng);
    EXPECT_EQ(res.loss_trace.size(), 30u);
    EXPECT_TRUE(std::equal(before.begin(), before.end(), field.params().begin()));
    for (double l : res.loss_trace) EXPECT_TRUE(std::isfinite(l));
}

TEST(Train, SameSeedGivesIdenticalTraces) {
    auto run = [] {
        Rng rng(16);
        auto [field, dataset] = make_setup(rng);
        TrainConfig cfg;
        cfg.steps = 50;
        auto res = train(field, dataset, cfg, rng);
        return std::pair{res.loss_trace, std::vector<double>(field.params().begin(), field.params().end())};
    };
    const auto a = run();
    const auto b = run();
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
}

TEST(Train, RejectsLossKindMismatch) {
    Rng rng(17);
    auto [field, dataset] = make_setup(rng);
    TrainConfig cfg;
    cfg.loss = LossKind::Linear;
    cfg.steps = 1;
    EXPECT_EQ(kind_of([&] { train(field, dataset, cfg, rng); }), ErrorKind::InvalidArgument);
}

TEST(Train, DivergenceIsReported) {
    Rng rng(18);
    auto [field, dataset] = make_setup(rng);
    field.params()[0] = std::numeric_limits<double>::quiet_NaN();
    TrainConfig cfg;
    cfg.steps = 3;
    EXPECT_EQ(kind_of([&] { train(field, dataset, cfg, rng); }), ErrorKind::DivergenceDetected);
}

TEST(Train, TwoCenterSphereLossHalves) {
    Rng rng(1);
    auto [field, dataset] = make_setup(rng);
    TrainConfig cfg;
    cfg.learning_rate = 2e-3;
    cfg.steps = 2000;
    const auto res = train(field, dataset, cfg, rng);
    const auto sm = smooth(res.loss_trace, 10);
    EXPECT_LT(sm.back(), 0.5 * sm[9]);

    const auto run = sample(field, 4096, Sampler::ExpMap, 50, 0, rng);
    ASSERT_EQ(run.outputs.size(), 4096u);
    std::vector<int> counts(2, 0);
    for (const auto& z : run.outputs) {
        EXPECT_LE(std::abs(oracle::norm(z) - dataset.radius()) / dataset.radius(), 1e-5);
        ++counts[dataset.nearest_center(z)];
    }
    EXPECT_NEAR(counts[0] / 4096.0, 0.3, 0.05);
    EXPECT_NEAR(counts[1] / 4096.0, 0.7, 0.05);
}

TEST(Smooth, TrailingAverage) {
    const std::vector<double> v{1, 2, 3, 4, 5};
    EXPECT_EQ(smooth(v, 2), (std::vector<double>{1.0, 1.5, 2.5, 3.5, 4.5}));
    EXPECT_EQ(smooth(v, 1), v);
}

// ------------------------------------------------------------ sampling

TEST(Sampler, ParsesAndPrints) {
    for (Sampler s : {Sampler::Euler, Sampler::EulerProject, Sampler::ExpMap}) EXPECT_EQ(parse_sampler(to_string(s)), s);
    EXPECT_EQ(to_string(Sampler::ExpMap), "expmap");
    EXPECT_EQ(kind_of([] { parse_sampler("rk4"); }), ErrorKind::InvalidArgument);
}

TEST(Sampler, PerfectGeodesicFieldReachesTargetInOneStep) {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
        const std::size_t d = 3 + i % 30;
        const double r = std::sqrt(static_cast<double>(d));
        const auto target = SphereToken::certify(oracle::on_sphere(d, r, rng), r);
        const VelocityFn v = [&](std::span<const double> z, double) {
            return slerp_velocity(SphereToken::certify(Token(z.begin(), z.end()), r), target, 0.0).vector;
        };
        const Token out = integrate(v, oracle::on_sphere(d, r, rng), Sampler::ExpMap, 1, r);
        EXPECT_LE(oracle::dist(out, target.values()), 1e-5 * r);
    }
}

TEST(Sampler, ExpMapStaysOnSphereOverManySteps) {
    std::mt19937_64 rng(20);
    const double r = 3.0;
    const VelocityFn wild = [](std::span<const double> z, double t) {
        Token v(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) v[i] = 5.0 * std::sin(3.0 * z[(i + 1) % z.size()] + 7.0 * t) + z[i];
        return v;
    };
    for (Sampler s : {Sampler::ExpMap, Sampler::EulerProject}) {
        const Token out = integrate(wild, oracle::on_sphere(6, r, rng), s, 500, r);
        EXPECT_LE(std::abs(oracle::norm(out) - r) / r, 1e-5) << to_string(s);
    }
    const Token euler = integrate(wild, oracle::on_sphere(6, r, rng), Sampler::Euler, 500, r);
    EXPECT_GT(std::abs(oracle::norm(euler) - r) / r, 1e-3);
}

TEST(Sampler, ProjectedEulerLagsExpMapByOneStepDeficit) {
    // A single step of length dt with tangent speed omega advances the exp-map
    // chain by omega dt and the projected Euler chain by atan(omega dt).
    const Token start{1.0, 0.0, 0.0};
    for (double omega : {0.2, 1.0, 2.0}) {
        for (double dt : {1.0, 0.25, 0.1}) {
            const VelocityFn v = [&](std::span<const double>, double) { return Token{0.0, omega * dt, 0.0}; };
            const Token a = integrate(v, start, Sampler::ExpMap, 1, 1.0);
            const Token b = integrate(v, start, Sampler::EulerProject, 1, 1.0);
            EXPECT_NEAR(oracle::planar_angle(a, b), omega * dt - std::atan(omega * dt), 1e-5);
        }
    }
}

TEST(Sampler, LinearFieldUsesGaussianPrior) {
    FieldSpec s;
    s.dim = 16;
    s.kind = LossKind::Linear;
    s.hidden = {4};
    const VelocityField f(s);  // zero field: outputs equal the starting draws
    Rng rng(21);
    const auto run = sample(f, 2000, Sampler::Euler, 3, 0, rng);
    double mean = 0.0;
    for (const auto& z : run.outputs) mean += oracle::norm(z);
    mean /= run.outputs.size();
    EXPECT_NEAR(mean, 3.938, 0.05);
    const auto projected = sample(f, 200, Sampler::ExpMap, 3, 0, rng);
    for (const auto& z : projected.outputs) EXPECT_NEAR(oracle::norm(z), 4.0, 4e-5);
}

TEST(Sampler, RejectsZeroSteps) {
    const VelocityFn v = [](std::span<const double> z, double) { return Token(z.size(), 0.0); };
    EXPECT_EQ(kind_of([&] { integrate(v, Token{1.0, 0.0}, Sampler::Euler, 0, 1.0); }), ErrorKind::InvalidArgument);
}

}  // namespace
