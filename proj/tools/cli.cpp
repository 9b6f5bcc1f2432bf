#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "checkpoint.hpp"
#include "json.hpp"
#include "report.hpp"
#include "slfm/slfm.hpp"
#include "synthetic.hpp"

namespace slfm::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Error bad_arg(const std::string& what) { return Error(ErrorKind::InvalidArgument, what); }

std::size_t parse_count(const std::string& s, const char* what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw bad_arg(std::string(what) + ": not an integer '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw bad_arg(std::string(what) + ": not a real number '" + s + "'");
    }
    return v;
}

std::vector<double> parse_reals(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& item : split(s, ',')) out.push_back(parse_double(item, what));
    return out;
}

// ---------------------------------------------------------------- gaussian-norms

struct GaussianNormsArgs {
    std::string dims;
    std::string format = "csv";
};

int cmd_gaussian_norms(const GaussianNormsArgs& a, std::ostream& out) {
    Report report{{"d", "mean_exact", "mean_approx", "cv"}, {}};
    for (const auto& item : split(a.dims, ',')) {
        const std::size_t d = parse_count(item, "--d");
        if (d < 1) throw bad_arg("--d: dimension must be >= 1");
        report.add_row({static_cast<double>(d), gaussian_mean_radius_exact(d), gaussian_mean_radius_approx(d),
                        gaussian_norm_cv(d)});
    }
    report.write(out, parse_format(a.format));
    return kExitOk;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
    std::string input;
    std::optional<double> project;
    std::string format = "csv";
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
    const LatentContainer c = read_container(a.input);
    std::vector<Token> tokens = c.tokens();
    if (a.project) {
        for (Token& tok : tokens) tok = radial_project(tok, *a.project).values();
    }
    const ShellStats s = shell_stats(tokens);
    err << "[slfm] stats over " << s.n_tokens << " tokens (d=" << c.d << ", h=" << c.h << ", w=" << c.w
        << ", items=" << c.n_items << ")\n";
    Report report{{"n_tokens", "d", "mean_radius", "std_radius", "cv"}, {}};
    report.add_row({static_cast<double>(s.n_tokens), static_cast<double>(c.d), s.mean_radius, s.std_radius, s.cv});
    report.write(out, parse_format(a.format));
    return kExitOk;
}

// ---------------------------------------------------------------- paths

struct PathsArgs {
    std::string input0;
    std::string input1;
    std::string synthetic;
    std::string kind;
    std::size_t grid = kDefaultGridPoints;
    std::optional<std::size_t> pairs;
    std::uint64_t seed = 0;
    std::string shells;
    std::string format = "csv";
};

int cmd_paths(const PathsArgs& a, std::ostream& out, std::ostream& err) {
    const PathKind kind = parse_path_kind(a.kind);
    std::vector<TokenPair> pairs;
    if (!a.synthetic.empty()) {
        if (!a.input0.empty() || !a.input1.empty()) throw bad_arg("--synthetic excludes --input0/--input1");
        Rng rng(a.seed);
        pairs = synthetic_pairs(parse_synthetic(a.synthetic), a.pairs.value_or(kDefaultPairCount), rng);
    } else {
        if (a.input0.empty() || a.input1.empty()) throw bad_arg("need --synthetic or both --input0 and --input1");
        const auto t0 = read_container(a.input0).tokens();
        const auto t1 = read_container(a.input1).tokens();
        if (t0.size() != t1.size()) {
            throw Error(ErrorKind::DimensionMismatch, "inputs hold " + std::to_string(t0.size()) + " and " +
                                                          std::to_string(t1.size()) + " tokens");
        }
        const std::size_t m = std::min(a.pairs.value_or(t0.size()), t0.size());
        for (std::size_t i = 0; i < m; ++i) pairs.emplace_back(t0[i], t1[i]);
    }
    if (pairs.empty()) throw Error(ErrorKind::EmptyInput, "no pairs to profile");

    std::optional<EndpointShells> override_shells;
    if (!a.shells.empty()) {
        const auto v = parse_reals(a.shells, "--shells");
        if (v.size() != 4 || !(v[0] > 0 && v[1] >= 0 && v[2] > 0 && v[3] >= 0)) {
            throw bad_arg("--shells expects mean0,std0,mean1,std1 with positive means");
        }
        override_shells = EndpointShells{ShellStats{0, v[0], v[1], v[1] / v[0]}, ShellStats{0, v[2], v[3], v[3] / v[2]}};
    }

    const auto grid = uniform_grid(a.grid);
    const PathProfile p = path_profile(pairs, kind, grid, override_shells);
    const bool sigma = p.offshell_units == OffShellUnits::Sigma;
    err << "[slfm] " << to_string(kind) << " profile over " << pairs.size() << " pairs, " << grid.size()
        << " grid points; off-shell in " << (sigma ? "endpoint-shell sigmas" : "absolute radius units") << '\n';

    Report report{{"t", "mean_norm", "std_norm", sigma ? "offshell_sigma" : "offshell_abs", "radial_share"}, {}};
    for (std::size_t i = 0; i < p.t_grid.size(); ++i) {
        report.add_row({p.t_grid[i], p.mean_norm[i], p.std_norm[i], p.mean_offshell[i], p.mean_radial_share[i]});
    }
    report.write(out, parse_format(a.format));
    return kExitOk;
}

// ---------------------------------------------------------------- swap

struct SwapArgs {
    std::string anchor;
    std::string substitute;
    std::string out_direction;
    std::string out_radius;
    std::string format = "csv";
};

int cmd_swap(const SwapArgs& a, std::ostream& out, std::ostream& err) {
    const LatentContainer anchor = read_container(a.anchor);
    const LatentContainer sub = read_container(a.substitute);
    if (anchor.d != sub.d || anchor.h != sub.h || anchor.w != sub.w || anchor.n_items != sub.n_items) {
        throw Error(ErrorKind::DimensionMismatch, "anchor and substitute containers have different shapes");
    }
    const auto ta = anchor.tokens();
    const auto ts = sub.tokens();
    std::vector<Token> keep_dir;
    std::vector<Token> keep_rad;
    keep_dir.reserve(ta.size());
    keep_rad.reserve(ta.size());
    for (std::size_t i = 0; i < ta.size(); ++i) {
        SwapPair sp = component_swap(ta[i], ts[i]);
        keep_dir.push_back(std::move(sp.keep_direction));
        keep_rad.push_back(std::move(sp.keep_radius));
    }
    const LatentContainer cd = LatentContainer::from_tokens(keep_dir, anchor.h, anchor.w);
    const LatentContainer cr = LatentContainer::from_tokens(keep_rad, anchor.h, anchor.w);
    write_container(a.out_direction, cd);
    write_container(a.out_radius, cr);
    err << "[slfm] wrote " << a.out_direction << " and " << a.out_radius << '\n';

    // Norm/direction agreement of the stored (binary32) hybrids.
    double dir_norm_err = 0.0;
    double rad_norm_err = 0.0;
    const auto rd = cd.tokens();
    const auto rr = cr.tokens();
    for (std::size_t i = 0; i < ta.size(); ++i) {
        dir_norm_err = std::max(dir_norm_err, std::abs(norm(rd[i]) - norm(ts[i])) / norm(ts[i]));
        rad_norm_err = std::max(rad_norm_err, std::abs(norm(rr[i]) - norm(ta[i])) / norm(ta[i]));
    }
    Report report{{"n_tokens", "max_rel_norm_err_keep_direction", "max_rel_norm_err_keep_radius"}, {}};
    report.add_row({static_cast<double>(ta.size()), dir_norm_err, rad_norm_err});
    report.write(out, parse_format(a.format));
    return kExitOk;
}

// ---------------------------------------------------------------- train / sample

struct TrainArgs {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::size_t d = 4;
    double radius = 0.0;
    std::string weights = "0.3,0.7";
    double spread = 0.1;
    std::string hidden = "64,64";
    std::size_t time_embed = 8;
    bool conditional = false;
    std::size_t cond_embed = 4;
    std::size_t steps = 2000;
    std::size_t batch = 64;
    double lr = 2e-3;
    std::string loss = "slerp";
    std::string time_sampling = "logit-normal";
    double logit_mean = 0.0;
    double logit_std = 1.0;
    double shift = 1.0;
    double weight_decay = 0.0;
    std::size_t smooth_window = 10;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.seed) throw bad_arg("--seed is required");
    if (a.d < 2) throw bad_arg("--d must be >= 2");
    Rng rng(*a.seed);

    FieldSpec spec;
    spec.dim = a.d;
    spec.radius = a.radius;
    spec.time_embed = a.time_embed;
    spec.hidden.clear();
    for (const auto& h : split(a.hidden, ',')) spec.hidden.push_back(parse_count(h, "--hidden"));
    spec.kind = parse_loss_kind(a.loss);

    std::vector<double> weights = parse_reals(a.weights, "--weights");
    if (weights.empty()) throw bad_arg("--weights must list at least one weight");
    if (a.conditional) {
        spec.num_classes = weights.size();
        spec.cond_embed = a.cond_embed;
    }

    const SyntheticDataset dataset = SyntheticDataset::random(spec.dim, spec.sphere_radius(), weights, a.spread, rng);
    VelocityField field = VelocityField::initialized(spec, rng);

    TrainConfig cfg;
    cfg.learning_rate = a.lr;
    cfg.batch_size = a.batch;
    cfg.steps = a.steps;
    if (a.time_sampling == "uniform") {
        cfg.time_sampling = TimeSampling::Uniform;
    } else if (a.time_sampling == "logit-normal") {
        cfg.time_sampling = TimeSampling::LogitNormal;
    } else {
        throw bad_arg("--time-sampling must be uniform or logit-normal");
    }
    cfg.logit_mean = a.logit_mean;
    cfg.logit_std = a.logit_std;
    cfg.shift = a.shift;
    cfg.loss = spec.kind;
    cfg.seed = *a.seed;
    cfg.weight_decay = a.weight_decay;

    err << "[slfm] training " << to_string(cfg.loss) << " field, " << field.num_params() << " parameters, "
        << cfg.steps << " steps\n";
    const TrainResult result = train(field, dataset, cfg, rng);
    const auto sm = smooth(result.loss_trace, std::max<std::size_t>(a.smooth_window, 1));

    Checkpoint ckpt;
    ckpt.spec = spec;
    ckpt.params.assign(field.params().begin(), field.params().end());
    ckpt.config = cfg;
    ckpt.seed = *a.seed;
    ckpt.centers = dataset.centers();
    ckpt.spreads = dataset.spreads();
    ckpt.weights = dataset.weights();
    ckpt.steps_run = result.loss_trace.size();
    // Initial smoothed loss: mean of the first window; final: trailing window.
    if (!sm.empty()) {
        ckpt.initial_smoothed_loss = sm[std::min(sm.size(), a.smooth_window) - 1];
        ckpt.final_smoothed_loss = sm.back();
    }
    if (!a.out.empty()) {
        save_checkpoint(a.out, ckpt);
        err << "[slfm] wrote " << params_path(a.out).string() << " and " << sidecar_path(a.out).string() << '\n';
    }

    json metrics = {{"command", "train"},
                    {"seed", *a.seed},
                    {"loss", std::string(to_string(cfg.loss))},
                    {"num_params", field.num_params()},
                    {"steps", ckpt.steps_run},
                    {"initial_smoothed_loss", nullptr},
                    {"final_smoothed_loss", nullptr},
                    {"loss_ratio", nullptr}};
    if (!sm.empty()) {
        metrics["initial_smoothed_loss"] = ckpt.initial_smoothed_loss;
        metrics["final_smoothed_loss"] = ckpt.final_smoothed_loss;
        if (ckpt.initial_smoothed_loss > 0) {
            metrics["loss_ratio"] = ckpt.final_smoothed_loss / ckpt.initial_smoothed_loss;
        }
    }
    out << metrics.dump(2) << '\n';
    return kExitOk;
}

struct SampleArgs {
    std::string checkpoint;
    std::optional<std::uint64_t> seed;
    std::size_t n = 4096;
    std::string sampler = "expmap";
    std::size_t nfe = 50;
    std::size_t cond = 0;
    std::string out;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.seed) throw bad_arg("--seed is required");
    const Checkpoint ckpt = load_checkpoint(a.checkpoint);
    const VelocityField field = field_from(ckpt);
    const SyntheticDataset dataset = dataset_from(ckpt);
    const Sampler sampler = parse_sampler(a.sampler);
    Rng rng(*a.seed);
    const SampleRun run = sample(field, a.n, sampler, a.nfe, a.cond, rng);

    const double radius = field.spec().sphere_radius();
    double max_dev = 0.0;
    std::vector<std::size_t> counts(dataset.centers().size(), 0);
    for (const Token& z : run.outputs) {
        require_finite(z, "sample output");
        max_dev = std::max(max_dev, std::abs(norm(z) - radius) / radius);
        ++counts[dataset.nearest_center(z)];
    }
    std::vector<double> freq(counts.size());
    double max_freq_err = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        freq[k] = run.outputs.empty() ? 0.0 : static_cast<double>(counts[k]) / static_cast<double>(run.outputs.size());
        max_freq_err = std::max(max_freq_err, std::abs(freq[k] - dataset.weights()[k]));
    }
    if (!a.out.empty()) {
        write_container(a.out, LatentContainer::from_tokens(run.outputs, 1, 1));
        err << "[slfm] wrote " << run.outputs.size() << " samples to " << a.out << '\n';
    }
    json metrics = {{"command", "sample"},
                    {"seed", *a.seed},
                    {"sampler", std::string(to_string(sampler))},
                    {"nfe", a.nfe},
                    {"n", run.outputs.size()},
                    {"radius", radius},
                    {"max_rel_radius_deviation", max_dev},
                    {"center_counts", counts},
                    {"center_frequencies", freq},
                    {"dataset_weights", dataset.weights()},
                    {"max_frequency_error", max_freq_err}};
    out << metrics.dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- deficit

struct DeficitArgs {
    double h = 0.1;
    double omega = 1.0;
    double radius = 1.0;
    std::size_t d = 3;
    std::string format = "csv";
};

int cmd_deficit(const DeficitArgs& a, std::ostream& out) {
    if (!(a.omega > 0.0 && a.omega < std::numbers::pi)) throw bad_arg("--omega must lie in (0, pi)");
    if (!(a.h > 0.0)) throw bad_arg("--h must be positive");
    if (!(a.radius > 0.0)) throw bad_arg("--radius must be positive");
    const double analytical = one_step_deficit(a.h, a.omega, a.radius);
    const double measured = measured_one_step_deficit(a.h, a.omega, a.radius, a.d);
    const double rel = analytical > 0.0 ? std::abs(measured - analytical) / analytical : std::abs(measured);
    Report report{{"h", "omega", "radius", "analytical", "measured", "rel_diff"}, {}};
    report.add_row({a.h, a.omega, a.radius, analytical, measured, rel});
    report.write(out, parse_format(a.format));
    return kExitOk;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string kind = "gauss";
    std::size_t d = 32;
    std::uint32_t h = 1;
    std::uint32_t w = 1;
    std::uint32_t n = 1;
    std::optional<double> radius;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& err) {
    if (!a.seed) throw bad_arg("--seed is required");
    if (a.d < 1 || a.h < 1 || a.w < 1) throw bad_arg("--d, --h, --w must be positive");
    Rng rng(*a.seed);
    const std::size_t count = std::size_t{a.h} * a.w * a.n;
    std::vector<Token> tokens;
    tokens.reserve(count);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double radius = a.radius.value_or(std::sqrt(static_cast<double>(a.d)));
    for (std::size_t i = 0; i < count; ++i) {
        if (a.kind == "gauss") {
            Token t(a.d);
            for (double& x : t) x = gauss(rng);
            tokens.push_back(std::move(t));
        } else if (a.kind == "sphere") {
            tokens.push_back(sample_uniform_sphere(a.d, radius, rng).values());
        } else {
            throw bad_arg("--kind must be gauss or sphere");
        }
    }
    LatentContainer c = count ? LatentContainer::from_tokens(tokens, a.h, a.w) : LatentContainer{};
    if (!count) {
        c.d = static_cast<std::uint32_t>(a.d);
        c.h = a.h;
        c.w = a.w;
    }
    write_container(a.out, c);
    err << "[slfm] wrote " << count << " tokens to " << a.out << '\n';
    return kExitOk;
}

int exit_code_for(const Error& e) {
    return e.kind() == ErrorKind::DivergenceDetected ? kExitDivergence : kExitInput;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spherical latent flow matching: geometry diagnostics, toy training and sampling"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    GaussianNormsArgs gn;
    auto* gn_cmd = app.add_subcommand("gaussian-norms", "Analytical Gaussian norm statistics per dimension");
    gn_cmd->add_option("--d", gn.dims, "Comma-separated dimensions, e.g. 16,32");
    gn_cmd->add_option("--format", gn.format, "csv or json");

    StatsArgs st;
    auto* st_cmd = app.add_subcommand("stats", "Per-token norm statistics of a latent container");
    st_cmd->add_option("--input", st.input, "Latent container")->required();
    st_cmd->add_option("--project", st.project, "Radially project tokens to this radius first");
    st_cmd->add_option("--format", st.format, "csv or json");

    PathsArgs pa;
    auto* pa_cmd = app.add_subcommand("paths", "Norm, off-shell and radial-share profiles along a path family");
    pa_cmd->add_option("--input0", pa.input0, "Noise-endpoint container");
    pa_cmd->add_option("--input1", pa.input1, "Data-endpoint container");
    pa_cmd->add_option("--synthetic", pa.synthetic, "sphere:d=..,R=.. or gauss-shells:d=..,r0=..,r1=..,cv=..");
    pa_cmd->add_option("--kind", pa.kind, "linear, shell or slerp")->required();
    pa_cmd->add_option("--grid", pa.grid, "Number of t-grid points");
    pa_cmd->add_option("--pairs", pa.pairs, "Number of pairs");
    pa_cmd->add_option("--seed", pa.seed, "Seed for synthetic pairs");
    pa_cmd->add_option("--shells", pa.shells, "Override endpoint shells: mean0,std0,mean1,std1");
    pa_cmd->add_option("--format", pa.format, "csv or json");

    SwapArgs sw;
    auto* sw_cmd = app.add_subcommand("swap", "Exchange token radius and direction between two containers");
    sw_cmd->add_option("--anchor", sw.anchor, "Anchor container")->required();
    sw_cmd->add_option("--substitute", sw.substitute, "Substitute container")->required();
    sw_cmd->add_option("--out-direction", sw.out_direction, "Output: anchor direction, substitute radius")->required();
    sw_cmd->add_option("--out-radius", sw.out_radius, "Output: substitute direction, anchor radius")->required();
    sw_cmd->add_option("--format", sw.format, "csv or json");

    TrainArgs tr;
    auto* tr_cmd = app.add_subcommand("train", "Train a toy velocity field on a spherical mixture");
    tr_cmd->add_option("--seed", tr.seed, "Random seed (required)");
    tr_cmd->add_option("--out", tr.out, "Checkpoint prefix (writes <prefix>.slfm and <prefix>.json)");
    tr_cmd->add_option("--d", tr.d, "Token dimension");
    tr_cmd->add_option("--radius", tr.radius, "Sphere radius (default sqrt(d))");
    tr_cmd->add_option("--weights", tr.weights, "Mixture weights, comma-separated");
    tr_cmd->add_option("--spread", tr.spread, "Per-center spread");
    tr_cmd->add_option("--hidden", tr.hidden, "Hidden widths, comma-separated");
    tr_cmd->add_option("--time-embed", tr.time_embed, "Sinusoidal time-embedding width");
    tr_cmd->add_flag("--conditional", tr.conditional, "Condition on the mixture component");
    tr_cmd->add_option("--cond-embed", tr.cond_embed, "Condition embedding width");
    tr_cmd->add_option("--steps", tr.steps, "Optimizer steps");
    tr_cmd->add_option("--batch", tr.batch, "Batch size");
    tr_cmd->add_option("--lr", tr.lr, "Learning rate");
    tr_cmd->add_option("--loss", tr.loss, "linear or slerp");
    tr_cmd->add_option("--time-sampling", tr.time_sampling, "uniform or logit-normal");
    tr_cmd->add_option("--logit-mean", tr.logit_mean, "Logit-normal mean");
    tr_cmd->add_option("--logit-std", tr.logit_std, "Logit-normal std");
    tr_cmd->add_option("--shift", tr.shift, "Timestep shift s");
    tr_cmd->add_option("--weight-decay", tr.weight_decay, "Decoupled weight decay");
    tr_cmd->add_option("--smooth-window", tr.smooth_window, "Loss smoothing window");

    SampleArgs sa;
    auto* sa_cmd = app.add_subcommand("sample", "Sample from a trained checkpoint");
    sa_cmd->add_option("--checkpoint", sa.checkpoint, "Checkpoint prefix")->required();
    sa_cmd->add_option("--seed", sa.seed, "Random seed (required)");
    sa_cmd->add_option("--n", sa.n, "Number of samples");
    sa_cmd->add_option("--sampler", sa.sampler, "euler, euler_project or expmap");
    sa_cmd->add_option("--nfe", sa.nfe, "Function evaluations (steps)");
    sa_cmd->add_option("--cond", sa.cond, "Condition id");
    sa_cmd->add_option("--out", sa.out, "Write samples to this container");

    DeficitArgs de;
    auto* de_cmd = app.add_subcommand("deficit", "Projected-Euler vs exponential-map one-step arc deficit");
    de_cmd->set_help_flag("--help", "Print this help message and exit");
    de_cmd->add_option("--h", de.h, "Step size");
    de_cmd->add_option("--omega", de.omega, "Endpoint angle in (0, pi)");
    de_cmd->add_option("--radius", de.radius, "Sphere radius");
    de_cmd->add_option("--d", de.d, "Ambient dimension for the measurement");
    de_cmd->add_option("--format", de.format, "csv or json");

    GenerateArgs ge;
    auto* ge_cmd = app.add_subcommand("generate", "Write a container of Gaussian or uniform-sphere tokens");
    ge_cmd->set_help_flag("--help", "Print this help message and exit");
    ge_cmd->add_option("--kind", ge.kind, "gauss or sphere");
    ge_cmd->add_option("--d", ge.d, "Token dimension");
    ge_cmd->add_option("--h", ge.h, "Latent height");
    ge_cmd->add_option("--w", ge.w, "Latent width");
    ge_cmd->add_option("--n", ge.n, "Number of items");
    ge_cmd->add_option("--radius", ge.radius, "Sphere radius (sphere kind)");
    ge_cmd->add_option("--seed", ge.seed, "Random seed (required)");
    ge_cmd->add_option("--out", ge.out, "Output container")->required();

    std::vector<std::string> argv_store{"slfm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*gn_cmd) return cmd_gaussian_norms(gn, out);
        if (*st_cmd) return cmd_stats(st, out, err);
        if (*pa_cmd) return cmd_paths(pa, out, err);
        if (*sw_cmd) return cmd_swap(sw, out, err);
        if (*tr_cmd) return cmd_train(tr, out, err);
        if (*sa_cmd) return cmd_sample(sa, out, err);
        if (*de_cmd) return cmd_deficit(de, out);
        if (*ge_cmd) return cmd_generate(ge, err);
    } catch (const Error& e) {
        err << "slfm: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "slfm: unexpected failure: " << e.what() << '\n';
        return kExitUnexpected;
    }
    return kExitInput;
}

}  // namespace slfm::cli
