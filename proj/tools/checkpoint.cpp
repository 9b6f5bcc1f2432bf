#include "checkpoint.hpp"

#include <fstream>

#include "json.hpp"
#include "slfm/container.hpp"
#include "slfm/errors.hpp"

namespace slfm::cli {

using nlohmann::json;

namespace {

std::string time_sampling_name(TimeSampling ts) { return ts == TimeSampling::Uniform ? "uniform" : "logit-normal"; }

}  // namespace

std::filesystem::path params_path(const std::filesystem::path& prefix) {
    return std::filesystem::path(prefix.string() + ".slfm");
}

std::filesystem::path sidecar_path(const std::filesystem::path& prefix) {
    return std::filesystem::path(prefix.string() + ".json");
}

void save_checkpoint(const std::filesystem::path& prefix, const Checkpoint& ckpt) {
    LatentContainer blob;
    blob.d = static_cast<std::uint32_t>(ckpt.params.size());
    blob.h = 1;
    blob.w = 1;
    blob.n_items = 1;
    blob.payload.assign(ckpt.params.begin(), ckpt.params.end());
    write_container(params_path(prefix), blob);

    const FieldSpec& s = ckpt.spec;
    const TrainConfig& c = ckpt.config;
    json j;
    j["format"] = "slfm-checkpoint";
    j["version"] = 1;
    j["field"] = {{"dim", s.dim},
                  {"time_embed", s.time_embed},
                  {"num_classes", s.num_classes},
                  {"cond_embed", s.cond_embed},
                  {"hidden", s.hidden},
                  {"layer_widths", s.layer_widths()},
                  {"kind", std::string(to_string(s.kind))},
                  {"radius", s.sphere_radius()},
                  {"num_params", ckpt.params.size()}};
    j["config"] = {{"learning_rate", c.learning_rate}, {"batch_size", c.batch_size},
                   {"steps", c.steps},                 {"time_sampling", time_sampling_name(c.time_sampling)},
                   {"logit_mean", c.logit_mean},       {"logit_std", c.logit_std},
                   {"shift", c.shift},                 {"loss", std::string(to_string(c.loss))},
                   {"weight_decay", c.weight_decay},   {"beta1", c.beta1},
                   {"beta2", c.beta2},                 {"adam_eps", c.adam_eps},
                   {"grad_clip", c.grad_clip}};
    j["seed"] = ckpt.seed;
    j["dataset"] = {{"centers", ckpt.centers}, {"spreads", ckpt.spreads}, {"weights", ckpt.weights}};
    j["training"] = {{"steps_run", ckpt.steps_run},
                     {"initial_smoothed_loss", ckpt.initial_smoothed_loss},
                     {"final_smoothed_loss", ckpt.final_smoothed_loss}};

    std::ofstream out(sidecar_path(prefix));
    if (!out) throw Error(ErrorKind::Format, "cannot write '" + sidecar_path(prefix).string() + "'");
    out << j.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& prefix) {
    std::ifstream in(sidecar_path(prefix));
    if (!in) throw Error(ErrorKind::Format, "cannot open '" + sidecar_path(prefix).string() + "'");
    Checkpoint ckpt;
    try {
        const json j = json::parse(in);
        if (j.at("format") != "slfm-checkpoint") throw Error(ErrorKind::Format, "not a checkpoint sidecar");
        const json& f = j.at("field");
        ckpt.spec.dim = f.at("dim").get<std::size_t>();
        ckpt.spec.time_embed = f.at("time_embed").get<std::size_t>();
        ckpt.spec.num_classes = f.at("num_classes").get<std::size_t>();
        ckpt.spec.cond_embed = f.at("cond_embed").get<std::size_t>();
        ckpt.spec.hidden = f.at("hidden").get<std::vector<std::size_t>>();
        ckpt.spec.kind = parse_loss_kind(f.at("kind").get<std::string>());
        ckpt.spec.radius = f.at("radius").get<double>();

        const json& c = j.at("config");
        ckpt.config.learning_rate = c.at("learning_rate").get<double>();
        ckpt.config.batch_size = c.at("batch_size").get<std::size_t>();
        ckpt.config.steps = c.at("steps").get<std::size_t>();
        ckpt.config.time_sampling =
            c.at("time_sampling").get<std::string>() == "uniform" ? TimeSampling::Uniform : TimeSampling::LogitNormal;
        ckpt.config.logit_mean = c.at("logit_mean").get<double>();
        ckpt.config.logit_std = c.at("logit_std").get<double>();
        ckpt.config.shift = c.at("shift").get<double>();
        ckpt.config.loss = parse_loss_kind(c.at("loss").get<std::string>());
        ckpt.config.weight_decay = c.at("weight_decay").get<double>();
        ckpt.config.beta1 = c.at("beta1").get<double>();
        ckpt.config.beta2 = c.at("beta2").get<double>();
        ckpt.config.adam_eps = c.at("adam_eps").get<double>();
        ckpt.config.grad_clip = c.at("grad_clip").get<double>();
        ckpt.seed = j.at("seed").get<std::uint64_t>();
        ckpt.config.seed = ckpt.seed;

        const json& ds = j.at("dataset");
        ckpt.centers = ds.at("centers").get<std::vector<Token>>();
        ckpt.spreads = ds.at("spreads").get<std::vector<double>>();
        ckpt.weights = ds.at("weights").get<std::vector<double>>();
        const json& tr = j.at("training");
        ckpt.steps_run = tr.at("steps_run").get<std::size_t>();
        ckpt.initial_smoothed_loss = tr.at("initial_smoothed_loss").get<double>();
        ckpt.final_smoothed_loss = tr.at("final_smoothed_loss").get<double>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Format, std::string("malformed checkpoint sidecar: ") + e.what());
    }

    const LatentContainer blob = read_container(params_path(prefix));
    const VelocityField probe(ckpt.spec);
    if (blob.expected_floats() != probe.num_params()) {
        throw Error(ErrorKind::Format, "parameter blob holds " + std::to_string(blob.expected_floats()) +
                                           " values, field needs " + std::to_string(probe.num_params()));
    }
    ckpt.params.assign(blob.payload.begin(), blob.payload.end());
    return ckpt;
}

VelocityField field_from(const Checkpoint& ckpt) {
    VelocityField field(ckpt.spec);
    if (ckpt.params.size() != field.num_params()) throw Error(ErrorKind::Format, "parameter count mismatch");
    std::copy(ckpt.params.begin(), ckpt.params.end(), field.params().begin());
    return field;
}

SyntheticDataset dataset_from(const Checkpoint& ckpt) {
    return SyntheticDataset(ckpt.spec.dim, ckpt.spec.sphere_radius(), ckpt.centers, ckpt.spreads, ckpt.weights);
}

}  // namespace slfm::cli
