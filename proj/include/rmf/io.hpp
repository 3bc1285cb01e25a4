#pragma once

/// \file
/// Experiment outputs: per-trial CSV, JSON manifest, atomic file writes and
/// content digests used by replay.
///
/// An experiment directory holds
///   manifest.json   {experiment, model, alpha, N, trials, base_seed, prime_limit,
///                    sigma_grid, tool_version, wall_time, ...}
///   trials.csv      trial,seed,<record columns>
/// The manifest is written first; both files go through a temporary name and
/// an atomic rename, so no file is ever left partially overwritten.

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "rmf/csv.hpp"
#include "rmf/errors.hpp"
#include "rmf/montecarlo.hpp"

namespace rmf {

inline constexpr const char* kToolVersion = "rmf-lab 1.0.0";

/// 64-bit FNV-1a, hex encoded.
inline std::string digest_hex(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string trials_to_csv(const AggregateStats& st) {
    std::vector<std::string> header = {"trial", "seed"};
    header.insert(header.end(), st.columns.begin(), st.columns.end());
    CsvBuilder csv(header);
    for (const auto& t : st.trials) {
        csv.field(t.trial).field(t.seed);
        for (const double v : t.values) csv.field(v);
        csv.end_row();
    }
    return csv.str();
}

inline ExperimentKind parse_experiment_kind(const std::string& s) {
    for (auto k : {ExperimentKind::SignChanges, ExperimentKind::Positivity, ExperimentKind::HarperScan,
                   ExperimentKind::Divergence, ExperimentKind::Growth}) {
        if (s == to_string(k)) return k;
    }
    throw InvalidArgument("unknown experiment '" + s + "'");
}

inline Model parse_model(const std::string& s) {
    if (s == "f" || s == "F") return Model::F;
    if (s == "fstar" || s == "f*" || s == "F_STAR") return Model::FStar;
    throw InvalidArgument("unknown model '" + s + "' (expected f or fstar)");
}

inline SignMode parse_sign_mode(const std::string& s) {
    if (s == "iid_rademacher" || s == "iid") return SignMode::IidRademacher;
    if (s == "all_minus_one") return SignMode::AllMinusOne;
    if (s == "explicit") return SignMode::Explicit;
    throw InvalidArgument("unknown assignment mode '" + s + "'");
}

inline nlohmann::json summary_json(const Summary& s) {
    return {{"mean", s.mean}, {"median", s.median}, {"q05", s.q05}, {"q95", s.q95}};
}

inline nlohmann::json manifest_json(const AggregateStats& st, const std::string& csv_digest) {
    const ExperimentConfig& c = st.config;
    nlohmann::json j;
    j["experiment"] = to_string(c.experiment);
    j["model"] = to_string(c.model);
    j["alpha"] = c.alpha;
    j["N"] = c.limit;
    j["trials"] = c.trials;
    j["base_seed"] = c.base_seed;
    j["prime_limit"] = c.prime_limit ? nlohmann::json(*c.prime_limit) : nlohmann::json(nullptr);
    j["sigma_grid"] = c.sigma_grid;
    j["tool_version"] = kToolVersion;
    j["wall_time"] = st.wall_time;
    j["assignment_mode"] = to_string(c.assignment_mode);
    j["grid_step"] = c.grid_step;
    j["thetas"] = c.thetas;
    j["checkpoints"] = c.checkpoints;
    j["min_sign_changes"] = c.min_sign_changes;
    j["pass_threshold"] = pass_threshold_of(c);
    j["threshold_note"] =
        "pass thresholds are engineering defaults calibrated by pilot runs, not theoretical constants";
    j["reporting_only"] = st.reporting_only;
    j["statistic"] = st.statistic;
    j["summary"] = summary_json(st.summary);
    j["pass_fraction"] = st.pass_fraction ? nlohmann::json(*st.pass_fraction) : nlohmann::json(nullptr);
    j["expectation_met"] =
        st.expectation_met ? nlohmann::json(*st.expectation_met) : nlohmann::json(nullptr);
    j["extras"] = st.extras;
    j["csv_file"] = "trials.csv";
    j["csv_digest"] = csv_digest;
    return j;
}

/// Reconstructs the configuration recorded in a manifest.
inline ExperimentConfig config_from_manifest(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        c.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
        c.model = parse_model(j.at("model").get<std::string>());
        c.alpha = j.at("alpha").get<double>();
        c.limit = j.at("N").get<std::uint32_t>();
        c.trials = j.at("trials").get<std::uint32_t>();
        c.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (!j.at("prime_limit").is_null()) c.prime_limit = j.at("prime_limit").get<std::uint64_t>();
        c.sigma_grid = j.at("sigma_grid").get<std::vector<double>>();
        c.assignment_mode = parse_sign_mode(j.value("assignment_mode", "iid_rademacher"));
        c.grid_step = j.value("grid_step", 0.0);
        c.thetas = j.value("thetas", c.thetas);
        c.checkpoints = j.value("checkpoints", c.checkpoints);
        c.min_sign_changes = j.value("min_sign_changes", c.min_sign_changes);
        if (j.contains("pass_threshold")) c.pass_threshold = j.at("pass_threshold").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed manifest: ") + e.what());
    }
    return c;
}

struct WrittenExperiment {
    std::filesystem::path manifest;
    std::filesystem::path csv;
    std::string csv_digest;
};

/// Writes manifest.json then trials.csv into `dir`.
inline WrittenExperiment write_experiment(const AggregateStats& st, const std::filesystem::path& dir) {
    const std::string csv = trials_to_csv(st);
    WrittenExperiment w{dir / "manifest.json", dir / "trials.csv", digest_hex(csv)};
    atomic_write(w.manifest, manifest_json(st, w.csv_digest).dump(2) + "\n");
    atomic_write(w.csv, csv);
    return w;
}

/// Rebuilds an AggregateStats from a manifest and its per-trial CSV and
/// recomputes every summary number from the records.
inline AggregateStats load_experiment(const std::filesystem::path& dir) {
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    AggregateStats st;
    st.config = config_from_manifest(manifest);
    st.wall_time = manifest.value("wall_time", 0.0);
    const CsvTable table = parse_csv(read_file(dir / manifest.value("csv_file", "trials.csv")));
    if (table.header.size() < 2 || table.header[0] != "trial" || table.header[1] != "seed") {
        throw InvalidArgument("per-trial csv must start with trial,seed");
    }
    st.columns.assign(table.header.begin() + 2, table.header.end());
    for (const auto& row : table.rows) {
        TrialRecord rec;
        rec.trial = static_cast<std::uint32_t>(std::stoul(row[0]));
        rec.seed = std::stoull(row[1]);
        for (std::size_t i = 2; i < row.size(); ++i) rec.values.push_back(parse_double(row[i]));
        st.trials.push_back(std::move(rec));
    }
    finalize_summary(st);
    return st;
}

}  // namespace rmf
