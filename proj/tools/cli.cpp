// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include "parallel.hpp"

#include "mimogen/atomic_file.hpp"
#include "mimogen/beams.hpp"
#include "mimogen/dataset.hpp"
#include "mimogen/error.hpp"
#include "mimogen/hash.hpp"
#include "mimogen/params.hpp"
#include "mimogen/progress.hpp"
#include "mimogen/rayio.hpp"
#include "mimogen/scene.hpp"
#include "mimogen/tracer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#ifndef MIMOGEN_VERSION
#define MIMOGEN_VERSION "dev"
#endif

namespace mimogen::cli
{

namespace fs = std::filesystem;

namespace
{

struct FileRecord
{
    std::string path;
    std::uint64_t hash = 0;
    std::uint64_t bytes = 0;
};

FileRecord describe(const fs::path &path)
{
    const auto bytes = read_file_bytes(path);
    return {path.string(), fnv1a64(bytes), bytes.size()};
}

// Written next to every successful run's outputs.
struct RunManifest
{
    std::string subcommand;
    std::uint64_t config_hash = 0;
    std::vector<FileRecord> inputs;
    std::vector<FileRecord> outputs;
    double wall_clock_seconds = 0.0;

    void write(const fs::path &where) const
    {
        nlohmann::ordered_json j;
        j["subcommand"] = subcommand;
        j["tool_version"] = MIMOGEN_VERSION;
        j["config_hash"] = hash_hex(config_hash);
        auto files = [](const std::vector<FileRecord> &list) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto &f : list)
                arr.push_back({{"path", f.path}, {"fnv1a64", hash_hex(f.hash)}, {"bytes", f.bytes}});
            return arr;
        };
        j["inputs"] = files(inputs);
        j["outputs"] = files(outputs);
        j["wall_clock_seconds"] = wall_clock_seconds;
        write_file_atomic(where, j.dump(2) + "\n");
    }
};

fs::path default_out(const std::string &leaf)
{
    const char *env = std::getenv(kOutDirEnv);
    return (env != nullptr && *env != '\0') ? fs::path(env) / leaf : fs::path(leaf);
}

// Parameter-set options shared by trace/build: a --config file plus one flag
// per parameter key, flags overriding the file.
struct ParamOptions
{
    std::string config;
    std::map<std::string, std::string> flags;

    void attach(CLI::App *sub)
    {
        sub->add_option("--config", config, "key = value parameter file");
        for (const auto &key : param_keys())
            sub->add_option("--" + key, flags[key], "parameter " + key);
    }

    ParamSet resolve() const
    {
        std::vector<KeyValue> entries;
        if (!config.empty())
            entries = parse_key_values(read_file_text(config));
        for (const auto &[key, value] : flags)
            if (!value.empty())
                entries.push_back({key, value, 0});
        return params_from_entries(entries);
    }
};

struct Common
{
    bool quiet = false;
    unsigned workers = default_workers();
};

std::vector<std::uint32_t> parse_id_list(const std::string &text)
{
    std::vector<std::uint32_t> out;
    for (long long v : parse_integer_list({"--bs", text, 0}))
    {
        if (v < 1 || v > 0xffffffffLL)
            throw ConfigError("--bs: ids must be >= 1");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- scene

struct SceneCmd
{
    std::string preset = "o1";
    std::string config;
    std::vector<std::string> sets;
    std::string out;

    int exec(const Common &, std::ostream &err)
    {
        const auto t0 = std::chrono::steady_clock::now();
        if (to_lower(preset) != "o1")
            throw ConfigError("unknown preset '" + preset + "' (available: o1)");
        std::string text;
        RunManifest rm;
        if (!config.empty())
        {
            text = read_file_text(config);
            rm.inputs.push_back(describe(config));
        }
        for (const auto &s : sets)
            text += "\n" + s;
        const Scene scene = build_o1_scene(parse_scene_config(text));
        const fs::path target = out.empty() ? default_out("scene.bin") : fs::path(out);
        if (target.has_parent_path())
            fs::create_directories(target.parent_path());
        const auto bytes = serialize_scene(scene);
        write_file_atomic(target, bytes);

        err << "scene: " << scene.base_stations.size() << " base stations, " << scene.total_rows() << " rows, "
            << scene.total_users() << " users\n";
        rm.subcommand = "scene";
        rm.config_hash = fnv1a64("preset=" + to_lower(preset) + "\n" + text);
        rm.outputs.push_back(describe(target));
        rm.wall_clock_seconds = seconds_since(t0);
        rm.write(fs::path(target.string() + ".run.json"));
        return kExitOk;
    }
};

// ---------------------------------------------------------------- trace

struct TraceCmd
{
    std::string scene_path;
    std::string bs_list;
    bool all_users = false;
    int max_reflections = 4;
    std::size_t max_paths = kMaxRecordedPaths;
    std::string out;
    ParamOptions params;

    int exec(const Common &common, std::ostream &err)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Scene scene = deserialize_scene(read_file_bytes(scene_path));
        const ParamSet p = params.resolve();
        const auto bs_ids = bs_list.empty() ? p.active_bs : parse_id_list(bs_list);
        for (auto id : bs_ids)
            scene.base_station(id);

        std::uint64_t first = 1;
        std::uint64_t last = scene.total_users();
        if (!all_users)
            std::tie(first, last) = user_span_for_rows(scene, p.active_user_first, p.active_user_last);
        const std::size_t n_users = last - first + 1;

        const fs::path dir = out.empty() ? default_out("rays") : fs::path(out);
        fs::create_directories(dir);
        const Tracer tracer(scene);
        const TraceOptions opts{max_reflections, max_paths};
        const auto parallel = thread_pool_executor(common.workers);
        ProgressReporter progress("trace", bs_ids.size() * n_users, common.quiet ? nullptr : &err);

        RunManifest rm;
        rm.subcommand = "trace";
        rm.inputs.push_back(describe(scene_path));
        std::ostringstream cfg;
        cfg << "max_reflections=" << max_reflections << "\nmax_paths=" << max_paths << "\nfirst=" << first
            << "\nlast=" << last << "\nbs=";
        for (auto id : bs_ids)
            cfg << id << ',';
        rm.config_hash = fnv1a64(cfg.str());

        for (auto bs_id : bs_ids)
        {
            std::vector<PathList> records(n_users);
            parallel(n_users, [&](std::size_t i) {
                const UserEntry user = user_at(scene, first + i);
                records[i] = tracer.trace(bs_id, user.position, opts);
                records[i].user_index = user.global_index;
                progress.tick();
            });
            RayFileHeader meta;
            meta.bs_id = bs_id;
            meta.carrier_freq = scene.carrier_freq;
            meta.scenario_name = scene.name;
            const fs::path target = dir / ("bs_" + std::to_string(bs_id) + ".dmrf");
            write_file_atomic(target, encode_rayfile(records, meta));
            rm.outputs.push_back(describe(target));
        }
        rm.wall_clock_seconds = seconds_since(t0);
        rm.write(dir / "run_manifest.json");
        return kExitOk;
    }
};

// ---------------------------------------------------------------- build

struct BuildCmd
{
    std::string scene_path;
    std::string rays_dir;
    std::string out;
    std::string format = "binary";
    ParamOptions params;

    int exec(const Common &common, std::ostream &err)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Scene scene = deserialize_scene(read_file_bytes(scene_path));
        const ParamSet p = params.resolve();
        RunManifest rm;
        rm.subcommand = "build";
        rm.inputs.push_back(describe(scene_path));

        std::vector<RayFile> rays;
        for (auto bs_id : p.active_bs)
        {
            const fs::path file = fs::path(rays_dir) / ("bs_" + std::to_string(bs_id) + ".dmrf");
            if (!fs::exists(file))
                throw MissingInputError("missing ray file for active base station " + std::to_string(bs_id) + " (" +
                                            file.string() + ")",
                                        bs_id);
            rays.push_back(read_rayfile(file));
            rm.inputs.push_back(describe(file));
        }

        const auto [lo, hi] = user_span_for_rows(scene, p.active_user_first, p.active_user_last);
        ProgressReporter reporter("build", p.active_bs.size() * (hi - lo + 1), common.quiet ? nullptr : &err);
        const Dataset ds = build_dataset(rays, p, scene, thread_pool_executor(common.workers), &reporter);
        if (!ds.gaps.empty())
            err << "warning: " << ds.gaps.size()
                << " (bs, user) pairs had no ray record; their channels are zero (first: bs "
                << ds.gaps.front().bs_id << ", user " << ds.gaps.front().user_index << ")\n";

        const fs::path dir = out.empty() ? default_out("dataset") : fs::path(out);
        const Manifest m = export_dataset(ds, dir, format == "csv" ? ExportFormat::csv : ExportFormat::binary);
        for (const auto &e : m.entries)
            rm.outputs.push_back({(dir / e.filename).string(), e.hash, e.byte_size});
        rm.outputs.push_back(describe(dir / kManifestName));
        rm.config_hash = fnv1a64(params_to_text(p) + "format=" + format + "\n");
        rm.wall_clock_seconds = seconds_since(t0);
        rm.write(dir / "run_manifest.json");
        return kExitOk;
    }
};

// ---------------------------------------------------------------- beams

struct BeamsCmd
{
    std::string dataset_dir;
    std::string out;
    std::string format = "csv";
    double snr = 1.0;
    std::uint32_t oversampling = 1;
    bool conjugate = false;

    int exec(const Common &common, std::ostream &err)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const Dataset ds = import_dataset(dataset_dir);
        BeamEvalConfig cfg;
        cfg.snr = snr;
        cfg.conjugate = conjugate;
        cfg.codebook = dft_codebook(ArrayDims::of(ds.params), oversampling);

        ProgressReporter reporter("beams", ds.num_users(), common.quiet ? nullptr : &err);
        const auto records = build_ml_dataset(ds, cfg, thread_pool_executor(common.workers), &reporter);
        const fs::path dir = out.empty() ? default_out("ml") : fs::path(out);
        const Manifest m =
            export_ml_dataset(records, ds.subcarriers, dir, format == "binary" ? ExportFormat::binary : ExportFormat::csv);

        RunManifest rm;
        rm.subcommand = "beams";
        rm.inputs.push_back(describe(fs::path(dataset_dir) / kManifestName));
        for (const auto &e : m.entries)
            rm.outputs.push_back({(dir / e.filename).string(), e.hash, e.byte_size});
        rm.outputs.push_back(describe(dir / kManifestName));
        std::ostringstream c;
        c.precision(17);
        c << "snr=" << snr << "\noversampling=" << oversampling << "\nconjugate=" << conjugate << "\nformat=" << format;
        rm.config_hash = fnv1a64(c.str());
        rm.wall_clock_seconds = seconds_since(t0);
        rm.write(dir / "run_manifest.json");
        return kExitOk;
    }
};

// ---------------------------------------------------------------- validate

// Returns the violations found in one artifact; throws for unreadable input.
std::vector<std::string> validate_artifact(const fs::path &path)
{
    std::vector<std::string> problems;
    if (fs::is_directory(path) || path.filename() == kManifestName)
    {
        const fs::path dir = fs::is_directory(path) ? path : path.parent_path();
        const Manifest m = Manifest::parse(read_file_text(dir / kManifestName));
        for (const auto &e : m.entries)
        {
            const auto bytes = read_file_bytes(dir / e.filename);
            if (bytes.size() != e.byte_size)
                problems.push_back(e.filename + ": size differs from manifest");
            else if (fnv1a64(bytes) != e.hash)
                problems.push_back(e.filename + ": content hash differs from manifest");
        }
        bool shards = m.format == ExportFormat::binary && !m.entries.empty() &&
                      m.entries.front().filename.ends_with(".dmds");
        if (problems.empty() && shards)
            import_dataset(dir);
        return problems;
    }

    const auto bytes = read_file_bytes(path);
    auto has_magic = [&](std::string_view magic) {
        return bytes.size() >= 4 && std::equal(magic.begin(), magic.end(), bytes.begin());
    };
    if (has_magic("DMSC"))
    {
        deserialize_scene(bytes);
    }
    else if (has_magic("DMRF"))
    {
        for (const auto &v : validate_rayfile(decode_rayfile(bytes)))
            problems.push_back(v.to_string());
    }
    else if (has_magic("DMDS"))
    {
        decode_shard(bytes);
    }
    else
    {
        // Fall back to a parameter file.
        parse_params(std::string(bytes.begin(), bytes.end()));
    }
    return problems;
}

struct ValidateCmd
{
    std::vector<std::string> files;

    int exec(const Common &, std::ostream &err)
    {
        int status = kExitOk;
        for (const auto &f : files)
        {
            try
            {
                const auto problems = validate_artifact(f);
                for (const auto &p : problems)
                    err << f << ": " << p << '\n';
                if (!problems.empty())
                    status = kExitFailure;
                else
                    err << f << ": ok\n";
            }
            catch (const Error &e)
            {
                err << f << ": " << e.what() << '\n';
                status = kExitFailure;
            }
        }
        return status;
    }
};

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"mimogen: geometric mmWave / massive MIMO channel dataset generator", "mimogen"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("-q,--quiet", common.quiet, "suppress progress lines");
    app.add_option("-j,--workers", common.workers, "worker threads (default: hardware concurrency)")
        ->check(CLI::PositiveNumber);

    SceneCmd scene_cmd;
    auto *scene = app.add_subcommand("scene", "generate a scene file");
    scene->add_option("--preset", scene_cmd.preset, "scenario preset (o1)");
    scene->add_option("--config", scene_cmd.config, "key = value scene overrides");
    scene->add_option("--set", scene_cmd.sets, "single key=value override (repeatable)");
    scene->add_option("--out", scene_cmd.out, "output scene file");

    TraceCmd trace_cmd;
    auto *trace = app.add_subcommand("trace", "trace rays and write one ray file per BS");
    trace->add_option("--scene", trace_cmd.scene_path, "scene file")->required();
    trace->add_option("--bs", trace_cmd.bs_list, "comma-separated BS ids (default: active_BS)");
    trace->add_flag("--all-users", trace_cmd.all_users, "trace every user instead of the active rows");
    trace->add_option("--max-reflections", trace_cmd.max_reflections, "reflection order")->check(CLI::NonNegativeNumber);
    trace->add_option("--max-paths", trace_cmd.max_paths, "paths kept per pair")->check(CLI::Range(1, 25));
    trace->add_option("--out", trace_cmd.out, "output directory");
    trace_cmd.params.attach(trace);

    BuildCmd build_cmd;
    auto *build = app.add_subcommand("build", "construct channel matrices from ray files");
    build->add_option("--scene", build_cmd.scene_path, "scene file")->required();
    build->add_option("--rays", build_cmd.rays_dir, "directory of bs_<id>.dmrf files")->required();
    build->add_option("--out", build_cmd.out, "output directory");
    build->add_option("--format", build_cmd.format, "binary or csv")->check(CLI::IsMember({"binary", "csv"}));
    build_cmd.params.attach(build);

    BeamsCmd beams_cmd;
    auto *beams = app.add_subcommand("beams", "export ML features and beam-rate labels");
    beams->add_option("--dataset", beams_cmd.dataset_dir, "dataset directory")->required();
    beams->add_option("--out", beams_cmd.out, "output directory");
    beams->add_option("--format", beams_cmd.format, "csv or binary")->check(CLI::IsMember({"binary", "csv"}));
    beams->add_option("--snr", beams_cmd.snr, "linear SNR")->check(CLI::PositiveNumber);
    beams->add_option("--oversampling", beams_cmd.oversampling, "DFT codebook oversampling")
        ->check(CLI::PositiveNumber);
    beams->add_flag("--conjugate", beams_cmd.conjugate, "use f^H h instead of f^T h");

    ValidateCmd validate_cmd;
    auto *validate = app.add_subcommand("validate", "check artifact files");
    validate->add_option("files", validate_cmd.files, "scene, ray, shard, manifest or parameter files")
        ->required();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (scene->parsed())
            return scene_cmd.exec(common, err);
        if (trace->parsed())
            return trace_cmd.exec(common, err);
        if (build->parsed())
            return build_cmd.exec(common, err);
        if (beams->parsed())
            return beams_cmd.exec(common, err);
        if (validate->parsed())
            return validate_cmd.exec(common, err);
    }
    catch (const Error &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    catch (const fs::filesystem_error &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace mimogen::cli
