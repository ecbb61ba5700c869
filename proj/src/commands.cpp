#include "textsynth/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "textsynth/client.hpp"
#include "textsynth/corpus_io.hpp"
#include "textsynth/metrics.hpp"
#include "textsynth/mixer.hpp"
#include "textsynth/mock_server.hpp"
#include "textsynth/prompt.hpp"
#include "textsynth/toy_backend.hpp"
#include "textsynth/version.hpp"
#include "textsynth/wer.hpp"

namespace textsynth {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

void require_file(const std::string& path, const char* what) {
    if (path.empty()) {
        throw CommandError(std::string(what) + " path is required");
    }
    if (!fs::exists(path)) {
        throw CommandError(std::string(what) + " file not found: " + path);
    }
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw CommandError("cannot create output directory " + dir.string() + ": " +
                           ec.message());
    }
    return dir;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw CommandError("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw CommandError("failed writing " + path.string());
    }
}

// Manifests record the resolved options, seeds and tool version -- everything
// needed to reproduce the command byte-identically. No timestamps.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ordered_json& options, const std::vector<std::string>& outputs,
                    const ordered_json& extra = ordered_json::object()) {
    ordered_json manifest;
    manifest["tool"] = "textsynth";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["config_hash"] = hex64(fnv1a64(options.dump()));
    manifest["options"] = options;
    manifest["outputs"] = outputs;
    for (const auto& [key, value] : extra.items()) {
        manifest[key] = value;
    }
    write_text_file(out_dir / (command + "_manifest.json"), manifest.dump(2) + "\n");
}

struct WerPair {
    std::string id;
    TokenSeq reference;
    TokenSeq hypothesis;
    std::string domain;
};

std::map<std::string, std::vector<std::pair<TokenSeq, TokenSeq>>> load_wer_pairs(
    const std::string& path, bool raw) {
    std::ifstream in(path);
    if (!in) {
        throw CommandError("cannot open pairs file: " + path);
    }
    const auto split = [&](const std::string& text) {
        return raw ? split_whitespace(text) : tokenize(text, TokenizeMode::kWer);
    };
    std::map<std::string, std::vector<std::pair<TokenSeq, TokenSeq>>> by_domain;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        try {
            const auto record = json::parse(line);
            const auto domain = record.at("domain").get<std::string>();
            by_domain[domain].emplace_back(split(record.at("reference").get<std::string>()),
                                           split(record.at("hypothesis").get<std::string>()));
        } catch (const std::exception& e) {
            throw CommandError(path + ":" + std::to_string(line_no) +
                               ": malformed pair record: " + e.what());
        }
    }
    if (by_domain.empty()) {
        throw CommandError("pairs file has no records: " + path);
    }
    return by_domain;
}

}  // namespace

void cmd_synthesize(const SynthesizeOptions& options) {
    require_file(options.source_path, "source corpus");
    if (options.target_domain.empty()) {
        throw CommandError("target domain is required");
    }
    if (options.count < 1) {
        throw CommandError("sentence count must be >= 1");
    }
    PromptStrategy strategy;
    strategy.kind = strategy_from_string(options.strategy);
    strategy.num_demonstrations =
        strategy.uses_demonstrations() ? options.num_demonstrations : 0;
    try {
        strategy.validate();
        options.sampling.validate();
    } catch (const std::exception& e) {
        throw CommandError(e.what());
    }

    const Corpus full = load_corpus(options.source_path);
    // Zero-shot protocol: when the target domain is present in the provided
    // corpus, demonstrations and the builtin LM see only the other domains.
    Corpus source;
    bool excluded_target = false;
    if (full.has_domain(options.target_domain)) {
        source = leave_one_domain_out(full, options.target_domain).source_train;
        excluded_target = true;
    } else {
        source = full;
    }
    if (source.empty()) {
        throw CommandError("source corpus is empty after excluding the target domain");
    }
    if (strategy.uses_demonstrations() && strategy.num_demonstrations > source.size()) {
        throw CommandError("source corpus has " + std::to_string(source.size()) +
                           " utterances, fewer than the " +
                           std::to_string(strategy.num_demonstrations) +
                           " demonstrations requested");
    }

    std::unique_ptr<CompletionBackend> backend;
    if (options.endpoint == "builtin-toylm") {
        backend = std::make_unique<ToyCompletionService>(source, options.lm_order);
    } else if (options.endpoint.rfind("http://", 0) == 0 ||
               options.endpoint.rfind("https://", 0) == 0) {
        auto client = std::make_unique<HttpCompletionClient>(options.endpoint);
        if (const char* token = std::getenv("TEXTSYNTH_API_TOKEN")) {
            client->set_bearer_token(token);
        }
        backend = std::move(client);
    } else {
        throw CommandError("endpoint must be \"builtin-toylm\" or an http(s) URL, got \"" +
                           options.endpoint + "\"");
    }

    GenerateStats stats;
    const Corpus synthetic =
        generate_corpus(*backend, strategy, options.target_domain, source, options.count,
                        options.sampling, std::max<std::size_t>(1, options.jobs), &stats);
    if (stats.skipped_blank > 0) {
        std::cerr << "warning: skipped " << stats.skipped_blank << " blank completions\n";
    }
    if (stats.failed > 0) {
        std::cerr << "warning: " << stats.failed << " sentences failed\n";
    }

    const fs::path out_dir = prepare_out_dir(options.out_dir);
    save_corpus(synthetic, (out_dir / "synthetic.jsonl").string());

    ordered_json opt;
    opt["source"] = options.source_path;
    opt["domain"] = options.target_domain;
    opt["strategy"] = std::string(to_string(strategy.kind));
    opt["num_demonstrations"] = strategy.num_demonstrations;
    opt["endpoint"] = options.endpoint;
    opt["n"] = options.count;
    opt["typical_tau"] = options.sampling.typical_tau;
    opt["repetition_penalty"] = options.sampling.repetition_penalty;
    opt["temperature"] = options.sampling.temperature;
    opt["max_tokens"] = options.sampling.max_tokens;
    opt["seed"] = options.sampling.seed;
    opt["lm_order"] = options.lm_order;
    opt["jobs"] = options.jobs;
    ordered_json extra;
    extra["excluded_target_domain"] = excluded_target;
    extra["source_size"] = source.size();
    extra["requested"] = stats.requested;
    extra["generated"] = stats.generated;
    extra["skipped_blank"] = stats.skipped_blank;
    extra["failed"] = stats.failed;
    write_manifest(out_dir, "synthesize", opt, {"synthetic.jsonl"}, extra);
}

void cmd_profile(const ProfileOptions& options) {
    require_file(options.synthetic_path, "synthetic corpus");
    require_file(options.reference_path, "reference corpus");
    const Corpus synthetic = load_corpus(options.synthetic_path);
    const Corpus reference = load_corpus(options.reference_path);

    std::optional<std::size_t> sample_size = options.sample_size;
    if (options.full) {
        sample_size = synthetic.size();   // >= corpus size disables sampling
    }
    CorpusProfile profile;
    try {
        profile = profile_corpus(synthetic, reference, sample_size);
    } catch (const std::exception& e) {
        throw CommandError(e.what());
    }

    const fs::path out_dir = prepare_out_dir(options.out_dir);
    std::ostringstream json_out;
    write_profile_json(profile, synthetic.name(), json_out);
    write_text_file(out_dir / "profile.json", json_out.str());
    std::ostringstream csv_out;
    write_profile_csv(profile, synthetic.name(), csv_out);
    write_text_file(out_dir / "profile.csv", csv_out.str());

    ordered_json opt;
    opt["synthetic"] = options.synthetic_path;
    opt["reference"] = options.reference_path;
    if (profile.sample_size) {
        opt["sample_size"] = *profile.sample_size;
        opt["sample_seed"] = profile.sample_seed;
    } else {
        opt["sample_size"] = nullptr;
    }
    write_manifest(out_dir, "profile", opt, {"profile.json", "profile.csv"});
}

void cmd_wer(const WerOptions& options) {
    require_file(options.pairs_path, "pairs");
    const auto adapted_pairs = load_wer_pairs(options.pairs_path, options.raw);
    const bool have_baseline = !options.baseline_path.empty();
    std::map<std::string, std::vector<std::pair<TokenSeq, TokenSeq>>> baseline_pairs;
    if (have_baseline) {
        require_file(options.baseline_path, "baseline pairs");
        baseline_pairs = load_wer_pairs(options.baseline_path, options.raw);
    }

    std::vector<std::string> excluded;
    const auto domain_wer = [&excluded](
                                const std::string& domain,
                                const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs)
        -> std::optional<double> {
        std::size_t ref_tokens = 0;
        for (const auto& [ref, hyp] : pairs) {
            ref_tokens += ref.size();
        }
        if (ref_tokens == 0) {
            std::cerr << "warning: domain \"" << domain
                      << "\" has zero reference tokens; excluded from averages\n";
            excluded.push_back(domain);
            return std::nullopt;
        }
        return wer(pairs);
    };

    std::map<std::string, double> adapted_wer;
    for (const auto& [domain, pairs] : adapted_pairs) {
        if (const auto value = domain_wer(domain, pairs)) {
            adapted_wer[domain] = *value;
        }
    }
    if (adapted_wer.empty()) {
        throw CommandError("no domain with reference tokens in " + options.pairs_path);
    }

    const fs::path out_dir = prepare_out_dir(options.out_dir);
    std::ostringstream csv;
    ordered_json summary;
    std::vector<std::string> outputs{"wer_report.csv", "wer_summary.json"};

    if (!have_baseline) {
        csv << "method";
        for (const auto& [domain, value] : adapted_wer) csv << "," << domain;
        csv << ",average\n";
        csv << "wer";
        double sum = 0.0;
        for (const auto& [domain, value] : adapted_wer) {
            csv << "," << fixed(value, 2);
            sum += value;
        }
        const double mean = sum / static_cast<double>(adapted_wer.size());
        csv << "," << fixed(mean, 2) << "\n";

        ordered_json domains;
        for (const auto& [domain, value] : adapted_wer) {
            domains[domain] = {{"wer", value}};
        }
        summary["domains"] = domains;
        summary["average"] = {{"wer", mean}};
    } else {
        std::map<std::string, double> baseline_wer;
        for (const auto& [domain, pairs] : baseline_pairs) {
            if (const auto value = domain_wer(domain, pairs)) {
                baseline_wer[domain] = *value;
            }
        }
        std::vector<DomainResult> results;
        for (const auto& [domain, adapted] : adapted_wer) {
            const auto it = baseline_wer.find(domain);
            if (it == baseline_wer.end()) {
                std::cerr << "warning: domain \"" << domain
                          << "\" missing from baseline; excluded from averages\n";
                excluded.push_back(domain);
                continue;
            }
            results.push_back(make_domain_result(domain, it->second, adapted));
        }
        if (results.empty()) {
            throw CommandError("no domain present in both pairs files");
        }
        const CrossDomainReport report = cross_domain_report(results);

        csv << "method";
        for (const auto& row : report.rows) csv << "," << row.domain;
        csv << ",average\n";
        csv << "baseline";
        for (const auto& row : report.rows) csv << "," << fixed(row.baseline_wer, 2);
        csv << "," << fixed(report.mean_baseline_wer, 2) << "\n";
        csv << "adapted";
        for (const auto& row : report.rows) csv << "," << fixed(row.adapted_wer, 2);
        csv << "," << fixed(report.mean_adapted_wer, 2) << "\n";
        csv << "relative_improvement";
        for (const auto& row : report.rows) csv << "," << fixed(row.relative_improvement, 2);
        csv << "," << fixed(report.mean_relative_improvement, 2) << "\n";

        ordered_json domains;
        for (const auto& row : report.rows) {
            domains[row.domain] = {{"baseline_wer", row.baseline_wer},
                                   {"adapted_wer", row.adapted_wer},
                                   {"relative_improvement", row.relative_improvement}};
        }
        summary["domains"] = domains;
        summary["average"] = {{"baseline_wer", report.mean_baseline_wer},
                              {"adapted_wer", report.mean_adapted_wer},
                              {"mean_relative_improvement", report.mean_relative_improvement},
                              {"relative_of_means", report.relative_of_means}};
    }
    summary["excluded_domains"] = excluded;
    write_text_file(out_dir / "wer_report.csv", csv.str());
    write_text_file(out_dir / "wer_summary.json", summary.dump(2) + "\n");

    ordered_json opt;
    opt["pairs"] = options.pairs_path;
    opt["baseline"] = options.baseline_path;
    opt["raw"] = options.raw;
    write_manifest(out_dir, "wer", opt, outputs);
}

void cmd_mix(const MixOptions& options) {
    require_file(options.synthetic_path, "synthetic corpus");
    require_file(options.real_path, "real corpus");
    const Corpus synthetic = load_corpus(options.synthetic_path);
    const Corpus real = load_corpus(options.real_path);

    MixSpec spec;
    spec.real_fraction = options.real_fraction;
    spec.dedup = options.dedup;
    spec.seed = options.seed;
    Corpus mixed;
    try {
        mixed = mix(synthetic, real, spec);
    } catch (const std::exception& e) {
        throw CommandError(e.what());
    }

    const fs::path out_dir = prepare_out_dir(options.out_dir);
    save_corpus(mixed, (out_dir / "mixed.jsonl").string());

    std::size_t real_count = 0;
    for (const auto& utt : mixed.utterances()) {
        if (utt.source == Source::kReal) ++real_count;
    }
    ordered_json opt;
    opt["synthetic"] = options.synthetic_path;
    opt["real"] = options.real_path;
    opt["real_fraction"] = options.real_fraction;
    opt["dedup"] = options.dedup;
    opt["seed"] = options.seed;
    ordered_json extra;
    extra["synthetic_in"] = synthetic.size();
    extra["synthetic_kept"] = mixed.size() - real_count;
    extra["real_sampled"] = real_count;
    extra["total"] = mixed.size();
    write_manifest(out_dir, "mix", opt, {"mixed.jsonl"}, extra);
}

void cmd_sweep(const SweepOptions& options) {
    SweepPlan plan;
    plan.axis = sweep_axis_from_string(options.axis);
    plan.points = options.points;
    plan.repeats = options.repeats;
    try {
        plan.validate();
    } catch (const std::exception& e) {
        throw CommandError(e.what());
    }
    const auto runs = plan_sweep(plan, options.seed);

    std::optional<Corpus> synthetic;
    if (!options.synthetic_path.empty()) {
        require_file(options.synthetic_path, "synthetic corpus");
        synthetic = load_corpus(options.synthetic_path);
    }

    const fs::path out_dir = prepare_out_dir(options.out_dir);
    std::vector<std::string> outputs{"sweep_plan.json"};
    ordered_json run_list = ordered_json::array();
    for (const auto& run : runs) {
        ordered_json entry;
        entry["index"] = run.index;
        entry["point"] = run.point;
        entry["repeat"] = run.repeat;
        entry["seed"] = run.seed;
        if (plan.axis == SweepAxis::kCorpusSize && synthetic) {
            if (run.point > synthetic->size()) {
                entry["skipped"] = true;
                std::cerr << "warning: corpus_size point " << run.point
                          << " exceeds available synthetic corpus (" << synthetic->size()
                          << "); run " << run.index << " skipped\n";
            } else if (run.repeat == 0) {
                // One prefix corpus per point; repeats reuse it.
                Corpus prefix(synthetic->name() + ":first" + std::to_string(run.point));
                for (std::size_t i = 0; i < run.point; ++i) {
                    prefix.add(synthetic->at(i));
                }
                const std::string filename =
                    "corpus_size_" + std::to_string(run.point) + ".jsonl";
                save_corpus(prefix, (out_dir / filename).string());
                outputs.push_back(filename);
                entry["corpus"] = filename;
            }
        }
        run_list.push_back(entry);
    }

    ordered_json plan_json;
    plan_json["axis"] = std::string(to_string(plan.axis));
    plan_json["points"] = plan.points;
    plan_json["repeats"] = plan.repeats;
    plan_json["base_seed"] = options.seed;
    plan_json["runs"] = run_list;
    write_text_file(out_dir / "sweep_plan.json", plan_json.dump(2) + "\n");

    ordered_json opt;
    opt["axis"] = options.axis;
    opt["points"] = options.points;
    opt["repeats"] = options.repeats;
    opt["seed"] = options.seed;
    opt["synthetic"] = options.synthetic_path;
    write_manifest(out_dir, "sweep", opt, outputs);
}

void cmd_build_instructions(const BuildInstructionsOptions& options) {
    require_file(options.source_path, "source corpus");
    const Corpus source = load_corpus(options.source_path);
    std::vector<InstructionRecord> records;
    try {
        records = build_instruction_dataset(source);
    } catch (const std::exception& e) {
        throw CommandError(e.what());
    }
    const fs::path out_dir = prepare_out_dir(options.out_dir);
    save_instruction_dataset(records, (out_dir / "instructions.jsonl").string());

    ordered_json opt;
    opt["source"] = options.source_path;
    ordered_json extra;
    extra["records"] = records.size();
    write_manifest(out_dir, "build_instructions", opt, {"instructions.jsonl"}, extra);
}

void cmd_mock_llm(const MockLlmOptions& options) {
    require_file(options.corpus_path, "corpus");
    const Corpus corpus = load_corpus(options.corpus_path);
    MockLlmServer server(corpus, options.order);
    server.set_fail_rate(options.fail_rate);
    std::cerr << "mock-llm serving " << corpus.size() << " utterances on port " << options.port
              << " (POST /v1/complete, GET /v1/stats)\n";
    if (!server.run_blocking(options.port)) {
        throw CommandError("mock-llm: cannot listen on port " + std::to_string(options.port));
    }
    throw CommandError("mock-llm server stopped unexpectedly");
}

namespace {

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw CommandError("cannot open config file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw CommandError("config file " + path + " is not valid JSON: " + e.what());
    }
}

// Config values seed the option structs before CLI11 parses, so the
// precedence is CLI > config > defaults.
template <typename T>
void from_config(const json& config, const char* key, T& target) {
    if (config.contains(key)) {
        try {
            target = config.at(key).get<T>();
        } catch (const std::exception& e) {
            throw CommandError(std::string("config key \"") + key + "\": " + e.what());
        }
    }
}

json extract_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw CommandError("--config requires a path");
            }
            return load_config_file(args[i + 1]);
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return load_config_file(args[i].substr(9));
        }
    }
    return json::object();
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        const json config = extract_config(args);

        CLI::App app{"Synthetic text corpus pipeline: prompt construction, generation, "
                     "diversity profiling, dataset mixing, and WER evaluation"};
        app.require_subcommand(1);
        std::string config_path;
        app.add_option("--config", config_path, "JSON config file (CLI flags override)");

        SynthesizeOptions synth;
        from_config(config, "source", synth.source_path);
        from_config(config, "domain", synth.target_domain);
        from_config(config, "strategy", synth.strategy);
        from_config(config, "num_demonstrations", synth.num_demonstrations);
        from_config(config, "endpoint", synth.endpoint);
        from_config(config, "n", synth.count);
        from_config(config, "typical_tau", synth.sampling.typical_tau);
        from_config(config, "repetition_penalty", synth.sampling.repetition_penalty);
        from_config(config, "temperature", synth.sampling.temperature);
        from_config(config, "max_tokens", synth.sampling.max_tokens);
        from_config(config, "seed", synth.sampling.seed);
        from_config(config, "lm_order", synth.lm_order);
        from_config(config, "jobs", synth.jobs);
        from_config(config, "out_dir", synth.out_dir);
        auto* synth_cmd = app.add_subcommand(
            "synthesize", "Generate a synthetic target-domain text corpus");
        synth_cmd->add_option("--source", synth.source_path, "source corpus (JSONL)");
        synth_cmd->add_option("--domain", synth.target_domain, "target domain name");
        synth_cmd->add_option("--strategy", synth.strategy, "naive | icl | if | icif");
        synth_cmd->add_option("-k,--num-demonstrations", synth.num_demonstrations,
                              "demonstrations per prompt (icl/icif)");
        synth_cmd->add_option("--endpoint", synth.endpoint,
                              "completion endpoint URL or \"builtin-toylm\"");
        synth_cmd->add_option("-n,--count", synth.count, "sentences to generate");
        synth_cmd->add_option("--tau", synth.sampling.typical_tau, "typical decoding tau");
        synth_cmd->add_option("--rep-penalty", synth.sampling.repetition_penalty,
                              "repetition penalty");
        synth_cmd->add_option("--temperature", synth.sampling.temperature, "softmax temperature");
        synth_cmd->add_option("--max-tokens", synth.sampling.max_tokens, "per-sentence token cap");
        synth_cmd->add_option("--seed", synth.sampling.seed, "base seed");
        synth_cmd->add_option("--lm-order", synth.lm_order, "builtin toy LM n-gram order");
        synth_cmd->add_option("--jobs", synth.jobs, "max in-flight requests / worker threads");
        synth_cmd->add_option("--out-dir", synth.out_dir, "output directory");

        ProfileOptions prof;
        from_config(config, "out_dir", prof.out_dir);
        auto* prof_cmd = app.add_subcommand(
            "profile", "Diversity/similarity profile of a synthetic corpus");
        prof_cmd->add_option("--synthetic", prof.synthetic_path, "synthetic corpus (JSONL)");
        prof_cmd->add_option("--reference", prof.reference_path, "reference corpus (JSONL)");
        prof_cmd->add_option("--sample-size", prof.sample_size,
                             "self-BLEU hypothesis sample size");
        prof_cmd->add_flag("--full", prof.full, "force full self-BLEU on large corpora");
        prof_cmd->add_option("--out-dir", prof.out_dir, "output directory");

        WerOptions werop;
        from_config(config, "out_dir", werop.out_dir);
        auto* wer_cmd = app.add_subcommand("wer", "Per-domain WER report from transcript pairs");
        wer_cmd->add_option("--pairs", werop.pairs_path,
                            "JSONL pairs {id, reference, hypothesis, domain}");
        wer_cmd->add_option("--baseline", werop.baseline_path,
                            "baseline pairs for relative improvement");
        wer_cmd->add_flag("--raw", werop.raw, "raw whitespace tokenization (no normalization)");
        wer_cmd->add_option("--out-dir", werop.out_dir, "output directory");

        MixOptions mixop;
        from_config(config, "real_fraction", mixop.real_fraction);
        from_config(config, "seed", mixop.seed);
        from_config(config, "out_dir", mixop.out_dir);
        auto* mix_cmd = app.add_subcommand(
            "mix", "Assemble an adaptation dataset from synthetic + real data");
        mix_cmd->add_option("--synthetic", mixop.synthetic_path, "synthetic corpus (JSONL)");
        mix_cmd->add_option("--real", mixop.real_path, "source-domain real corpus (JSONL)");
        mix_cmd->add_option("--real-fraction", mixop.real_fraction,
                            "fraction of real data to sample");
        mix_cmd->add_flag("!--no-dedup", mixop.dedup, "keep duplicate synthetic sentences");
        mix_cmd->add_option("--seed", mixop.seed, "sampling seed");
        mix_cmd->add_option("--out-dir", mixop.out_dir, "output directory");

        SweepOptions sweepop;
        from_config(config, "seed", sweepop.seed);
        from_config(config, "out_dir", sweepop.out_dir);
        auto* sweep_cmd = app.add_subcommand(
            "sweep", "Plan corpus-size / demonstration-count sweep runs");
        sweep_cmd->add_option("--axis", sweepop.axis, "corpus_size | num_demonstrations");
        sweep_cmd->add_option("--points", sweepop.points, "sweep points, ascending")
            ->delimiter(',');
        sweep_cmd->add_option("--repeats", sweepop.repeats, "repeats per point");
        sweep_cmd->add_option("--seed", sweepop.seed, "base seed");
        sweep_cmd->add_option("--synthetic", sweepop.synthetic_path,
                              "synthetic corpus to slice for corpus_size points");
        sweep_cmd->add_option("--out-dir", sweepop.out_dir, "output directory");

        MockLlmOptions mockop;
        auto* mock_cmd = app.add_subcommand(
            "mock-llm", "Serve the toy LM over the completion protocol");
        mock_cmd->add_option("--corpus", mockop.corpus_path, "corpus to fit the toy LM on");
        mock_cmd->add_option("--order", mockop.order, "n-gram order");
        mock_cmd->add_option("--port", mockop.port, "port to listen on");
        mock_cmd->add_option("--fail-rate", mockop.fail_rate,
                             "fraction of requests answered with HTTP 500");

        BuildInstructionsOptions buildop;
        from_config(config, "source", buildop.source_path);
        from_config(config, "out_dir", buildop.out_dir);
        auto* build_cmd = app.add_subcommand(
            "build-instructions", "Emit the instruction-finetuning dataset for a corpus");
        build_cmd->add_option("--source", buildop.source_path, "source corpus (JSONL)");
        build_cmd->add_option("--out-dir", buildop.out_dir, "output directory");

        std::vector<std::string> argv_strings = args;
        std::vector<char*> argv;
        std::string program = "textsynth";
        argv.push_back(program.data());
        for (auto& arg : argv_strings) {
            argv.push_back(arg.data());
        }
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            return app.exit(e);
        }

        if (synth_cmd->parsed()) cmd_synthesize(synth);
        if (prof_cmd->parsed()) cmd_profile(prof);
        if (wer_cmd->parsed()) cmd_wer(werop);
        if (mix_cmd->parsed()) cmd_mix(mixop);
        if (sweep_cmd->parsed()) cmd_sweep(sweepop);
        if (build_cmd->parsed()) cmd_build_instructions(buildop);
        if (mock_cmd->parsed()) cmd_mock_llm(mockop);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace textsynth
