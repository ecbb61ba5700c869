#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "textsynth/commands.hpp"
#include "textsynth/corpus_io.hpp"
#include "textsynth/prompt.hpp"

using namespace textsynth;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("textsynth_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int value = 0;
        return value;
    }
    std::string str(const std::string& name = "") const {
        return name.empty() ? path.string() : (path / name).string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    out << content;
}

std::string fixture_corpus_text() {
    std::ostringstream out;
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"wake me up at seven", "alarm"},       {"set an alarm for six", "alarm"},
        {"cancel my alarm now", "alarm"},       {"send an email to john", "email"},
        {"check my inbox please", "email"},     {"reply to the last email", "email"},
        {"play some jazz music", "music"},      {"skip to the next song", "music"},
        {"pause the music please", "music"},    {"what is the weather like", "weather"},
        {"will it rain this afternoon", "weather"}, {"do i need an umbrella", "weather"},
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        nlohmann::ordered_json record;
        record["id"] = "u" + std::to_string(i);
        record["text"] = rows[i].first;
        record["domain"] = rows[i].second;
        out << record.dump() << "\n";
    }
    return out.str();
}

// Pairs file where each domain's pooled WER lands exactly on the requested
// percentage: 100 pairs of 100 reference tokens, with the error budget spent
// on substitutions.
void write_pairs_file(const std::string& path, const std::vector<std::string>& domains,
                      const std::vector<double>& wers) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    for (std::size_t d = 0; d < domains.size(); ++d) {
        auto errors = static_cast<long long>(std::llround(wers[d] * 100.0));
        for (int pair = 0; pair < 100; ++pair) {
            std::string ref;
            std::string hyp;
            for (int tok = 0; tok < 100; ++tok) {
                if (tok) {
                    ref += ' ';
                    hyp += ' ';
                }
                ref += "tok" + std::to_string(tok);
                if (errors > 0) {
                    hyp += "sub" + std::to_string(tok);
                    --errors;
                } else {
                    hyp += "tok" + std::to_string(tok);
                }
            }
            nlohmann::ordered_json record;
            record["id"] = domains[d] + "-" + std::to_string(pair);
            record["reference"] = ref;
            record["hypothesis"] = hyp;
            record["domain"] = domains[d];
            out << record.dump() << "\n";
        }
    }
}

}  // namespace

TEST_CASE("synthesize with the builtin toy LM is byte-deterministic") {
    TempDir dir;
    write_file(dir.str("corpus.jsonl"), fixture_corpus_text());
    const std::vector<std::string> args = {
        "synthesize", "--source", dir.str("corpus.jsonl"), "--domain", "weather",
        "--strategy", "icif",     "-k", "2", "-n", "20", "--seed", "0",
        "--max-tokens", "12",     "--out-dir", dir.str("run1")};
    REQUIRE(run_cli(args) == 0);
    auto args2 = args;
    args2.back() = dir.str("run2");
    REQUIRE(run_cli(args2) == 0);
    CHECK(slurp(dir.str("run1") + "/synthetic.jsonl") ==
          slurp(dir.str("run2") + "/synthetic.jsonl"));

    const Corpus synthetic = load_corpus(dir.str("run1") + "/synthetic.jsonl");
    CHECK(synthetic.size() <= 20);
    for (const auto& utt : synthetic.utterances()) {
        CHECK(utt.domain == "weather");
        CHECK(utt.source == Source::kSynthetic);
    }
    // The manifest records the resolved options.
    const auto manifest =
        nlohmann::json::parse(slurp(dir.str("run1") + "/synthesize_manifest.json"));
    CHECK(manifest.at("options").at("strategy") == "icif");
    CHECK(manifest.at("options").at("num_demonstrations") == 2);
    CHECK(manifest.contains("generated"));   // counts present
}

TEST_CASE("synthesize with naive strategy records zero demonstrations in the manifest") {
    TempDir dir;
    write_file(dir.str("corpus.jsonl"), fixture_corpus_text());
    REQUIRE(run_cli({"synthesize", "--source", dir.str("corpus.jsonl"), "--domain", "weather",
                     "--strategy", "naive", "-n", "5", "--seed", "1", "--out-dir",
                     dir.str("out")}) == 0);
    const auto manifest =
        nlohmann::json::parse(slurp(dir.str("out") + "/synthesize_manifest.json"));
    CHECK(manifest.at("options").at("num_demonstrations") == 0);
    CHECK(manifest.at("options").at("strategy") == "naive");
}

TEST_CASE("synthesize rejects icl without enough source data") {
    TempDir dir;
    write_file(dir.str("tiny.jsonl"),
               R"({"id":"a","text":"only one","domain":"alarm"})" "\n");
    CHECK(run_cli({"synthesize", "--source", dir.str("tiny.jsonl"), "--domain", "alarm",
                   "--strategy", "icif", "-k", "5", "-n", "2", "--out-dir",
                   dir.str("out")}) != 0);
}

TEST_CASE("profile of a corpus against itself reports zero divergence") {
    TempDir dir;
    write_file(dir.str("corpus.jsonl"), fixture_corpus_text());
    REQUIRE(run_cli({"profile", "--synthetic", dir.str("corpus.jsonl"), "--reference",
                     dir.str("corpus.jsonl"), "--out-dir", dir.str("out")}) == 0);
    const auto report = nlohmann::json::parse(slurp(dir.str("out") + "/profile.json"));
    CHECK(report.at("js_div").get<double>() == doctest::Approx(0.0));
    for (const char* key : {"distinct1", "distinct2", "self_bleu4", "js_div"}) {
        const double v = report.at(key).get<double>();
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(fs::exists(dir.str("out") + "/profile.csv"));
}

TEST_CASE("profile honours an explicit self-BLEU sample size") {
    TempDir dir;
    write_file(dir.str("corpus.jsonl"), fixture_corpus_text());
    REQUIRE(run_cli({"profile", "--synthetic", dir.str("corpus.jsonl"), "--reference",
                     dir.str("corpus.jsonl"), "--sample-size", "5", "--out-dir",
                     dir.str("out")}) == 0);
    const auto report = nlohmann::json::parse(slurp(dir.str("out") + "/profile.json"));
    CHECK(report.at("sample_size").get<std::size_t>() == 5);
    CHECK(report.at("seed").get<uint64_t>() == 0);

    // --full forces the exact computation; the report then records no sample.
    REQUIRE(run_cli({"profile", "--synthetic", dir.str("corpus.jsonl"), "--reference",
                     dir.str("corpus.jsonl"), "--full", "--out-dir", dir.str("full")}) == 0);
    const auto full = nlohmann::json::parse(slurp(dir.str("full") + "/profile.json"));
    CHECK(full.at("sample_size").is_null());
}

TEST_CASE("missing input files fail with the path in the message") {
    TempDir dir;
    CHECK(run_cli({"profile", "--synthetic", dir.str("absent.jsonl"), "--reference",
                   dir.str("absent.jsonl"), "--out-dir", dir.str("out")}) == 1);
    CHECK(run_cli({"wer", "--pairs", dir.str("absent.jsonl")}) == 1);
    CHECK(run_cli({"mix", "--synthetic", dir.str("absent.jsonl"), "--real",
                   dir.str("absent.jsonl")}) == 1);
}

TEST_CASE("wer command reproduces the published averages from constructed transcripts") {
    const std::vector<std::string> domains = {
        "alarm", "audio", "calendar", "cooking", "datetime", "email", "general", "iot",
        "lists", "music", "news", "play", "qa", "recommendation", "social", "takeaway",
        "transport", "weather"};
    const std::vector<double> baseline = {8.0,  13.1, 12.8, 18.2, 11.2, 19.0, 14.4, 19.2, 14.6,
                                          10.5, 15.3, 24.8, 22.3, 15.7, 26.3, 26.5, 17.1, 12.9};
    const std::vector<double> adapted = {4.90,  7.50,  10.27, 9.93,  8.33,  12.70,
                                         13.33, 12.17, 11.17, 8.00,  10.67, 18.90,
                                         19.43, 12.57, 16.80, 19.33, 9.80,  9.37};
    TempDir dir;
    write_pairs_file(dir.str("baseline.jsonl"), domains, baseline);
    write_pairs_file(dir.str("adapted.jsonl"), domains, adapted);
    REQUIRE(run_cli({"wer", "--pairs", dir.str("adapted.jsonl"), "--baseline",
                     dir.str("baseline.jsonl"), "--out-dir", dir.str("out")}) == 0);
    const auto summary = nlohmann::json::parse(slurp(dir.str("out") + "/wer_summary.json"));
    const auto& average = summary.at("average");
    CHECK(std::abs(average.at("baseline_wer").get<double>() - 16.77) <= 0.01);
    CHECK(std::abs(average.at("adapted_wer").get<double>() - 11.95) <= 0.01);
    CHECK(std::abs(average.at("mean_relative_improvement").get<double>() - 28.73) <= 0.05);
    CHECK(summary.at("domains").at("alarm").at("relative_improvement").get<double>() ==
          doctest::Approx(38.75).epsilon(1e-9));

    const std::string csv = slurp(dir.str("out") + "/wer_report.csv");
    CHECK(csv.find("method,alarm,") == 0);
    CHECK(csv.find("baseline,8.00,") != std::string::npos);
    CHECK(csv.find("relative_improvement,38.75,") != std::string::npos);
}

TEST_CASE("wer with identical hypothesis and baseline rows") {
    TempDir dir;
    write_pairs_file(dir.str("pairs.jsonl"), {"alarm", "email"}, {5.0, 10.0});
    REQUIRE(run_cli({"wer", "--pairs", dir.str("pairs.jsonl"), "--baseline",
                     dir.str("pairs.jsonl"), "--out-dir", dir.str("out")}) == 0);
    const auto summary = nlohmann::json::parse(slurp(dir.str("out") + "/wer_summary.json"));
    CHECK(summary.at("average").at("mean_relative_improvement").get<double>() ==
          doctest::Approx(0.0));
}

TEST_CASE("wer excludes zero-reference-token domains with a warning") {
    TempDir dir;
    std::ostringstream pairs;
    pairs << R"({"id":"a","reference":"turn on the light","hypothesis":"turn on the light","domain":"iot"})"
          << "\n"
          << R"({"id":"b","reference":"!!!","hypothesis":"something","domain":"punct"})"
          << "\n";
    write_file(dir.str("pairs.jsonl"), pairs.str());
    REQUIRE(run_cli({"wer", "--pairs", dir.str("pairs.jsonl"), "--out-dir", dir.str("out")}) ==
            0);
    const auto summary = nlohmann::json::parse(slurp(dir.str("out") + "/wer_summary.json"));
    CHECK(summary.at("domains").contains("iot"));
    CHECK(!summary.at("domains").contains("punct"));
    CHECK(summary.at("excluded_domains").size() == 1);
}

TEST_CASE("mix command samples the requested real fraction") {
    TempDir dir;
    write_file(dir.str("real.jsonl"), fixture_corpus_text());
    std::ostringstream synthetic;
    for (int i = 0; i < 6; ++i) {
        synthetic << R"({"id":"s)" << i << R"(","text":"synthetic line )" << i
                  << R"(","domain":"weather","source":"synthetic"})" << "\n";
    }
    write_file(dir.str("syn.jsonl"), synthetic.str());
    REQUIRE(run_cli({"mix", "--synthetic", dir.str("syn.jsonl"), "--real", dir.str("real.jsonl"),
                     "--real-fraction", "0.25", "--seed", "3", "--out-dir",
                     dir.str("out")}) == 0);
    const Corpus mixed = load_corpus(dir.str("out") + "/mixed.jsonl");
    std::size_t real = 0;
    for (const auto& utt : mixed.utterances()) {
        if (utt.source == Source::kReal) ++real;
    }
    CHECK(real == 3);   // ceil(0.25 * 12)
    CHECK(mixed.size() == 9);
}

TEST_CASE("sweep emits the plan and slices prefix corpora") {
    TempDir dir;
    write_file(dir.str("syn.jsonl"), fixture_corpus_text());
    REQUIRE(run_cli({"sweep", "--axis", "corpus_size", "--points", "4,8,99", "--repeats", "2",
                     "--seed", "5", "--synthetic", dir.str("syn.jsonl"), "--out-dir",
                     dir.str("out")}) == 0);
    const auto plan = nlohmann::json::parse(slurp(dir.str("out") + "/sweep_plan.json"));
    CHECK(plan.at("runs").size() == 6);
    CHECK(fs::exists(dir.str("out") + "/corpus_size_4.jsonl"));
    CHECK(fs::exists(dir.str("out") + "/corpus_size_8.jsonl"));
    CHECK(!fs::exists(dir.str("out") + "/corpus_size_99.jsonl"));
    CHECK(load_corpus(dir.str("out") + "/corpus_size_4.jsonl").size() == 4);
    bool saw_skip = false;
    for (const auto& run : plan.at("runs")) {
        if (run.value("skipped", false)) saw_skip = true;
    }
    CHECK(saw_skip);
}

TEST_CASE("build-instructions writes one record per utterance") {
    TempDir dir;
    write_file(dir.str("corpus.jsonl"), fixture_corpus_text());
    REQUIRE(run_cli({"build-instructions", "--source", dir.str("corpus.jsonl"), "--out-dir",
                     dir.str("out")}) == 0);
    const auto records = load_instruction_dataset(dir.str("out") + "/instructions.jsonl");
    CHECK(records.size() == 12);
    CHECK(records[0].prompt == "Please generate a sentence related to alarm:");
    CHECK(records[0].completion == " wake me up at seven");
}

TEST_CASE("config file supplies defaults and the command line overrides them") {
    TempDir dir;
    write_file(dir.str("corpus.jsonl"), fixture_corpus_text());
    nlohmann::json config;
    config["source"] = dir.str("corpus.jsonl");
    config["domain"] = "weather";
    config["strategy"] = "naive";
    config["n"] = 4;
    config["seed"] = 9;
    config["out_dir"] = dir.str("from_config");
    write_file(dir.str("config.json"), config.dump());

    REQUIRE(run_cli({"--config", dir.str("config.json"), "synthesize"}) == 0);
    CHECK(load_corpus(dir.str("from_config") + "/synthetic.jsonl").size() <= 4);
    const auto manifest =
        nlohmann::json::parse(slurp(dir.str("from_config") + "/synthesize_manifest.json"));
    CHECK(manifest.at("options").at("n") == 4);

    // CLI flag wins over the config value.
    REQUIRE(run_cli({"--config", dir.str("config.json"), "synthesize", "-n", "2", "--out-dir",
                     dir.str("cli_wins")}) == 0);
    const auto manifest2 =
        nlohmann::json::parse(slurp(dir.str("cli_wins") + "/synthesize_manifest.json"));
    CHECK(manifest2.at("options").at("n") == 2);
}
