#include "textsynth/corpus_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace textsynth {
namespace {

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Corpus read_corpus(std::istream& in, const std::string& name) {
    Corpus corpus(name);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        Utterance utt;
        try {
            const auto record = nlohmann::json::parse(line);
            if (!record.is_object()) {
                throw std::invalid_argument("record is not a JSON object");
            }
            utt.id = record.at("id").get<std::string>();
            utt.text = record.at("text").get<std::string>();
            utt.domain = record.at("domain").get<std::string>();
            utt.source = record.contains("source")
                             ? source_from_string(record.at("source").get<std::string>())
                             : Source::kReal;
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << name << ":" << line_no << ": malformed corpus record: " << e.what();
            throw std::runtime_error(msg.str());
        }
        try {
            corpus.add(std::move(utt));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << name << ":" << line_no << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
    }
    return corpus;
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open corpus file: " + path);
    }
    return read_corpus(in, std::filesystem::path(path).stem().string());
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
    for (const auto& utt : corpus.utterances()) {
        nlohmann::ordered_json record;
        record["id"] = utt.id;
        record["text"] = utt.text;
        record["domain"] = utt.domain;
        record["source"] = std::string(to_string(utt.source));
        out << record.dump() << "\n";
    }
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open corpus file for writing: " + path);
    }
    write_corpus(corpus, out);
    if (!out) {
        throw std::runtime_error("failed writing corpus file: " + path);
    }
}

}  // namespace textsynth
