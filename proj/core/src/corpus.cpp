#include "paperrec/corpus.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include <zlib.h>

#include <nlohmann/json.hpp>

#include "paperrec/errors.hpp"

namespace paperrec {

namespace {

using nlohmann::json;

constexpr int kCacheSchemaVersion = 1;

std::set<std::string> string_set(const json& obj, const std::string& field) {
    std::set<std::string> out;
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) return out;
    if (!it->is_array()) throw FormatError("field '" + field + "' is not an array");
    for (const auto& v : *it) {
        if (!v.is_string()) throw FormatError("field '" + field + "' has a non-string entry");
        out.insert(v.get<std::string>());
    }
    return out;
}

bool looks_gzipped(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    return in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

std::string gunzip_file(const std::string& path) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw IoError("cannot open " + path);
    std::string out;
    char buf[1 << 16];
    int n;
    while ((n = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
    if (n < 0) {
        gzclose(gz);
        throw FormatError("gzip decompression failed for " + path);
    }
    gzclose(gz);
    return out;
}

json paper_to_json(const PaperRecord& p) {
    return json{{"id", p.paper_id},
                {"title", p.title},
                {"authors", p.author_ids},
                {"keywords", p.keywords},
                {"references", p.references},
                {"citations", p.citations}};
}

PaperRecord paper_from_json(const json& obj) {
    PaperRecord p;
    p.paper_id = obj.at("id").get<std::string>();
    p.title = obj.value("title", std::string{});
    p.author_ids = string_set(obj, "authors");
    p.keywords = string_set(obj, "keywords");
    p.references = string_set(obj, "references");
    p.citations = string_set(obj, "citations");
    return p;
}

}  // namespace

std::string normalize_keyword(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (std::isspace(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

ParseResult parse_corpus(std::istream& source, const FieldMap& fields) {
    ParseResult result;
    auto& [corpus, stats] = result;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++stats.total_lines;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains(fields.id) ||
            !obj[fields.id].is_string()) {
            ++stats.malformed_lines;
            if (stats.warnings.size() < 20)
                stats.warnings.push_back("line " + std::to_string(line_no) + ": malformed record");
            continue;
        }

        PaperRecord p;
        p.paper_id = obj[fields.id].get<std::string>();
        if (p.paper_id.empty()) {
            ++stats.malformed_lines;
            continue;
        }
        if (corpus.papers.contains(p.paper_id)) {
            ++stats.duplicate_ids;  // first occurrence wins
            continue;
        }
        try {
            p.title = obj.value(fields.title, std::string{});
            p.author_ids = string_set(obj, fields.authors);
            for (const auto& raw : string_set(obj, fields.keywords)) {
                auto norm = normalize_keyword(raw);
                if (!norm.empty()) p.keywords.insert(norm);
            }
            p.references = string_set(obj, fields.references);
            p.citations = string_set(obj, fields.citations);
        } catch (const FormatError&) {
            ++stats.malformed_lines;
            continue;
        }
        if (p.references.erase(p.paper_id) + p.citations.erase(p.paper_id) > 0)
            ++stats.self_edges_removed;

        corpus.papers.emplace(p.paper_id, std::move(p));
        ++stats.parsed_papers;
    }

    if (stats.total_lines > 0 &&
        stats.malformed_lines * 10 > stats.total_lines)
        throw FormatError("corpus format error: " + std::to_string(stats.malformed_lines) +
                          " of " + std::to_string(stats.total_lines) + " lines malformed");

    corpus.users = build_profiles(corpus.papers);
    return result;
}

ParseResult parse_corpus_file(const std::string& path, const FieldMap& fields) {
    if (looks_gzipped(path)) {
        std::istringstream in(gunzip_file(path));
        return parse_corpus(in, fields);
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_corpus(in, fields);
}

std::map<std::string, UserProfile> build_profiles(
    const std::map<std::string, PaperRecord>& papers) {
    std::map<std::string, UserProfile> users;
    for (const auto& [pid, paper] : papers) {
        for (const auto& uid : paper.author_ids) {
            auto& profile = users[uid];
            profile.user_id = uid;
            profile.authored_papers.insert(pid);
            profile.keyword_set.insert(paper.keywords.begin(), paper.keywords.end());
            profile.citation_set.insert(paper.citations.begin(), paper.citations.end());
            profile.reference_set.insert(paper.references.begin(), paper.references.end());
            for (const auto& co : paper.author_ids)
                if (co != uid) profile.coauthor_set.insert(co);
        }
    }
    return users;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    json doc;
    doc["schema_version"] = kCacheSchemaVersion;
    auto& papers = doc["papers"] = json::array();
    for (const auto& [pid, paper] : corpus.papers) papers.push_back(paper_to_json(paper));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << doc.dump();
    out.flush();
    if (!out) throw IoError("write failed for " + path);
}

Corpus load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw FormatError("corpus cache is corrupt or truncated: " + path);
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
        throw FormatError("corpus cache has no schema version tag: " + path);
    if (doc["schema_version"].get<int>() != kCacheSchemaVersion)
        throw FormatError("corpus cache schema version mismatch: expected " +
                          std::to_string(kCacheSchemaVersion) + ", got " +
                          doc["schema_version"].dump());

    Corpus corpus;
    for (const auto& obj : doc.at("papers")) {
        auto p = paper_from_json(obj);
        auto id = p.paper_id;
        corpus.papers.emplace(std::move(id), std::move(p));
    }
    corpus.users = build_profiles(corpus.papers);
    return corpus;
}

std::uint64_t corpus_digest(const Corpus& corpus) {
    // FNV-1a over the canonical serialization of the papers map
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [pid, paper] : corpus.papers) {
        mix(pid);
        mix(paper.title);
        for (const auto& s : paper.author_ids) mix(s);
        for (const auto& s : paper.keywords) mix(s);
        for (const auto& s : paper.references) mix(s);
        for (const auto& s : paper.citations) mix(s);
    }
    return h;
}

}  // namespace paperrec
