#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace paperrec {

// One paper's metadata after cleaning. Keywords are normalized, self-citation
// edges are removed on ingest.
struct PaperRecord {
    std::string paper_id;
    std::string title;
    std::set<std::string> author_ids;
    std::set<std::string> keywords;
    std::set<std::string> references;  // papers this paper cites
    std::set<std::string> citations;   // papers citing this paper

    bool operator==(const PaperRecord&) const = default;
};

// Per-author feature sets aggregated over all authored papers.
struct UserProfile {
    std::string user_id;
    std::set<std::string> authored_papers;
    std::set<std::string> keyword_set;
    std::set<std::string> coauthor_set;   // never contains user_id
    std::set<std::string> citation_set;
    std::set<std::string> reference_set;

    bool operator==(const UserProfile&) const = default;
};

// Immutable after construction; downstream modules treat it as frozen and
// share it read-only across threads.
struct Corpus {
    std::map<std::string, PaperRecord> papers;
    std::map<std::string, UserProfile> users;

    bool operator==(const Corpus&) const = default;
};

// Maps input JSON field names onto the record fields, so corpora with
// different schemas can be ingested without rewriting them.
struct FieldMap {
    std::string id = "id";
    std::string title = "title";
    std::string authors = "authors";
    std::string keywords = "keywords";
    std::string references = "references";
    std::string citations = "citations";
};

struct ParseStats {
    std::size_t total_lines = 0;
    std::size_t parsed_papers = 0;
    std::size_t malformed_lines = 0;
    std::size_t duplicate_ids = 0;       // later duplicates dropped, first wins
    std::size_t self_edges_removed = 0;
    std::vector<std::string> warnings;
};

struct ParseResult {
    Corpus corpus;
    ParseStats stats;
};

// lowercase + trim + collapse internal whitespace; idempotent
std::string normalize_keyword(const std::string& raw);

// Parses one JSON object per line. Malformed lines are accumulated; if more
// than 10% of non-empty lines fail, throws FormatError.
ParseResult parse_corpus(std::istream& source, const FieldMap& fields = {});

// Reads the file (transparently inflating gzip, detected by magic bytes)
// and parses it.
ParseResult parse_corpus_file(const std::string& path, const FieldMap& fields = {});

// One profile per distinct author id; each set is the union over that
// author's papers.
std::map<std::string, UserProfile> build_profiles(
    const std::map<std::string, PaperRecord>& papers);

// Cache round-trip. The file carries a schema-version tag; load rejects
// mismatched or truncated files without producing a partial Corpus.
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

// Stable digest over the papers map, recorded in evaluation reports.
std::uint64_t corpus_digest(const Corpus& corpus);

}  // namespace paperrec
