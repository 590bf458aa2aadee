// Command-line driver: ingest / similar / recommend / evaluate.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 data/format error,
// 3 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paperrec/corpus.hpp"
#include "paperrec/errors.hpp"
#include "paperrec/evaluation.hpp"
#include "paperrec/recommend.hpp"
#include "paperrec/similarity.hpp"

namespace fs = std::filesystem;
using namespace paperrec;

namespace {

struct RunConfig {
    std::string corpus_path;
    std::string cache_path;
    std::string weights = "0.25,0.25,0.25,0.25";
    std::size_t top_n = 10;
    double threshold = 30.0;
    std::string candidates = "neighbors";
    std::string sweep = "5,10,20";
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::optional<std::size_t> max_recommendations;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat key = value config file; '#' starts a comment.
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParamError("bad config line (expected key = value): " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "corpus") cfg.corpus_path = value;
        else if (key == "cache") cfg.cache_path = value;
        else if (key == "weights") cfg.weights = value;
        else if (key == "top_n") cfg.top_n = std::stoul(value);
        else if (key == "threshold") cfg.threshold = std::stod(value);
        else if (key == "candidates") cfg.candidates = value;
        else if (key == "sweep") cfg.sweep = value;
        else if (key == "folds") cfg.folds = std::stoul(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "out") cfg.out_dir = value;
        else if (key == "max_recommendations") cfg.max_recommendations = std::stoul(value);
        else throw ParamError("unknown config key: " + key);
    }
}

SimilarityWeights parse_weights(const std::string& spec) {
    auto parts = split(spec, ',');
    if (parts.size() != 4)
        throw ParamError("weights must be four comma-separated values: " + spec);
    try {
        return SimilarityWeights(std::stod(parts[0]), std::stod(parts[1]),
                                 std::stod(parts[2]), std::stod(parts[3]));
    } catch (const std::invalid_argument&) {
        throw ParamError("weights are not numeric: " + spec);
    }
}

std::vector<std::size_t> parse_sweep(const std::string& spec) {
    std::vector<std::size_t> out;
    for (const auto& part : split(spec, ',')) {
        long v;
        try {
            v = std::stol(part);
        } catch (const std::exception&) {
            throw ParamError("bad sweep entry: " + part);
        }
        if (v <= 0) throw ParamError("sweep entries must be positive");
        if (!out.empty() && static_cast<std::size_t>(v) <= out.back())
            throw ParamError("sweep entries must be strictly increasing");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ParamError("sweep must be non-empty");
    return out;
}

CandidateStrategy parse_strategy(const std::string& spec, std::string* list_path) {
    if (spec == "neighbors") return CandidateStrategy::all_referenced_by_neighbors;
    if (spec == "corpus") return CandidateStrategy::full_corpus;
    if (spec.starts_with("file:")) {
        *list_path = spec.substr(5);
        return CandidateStrategy::explicit_list;
    }
    throw ParamError("unknown candidate strategy: " + spec +
                     " (expected neighbors|corpus|file:<path>)");
}

Corpus load_cache(const std::string& path) {
    if (path.empty()) throw ParamError("--cache is required");
    return load_corpus(path);
}

void echo_config(const RunConfig& cfg, const std::string& out_dir) {
    std::ofstream out(fs::path(out_dir) / "effective_config.txt");
    out << "corpus = " << cfg.corpus_path << '\n'
        << "cache = " << cfg.cache_path << '\n'
        << "weights = " << cfg.weights << '\n'
        << "top_n = " << cfg.top_n << '\n'
        << "threshold = " << cfg.threshold << '\n'
        << "candidates = " << cfg.candidates << '\n'
        << "sweep = " << cfg.sweep << '\n'
        << "folds = " << cfg.folds << '\n'
        << "seed = " << cfg.seed << '\n'
        << "out = " << cfg.out_dir << '\n';
    if (cfg.max_recommendations)
        out << "max_recommendations = " << *cfg.max_recommendations << '\n';
}

int cmd_ingest(const RunConfig& cfg) {
    if (cfg.corpus_path.empty()) throw ParamError("--corpus is required");
    if (cfg.cache_path.empty()) throw ParamError("--cache is required");
    auto [corpus, stats] = parse_corpus_file(cfg.corpus_path);
    save_corpus(corpus, cfg.cache_path);

    std::size_t warnings =
        stats.malformed_lines + stats.duplicate_ids + stats.self_edges_removed;
    std::cout << stats.parsed_papers << " papers, " << corpus.users.size()
              << " users, " << warnings << " warnings\n";
    if (stats.malformed_lines)
        std::cout << "  malformed lines: " << stats.malformed_lines << '\n';
    if (stats.duplicate_ids)
        std::cout << "  duplicate ids dropped: " << stats.duplicate_ids << '\n';
    if (stats.self_edges_removed)
        std::cout << "  self-citation edges removed: " << stats.self_edges_removed << '\n';
    for (const auto& w : stats.warnings) std::cout << "  " << w << '\n';
    return 0;
}

int cmd_similar(const RunConfig& cfg, const std::string& target) {
    Corpus corpus = load_cache(cfg.cache_path);
    auto weights = parse_weights(cfg.weights);
    auto matrix = build_matrix(corpus, weights);
    if (!matrix.contains(target)) throw ParamError("unknown user id: " + target);
    if (cfg.top_n > matrix.size() - 1)
        std::cerr << "note: top-n " << cfg.top_n << " exceeds the " << matrix.size() - 1
                  << " other users; returning all of them\n";

    auto neighbors = matrix.top_n_neighbors(target, cfg.top_n);
    const auto& tp = corpus.users.at(target);

    std::ostringstream table;
    table << "neighbor,sim_key,sim_ref,sim_coauth,sim_cit,sim_final\n";
    table.precision(12);
    for (const auto& [uid, score] : neighbors) {
        auto b = ensemble_sim(tp, corpus.users.at(uid), weights);
        table << uid << ',' << b.sim_key << ',' << b.sim_ref << ',' << b.sim_coauth
              << ',' << b.sim_cit << ',' << b.sim_final << '\n';
    }
    std::cout << table.str();
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::ofstream out(fs::path(cfg.out_dir) / "neighbors.csv");
        out << table.str();
        echo_config(cfg, cfg.out_dir);
    }
    return 0;
}

int cmd_recommend(const RunConfig& cfg, const std::string& target) {
    Corpus corpus = load_cache(cfg.cache_path);
    auto weights = parse_weights(cfg.weights);
    auto matrix = build_matrix(corpus, weights);

    std::string list_path;
    auto strategy = parse_strategy(cfg.candidates, &list_path);

    std::vector<std::string> explicit_list;
    if (strategy == CandidateStrategy::explicit_list) {
        std::ifstream in(list_path);
        if (!in) throw ParamError("cannot open candidate list: " + list_path);
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (!line.empty()) explicit_list.push_back(line);
        }
        if (explicit_list.empty())
            throw ParamError("explicit candidate list is empty: " + list_path);
    }

    auto candidates =
        candidate_pool(corpus, matrix, target, strategy, cfg.top_n, explicit_list);
    RecommendationParams params{cfg.top_n, cfg.threshold, cfg.max_recommendations};
    auto recs = recommend(corpus, matrix, target, candidates, params);

    export_recommendations_json(recs, std::cout);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        std::ofstream js(fs::path(cfg.out_dir) / "recommendations.json");
        export_recommendations_json(recs, js);
        std::ofstream csv(fs::path(cfg.out_dir) / "recommendations.csv");
        export_recommendations_csv(recs, csv);
        echo_config(cfg, cfg.out_dir);
    }
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, bool oracle) {
    Corpus corpus = load_cache(cfg.cache_path);
    if (cfg.out_dir.empty()) throw ParamError("--out is required for evaluate");

    EvaluationOptions opts;
    opts.weights = parse_weights(cfg.weights);
    opts.params.min_threshold_pct = cfg.threshold;
    opts.params.max_recommendations = cfg.max_recommendations;
    opts.top_n_sweep = parse_sweep(cfg.sweep);
    opts.k = cfg.folds;
    opts.seed = cfg.seed;
    std::string list_path;
    opts.strategy = parse_strategy(cfg.candidates, &list_path);
    if (opts.strategy == CandidateStrategy::explicit_list)
        throw ParamError("evaluate does not support file: candidate lists");
    opts.perfect_oracle = oracle;

    auto report = evaluate(corpus, opts);

    fs::create_directories(cfg.out_dir);
    std::ofstream js(fs::path(cfg.out_dir) / "report.json");
    emit_report_json(report, js);
    std::ofstream csv(fs::path(cfg.out_dir) / "sweep.csv");
    emit_sweep_csv(report, csv);
    echo_config(cfg, cfg.out_dir);

    emit_sweep_csv(report, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"user-based collaborative-filtering paper recommender"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, target;
    bool oracle = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        cmd->add_option("--cache", cfg.cache_path, "corpus cache file");
        cmd->add_option("--weights", cfg.weights, "alpha,beta,gamma,mu");
        cmd->add_option("--top-n", cfg.top_n, "neighbor count");
        cmd->add_option("--threshold", cfg.threshold, "majority threshold percent");
        cmd->add_option("--candidates", cfg.candidates, "neighbors|corpus|file:<path>");
        cmd->add_option("--sweep", cfg.sweep, "comma-separated top-n sweep");
        cmd->add_option("--folds", cfg.folds, "cross-validation fold count");
        cmd->add_option("--seed", cfg.seed, "random seed");
        cmd->add_option("--out", cfg.out_dir, "output directory");
        cmd->add_option("--max-recs", cfg.max_recommendations, "recommendation list cap");
    };

    auto* ingest = app.add_subcommand("ingest", "parse a JSON-lines corpus into a cache");
    ingest->add_option("--corpus", cfg.corpus_path, "raw JSON-lines corpus (may be gzipped)");
    add_common(ingest);

    auto* similar = app.add_subcommand("similar", "top-n similar users with breakdowns");
    similar->add_option("--user", target, "target user id")->required();
    add_common(similar);

    auto* rec = app.add_subcommand("recommend", "majority-vote recommendations");
    rec->add_option("--user", target, "target user id")->required();
    add_common(rec);

    auto* eval = app.add_subcommand("evaluate", "cross-validated precision/recall/f sweep");
    eval->add_flag("--oracle", oracle, "score a perfect oracle instead of the recommender");
    add_common(eval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        // precedence: defaults < config file < explicit flags; flags were
        // already applied by CLI11, so re-apply them after the config file
        if (!config_path.empty()) {
            RunConfig merged;
            apply_config(merged, load_config_file(config_path));
            CLI::App* sub = app.get_subcommands().front();
            auto keep = [&](const std::string& flag) {
                auto* opt = sub->get_option_no_throw(flag);
                return opt && opt->count() > 0;
            };
            if (!keep("--cache") && !merged.cache_path.empty()) cfg.cache_path = merged.cache_path;
            if (!keep("--corpus") && !merged.corpus_path.empty()) cfg.corpus_path = merged.corpus_path;
            if (!keep("--weights")) cfg.weights = merged.weights;
            if (!keep("--top-n")) cfg.top_n = merged.top_n;
            if (!keep("--threshold")) cfg.threshold = merged.threshold;
            if (!keep("--candidates")) cfg.candidates = merged.candidates;
            if (!keep("--sweep")) cfg.sweep = merged.sweep;
            if (!keep("--folds")) cfg.folds = merged.folds;
            if (!keep("--seed")) cfg.seed = merged.seed;
            if (!keep("--out") && !merged.out_dir.empty()) cfg.out_dir = merged.out_dir;
            if (!keep("--max-recs") && merged.max_recommendations)
                cfg.max_recommendations = merged.max_recommendations;
        }

        if (ingest->parsed()) return cmd_ingest(cfg);
        if (similar->parsed()) return cmd_similar(cfg, target);
        if (rec->parsed()) return cmd_recommend(cfg, target);
        if (eval->parsed()) return cmd_evaluate(cfg, oracle);
        return 1;
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
