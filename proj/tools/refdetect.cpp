// refdetect: reports refactoring relationships between two revisions of a
// Java source tree.
//
//   refdetect detect    --repo R --commit C | --repo R --range A..B |
//                       --before DIR --after DIR
//   refdetect evaluate  <same inputs or --corpus MANIFEST> --oracle CSV
//   refdetect calibrate --corpus MANIFEST [--grid 0.1:0.9:0.1] [--out FILE]
//
// Exit code 0 on success, 2 on I/O, repository or source parse errors.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "refdetect/refdetect.hpp"

namespace {

using namespace refdetect;

struct InputOptions {
    std::string repo;
    std::string commit;
    std::string range;
    std::string before_dir;
    std::string after_dir;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--repo", in.repo, "git repository path");
    cmd->add_option("--commit", in.commit, "commit to compare with its parent");
    cmd->add_option("--range", in.range, "revision range, e.g. A..B or a branch");
    cmd->add_option("--before", in.before_dir, "directory with the old revision");
    cmd->add_option("--after", in.after_dir, "directory with the new revision");
}

void validate_input(const InputOptions& in, bool allow_range) {
    bool dirs = !in.before_dir.empty() || !in.after_dir.empty();
    bool repo = !in.repo.empty() || !in.commit.empty() || !in.range.empty();
    if (dirs && repo)
        throw Error("choose either --before/--after or --repo inputs, not both");
    if (dirs) {
        if (in.before_dir.empty() || in.after_dir.empty())
            throw Error("--before and --after must be given together");
        return;
    }
    if (in.repo.empty())
        throw Error("no input: use --before/--after or --repo with --commit" +
                    std::string(allow_range ? "/--range" : ""));
    if (in.commit.empty() && (in.range.empty() || !allow_range))
        throw Error(allow_range ? "--repo needs --commit or --range"
                                : "--repo needs --commit");
    if (!in.commit.empty() && !in.range.empty())
        throw Error("--commit and --range are mutually exclusive");
}

ThresholdConfig load_config(const std::string& config_path) {
    if (!config_path.empty()) return ThresholdConfig::load(config_path);
    if (const char* env = std::getenv("REFDETECT_CONFIG"); env && *env)
        return ThresholdConfig::load(env);
    return ThresholdConfig::defaults();
}

void report_parse_errors(const ParsedPair& pair, bool& had_errors) {
    for (const auto& e : pair.errors) {
        std::cerr << "parse error: " << pair.label << ": " << e.message()
                  << "\n";
        had_errors = true;
    }
}

// manifest rows: pair,<before_dir>,<after_dir>,<oracle_csv>
//                commit,<repo>,<commit_id>,<oracle_csv>
// paths are resolved relative to the manifest file's directory
struct ManifestEntry {
    RevisionPair revision;
    std::vector<OracleEntry> oracle;
};

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read corpus manifest: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    auto rows = refdetect::detail::parse_csv(ss.str());
    auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };

    std::vector<ManifestEntry> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.empty() || row[0].empty() || row[0][0] == '#') continue;
        if (row.size() < 4)
            throw Error(path + ":" + std::to_string(i + 1) +
                        ": manifest row needs kind,arg,arg,oracle");
        ManifestEntry e;
        if (row[0] == "pair")
            e.revision = load_directory_pair(resolve(row[1]), resolve(row[2]));
        else if (row[0] == "commit")
            e.revision = load_commit_pair(resolve(row[1]), row[2]);
        else
            throw Error(path + ":" + std::to_string(i + 1) +
                        ": unknown manifest row kind '" + row[0] + "'");
        e.oracle = load_oracle_file(resolve(row[3]));
        out.push_back(std::move(e));
    }
    if (out.empty()) throw Error("corpus manifest lists no revision pairs");
    return out;
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0, end = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> end >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0 || start <= 0 || end >= 1 || start > end)
        throw Error("bad grid spec (want start:end:step within (0,1)): " + spec);
    std::vector<double> g;
    // integer stepping in thousandths keeps the grid exact
    long s = std::lround(start * 1000), e = std::lround(end * 1000),
         st = std::lround(step * 1000);
    if (st <= 0) throw Error("grid step too small: " + spec);
    for (long v = s; v <= e; v += st) g.push_back(static_cast<double>(v) / 1000.0);
    return g;
}

// ---- detect ----

int cmd_detect(const InputOptions& in, const std::string& config_path,
               const std::string& format, bool timings, int jobs) {
    validate_input(in, /*allow_range=*/true);
    ThresholdConfig config = load_config(config_path);
    bool had_errors = false;

    std::vector<RevisionPair> pairs;
    if (!in.before_dir.empty()) {
        pairs.push_back(load_directory_pair(in.before_dir, in.after_dir));
    } else if (!in.commit.empty()) {
        pairs.push_back(load_commit_pair(in.repo, in.commit));
    } else {
        // range mode: loading and analysis parallelize per commit, output
        // stays in commit order
        std::vector<std::string> commits = list_commits(in.repo, in.range);
        std::vector<std::optional<PairAnalysis>> slots(commits.size());
        std::vector<std::string> failures(commits.size());
        std::atomic<std::size_t> next{0};
        int workers = std::max(1, jobs);
        auto work = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= commits.size()) return;
                try {
                    slots[i] = analyze_pair(
                        load_commit_pair(in.repo, commits[i]), config);
                } catch (const Error& err) {
                    failures[i] = err.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();

        std::vector<DetectionRecord> records;
        for (std::size_t i = 0; i < commits.size(); ++i) {
            if (!failures[i].empty()) {
                std::cerr << "error: " << commits[i] << ": " << failures[i]
                          << "\n";
                had_errors = true;
                continue;
            }
            report_parse_errors(slots[i]->parsed, had_errors);
            auto rs = slots[i]->records();
            records.insert(records.end(), rs.begin(), rs.end());
        }
        if (format == "json") {
            std::cout << records_to_json(records, timings);
        } else {
            std::cout << records_csv_header(timings) << "\n";
            for (const auto& r : records)
                std::cout << record_to_csv(r, timings) << "\n";
        }
        return had_errors ? 2 : 0;
    }

    std::vector<DetectionRecord> records;
    for (const auto& rp : pairs) {
        PairAnalysis pa = analyze_pair(rp, config);
        report_parse_errors(pa.parsed, had_errors);
        auto rs = pa.records();
        records.insert(records.end(), rs.begin(), rs.end());
    }
    if (format == "json") {
        std::cout << records_to_json(records, timings);
    } else {
        std::cout << records_csv_header(timings) << "\n";
        for (const auto& r : records)
            std::cout << record_to_csv(r, timings) << "\n";
    }
    return had_errors ? 2 : 0;
}

// ---- evaluate ----

int cmd_evaluate(const InputOptions& in, const std::string& corpus_path,
                 const std::string& oracle_path, const std::string& config_path,
                 bool lenient) {
    ThresholdConfig config = load_config(config_path);
    bool had_errors = false;

    std::vector<ParsedPair> parsed;
    if (!corpus_path.empty()) {
        for (auto& entry : load_manifest(corpus_path))
            parsed.push_back(
                parse_pair(entry.revision, std::move(entry.oracle)));
    } else {
        validate_input(in, /*allow_range=*/false);
        if (oracle_path.empty())
            throw Error("evaluate needs --oracle (or a --corpus manifest)");
        RevisionPair rp = !in.before_dir.empty()
                              ? load_directory_pair(in.before_dir, in.after_dir)
                              : load_commit_pair(in.repo, in.commit);
        parsed.push_back(parse_pair(rp, load_oracle_file(oracle_path)));
    }

    EvalReport total;
    auto supported = supported_types();
    for (const auto& pair : parsed) {
        report_parse_errors(pair, had_errors);
        DetectionResult r = detect(pair.before, pair.after, config);
        EvalReport rep =
            evaluate(r.refactorings, pair.oracle, supported, lenient);
        for (const auto& [t, c] : rep.per_type) total.per_type[t] += c;
    }
    std::cout << render_eval_report(total);
    return had_errors ? 2 : 0;
}

// ---- calibrate ----

int cmd_calibrate(const std::string& corpus_path, const std::string& grid_spec,
                  const std::string& out_path) {
    std::vector<double> grid =
        grid_spec.empty() ? default_grid() : parse_grid(grid_spec);

    bool had_errors = false;
    std::vector<ParsedPair> parsed;
    for (auto& entry : load_manifest(corpus_path)) {
        parsed.push_back(parse_pair(entry.revision, std::move(entry.oracle)));
        report_parse_errors(parsed.back(), had_errors);
    }

    CalibrationResult cal = calibrate_all(parsed, grid);
    std::cout << render_calibration_table(cal);
    if (!out_path.empty()) {
        cal.config.save(out_path);
        std::cerr << "wrote " << out_path << "\n";
    }
    return had_errors ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"refactoring detector for Java source trees"};
    app.require_subcommand(1);

    InputOptions det_in;
    std::string det_config, det_format = "csv";
    bool det_timings = false;
    int det_jobs = 1;
    CLI::App* det = app.add_subcommand("detect", "report refactorings");
    add_input_options(det, det_in);
    det->add_option("--config", det_config, "threshold config file");
    det->add_option("--format", det_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    det->add_flag("--timings", det_timings, "append per-pair elapsed_ms");
    det->add_option("--jobs", det_jobs, "parallel workers in range mode")
        ->check(CLI::Range(1, 256));

    InputOptions eva_in;
    std::string eva_corpus, eva_oracle, eva_config;
    bool eva_lenient = false;
    CLI::App* eva = app.add_subcommand("evaluate",
                                       "score detection against an oracle");
    add_input_options(eva, eva_in);
    eva->add_option("--corpus", eva_corpus, "corpus manifest file");
    eva->add_option("--oracle", eva_oracle, "oracle CSV (single pair mode)");
    eva->add_option("--config", eva_config, "threshold config file");
    eva->add_flag("--lenient-methods", eva_lenient,
                  "match method descriptors by name, ignoring parameters");

    std::string cal_corpus, cal_grid, cal_out;
    CLI::App* cal = app.add_subcommand("calibrate",
                                       "fit per-type thresholds on a corpus");
    cal->add_option("--corpus", cal_corpus, "corpus manifest file")->required();
    cal->add_option("--grid", cal_grid, "sweep grid start:end:step");
    cal->add_option("--out", cal_out, "write calibrated config here");

    try {
        app.parse(argc, argv);
        if (det->parsed())
            return cmd_detect(det_in, det_config, det_format, det_timings,
                              det_jobs);
        if (eva->parsed())
            return cmd_evaluate(eva_in, eva_corpus, eva_oracle, eva_config,
                                eva_lenient);
        if (cal->parsed())
            return cmd_calibrate(cal_corpus, cal_grid, cal_out);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const refdetect::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
