// fastami: compare label files, run synthetic EMI benchmarks, sample partitions.

#include "fastami/benchgen.hpp"
#include "fastami/core_metrics.hpp"
#include "fastami/estimators.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace fastami;

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> read_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) {
            continue;
        }
        std::string extra;
        if (fields >> extra) {
            throw InputError(path + ": more than one token on line " + std::to_string(tokens.size() + 1));
        }
        tokens.push_back(std::move(token));
    }
    if (tokens.empty()) {
        throw InputError(path + ": no labels");
    }
    return tokens;
}

Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) {
        return Seed{*flag};
    }
    if (const char* env = std::getenv("FASTAMI_SEED")) {
        try {
            std::size_t used = 0;
            const std::uint64_t v = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return Seed{v};
            }
        } catch (const std::exception&) {
        }
        throw InputError("FASTAMI_SEED is not an unsigned integer");
    }
    return Seed{0};
}

struct Report {
    std::string metric;
    double value = 0.0;
    std::optional<double> std_error;
    std::optional<std::uint64_t> n_samples;
    double wall_time_s = 0.0;
    bool degenerate = false;
    bool converged = true;
    bool timed_out = false;
    std::uint64_t seed = 0;
};

nlohmann::json nullable(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

void print_json(const Report& r) {
    nlohmann::json j;
    j["metric"] = r.metric;
    j["value"] = nullable(r.value);
    j["std_error"] = r.std_error ? nullable(*r.std_error) : nlohmann::json(nullptr);
    j["n_samples"] = r.n_samples ? nlohmann::json(*r.n_samples) : nlohmann::json(nullptr);
    j["wall_time_s"] = r.wall_time_s;
    j["degenerate"] = r.degenerate;
    j["converged"] = r.converged;
    j["timed_out"] = r.timed_out;
    j["seed"] = r.seed;
    j["log_base"] = "e";
    std::cout << j.dump() << '\n';
}

std::string tsv_field(double x) {
    if (!std::isfinite(x)) {
        return "";
    }
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

void print_tsv(const Report& r) {
    std::cout << "metric\tvalue\tstd_error\tn_samples\twall_time_s\tdegenerate\tconverged\ttimed_out\tseed\tlog_base\n";
    std::cout << r.metric << '\t' << tsv_field(r.value) << '\t' << (r.std_error ? tsv_field(*r.std_error) : "")
              << '\t' << (r.n_samples ? std::to_string(*r.n_samples) : "") << '\t' << tsv_field(r.wall_time_s)
              << '\t' << (r.degenerate ? "true" : "false") << '\t' << (r.converged ? "true" : "false") << '\t'
              << (r.timed_out ? "true" : "false") << '\t' << r.seed << "\te\n";
}

struct CompareArgs {
    std::string file_a;
    std::string file_b;
    std::string metric = "fast-ami";
    std::optional<double> precision;
    std::optional<std::uint64_t> seed;
    std::string norm = "arithmetic";
    std::string format = "json";
    std::optional<double> timeout;
};

int run_compare(const CompareArgs& args) {
    const Normalizer norm = parse_normalizer(args.norm);
    const auto tokens_a = read_tokens(args.file_a);
    const auto tokens_b = read_tokens(args.file_b);
    if (tokens_a.size() != tokens_b.size()) {
        throw InputError("label files differ in length: " + std::to_string(tokens_a.size()) + " vs " +
                         std::to_string(tokens_b.size()));
    }
    const Clustering u = Clustering::from_tokens(tokens_a);
    const Clustering v = Clustering::from_tokens(tokens_b);

    Report r;
    r.metric = args.metric;
    r.seed = resolve_seed(args.seed).value;
    EstimatorConfig cfg;
    cfg.seed = Seed{r.seed};
    cfg.precision = args.precision.value_or(args.metric == "fast-smi" ? 0.1 : 0.01);
    cfg.time_limit_s = args.timeout;
    const Deadline deadline = args.timeout ? deadline_after(*args.timeout) : Deadline{};

    const auto from_estimate = [&](const Estimate& e) {
        r.value = e.value;
        r.std_error = e.std_error;
        r.n_samples = e.n_samples;
        r.degenerate = e.degenerate;
        r.converged = e.converged;
        r.timed_out = e.timed_out;
    };
    const auto from_adjusted = [&](const Adjusted& a) {
        r.value = a.value;
        r.degenerate = a.degenerate;
    };

    const auto start = std::chrono::steady_clock::now();
    if (args.metric == "mi") {
        r.value = mutual_information(u, v);
    } else if (args.metric == "emi") {
        r.value = emi_exact(u.marginals(), v.marginals(), deadline);
    } else if (args.metric == "exact-ami") {
        from_adjusted(exact_ami(u, v, norm, deadline));
    } else if (args.metric == "pairwise-ami") {
        if (u.n_points() < 2) {
            throw InputError("pairwise-ami needs at least two points");
        }
        from_adjusted(pairwise_ami(u, v, norm));
    } else if (args.metric == "fast-ami") {
        if (u.n_points() < 2) {
            throw InputError("fast-ami needs at least two points");
        }
        from_estimate(fast_ami(u, v, cfg, norm));
    } else if (args.metric == "fast-smi") {
        if (u.n_points() < 2) {
            throw InputError("fast-smi needs at least two points");
        }
        from_estimate(fast_smi_direct(u, v, cfg));
    } else {
        throw InputError("unknown metric: " + args.metric);
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (args.format == "tsv") {
        print_tsv(r);
    } else {
        print_json(r);
    }
    if (r.degenerate) {
        std::cerr << "degenerate comparison: " << args.metric << " is undefined or fixed by convention\n";
        return kExitDegenerate;
    }
    return kExitOk;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<Count> parse_counts(const std::string& text, const char* what) {
    std::vector<Count> out;
    for (const std::string& item : split_list(text)) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v < 1) {
            throw InputError(std::string("invalid ") + what + ": " + item);
        }
        out.push_back(static_cast<Count>(v));
    }
    if (out.empty()) {
        throw InputError(std::string("no values given for ") + what);
    }
    return out;
}

struct BenchArgs {
    std::string n = "500,1000,5000";
    std::string r = "10,100,500";
    std::size_t pairs = 20;
    std::string methods = "exact,pairwise,fast";
    double precision = 0.01;
    std::uint64_t min_samples = 10'000;
    std::optional<std::uint64_t> seed;
    double timeout = 60.0;
    std::string out;
    bool no_timing = false;
};

int run_bench(const BenchArgs& args) {
    BenchSpec spec;
    spec.n_values = parse_counts(args.n, "--n");
    spec.r_values = parse_counts(args.r, "--r");
    spec.pairs = args.pairs;
    for (const std::string& m : split_list(args.methods)) {
        try {
            spec.methods.push_back(parse_bench_method(m));
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    spec.precision = args.precision;
    spec.min_samples = args.min_samples;
    spec.seed = resolve_seed(args.seed);
    spec.timeout_s = args.timeout;
    spec.record_timing = !args.no_timing;
    if (!(spec.precision > 0.0) || spec.min_samples < 2 || !(spec.timeout_s >= 0.0)) {
        throw InputError("invalid --precision, --min-samples or --timeout");
    }

    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw InputError("cannot write " + args.out);
        }
    }
    const auto rows = run_synthetic_benchmark(spec);
    std::ostream& out = args.out.empty() ? std::cout : file;
    write_bench_csv(out, rows);
    out.flush();
    if (!out) {
        throw InputError("write failed: " + (args.out.empty() ? std::string("stdout") : args.out));
    }
    return kExitOk;
}

struct SampleArgs {
    std::string kind;
    std::optional<Count> n;
    std::optional<Count> parts;
    std::size_t count = 1;
    std::optional<std::uint64_t> seed;
    bool flaw_prob = false;
    std::optional<Count> c;
};

int run_sample(const SampleArgs& args) {
    if (args.flaw_prob) {
        if (!args.n || !args.c || *args.n < 1 || *args.c < 1) {
            throw InputError("--flaw-prob needs --n >= 1 and --c >= 1");
        }
        std::cout.precision(17);
        std::cout << empty_cluster_probability(*args.n, *args.c) << '\n';
        return kExitOk;
    }
    if (args.kind != "partition" && args.kind != "clustering") {
        throw InputError("sample kind must be partition or clustering");
    }
    if (!args.n || !args.parts) {
        throw InputError("--n and --parts are required");
    }
    if (*args.n < 1 || *args.parts < 1 || *args.parts > *args.n) {
        throw InputError("need 1 <= --parts <= --n");
    }
    Rng rng(resolve_seed(args.seed));
    std::ostringstream out;
    for (std::size_t k = 0; k < args.count; ++k) {
        const Marginals m = random_marginals(*args.n, *args.parts, rng);
        if (args.kind == "partition") {
            for (std::size_t i = 0; i < m.n_clusters(); ++i) {
                out << (i ? " " : "") << m[i];
            }
        } else {
            const Clustering u = clustering_from_marginals(m, rng);
            for (std::size_t i = 0; i < u.labels().size(); ++i) {
                out << (i ? " " : "") << u.labels()[i];
            }
        }
        out << '\n';
    }
    std::cout << out.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-theoretic clustering comparison with exact and Monte Carlo chance adjustment"};
    app.require_subcommand(1);

    CompareArgs compare;
    auto* cmd_compare = app.add_subcommand("compare", "Compare two label files (one label per line)");
    cmd_compare->add_option("file_a", compare.file_a, "First label file")->required();
    cmd_compare->add_option("file_b", compare.file_b, "Second label file")->required();
    cmd_compare->add_option("--metric", compare.metric, "Metric")
        ->check(CLI::IsMember({"mi", "emi", "exact-ami", "pairwise-ami", "fast-ami", "fast-smi"}))
        ->capture_default_str();
    cmd_compare->add_option("--precision", compare.precision,
                            "Target precision (default 0.01, or 0.1 for fast-smi)")
        ->check(CLI::PositiveNumber);
    cmd_compare->add_option("--seed", compare.seed, "RNG seed (falls back to FASTAMI_SEED, then 0)");
    cmd_compare->add_option("--norm", compare.norm, "AMI normalizer")
        ->check(CLI::IsMember({"arithmetic", "geometric", "min", "max"}))
        ->capture_default_str();
    cmd_compare->add_option("--format", compare.format, "Report format")
        ->check(CLI::IsMember({"json", "tsv"}))
        ->capture_default_str();
    cmd_compare->add_option("--timeout", compare.timeout, "Time limit in seconds")->check(CLI::NonNegativeNumber);

    BenchArgs bench;
    auto* cmd_bench = app.add_subcommand("bench", "Synthetic EMI benchmark over random marginal pairs, CSV output");
    cmd_bench->add_option("--n", bench.n, "Comma-separated point counts")->capture_default_str();
    cmd_bench->add_option("--r", bench.r, "Comma-separated cluster counts (R = C)")->capture_default_str();
    cmd_bench->add_option("--pairs", bench.pairs, "Marginal pairs per grid point")->capture_default_str();
    cmd_bench->add_option("--methods", bench.methods, "Comma-separated subset of exact,pairwise,fast")
        ->capture_default_str();
    cmd_bench->add_option("--precision", bench.precision, "Precision for method fast")->capture_default_str();
    cmd_bench->add_option("--min-samples", bench.min_samples, "Minimum samples for method fast")
        ->capture_default_str();
    cmd_bench->add_option("--seed", bench.seed, "RNG seed (falls back to FASTAMI_SEED, then 0)");
    cmd_bench->add_option("--timeout", bench.timeout, "Per-comparison time limit in seconds")
        ->capture_default_str();
    cmd_bench->add_option("--out", bench.out, "Output CSV path (default stdout)");
    cmd_bench->add_flag("--no-timing", bench.no_timing, "Leave wall time and memory blank for byte-stable output");

    SampleArgs sample;
    auto* cmd_sample = app.add_subcommand("sample", "Sample random partitions or clusterings");
    cmd_sample->add_option("kind", sample.kind, "partition or clustering")
        ->check(CLI::IsMember({"partition", "clustering"}));
    cmd_sample->add_option("--n", sample.n, "Number of points");
    cmd_sample->add_option("--parts", sample.parts, "Number of clusters");
    cmd_sample->add_option("--count", sample.count, "How many to emit")->capture_default_str();
    cmd_sample->add_option("--seed", sample.seed, "RNG seed (falls back to FASTAMI_SEED, then 0)");
    cmd_sample->add_flag("--flaw-prob", sample.flaw_prob,
                         "Print P(some cluster empty) for uniform assignment of --n points to --c clusters");
    cmd_sample->add_option("--c", sample.c, "Cluster count for --flaw-prob");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (cmd_compare->parsed()) return run_compare(compare);
        if (cmd_bench->parsed()) return run_bench(bench);
        if (cmd_sample->parsed()) return run_sample(sample);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const TimeLimitExceeded&) {
        std::cerr << "error: time limit exceeded\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
