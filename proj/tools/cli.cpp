#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oseba/oseba.hpp"

namespace oseba::cli {

namespace {

using nlohmann::json;

void add_capacity(CLI::App* app, std::uint64_t& capacity) {
    app->add_option("--capacity", capacity, "Records per partition")->check(CLI::PositiveNumber);
}

}  // namespace

Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Partition-range indexing for selective bulk analysis", "oseba"};
    app.require_subcommand(1, 1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset as canonical CSV");
    gen_cmd->add_option("--n", gen.n, "Record count")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--key-start", gen.key_start, "First key");
    gen_cmd->add_option("--key-stride", gen.key_stride, "Key increment")->check(CLI::PositiveNumber);
    add_capacity(gen_cmd, gen.capacity);
    gen_cmd->add_option("--seed", gen.seed, "Generator seed");
    gen_cmd->add_option("--out", gen.out, "Output CSV path (default: stdout)");

    IngestOptions ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Load and validate a CSV dataset");
    ingest_cmd->add_option("--data", ingest.data, "Input CSV")->required();
    add_capacity(ingest_cmd, ingest.capacity);

    IndexOptions index;
    auto* index_cmd = app.add_subcommand("index", "Build or inspect a partition index");
    index_cmd->require_subcommand(1, 1);
    auto* build_cmd = index_cmd->add_subcommand("build", "Build an index from a dataset");
    build_cmd->add_option("--data", index.data, "Input CSV")->required();
    add_capacity(build_cmd, index.capacity);
    build_cmd->add_option("--kind", index.kind, "Index kind")->check(CLI::IsMember({"table", "cias"}));
    build_cmd->add_option("--out", index.out, "Index file (default: stdout)");
    auto* show_cmd = index_cmd->add_subcommand("show", "Describe an index file");
    show_cmd->add_option("--index", index.index, "Index file")->required();

    QueryOptions query;
    auto* query_cmd = app.add_subcommand("query", "Resolve a key or key range to partition ordinals");
    query_cmd->add_option("--index", query.index, "Index file")->required();
    auto* key_opt = query_cmd->add_option("--key", query.key, "Point lookup key");
    auto* lo_opt = query_cmd->add_option("--lo", query.lo, "Inclusive range start");
    auto* hi_opt = query_cmd->add_option("--hi", query.hi, "Inclusive range end");
    lo_opt->needs(hi_opt)->excludes(key_opt);
    hi_opt->needs(lo_opt)->excludes(key_opt);

    AnalyzeOptions an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Run a selective analysis over indexed periods");
    analyze_cmd->require_subcommand(1, 1);
    auto common = [&](CLI::App* c) {
        c->add_option("--data", an.data, "Input CSV")->required();
        add_capacity(c, an.capacity);
        c->add_option("--index", an.index, "Index file (default: build one in memory)");
        c->add_option("--kind", an.kind, "Index kind when building in memory")->check(CLI::IsMember({"table", "cias"}));
        c->add_option("--field", an.field, "Measurement field")
            ->check(CLI::IsMember({"temperature", "humidity", "wind_speed", "wind_direction"}));
        c->add_option("--out", an.out, "Write JSON here instead of stdout");
    };
    auto period = [&](CLI::App* c) {
        c->add_option("--lo", an.lo, "Inclusive period start")->required();
        c->add_option("--hi", an.hi, "Inclusive period end")->required();
    };
    auto* ma_cmd = analyze_cmd->add_subcommand("ma", "Trailing moving average");
    common(ma_cmd);
    period(ma_cmd);
    ma_cmd->add_option("--window", an.window, "Window length in records")->required()->check(CLI::PositiveNumber);
    auto* dist_cmd = analyze_cmd->add_subcommand("dist", "Positional distance between two periods");
    common(dist_cmd);
    period(dist_cmd);
    dist_cmd->add_option("--lo2", an.lo2, "Second period start")->required();
    dist_cmd->add_option("--hi2", an.hi2, "Second period end")->required();
    dist_cmd->add_flag("--pointwise", an.pointwise, "Always include per-position differences");
    auto* stats_cmd = analyze_cmd->add_subcommand("stats", "Count, max, mean and standard deviation");
    common(stats_cmd);
    period(stats_cmd);
    auto* split_cmd = analyze_cmd->add_subcommand("split", "Randomly assign periods to training/tests/validation");
    common(split_cmd);
    split_cmd->add_option("--period", an.periods, "Period as lo:hi (repeatable)")->required();
    split_cmd->add_option("--ratios", an.ratios, "train,test,validation fractions");
    split_cmd->add_option("--seed", an.seed, "Shuffle seed");
    auto* event_cmd = analyze_cmd->add_subcommand("event", "Compare value distributions before and after a key");
    common(event_cmd);
    event_cmd->add_option("--event", an.event, "Event key")->required();
    event_cmd->add_option("--before", an.before, "Key span before the event")->required()->check(CLI::PositiveNumber);
    event_cmd->add_option("--after", an.after, "Key span from the event on")->required()->check(CLI::PositiveNumber);
    event_cmd->add_option("--bins", an.bins, "Histogram bins")->check(CLI::PositiveNumber);

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run the workload in baseline and oseba modes and compare");
    auto* data_opt = bench_cmd->add_option("--data", bench.data, "Input CSV");
    auto* synth_opt =
        bench_cmd->add_option("--synthetic", bench.synthetic_n, "Generate this many records instead of --data")
            ->check(CLI::PositiveNumber);
    data_opt->excludes(synth_opt);
    bench_cmd->add_option("--seed", bench.seed, "Seed for --synthetic");
    add_capacity(bench_cmd, bench.capacity);
    bench_cmd->add_option("--workload", bench.workload, "'default' or a workload JSON file");
    bench_cmd->add_option("--kind", bench.kind, "Index kind for oseba mode")->check(CLI::IsMember({"table", "cias"}));
    bench_cmd->add_option("--out", bench.out, "Report directory");
    bench_cmd->add_option("--format", bench.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    bench_cmd->add_flag("--evict", bench.evict, "Release baseline materializations after each phase");
    bench_cmd->add_option("--repeat", bench.repeat, "Runs per mode; wall times are medians")
        ->check(CLI::PositiveNumber);

    // Unknown flags are reported before missing required options.
    CLI::App* scope = &app;
    bool value_next = false;
    for (const auto& tok : args) {
        if (tok.rfind("--", 0) == 0) {
            const auto eq = tok.find('=');
            const std::string name = tok.substr(0, eq);
            const auto* opt = scope->get_option_no_throw(name);
            if (name != "--help" && opt == nullptr) {
                throw UsageError("unknown option " + name + " for '" + scope->get_display_name() + "'", false);
            }
            value_next = opt != nullptr && opt->get_expected_min() > 0 && eq == std::string::npos;
        } else if (value_next) {
            value_next = false;
        } else if (auto* sub = scope->get_subcommand_no_throw(tok)) {
            scope = sub;
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), true);
    } catch (const CLI::CallForAllHelp&) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), true);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what(), false);
    }

    Command cmd;
    if (*gen_cmd) {
        cmd.verb = Verb::gen;
        cmd.options = gen;
    } else if (*ingest_cmd) {
        cmd.verb = Verb::ingest;
        cmd.options = ingest;
    } else if (*index_cmd) {
        cmd.verb = Verb::index;
        index.action = *build_cmd ? IndexOptions::Action::build : IndexOptions::Action::show;
        cmd.options = index;
    } else if (*query_cmd) {
        if (!query.key && !query.lo) throw UsageError("query needs either --key or --lo/--hi", false);
        cmd.verb = Verb::query;
        cmd.options = query;
    } else if (*analyze_cmd) {
        cmd.verb = Verb::analyze;
        if (*ma_cmd) an.op = AnalyzeOptions::Op::ma;
        else if (*dist_cmd) an.op = AnalyzeOptions::Op::dist;
        else if (*stats_cmd) an.op = AnalyzeOptions::Op::stats;
        else if (*split_cmd) an.op = AnalyzeOptions::Op::split;
        else an.op = AnalyzeOptions::Op::event;
        cmd.options = an;
    } else {
        if (!bench.data && !bench.synthetic_n) throw UsageError("bench needs --data or --synthetic", false);
        cmd.verb = Verb::bench;
        cmd.options = bench;
    }
    return cmd;
}

namespace {

unsigned scan_threads() {
    const char* env = std::getenv("OSEBA_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw ValidationError("OSEBA_THREADS must be a non-negative integer");
    return v == 0 ? 1u : static_cast<unsigned>(v);
}

IndexKind kind_of(const std::string& s) {
    if (auto k = parse_index_kind(s)) return *k;
    throw ValidationError("unknown index kind '" + s + "'");
}

void emit(const json& j, const std::optional<std::string>& out_path, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (out_path) {
        csv::write_file(*out_path, text);
    } else {
        out << text;
    }
}

KeyRange parse_period(const std::string& s) {
    const auto colon = s.find(':', 1);
    if (colon == std::string::npos) throw ValidationError("period '" + s + "' is not of the form lo:hi");
    try {
        std::size_t p1 = 0;
        std::size_t p2 = 0;
        const std::string a = s.substr(0, colon);
        const std::string b = s.substr(colon + 1);
        const Key lo = std::stoll(a, &p1);
        const Key hi = std::stoll(b, &p2);
        if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing characters");
        require_valid_range(lo, hi);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw ValidationError("period '" + s + "' is not of the form lo:hi");
    }
}

SplitRatios parse_ratios(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::logic_error&) {
            throw ValidationError("ratio '" + tok + "' is not a number");
        }
    }
    if (v.size() != 3) throw ValidationError("--ratios needs exactly three comma-separated fractions");
    return {v[0], v[1], v[2]};
}

json interval_json(const std::optional<OrdinalInterval>& iv) {
    if (!iv) return {{"found", false}, {"overlap", 0}};
    return {{"found", true}, {"first", iv->first}, {"last", iv->last}, {"overlap", iv->size()}};
}

json index_summary(const RangeIndex& index) {
    json j = {{"kind", std::string(index_kind_name(index_kind(index)))},
              {"partitions", index_partition_count(index)},
              {"key_lo", index_key_lo(index)},
              {"key_hi", index_key_hi(index)},
              {"accounted_bytes", index_accounted_bytes(index)}};
    if (const auto* c = std::get_if<Cias>(&index)) j["runs"] = c->runs().size();
    return j;
}

int do_gen(const GenOptions& o, std::ostream& out) {
    const auto ds = generate_synthetic(o.n, o.key_start, o.key_stride, o.capacity, o.seed);
    if (!o.out) {
        csv::export_csv(ds, out);
        return 0;
    }
    csv::export_csv(ds, std::filesystem::path(*o.out));
    out << json{{"records", ds.record_count()}, {"partitions", ds.partition_count()}, {"out", *o.out}}.dump(2) << "\n";
    return 0;
}

int do_ingest(const IngestOptions& o, std::ostream& out) {
    const auto ds = csv::ingest_csv(o.data, o.capacity);
    json sizes = json::array();
    for (const auto& p : ds.partitions()) sizes.push_back(p.size());
    out << json{{"records", ds.record_count()},
                {"partitions", ds.partition_count()},
                {"capacity", ds.capacity()},
                {"key_lo", ds.key_lo()},
                {"key_hi", ds.key_hi()},
                {"accounted_bytes", ds.accounted_bytes()},
                {"partition_sizes", sizes}}
               .dump(2)
        << "\n";
    return 0;
}

int do_index(const IndexOptions& o, std::ostream& out) {
    if (o.action == IndexOptions::Action::show) {
        const auto index = load_index(o.index);
        json j = index_summary(index);
        j["index"] = index_to_json(index);
        out << j.dump(2) << "\n";
        return 0;
    }
    const auto ds = csv::ingest_csv(o.data, o.capacity);
    const auto index = build_index(ds, kind_of(o.kind));
    if (!o.out) {
        out << serialize_index(index);
        return 0;
    }
    save_index(index, *o.out);
    json j = index_summary(index);
    j["out"] = *o.out;
    out << j.dump(2) << "\n";
    return 0;
}

int do_query(const QueryOptions& o, std::ostream& out) {
    const auto index = load_index(o.index);
    if (o.key) {
        const auto hit = lookup(index, *o.key);
        out << (hit ? json{{"found", true}, {"ordinal", *hit}} : json{{"found", false}}).dump(2) << "\n";
        return 0;
    }
    out << interval_json(lookup_range(index, *o.lo, *o.hi)).dump(2) << "\n";
    return 0;
}

int do_analyze(const AnalyzeOptions& o, std::ostream& out) {
    const auto ds = csv::ingest_csv(o.data, o.capacity);
    const RangeIndex index = o.index ? load_index(*o.index) : build_index(ds, kind_of(o.kind));
    require_index_matches(ds, index);
    const Field field = field_from_name(o.field);
    using Op = AnalyzeOptions::Op;
    json result;
    switch (o.op) {
        case Op::stats: {
            const auto sel = select_period(ds, index, o.lo, o.hi);
            ScanStats scanned;
            result = to_json(descriptive_stats(sel, field, &scanned, ScanOptions{scan_threads()}));
            break;
        }
        case Op::ma: {
            const auto sel = select_period(ds, index, o.lo, o.hi);
            result = {{"window", o.window}, {"field", o.field}, {"points", to_json(moving_average(sel, o.window, field))}};
            break;
        }
        case Op::dist: {
            const auto a = select_period(ds, index, o.lo, o.hi);
            const auto b = select_period(ds, index, o.lo2, o.hi2);
            result = to_json(distance_comparison(a, b, field), o.pointwise);
            break;
        }
        case Op::split: {
            std::vector<KeyRange> periods;
            for (const auto& p : o.periods) periods.push_back(parse_period(p));
            const auto split = split_tvt(ds, index, periods, parse_ratios(o.ratios), o.seed);
            result = to_json(split.assignment);
            auto intervals = [](const std::vector<Selection>& sels) {
                json a = json::array();
                for (const auto& s : sels) a.push_back(interval_json(s.partitions));
                return a;
            };
            result["partitions"] = {{"training", intervals(split.training)},
                                    {"tests", intervals(split.tests)},
                                    {"validation", intervals(split.validation)}};
            break;
        }
        case Op::event:
            result = to_json(event_analysis(ds, index, o.event, o.before, o.after, field, o.bins));
            break;
    }
    emit(result, o.out, out);
    return 0;
}

int do_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
    const auto ds = o.data ? csv::ingest_csv(*o.data, o.capacity)
                           : generate_synthetic(*o.synthetic_n, 0, 1, o.capacity, o.seed);
    const auto workload = o.workload == "default" ? bench::default_workload(ds) : bench::load_workload(o.workload);
    bench::RunOptions opts;
    opts.evict = o.evict;
    opts.scan.threads = scan_threads();
    const auto base = bench::run_workload_median(ds, workload, bench::Mode::baseline, std::nullopt, o.repeat, opts);
    const auto fast = bench::run_workload_median(ds, workload, bench::Mode::oseba, kind_of(o.kind), o.repeat, opts);
    const auto cmp = bench::compare_runs(base, fast);

    const std::filesystem::path dir(o.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create report directory '" + dir.string() + "': " + ec.message());
    const auto format = o.format == "csv" ? bench::ReportFormat::csv : bench::ReportFormat::json;
    bench::emit_report(base, format, dir / ("baseline." + o.format));
    bench::emit_report(fast, format, dir / ("oseba." + o.format));
    const std::string cmp_text = bench::to_json(cmp).dump(2) + "\n";
    csv::write_file(dir / "comparison.json", cmp_text);
    out << cmp_text;
    if (!cmp.all_stats_match) {
        err << "error: baseline and oseba statistics disagree; see " << (dir / "comparison.json").string() << "\n";
        return static_cast<int>(ExitCode::validation);
    }
    return 0;
}

}  // namespace

int dispatch(const Command& command, std::ostream& out, std::ostream& err) {
    try {
        switch (command.verb) {
            case Verb::gen: return do_gen(std::get<GenOptions>(command.options), out);
            case Verb::ingest: return do_ingest(std::get<IngestOptions>(command.options), out);
            case Verb::index: return do_index(std::get<IndexOptions>(command.options), out);
            case Verb::query: return do_query(std::get<QueryOptions>(command.options), out);
            case Verb::analyze: return do_analyze(std::get<AnalyzeOptions>(command.options), out);
            case Verb::bench: return do_bench(std::get<BenchOptions>(command.options), out, err);
        }
        err << "error: unhandled command\n";
        return static_cast<int>(ExitCode::validation);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::io);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::validation);
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Command cmd;
    try {
        cmd = parse_args(args);
    } catch (const UsageError& e) {
        if (e.help()) {
            out << e.what();
            return 0;
        }
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return static_cast<int>(ExitCode::validation);
    }
    return dispatch(cmd, out, err);
}

}  // namespace oseba::cli
