#ifndef OSEBA_TOOLS_CLI_HPP_
#define OSEBA_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace oseba::cli {

enum class ExitCode : int { ok = 0, validation = 1, io = 2 };

// Bad command line. `help` is set when --help was requested, in which case
// what() holds the rendered usage and the exit status is 0.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& msg, bool help) : std::runtime_error(msg), help_(help) {}
    bool help() const noexcept { return help_; }

private:
    bool help_;
};

struct GenOptions {
    std::uint64_t n = 0;
    std::int64_t key_start = 0;
    std::int64_t key_stride = 1;
    std::uint64_t capacity = 10000;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

struct IngestOptions {
    std::string data;
    std::uint64_t capacity = 10000;
};

struct IndexOptions {
    enum class Action { build, show } action = Action::build;
    std::string data;
    std::uint64_t capacity = 10000;
    std::string kind = "table";
    std::optional<std::string> out;
    std::string index;
};

struct QueryOptions {
    std::string index;
    std::optional<std::int64_t> key;
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;
};

struct AnalyzeOptions {
    enum class Op { ma, dist, stats, split, event } op = Op::stats;
    std::string data;
    std::uint64_t capacity = 10000;
    std::optional<std::string> index;
    std::string kind = "table";
    std::string field = "temperature";
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t lo2 = 0;
    std::int64_t hi2 = 0;
    std::uint64_t window = 0;
    bool pointwise = false;
    std::vector<std::string> periods;  // "lo:hi"
    std::string ratios = "0.6,0.2,0.2";
    std::uint64_t seed = 0;
    std::int64_t event = 0;
    std::int64_t before = 0;
    std::int64_t after = 0;
    std::uint64_t bins = 10;
    std::optional<std::string> out;
};

struct BenchOptions {
    std::optional<std::string> data;
    std::optional<std::uint64_t> synthetic_n;
    std::uint64_t seed = 0;
    std::uint64_t capacity = 10000;
    std::string workload = "default";
    std::string kind = "cias";
    std::string out = "report";
    std::string format = "json";
    bool evict = false;
    std::uint64_t repeat = 1;
};

enum class Verb { gen, ingest, index, query, analyze, bench };

struct Command {
    Verb verb = Verb::gen;
    std::variant<GenOptions, IngestOptions, IndexOptions, QueryOptions, AnalyzeOptions, BenchOptions> options;
};

// argv without the program name. Throws UsageError.
Command parse_args(const std::vector<std::string>& args);

// Runs the command; never throws. Results go to `out`, diagnostics to `err`.
int dispatch(const Command& command, std::ostream& out, std::ostream& err);

// parse_args + dispatch with usage errors mapped onto exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oseba::cli

#endif  // OSEBA_TOOLS_CLI_HPP_
