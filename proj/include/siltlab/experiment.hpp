#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace siltlab {

inline constexpr const char* kVersion = "0.1.0";

using Value = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

// Shortest round-trip decimal text; "inf", "-inf" and "nan" for non-finite.
std::string format_number(double v);
std::string format_value(const Value& v);

// Records share one fixed column list. Missing cells are empty in CSV and
// null in JSON.
class ResultTable {
  public:
    explicit ResultTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t size() const { return rows_.size(); }

    // Starts a new record pre-filled with `base`.
    void add_row(const std::map<std::string, Value>& base = {});
    void set(const std::string& column, Value v);
    const Value& get(std::size_t row, const std::string& column) const;

    void write_csv(std::ostream& os) const;
    void write_jsonl(std::ostream& os) const;

  private:
    std::size_t index(const std::string& column) const;

    std::vector<std::string> columns_;
    std::vector<std::vector<Value>> rows_;
};

struct ParamSpec {
    std::string name;
    std::string fallback;
    std::string help;
};

const std::vector<std::string>& command_names();
// Parameters of a command in echo order, including the shared ones.
const std::vector<ParamSpec>& command_params(const std::string& command);

struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> params;  // explicit settings only
    bool record_timing = false;

    std::string text(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::uint64_t count(const std::string& key) const;
    double real(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
};

// key=value lines; blank lines and '#' comments are skipped.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// Rejects unknown commands and keys.
void validate_config(const ExperimentConfig& cfg);

ResultTable run(const ExperimentConfig& cfg);

}  // namespace siltlab
