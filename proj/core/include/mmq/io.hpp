#ifndef MMQ_IO_HPP
#define MMQ_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <mmq/model.hpp>

namespace mmq::io {

/// Model file contents: decimal strings, f indexed 0..n and g indexed 1..m.
///
/// On disk this is a JSON object, e.g.
///   {"name": "table1", "f": ["0.8", "0.1", "0.05", "0.05"], "g": ["0.4", "0.4", "0.2"]}
/// JSON numbers are accepted too and read through their shortest decimal form.
struct ModelFile {
    std::optional<std::string> name;
    std::vector<std::string> f;
    std::vector<std::string> g;

    ExactModelSpec to_exact() const;
    ModelSpec to_float() const;
};

/// Throws ParseError with line/column context.
ModelFile parse_model_file(std::string_view text);
/// Throws IoError when the file cannot be read.
ModelFile load_model_file(const std::filesystem::path& path);
std::string to_json(const ModelFile& model);

/// Comma-separated table with a header row and a trailing "# key=value" metadata block.
/// Fields must not contain commas, quotes or line breaks.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    std::optional<std::string> meta(std::string_view key) const;
};

std::string write_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);

} // namespace mmq::io

#endif // MMQ_IO_HPP
