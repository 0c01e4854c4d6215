#include <mmq/io.hpp>

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mmq::io {

using nlohmann::json;

ExactModelSpec ModelFile::to_exact() const
{
    ExactModelSpec spec;
    for (const auto& s : f) spec.f.push_back(parse_decimal(s));
    for (const auto& s : g) spec.g.push_back(parse_decimal(s));
    return spec;
}

ModelSpec ModelFile::to_float() const
{
    ModelSpec spec;
    for (const auto& s : f) spec.f.push_back(parse_decimal_double(s));
    for (const auto& s : g) spec.g.push_back(parse_decimal_double(s));
    return spec;
}

namespace {

std::vector<std::string> decimal_array(const json& doc, const char* key)
{
    if (!doc.contains(key)) throw Error(ErrorCode::parse_error, std::string("missing array '") + key + "'");
    const json& arr = doc.at(key);
    if (!arr.is_array()) throw Error(ErrorCode::parse_error, std::string("'") + key + "' must be an array");

    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& item = arr[i];
        std::string text;
        if (item.is_string()) {
            text = item.get<std::string>();
        } else if (item.is_number()) {
            text = item.dump();
        } else {
            throw Error(ErrorCode::parse_error,
                        std::string(key) + "[" + std::to_string(i) + "] must be a decimal string or number");
        }
        try {
            parse_decimal(text);
        } catch (const Error&) {
            throw Error(ErrorCode::parse_error,
                        std::string(key) + "[" + std::to_string(i) + "] = '" + text + "' is not a decimal number");
        }
        out.push_back(std::move(text));
    }
    return out;
}

} // namespace

ModelFile parse_model_file(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::parse_error, "model file must be a JSON object");

    ModelFile model;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw Error(ErrorCode::parse_error, "'name' must be a string");
        model.name = doc["name"].get<std::string>();
    }
    model.f = decimal_array(doc, "f");
    model.g = decimal_array(doc, "g");
    return model;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ModelFile load_model_file(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    try {
        return parse_model_file(text);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string to_json(const ModelFile& model)
{
    json doc = json::object();
    if (model.name) doc["name"] = *model.name;
    doc["f"] = model.f;
    doc["g"] = model.g;
    return doc.dump(2) + "\n";
}

std::optional<std::string> CsvTable::meta(std::string_view key) const
{
    for (const auto& [k, v] : metadata)
        if (k == key) return v;
    return std::nullopt;
}

namespace {

void check_field(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") != std::string::npos)
        throw Error(ErrorCode::invalid_argument, "CSV field contains a reserved character: '" + field + "'");
}

void append_row(std::string& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        check_field(fields[i]);
        if (i) out += ',';
        out += fields[i];
    }
    out += '\n';
}

std::vector<std::string> split_row(std::string_view line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

} // namespace

std::string write_csv(const CsvTable& table)
{
    std::string out;
    append_row(out, table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw Error(ErrorCode::invalid_argument, "CSV row width does not match header");
        append_row(out, row);
    }
    for (const auto& [key, value] : table.metadata) {
        if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos ||
            value.find('\n') != std::string::npos)
            throw Error(ErrorCode::invalid_argument, "bad CSV metadata entry '" + key + "'");
        out += "# " + key + "=" + value + "\n";
    }
    return out;
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (line.starts_with("# ")) {
            const std::string_view body = line.substr(2);
            const std::size_t eq = body.find('=');
            if (eq == std::string_view::npos)
                throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": metadata without '='");
            table.metadata.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
        } else if (!have_header) {
            table.header = split_row(line);
            have_header = true;
        } else {
            if (!table.metadata.empty())
                throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": row after metadata");
            auto row = split_row(line);
            if (row.size() != table.header.size())
                throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": expected " +
                                                        std::to_string(table.header.size()) + " fields");
            table.rows.push_back(std::move(row));
        }
    }
    if (!have_header) throw Error(ErrorCode::parse_error, "empty CSV document");
    return table;
}

} // namespace mmq::io
