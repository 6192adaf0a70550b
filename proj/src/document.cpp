#include "imog/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "imog/codec.hpp"
#include "imog/errors.hpp"
#include "imog/model_index.hpp"
#include "imog/validate.hpp"

namespace imog {
namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    // nlohmann reports the 1-based byte position of the offending character.
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min(offset > 0 ? offset - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

Model parse_document(std::string_view text) {
    codec::json value;
    try {
        value = codec::json::parse(text.begin(), text.end());
    } catch (const codec::json::parse_error& e) {
        auto [line, column] = line_column(text, e.byte);
        std::string detail = e.what();
        if (auto pos = detail.find("; "); pos != std::string::npos) detail = detail.substr(pos + 2);
        throw SyntaxError(line, column, detail);
    }
    Model model = codec::decode_model(value);
    ModelIndex index(model);
    for (const auto& id : index.duplicates()) {
        if (!id.empty()) throw DuplicateIdError(id);
    }
    return model;
}

std::string serialize_unchecked(const Model& model) { return codec::encode(model).dump(2) + "\n"; }

std::string serialize_document(const Model& model) {
    require_valid(model);
    return serialize_unchecked(model);
}

Model load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

void save_document(const std::string& path, const Model& model) {
    const auto text = serialize_document(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw std::ios_base::failure("cannot write '" + path + "'");
}

}  // namespace imog
