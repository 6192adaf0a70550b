#ifndef IMOG_DOCUMENT_HPP
#define IMOG_DOCUMENT_HPP

#include <string>
#include <string_view>

#include "imog/model.hpp"

namespace imog {

/// Parses one `.imog.json` document. Semantic invariants are left to
/// validate_model.
///
/// Throws SyntaxError, SchemaError or DuplicateIdError.
Model parse_document(std::string_view text);

/// Canonical text: sorted keys, 2-space indent, trailing newline.
/// Throws InvalidModelError when the model has validation errors.
std::string serialize_document(const Model& model);

/// Same encoding without the validity precondition.
std::string serialize_unchecked(const Model& model);

Model load_document(const std::string& path);
void save_document(const std::string& path, const Model& model);

}  // namespace imog

#endif  // IMOG_DOCUMENT_HPP
