#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "qcsp/instance.hpp"

namespace qcsp {

// Instance document format (UTF-8 JSON): top-level fields `calculus`,
// `variables` (list of strings) and `constraints` (list). Each constraint
// is either {scope, relations} (disjunction sugar) or {scope, dnf} where
// dnf is a list of terms and each term a list of atoms {rel, args} with an
// optional `neg: true` removed by load-time normalization. See
// docs/format.md for annotated examples.
//
// Parsing validates strictly and throws ParseError with a positioned
// message (byte offset for syntax errors, a document path for semantic
// ones).
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

// Round-trip identity up to key order; negations are already gone after
// parsing, so serialization emits normalized documents.
std::string serialize_instance(const Instance& inst);

}  // namespace qcsp
