#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sheafbar/barcode.hpp"
#include "sheafbar/morphism.hpp"

namespace sheafbar {

// Barcode text: one bar per line, "<degree> <lo> <hi> [multiplicity]".
// '#' starts a comment. Errors carry the 1-based line number.
Barcode parse_barcode(std::istream& in);
Barcode parse_barcode(std::string_view text);
Barcode read_barcode(const std::filesystem::path& path);
// Canonical form: sorted, equal bars folded into a multiplicity column.
std::string emit_barcode(const Barcode& b);
void write_barcode(const std::filesystem::path& path, const Barcode& b);

// Morphism text: "source: FILE", "target: FILE", optional "shift: c" (applied
// to the target barcode) and "field: p", then "<tgt_index> <src_index> <scalar>".
struct MorphismText {
  std::filesystem::path source;
  std::filesystem::path target;
  Rational shift{0};
  std::optional<Scalar> field;
  std::vector<MatrixEntry> entries;
  std::vector<std::size_t> entry_lines;
};

MorphismText parse_morphism_text(std::istream& in);
// Relative barcode paths resolve against the morphism file's directory.
// An entry whose generator vanishes is a ParseError on its line.
Morphism read_morphism(const std::filesystem::path& path, Field field = Field());
std::string emit_morphism(const Morphism& m, const std::string& source_name,
                          const std::string& target_name, const Rational& shift);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sheafbar
