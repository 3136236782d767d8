#include "sheafbar/text_io.hpp"

#include <fstream>
#include <sstream>

#include "sheafbar/errors.hpp"

namespace sheafbar {
namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

long long parse_int(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw ParseError("unknown token '" + tok + "'", line);
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("unknown token '" + tok + "'", line);
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range '" + tok + "'", line);
  }
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Barcode parse_barcode(std::istream& in) {
  std::vector<Bar> bars;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::vector<std::string> tok = split_ws(strip_comment(raw));
    if (tok.empty()) continue;
    if (tok.size() < 3 || tok.size() > 4) {
      throw ParseError("expected '<degree> <lo> <hi> [multiplicity]'", line_no);
    }
    const long long degree = parse_int(tok[0], line_no);
    Endpoint lo, hi;
    try {
      lo = Endpoint::parse(tok[1]);
      hi = Endpoint::parse(tok[2]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!(lo < hi)) throw ParseError("empty interval [" + tok[1] + "," + tok[2] + ")", line_no);
    long long mult = 1;
    if (tok.size() == 4) {
      mult = parse_int(tok[3], line_no);
      if (mult < 1) throw ParseError("multiplicity must be positive", line_no);
    }
    for (long long k = 0; k < mult; ++k) {
      bars.push_back(Bar{static_cast<int>(degree), Interval(lo, hi)});
    }
  }
  return Barcode(std::move(bars));
}

Barcode parse_barcode(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_barcode(in);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Barcode read_barcode(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_barcode(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string emit_barcode(const Barcode& b) {
  std::ostringstream out;
  for (const auto& [bar, count] : b.multiplicities()) {
    out << bar.degree << ' ' << bar.interval.lo().to_string() << ' '
        << bar.interval.hi().to_string();
    if (count > 1) out << ' ' << count;
    out << '\n';
  }
  return out.str();
}

void write_barcode(const std::filesystem::path& path, const Barcode& b) {
  write_text_file(path, emit_barcode(b));
}

MorphismText parse_morphism_text(std::istream& in) {
  MorphismText mt;
  bool have_source = false;
  bool have_target = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (const auto colon = line.find(':'); colon != std::string::npos) {
      const std::string key = trim(line.substr(0, colon));
      const std::string value = trim(line.substr(colon + 1));
      if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);
      if (key == "source") {
        mt.source = value;
        have_source = true;
      } else if (key == "target") {
        mt.target = value;
        have_target = true;
      } else if (key == "shift") {
        try {
          mt.shift = parse_rational(value);
        } catch (const ParseError& e) {
          throw ParseError(e.what(), line_no);
        }
      } else if (key == "field") {
        const long long p = parse_int(value, line_no);
        if (p < 2) throw ParseError("field characteristic must be prime", line_no);
        mt.field = static_cast<Scalar>(p);
      } else {
        throw ParseError("unknown header '" + key + "'", line_no);
      }
      continue;
    }
    const std::vector<std::string> tok = split_ws(line);
    if (tok.size() != 3) throw ParseError("expected '<tgt_index> <src_index> <scalar>'", line_no);
    const long long t = parse_int(tok[0], line_no);
    const long long s = parse_int(tok[1], line_no);
    if (t < 0 || s < 0) throw ParseError("negative bar index", line_no);
    mt.entries.push_back(MatrixEntry{static_cast<std::size_t>(t), static_cast<std::size_t>(s),
                                     parse_int(tok[2], line_no)});
    mt.entry_lines.push_back(line_no);
  }
  if (!have_source) throw ParseError("missing 'source:' header");
  if (!have_target) throw ParseError("missing 'target:' header");
  return mt;
}

Morphism read_morphism(const std::filesystem::path& path, Field field) {
  std::istringstream in(read_text_file(path));
  MorphismText mt;
  try {
    mt = parse_morphism_text(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (mt.field && *mt.field != field.p()) {
    throw ParseError(path.string() + ": file declares GF(" + std::to_string(*mt.field) +
                     ") but GF(" + std::to_string(field.p()) + ") is configured");
  }
  const auto base = path.parent_path();
  const Barcode source = read_barcode(mt.source.is_absolute() ? mt.source : base / mt.source);
  const Barcode target =
      shift(read_barcode(mt.target.is_absolute() ? mt.target : base / mt.target), mt.shift);
  for (std::size_t k = 0; k < mt.entries.size(); ++k) {
    const MatrixEntry& e = mt.entries[k];
    if (e.target >= target.size() || e.source >= source.size()) {
      throw ParseError(path.string() + ": index out of range", mt.entry_lines[k]);
    }
  }
  MakeMorphismResult made = make_morphism(source, target, mt.entries, field);
  if (!made.zeroed.empty()) {
    for (std::size_t k = 0; k < mt.entries.size(); ++k) {
      const Morphism::Key key{mt.entries[k].target, mt.entries[k].source};
      if (key == made.zeroed.front()) {
        throw ParseError(path.string() + ": entry joins bars with no degree-0 Hom",
                         mt.entry_lines[k]);
      }
    }
  }
  return std::move(made.morphism);
}

std::string emit_morphism(const Morphism& m, const std::string& source_name,
                          const std::string& target_name, const Rational& shift_amount) {
  std::ostringstream out;
  out << "source: " << source_name << '\n' << "target: " << target_name << '\n';
  if (shift_amount != 0) out << "shift: " << to_string(shift_amount) << '\n';
  if (m.field().p() != 2) out << "field: " << m.field().p() << '\n';
  for (const auto& [key, value] : m.entries()) {
    out << key.first << ' ' << key.second << ' ' << value << '\n';
  }
  return out.str();
}

}  // namespace sheafbar
