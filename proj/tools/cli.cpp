#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>

#include "sheafbar/canonical_form.hpp"
#include "sheafbar/cone_geometry.hpp"
#include "sheafbar/errors.hpp"
#include "sheafbar/interleaving.hpp"
#include "sheafbar/limits.hpp"
#include "sheafbar/spectral.hpp"
#include "sheafbar/text_io.hpp"

namespace sheafbar::cli {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view text, std::size_t line) {
  std::istringstream in{std::string(text)};
  T value{};
  std::string rest;
  if (!(in >> value) || (in >> rest)) throw ParseError("not a number: '" + std::string(text) + "'", line);
  return value;
}

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

// key=value records in machine mode, free text in human mode.
class Printer {
 public:
  using Record = std::vector<std::pair<std::string, std::string>>;

  Printer(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  bool machine() const { return format_ == OutputFormat::Machine; }

  void record(const Record& fields, const std::string& human) {
    if (machine()) {
      for (std::size_t k = 0; k < fields.size(); ++k) {
        out_ << (k ? " " : "") << fields[k].first << '=' << fields[k].second;
      }
      out_ << '\n';
    } else {
      out_ << human;
      if (!human.empty() && human.back() != '\n') out_ << '\n';
    }
  }

  void human(const std::string& text) {
    if (!machine()) out_ << text;
  }

 private:
  std::ostream& out_;
  OutputFormat format_;
};

void print_barcode(Printer& printer, const std::string& record_name, const Barcode& b) {
  if (printer.machine()) {
    for (const Bar& bar : b) {
      printer.record({{"record", record_name},
                      {"degree", std::to_string(bar.degree)},
                      {"lo", bar.interval.lo().to_string()},
                      {"hi", bar.interval.hi().to_string()}},
                     "");
    }
  } else {
    printer.human(emit_barcode(b));
  }
}

fs::path resolve_barcode_path(const std::string& name) {
  const fs::path p(name);
  if (!fs::exists(p)) {
    fs::path with_ext = p;
    with_ext += ".bc";
    if (fs::exists(with_ext)) return with_ext;
  }
  return p;
}

InterleavingOptions interleaving_options(const Config& config) {
  InterleavingOptions opts;
  opts.field = Field(config.field);
  opts.budget = config.budget;
  return opts;
}

ConeParams cone_params(const Config& config) {
  ConeParams params;
  params.resolution_deg = config.resolution_deg;
  params.singular_value_threshold = config.singular_value_threshold;
  params.sphere_step_deg = config.sphere_step_deg;
  return params;
}

std::string entries_text(const char* tag, const Morphism& m) {
  std::string out;
  for (const auto& [key, value] : m.entries()) {
    out += std::string(tag) + ": " + std::to_string(key.first) + " " + std::to_string(key.second) + " " +
           std::to_string(value) + "\n";
  }
  return out;
}

// Writes the certificate, reads it back and re-verifies it.
void write_verified_certificate(const fs::path& path, const CertificateFile& file, const Barcode& f,
                                const Barcode& g, Field field) {
  write_text_file(path, emit_certificate(file));
  const CertificateFile reread = read_certificate(path, field);
  if (!verify_certificate_file(reread, f, g)) {
    throw std::logic_error("certificate written to " + path.string() + " failed re-verification");
  }
}

fs::path default_certificate_path(const fs::path& f, const fs::path& g) {
  return fs::path(f.stem().string() + "__" + g.stem().string() + ".cert");
}

// ---- dist gamma ----------------------------------------------------------

struct DistGammaArgs {
  std::string f, g, cert;
  bool symmetric = false;
};

int cmd_dist_gamma(const Config& config, const DistGammaArgs& args, Printer& printer) {
  const fs::path fp = resolve_barcode_path(args.f);
  const fs::path gp = resolve_barcode_path(args.g);
  const Barcode f = read_barcode(fp);
  const Barcode g = read_barcode(gp);
  const auto opts = interleaving_options(config);
  const DistanceReport report = args.symmetric ? gamma_symmetric(f, g, opts) : gamma(f, g, opts);

  CertificateFile file{fp, gp, {}};
  if (report.certificate) {
    file.blocks.push_back({std::nullopt, *report.certificate});
  } else if (report.value.is_finite()) {
    for (const auto& part : report.per_degree) {
      if (part.certificate) file.blocks.push_back({part.degree, *part.certificate});
    }
  }
  std::string cert_field = "none";
  if (!file.blocks.empty()) {
    const fs::path cert_path = args.cert.empty() ? default_certificate_path(fp, gp) : fs::path(args.cert);
    file.f_path = fs::absolute(fp);
    file.g_path = fs::absolute(gp);
    write_verified_certificate(cert_path, file, f, g, opts.field);
    cert_field = cert_path.string();
  }
  const bool exact = report.exactness == Exactness::Exact;
  std::string human = report.value.to_string() + (exact ? " exact" : " bracket");
  if (!exact) human += " [" + report.lower.to_string() + ", " + report.upper.to_string() + "]";
  human += "\n";
  if (cert_field != "none") human += "certificate: " + cert_field + "\n";
  printer.record({{"record", args.symmetric ? "gamma-symmetric" : "gamma"},
                  {"value", report.value.to_string()},
                  {"exactness", std::string(to_string(report.exactness))},
                  {"lower", report.lower.to_string()},
                  {"upper", report.upper.to_string()},
                  {"certificate", cert_field}},
                 human);
  for (const auto& part : report.per_degree) {
    if (printer.machine()) {
      printer.record({{"record", "gamma-degree"},
                      {"degree", std::to_string(part.degree)},
                      {"value", part.value.to_string()},
                      {"exactness", std::string(to_string(part.exactness))},
                      {"lower", part.lower.to_string()}},
                     "");
    }
  }
  return kExitOk;
}

// ---- dist check ----------------------------------------------------------

struct DistCheckArgs {
  std::string f, g, a, b, cert;
};

int cmd_dist_check(const Config& config, const DistCheckArgs& args, Printer& printer) {
  const fs::path fp = resolve_barcode_path(args.f);
  const fs::path gp = resolve_barcode_path(args.g);
  const Barcode f = read_barcode(fp);
  const Barcode g = read_barcode(gp);
  const Rational a = parse_rational(args.a);
  const Rational b = parse_rational(args.b);
  const auto opts = interleaving_options(config);
  const InterleavingResult result = check_interleaving(f, g, a, b, opts);
  std::string cert_field = "none";
  if (result.certificate) {
    const fs::path cert_path = args.cert.empty() ? default_certificate_path(fp, gp) : fs::path(args.cert);
    CertificateFile file{fs::absolute(fp), fs::absolute(gp), {{std::nullopt, *result.certificate}}};
    write_verified_certificate(cert_path, file, f, g, opts.field);
    cert_field = cert_path.string();
  }
  std::string human = std::string(to_string(result.status));
  if (!result.reason.empty()) human += ": " + result.reason;
  human += "\n";
  if (cert_field != "none") human += "certificate: " + cert_field + "\n";
  std::string reason = result.reason;
  std::replace(reason.begin(), reason.end(), ' ', '_');
  printer.record({{"record", "check"},
                  {"a", to_string(a)},
                  {"b", to_string(b)},
                  {"status", std::string(to_string(result.status))},
                  {"assignments", std::to_string(result.assignments)},
                  {"certificate", cert_field},
                  {"reason", reason.empty() ? "-" : reason}},
                 human);
  return kExitOk;
}

// ---- spectral / sublevel -------------------------------------------------

struct SpectralArgs {
  std::string file, convention = "left-infinite";
  int dim = 1;
};

int cmd_spectral(const SpectralArgs& args, Printer& printer) {
  EssentialConvention conv;
  if (args.convention == "left-infinite") {
    conv = EssentialConvention::LeftInfinite;
  } else if (args.convention == "sublevel") {
    conv = EssentialConvention::Sublevel;
  } else {
    throw ParseError("unknown convention '" + args.convention + "' (left-infinite or sublevel)");
  }
  const Barcode b = read_barcode(resolve_barcode_path(args.file));
  const SpectralReport report = spectral_invariants(b, conv, args.dim);
  printer.record({{"record", "spectral"},
                  {"convention", std::string(to_string(conv))},
                  {"c_minus", to_string(report.c_minus)},
                  {"c_plus", to_string(report.c_plus)},
                  {"gamma", to_string(report.gamma)},
                  {"exactness", std::string(to_string(Exactness::Exact))}},
                 "c- = " + to_string(report.c_minus) + "\nc+ = " + to_string(report.c_plus) +
                     "\ngamma = " + to_string(report.gamma) + "\n");
  return kExitOk;
}

int cmd_sublevel(const std::string& file, Printer& printer) {
  const PLFunction f = read_pl_function(file);
  const Barcode b = sublevel_barcode(f);
  print_barcode(printer, "bar", b);
  return kExitOk;
}

// ---- limit / complete ----------------------------------------------------

struct LimitArgs {
  std::string dir;
  std::optional<std::size_t> defect;
  bool exact = false;
};

int cmd_limit(const Config& config, const LimitArgs& args, Printer& printer) {
  const InductiveSystem system = load_system(args.dir, Field(config.field));
  if (args.defect) {
    const DefectReport report = defect_check(system, *args.defect);
    printer.record({{"record", "defect"},
                    {"index", std::to_string(*args.defect)},
                    {"lhs", report.lhs.to_string()},
                    {"rhs", report.rhs.to_string()},
                    {"holds", report.holds ? "true" : "false"}},
                   "defect at " + std::to_string(*args.defect) + ": " + report.lhs.to_string() +
                       (report.holds ? " <= " : " > ") + report.rhs.to_string() + "\n");
    return report.holds ? kExitOk : kExitDomain;
  }
  const HocolimResult result = hocolim(system, HocolimOptions{args.exact});
  print_barcode(printer, "bar", result.barcode);
  const std::string exactness(to_string(result.exact ? Exactness::Exact : Exactness::Bracket));
  printer.record({{"record", "hocolim"},
                  {"bars", std::to_string(result.barcode.size())},
                  {"exactness", exactness},
                  {"error_bound", result.error_bound.to_string()}},
                 "tail bound: " + result.error_bound.to_string() +
                     (result.exact ? "\nchain endpoints resolved to their limits" : "") + "\n");
  return kExitOk;
}

std::vector<Barcode> read_sequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<Barcode> seq;
  for (std::size_t k = 0;; ++k) {
    const fs::path p = dir / ("F" + std::to_string(k) + ".bc");
    if (!fs::exists(p)) break;
    seq.push_back(read_barcode(p));
  }
  if (seq.empty()) throw IoError("no F0.bc in " + dir.string());
  return seq;
}

int cmd_complete(const Config& config, const std::string& dir, const std::string& tol, Printer& printer) {
  const std::vector<Barcode> seq = read_sequence(dir);
  CompletionOptions opts;
  opts.interleaving = interleaving_options(config);
  const CompletionResult result = complete_cauchy(seq, parse_rational(tol), opts);
  print_barcode(printer, "bar", result.barcode);
  std::string kept;
  for (std::size_t k : result.kept) kept += (kept.empty() ? "" : ",") + std::to_string(k);
  printer.record({{"record", "complete"},
                  {"bars", std::to_string(result.barcode.size())},
                  {"kept", kept},
                  {"exactness", std::string(to_string(result.limit.exact ? Exactness::Exact : Exactness::Bracket))},
                  {"final_gamma", result.final_gamma.to_string()}},
                 "kept stages: " + kept + "\ngamma to last input: " + result.final_gamma.to_string() +
                     (result.limit.exact ? "\nchain endpoints resolved to their limits" : "") + "\n");
  return kExitOk;
}

// ---- cone-test / cantor --------------------------------------------------

Eigen::VectorXd parse_point(const std::string& text) {
  std::vector<double> coords;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) coords.push_back(parse_number<double>(trim(cell), 0));
  if (coords.empty()) throw ParseError("empty point");
  return Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
}

std::string join_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index k = 0; k < v.size(); ++k) out += (k ? "," : "") + format_double(v(k));
  return out;
}

int cmd_cone_test(const Config& config, const std::string& cloud_path, const std::string& point, Printer& printer) {
  const PointCloud cloud = read_cloud_csv(cloud_path);
  const CoisotropyVerdict v = cone_coisotropy_test(cloud, parse_point(point), cone_params(config));
  std::string human = std::string(to_string(v.kind)) + "\nparatingent rank: " + std::to_string(v.span_rank) + "\n";
  std::string witness = "-";
  if (v.witness_normal) {
    witness = join_vector(*v.witness_normal);
    human += "witness normal: (" + witness + "), dual leaves the contingent cone by " +
             format_double(v.witness_angle_deg) + " deg\n";
  }
  printer.record({{"record", "cone-test"},
                  {"verdict", std::string(to_string(v.kind))},
                  {"rank", std::to_string(v.span_rank)},
                  {"normals", std::to_string(v.normals_checked)},
                  {"witness", witness},
                  {"angle_deg", v.witness_normal ? format_double(v.witness_angle_deg) : "-"}},
                 human);
  return kExitOk;
}

struct CantorArgs {
  std::string a;
  int n = 1;
  int k = 1;
  bool emit_cloud = false;
  bool bound_table = false;
};

int cmd_cantor(const CantorArgs& args, Printer& printer, std::ostream& out) {
  const Rational a = parse_rational(args.a);
  if (args.bound_table) {
    for (int level = 1; level <= args.k; ++level) {
      const Rational bound = displacement_bound(a, level, args.n);
      printer.record({{"record", "bound"}, {"k", std::to_string(level)}, {"bound", to_string(bound)}},
                     std::to_string(level) + " " + to_string(bound));
    }
    return kExitOk;
  }
  const CubeFamily family = cantor_cubes(a, args.k, args.n);
  if (args.emit_cloud) {
    out << emit_cloud_csv(cube_corner_cloud(family));
    return kExitOk;
  }
  const std::string edge = family.cubes.empty() ? "0" : to_string(family.cubes.front().edge);
  const std::string bound = to_string(displacement_bound(a, args.k, args.n));
  printer.record({{"record", "cantor"},
                  {"cubes", std::to_string(family.cubes.size())},
                  {"edge", edge},
                  {"bound", bound}},
                 "cubes: " + std::to_string(family.cubes.size()) + "\nedge: " + edge +
                     "\ndisplacement bound: " + bound + "\n");
  return kExitOk;
}

// ---- demo rational-degeneracy -------------------------------------------

int cmd_demo_degeneracy(const Config& config, int denom_max, Printer& printer) {
  if (denom_max < 2) throw DomainError("--denom-max must be at least 2");
  const auto opts = interleaving_options(config);
  bool all_ok = true;
  for (int n = 2; n <= denom_max; ++n) {
    const auto [f, g] = rational_truncations(n);
    const Rational bound(1, n);
    const InterleavingResult result = check_interleaving(f, g, Rational(0), bound, opts);
    const bool certified = result.certificate && verify_certificate(f, g, *result.certificate);
    const bool distinct = !(f == g);
    all_ok = all_ok && certified && distinct;
    printer.record({{"record", "degeneracy"},
                    {"denom_max", std::to_string(n)},
                    {"bars", std::to_string(f.size())},
                    {"distinct", distinct ? "true" : "false"},
                    {"gamma_upper", to_string(bound)},
                    {"certified", certified ? "true" : "false"}},
                   "N=" + std::to_string(n) + ": " + std::to_string(f.size()) + " bars, " +
                       (distinct ? "distinct" : "equal") + " barcodes, gamma <= " + to_string(bound) +
                       (certified ? " (certified)" : " (not certified)"));
  }
  return all_ok ? kExitOk : kExitDomain;
}

// ---- validate ------------------------------------------------------------

int cmd_validate(const Config& config, const std::string& file, Printer& printer) {
  const fs::path p(file);
  const std::string ext = p.extension().string();
  std::string kind;
  std::string detail;
  if (ext == ".mor") {
    const Morphism m = read_morphism(p, Field(config.field));
    kind = "morphism";
    detail = std::to_string(m.entries().size()) + " entries";
  } else if (ext == ".csv") {
    const PointCloud cloud = read_cloud_csv(p);
    if (!(parse_cloud_csv(emit_cloud_csv(cloud)).points() == cloud.points())) {
      throw ParseError("point cloud does not round-trip");
    }
    kind = "cloud";
    detail = std::to_string(cloud.size()) + " points in R^" + std::to_string(cloud.dimension());
  } else if (ext == ".pl") {
    const PLFunction f = read_pl_function(p);
    kind = "pl-function";
    detail = std::to_string(f.breakpoints.size()) + " breakpoints on the " + std::string(to_string(f.domain));
  } else if (ext == ".cert") {
    const CertificateFile cert = read_certificate(p, Field(config.field));
    const Barcode f = read_barcode(cert.f_path);
    const Barcode g = read_barcode(cert.g_path);
    if (!verify_certificate_file(cert, f, g)) throw DomainError("certificate does not verify");
    kind = "certificate";
    detail = std::to_string(cert.blocks.size()) + " verified block(s)";
  } else {
    const Barcode b = read_barcode(p);
    if (!(parse_barcode(emit_barcode(b)) == b)) throw ParseError("barcode does not round-trip");
    kind = "barcode";
    detail = std::to_string(b.size()) + " bars";
  }
  printer.record({{"record", "validate"}, {"kind", kind}, {"file", p.string()}},
                 "valid " + kind + ": " + detail + "\n");
  return kExitOk;
}

}  // namespace

void Config::validate() const {
  if (!is_prime(field)) throw DomainError("field characteristic " + std::to_string(field) + " is not prime");
  if (budget < 1) throw DomainError("budget must be at least 1");
  if (!(resolution_deg > 0) || !(sphere_step_deg > 0) || !(singular_value_threshold > 0)) {
    throw DomainError("geometry tolerances must be positive");
  }
}

Config parse_config(const std::string& text, Config base) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "field") {
      base.field = parse_number<Scalar>(value, line_no);
    } else if (key == "budget") {
      base.budget = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "seed") {
      base.seed = parse_number<std::uint64_t>(value, line_no);
    } else if (key == "resolution-deg") {
      base.resolution_deg = parse_number<double>(value, line_no);
    } else if (key == "sv-threshold") {
      base.singular_value_threshold = parse_number<double>(value, line_no);
    } else if (key == "sphere-step-deg") {
      base.sphere_step_deg = parse_number<double>(value, line_no);
    } else if (key == "format") {
      if (value == "human") {
        base.format = OutputFormat::Human;
      } else if (value == "machine") {
        base.format = OutputFormat::Machine;
      } else {
        throw ParseError("format must be human or machine", line_no);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }
  return base;
}

std::string emit_certificate(const CertificateFile& file) {
  std::ostringstream out;
  out << "# interleaving certificate\n";
  out << "F: " << file.f_path.string() << '\n' << "G: " << file.g_path.string() << '\n';
  Scalar p = 2;
  if (!file.blocks.empty()) p = file.blocks.front().certificate.u.field().p();
  out << "field: " << p << '\n';
  for (const auto& block : file.blocks) {
    out << "degree: " << (block.degree ? std::to_string(*block.degree) : std::string("all")) << '\n';
    out << "a: " << to_string(block.certificate.a) << '\n' << "b: " << to_string(block.certificate.b) << '\n';
    out << entries_text("u", block.certificate.u) << entries_text("v", block.certificate.v);
  }
  return out.str();
}

CertificateFile read_certificate(const fs::path& path, Field field) {
  const std::string text = read_text_file(path);
  struct RawBlock {
    std::optional<int> degree;
    std::optional<Rational> a, b;
    std::vector<MatrixEntry> u, v;
    std::size_t line = 0;
  };
  CertificateFile file;
  std::vector<RawBlock> raw_blocks;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no);
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));
    auto current = [&]() -> RawBlock& {
      if (raw_blocks.empty()) throw ParseError("entry before the first 'degree:' line", line_no);
      return raw_blocks.back();
    };
    try {
      if (key == "F") {
        file.f_path = fs::path(std::string(value));
      } else if (key == "G") {
        file.g_path = fs::path(std::string(value));
      } else if (key == "field") {
        const auto p = parse_number<Scalar>(value, line_no);
        if (p != field.p()) field = Field(p);
      } else if (key == "degree") {
        RawBlock block;
        block.line = line_no;
        if (value != "all") block.degree = parse_number<int>(value, line_no);
        raw_blocks.push_back(std::move(block));
      } else if (key == "a") {
        current().a = parse_rational(value);
      } else if (key == "b") {
        current().b = parse_rational(value);
      } else if (key == "u" || key == "v") {
        std::istringstream fields{std::string(value)};
        MatrixEntry e{};
        std::string extra;
        if (!(fields >> e.target >> e.source >> e.value) || (fields >> extra)) {
          throw ParseError("expected '<target> <source> <scalar>'", line_no);
        }
        (key == "u" ? current().u : current().v).push_back(e);
      } else {
        throw ParseError("unknown key '" + std::string(key) + "'", line_no);
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no);
    }
  }
  if (file.f_path.empty() || file.g_path.empty()) throw ParseError("certificate lacks 'F:' or 'G:'");
  const fs::path base = path.parent_path();
  if (file.f_path.is_relative()) file.f_path = base / file.f_path;
  if (file.g_path.is_relative()) file.g_path = base / file.g_path;
  const Barcode f_all = read_barcode(file.f_path);
  const Barcode g_all = read_barcode(file.g_path);
  for (const RawBlock& rb : raw_blocks) {
    if (!rb.a || !rb.b) throw ParseError("block lacks 'a:' or 'b:'", rb.line);
    const Barcode f = rb.degree ? f_all.restrict_degree(*rb.degree) : f_all;
    const Barcode g = rb.degree ? g_all.restrict_degree(*rb.degree) : g_all;
    try {
      MakeMorphismResult u = make_morphism(f, shift(g, *rb.a), rb.u, field);
      MakeMorphismResult v = make_morphism(g, shift(f, *rb.b), rb.v, field);
      if (!u.zeroed.empty() || !v.zeroed.empty()) throw ParseError("entry on a vanishing generator", rb.line);
      file.blocks.push_back({rb.degree, InterleavingCertificate{*rb.a, *rb.b, u.morphism, v.morphism}});
    } catch (const std::out_of_range&) {
      throw ParseError("entry index outside the barcodes", rb.line);
    }
  }
  return file;
}

bool verify_certificate_file(const CertificateFile& file, const Barcode& f, const Barcode& g) {
  if (file.blocks.empty()) return false;
  std::vector<int> degrees;
  for (const auto& block : file.blocks) {
    if (!block.degree) {
      if (file.blocks.size() != 1 || !verify_certificate(f, g, block.certificate)) return false;
      continue;
    }
    degrees.push_back(*block.degree);
    if (!verify_certificate(f.restrict_degree(*block.degree), g.restrict_degree(*block.degree),
                            block.certificate)) {
      return false;
    }
  }
  std::sort(degrees.begin(), degrees.end());
  return std::adjacent_find(degrees.begin(), degrees.end()) == degrees.end();
}

std::pair<Barcode, Barcode> rational_truncations(int n) {
  if (n < 1) throw DomainError("denominator bound must be positive");
  std::vector<Rational> points;
  for (int q = 1; q <= n; ++q) {
    for (int p = 0; p <= q; ++p) {
      if (std::gcd(p, q) == 1) points.emplace_back(p, q);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Bar> f_bars, g_bars;
  for (std::size_t k = 0; k < points.size(); ++k) {
    f_bars.push_back(Bar{0, Interval(Endpoint(points[k]), Endpoint::pos_inf())});
    const Rational next = k + 1 < points.size() ? points[k + 1] : Rational(1) + Rational(1, n);
    g_bars.push_back(Bar{0, Interval(Endpoint(next), Endpoint::pos_inf())});
  }
  return {Barcode(std::move(f_bars)), Barcode(std::move(g_bars))};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Barcodes of constructible sheaves on the line: distances, limits, spectral data, cone geometry"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::optional<Scalar> field_flag;
  std::optional<std::uint64_t> budget_flag, seed_flag;
  std::string format_flag, config_flag;
  app.add_option("--field", field_flag, "Field characteristic p (prime)");
  app.add_option("--budget", budget_flag, "Search budget per exhaustive decision");
  app.add_option("--seed", seed_flag, "Accepted for scripted runs; every computation is deterministic");
  app.add_option("--format", format_flag, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--config", config_flag, std::string("Config file (default: $") + kConfigEnv + ")");

  auto* dist = app.add_subcommand("dist", "Interleaving distances")->require_subcommand(1)->fallthrough();
  DistGammaArgs gamma_args;
  auto* dist_gamma = dist->add_subcommand("gamma", "Infimal a+b over (a,b)-interleavings")->fallthrough();
  dist_gamma->add_option("F", gamma_args.f, "Barcode file")->required();
  dist_gamma->add_option("G", gamma_args.g, "Barcode file")->required();
  dist_gamma->add_flag("--symmetric", gamma_args.symmetric, "Restrict to a = b");
  dist_gamma->add_option("--cert", gamma_args.cert, "Certificate output path");
  DistCheckArgs check_args;
  auto* dist_check = dist->add_subcommand("check", "Decide one (a,b)-interleaving")->fallthrough();
  dist_check->add_option("F", check_args.f, "Barcode file")->required();
  dist_check->add_option("G", check_args.g, "Barcode file")->required();
  dist_check->add_option("--a", check_args.a, "Shift of u")->required();
  dist_check->add_option("--b", check_args.b, "Shift of v")->required();
  dist_check->add_option("--cert", check_args.cert, "Certificate output path");

  SpectralArgs spectral_args;
  auto* spectral = app.add_subcommand("spectral", "Spectral invariants of a barcode")->fallthrough();
  spectral->add_option("FILE", spectral_args.file, "Barcode file")->required();
  spectral->add_option("--convention", spectral_args.convention, "left-infinite or sublevel");
  spectral->add_option("--dim", spectral_args.dim, "Dimension n of the base manifold");

  std::string sublevel_file;
  auto* sublevel = app.add_subcommand("sublevel", "Sublevel barcode of a PL function")->fallthrough();
  sublevel->add_option("FILE", sublevel_file, "PL function file")->required();

  LimitArgs limit_args;
  auto* limit = app.add_subcommand("limit", "Homotopy colimit of a tower")->fallthrough();
  limit->add_option("DIR", limit_args.dir, "Tower directory")->required();
  limit->add_option("--defect", limit_args.defect, "Check the defect inequality at index n");
  limit->add_flag("--exact", limit_args.exact, "Resolve chain endpoints to their limits");

  std::string complete_dir, complete_tol;
  auto* complete = app.add_subcommand("complete", "Limit of a Cauchy sequence of barcodes")->fallthrough();
  complete->add_option("DIR", complete_dir, "Directory with F0.bc, F1.bc, ...")->required();
  complete->add_option("--tol", complete_tol, "Tolerance on the final distance")->required();

  std::string cloud_path, point_text;
  auto* cone_test = app.add_subcommand("cone-test", "Cone coisotropy at a point of a sampled set")->fallthrough();
  cone_test->add_option("--cloud", cloud_path, "Point cloud CSV")->required();
  cone_test->add_option("--point", point_text, "Comma-separated base point")->required();

  CantorArgs cantor_args;
  auto* cantor = app.add_subcommand("cantor", "Cantor cube families and displacement bounds")->fallthrough();
  cantor->add_option("--a", cantor_args.a, "Ratio a")->required();
  cantor->add_option("--n", cantor_args.n, "Half dimension n")->required();
  cantor->add_option("--k", cantor_args.k, "Level k")->required();
  auto* emit_flag = cantor->add_flag("--emit-cloud", cantor_args.emit_cloud, "Print cube corners as CSV");
  cantor->add_flag("--bound-table", cantor_args.bound_table, "Print the bound for levels 1..k")->excludes(emit_flag);

  int denom_max = 0;
  auto* demo = app.add_subcommand("demo", "Worked scenarios")->require_subcommand(1)->fallthrough();
  auto* degeneracy = demo->add_subcommand("rational-degeneracy", "Distinct truncations at vanishing distance")
                         ->fallthrough();
  degeneracy->add_option("--denom-max", denom_max, "Largest denominator N")->required();

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Parse and round-trip a file")->fallthrough();
  validate->add_option("FILE", validate_file, "File to check")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    Config config;
    std::string config_path = config_flag;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnv)) config_path = env;
    }
    if (!config_path.empty()) config = parse_config(read_text_file(config_path), config);
    if (field_flag) config.field = *field_flag;
    if (budget_flag) config.budget = *budget_flag;
    if (seed_flag) config.seed = *seed_flag;
    if (!format_flag.empty()) config.format = format_flag == "machine" ? OutputFormat::Machine : OutputFormat::Human;
    config.validate();

    Printer printer(out, config.format);
    if (dist_gamma->parsed()) return cmd_dist_gamma(config, gamma_args, printer);
    if (dist_check->parsed()) return cmd_dist_check(config, check_args, printer);
    if (spectral->parsed()) return cmd_spectral(spectral_args, printer);
    if (sublevel->parsed()) return cmd_sublevel(sublevel_file, printer);
    if (limit->parsed()) return cmd_limit(config, limit_args, printer);
    if (complete->parsed()) return cmd_complete(config, complete_dir, complete_tol, printer);
    if (cone_test->parsed()) return cmd_cone_test(config, cloud_path, point_text, printer);
    if (cantor->parsed()) return cmd_cantor(cantor_args, printer, out);
    if (degeneracy->parsed()) return cmd_demo_degeneracy(config, denom_max, printer);
    if (validate->parsed()) return cmd_validate(config, validate_file, printer);
    err << "error: no command\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace sheafbar::cli
