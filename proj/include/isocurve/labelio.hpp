#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isocurve/family.hpp"
#include "isocurve/gl2.hpp"

namespace isocurve {

/// Malformed label, data file or report; `line` is 1-based (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Fields of a label N.i.g.n.
struct ImageLabel {
  Int level = 0;
  Int index = 0;
  Int genus = 0;
  Int tiebreak = 0;

  friend bool operator==(const ImageLabel&, const ImageLabel&) = default;
};

ImageLabel parse_label(std::string_view text);

/// Prime-power modulus from its value; rejects composites and values too
/// large for packed matrices.
PrimePowerModulus parse_modulus(Int value);

/// Matrices in the data-file syntax `m11,m12,m21,m22;...`; entries must lie
/// in [0, modulus) and each matrix must be invertible.
std::vector<ResidueMatrix> parse_matrix_list(std::string_view text, const PrimePowerModulus& modulus,
                                             std::size_t line = 0);

struct ImageRecord {
  std::string label;
  PrimePowerModulus modulus{2, 1};
  std::vector<ResidueMatrix> generators;
  std::string alias;  // opaque tag such as a Sutherland label; never interpreted

  MatrixGroup group() const { return {modulus, generators, label}; }
};

/// Grammar, one record per line:
///   label|modulus|m11,m12,m21,m22;m11,...[|alias]
/// Blank lines and text after '#' are ignored.
std::vector<ImageRecord> parse_generators(std::string_view text);
std::vector<ImageRecord> read_generators_file(const std::filesystem::path& path);

std::string serialize_record(const ImageRecord& rec);
std::string serialize_generators(const std::vector<ImageRecord>& records);

/// Generators in the data-file matrix syntax, e.g. `1,0,37,48;22,0,0,22`.
std::string format_generators(const std::vector<ResidueMatrix>& gens);

struct ValidationReport {
  std::string label;
  Int level = 0, index = 0, genus = 0;  // recomputed
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
  std::string to_text() const;
};

ValidationReport validate_record(const ImageRecord& rec, std::size_t cap = kDefaultEnumerationCap);

/// Exact rational j-invariant.
struct Rational {
  std::string numerator;  // decimal, sign carried here
  std::string denominator = "1";
  friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& j);

struct KnownJRecord {
  Rational j;
  bool cm = false;
  CurveFamily family = CurveFamily::Gamma1;
  std::optional<Int> ell;  // prime whose tower carries the point (non-CM entries)
  std::string citation;
};

/// Rational isolated j-invariants for prime-power levels: CM values in both
/// families plus the non-CM exceptions.
const std::vector<KnownJRecord>& known_isolated_j();

/// One parsed report line.
struct ReportLine {
  std::string label;
  CurveFamily family = CurveFamily::Gamma1;
  Int level = 0, degree = 0;
  bool kept = false;
  std::string reason;
  friend bool operator==(const ReportLine&, const ReportLine&) = default;
};

struct ParsedReport {
  std::vector<ReportLine> pairs;
  std::vector<std::string> notes;     // raw NOTE lines
  std::vector<std::string> warnings;  // raw WARN lines
  std::vector<std::pair<Int, Int>> result;
};

/// Parses the output of serialize_report (one report; RESULT closes it).
std::vector<ParsedReport> parse_reports(std::string_view text);

}  // namespace isocurve
