#include "isocurve/labelio.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "isocurve/modcurves.hpp"

namespace isocurve {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

Int parse_int(std::string_view s, const char* what, std::size_t line) {
  s = trim(s);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
  return v;
}

PrimePowerModulus modulus_from_value(Int n, std::size_t line) {
  if (n < 2) throw ParseError("modulus " + std::to_string(n) + " is not a prime power", line);
  Int p = 2;
  while (p * p <= n && n % p != 0) ++p;
  if (n % p != 0) p = n;
  int e = 0;
  Int r = n;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) throw ParseError("modulus " + std::to_string(n) + " is not a prime power", line);
  if (n > kMaxPackedModulus) throw ParseError("modulus " + std::to_string(n) + " is too large", line);
  return {p, e};
}

}  // namespace

std::string to_string(const Rational& j) {
  return j.denominator == "1" ? j.numerator : j.numerator + "/" + j.denominator;
}

PrimePowerModulus parse_modulus(Int value) { return modulus_from_value(value, 0); }

std::vector<ResidueMatrix> parse_matrix_list(std::string_view text, const PrimePowerModulus& modulus,
                                             std::size_t line) {
  std::vector<ResidueMatrix> out;
  text = trim(text);
  if (text.empty()) return out;
  const Int m = modulus.value();
  for (auto mat : split(text, ';')) {
    const auto entries = split(mat, ',');
    if (entries.size() != 4) throw ParseError("matrix needs four entries", line);
    Int e[4];
    for (int i = 0; i < 4; ++i) {
      e[i] = parse_int(entries[i], "matrix entry", line);
      if (e[i] < 0 || e[i] >= m)
        throw ParseError("entry " + std::to_string(e[i]) + " out of range [0, " + std::to_string(m) + ")", line);
    }
    ResidueMatrix x(modulus, e[0], e[1], e[2], e[3]);
    if (!x.is_invertible()) throw ParseError("non-invertible generator " + std::string(trim(mat)), line);
    out.push_back(x);
  }
  return out;
}

ImageLabel parse_label(std::string_view text) {
  const auto parts = split(trim(text), '.');
  if (parts.size() != 4) throw ParseError("label '" + std::string(text) + "' needs four fields N.i.g.n");
  ImageLabel l{parse_int(parts[0], "label level", 0), parse_int(parts[1], "label index", 0),
               parse_int(parts[2], "label genus", 0), parse_int(parts[3], "label tiebreak", 0)};
  if (l.level < 1 || l.index < 1 || l.genus < 0 || l.tiebreak < 1)
    throw ParseError("label '" + std::string(text) + "' has out-of-range fields");
  if (l.level > 1) modulus_from_value(l.level, 0);
  return l;
}

std::vector<ImageRecord> parse_generators(std::string_view text) {
  std::vector<ImageRecord> out;
  std::set<std::string> labels;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto fields = split(line, '|');
    if (fields.size() < 3 || fields.size() > 4)
      throw ParseError("expected label|modulus|generators[|alias]", lineno);
    ImageRecord rec;
    rec.label = std::string(trim(fields[0]));
    if (rec.label.empty()) throw ParseError("empty label", lineno);
    try {
      parse_label(rec.label);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    if (!labels.insert(rec.label).second) throw ParseError("duplicate label " + rec.label, lineno);
    rec.modulus = modulus_from_value(parse_int(fields[1], "modulus", lineno), lineno);
    rec.generators = parse_matrix_list(fields[2], rec.modulus, lineno);
    if (fields.size() == 4) rec.alias = std::string(trim(fields[3]));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ImageRecord> read_generators_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_generators(buf.str());
}

std::string format_generators(const std::vector<ResidueMatrix>& gens) {
  std::ostringstream os;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto e = gens[i].entries();
    os << (i ? ";" : "") << e[0] << ',' << e[1] << ',' << e[2] << ',' << e[3];
  }
  return os.str();
}

std::string serialize_record(const ImageRecord& rec) {
  std::string s = rec.label + "|" + std::to_string(rec.modulus.value()) + "|" + format_generators(rec.generators);
  if (!rec.alias.empty()) s += "|" + rec.alias;
  return s;
}

std::string serialize_generators(const std::vector<ImageRecord>& records) {
  std::string s;
  for (const auto& r : records) s += serialize_record(r) + "\n";
  return s;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os << label << "\tlevel=" << level << "\tindex=" << index << "\tgenus=" << genus << '\t'
     << (ok() ? "ok" : "MISMATCH");
  for (const auto& m : mismatches) os << "\n  " << m;
  return os.str();
}

ValidationReport validate_record(const ImageRecord& rec, std::size_t cap) {
  ValidationReport r;
  r.label = rec.label;
  const auto lab = parse_label(rec.label);
  const auto g = rec.group();
  r.level = level(g, cap).value();
  r.index = index_in_ambient(g, cap);
  r.genus = genus_XG(g, cap).genus;
  if (lab.level != rec.modulus.value())
    r.mismatches.push_back("label level " + std::to_string(lab.level) + " != file modulus " +
                           std::to_string(rec.modulus.value()));
  if (lab.level != r.level)
    r.mismatches.push_back("label level " + std::to_string(lab.level) + " != computed " + std::to_string(r.level));
  if (lab.index != r.index)
    r.mismatches.push_back("label index " + std::to_string(lab.index) + " != computed " + std::to_string(r.index));
  if (lab.genus != r.genus)
    r.mismatches.push_back("label genus " + std::to_string(lab.genus) + " != computed " + std::to_string(r.genus));
  return r;
}

const std::vector<KnownJRecord>& known_isolated_j() {
  static const std::vector<KnownJRecord> table = [] {
    const char* cm_values[] = {"0",        "1728",      "-3375",       "8000",          "-32768",
                               "54000",    "287496",    "-884736",     "-12288000",     "16581375",
                               "-884736000", "-147197952000", "-262537412640768000"};
    std::vector<KnownJRecord> t;
    for (auto fam : {CurveFamily::Gamma1, CurveFamily::Gamma0})
      for (const char* v : cm_values)
        t.push_back({{v, "1"}, true, fam, std::nullopt, "CM: every singular modulus is isolated"});
    const char* rational_x0 = "isolated rational point on X0(ell)";
    t.push_back({{"-9317", "1"}, false, CurveFamily::Gamma1, 37, "degree-6 point on X1(37)"});
    t.push_back({{"-162677523113838677", "1"}, false, CurveFamily::Gamma1, 37, "degree-18 point on X1(37)"});
    t.push_back({{"-24729001", "1"}, false, CurveFamily::Gamma0, 11, rational_x0});
    t.push_back({{"-121", "1"}, false, CurveFamily::Gamma0, 11, rational_x0});
    t.push_back({{"-297756989", "2"}, false, CurveFamily::Gamma0, 17, rational_x0});
    t.push_back({{"-882216989", "131072"}, false, CurveFamily::Gamma0, 17, rational_x0});
    t.push_back({{"-9317", "1"}, false, CurveFamily::Gamma0, 37, rational_x0});
    t.push_back({{"-162677523113838677", "1"}, false, CurveFamily::Gamma0, 37, rational_x0});
    return t;
  }();
  return table;
}

std::vector<ParsedReport> parse_reports(std::string_view text) {
  std::vector<ParsedReport> out;
  ParsedReport cur;
  std::size_t lineno = 0, pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f[0] == "RESULT") {
      for (std::size_t i = 1; i < f.size(); ++i) {
        const auto sp = f[i].find(' ');
        if (sp == std::string_view::npos) throw ParseError("RESULT entry needs 'level degree'", lineno);
        cur.result.emplace_back(parse_int(f[i].substr(0, sp), "level", lineno),
                                parse_int(f[i].substr(sp + 1), "degree", lineno));
      }
      out.push_back(std::move(cur));
      cur = {};
    } else if (f[0] == "NOTE") {
      cur.notes.emplace_back(line);
    } else if (f[0] == "WARN") {
      cur.warnings.emplace_back(line);
    } else {
      if (f.size() != 6) throw ParseError("pair line needs six tab-separated fields", lineno);
      ReportLine r;
      r.label = std::string(f[0]);
      try {
        r.family = parse_family(std::string(f[1]));
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
      }
      r.level = parse_int(f[2], "level", lineno);
      r.degree = parse_int(f[3], "degree", lineno);
      if (f[4] != "kept" && f[4] != "eliminated") throw ParseError("status must be kept or eliminated", lineno);
      r.kept = f[4] == "kept";
      r.reason = std::string(f[5]);
      cur.pairs.push_back(std::move(r));
    }
  }
  if (!cur.pairs.empty() || !cur.notes.empty() || !cur.warnings.empty())
    throw ParseError("report not closed by a RESULT line", lineno);
  return out;
}

}  // namespace isocurve
