#include "kramers/hamspec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace kramers {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& message)
    : InvalidInput(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

bool structurally_equal(const HamSpecDocument& a, const HamSpecDocument& b) {
  return a.system == b.system && a.terms == b.terms;
}

std::vector<SpinFactor> canonical_factors(std::vector<SpinFactor> factors) {
  std::stable_sort(factors.begin(), factors.end(),
                   [](const SpinFactor& a, const SpinFactor& b) { return a.site < b.site; });
  std::vector<SpinFactor> out;
  for (const SpinFactor& f : factors) {
    if (!out.empty() && out.back().site == f.site && out.back().axis == f.axis)
      out.back().exponent += f.exponent;
    else
      out.push_back(f);
  }
  return out;
}

namespace {

// Cursor over one line; columns are 1-based byte offsets into the raw line.
class LineReader {
 public:
  LineReader(const std::string& source, std::size_t line_no, std::string_view text)
      : source_(source), line_no_(line_no), text_(text) {}

  [[noreturn]] void fail(std::size_t pos, const std::string& message) const {
    throw ParseError(source_, line_no_, pos + 1, message);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) fail(pos_, std::string("expected ") + what);
  }
  std::size_t pos() const noexcept { return pos_; }
  std::string_view rest() const { return text_.substr(pos_); }

  /// Unsigned decimal with optional fraction and exponent.
  double number(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t end = start;
    auto digits = [&] {
      const std::size_t s = end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      return end - s;
    };
    std::size_t count = digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      count += digits();
    }
    if (count == 0) fail(start, std::string("malformed number in ") + what);
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      ++end;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      if (digits() == 0) fail(start, std::string("malformed number in ") + what);
    }
    if (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
      fail(start, std::string("malformed number in ") + what);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, v);
    if (ec != std::errc() || ptr != text_.data() + end || !std::isfinite(v))
      fail(start, std::string("malformed number in ") + what);
    pos_ = end;
    return v;
  }

  /// Nonnegative integer.
  long integer(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    std::size_t end = start;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, v);
    if (end == start || ec != std::errc() || ptr != text_.data() + end) fail(start, std::string("bad ") + what);
    pos_ = end;
    return v;
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  const std::string& source_;
  std::size_t line_no_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

SpinSystem parse_spins(LineReader& r) {
  std::vector<int> twice;
  do {
    r.skip_ws();
    const std::size_t start = r.pos();
    const long num = r.integer("spin value");
    int value = 0;
    if (r.accept('/')) {
      const long den = r.integer("spin value");
      if (den != 2 || num % 2 == 0) r.fail(start, "spin must be an integer or an odd multiple of 1/2");
      value = static_cast<int>(num);
    } else {
      value = static_cast<int>(2 * num);
    }
    if (num > 1000) r.fail(start, "spin value too large");
    if (value <= 0) r.fail(start, "spin must be positive");
    twice.push_back(value);
  } while (r.accept(','));
  if (!r.at_end()) r.fail(r.pos(), "unexpected text after spin list");
  return SpinSystem(std::move(twice));
}

TimePolynomial parse_poly(LineReader& r) {
  TimePolynomial poly;
  bool first = true;
  while (true) {
    double sign = 1.0;
    if (r.accept('-')) {
      sign = -1.0;
    } else if (!r.accept('+') && !first) {
      break;
    }
    const char c = r.peek();
    if (c == ':' || c == '\0') r.fail(r.pos(), "missing coefficient");
    double coeff = 1.0;
    int power = 0;
    bool has_t = false;
    if (c == 't') {
      has_t = true;
    } else {
      coeff = r.number("coefficient");
      if (r.accept('*')) {
        if (r.peek() != 't') r.fail(r.pos(), "expected 't' after '*'");
        has_t = true;
      }
    }
    if (has_t) {
      const std::size_t at = r.pos();
      if (r.word() != "t") r.fail(at, "expected 't'");
      power = 1;
      if (r.accept('^')) {
        const long p = r.integer("power of t");
        if (p > 64) r.fail(at, "power of t too large");
        power = static_cast<int>(p);
      }
    }
    poly.add(power, sign * coeff);
    first = false;
    const char next = r.peek();
    if (next != '+' && next != '-') break;
  }
  return poly;
}

SpinFactor parse_factor(LineReader& r, const SpinSystem& sys) {
  r.skip_ws();
  const std::size_t at = r.pos();
  const std::string name = r.word();
  SpinFactor f;
  if (name == "sx")
    f.axis = Axis::X;
  else if (name == "sy")
    f.axis = Axis::Y;
  else if (name == "sz")
    f.axis = Axis::Z;
  else if (name.empty())
    r.fail(at, "expected a spin factor such as sz@0");
  else
    r.fail(at, "unknown axis '" + name + "'");
  if (r.rest().empty() || r.rest().front() != '@') r.fail(r.pos(), "expected '@' and a site index");
  r.accept('@');
  const std::size_t site_at = r.pos();
  const long site = r.integer("site index");
  if (site < 0 || static_cast<std::size_t>(site) >= sys.sites())
    r.fail(site_at, "bad site index " + std::to_string(site) + " (system has " + std::to_string(sys.sites()) +
                        " sites)");
  f.site = static_cast<std::size_t>(site);
  if (!r.rest().empty() && r.rest().front() == '^') {
    r.accept('^');
    const std::size_t exp_at = r.pos();
    const long e = r.integer("exponent");
    if (e < 1 || e > 64) r.fail(exp_at, "exponent must be between 1 and 64");
    f.exponent = static_cast<int>(e);
  }
  return f;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

HamSpecDocument parse_hamspec(std::string_view text, std::string source) {
  HamSpecDocument doc;
  doc.source = std::move(source);
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  bool have_spins = false;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    LineReader r(doc.source, line_no, raw);
    if (r.at_end()) {
      if (text.empty()) break;
      continue;
    }
    const std::size_t key_at = r.pos();
    const std::string key = r.word();
    if (key != "spins" && key != "term") r.fail(key_at, key.empty() ? "expected 'spins:' or 'term:'"
                                                                    : "unknown directive '" + key + "'");
    r.expect(':', "':' after directive");

    if (key == "spins") {
      if (have_spins) r.fail(key_at, "duplicate spins header");
      doc.system = parse_spins(r);
      have_spins = true;
    } else {
      if (!have_spins) r.fail(key_at, "term before the spins header");
      if (r.peek() == ':' || r.at_end()) r.fail(r.pos(), "empty term");
      HamiltonianTerm term;
      term.coeff = parse_poly(r);
      r.expect(':', "':' between coefficient and factors");
      std::vector<SpinFactor> factors;
      while (!r.at_end()) factors.push_back(parse_factor(r, doc.system));
      if (factors.empty()) r.fail(r.pos(), "empty term: no spin factors");
      term.factors = canonical_factors(std::move(factors));
      if (term.coeff.is_zero()) {
        doc.warnings.push_back(doc.source + ":" + std::to_string(line_no) + ":1: zero term dropped");
        continue;
      }
      doc.terms.push_back(std::move(term));
    }
    if (text.empty()) break;
  }
  if (!have_spins) throw ParseError(doc.source, std::max<std::size_t>(line_no, 1), 1, "missing spins header");
  return doc;
}

HamSpecDocument load_hamspec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hamspec(buf.str(), path.string());
}

std::string serialize(const HamSpecDocument& doc) {
  std::string out = "spins: ";
  for (std::size_t i = 0; i < doc.system.sites(); ++i) {
    if (i) out += ", ";
    out += spin_label(doc.system.twice_spin(i));
  }
  out += '\n';
  for (const HamiltonianTerm& term : doc.terms) {
    out += "term: ";
    bool first = true;
    for (const Monomial& m : term.coeff.monomials()) {
      if (first) {
        out += format_number(m.coeff);
      } else {
        out += m.coeff < 0 ? " - " : " + ";
        out += format_number(std::abs(m.coeff));
      }
      first = false;
      if (m.power >= 1) out += "*t";
      if (m.power >= 2) out += "^" + std::to_string(m.power);
    }
    out += " :";
    for (const SpinFactor& f : term.factors) {
      out += " s";
      out += axis_name(f.axis);
      out += "@" + std::to_string(f.site);
      if (f.exponent != 1) out += "^" + std::to_string(f.exponent);
    }
    out += '\n';
  }
  return out;
}

Hamiltonian to_hamiltonian(const HamSpecDocument& doc) { return Hamiltonian(doc.system, doc.terms); }

}  // namespace kramers
