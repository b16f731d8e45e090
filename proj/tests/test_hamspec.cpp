#include <doctest.h>

#include "hamspec_fixtures.hpp"

#include "kramers/hamspec.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace kramers;

using fixtures::random_document;

namespace {

std::string expect_line(const std::filesystem::path& file) {
  std::ifstream in(file);
  std::string first;
  std::getline(in, first);
  return first;
}

}  // namespace

TEST_CASE("two-line document gives the spin form of the two-state model") {
  const HamSpecDocument doc = parse_hamspec("spins: 1/2\nterm: 1*t : sz@0\nterm: 1 : sx@0\n");
  REQUIRE(doc.terms.size() == 2);
  CHECK(doc.system.dim() == 2);
  const ComplexMatrix h = to_hamiltonian(doc).evaluate(2.0);
  // S = sigma / 2, so beta = g = 1 here means beta t sigma_z / 2 + g sigma_x / 2.
  CHECK(h(0, 0).real() == doctest::Approx(1.0));
  CHECK(h(0, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("mixed-parity coefficient fails the parity check") {
  const HamSpecDocument doc = parse_hamspec("spins: 1/2\nterm: 1 + 1*t : sz@0\n");
  const ParityReport r = check_parity_symmetry(to_hamiltonian(doc));
  CHECK_FALSE(r.pass);
  CHECK(r.terms[0].parity == Parity::Mixed);
}

TEST_CASE("quadrupole term on a spin-1") {
  const HamSpecDocument doc = parse_hamspec("spins: 1/2, 1\nterm: 0.2 : sz@1^2\n");
  REQUIRE(doc.terms.size() == 1);
  CHECK(doc.terms[0].factors[0] == SpinFactor{1, Axis::Z, 2});
  const ComplexMatrix h = to_hamiltonian(doc).evaluate(0.0);
  const double want[] = {0.2, 0.0, 0.2, 0.2, 0.0, 0.2};
  for (int i = 0; i < 6; ++i) CHECK(h(i, i).real() == doctest::Approx(want[i]));
}

TEST_CASE("polynomial syntax") {
  const HamSpecDocument doc = parse_hamspec(
      "spins: 1/2\n"
      "term: -t + 2.5*t^3 - 1e-3 + t : sz@0\n"
      "term: +3 - 1.5E+2*t^2 : sx@0 # trailing comment\n");
  REQUIRE(doc.terms.size() == 2);
  const auto m0 = doc.terms[0].coeff.monomials();
  REQUIRE(m0.size() == 2);  // -t and +t cancel
  CHECK(m0[0] == Monomial{0, -1e-3});
  CHECK(m0[1] == Monomial{3, 2.5});
  CHECK(doc.terms[1].coeff.evaluate(2.0) == doctest::Approx(3.0 - 600.0));
}

TEST_CASE("zero terms are dropped with a warning") {
  const HamSpecDocument doc = parse_hamspec("spins: 1\nterm: 1*t - t : sz@0\nterm: 0 : sx@0\nterm: 1 : sy@0\n", "z.hamspec");
  CHECK(doc.terms.size() == 1);
  REQUIRE(doc.warnings.size() == 2);
  CHECK(doc.warnings[0].rfind("z.hamspec:2:", 0) == 0);
}

TEST_CASE("CRLF, BOM, blank lines and comments") {
  const HamSpecDocument doc =
      parse_hamspec("\xEF\xBB\xBF# header comment\r\n\r\nspins: 3/2 \r\n   \r\nterm: 1 : sz@0 # x\r\n");
  CHECK(doc.system.twice_spin(0) == 3);
  CHECK(doc.terms.size() == 1);
  CHECK_NOTHROW(parse_hamspec("spins: 1/2"));
}

TEST_CASE("factors on different sites are ordered, repeats merge") {
  const HamSpecDocument doc = parse_hamspec("spins: 1/2, 1\nterm: 1 : sx@1 sy@0 sx@1 sz@0 sz@0\n");
  const std::vector<SpinFactor> want{{0, Axis::Y, 1}, {0, Axis::Z, 2}, {1, Axis::X, 2}};
  CHECK(doc.terms[0].factors == want);
  // Same-site order is significant and preserved.
  const HamSpecDocument keep = parse_hamspec("spins: 1\nterm: 1 : sy@0 sx@0\n");
  CHECK(keep.terms[0].factors[0].axis == Axis::Y);
}

TEST_CASE("errors carry line and column") {
  struct Case {
    const char* text;
    std::size_t line;
    std::size_t column;
    const char* fragment;
  };
  const Case cases[] = {
      {"spins: 1/2\nterm: 1 : sw@0\n", 2, 11, "unknown axis"},
      {"spins: 1/2\nterm: 1 : sz@3\n", 2, 14, "bad site"},
      {"spins: 1/2\nterm: 1.2.3 : sz@0\n", 2, 7, "malformed number"},
      {"spins: 1/2\nterm: 1x : sz@0\n", 2, 7, "malformed number"},
      {"spins: 1/2\nterm: : sz@0\n", 2, 7, "empty term"},
      {"spins: 1/2\nterm: 1 :\n", 2, 10, "empty term"},
      {"spins: 1/2\nterm:\n", 2, 6, "empty term"},
      {"# nothing\n", 1, 1, "missing spins"},
      {"term: 1 : sz@0\nspins: 1/2\n", 1, 1, "before the spins"},
      {"spins: 1/2\nspins: 1\n", 2, 1, "duplicate"},
      {"spins: 1/3\n", 1, 8, "spin"},
      {"spins: 0\n", 1, 8, "positive"},
      {"spinz: 1/2\n", 1, 1, "unknown directive"},
      {"spins: 1/2\nterm: 1 : sz0\n", 2, 11, "unknown axis"},
      {"spins: 1/2\nterm: 1 : sz 0\n", 2, 13, "'@'"},
      {"spins: 1/2\nterm: 1 : sz@0^0\n", 2, 16, "exponent"},
      {"spins: 1/2\nterm: 2*x : sz@0\n", 2, 9, "'t'"},
      {"spins: 1/2\nterm: 1e : sz@0\n", 2, 7, "malformed number"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    try {
      parse_hamspec(c.text, "doc");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == c.line);
      CHECK(e.column() == c.column);
      CHECK(e.message().find(c.fragment) != std::string::npos);
      CHECK(std::string(e.what()).rfind("doc:" + std::to_string(c.line) + ":" + std::to_string(c.column) + ":", 0) == 0);
    }
  }
}

TEST_CASE("serialization is canonical") {
  HamSpecDocument empty;
  empty.system = SpinSystem({1, 2});
  CHECK(serialize(empty) == "spins: 1/2, 1\n");
  const HamSpecDocument doc = parse_hamspec("spins: 1\nterm: 0.5*t^2 - 3 + t : sz@0^1 sx@0^2\n");
  CHECK(serialize(doc) == "spins: 1\nterm: -3 + 1*t + 0.5*t^2 : sz@0 sx@0^2\n");
}

TEST_CASE("randomized documents survive parse-serialize-parse") {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 100; ++k) {
    const HamSpecDocument doc = random_document(rng);
    const std::string text = serialize(doc);
    CAPTURE(text);
    const HamSpecDocument back = parse_hamspec(text);
    CHECK(structurally_equal(doc, back));
    CHECK(back.warnings.empty());
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("single-axis terms with real coefficients compile to Hermitian matrices") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 30; ++k) {
    HamSpecDocument doc = random_document(rng);
    for (HamiltonianTerm& t : doc.terms) {
      const Axis a = t.factors[0].axis;
      for (SpinFactor& f : t.factors) f.axis = a;
    }
    const Hamiltonian h = to_hamiltonian(doc);
    double scale = 1.0;
    for (double t : symmetric_check_grid(2.0)) scale = std::max(scale, max_abs(h.evaluate(t)));
    CHECK(check_hermitian(h, symmetric_check_grid(2.0), 1e-13 * scale).pass);
  }
}

TEST_CASE("labeled corpus gets the expected static verdicts") {
  const auto cases = fixtures::labeled_corpus(KRAMERS_TEST_DATA "/corpus");
  CHECK(cases.size() == 10);
  for (const auto& c : cases) {
    CAPTURE(c.path.filename().string());
    CHECK(expect_line(c.path).rfind("# expect:", 0) == 0);
    const Hamiltonian h = to_hamiltonian(load_hamspec(c.path));
    CHECK(check_hermitian(h, symmetric_check_grid(3.0)).pass == c.hermitian);
    CHECK(check_parity_symmetry(h).pass == c.parity);
  }
}

TEST_CASE("unreadable files are reported") {
  CHECK_THROWS_AS(load_hamspec("/nonexistent/x.hamspec"), InvalidInput);
}
