#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "jetham/document.hpp"
#include "jetham/model.hpp"
#include "jetham/run.hpp"
#include "support.hpp"

namespace jetham {
namespace {

using cli::Format;
using cli::OutputDocument;
using cli::parse_model;
using sym::Expr;

std::string read(const std::string& path) {
  std::ifstream in(std::string(JETHAM_SOURCE_DIR) + "/" + path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char* kMinimal = R"(bundle {
  n = 1
  m = 1
}
hamiltonian {
  H = p^2/2
}
tasks {
  hamilton
}
)";

ParseError parse_error(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ParseError(ParseErrorKind::syntax, 0, 0, "none");
}

TEST(ParseModel, Minimal) {
  auto m = parse_model(kMinimal);
  ASSERT_EQ(m.tasks.size(), 1u);
  EXPECT_EQ(m.tasks[0].kind, cli::TaskKind::hamilton);
  EXPECT_EQ(m.tasks[0].pos, (cli::SourcePos{9, 3}));
  EXPECT_EQ(m.chart.n(), 1);
  EXPECT_EQ(m.chart.order(), 2);
  ASSERT_TRUE(m.hamiltonian);
  EXPECT_EQ(m.hamiltonian->value, testing::parse(m.chart, "1/2*p^2"));
  EXPECT_EQ(m.hamiltonian->pos, (cli::SourcePos{6, 7}));
}

TEST(ParseModel, OneLineBlocksAndComments) {
  auto m = parse_model("bundle { n = 2 }  # plane\nsection h { tau = x1*x2 }\nhamiltonian { H = p1*p2 }\ntasks { restrict h }\n");
  EXPECT_EQ(m.chart.n(), 2);
  ASSERT_EQ(m.sections.count("h"), 1u);
  EXPECT_EQ(m.sections.at("h").of, geom::Fibration::ThetaX);
  EXPECT_EQ(m.tasks.at(0).args, std::vector<std::string>{"h"});
}

TEST(ParseModel, PositionedErrors) {
  struct Case {
    std::string text;
    ParseErrorKind kind;
    std::size_t line;
    std::size_t column;
  };
  const std::vector<Case> cases{
      {"hamiltonian {\n  H = p^2/2 + q*y\n}\n", ParseErrorKind::undeclared_parameter, 2, 15},
      {"hamiltonian {\n  H = y_xxx\n}\n", ParseErrorKind::unknown_coordinate, 2, 7},
      {"hamiltonian {\n  functions = F/2\n  H = F(x)\n}\n", ParseErrorKind::arity_mismatch, 3, 7},
      {"hamiltonian {\n  H = p +* y\n}\n", ParseErrorKind::syntax, 2, 10},
      {"hamiltonian {\n  H = p/y\n}\n", ParseErrorKind::malformed_arithmetic, 2, 9},
      {"hamiltonian {\n  H = p $ y\n}\n", ParseErrorKind::lexical, 2, 9},
      {"bundle {\n  base = 1t\n}\n", ParseErrorKind::lexical, 2, 10},
      {"bundle {\n  n = 1\n", ParseErrorKind::syntax, 1, 1},
      {"bundle {\n  n 1\n}\n", ParseErrorKind::syntax, 2, 3},
      {"bundel {\n}\n", ParseErrorKind::semantic, 1, 1},
      {"bundle {\n  n = zero\n}\n", ParseErrorKind::semantic, 2, 7},
      {"bundle {\n  n = 1\n  k = 1\n}\n", ParseErrorKind::semantic, 3, 3},
      {"tasks {\n  hamilton\n}\n", ParseErrorKind::semantic, 2, 3},
      {"hamiltonian { H = p }\ntasks {\n  hamiltonn\n}\n", ParseErrorKind::semantic, 3, 3},
      {"hamiltonian { H = p }\ntasks {\n  hamilton extra\n}\n", ParseErrorKind::arity_mismatch, 3, 3},
      {"hamiltonian { H = p }\ntasks {\n  restrict nowhere\n}\n", ParseErrorKind::semantic, 3, 12},
      {"hamiltonian { H = p }\ntasks {\n  prolong 1\n}\n", ParseErrorKind::semantic, 3, 11},
      {"hamiltonian { H = p*y_x }\n", ParseErrorKind::semantic, 1, 19},
      {"section h {\n  y = x\n  tau = x\n}\n", ParseErrorKind::semantic, 1, 1},
      {"section h {\n  tau = y\n}\n", ParseErrorKind::semantic, 1, 1},
      {"connection A : Y->Nowhere {\n}\n", ParseErrorKind::semantic, 1, 16},
      {"connection A : Y->Theta {\n  y:q = 1\n}\n", ParseErrorKind::unknown_coordinate, 2, 5},
      {"connection A : Y->Theta {\n  y:x = p\n}\n", ParseErrorKind::semantic, 1, 1},
      {"bundle {\n  n = 2\n  base = t\n}\n", ParseErrorKind::semantic, 1, 1},
      {"bundle { n = 1 }\nbundle { m = 1 }\n", ParseErrorKind::semantic, 2, 1},
  };
  for (const auto& c : cases) {
    ParseError e = parse_error(c.text);
    EXPECT_EQ(e.kind(), c.kind) << c.text << e.what();
    EXPECT_EQ(e.line(), c.line) << c.text << e.what();
    EXPECT_EQ(e.column(), c.column) << c.text << e.what();
  }
  EXPECT_FALSE(parse_error("hamiltonian {\n  H = q\n}\n").hint().empty());
}

TEST(ParseModel, FuzzedInputYieldsModelOrPositionedError) {
  const std::string seed = read("models/oscillator.jh") + read("models/composite.jh");
  const std::string alphabet = "{}=:#,*/+-^()_ \n\txyptau0123456789qHL>";
  std::mt19937 rng(7);
  int errors = 0;
  for (int k = 0; k < 3000; ++k) {
    std::string text = seed;
    const int edits = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int e = 0; e < edits && !text.empty(); ++e) {
      std::size_t at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
      char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: text[at] = c; break;
        case 1: text.insert(at, 1, c); break;
        default: text.erase(at, 1); break;
      }
    }
    try {
      parse_model(text);
    } catch (const ParseError& e) {
      ++errors;
      EXPECT_GE(e.line(), 1u) << text;
    } catch (const Error&) {
      ++errors;
    }
  }
  EXPECT_GT(errors, 100);
}

TEST(RunTasks, KleinGordonMatchesHamModule) {
  auto m = parse_model(read("models/klein_gordon.jh"));
  auto doc = cli::run_tasks(m);
  ham::LegendreChart lc(m.chart);
  ham::HamiltonianSpec spec(lc, testing::parse(m.chart, "1/2*(p1^2 - p2^2) + 1/2*mu^2*y^2"));
  auto direct = ham::hamilton_equations(spec);
  ASSERT_EQ(doc.tasks.at(0).equations.size(), direct.equations().size());
  for (std::size_t k = 0; k < direct.equations().size(); ++k) {
    EXPECT_EQ(doc.tasks[0].equations[k].lhs.text, direct.equations()[k].lhs.str());
    EXPECT_EQ(doc.tasks[0].equations[k].rhs.text, direct.equations()[k].rhs.str());
  }
  const auto& elim = doc.tasks.at(1);
  ASSERT_EQ(elim.equations.size(), 1u);
  Expr residual = testing::parse(m.chart, elim.equations[0].lhs.text) - testing::parse(m.chart, elim.equations[0].rhs.text);
  EXPECT_EQ(residual, testing::parse(m.chart, "y_11 - y_22 + mu^2*y"));
}

TEST(RunTasks, OscillatorInAllFormats) {
  auto m = parse_model(read("models/oscillator.jh"));
  auto doc = cli::run_tasks(m);
  const auto& h = doc.tasks.at(0);
  ASSERT_EQ(h.equations.size(), 2u);
  EXPECT_EQ(h.equations[0].lhs.text + " = " + h.equations[0].rhs.text, "y_x = p");
  EXPECT_EQ(h.equations[1].lhs.text + " = " + h.equations[1].rhs.text, "p_x = -w^2*y");
  EXPECT_NE(cli::emit(doc, Format::text).find("y_x = p\n"), std::string::npos);
  EXPECT_NE(cli::emit(doc, Format::text).find("p_x = -w^2*y\n"), std::string::npos);
  EXPECT_NE(cli::emit(doc, Format::latex).find("y_{x} = p \\\\\np_{x} = -w^{2} y\n"), std::string::npos);
  EXPECT_NE(cli::emit(doc, Format::json).find("\"text\": \"-w^2*y\""), std::string::npos);
  for (const auto& t : doc.tasks) {
    if (t.check) EXPECT_TRUE(t.check->holds) << t.name;
  }
}

TEST(RunTasks, CheckClosedOnSolvedConnection) {
  auto m = parse_model("hamiltonian { H = p^2/2 + x*tau*y^3 }\ntasks { check-closed }\n");
  auto doc = cli::run_tasks(m);
  ASSERT_TRUE(doc.tasks.at(0).check);
  EXPECT_TRUE(doc.tasks[0].check->holds);
  EXPECT_TRUE(doc.all_checks_hold());
}

TEST(RunTasks, CheckClosedReportsWitness) {
  auto m = parse_model("bundle { n = 1 }\nconnection B : Pi->X {\n  y:x = p*y\n}\ntasks { check-closed B }\n");
  auto doc = cli::run_tasks(m);
  ASSERT_TRUE(doc.tasks.at(0).check);
  EXPECT_FALSE(doc.tasks[0].check->holds);
  EXPECT_FALSE(doc.tasks[0].check->witness.empty());
  EXPECT_FALSE(doc.all_checks_hold());
}

TEST(RunTasks, EmptyTaskListGivesEmptyDocument) {
  auto doc = cli::run_tasks(parse_model("bundle { n = 3 }\n"));
  EXPECT_TRUE(doc.tasks.empty());
  EXPECT_EQ(cli::emit(doc, Format::text), "");
  EXPECT_EQ(cli::document_from_json(cli::emit(doc, Format::json)), doc);
}

TEST(RunTasks, ErrorsAreWrappedWithTheTask) {
  auto m = parse_model("bundle { n = 2 }\nlagrangian { L = 1/2*(y_1 + y_2)^2 }\ntasks { legendre }\n");
  try {
    cli::run_tasks(m);
    FAIL() << "expected a task error";
  } catch (const cli::TaskError& e) {
    EXPECT_EQ(e.task(), "legendre");
    EXPECT_NE(std::string(e.what()).find("degenerate"), std::string::npos);
  }
}

TEST(RunTasks, ConnectionTasks) {
  auto doc = cli::run_tasks(parse_model(read("models/composite.jh")));
  ASSERT_EQ(doc.tasks.size(), 4u);
  // γ^y_{x1} = A^y_{x1} + A^y_τ G^τ_{x1} = τ y + x2.
  bool found = false;
  for (const auto& e : doc.tasks[0].entries) {
    if (e.name.text == "gamma[y:x1]") {
      found = true;
      EXPECT_EQ(e.value.text, "x2 + tau*y");
    }
  }
  EXPECT_TRUE(found);
  auto checks = cli::run_checks(parse_model(read("models/composite.jh")));
  EXPECT_TRUE(checks.all_checks_hold());
}

TEST(Emit, LatexOfASingleEquation) {
  OutputDocument doc;
  doc.tasks.push_back({"hamilton", "equations", {{"velocity y_x", {"y_x", "y_{x}"}, {"p", "p"}}}, {}, std::nullopt});
  EXPECT_EQ(cli::emit(doc, Format::latex), "% hamilton\n\\begin{gather*}\ny_{x} = p\n\\end{gather*}\n");
  EXPECT_EQ(cli::emit(doc, Format::text), "hamilton  [equations]\n  velocity y_x  y_x = p\n");
}

TEST(Emit, JsonRoundTrip) {
  for (const char* model : {"models/klein_gordon.jh", "models/oscillator.jh", "models/composite.jh"}) {
    auto doc = cli::run_tasks(parse_model(read(model)));
    const std::string once = cli::emit(doc, Format::json);
    auto back = cli::document_from_json(once);
    EXPECT_EQ(back, doc) << model;
    EXPECT_EQ(cli::emit(back, Format::json), once) << model;
  }
  EXPECT_THROW(cli::document_from_json("{\"version\": 2, \"tasks\": []}"), ParseError);
  EXPECT_THROW(cli::document_from_json("{\"version\": 1}"), ParseError);
  EXPECT_THROW(cli::document_from_json("[1,"), ParseError);
}

TEST(Emit, Deterministic) {
  for (const char* model : {"models/klein_gordon.jh", "models/oscillator.jh", "models/composite.jh"}) {
    const std::string text = read(model);
    for (auto f : {Format::text, Format::latex, Format::json}) {
      EXPECT_EQ(cli::emit(cli::run_tasks(parse_model(text)), f), cli::emit(cli::run_tasks(parse_model(text)), f));
    }
  }
}

}  // namespace
}  // namespace jetham
