#include <doctest.h>

#include <random>

#include "eo/bsl/parser.hpp"
#include "eo/bsl/printer.hpp"
#include "fixtures.hpp"

using namespace eo;
using namespace eo::bsl;

namespace
{

template <typename T>
std::size_t count_of(const Document & doc, auto pred)
{
  std::size_t n = 0;
  for (const auto & d : doc.declarations) {
    if (const auto * x = std::get_if<T>(&d); x && pred(*x)) ++n;
  }
  return n;
}

const Binary & binary(const ExprPtr & e)
{
  return std::get<Binary>(e->node);
}

}  // namespace

TEST_CASE("tokenize: restriction line")
{
  auto toks = tokenize(":: Condition: $.warmthLow == 1");
  REQUIRE(toks.size() >= 3);
  CHECK(toks[0].kind == TokenKind::Colon);
  CHECK(toks[0].count == 2);
  CHECK(toks[1].kind == TokenKind::Ident);
  CHECK(toks[1].text == "Condition");
  CHECK(toks[2].kind == TokenKind::Colon);
  CHECK(toks[2].count == 1);
  CHECK(toks[3].kind == TokenKind::Dollar);
  CHECK(toks[4].kind == TokenKind::Dot);
  CHECK(toks[5].text == "warmthLow");
  CHECK(toks[6].kind == TokenKind::Eq);
  CHECK(toks[7].kind == TokenKind::Number);
  CHECK(toks.back().kind == TokenKind::Newline);
}

TEST_CASE("tokenize: empty input and comments")
{
  CHECK(tokenize("").empty());
  CHECK(tokenize("# comment only\n").empty());
  CHECK(tokenize("\n\n   \n").empty());
}

TEST_CASE("tokenize: names with spaces in value position")
{
  auto toks = tokenize("Survivor: Individual: John Doe\n");
  REQUIRE(toks.size() == 6);
  CHECK(toks[4].kind == TokenKind::Ident);
  CHECK(toks[4].text == "John Doe");
}

TEST_CASE("tokenize: illegal character reports line and column")
{
  try {
    tokenize("Concept: Instance: Survivor\n: x: 1 @ 2\n");
    FAIL("expected LexError");
  } catch (const LexError & e) {
    CHECK(e.location().line == 2);
    // operator== on SourceLocation is structural no-op; compare fields directly
    CHECK(e.location().column == 8);
  }
}

TEST_CASE("parse_document: Winter Feast fixture")
{
  auto doc = parse_document(testing::read_fixture("winter_feast.bsl"));
  CHECK(count_of<ConceptDecl>(doc, [](auto &) { return true; }) == 2);
  CHECK(count_of<PropertyDecl>(doc, [](auto & p) { return p.kind == PropertyKind::Attribute; }) == 19);
  CHECK(count_of<PropertyDecl>(doc, [](auto & p) { return p.kind == PropertyKind::Relation; }) == 2);
  CHECK(count_of<ModelDecl>(doc, [](auto & m) { return m.concept_name != kViewConcept; }) == 2);
  CHECK(count_of<IndividualDecl>(doc, [](auto & i) { return i.concept_name != kViewConcept; }) == 2);
  CHECK(count_of<ModelDecl>(doc, [](auto & m) { return m.concept_name == kViewConcept; }) == 1);
  CHECK(count_of<IndividualDecl>(doc, [](auto & i) { return i.concept_name == kViewConcept; }) == 2);

  const ModelDecl * survivor = nullptr;
  for (const auto & d : doc.declarations) {
    if (const auto * m = std::get_if<ModelDecl>(&d); m && m->name == "Model Survivor") survivor = m;
  }
  REQUIRE(survivor);
  CHECK(survivor->properties.size() == 17);
  const auto * gather = survivor->find("action_gather");
  REQUIRE(gather);
  REQUIRE(gather->find(RestrictionKind::Condition));
  REQUIRE(gather->find(RestrictionKind::SetDo));
  CHECK(gather->find(RestrictionKind::SetDo)->actions.size() == 1);
  CHECK(survivor->find("energyMin")->find(RestrictionKind::Default)->scalar == Scalar{30.0});
}

TEST_CASE("parse_document: view layer nesting")
{
  auto doc = parse_document(testing::read_fixture("winter_feast.bsl"));
  const IndividualDecl * view = nullptr;
  for (const auto & d : doc.declarations) {
    if (const auto * i = std::get_if<IndividualDecl>(&d); i && i->name == "View Survivor") view = i;
  }
  REQUIRE(view);
  CHECK(view->model == "Model View Individual");
  REQUIRE(view->values.size() == 3);
  const auto & concept_entry = view->values[2];
  CHECK(concept_entry.property == "ViewConcept");
  // Individuallist, ViewMode, 3 Excludes, Control. The source writes the second
  // and later Controls with three colons, so they parse as children of the first.
  REQUIRE(concept_entry.nested.size() == 6);
  const auto & control = concept_entry.nested[5];
  CHECK(control.property == "Control");
  CHECK(control.value == Scalar{std::string("action_gather")});
  REQUIRE(control.nested.size() == 19);
  CHECK(control.nested[0].value == Scalar{std::string("Gather Wood")});
  CHECK(control.nested[2].value == Scalar{1.0});
  CHECK(control.nested[3].property == "Control");
  CHECK(control.nested[3].value == Scalar{std::string("action_light_fire")});
}

TEST_CASE("parse_document: single concept and malformed model")
{
  auto doc = parse_document("Concept: Instance: Survivor");
  REQUIRE(doc.declarations.size() == 1);
  CHECK(std::get<ConceptDecl>(doc.declarations[0]).name == "Survivor");
  CHECK_THROWS_AS(parse_document("Survivor: Model:"), ParseError);
  CHECK_THROWS_AS(parse_document(": Attribute: x\n"), ParseError);
  CHECK_THROWS_AS(parse_document("Survivor: Model: M\n:: Condition: $.a == 1\n"), ParseError);
  CHECK_THROWS_AS(parse_document("Attribute: Individual: a\n: Range: Survivor\n"), ParseError);
}

TEST_CASE("parse_document: unsupported restrictions are kept verbatim")
{
  auto doc = parse_document("Survivor: Model: M\n: Attribute: hp\n:: Immutable: 1\n:: Permission: owner only\n");
  const auto & use = std::get<ModelDecl>(doc.declarations[0]).properties[0];
  REQUIRE(use.restrictions.size() == 2);
  CHECK(use.restrictions[0].kind == RestrictionKind::Unsupported);
  CHECK(use.restrictions[0].keyword == "Immutable");
  CHECK(use.restrictions[1].raw == "owner only");
}

TEST_CASE("parse_expression: numeric coercion comparison")
{
  auto e = parse_expression("+$.warmth < +$.warmthMin");
  const auto & b = binary(e);
  CHECK(b.op == BinaryOp::Lt);
  auto expected_lhs = make_expr(NumCoerce{make_expr(PropRef{"", "warmth"})});
  auto expected_rhs = make_expr(NumCoerce{make_expr(PropRef{"", "warmthMin"})});
  CHECK(same_expr(b.lhs, expected_lhs));
  CHECK(same_expr(b.rhs, expected_rhs));
}

TEST_CASE("parse_expression: && binds looser than ==")
{
  auto e = parse_expression("$.energyLow == 0 && $.warmthLow == 0");
  const auto & b = binary(e);
  CHECK(b.op == BinaryOp::And);
  CHECK(binary(b.lhs).op == BinaryOp::Eq);
  CHECK(binary(b.rhs).op == BinaryOp::Eq);

  auto o = parse_expression("$.a == 1 || $.b == 1 && $.c == 1");
  CHECK(binary(o).op == BinaryOp::Or);
  CHECK(binary(binary(o).rhs).op == BinaryOp::And);

  auto p = parse_expression("($.a == 1 || $.b == 1) && $.c == 1");
  CHECK(binary(p).op == BinaryOp::And);
}

TEST_CASE("parse_expression: both navigation spellings give the same AST")
{
  auto a = parse_expression("$($.location).hasTree == 1");
  auto b = parse_expression("($$.location).hasTree == 1");
  CHECK(same_expr(a, b));
  const auto & d = std::get<Deref>(binary(a).lhs->node);
  CHECK(d.property == "hasTree");
  CHECK(std::get<PropRef>(d.relation->node).property == "location");
}

TEST_CASE("parse_expression: errors")
{
  CHECK_THROWS_AS(parse_expression("$.a =="), ExprParseError);
  CHECK_THROWS_AS(parse_expression("$.a && "), ExprParseError);
  CHECK_THROWS_AS(parse_expression("$%a"), ExprParseError);
  CHECK_THROWS_AS(parse_expression("@a"), ExprParseError);
  CHECK_THROWS_AS(parse_expression("$($($.a).b).c == 1"), ExprParseError);
  CHECK_THROWS_AS(parse_expression(""), ExprParseError);
  CHECK_THROWS_AS(parse_expression("$.a $.b"), ExprParseError);
}

TEST_CASE("parse_setdo: Winter Feast acts")
{
  auto gather = parse_setdo(
    "({'do': 'EditIndividual',\n'$IndividualID': $CurrentIndividual,\n'$Condition': $Value == \"1\", 'hasWood': 1})");
  REQUIRE(gather.size() == 1);
  CHECK(gather[0].act == "EditIndividual");
  CHECK(std::get<PropRef>(gather[0].target->node).variable == "CurrentIndividual");
  CHECK(same_expr(gather[0].guard, parse_expression("$Value == \"1\"")));
  CHECK(gather[0].assignments == std::map<std::string, Scalar>{{"hasWood", 1.0}});

  auto fire = parse_setdo(
    "({'$do': 'EditIndividual', '$IndividualID': $.location, '$Condition':\n$Value === \"1\", 'hasFire': 1})");
  CHECK(std::get<PropRef>(fire[0].target->node).property == "location");
  CHECK(fire[0].assignments.at("hasFire") == Scalar{1.0});

  auto warm = parse_setdo(
    "({'$do': 'EditIndividual', '$IndividualID': $CurrentIndividual, '$Condition': $Value === \"1\", "
    "'hasWood': 0, 'warmth': 70})");
  CHECK(warm[0].assignments == std::map<std::string, Scalar>{{"hasWood", 0.0}, {"warmth", 70.0}});
}

TEST_CASE("parse_setdo: key order is irrelevant and keys are required")
{
  auto a = parse_setdo("{'hasWood': 1, '$Condition': $Value === \"1\", '$IndividualID': $CurrentIndividual, '$do': 'EditIndividual'}");
  auto b = parse_setdo("({'$do': 'EditIndividual', '$IndividualID': $CurrentIndividual, '$Condition': $Value === \"1\", 'hasWood': 1})");
  CHECK(a == b);
  CHECK_THROWS_AS(parse_setdo("{'$IndividualID': $CurrentIndividual, '$Condition': $Value === \"1\"}"), SetDoParseError);
  CHECK_THROWS_AS(parse_setdo("{'$do': 'EditIndividual', '$Condition': $Value === \"1\"}"), SetDoParseError);
  CHECK_THROWS_AS(parse_setdo("{'$do': 'EditIndividual', '$IndividualID': $CurrentIndividual}"), SetDoParseError);
  auto two = parse_setdo(
    "({'$do': 'EditIndividual', '$IndividualID': $CurrentIndividual, '$Condition': $Value === \"1\", 'a': 1}, "
    "{'$do': 'EditIndividual', '$IndividualID': $.location, '$Condition': $Value === \"1\", 'b': 2})");
  CHECK(two.size() == 2);
}

TEST_CASE("pretty_print: fixed cases")
{
  CHECK(pretty_print(Document{}).empty());
  CHECK(pretty_print(parse_document("Concept: Instance: Survivor")) == "Concept: Instance: Survivor\n");
}

TEST_CASE("pretty_print: Winter Feast round trip is a fixed point")
{
  auto doc = parse_document(testing::read_fixture("winter_feast.bsl"));
  auto text = pretty_print(doc);
  auto again = parse_document(text);
  CHECK(again == doc);
  CHECK(pretty_print(again) == text);
}

TEST_CASE("parsing is pure")
{
  auto src = testing::read_fixture("winter_feast.bsl");
  CHECK(parse_document(src) == parse_document(src));
}

namespace
{

ExprPtr random_expr(std::mt19937 & rng, int depth)
{
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 3);
  static const std::vector<std::string> props{"a", "warmth", "hasWood", "location"};
  switch (pick(rng)) {
    case 0: return make_expr(Literal{static_cast<double>(rng() % 100)});
    case 1: return make_expr(Literal{std::string(rng() % 2 ? "1" : "x y")});
    case 2: return make_expr(PropRef{"", props[rng() % props.size()]});
    case 3:
      return rng() % 2 ? make_expr(PropRef{"Value", ""})
                       : make_expr(Deref{make_expr(PropRef{"", "location"}), props[rng() % props.size()]});
    case 4: return make_expr(NumCoerce{random_expr(rng, depth - 1)});
    default: {
      static const BinaryOp ops[] = {BinaryOp::Eq, BinaryOp::StrictEq, BinaryOp::Lt, BinaryOp::Gt,
                                     BinaryOp::Ge, BinaryOp::And, BinaryOp::Or};
      return make_expr(Binary{ops[rng() % 7], random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    }
  }
}

}  // namespace

TEST_CASE("property: printed expressions re-parse to the same tree")
{
  std::mt19937 rng(20251018);
  for (int i = 0; i < 2000; ++i) {
    auto e = random_expr(rng, 4);
    auto text = print_expression(*e);
    CAPTURE(text);
    CHECK(same_expr(parse_expression(text), e));
  }
}
