#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "spectral_flrw/verify.hpp"

using namespace sflrw;

TEST(Verify, SuiteNames) {
  for (Suite s : {Suite::symbols, Suite::action, Suite::eom, Suite::perturbation, Suite::all}) {
    EXPECT_EQ(suite_from_string(to_string(s)), s);
  }
  EXPECT_THROW((void)suite_from_string("everything"), std::invalid_argument);
  EXPECT_EQ(to_string(Verdict::paper_discrepancy), "paper-discrepancy");
}

TEST(Verify, FullSuiteHasNoFailures) {
  const VerificationReport r = run_suite(Suite::all, 1, 96);
  EXPECT_FALSE(r.any_fail());
  EXPECT_GT(r.count(Verdict::pass), 50);
  ASSERT_NE(r.find("perturbation.radiation-argument.printed"), nullptr);
  EXPECT_EQ(r.find("perturbation.radiation-argument.printed")->verdict, Verdict::paper_discrepancy);
  EXPECT_EQ(r.find("perturbation.radiation-argument.reduced")->verdict, Verdict::pass);
  EXPECT_EQ(r.find("symbols.recursion-convention")->verdict, Verdict::paper_discrepancy);
  EXPECT_TRUE(std::is_sorted(r.entries.begin(), r.entries.end(),
                             [](const auto& x, const auto& y) { return x.check_id < y.check_id; }));
}

TEST(Verify, DeterministicForSeed) {
  const VerificationReport a = run_suite(Suite::eom, 42, 32);
  const VerificationReport b = run_suite(Suite::eom, 42, 32);
  EXPECT_EQ(to_json(a), to_json(b));
  const VerificationReport c = run_suite(Suite::eom, 43, 32);
  EXPECT_NE(to_json(a), to_json(c));
}

TEST(Verify, SuitesPartitionTheChecks) {
  std::size_t total = 0;
  for (Suite s : {Suite::symbols, Suite::action, Suite::eom, Suite::perturbation}) {
    const VerificationReport r = run_suite(s, 1, 32);
    for (const auto& e : r.entries) EXPECT_EQ(e.check_id.rfind(to_string(s), 0), 0u) << e.check_id;
    total += r.entries.size();
  }
  EXPECT_EQ(total, run_suite(Suite::all, 1, 32).entries.size());
}

TEST(Verify, ReportFormats) {
  const VerificationReport r = run_suite(Suite::action, 3, 32);
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j.at("suite"), "action");
  EXPECT_EQ(j.at("seed"), 3);
  EXPECT_EQ(j.at("node_budget"), 32);
  ASSERT_EQ(j.at("entries").size(), r.entries.size());
  for (const auto& key : {"check_id", "location", "computed", "oracle", "rel_dev", "tolerance", "verdict", "note"}) {
    EXPECT_TRUE(j.at("entries")[0].contains(key)) << key;
  }
  EXPECT_TRUE(j.at("tolerances").contains("quadrature"));
  std::ostringstream text;
  write_text(r, text);
  EXPECT_NE(text.str().find(r.entries.front().check_id), std::string::npos);
}

TEST(Verify, RejectsTinyBudget) {
  EXPECT_THROW((void)run_suite(Suite::symbols, 1, 2), std::invalid_argument);
}
