#include <catch2/catch_amalgamated.hpp>

#include "idos/debt.hpp"

using namespace idos;

TEST_CASE("debt recursion and zero crossings", "[debt]") {
  const CodeParams p{4, 2, 1, 2};
  DebtState s;

  s = debt_step(s, 4, p);
  CHECK(s.debt == 0);
  CHECK(s.theta_last == 1);

  s = debt_step(s, 0, p);
  CHECK(s.debt == 2);
  CHECK(s.theta_last == 1);
  CHECK_FALSE(s.violation.has_value());

  s = debt_step(s, 0, p);  // debt 4 > mk = 2
  REQUIRE(s.violation.has_value());
  CHECK(*s.violation == ViolationKind::DebtExceeded);
  CHECK(s.violation_slot == 3);

  CHECK_THROWS_AS(debt_step(DebtState{}, 5, p), BadParams);
  CHECK_THROWS_AS(debt_step(DebtState{}, -1, p), BadParams);
}

TEST_CASE("pattern classification", "[debt]") {
  const CodeParams p{4, 2, 1, 2};

  CHECK(classify_pattern(p, {1, 3}).acceptable());
  CHECK(classify_pattern(p, {2}).acceptable());
  CHECK(classify_pattern(p, {0, 2, 4}).acceptable());

  const Classification debt = classify_pattern(p, {0, 0});
  REQUIRE(debt.status == Classification::Status::Violation);
  CHECK(*debt.kind == ViolationKind::DebtExceeded);
  CHECK(debt.slot == 2);

  // Debt stays positive through slot theta + tau + 1, so no window can close
  // within the delay bound; flagged at the earliest provable slot.
  const Classification delay = classify_pattern(p, {1, 1, 1, 1});
  REQUIRE(delay.status == Classification::Status::Violation);
  CHECK(*delay.kind == ViolationKind::DelayExceeded);
  CHECK(delay.slot == 3);

  const Classification incomplete = classify_pattern(p, {1});
  CHECK(incomplete.status == Classification::Status::Incomplete);
}

TEST_CASE("worst-case window enumeration matches the unit-memory example", "[debt]") {
  const auto seqs = enumerate_worst_case_windows(CodeParams{4, 2, 1, 2});
  const std::vector<std::vector<int>> expected{
      {2}, {0, 4}, {1, 3}, {0, 2, 4}, {0, 3, 3}, {1, 1, 4}, {1, 2, 3}};
  CHECK(seqs == expected);
}

TEST_CASE("enumeration agrees with a recursion-based oracle", "[debt]") {
  // Oracle: a count sequence is a worst-case window iff running the debt
  // recursion keeps I positive strictly inside, ends at exactly zero, never
  // violates, and the total equals k*ell.
  for (const CodeParams p :
       {CodeParams{4, 2, 1, 2}, CodeParams{3, 2, 1, 2}, CodeParams{3, 1, 2, 2},
        CodeParams{5, 3, 1, 1}, CodeParams{4, 2, 2, 3}}) {
    std::vector<std::vector<int>> oracle;
    for (int ell = 1; ell <= p.tau + 1; ++ell) {
      std::vector<int> counts(ell, 0);
      for (;;) {
        std::int64_t total = 0;
        for (int c : counts) total += c;
        if (total == static_cast<std::int64_t>(p.k) * ell) {
          DebtState s;
          bool inside_positive = true;
          for (int t = 0; t < ell; ++t) {
            s = debt_step(s, counts[t], p);
            if (t + 1 < ell && s.debt == 0) inside_positive = false;
          }
          if (inside_positive && s.debt == 0 && !s.violation) oracle.push_back(counts);
        }
        int i = ell - 1;
        while (i >= 0 && counts[i] == p.n) counts[i--] = 0;
        if (i < 0) break;
        ++counts[i];
      }
    }
    CHECK(enumerate_worst_case_windows(p) == oracle);
  }
}

TEST_CASE("enumerated windows classify as single complete windows", "[debt]") {
  for (const CodeParams p : {CodeParams{4, 2, 1, 2}, CodeParams{5, 3, 1, 2}}) {
    for (const auto& counts : enumerate_worst_case_windows(p)) {
      DebtState s;
      for (std::size_t t = 0; t < counts.size(); ++t) {
        s = debt_step(s, counts[t], p);
        REQUIRE_FALSE(s.violation.has_value());
        if (t + 1 < counts.size()) {
          REQUIRE(s.debt > 0);
        } else {
          REQUIRE(s.debt == 0);
        }
      }
    }
  }
}

TEST_CASE("necessary count conditions hold on every enumerated window", "[debt]") {
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k < n; ++k) {
      for (int tau = 1; tau <= 2; ++tau) {
        const CodeParams p{n, k, 1, tau};
        for (const auto& counts : enumerate_worst_case_windows(p)) {
          const SequenceCheck chk = check_worst_case_counts(counts, p);
          INFO("n=" << n << " k=" << k << " tau=" << tau);
          REQUIRE(chk.ok);
        }
      }
    }
  }
}

TEST_CASE("count condition fixtures", "[debt]") {
  const CodeParams p{4, 2, 1, 2};
  CHECK(check_worst_case_counts({1, 3}, p).ok);
  CHECK(check_worst_case_counts({2}, p).ok);
  CHECK(check_worst_case_counts({1, 2, 3}, p).ok);

  CHECK(check_worst_case_counts({1, 1}, p).violated_clause == "a");
  CHECK(check_worst_case_counts({3, 0, 3}, p).violated_clause == "b");
  CHECK(check_worst_case_counts({0, 2}, p).violated_clause == "c");
}

TEST_CASE("debt is monotone in the received count", "[debt]") {
  const CodeParams p{4, 2, 1, 2};
  for (std::int64_t debt0 : {0, 1, 2, 3}) {
    std::int64_t prev = -1;
    for (int n_t = 0; n_t <= p.n; ++n_t) {
      DebtState s;
      s.debt = debt0;
      s.t = 1;
      const DebtState next = debt_step(s, n_t, p);
      if (prev >= 0) REQUIRE(next.debt <= prev);
      prev = next.debt;
    }
  }
}

TEST_CASE("received-set expansion counts and order", "[debt]") {
  CHECK(expand_received_sets({2}, 4).size() == 6);
  CHECK(expand_received_sets({0, 4}, 4).size() == 1);
  CHECK(expand_received_sets({1, 2, 3}, 4).size() == 96);
  CHECK(count_received_set_choices({1, 2, 3}, 4) == 96);

  const auto patterns = expand_received_sets({2}, 4);
  CHECK(patterns.front().received_sets[0] == std::vector<int>{0, 1});
  CHECK(patterns.back().received_sets[0] == std::vector<int>{2, 3});
  for (const auto& p : patterns) {
    CHECK(p.ell == 1);
    CHECK(p.counts == std::vector<int>{2});
  }

  std::uint64_t total = 0;
  for (const auto& counts : enumerate_worst_case_windows(CodeParams{4, 2, 1, 2})) {
    total += count_received_set_choices(counts, 4);
  }
  CHECK(total == 157);
}
