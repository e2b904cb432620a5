#include "bellstat/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "bellstat/json_writer.hpp"

namespace bellstat {

std::string_view to_string(SinglesRule rule) {
  switch (rule) {
    case SinglesRule::eq3_runs: return "eq3";
    case SinglesRule::first_pair_run: return "first-pair";
    case SinglesRule::average: return "average";
  }
  return "eq3";
}

std::optional<SinglesRule> singles_rule_from_string(std::string_view s) {
  if (s == "eq3") return SinglesRule::eq3_runs;
  if (s == "first-pair") return SinglesRule::first_pair_run;
  if (s == "average") return SinglesRule::average;
  return std::nullopt;
}

void validate_quad(const ProbabilityQuad& q) {
  const auto in_unit = [](double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; };
  for (const double p : {q.p11, q.p12, q.p21, q.p22, q.pA, q.pB}) {
    if (!in_unit(p)) throw ValidationError("probabilities must lie in [0,1]");
  }
  // A coincidence probability cannot exceed either singles marginal; the
  // slack absorbs round-off in quantum-model inputs.
  if (q.p11 > std::min(q.pA, q.pB) + 1e-12) {
    throw ValidationError("p11 exceeds a singles marginal");
  }
}

double ch_probability_margin(const ProbabilityQuad& q) {
  validate_quad(q);
  return (q.p11 + q.p12 + q.p21 - q.p22) - (q.pA + q.pB);
}

std::string equivalence_report_json(const JValue& j, const std::optional<TValue>& t,
                                    bool normalized) {
  JsonWriter w;
  w.begin_object();
  w.key("j_pair").value(j.j_pair);
  w.key("j_single").value(j.j_single);
  w.key("j").value(j.j);
  if (t) {
    w.key("t_numerator").value(t->numerator);
    w.key("t_denominator").value(t->denominator);
    w.key("t").value(t->t);
  } else {
    w.key("t_numerator").null();
    w.key("t_denominator").null();
    w.key("t").null();
  }
  w.key("normalized").value(normalized);
  w.end_object();
  return w.str();
}

}  // namespace bellstat
