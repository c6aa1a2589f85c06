#pragma once

// Expanding-window monthly evaluation: train on every month before the cut,
// test on the following month, move the cut forward one month, repeat.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hgrec/baselines.hpp"
#include "hgrec/corpus.hpp"
#include "hgrec/metrics.hpp"
#include "hgrec/parallel.hpp"
#include "hgrec/params.hpp"
#include "hgrec/recommender.hpp"
#include "hgrec/time.hpp"
#include "hgrec/wilcoxon.hpp"

namespace hgrec {

struct EvaluationRound {
  std::size_t index = 0;  // 1-based
  Timestamp cut{};        // training covers [t_s, cut)
  Timestamp test_end{};   // test month is [cut, test_end)
  std::shared_ptr<const ReviewCorpus> training;
  /// Corpus positions of test-month PRs with a non-empty reviewer set.
  std::vector<std::size_t> test_prs;
  std::size_t excluded_test_prs = 0;
};

inline std::string month_label(Timestamp t) { return format_rfc3339(t).substr(0, 7); }

/// Number of calendar months from the first to the last PR, inclusive.
inline std::size_t span_months(const ReviewCorpus& corpus) {
  const int first = absolute_month(corpus.prs().front().created_at);
  const int last = absolute_month(corpus.prs().back().created_at);
  return static_cast<std::size_t>(last - first + 1);
}

inline std::vector<EvaluationRound> make_rounds(const ReviewCorpus& corpus, std::size_t initial_months = 12,
                                                std::size_t max_rounds = 30) {
  if (initial_months < 1) throw DataError("initial_months must be at least 1");
  const std::size_t span = span_months(corpus);
  if (span <= initial_months) {
    throw DataError("corpus spans " + std::to_string(span) + " months; evaluation needs at least " +
                    std::to_string(initial_months + 1) + " (" + std::to_string(initial_months) +
                    " training months plus one test month)");
  }
  const int first = absolute_month(corpus.prs().front().created_at);
  const std::size_t count = std::min(max_rounds, span - initial_months);
  std::vector<EvaluationRound> rounds;
  for (std::size_t r = 0; r < count; ++r) {
    EvaluationRound round;
    round.index = r + 1;
    const int test_month = first + static_cast<int>(initial_months + r);
    round.cut = month_start(test_month);
    round.test_end = month_start(test_month + 1);
    round.training = std::make_shared<const ReviewCorpus>(corpus.before(round.cut));
    for (std::size_t i = 0; i < corpus.prs().size(); ++i) {
      const auto t = corpus.prs()[i].created_at;
      if (t < round.cut || t >= round.test_end) continue;
      if (corpus.reviewers(i).empty()) {
        ++round.excluded_test_prs;
      } else {
        round.test_prs.push_back(i);
      }
    }
    rounds.push_back(std::move(round));
  }
  return rounds;
}

// ---------------------------------------------------------------------------
// Recommender registry

using TrainedRecommender = std::function<Recommendation(const TargetPR&, std::size_t)>;

struct RecommenderSpec {
  std::string name;   // CLI name
  std::string label;  // report label
  std::function<TrainedRecommender(std::shared_ptr<const ReviewCorpus>)> train;
};

struct BaselineOptions {
  std::size_t ac_window_days = 90;
  double cn_decay = 0.8;
};

inline const std::vector<std::string>& recommender_names() {
  static const std::vector<std::string> names{"hgrec", "ac", "revfinder", "chrev", "cn"};
  return names;
}

inline RecommenderSpec make_recommender(std::string_view name, const HyperParams& params,
                                        const BaselineOptions& baseline = {}, std::size_t build_jobs = 1) {
  if (name == "hgrec") {
    return {"hgrec", "HGRec", [params, build_jobs](std::shared_ptr<const ReviewCorpus> history) -> TrainedRecommender {
              auto model = std::make_shared<const HgRecModel>(std::move(history), params, build_jobs);
              return [model](const TargetPR& t, std::size_t k) { return model->recommend(t, k); };
            }};
  }
  if (name == "ac") {
    return {"ac", baseline_label(BaselineKind::ac), [baseline](std::shared_ptr<const ReviewCorpus> h) -> TrainedRecommender {
              return [h, baseline](const TargetPR& t, std::size_t k) {
                return ac_recommend(*h, t, k, baseline.ac_window_days);
              };
            }};
  }
  if (name == "revfinder") {
    const auto unit = params.similarity_unit;
    return {"revfinder", baseline_label(BaselineKind::revfinder),
            [unit](std::shared_ptr<const ReviewCorpus> h) -> TrainedRecommender {
              return [h, unit](const TargetPR& t, std::size_t k) { return revfinder_recommend(*h, t, k, unit); };
            }};
  }
  if (name == "chrev") {
    return {"chrev", baseline_label(BaselineKind::chrev), [](std::shared_ptr<const ReviewCorpus> h) -> TrainedRecommender {
              return [h](const TargetPR& t, std::size_t k) { return chrev_recommend(*h, t, k); };
            }};
  }
  if (name == "cn") {
    return {"cn", baseline_label(BaselineKind::cn), [baseline](std::shared_ptr<const ReviewCorpus> h) -> TrainedRecommender {
              return [h, baseline](const TargetPR& t, std::size_t k) { return cn_recommend(*h, t, k, baseline.cn_decay); };
            }};
  }
  throw DataError("unknown recommender '" + std::string(name) + "' (expected hgrec, ac, revfinder, chrev or cn)");
}

// ---------------------------------------------------------------------------
// Comparison

struct MetricRow {
  std::string recommender;  // label
  std::size_t round = 0;
  std::string test_month;
  std::size_t k = 0;
  std::size_t n_prs = 0;
  double acc = 0.0;
  double mrr = 0.0;
  double rd = 0.0;
};

struct MetricAverage {
  std::string recommender;
  std::size_t k = 0;
  double acc = 0.0;
  double mrr = 0.0;
  double rd = 0.0;
};

struct PairwiseTest {
  std::string reference;
  std::string other;
  std::string metric;  // "acc", "mrr" or "rd"
  std::size_t k = 0;
  WilcoxonResult result;
};

struct RoundInfo {
  std::size_t index = 0;
  std::string test_month;
  std::size_t test_prs = 0;
  std::size_t excluded_prs = 0;
  std::size_t training_prs = 0;
  std::size_t training_reviewers = 0;
};

struct EvaluationReport {
  std::vector<std::string> recommenders;  // labels, in request order
  std::vector<std::size_t> ks;
  std::vector<RoundInfo> rounds;
  std::vector<MetricRow> rows;  // recommender x round x k
  std::vector<MetricAverage> averages;
  std::vector<PairwiseTest> tests;
};

struct EvaluationOptions {
  std::vector<std::size_t> ks{1, 3, 5};
  std::size_t initial_months = 12;
  std::size_t max_rounds = 30;
  std::size_t jobs = 1;
  /// Use the whole corpus's reviewer count as RD's n instead of the round's.
  bool rd_global_n = false;
  double significance = 0.05;
  std::ostream* log = nullptr;
};

/// Per-round recommendation records for one recommender.
inline std::vector<RecommendationRecord> evaluate_round(const ReviewCorpus& corpus, const EvaluationRound& round,
                                                        const RecommenderSpec& spec, std::size_t k) {
  const TrainedRecommender model = spec.train(round.training);
  std::vector<RecommendationRecord> records;
  records.reserve(round.test_prs.size());
  for (auto i : round.test_prs) {
    const auto& pr = corpus.prs()[i];
    const Recommendation rec = model(TargetPR::from(pr), k);
    RecommendationRecord r{pr.id, corpus.reviewers(i), {}};
    for (const auto& c : rec.candidates) r.ranked.push_back(c.developer);
    records.push_back(std::move(r));
  }
  return records;
}

inline EvaluationReport run_comparison(const ReviewCorpus& corpus, const std::vector<RecommenderSpec>& recommenders,
                                       const EvaluationOptions& options = {}) {
  if (recommenders.empty()) throw DataError("at least one recommender is required");
  if (options.ks.empty()) throw DataError("at least one k is required");
  for (auto k : options.ks) {
    if (k < 1) throw DataError("k must be at least 1");
  }
  const std::size_t max_k = *std::max_element(options.ks.begin(), options.ks.end());
  const auto rounds = make_rounds(corpus, options.initial_months, options.max_rounds);

  EvaluationReport report;
  report.ks = options.ks;
  for (const auto& r : recommenders) report.recommenders.push_back(r.label);

  // records[round][recommender]
  std::vector<std::vector<std::vector<RecommendationRecord>>> records(rounds.size());
  parallel_for(rounds.size(), options.jobs, [&](std::size_t ri) {
    if (rounds[ri].test_prs.empty()) return;
    records[ri].resize(recommenders.size());
    for (std::size_t rj = 0; rj < recommenders.size(); ++rj) {
      try {
        records[ri][rj] = evaluate_round(corpus, rounds[ri], recommenders[rj], max_k);
      } catch (const DataError& e) {
        throw DataError("round " + std::to_string(rounds[ri].index) + ", " + recommenders[rj].label + ": " + e.what());
      }
    }
  });

  const std::size_t global_reviewers = corpus.all_reviewers().size();
  for (std::size_t ri = 0; ri < rounds.size(); ++ri) {
    const auto& round = rounds[ri];
    RoundInfo info{round.index, month_label(round.cut), round.test_prs.size(), round.excluded_test_prs,
                   round.training->prs().size(), round.training->all_reviewers().size()};
    report.rounds.push_back(info);
    if (options.log) {
      *options.log << "round " << info.index << ": test month " << info.test_month << ", " << info.training_prs
                   << " training PRs, " << info.test_prs << " test PRs"
                   << (info.test_prs == 0 ? " (skipped)" : "") << "\n";
    }
    if (round.test_prs.empty()) continue;
    const std::size_t n_reviewers =
        std::max<std::size_t>(2, options.rd_global_n ? global_reviewers : info.training_reviewers);
    for (std::size_t rj = 0; rj < recommenders.size(); ++rj) {
      for (auto k : options.ks) {
        const auto& recs = records[ri][rj];
        report.rows.push_back({recommenders[rj].label, round.index, info.test_month, k, recs.size(), acc(recs, k),
                               mrr(recs, k), rd(recs, k, n_reviewers)});
      }
    }
  }

  // Per-round series: series[label][k] -> rows in round order
  auto series = [&](const std::string& label, std::size_t k) {
    std::vector<const MetricRow*> out;
    for (const auto& row : report.rows) {
      if (row.recommender == label && row.k == k) out.push_back(&row);
    }
    return out;
  };
  for (const auto& label : report.recommenders) {
    for (auto k : options.ks) {
      const auto rows = series(label, k);
      MetricAverage avg{label, k, 0.0, 0.0, 0.0};
      for (const auto* row : rows) {
        avg.acc += row->acc;
        avg.mrr += row->mrr;
        avg.rd += row->rd;
      }
      if (!rows.empty()) {
        const double n = static_cast<double>(rows.size());
        avg.acc /= n;
        avg.mrr /= n;
        avg.rd /= n;
      }
      report.averages.push_back(avg);
    }
  }

  if (recommenders.size() >= 2) {
    std::size_t ref = 0;
    for (std::size_t i = 0; i < recommenders.size(); ++i) {
      if (recommenders[i].name == "hgrec") {
        ref = i;
        break;
      }
    }
    const std::string& ref_label = recommenders[ref].label;
    for (std::size_t other = 0; other < recommenders.size(); ++other) {
      if (other == ref) continue;
      const std::string& other_label = recommenders[other].label;
      for (auto k : options.ks) {
        const auto a = series(ref_label, k);
        const auto b = series(other_label, k);
        for (const std::string metric : {"acc", "mrr", "rd"}) {
          std::vector<double> xa, xb;
          for (std::size_t i = 0; i < a.size(); ++i) {
            auto pick = [&](const MetricRow* r) {
              return metric == "acc" ? r->acc : metric == "mrr" ? r->mrr : r->rd;
            };
            xa.push_back(pick(a[i]));
            xb.push_back(pick(b[i]));
          }
          report.tests.push_back({ref_label, other_label, metric, k, wilcoxon_signed_rank(xa, xb, options.significance)});
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Report output

inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline double round_g9(double v) { return std::stod(format_g9(v)); }

inline void write_csv(std::ostream& out, const EvaluationReport& report) {
  out << "recommender,round,test_month,k,n_prs,acc,mrr,rd\n";
  for (const auto& r : report.rows) {
    out << r.recommender << ',' << r.round << ',' << r.test_month << ',' << r.k << ',' << r.n_prs << ','
        << format_g9(r.acc) << ',' << format_g9(r.mrr) << ',' << format_g9(r.rd) << '\n';
  }
}

inline nlohmann::json summary_json(const EvaluationReport& report) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : report.rounds) {
    rounds.push_back({{"round", r.index},
                      {"test_month", r.test_month},
                      {"test_prs", r.test_prs},
                      {"excluded_prs", r.excluded_prs},
                      {"training_prs", r.training_prs},
                      {"training_reviewers", r.training_reviewers}});
  }
  nlohmann::json averages = nlohmann::json::array();
  for (const auto& a : report.averages) {
    averages.push_back({{"recommender", a.recommender},
                        {"k", a.k},
                        {"acc", round_g9(a.acc)},
                        {"mrr", round_g9(a.mrr)},
                        {"rd", round_g9(a.rd)}});
  }
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : report.tests) {
    tests.push_back({{"reference", t.reference},
                     {"other", t.other},
                     {"metric", t.metric},
                     {"k", t.k},
                     {"n", t.result.n},
                     {"statistic", round_g9(t.result.statistic)},
                     {"p_greater", round_g9(t.result.p_greater)},
                     {"p_less", round_g9(t.result.p_less)},
                     {"p_two_sided", round_g9(t.result.p_two_sided)},
                     {"exact", t.result.exact},
                     {"verdict", to_string(t.result.verdict)}});
  }
  return {{"recommenders", report.recommenders}, {"ks", report.ks}, {"rounds", rounds},
          {"averages", averages},                {"tests", tests}};
}

/// AVG table: one line per recommender, ACC/MRR/RD for each k.
inline void print_average_table(std::ostream& out, const EvaluationReport& report) {
  char buf[64];
  out << "recommender ";
  for (const std::string metric : {"ACC", "MRR", "RD"}) {
    for (auto k : report.ks) {
      std::snprintf(buf, sizeof buf, " %5s@%-2zu", metric.c_str(), k);
      out << buf;
    }
  }
  out << '\n';
  for (const auto& label : report.recommenders) {
    std::snprintf(buf, sizeof buf, "%-12s", label.c_str());
    out << buf;
    for (int metric = 0; metric < 3; ++metric) {
      for (auto k : report.ks) {
        for (const auto& a : report.averages) {
          if (a.recommender != label || a.k != k) continue;
          std::snprintf(buf, sizeof buf, " %8.3f", metric == 0 ? a.acc : metric == 1 ? a.mrr : a.rd);
          out << buf;
        }
      }
    }
    out << '\n';
  }
}

}  // namespace hgrec
