#include "fairpm/harness.hpp"

#include <charconv>

#include "fairpm/csv.hpp"
#include "fairpm/error.hpp"
#include "fairpm/random.hpp"

namespace fairpm {

namespace {

std::string format_real(double x) {
  char buffer[32];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, end);
}

void write_rows(const std::vector<ExperimentRow>& rows, std::ostream& out, bool by_epsilon) {
  csv::write_row(out, {by_epsilon ? "epsilon" : "level", "seed", "disc_data", "disc_standard", "disc_fair",
                       "acc_standard", "acc_fair"});
  for (const auto& r : rows) {
    csv::write_row(out, {format_real(by_epsilon ? r.epsilon : r.level), std::to_string(r.seed),
                         format_real(r.disc_data), format_real(r.disc_standard), format_real(r.disc_fair),
                         format_real(r.acc_standard), format_real(r.acc_fair)});
  }
  out.flush();
  if (!out) throw Error("failed to write report");
}

}  // namespace

void InjectionSpec::validate() const {
  if (levels.empty()) throw Error("injection needs at least one level");
  if (repeats == 0) throw Error("injection repeats must be positive");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0 && levels[i] < 1.0)) {
      throw Error("injection level " + format_real(levels[i]) + " outside [0, 1)");
    }
    if (i > 0 && !(levels[i] > levels[i - 1])) throw Error("injection levels must be strictly increasing");
  }
}

InjectionResult inject_discrimination(const AnnotatedTable& table, double target, std::uint64_t seed) {
  DiscReport current = disc_data(table);
  const Rational t = decimal_rational(target);
  const Rational p_f = current.favorable_rate;
  const Rational p_d = current.deprived_rate;
  const Rational wanted = p_f - t;
  if (wanted < 0) {
    throw Error("injection target " + format_real(target) + " unreachable: the largest reachable level is " +
                format_real(to_double(p_f)));
  }
  if (wanted > p_d) {
    throw Error("injection target " + format_real(target) + " lies below the current discrimination " +
                format_real(current.value()));
  }
  double q = p_d > 0 ? to_double((p_d - wanted) / p_d) : 0.0;
  std::vector<Instance> rows = table.instances();
  std::size_t flipped = 0;
  if (q > 0) {
    Rng rng(seed);
    for (Instance& inst : rows) {
      if (inst.group != Group::kDeprived || inst.label != Label::kPositive) continue;
      if (rng.bernoulli(q)) {
        inst.label = Label::kNegative;
        ++flipped;
      }
    }
  }
  AnnotatedTable out(table.schema(), std::move(rows));
  out.set_dropped(table.dropped());
  DiscReport achieved = disc_data(out);
  return {std::move(out), achieved, q, flipped};
}

ExperimentRow run_experiment(const AnnotatedTable& train, const AnnotatedTable& test,
                             const SituationSpecification& spec, const ExperimentParams& params,
                             const TreeObserver& observer) {
  DecisionTree standard = grow_tree(train, params.tree);
  RelabelOptions options{spec.epsilon, params.granularity, params.constraint};
  RelabelProblem problem = make_relabel_problem(standard, train, spec.relabel_mode, options);
  RelabelPlan plan = select_relabeling(problem, options);
  DecisionTree fair = apply_relabeling(standard, plan);

  ExperimentRow row;
  row.epsilon = spec.epsilon;
  row.disc_standard_train = problem.base_disc;
  row.acc_standard_train = problem.base_accuracy;
  row.disc_fair_train = disc_classifier(fair, train).disc;
  row.acc_fair_train = exact_accuracy(fair, train);
  row.feasible = plan.feasible;
  row.reverse_discrimination = plan.reverse_discrimination;
  row.relabeled = plan.chosen.size();
  row.disc_standard = disc_classifier(standard, test).value();
  row.disc_fair = disc_classifier(fair, test).value();
  row.acc_standard = accuracy(standard, test);
  row.acc_fair = accuracy(fair, test);
  if (observer) observer(row, standard, fair);
  return row;
}

std::vector<ExperimentRow> run_sweep(const AnnotatedTable& table, const SituationSpecification& spec,
                                     const InjectionSpec& injection, const ExperimentParams& params,
                                     const TreeObserver& observer) {
  injection.validate();
  std::vector<ExperimentRow> rows;
  for (double level : injection.levels) {
    for (std::size_t i = 0; i < injection.repeats; ++i) {
      const std::uint64_t seed = injection.seed + i;
      InjectionResult injected = inject_discrimination(table, level, seed);
      auto [train, test] = split_table(injected.table, params.train_fraction, seed);
      ExperimentRow row;
      auto set_keys = [&](const ExperimentRow& r, const DecisionTree& s, const DecisionTree& f) {
        ExperimentRow keyed = r;
        keyed.level = level;
        keyed.seed = seed;
        keyed.disc_data = injected.achieved.value();
        observer(keyed, s, f);
      };
      row = run_experiment(train, test, spec, params, observer ? TreeObserver(set_keys) : TreeObserver());
      row.level = level;
      row.seed = seed;
      row.disc_data = injected.achieved.value();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_epsilon_sweep(const AnnotatedTable& table, const SituationSpecification& spec,
                                             const std::vector<double>& epsilons, std::uint64_t seed,
                                             const ExperimentParams& params, const TreeObserver& observer) {
  if (epsilons.empty()) throw Error("epsilon sweep needs at least one epsilon");
  const double data_disc = disc_data(table).value();
  auto [train, test] = split_table(table, params.train_fraction, seed);
  DecisionTree standard = grow_tree(train, params.tree);
  const Rational base_disc = disc_classifier(standard, train).disc;
  const Rational base_acc = exact_accuracy(standard, train);
  const double disc_standard = disc_classifier(standard, test).value();
  const double acc_standard = accuracy(standard, test);

  std::vector<ExperimentRow> rows;
  for (double eps : epsilons) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw Error("epsilon " + format_real(eps) + " outside [0, 1]");
    RelabelOptions options{eps, params.granularity, params.constraint};
    RelabelProblem problem = make_relabel_problem(standard, train, spec.relabel_mode, options);
    RelabelPlan plan = select_relabeling(problem, options);
    DecisionTree fair = apply_relabeling(standard, plan);
    ExperimentRow row;
    row.level = data_disc;
    row.epsilon = eps;
    row.seed = seed;
    row.disc_data = data_disc;
    row.disc_standard_train = base_disc;
    row.acc_standard_train = base_acc;
    row.disc_fair_train = disc_classifier(fair, train).disc;
    row.acc_fair_train = exact_accuracy(fair, train);
    row.feasible = plan.feasible;
    row.reverse_discrimination = plan.reverse_discrimination;
    row.relabeled = plan.chosen.size();
    row.disc_standard = disc_standard;
    row.acc_standard = acc_standard;
    row.disc_fair = disc_classifier(fair, test).value();
    row.acc_fair = accuracy(fair, test);
    if (observer) observer(row, standard, fair);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_report(const std::vector<ExperimentRow>& rows, std::ostream& out) { write_rows(rows, out, false); }

void write_epsilon_report(const std::vector<ExperimentRow>& rows, std::ostream& out) {
  write_rows(rows, out, true);
}

std::string dot_filename(double level, std::uint64_t seed, bool fair) {
  return "level_" + format_real(level) + "_seed_" + std::to_string(seed) + (fair ? "_fair" : "_standard") +
         ".dot";
}

}  // namespace fairpm
