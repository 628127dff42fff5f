// Batch front end: synthesize / quality / privacy / inspect.
//
// Exit codes: 0 success, 2 usage or config error, 3 schema error (missing or
// mismatched columns), 4 I/O error, 5 empty input table.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rangesynth/rangesynth.hpp"

namespace rs = rangesynth;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSchema = 3;
constexpr int kExitIo = 4;
constexpr int kExitEmpty = 5;

struct CommonOpts {
  std::string input;
  std::vector<std::string> pid_cols;
  std::vector<std::string> columns;
  std::string salt;
  int threads = 0;  // 0 = all cores
  int max_dim = 3;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--input", o.input, "input CSV path");
  cmd->add_option("--pid-col", o.pid_cols,
                  "protected-entity id column; repeatable, empty for one row per entity");
  cmd->add_option("--columns", o.columns, "columns to synthesize (default: all non-PID columns)")
      ->delimiter(',');
  cmd->add_option("--salt", o.salt, "secret salt for all sticky randomness");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_option("--max-dim", o.max_dim, "widest direct synthesis before sub-table routing");
  cmd->add_option("--config", o.config_path, "key=value config file; command-line flags win");
}

// ---- line-oriented key=value config files; command-line flags win ----

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int parse_config_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--config", key + ": not an integer: " + v);
  }
}

double parse_config_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--config", key + ": not a number: " + v);
  }
}

bool parse_config_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw CLI::ValidationError("--config", key + ": not a boolean: " + v);
}

using Setters = std::vector<std::pair<std::string, std::function<void(const std::string&)>>>;

Setters common_setters(CommonOpts& o) {
  return {
      {"input", [&o](const std::string& v) { o.input = v; }},
      {"pid-col", [&o](const std::string& v) { o.pid_cols = split_list(v); }},
      {"columns", [&o](const std::string& v) { o.columns = split_list(v); }},
      {"salt", [&o](const std::string& v) { o.salt = v; }},
      {"threads", [&o](const std::string& v) { o.threads = parse_config_int("threads", v); }},
      {"max-dim", [&o](const std::string& v) { o.max_dim = parse_config_int("max-dim", v); }},
  };
}

// Applies the file to every key not already given on the command line.
void apply_config(const CLI::App* cmd, const std::string& path, const Setters& setters) {
  std::ifstream f(path);
  if (!f) throw rs::CsvError("cannot read config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config",
                                 path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = std::find_if(setters.begin(), setters.end(),
                           [&key](const auto& s) { return s.first == key; });
    if (it == setters.end())
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) +
                                                 ": unknown key: " + key);
    if (cmd->count("--" + key) == 0) it->second(value);
  }
}

void require_opt(const std::string& flag, const std::string& value) {
  if (value.empty()) throw CLI::ValidationError(flag, "is required");
}

int effective_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

rs::Table load_input(const CommonOpts& o) {
  rs::Table t = rs::load_table_file(o.input, o.pid_cols);
  if (t.rows.empty()) throw std::runtime_error("__empty__");
  return t;
}

std::vector<std::string> resolve_columns(const rs::Table& t, const CommonOpts& o) {
  std::vector<std::string> cols;
  if (o.columns.empty()) {
    for (const auto& c : t.columns)
      if (!c.pid_role) cols.push_back(c.name);
  } else {
    for (const auto& name : o.columns) {
      t.column_index(name);  // throws SchemaError when missing
      if (std::find(o.pid_cols.begin(), o.pid_cols.end(), name) != o.pid_cols.end())
        throw CLI::ValidationError("--columns", "PID column cannot be synthesized: " + name);
      cols.push_back(name);
    }
  }
  if (cols.empty()) throw CLI::ValidationError("--columns", "no columns to synthesize");
  return cols;
}

rs::SynthesisOptions make_options(const CommonOpts& o) {
  rs::SynthesisOptions opt;
  opt.anon.salt = o.salt;
  opt.threads = effective_threads(o.threads);
  opt.max_dim = o.max_dim;
  return opt;
}

std::vector<rs::RankedFeature> load_ranking(const std::string& path) {
  rs::RawCsv raw = rs::read_csv_file(path);
  std::vector<rs::RankedFeature> out;
  auto row_of = [](const std::vector<std::string>& r) {
    return rs::RankedFeature{r.at(0), std::stod(r.at(1))};
  };
  // header optional: accept it when the second field is not numeric
  std::size_t start = 0;
  try {
    out.push_back(row_of(raw.header));
  } catch (const std::exception&) {
    start = 0;  // header row; data rows follow
  }
  for (std::size_t i = start; i < raw.rows.size(); ++i) out.push_back(row_of(raw.rows[i]));
  return out;
}

int cmd_synthesize(const CommonOpts& common, const std::string& output,
                   const std::optional<std::string>& target, const std::string& ranking_file) {
  rs::Table t = load_input(common);
  std::vector<std::string> cols = resolve_columns(t, common);
  if (target && std::find(cols.begin(), cols.end(), *target) == cols.end())
    throw CLI::ValidationError("--target", "target must be among the synthesized columns");

  rs::SynthesisOptions opt = make_options(common);
  std::vector<rs::RankedFeature> ranking;
  const std::vector<rs::RankedFeature>* ranking_ptr = nullptr;
  if (!ranking_file.empty()) {
    ranking = load_ranking(ranking_file);
    ranking_ptr = &ranking;
  }

  rs::PipelineReport report;
  rs::Table out = rs::synthesize(t, cols, target, opt, &report, ranking_ptr);
  rs::write_csv_file(output, out);

  std::cout << "rows in: " << t.rows.size() << "\n"
            << "rows out: " << out.rows.size() << "\n"
            << "trees: " << report.stats.trees << "\n"
            << "buckets: " << report.stats.buckets << "\n"
            << "leaves suppressed: " << report.stats.suppressed_leaves << " of "
            << report.stats.total_leaves << "\n";
  if (report.used_subtables) {
    std::cout << "sub-tables: " << report.plan.sub_tables.size()
              << " (common column: " << report.plan.common_column << ")\n";
    if (!report.plan.leftover_columns.empty()) {
      std::cout << "leftover columns:";
      for (const auto& c : report.plan.leftover_columns) std::cout << " " << c;
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_quality(const std::string& orig_path, const std::string& syn_path,
                const std::string& output) {
  rs::Table orig = rs::load_table_file(orig_path);
  rs::Table syn = rs::load_table_file(syn_path);
  if (orig.rows.empty() || syn.rows.empty()) throw std::runtime_error("__empty__");
  for (const auto& c : syn.columns)
    if (!orig.has_column(c.name))
      throw rs::SchemaError("synthetic column not in original: " + c.name);

  // score in original column order so a permuted synthetic file reports identically
  std::vector<std::string> shared;
  for (const auto& c : orig.columns)
    if (syn.has_column(c.name)) shared.push_back(c.name);
  if (shared.empty()) throw rs::SchemaError("no shared columns between the tables");

  auto column_values = [](const rs::Table& t, const std::string& name) {
    std::vector<rs::Value> out;
    int ci = t.column_index(name);
    for (const auto& row : t.rows) out.push_back(row[static_cast<std::size_t>(ci)]);
    return out;
  };

  std::ostringstream csv;
  csv << "kind,column_a,column_b,score\n";
  std::vector<double> marginals, pairs;
  for (const auto& name : shared) {
    const rs::ColumnMeta& m = orig.columns[static_cast<std::size_t>(orig.column_index(name))];
    rs::QualityScore qs =
        rs::marginal_quality(column_values(orig, name), column_values(syn, name), m);
    marginals.push_back(qs.value);
    csv << "marginal," << rs::csv_escape(name) << ",," << qs.value << "\n";
  }
  for (std::size_t i = 0; i < shared.size(); ++i)
    for (std::size_t j = i + 1; j < shared.size(); ++j) {
      const rs::ColumnMeta& ma =
          orig.columns[static_cast<std::size_t>(orig.column_index(shared[i]))];
      const rs::ColumnMeta& mb =
          orig.columns[static_cast<std::size_t>(orig.column_index(shared[j]))];
      rs::QualityScore qs = rs::pair_quality(
          column_values(orig, shared[i]), column_values(orig, shared[j]),
          column_values(syn, shared[i]), column_values(syn, shared[j]), ma, mb);
      pairs.push_back(qs.value);
      csv << "pair," << rs::csv_escape(shared[i]) << "," << rs::csv_escape(shared[j]) << ","
          << qs.value << "\n";
    }

  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw rs::CsvError("cannot write " + output);
    f << csv.str();
  }
  std::cout << "median marginal quality: " << rs::median(marginals) << "\n";
  if (!pairs.empty()) std::cout << "median pair quality: " << rs::median(pairs) << "\n";
  return 0;
}

int cmd_privacy(const CommonOpts& common, bool no_anon, int attacks, double confidence_cut,
                std::uint64_t seed, const std::string& output) {
  rs::Table t = load_input(common);
  std::vector<std::string> cols = resolve_columns(t, common);

  rs::AttackConfig cfg;
  if (attacks < 1) throw CLI::ValidationError("--attacks", "must be at least 1");
  cfg.n_attacks = attacks;
  cfg.confidence_cut = confidence_cut;

  rs::SynthesisOptions opt = make_options(common);
  rs::Synthesizer synth;
  if (no_anon) {
    // calibration mode: the "synthetic" table is the test half verbatim
    synth = [&cols](const rs::Table& test) {
      rs::Table out;
      for (const auto& name : cols) {
        rs::ColumnMeta m = test.columns[static_cast<std::size_t>(test.column_index(name))];
        m.pid_role = false;
        out.columns.push_back(std::move(m));
      }
      for (const auto& row : test.rows) {
        std::vector<rs::Value> r;
        for (const auto& name : cols)
          r.push_back(row[static_cast<std::size_t>(test.column_index(name))]);
        out.rows.push_back(std::move(r));
      }
      return out;
    };
  } else {
    synth = [&cols, &opt](const rs::Table& test) {
      return rs::synthesize(test, cols, std::nullopt, opt);
    };
  }

  rs::AttackReport report = rs::run_suite(t, synth, cfg, seed);

  std::ostringstream csv;
  csv << "secret_column,p_test,p_control,precision_improvement,half_width,retained\n";
  bool all_safe = true;
  for (const auto& r : report.columns) {
    csv << rs::csv_escape(r.secret_column) << "," << r.p_test << "," << r.p_control << ","
        << (r.retained ? std::to_string(r.precision_improvement) : "") << "," << r.half_width
        << "," << (r.retained ? "yes" : "no") << "\n";
    if (r.retained && r.precision_improvement >= 0.5) all_safe = false;
  }
  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw rs::CsvError("cannot write " + output);
    f << csv.str();
  }
  std::cout << "attacks: " << report.total_attacks << ", retained: " << report.retained_attacks
            << "\n";
  std::cout << (all_safe ? "PASS" : "FAIL")
            << ": precision improvement below 0.5 on every retained column\n";
  return 0;
}

void dump_node(const rs::TreeNode& node, const rs::Dataset& ds, const rs::Tree& tree,
               const rs::AnonParams& ap, std::size_t& total, std::size_t& suppressed) {
  ++total;
  std::ostringstream line;
  for (std::size_t d = 0; d < node.ranges.size(); ++d) {
    const rs::SnappedRange& r = node.ranges[d];
    line << (d ? " x " : "") << "[" << r.lo << "," << r.lo + r.size << ")";
  }
  bool supp;
  std::size_t distinct;
  if (node.leaf) {
    supp = rs::suppress(node.contribs, node.seed, ap);
    distinct = node.contribs.min_distinct_pids();
  } else {
    std::vector<int> rows;
    rs::Tree::collect_rows(node, rows);
    rs::PidContributions c = tree.contribs_of_rows(rows);
    supp = rs::suppress(c, node.seed, ap);
    distinct = c.min_distinct_pids();
  }
  if (supp) ++suppressed;
  std::cout << std::string(static_cast<std::size_t>(node.depth) * 2, ' ') << line.str()
            << " count=" << node.true_count << " pids=" << distinct
            << (node.leaf ? " leaf" : "") << (supp ? " suppress" : "") << "\n";
  for (const auto& c : node.children)
    if (c && c->true_count > 0) dump_node(*c, ds, tree, ap, total, suppressed);
}

int cmd_inspect(const CommonOpts& common) {
  rs::Table t = load_input(common);
  std::vector<std::string> cols = resolve_columns(t, common);
  if (static_cast<int>(cols.size()) > common.max_dim)
    throw CLI::ValidationError("--columns", "inspect is limited to --max-dim columns");

  rs::SynthesisOptions opt = make_options(common);
  rs::Dataset ds = rs::make_dataset(t, cols, opt.table_name);
  std::vector<std::vector<int>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << cols.size()); ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(static_cast<int>(i));
    subsets.push_back(std::move(s));
  }
  rs::Forest forest(ds, opt.build, opt.anon);
  forest.build(subsets, opt.threads);

  std::size_t total = 0, suppressed = 0;
  for (const auto& [dims, tree] : forest.trees()) {
    std::cout << "tree";
    for (int d : dims) std::cout << " " << cols[static_cast<std::size_t>(d)];
    std::cout << "\n";
    dump_node(*tree->root, ds, *tree, opt.anon, total, suppressed);
  }
  std::cout << "nodes: " << total << ", suppressed: " << suppressed << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anonymous synthetic microdata generator"};
  app.require_subcommand(1);

  CommonOpts syn_o;
  std::string syn_output, ranking_file;
  std::string target_str;
  auto* syn = app.add_subcommand("synthesize", "synthesize an anonymous table");
  add_common(syn, syn_o);
  syn->add_option("--output", syn_output, "output CSV path");
  syn->add_option("--target", target_str, "ML target column; anchors the sub-table plan");
  syn->add_option("--ranking-file", ranking_file,
                  "CSV of column,score pairs overriding the built-in feature ranking");

  std::string q_orig, q_syn, q_output, q_config;
  auto* qual = app.add_subcommand("quality", "score a synthetic table against the original");
  qual->add_option("--original", q_orig, "original CSV path");
  qual->add_option("--synthetic", q_syn, "synthetic CSV path");
  qual->add_option("--output", q_output, "report CSV path (default: stdout)");
  qual->add_option("--config", q_config, "key=value config file; command-line flags win");

  CommonOpts priv_o;
  bool no_anon = false;
  int attacks = 500;
  double confidence_cut = 0.2;
  std::uint64_t priv_seed = 1;
  std::string priv_output;
  auto* priv = app.add_subcommand("privacy", "run the inference-attack evaluation");
  add_common(priv, priv_o);
  priv->add_flag("--no-anon", no_anon, "calibration: attack the raw test half instead");
  priv->add_option("--attacks", attacks, "number of attack iterations");
  priv->add_option("--confidence-cut", confidence_cut, "max confidence half-width to retain");
  priv->add_option("--seed", priv_seed, "attack-suite seed");
  priv->add_option("--output", priv_output, "report CSV path (default: stdout)");

  CommonOpts ins_o;
  auto* ins = app.add_subcommand("inspect", "dump the bucket forest without microdata");
  add_common(ins, ins_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (syn->parsed()) {
      if (!syn_o.config_path.empty()) {
        Setters s = common_setters(syn_o);
        s.emplace_back("output", [&](const std::string& v) { syn_output = v; });
        s.emplace_back("target", [&](const std::string& v) { target_str = v; });
        s.emplace_back("ranking-file", [&](const std::string& v) { ranking_file = v; });
        apply_config(syn, syn_o.config_path, s);
      }
      require_opt("--input", syn_o.input);
      require_opt("--output", syn_output);
      return cmd_synthesize(syn_o, syn_output,
                            target_str.empty() ? std::nullopt
                                               : std::optional<std::string>(target_str),
                            ranking_file);
    }
    if (qual->parsed()) {
      if (!q_config.empty()) {
        Setters s;
        s.emplace_back("original", [&](const std::string& v) { q_orig = v; });
        s.emplace_back("synthetic", [&](const std::string& v) { q_syn = v; });
        s.emplace_back("output", [&](const std::string& v) { q_output = v; });
        apply_config(qual, q_config, s);
      }
      require_opt("--original", q_orig);
      require_opt("--synthetic", q_syn);
      return cmd_quality(q_orig, q_syn, q_output);
    }
    if (priv->parsed()) {
      if (!priv_o.config_path.empty()) {
        Setters s = common_setters(priv_o);
        s.emplace_back("no-anon",
                       [&](const std::string& v) { no_anon = parse_config_bool("no-anon", v); });
        s.emplace_back("attacks",
                       [&](const std::string& v) { attacks = parse_config_int("attacks", v); });
        s.emplace_back("confidence-cut", [&](const std::string& v) {
          confidence_cut = parse_config_double("confidence-cut", v);
        });
        s.emplace_back("seed", [&](const std::string& v) {
          priv_seed = static_cast<std::uint64_t>(parse_config_int("seed", v));
        });
        s.emplace_back("output", [&](const std::string& v) { priv_output = v; });
        apply_config(priv, priv_o.config_path, s);
      }
      require_opt("--input", priv_o.input);
      return cmd_privacy(priv_o, no_anon, attacks, confidence_cut, priv_seed, priv_output);
    }
    if (ins->parsed()) {
      if (!ins_o.config_path.empty())
        apply_config(ins, ins_o.config_path, common_setters(ins_o));
      require_opt("--input", ins_o.input);
      return cmd_inspect(ins_o);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rs::CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rs::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()) == "__empty__") {
      std::cerr << "error: input table has no rows\n";
      return kExitEmpty;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
