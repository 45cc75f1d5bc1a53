#include "hyperset/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hyperset/dot.hpp"
#include "hyperset/dsl.hpp"
#include "hyperset/error.hpp"

namespace hyperset::cli {
namespace {

using nlohmann::json;

// Error tagged with the input it came from, for file:line:col diagnostics.
struct InputError {
  std::string source;
  Error error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

template <typename F>
auto with_source(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError{source, e};
  }
}

json value_json(const HSet& a) { return {{"canon", dsl::print_canonical(a)}, {"code", a.code().hex()}}; }

void emit_value(const HSet& a, Format format, std::ostream& out) {
  switch (format) {
    case Format::Canonical: out << dsl::print_canonical(a) << '\n'; break;
    case Format::Dot: out << to_dot(picture(a)); break;
    case Format::Json: out << value_json(a).dump(2) << '\n'; break;
  }
}

struct LoadedSystem {
  dsl::SystemAst ast;
  Solution solution;
};

LoadedSystem load_and_solve(const std::string& path, const Limits& limits) {
  const std::string text = read_file(path);
  return with_source(path, [&] {
    LoadedSystem s{dsl::parse_system(text), {}};
    s.solution = solve_generalized(dsl::to_gen_system(s.ast, limits), limits);
    return s;
  });
}

HSet binding_value(const LoadedSystem& s, const std::string& name, const std::string& path) {
  for (const auto& b : s.ast.bindings)
    if (b.name == name) return s.solution.at(name);
  throw InputError{path, Error(Errc::UnknownName, "no binding named '" + name + "'")};
}

HSet expression_arg(const std::string& text, const std::string& label, const Limits& limits) {
  return with_source(label, [&] { return dsl::evaluate(text, limits); });
}

std::optional<std::size_t> env_budget() {
  const char* raw = std::getenv("HYPERSET_NODE_BUDGET");
  if (!raw || !*raw) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size() || v == 0) return std::nullopt;
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void print_diagnostic(std::ostream& err, const std::string& source, const Error& e) {
  err << source;
  if (e.where().line > 0) err << ':' << e.where().line << ':' << e.where().column;
  err << ": error: " << errc_name(e.code()) << ": " << e.what() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-well-founded sets: solve systems of set equations, compare and inspect hypersets",
               "hyperset"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig config;
  if (auto budget = env_budget()) config.limits.node_budget = *budget;
  std::size_t node_budget = config.limits.node_budget;
  std::size_t power_set_bound = config.limits.power_set_bound;
  std::string format_name = "canonical";
  app.add_option("--node-budget", node_budget, "Maximum nodes in any graph")
      ->check(CLI::PositiveNumber);
  app.add_option("--power-set-bound", power_set_bound, "Maximum members for power sets")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"canonical", "dot", "json"}));

  std::string file, var, expr_a, expr_b, output;
  std::vector<std::string> files, vars;

  auto* solve_cmd = app.add_subcommand("solve", "Solve every binding of a system file");
  solve_cmd->add_option("FILE", file)->required();
  solve_cmd->add_option("--var", var, "Print only this binding");

  auto* eq_cmd = app.add_subcommand("eq", "Exit 0 if two values are equal, 1 otherwise");
  eq_cmd->add_option("EXPR1", expr_a);
  eq_cmd->add_option("EXPR2", expr_b);
  eq_cmd->add_option("--files", files, "Compare bindings of two system files")->expected(2);
  eq_cmd->add_option("--var", vars, "Binding names, one per file")->expected(1, 2);

  std::string value_expr;
  auto* tc_cmd = app.add_subcommand("tc", "Transitive closure");
  auto* support_cmd = app.add_subcommand("support", "Atoms occurring in a value");
  auto* wf_cmd = app.add_subcommand("wf", "Whether a value is well-founded");
  auto* canon_cmd = app.add_subcommand("canon", "Canonical form and code");
  auto* picture_cmd = app.add_subcommand("picture", "Write the minimal picture as DOT");
  for (auto* c : {tc_cmd, support_cmd, wf_cmd, canon_cmd, picture_cmd})
    c->add_option("EXPR", value_expr)->required();
  picture_cmd->add_option("-o,--output", output, "Output file");

  auto* decorate_cmd = app.add_subcommand("decorate", "Decorate every node of a DOT graph");
  decorate_cmd->add_option("FILE", file)->required();
  auto* minimize_cmd = app.add_subcommand("minimize", "Quotient a DOT graph by bisimulation");
  minimize_cmd->add_option("FILE", file)->required();
  minimize_cmd->add_option("-o,--output", output, "Output file");

  auto* check_cmd = app.add_subcommand("check", "Validate a system without solving it");
  check_cmd->add_option("FILE", file)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUserError;
  }

  config.limits.node_budget = node_budget;
  config.limits.power_set_bound = power_set_bound;
  config.format = format_name == "dot" ? Format::Dot : format_name == "json" ? Format::Json : Format::Canonical;
  const Limits& limits = config.limits;

  try {
    if (*solve_cmd) {
      const LoadedSystem s = load_and_solve(file, limits);
      std::vector<std::string> names;
      if (!var.empty()) {
        binding_value(s, var, file);
        names.push_back(var);
      } else {
        for (const auto& b : s.ast.bindings) names.push_back(b.name);
      }
      if (config.format == Format::Json) {
        json j = json::object();
        for (const auto& n : names) j[n] = value_json(s.solution.at(n));
        out << j.dump(2) << '\n';
      } else if (config.format == Format::Dot) {
        for (const auto& n : names) {
          if (names.size() > 1) out << "// " << n << '\n';
          out << to_dot(picture(s.solution.at(n)));
        }
      } else {
        for (const auto& n : names) out << n << " = " << dsl::print_expr(s.solution.at(n)) << '\n';
      }
      return kOk;
    }

    if (*eq_cmd) {
      HSet left, right;
      if (!files.empty()) {
        if (!expr_a.empty()) throw std::runtime_error("give either two expressions or --files, not both");
        if (vars.empty()) throw std::runtime_error("--files needs --var");
        const std::string& va = vars[0];
        const std::string& vb = vars.size() > 1 ? vars[1] : vars[0];
        left = binding_value(load_and_solve(files[0], limits), va, files[0]);
        right = binding_value(load_and_solve(files[1], limits), vb, files[1]);
      } else {
        if (expr_a.empty() || expr_b.empty()) throw std::runtime_error("eq needs two expressions");
        left = expression_arg(expr_a, "<expr1>", limits);
        right = expression_arg(expr_b, "<expr2>", limits);
      }
      const bool same = left == right;
      out << (same ? "equal" : "not equal") << '\n';
      return same ? kOk : kNotEqual;
    }

    if (*tc_cmd) {
      emit_value(tc(expression_arg(value_expr, "<expr>", limits), limits), config.format, out);
      return kOk;
    }
    if (*support_cmd) {
      const AtomSet atoms = support(expression_arg(value_expr, "<expr>", limits));
      std::vector<std::string> names;
      for (const Atom& a : atoms) names.push_back(a.name());
      std::sort(names.begin(), names.end());
      if (config.format == Format::Json) {
        out << json{{"atoms", names}}.dump(2) << '\n';
      } else {
        out << '{';
        for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << names[i];
        out << "}\n";
      }
      return kOk;
    }
    if (*wf_cmd) {
      const bool wf = is_well_founded_set(expression_arg(value_expr, "<expr>", limits));
      if (config.format == Format::Json)
        out << json{{"well_founded", wf}}.dump(2) << '\n';
      else
        out << (wf ? "true" : "false") << '\n';
      return kOk;
    }
    if (*canon_cmd) {
      const HSet a = expression_arg(value_expr, "<expr>", limits);
      if (config.format == Format::Canonical)
        out << dsl::print_canonical(a) << '\n' << a.code().hex() << '\n';
      else
        emit_value(a, config.format, out);
      return kOk;
    }
    if (*picture_cmd) {
      write_output(output, to_dot(picture(expression_arg(value_expr, "<expr>", limits))), out);
      return kOk;
    }

    if (*decorate_cmd) {
      const std::string text = read_file(file);
      const DotGraph dg = with_source(file, [&] { return parse_dot(text, limits); });
      const std::vector<Element> deco = decorate(dg.graph);
      if (config.format == Format::Json) {
        json nodes = json::object();
        for (NodeId v = 0; v < deco.size(); ++v) {
          if (const HSet* s = as_set(deco[v]))
            nodes[dg.names[v]] = value_json(*s);
          else
            nodes[dg.names[v]] = {{"atom", as_atom(deco[v])->name()}};
        }
        out << json{{"root", dg.names[dg.graph.root()]}, {"nodes", nodes}}.dump(2) << '\n';
      } else {
        for (NodeId v = 0; v < deco.size(); ++v) {
          out << dg.names[v] << " = " << dsl::print_element(deco[v]);
          if (const HSet* s = as_set(deco[v])) {
            try {
              out << "  # " << as_natural(*s);
            } catch (const Error&) {
            }
          }
          out << '\n';
        }
        out << "root = " << dg.names[dg.graph.root()] << '\n';
      }
      return kOk;
    }

    if (*minimize_cmd) {
      const std::string text = read_file(file);
      const ApGraph g = with_source(file, [&] { return from_dot(text, limits); });
      write_output(output, to_dot(quotient(g)), out);
      return kOk;
    }

    if (*check_cmd) {
      const std::string text = read_file(file);
      return with_source(file, [&] {
        const dsl::SystemAst ast = dsl::parse_system(text);
        const GenSystem g = dsl::to_gen_system(ast, limits);
        const bool wf = is_well_founded_system(flatten(g).system);
        out << "bindings: " << ast.bindings.size() << '\n'
            << "atoms: " << ast.atoms.size() << '\n'
            << "form: " << (dsl::is_flat(ast) ? "flat" : "generalized") << '\n'
            << "well-founded: " << (wf ? "yes" : "no") << '\n';
        return kOk;
      });
    }
  } catch (const InputError& e) {
    print_diagnostic(err, e.source, e.error);
    return e.error.is_resource_limit() ? kLimitError : kUserError;
  } catch (const Error& e) {
    print_diagnostic(err, "hyperset", e);
    return e.is_resource_limit() ? kLimitError : kUserError;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kLimitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUserError;
  }
  return kUserError;
}

}  // namespace hyperset::cli
