// cqdp: privacy checks, Fisher frontiers, witness constructions and
// non-classicality certificates for tuples of states, from the command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqdp/cqdp.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // a check ran and the verdict was negative
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cqdp::ParseError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cqdp::ParseError("cannot open output file: " + path);
  out << content;
}

double num(const std::string& text) { return cqdp::parse_number_literal(text); }

std::vector<double> num_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(num(item));
  if (out.empty()) throw cqdp::ParseError("empty number list");
  return out;
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : num_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

void print(const ordered_json& j) { std::cout << j.dump(2) << std::endl; }

int run_verify(const std::string& input, const std::string& eps_str, const std::string& tol_str) {
  const double eps = num(eps_str);
  const double tol = num(tol_str);
  const cqdp::TupleDocument doc = cqdp::parse_tuple(read_file(input));

  cqdp::DpReport rep;
  std::optional<double> min_eps;
  if (doc.is_classical()) {
    rep = cqdp::classical_dp_report(doc.classical(), eps, tol);
    min_eps = cqdp::min_epsilon(doc.classical());
  } else {
    rep = cqdp::cq_dp_report(doc.density(), eps, tol);
    min_eps = cqdp::min_epsilon(doc.density());
  }

  ordered_json out;
  out["command"] = "verify";
  out["kind"] = doc.is_classical() ? "classical" : "density";
  out["eps"] = eps;
  out["tol"] = tol;
  out["is_dp"] = rep.ok;
  out["min_epsilon"] = min_eps ? ordered_json(*min_eps) : ordered_json(nullptr);
  out["worst_pair"] = {rep.worst_i + 1, rep.worst_j + 1};
  out["worst_eigenvalue"] = rep.worst_value;
  print(out);
  return rep.ok ? kExitOk : kExitNegative;
}

int run_fisher(const std::string& input, const std::string& theta_str) {
  const cqdp::Theta theta(num(theta_str));
  const cqdp::TupleDocument doc = cqdp::parse_tuple(read_file(input));
  const int n = doc.is_classical() ? doc.classical().size() : doc.density().size();

  ordered_json matrix = ordered_json::array();
  ordered_json infinite_pairs = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        row.push_back(0.0);
        continue;
      }
      if (doc.is_classical()) {
        const cqdp::FisherResult r =
            cqdp::fisher_classical(theta, doc.classical()[i], doc.classical()[j]);
        if (r.infinite) {
          row.push_back(nullptr);
          infinite_pairs.push_back({i + 1, j + 1});
        } else {
          row.push_back(r.value);
        }
      } else {
        try {
          row.push_back(cqdp::fisher_quantum(theta, doc.density()[i], doc.density()[j]).value);
        } catch (const cqdp::NotPositiveDefinite&) {
          row.push_back(nullptr);
          infinite_pairs.push_back({i + 1, j + 1});
        }
      }
    }
    matrix.push_back(std::move(row));
  }

  ordered_json out;
  out["command"] = "fisher";
  out["kind"] = doc.is_classical() ? "classical" : "density";
  out["theta"] = theta.value();
  out["n"] = n;
  out["pairwise"] = std::move(matrix);
  out["infinite_pairs"] = std::move(infinite_pairs);
  print(out);
  return kExitOk;
}

int run_classical_max(int n, const std::string& eps_str, const std::string& theta_str,
                      const std::string& method) {
  const double eps = num(eps_str);
  const cqdp::Theta theta(num(theta_str));

  ordered_json out;
  out["command"] = "classical-max";
  out["n"] = n;
  out["eps"] = eps;
  out["theta"] = theta.value();
  out["method"] = method;

  if (method == "closed") {
    out["value"] = cqdp::classical_max(n, eps, theta);
    out["best_k"] = cqdp::best_group_size(n, eps);
  } else if (method == "lp") {
    const cqdp::LPSolution sol = cqdp::lp_supremum(n, eps, cqdp::fisher_pair_objective(n, theta));
    out["value"] = sol.objective / (static_cast<double>(n) * (n - 1));
    out["objective"] = sol.objective;
    out["residual"] = sol.residual;
    ordered_json weights = ordered_json::array();
    for (const auto& [mask, w] : sol.weights) {
      std::string pattern(n, '0');
      for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1u) pattern[i] = '1';
      weights.push_back({{"pattern", pattern}, {"weight", w}});
    }
    out["weights"] = std::move(weights);
  } else if (method == "grouped") {
    const cqdp::GroupedSolution sol = cqdp::grouped_supremum(
        n, eps, [&](double a, double b) { return cqdp::fisher_kernel(theta, a, b); });
    out["value"] = sol.objective / (static_cast<double>(n) * (n - 1));
    out["best_k"] = sol.best_k;
    out["beta"] = sol.beta;
  } else {
    throw cqdp::InvalidInput("unknown method \"" + method + "\" (closed|lp|grouped)");
  }
  print(out);
  return kExitOk;
}

int run_construct_classical(int n, int k, const std::string& eps_str, const std::string& out_path) {
  const double eps = num(eps_str);
  const cqdp::ClassicalTuple t = cqdp::extremal_tuple(n, k, eps);
  write_file(out_path,
             cqdp::emit_tuple(t, eps,
                              {{"construction", "frontier-extremal"},
                               {"n", std::to_string(n)},
                               {"k", std::to_string(k)}}));
  ordered_json out;
  out["command"] = "construct-classical";
  out["n"] = n;
  out["k"] = k;
  out["eps"] = eps;
  out["dim"] = t.dim();
  out["out"] = out_path;
  print(out);
  return kExitOk;
}

int run_construct_witness(int d, const std::string& eps_str, const std::string& c_str,
                          const std::string& t_str, bool use_t_max, bool real_system,
                          const std::string& out_path) {
  const double eps = num(eps_str);
  const double c = num(c_str);
  const cqdp::WitnessParams params = cqdp::witness_params(eps, c);
  double t = params.t_max;
  if (!use_t_max) {
    if (t_str.empty())
      throw cqdp::InvalidInput("construct-witness needs --t VALUE or --t-max");
    t = num(t_str);
  }
  const cqdp::UnitVectorSystem sys =
      real_system ? cqdp::equiangular_real(d, c) : cqdp::equiangular_complex(d, c);
  const cqdp::DensityTuple tuple = cqdp::witness_tuple(sys, t);
  write_file(out_path,
             cqdp::emit_tuple(tuple, eps,
                              {{"construction", real_system ? "equiangular-real" : "equiangular-complex"},
                               {"d", std::to_string(d)},
                               {"c", cqdp::format_number(c)},
                               {"t", cqdp::format_number(t)},
                               {"t_max", cqdp::format_number(params.t_max)}}));
  ordered_json out;
  out["command"] = "construct-witness";
  out["d"] = d;
  out["count"] = tuple.size();
  out["eps"] = eps;
  out["c"] = c;
  out["t"] = t;
  out["t_max"] = params.t_max;
  out["out"] = out_path;
  print(out);
  return kExitOk;
}

int run_certify(const std::string& input, const std::string& eps_str, int theta_points,
                const std::string& margin_tol_str, const std::string& dp_tol_str,
                const std::string& subset_str) {
  const double eps = num(eps_str);
  const cqdp::TupleDocument doc = cqdp::parse_tuple(read_file(input));
  const cqdp::DensityTuple tuple =
      doc.is_classical() ? cqdp::diag_embedding(doc.classical()) : doc.density();

  cqdp::CertifyOptions opt;
  opt.theta_grid = cqdp::default_theta_grid(theta_points);
  opt.margin_tol = num(margin_tol_str);
  opt.dp_tol = num(dp_tol_str);
  if (!subset_str.empty()) {
    for (int idx : int_list(subset_str)) opt.subset.push_back(idx - 1);  // states are 1-based
  }

  const cqdp::Certificate cert = cqdp::certify(tuple, eps, opt);

  ordered_json out;
  out["command"] = "certify";
  out["verdict"] = cqdp::to_string(cert.verdict);
  out["eps"] = cert.eps;
  out["n"] = cert.n;
  ordered_json subset = ordered_json::array();
  for (int idx : cert.subset) subset.push_back(idx + 1);
  out["subset"] = std::move(subset);
  out["dp_verified"] = cert.dp_verified;
  out["dp_tol"] = cert.dp_tol;
  out["margin_tol"] = cert.margin_tol;
  out["best_theta"] = cert.best_theta;
  out["avg_fisher"] = cert.avg_fisher;
  out["classical_bound"] = cert.classical_bound;
  out["margin"] = cert.margin;
  out["theta_points"] = static_cast<int>(cert.per_theta.size() + cert.skipped_thetas.size());
  out["skipped_thetas"] = cert.skipped_thetas;
  ordered_json per_theta = ordered_json::array();
  for (const auto& row : cert.per_theta)
    per_theta.push_back({{"theta", row.theta},
                         {"avg_fisher", row.avg_fisher},
                         {"classical_bound", row.classical_bound},
                         {"margin", row.margin}});
  out["per_theta"] = std::move(per_theta);
  print(out);
  return cert.verdict == cqdp::Verdict::NotInEC ? kExitOk : kExitNegative;
}

int run_sweep(const std::string& quantity, const std::string& eps_list,
              const std::string& theta_list, const std::string& n_list,
              const std::string& c_list, const std::string& out_path) {
  const std::vector<double> epses = num_list(eps_list);
  const std::vector<double> thetas = num_list(theta_list);
  const std::vector<int> ns = int_list(n_list);
  const std::vector<double> cs = num_list(c_list);

  std::vector<cqdp::SweepRow> rows;
  if (quantity == "m2") {
    for (double eps : epses)
      for (double th : thetas)
        rows.push_back({.eps = eps, .theta = th, .n = {}, .d = {}, .c = {}, .t = {},
                        .quantity = quantity,
                        .value = cqdp::classical_max_pair(eps, cqdp::Theta(th))});
  } else if (quantity == "mnc") {
    for (int n : ns)
      for (double eps : epses)
        for (double th : thetas)
          rows.push_back({.eps = eps, .theta = th, .n = n, .d = {}, .c = {}, .t = {},
                          .quantity = quantity,
                          .value = cqdp::classical_max(n, eps, cqdp::Theta(th))});
  } else if (quantity == "gap-ratio") {
    for (double eps : epses)
      rows.push_back({.eps = eps, .theta = {}, .n = {}, .d = {}, .c = {}, .t = {},
                      .quantity = quantity, .value = cqdp::gap_ratio(eps)});
  } else if (quantity == "thm1-margin") {
    for (double eps : epses)
      rows.push_back({.eps = eps, .theta = {}, .n = {}, .d = {}, .c = {}, .t = {},
                      .quantity = quantity, .value = cqdp::canonical_witness_margin(eps)});
  } else if (quantity == "cq-limit") {
    for (int n : ns)
      for (double eps : epses)
        for (double th : thetas) {
          const auto sweep = cqdp::witness_limit_sweep(eps, cqdp::Theta(th), n, cs);
          for (const auto& [c, value] : sweep)
            rows.push_back({.eps = eps, .theta = th, .n = n, .d = {}, .c = c,
                            .t = cqdp::witness_params(eps, c).t_max,
                            .quantity = quantity, .value = value});
        }
  } else {
    throw cqdp::InvalidInput("unknown quantity \"" + quantity +
                             "\" (mnc|m2|gap-ratio|thm1-margin|cq-limit)");
  }

  write_file(out_path, cqdp::sweep_csv(rows));
  ordered_json out;
  out["command"] = "sweep";
  out["quantity"] = quantity;
  out["rows"] = rows.size();
  out["out"] = out_path;
  print(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical-quantum differential privacy toolkit"};
  app.require_subcommand(1);

  // verify
  std::string v_input, v_eps, v_tol = "1e-9";
  CLI::App* verify = app.add_subcommand("verify", "check differential privacy of a tuple file");
  verify->add_option("--input", v_input, "tuple document (JSON)")->required();
  verify->add_option("--eps", v_eps, "privacy parameter (accepts ln-literals like ln2)")->required();
  verify->add_option("--tol", v_tol, "eigenvalue tolerance");

  // fisher
  std::string f_input, f_theta;
  CLI::App* fisher = app.add_subcommand("fisher", "pairwise Fisher information matrix");
  fisher->add_option("--input", f_input, "tuple document (JSON)")->required();
  fisher->add_option("--theta", f_theta, "family parameter in [0,1]")->required();

  // classical-max
  int m_n = 0;
  std::string m_eps, m_theta, m_method = "closed";
  CLI::App* cmax = app.add_subcommand("classical-max", "classical frontier value");
  cmax->add_option("--n", m_n, "tuple arity")->required();
  cmax->add_option("--eps", m_eps)->required();
  cmax->add_option("--theta", m_theta)->required();
  cmax->add_option("--method", m_method, "closed|lp|grouped");

  // construct-classical
  int cc_n = 0, cc_k = 0;
  std::string cc_eps, cc_out;
  CLI::App* cclassical = app.add_subcommand("construct-classical", "frontier-achieving classical tuple");
  cclassical->add_option("--n", cc_n)->required();
  cclassical->add_option("--k", cc_k)->required();
  cclassical->add_option("--eps", cc_eps)->required();
  cclassical->add_option("--out", cc_out, "output tuple file")->required();

  // construct-witness
  int cw_d = 0;
  std::string cw_eps, cw_c, cw_t, cw_out;
  bool cw_tmax = false, cw_real = false, cw_complex = false;
  CLI::App* cwitness = app.add_subcommand("construct-witness", "equiangular witness tuple");
  cwitness->add_option("--d", cw_d, "state dimension")->required();
  cwitness->add_option("--eps", cw_eps)->required();
  cwitness->add_option("--c", cw_c, "pairwise coherence")->required();
  cwitness->add_option("--t", cw_t, "perturbation strength");
  cwitness->add_flag("--t-max", cw_tmax, "use the largest private strength");
  cwitness->add_flag("--real", cw_real, "real system: d vectors in R^d");
  cwitness->add_flag("--complex", cw_complex, "complex system: d+1 vectors in C^d (default)");
  cwitness->add_option("--out", cw_out, "output tuple file")->required();

  // certify
  std::string ce_input, ce_eps, ce_margin_tol = "1e-7", ce_dp_tol = "1e-9", ce_subset;
  int ce_theta_points = 41;
  CLI::App* certify_cmd = app.add_subcommand("certify", "non-classicality certificate");
  certify_cmd->add_option("--input", ce_input, "tuple document (JSON)")->required();
  certify_cmd->add_option("--eps", ce_eps)->required();
  certify_cmd->add_option("--theta-points", ce_theta_points, "grid resolution on [0,1]");
  certify_cmd->add_option("--margin-tol", ce_margin_tol, "strictness margin");
  certify_cmd->add_option("--dp-tol", ce_dp_tol, "privacy check tolerance");
  certify_cmd->add_option("--subset", ce_subset, "certify these 1-based states, e.g. 1,2,3");

  // sweep
  std::string s_quantity, s_out, s_eps = "ln2", s_theta = "0.5", s_n = "3",
              s_c = "0.9,0.99,0.999,0.9999";
  CLI::App* sweep = app.add_subcommand("sweep", "write a CSV over a parameter grid");
  sweep->add_option("--quantity", s_quantity, "mnc|m2|gap-ratio|thm1-margin|cq-limit")->required();
  sweep->add_option("--eps", s_eps, "comma list");
  sweep->add_option("--theta", s_theta, "comma list");
  sweep->add_option("--n", s_n, "comma list");
  sweep->add_option("--c", s_c, "comma list (cq-limit only)");
  sweep->add_option("--out", s_out, "output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*verify) return run_verify(v_input, v_eps, v_tol);
    if (*fisher) return run_fisher(f_input, f_theta);
    if (*cmax) return run_classical_max(m_n, m_eps, m_theta, m_method);
    if (*cclassical) return run_construct_classical(cc_n, cc_k, cc_eps, cc_out);
    if (*cwitness) {
      if (cw_real && cw_complex)
        throw cqdp::InvalidInput("choose one of --real / --complex");
      if (!cw_tmax && cw_t.empty())
        throw cqdp::InvalidInput("construct-witness needs --t VALUE or --t-max");
      return run_construct_witness(cw_d, cw_eps, cw_c, cw_t, cw_tmax, cw_real, cw_out);
    }
    if (*certify_cmd)
      return run_certify(ce_input, ce_eps, ce_theta_points, ce_margin_tol, ce_dp_tol, ce_subset);
    if (*sweep) return run_sweep(s_quantity, s_eps, s_theta, s_n, s_c, s_out);
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump(2) << std::endl;
    return kExitError;
  }
  return kExitError;
}
