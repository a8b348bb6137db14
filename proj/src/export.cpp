#include "dphase/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dphase/error.hpp"

namespace dphase {

using json = nlohmann::ordered_json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Non-finite reals become null so the document stays valid JSON.
json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nehari_json(const NehariClass& n) {
  return json{{"set", std::string(to_string(n.set))}, {"dpsi", real(n.dpsi)}, {"ddpsi", real(n.ddpsi)},
              {"tol", real(n.tol)}};
}

json residual_json(const ResidualReport& r) {
  return json{{"residual_norm", real(r.residual_norm)},
              {"worst_node", r.worst_node},
              {"operator_term", real(r.operator_term)},
              {"singular_term", real(r.singular_term)},
              {"superlinear_term", real(r.superlinear_term)}};
}

json result_json(const SolveResult& r) {
  return json{{"branch", std::string(to_string(r.branch))},
              {"start", r.start},
              {"energy", real(r.energy)},
              {"nehari", nehari_json(r.nehari)},
              {"residual", residual_json(r.residual)},
              {"iterations", r.iterations},
              {"floor_activations", r.floor_activations},
              {"converged", r.converged},
              {"min_u", real(r.u.size() > 0 ? r.u.min() : 0.0)},
              {"max_u", real(r.u.size() > 0 ? r.u.max() : 0.0)},
              {"message", r.message}};
}

}  // namespace

std::string fiber_csv(const FiberTerms& ft, double lambda, double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
    throw Error(ErrorCode::InvalidArgument, "fiber grid needs 0 < t_min < t_max and at least 2 points");
  }
  const bool has_tilde = ft.a > 0.0 && ft.d > 0.0;
  std::string out = "t,psi,dpsi,ddpsi,eta,eta_tilde\n";
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int k = 0; k < points; ++k) {
    const double t = k == 0 ? t_min : k == points - 1 ? t_max : std::exp(l0 + (l1 - l0) * k / (points - 1));
    const PsiValues pv = psi_derivatives(ft, lambda, t);
    out += format_real(t) + ',' + format_real(pv.psi) + ',' + format_real(pv.dpsi) + ',' + format_real(pv.ddpsi) +
           ',' + format_real(eta(ft, t)) + ',' + (has_tilde ? format_real(eta_tilde(ft, t)) : std::string()) + '\n';
  }
  return out;
}

std::string solution_csv(const Mesh& mesh, const DiscreteFunction& u) {
  if (u.size() != mesh.node_count()) throw Error(ErrorCode::InvalidArgument, "function does not match the mesh");
  std::string out = "node,x,y,value\n";
  const auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < u.size(); ++i) {
    out += std::to_string(i) + ',' + format_real(nodes[i].x) + ',' + format_real(nodes[i].y) + ',' +
           format_real(u[i]) + '\n';
  }
  return out;
}

std::string solve_json(const Discretization& disc, const TwoSolutions& two, const std::string& u_file,
                       const std::string& v_file) {
  json doc;
  doc["lambda"] = real(two.lambda);
  doc["nodes"] = disc.node_count();
  const auto best = [&](const std::optional<SolveResult>& r, const std::string& file) {
    if (!r) return json(nullptr);
    json j = result_json(*r);
    j["u"] = file;
    return j;
  };
  doc["u_lambda"] = best(two.u_lambda, u_file);
  doc["v_lambda"] = best(two.v_lambda, v_file);
  doc["sign_pattern_ok"] = two.sign_pattern_ok;
  json plus = json::array(), minus = json::array();
  for (const auto& r : two.plus_runs) plus.push_back(result_json(r));
  for (const auto& r : two.minus_runs) minus.push_back(result_json(r));
  doc["plus_runs"] = plus;
  doc["minus_runs"] = minus;
  doc["failures"] = two.failures;
  return doc.dump(2) + "\n";
}

std::string sweep_json(const SweepReport& rep) {
  json doc;
  doc["lambda_tilde_est"] = real(rep.lambda_tilde_est);
  doc["lambda_tilde_note"] = "minimum over the sample set; an upper bound for the uniform threshold";
  doc["lambda_tilde_skipped"] = rep.lambda_tilde_skipped;
  json ev = json::array();
  for (const auto& e : rep.lambda_hat_evidence) {
    ev.push_back(json{{"lambda", real(e.lambda)},
                      {"tangency_found", e.status == NzeroStatus::TangencyFound},
                      {"status", std::string(to_string(e.status))},
                      {"tangent", e.tangent},
                      {"two_root", e.two_root},
                      {"no_root", e.no_root},
                      {"skipped", e.skipped}});
  }
  doc["lambda_hat_evidence"] = ev;
  doc["lambda_star_est"] = real(rep.lambda_star_est);
  json probes = json::array();
  for (const auto& p : rep.lambda_star.probes) {
    probes.push_back(json{{"lambda", real(p.lambda)},
                          {"determined", p.determined},
                          {"positive", p.positive},
                          {"min_energy", real(p.min_energy)},
                          {"note", p.note}});
  }
  doc["lambda_star"] = json{{"determined", rep.lambda_star.determined},
                            {"undetermined_at", rep.lambda_star.undetermined_at
                                                    ? real(*rep.lambda_star.undetermined_at)
                                                    : json(nullptr)},
                            {"probes", probes}};
  doc["sobolev_S_est"] = real(rep.sobolev_S_est);
  doc["sobolev"] = json{{"sample_min", real(rep.sobolev.sample_min)}, {"polish_steps", rep.sobolev.polish_steps}};
  doc["samples"] = rep.samples;
  doc["seed"] = rep.seed;
  doc["ordering_ok"] = rep.ordering_ok;
  doc["ordering_note"] = rep.ordering_note;
  return doc.dump(2) + "\n";
}

std::string sweep_samples_csv(const SweepReport& rep) {
  std::string out = "index,a,b,c,d,e,admitted,t_tilde_circ,eta_tilde_max,lambda_tilde,t_circ,eta_circ,lambda_two_root\n";
  for (const auto& s : rep.per_sample) {
    out += std::to_string(s.index) + ',' + format_real(s.terms.a) + ',' + format_real(s.terms.b) + ',' +
           format_real(s.terms.c) + ',' + format_real(s.terms.d) + ',' + format_real(s.terms.e) + ',' +
           (s.admitted ? "1" : "0") + ',' + format_real(s.t_tilde_circ) + ',' + format_real(s.eta_tilde_max) + ',' +
           format_real(s.lambda_tilde) + ',' + format_real(s.t_circ) + ',' + format_real(s.eta_circ) + ',' +
           format_real(s.lambda_two_root) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace dphase
