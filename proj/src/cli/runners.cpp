#include "intertwine/cli/runners.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "intertwine/assignment.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/models.hpp"
#include "intertwine/numlin.hpp"
#include "intertwine/pauli.hpp"
#include "intertwine/scan.hpp"

namespace intertwine::cli {

namespace {

constexpr double kSpanTol = 1e-8;

struct NamedOperators {
  std::vector<EigenOperator> ops;
  std::vector<std::string> names;
  std::size_t conserved = 0;
  bool analytic_basis = false;  // conserved block replaced by closed forms
};

std::vector<ComplexMatrix> matrices(const std::vector<EigenOperator>& ops, std::size_t count) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < count && i < ops.size(); ++i) out.push_back(ops[i].op);
  return out;
}

std::vector<std::string> default_names(std::size_t total, std::size_t conserved, std::size_t dim) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < total; ++i) names.push_back("eta" + std::to_string(i + 1));
  if (dim == 2 && conserved == 2 && total == 4) {
    names[2] = "eta_plus";
    names[3] = "eta_minus";
  }
  return names;
}

// Swap the numerically found conserved basis for the closed-form one when they
// span the same space, so labels like eta1 = sigma_x mean the same thing on
// every run.
void prefer_basis(NamedOperators& named, std::vector<ComplexMatrix> preferred,
                  const std::function<double(const ComplexMatrix&)>& residual, Complex rate) {
  if (preferred.size() != named.conserved) return;
  const auto numeric = matrices(named.ops, named.conserved);
  if (operator_subspace_distance(numeric, preferred) > kSpanTol) return;
  for (std::size_t i = 0; i < preferred.size(); ++i) {
    normalize_operator(preferred[i]);
    EigenOperator& e = named.ops[i];
    e.op = preferred[i];
    e.rate = rate;
    e.hermitian = is_hermitian(e.op);
    e.residual = residual(e.op);
  }
  named.analytic_basis = true;
}

NamedOperators static_operators(const RunConfig& cfg, const ComplexMatrix& h, LiouvillianResult* keep = nullptr) {
  LiouvillianResult res = eigen_operators(h, cfg.tol);
  NamedOperators named;
  named.conserved = res.conserved.size();
  named.ops = res.conserved;
  named.ops.insert(named.ops.end(), res.transient.begin(), res.transient.end());
  named.names = default_names(named.ops.size(), named.conserved, h.rows());
  const Problem& p = cfg.problem;
  if (p.model) {
    const double r = p.params.gamma / p.params.J;
    std::vector<ComplexMatrix> basis = {seed_intertwiner(*p.model)};
    basis.push_back(*p.model == DimerModel::Quantum ? pauli::identity() + r * pauli::y()
                                                    : pauli::identity() - r * pauli::x());
    prefer_basis(named, basis, [&](const ComplexMatrix& op) { return liouvillian_residual(op, h, 0.0); }, 0.0);
  }
  if (keep) *keep = std::move(res);
  return named;
}

std::optional<FloquetCoefficients> closed_form(const Problem& p) {
  if (!p.model) return std::nullopt;
  const Waveform want = default_floquet_waveform(*p.model);
  if (p.params.waveform != want) return std::nullopt;
  return analytic_floquet_coeffs(*p.model, p.params);
}

NamedOperators floquet_operators(const RunConfig& cfg, const ComplexMatrix& gf) {
  NamedOperators named;
  named.ops = floquet_eigen_operators(gf, cfg.tol);
  named.conserved = stroboscopic_conserved(gf, cfg.tol.rank).size();
  named.names = default_names(named.ops.size(), named.conserved, gf.rows());
  const Problem& p = cfg.problem;
  if (const auto c = closed_form(p)) {
    prefer_basis(named, {seed_intertwiner(*p.model), analytic_second_invariant(*p.model, *c)},
                 [&](const ComplexMatrix& op) { return floquet_residual(op, gf, 1.0); }, 1.0);
  }
  return named;
}

Json operator_json(const std::string& name, const EigenOperator& e, const RunConfig& cfg, const char* key) {
  Json j;
  j["label"] = name;
  j[key] = to_json(e.rate);
  j["hermitian"] = e.hermitian;
  j["rank"] = rank(e.op, cfg.tol.rank);
  j["residual"] = e.residual;
  j["operator"] = to_json(e.op);
  return j;
}

Json problem_json(const RunConfig& cfg) {
  const Problem& p = cfg.problem;
  Json j;
  j["source"] = p.source;
  j["dimension"] = p.dim();
  if (p.model) {
    j["model"] = std::string(to_string(*p.model));
    j["J"] = p.params.J;
    j["gamma"] = p.params.gamma;
    j["JT"] = p.params.J * p.params.T;
    j["waveform"] = std::string(to_string(p.params.waveform));
  }
  return j;
}

std::vector<std::filesystem::path> emit(const RunConfig& cfg, const Json& report, const std::string& json_name,
                                        const std::vector<std::pair<std::string, std::string>>& csvs,
                                        const std::vector<std::pair<std::string, std::string>>& scripts) {
  std::vector<std::filesystem::path> files;
  if (cfg.formats.json) {
    files.push_back(cfg.out / json_name);
    write_json(files.back(), report);
  }
  if (cfg.formats.csv) {
    for (const auto& [name, text] : csvs) {
      files.push_back(cfg.out / name);
      write_text(files.back(), text);
    }
  }
  if (cfg.formats.gnuplot) {
    for (const auto& [name, text] : scripts) {
      files.push_back(cfg.out / name);
      write_text(files.back(), text);
    }
  }
  return files;
}

bool single_segment(const Schedule& s) {
  return s.events().size() == 1 && std::holds_alternative<Segment>(s.events().front());
}

}  // namespace

RunOutput run_static(const RunConfig& cfg) {
  const ComplexMatrix& h = *cfg.problem.hamiltonian;
  LiouvillianResult res;
  const NamedOperators named = static_operators(cfg, h, &res);

  ComplexVector computed;
  for (const auto& e : named.ops) computed.push_back(e.rate);
  const ComplexVector predicted = predicted_rates(h, cfg.tol.eig);
  const double lscale = std::max(1.0, frobenius_norm(res.liouvillian));
  std::vector<std::vector<double>> cost(computed.size(), std::vector<double>(predicted.size()));
  for (std::size_t i = 0; i < computed.size(); ++i) {
    for (std::size_t j = 0; j < predicted.size(); ++j) cost[i][j] = std::abs(computed[i] - predicted[j]);
  }
  const auto match = optimal_assignment(cost);

  Json report = problem_json(cfg);
  report["mode"] = "static";
  report["hamiltonian"] = to_json(h);
  report["hamiltonian_eigenvalues"] = to_json(res.hamiltonian_spectrum.eigenvalues);
  report["pt_phase"] = std::string(to_string(classify_pt_phase(h)));
  report["conserved_count"] = named.conserved;
  report["analytic_conserved_basis"] = named.analytic_basis;
  Json ops = Json::array();
  for (std::size_t i = 0; i < named.ops.size(); ++i) ops.push_back(operator_json(named.names[i], named.ops[i], cfg, "rate"));
  report["eigen_operators"] = std::move(ops);

  CsvWriter csv({"index", "label", "re_rate", "im_rate", "re_predicted", "im_predicted", "abs_diff"});
  double worst = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    const Complex q = predicted[match[i]];
    const double d = std::abs(computed[i] - q);
    worst = std::max(worst, d);
    csv.row()
        .cell(static_cast<int>(i))
        .cell(named.names[i])
        .cell(computed[i].real())
        .cell(computed[i].imag())
        .cell(q.real())
        .cell(q.imag())
        .cell(d);
  }
  report["predicted_rates"] = to_json(predicted);
  report["spectrum_pairing_max_distance"] = worst;
  report["spectrum_pairing_relative"] = worst / lscale;

  const Problem& p = cfg.problem;
  if (p.model && std::abs(p.params.delta()) > 1e-9 * p.params.J) {
    const EtaPair eta = analytic_eta_pm(*p.model, p.params);
    Json a;
    a["rate_plus"] = to_json(eta.rate_plus);
    a["rate_minus"] = to_json(eta.rate_minus);
    a["residual_plus"] = liouvillian_residual(eta.eta_plus, h, eta.rate_plus);
    a["residual_minus"] = liouvillian_residual(eta.eta_minus, h, eta.rate_minus);
    a["hermitian_plus"] = is_hermitian(eta.eta_plus, 1e-12);
    a["hermitian_minus"] = is_hermitian(eta.eta_minus, 1e-12);
    report["analytic_eta_pm"] = std::move(a);
  }

  std::ostringstream gp;
  gp << "set datafile separator ','\nset key autotitle columnhead\n"
     << "set xlabel 'Re rate'\nset ylabel 'Im rate'\n"
     << "plot 'static_spectrum.csv' using 3:4 with points pt 7 title 'Liouvillian', \\\n"
     << "     '' using 5:6 with points pt 6 ps 2 title 'predicted'\n";
  RunOutput out;
  out.report = std::move(report);
  out.files = emit(cfg, out.report, "static.json", {{"static_spectrum.csv", csv.str()}}, {{"static_spectrum.gp", gp.str()}});
  return out;
}

RunOutput run_floquet(const RunConfig& cfg) {
  const Schedule& schedule = *cfg.problem.schedule;
  const FloquetPropagator fp = propagator(schedule);
  const NamedOperators named = floquet_operators(cfg, fp.gf);
  const ComplexMatrix& gf = fp.gf;
  const double gscale = std::max(1.0, frobenius_norm(gf));

  Json report = problem_json(cfg);
  report["mode"] = "floquet";
  report["period"] = schedule.period();
  report["propagator"] = to_json(gf);
  report["kappa"] = to_json(fp.kappa.eigenvalues);
  report["pt_phase"] = std::string(to_string(fp.phase));
  report["conserved_count"] = named.conserved;
  report["analytic_conserved_basis"] = named.analytic_basis;
  Json ops = Json::array();
  CsvWriter csv({"index", "label", "re_lambda", "im_lambda", "abs_lambda", "hermitian", "residual"});
  for (std::size_t i = 0; i < named.ops.size(); ++i) {
    const auto& e = named.ops[i];
    ops.push_back(operator_json(named.names[i], e, cfg, "lambda"));
    csv.row()
        .cell(static_cast<int>(i))
        .cell(named.names[i])
        .cell(e.rate.real())
        .cell(e.rate.imag())
        .cell(std::abs(e.rate))
        .cell(e.hermitian)
        .cell(e.residual);
  }
  report["eigen_operators"] = std::move(ops);

  // Recursive construction from the first invariant: each independent candidate
  // must land back inside the conserved span.
  if (named.conserved > 0) {
    const Problem& p = cfg.problem;
    ComplexMatrix seed = named.ops[0].op;
    if (p.model && floquet_residual(seed_intertwiner(*p.model), gf, 1.0) <= 1e-8 * gscale) {
      seed = seed_intertwiner(*p.model);
    }
    const auto cand = recursive_floquet(seed, gf);
    const auto conserved = matrices(named.ops, named.conserved);
    auto describe = [&](const ComplexMatrix& op, bool independent) {
      Json j;
      j["operator"] = to_json(op);
      j["independent"] = independent;
      j["residual"] = floquet_residual(op, gf, 1.0);
      std::vector<ComplexMatrix> grown = conserved;
      grown.push_back(op);
      j["distance_from_conserved_span"] =
          frobenius_norm(op) > 0.0 ? operator_subspace_distance(conserved, grown) : 0.0;
      return j;
    };
    Json rec;
    rec["seed"] = to_json(seed);
    rec["symmetrized"] = describe(cand.symmetrized, cand.symmetrized_independent);
    rec["antisymmetrized"] = describe(cand.antisymmetrized, cand.antisymmetrized_independent);
    report["recursive"] = std::move(rec);
  }

  if (const auto c = closed_form(cfg.problem)) {
    const DimerModel model = *cfg.problem.model;
    Json cf;
    cf["g0"] = c->g0;
    cf["gx"] = c->gx;
    cf["gy"] = c->gy;
    if (model == DimerModel::Classical) cf["gz"] = c->gz;
    cf["imag_residue"] = c->imag_residue;
    cf["propagator_difference"] = frobenius_norm(gf - compose_propagator(model, *c)) / gscale;
    if (model == DimerModel::Classical) {
      const ComplexMatrix eta1 = pauli::y();
      const ComplexMatrix target =
          Complex{0.0, -0.5} * (matmul(eta1, gf) - matmul(adjoint(gf), eta1));
      const ComplexMatrix text = analytic_second_invariant(model, *c);
      const ComplexMatrix caption = c->gy * pauli::identity() + c->gx * pauli::z() - c->gz * pauli::x();
      const double dt = frobenius_norm(target - text) / gscale;
      const double dc = frobenius_norm(target - caption) / gscale;
      cf["eta2_text_form_difference"] = dt;
      cf["eta2_caption_form_difference"] = dc;
      cf["eta2_matching_form"] = dt <= 1e-10 ? (dc <= 1e-10 ? "both" : "text") : (dc <= 1e-10 ? "caption" : "neither");
    }
    report["closed_form"] = std::move(cf);
  }

  std::ostringstream gp;
  gp << "set datafile separator ','\nset key autotitle columnhead\nset size ratio -1\n"
     << "set xlabel 'Re lambda'\nset ylabel 'Im lambda'\nset parametric\nset trange [0:2*pi]\n"
     << "plot cos(t),sin(t) notitle lc rgb 'gray', \\\n"
     << "     'floquet_multipliers.csv' using 3:4 with points pt 7 title 'multipliers'\n";
  RunOutput out;
  out.report = std::move(report);
  out.files =
      emit(cfg, out.report, "floquet.json", {{"floquet_multipliers.csv", csv.str()}}, {{"floquet_multipliers.gp", gp.str()}});
  return out;
}

RunOutput run_trace(const RunConfig& cfg) {
  const Schedule& schedule = *cfg.problem.schedule;
  const bool is_static = single_segment(schedule);
  NamedOperators named;
  std::vector<TraceLabel> labels;
  if (is_static) {
    const ComplexMatrix& h = std::get<Segment>(schedule.events().front()).generator;
    named = static_operators(cfg, h);
    for (std::size_t i = 0; i < named.ops.size(); ++i) labels.push_back({named.names[i], named.ops[i].rate, true});
  } else {
    named = floquet_operators(cfg, propagator(schedule).gf);
    for (std::size_t i = 0; i < named.ops.size(); ++i) labels.push_back({named.names[i], named.ops[i].rate, false});
  }
  const auto etas = matrices(named.ops, named.ops.size());
  const TraceSeries series =
      evolve_trace(schedule, cfg.psi0, etas, cfg.steps_per_period, cfg.periods, labels);

  const std::set<std::size_t> strobe(series.stroboscopic_indices.begin(), series.stroboscopic_indices.end());
  CsvWriter csv({"t_over_T", "operator_label", "re_value", "im_value", "is_stroboscopic", "re_lambda_pow_t",
                 "im_lambda_pow_t", "normalized"});
  Json ops = Json::array();
  for (std::size_t a = 0; a < etas.size(); ++a) {
    double worst = 0.0;
    for (std::size_t t = 0; t < series.times.size(); ++t) {
      const Complex v = series.values[a][t];
      const Complex ref = reference_value(series.labels[a], series.times[t], schedule.period());
      const bool s = strobe.count(t) > 0;
      if (s && series.normalized[a]) worst = std::max(worst, std::abs(v - ref));
      csv.row()
          .cell(series.times[t])
          .cell(series.labels[a].name)
          .cell(v.real())
          .cell(v.imag())
          .cell(s)
          .cell(ref.real())
          .cell(ref.imag())
          .cell(static_cast<bool>(series.normalized[a]));
    }
    Json j;
    j["label"] = series.labels[a].name;
    j[is_static ? "rate" : "lambda"] = to_json(series.labels[a].eigenvalue);
    j["normalized"] = static_cast<bool>(series.normalized[a]);
    j["max_stroboscopic_deviation"] = worst;
    j["operator"] = to_json(etas[a]);
    ops.push_back(std::move(j));
  }

  Json report = problem_json(cfg);
  report["mode"] = "trace";
  report["psi0"] = to_json(cfg.psi0);
  report["steps_per_period"] = cfg.steps_per_period;
  report["periods"] = cfg.periods;
  report["reference"] = is_static ? "exp(rate t)" : "lambda^t";
  report["max_stroboscopic_drift"] = series.max_stroboscopic_drift;
  report["operators"] = std::move(ops);

  std::ostringstream gp;
  gp << "set datafile separator ','\nset xlabel 't/T'\n"
     << "set multiplot layout " << etas.size() << ",1\n";
  for (const auto& label : series.labels) {
    gp << "set title '" << label.name << "'\n"
       << "plot 'trace.csv' using 1:(strcol(2) eq '" << label.name << "' ? $3 : 1/0) with lines title 'Re', \\\n"
       << "     '' using 1:(strcol(2) eq '" << label.name << "' ? $4 : 1/0) with lines title 'Im', \\\n"
       << "     '' using 1:(strcol(2) eq '" << label.name
       << "' ? $6 : 1/0) with lines dt 3 title 'Re reference'\n";
  }
  gp << "unset multiplot\n";
  RunOutput out;
  out.report = std::move(report);
  out.files = emit(cfg, out.report, "trace.json", {{"trace.csv", csv.str()}}, {{"trace.gp", gp.str()}});
  return out;
}

RunOutput run_scan(const RunConfig& cfg) {
  const Problem& p = cfg.problem;
  const DimerModel model = *p.model;
  const Waveform waveform = p.params.waveform;
  const double J = p.params.J;
  const ScanResult scan = phase_scan(model, waveform, cfg.grid.gamma, cfg.grid.jt, J);

  CsvWriter grid({"gamma_over_J", "JT", "phase", "kappa_ratio", "ok", "error"});
  int counts[3] = {0, 0, 0};
  int failures = 0;
  for (const auto& pt : scan.points) {
    grid.row()
        .cell(pt.gamma_over_J)
        .cell(pt.JT)
        .cell(std::string(pt.ok ? to_string(pt.phase) : "failed"))
        .cell(pt.kappa_ratio)
        .cell(pt.ok)
        .cell(pt.error);
    if (pt.ok) {
      ++counts[static_cast<int>(pt.phase)];
    } else {
      ++failures;
    }
  }

  std::vector<ContourPoint> contour;
  std::string contour_error;
  try {
    contour = ep_contour(model, waveform, cfg.grid.gamma, cfg.grid.jt, J);
  } catch (const Error& e) {
    contour_error = e.what();
  }
  CsvWriter ccsv({"JT", "gamma_over_J", "gamma_T", "numerical_gamma_over_J", "abs_diff", "closed_form_gamma_over_J",
                  "cross_validated"});
  Json points = Json::array();
  double worst_numeric = 0.0, worst_closed = 0.0;
  int validated = 0;
  for (const auto& c : contour) {
    double numeric = std::numeric_limits<double>::quiet_NaN();
    try {
      const double lo = std::max(0.0, c.gamma_over_J - 1e-4);
      numeric = numerical_ep_root(model, waveform, c.JT, lo, c.gamma_over_J + 1e-4, 1e-12, J);
    } catch (const Error&) {
    }
    double closed = std::numeric_limits<double>::quiet_NaN();
    if (waveform == Waveform::Static) {
      closed = 1.0;
    } else if (model == DimerModel::Classical) {
      const double cs = std::abs(std::cos(c.JT / 2));
      if (cs < 1.0) closed = std::atanh(cs) / c.JT;
    }
    const double diff = std::abs(numeric - c.gamma_over_J);
    if (std::isfinite(diff)) worst_numeric = std::max(worst_numeric, diff);
    if (std::isfinite(closed)) worst_closed = std::max(worst_closed, std::abs(closed - c.gamma_over_J));
    validated += c.cross_validated ? 1 : 0;
    ccsv.row()
        .cell(c.JT)
        .cell(c.gamma_over_J)
        .cell(c.gamma_over_J * c.JT)
        .cell(numeric)
        .cell(diff)
        .cell(std::isfinite(closed) ? format_double(closed) : std::string())
        .cell(c.cross_validated);
    Json j;
    j["JT"] = c.JT;
    j["gamma_over_J"] = c.gamma_over_J;
    j["numerical_gamma_over_J"] = finite_or_nan(numeric);
    if (std::isfinite(closed)) j["closed_form_gamma_over_J"] = closed;
    j["cross_validated"] = c.cross_validated;
    points.push_back(std::move(j));
  }

  Json report = problem_json(cfg);
  report["mode"] = "scan";
  report["grid"] = {{"gamma_over_J", {cfg.grid.gamma.min, cfg.grid.gamma.max, cfg.grid.gamma.points}},
                    {"JT", {cfg.grid.jt.min, cfg.grid.jt.max, cfg.grid.jt.points}}};
  report["counts"] = {{"symmetric", counts[0]}, {"broken", counts[1]}, {"exceptional-point", counts[2]},
                      {"failed", failures}};
  report["contour"] = std::move(points);
  if (!contour_error.empty()) report["contour_error"] = contour_error;
  report["contour_cross_validated"] = validated;
  report["max_numerical_vs_analytic"] = worst_numeric;
  if (waveform == Waveform::Static || model == DimerModel::Classical) report["max_closed_form_vs_analytic"] = worst_closed;

  std::ostringstream gp;
  gp << "set datafile separator ','\nset xlabel 'gamma/J'\nset ylabel 'JT'\n"
     << "plot 'scan.csv' using 1:2:(strcol(3) eq 'symmetric' ? 0 : 1) with points pt 5 palette notitle, \\\n"
     << "     'contour.csv' using 2:1 with points pt 7 lc rgb 'black' title 'EP contour'\n";
  RunOutput out;
  out.report = std::move(report);
  out.files = emit(cfg, out.report, "scan.json", {{"scan.csv", grid.str()}, {"contour.csv", ccsv.str()}},
                   {{"scan.gp", gp.str()}});
  return out;
}

}  // namespace intertwine::cli
