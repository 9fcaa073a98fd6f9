#include <cmath>
#include <map>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/floquet.hpp"

namespace intertwine {

namespace {

Complex expectation(std::span<const Complex> psi, const ComplexMatrix& eta) {
  return dot(psi, matvec(eta, psi));
}

// Walks the events of one period, stopping at requested times. Partial segment
// factors are cached per (event, duration).
class PeriodWalker {
 public:
  explicit PeriodWalker(const Schedule& s) : schedule_(s) {}

  void start_period() {
    index_ = 0;
    cursor_ = 0.0;
  }

  void advance_to(double target, ComplexVector& psi, bool end_of_period) {
    const auto& events = schedule_.events();
    const double eps = 1e-12 * schedule_.period();
    while (index_ < events.size()) {
      const auto& e = events[index_];
      if (const auto* kick = std::get_if<Kick>(&e)) {
        if (!end_of_period && cursor_ > target + eps) break;
        psi = matvec(factor(index_, 0.0, kick->generator, true), psi);
        ++index_;
        continue;
      }
      const auto& seg = std::get<Segment>(e);
      const double seg_end = segment_start(index_) + seg.duration;
      if (end_of_period || seg_end <= target + eps) {
        const double step = seg_end - cursor_;
        if (step > 0.0) psi = matvec(factor(index_, step, seg.generator, false), psi);
        cursor_ = seg_end;
        ++index_;
        continue;
      }
      const double step = target - cursor_;
      if (step > eps) {
        psi = matvec(factor(index_, step, seg.generator, false), psi);
        cursor_ = target;
      }
      break;
    }
  }

 private:
  double segment_start(std::size_t idx) {
    if (starts_.empty()) starts_ = schedule_.event_times();
    return starts_[idx];
  }

  const ComplexMatrix& factor(std::size_t idx, double step, const ComplexMatrix& g, bool kick) {
    auto key = std::make_pair(idx, step);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      ComplexMatrix f = kick ? matexp(g) : matexp(Complex{0.0, -step} * g);
      it = cache_.emplace(key, std::move(f)).first;
    }
    return it->second;
  }

  const Schedule& schedule_;
  std::vector<double> starts_;
  std::size_t index_ = 0;
  double cursor_ = 0.0;
  std::map<std::pair<std::size_t, double>, ComplexMatrix> cache_;
};

}  // namespace

Complex reference_value(const TraceLabel& label, double t_over_period, double period) {
  if (label.is_rate) return std::exp(label.eigenvalue * (t_over_period * period));
  if (label.eigenvalue == Complex{0.0, 0.0}) return t_over_period == 0.0 ? 1.0 : 0.0;
  return std::exp(std::log(label.eigenvalue) * t_over_period);
}

TraceSeries evolve_trace(const Schedule& schedule, std::span<const Complex> psi0,
                         std::span<const ComplexMatrix> etas, int steps_per_period, int periods,
                         std::vector<TraceLabel> labels) {
  if (steps_per_period < 1) throw InvalidInput("evolve_trace: steps_per_period must be >= 1");
  if (periods < 1) throw InvalidInput("evolve_trace: periods must be >= 1");
  if (psi0.size() != schedule.dim()) throw DimensionError("evolve_trace: psi0 has the wrong length");
  const double psi_norm = norm2(psi0);
  if (!(psi_norm > 0.0)) throw InvalidInput("evolve_trace: psi0 must be nonzero");
  for (const auto& eta : etas) {
    if (eta.rows() != schedule.dim() || eta.cols() != schedule.dim()) {
      throw DimensionError("evolve_trace: operator size does not match the schedule");
    }
  }
  if (labels.empty()) {
    for (std::size_t a = 0; a < etas.size(); ++a) labels.push_back({"eta" + std::to_string(a + 1)});
  }
  if (labels.size() != etas.size()) throw InvalidInput("evolve_trace: one label per operator");

  TraceSeries out;
  out.labels = std::move(labels);
  const std::size_t samples = static_cast<std::size_t>(steps_per_period) * static_cast<std::size_t>(periods) + 1;
  out.times.reserve(samples);
  out.values.assign(etas.size(), {});
  for (auto& v : out.values) v.reserve(samples);

  std::vector<Complex> denominators;
  for (const auto& eta : etas) {
    const Complex d = expectation(psi0, eta);
    const bool ok = std::abs(d) > 1e-12 * frobenius_norm(eta) * psi_norm * psi_norm;
    out.normalized.push_back(ok);
    denominators.push_back(ok ? d : Complex{1.0, 0.0});
  }

  ComplexVector psi(psi0.begin(), psi0.end());
  auto record = [&](double t) {
    out.times.push_back(t);
    for (std::size_t a = 0; a < etas.size(); ++a) {
      out.values[a].push_back(expectation(psi, etas[a]) / denominators[a]);
    }
  };

  const ComplexMatrix gf = propagator(schedule).gf;
  ComplexVector strobe(psi0.begin(), psi0.end());
  PeriodWalker walker(schedule);
  out.stroboscopic_indices.push_back(0);
  record(0.0);
  for (int m = 0; m < periods; ++m) {
    walker.start_period();
    for (int k = 1; k <= steps_per_period; ++k) {
      const bool last = k == steps_per_period;
      const double target = schedule.period() * static_cast<double>(k) / steps_per_period;
      walker.advance_to(target, psi, last);
      if (last) {
        strobe = matvec(gf, strobe);
        ComplexVector diff = psi;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= strobe[i];
        const double drift = norm2(diff) / std::max(norm2(strobe), 1e-300);
        out.max_stroboscopic_drift = std::max(out.max_stroboscopic_drift, drift);
        psi = strobe;
        out.stroboscopic_indices.push_back(out.times.size());
      }
      record(m + static_cast<double>(k) / steps_per_period);
    }
  }
  return out;
}

}  // namespace intertwine
