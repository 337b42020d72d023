#include "hetsync/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace hetsync {

using linalg::Matrix;
using linalg::Vector;

namespace {

constexpr double kDivergenceNorm = 1e9;

void place(Vector& dst, Eigen::Index offset, const std::vector<Vector>& parts, std::size_t agent,
           Eigen::Index expected, const char* what) {
  if (parts.empty()) return;
  const Vector& part = parts.at(agent);
  if (part.size() != expected) {
    std::ostringstream os;
    os << what << " of agent " << agent + 1 << " has length " << part.size() << ", expected "
       << expected;
    throw Error(Errc::DimensionMismatch, os.str());
  }
  dst.segment(offset, expected) = part;
}

Vector sample_disturbance(const SampledDisturbance& s, double t, Eigen::Index dim) {
  if (s.times.empty()) return Vector::Zero(dim);
  if (t <= s.times.front()) return s.values.front();
  if (t >= s.times.back()) return s.values.back();
  const auto hi = std::upper_bound(s.times.begin(), s.times.end(), t);
  const auto k = static_cast<std::size_t>(hi - s.times.begin());
  const double t0 = s.times[k - 1];
  const double t1 = s.times[k];
  const double a = (t - t0) / (t1 - t0);
  return (1.0 - a) * s.values[k - 1] + a * s.values[k];
}

}  // namespace

Vector initial_state(const ClosedLoopNetwork& net, const SimConfig& cfg) {
  const auto count = static_cast<std::size_t>(net.agent_count());
  auto check_count = [&](const std::vector<Vector>& parts, const char* what, bool required) {
    if (parts.empty() && !required) return;
    if (parts.size() != count) {
      std::ostringstream os;
      os << what << " lists " << parts.size() << " agents, expected " << count;
      throw Error(Errc::DimensionMismatch, os.str());
    }
  };
  check_count(cfg.x0, "x0", false);
  check_count(cfg.w0, "w0", false);
  check_count(cfg.v0, "v0", false);

  Vector x = Vector::Zero(net.total_dim());
  for (std::size_t i = 0; i < count; ++i) {
    const int agent = static_cast<int>(i);
    place(x, net.x_offset(agent), cfg.x0, i, net.state_dim(agent), "x0");
    place(x, net.w_offset(agent), cfg.w0, i, net.state_dim(agent), "w0");
    place(x, net.v_offset(agent), cfg.v0, i, net.exo_dim(), "v0");
  }
  return x;
}

double max_stable_step(const ClosedLoopNetwork& net) {
  double radius = 0.0;
  for (const auto& lambda : linalg::spectrum(net.A_o()).eigenvalues) {
    radius = std::max(radius, std::abs(lambda));
  }
  return radius > 0.0 ? 0.1 / radius : std::numeric_limits<double>::infinity();
}

Trajectory simulate(const ClosedLoopNetwork& net, const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !(cfg.t_final > 0.0) || cfg.dt > cfg.t_final) {
    throw Error(Errc::InvalidArgument, "simulation needs 0 < dt <= t_final");
  }
  const Matrix& a = net.A_o();
  const Matrix& e = net.E_o();
  const Eigen::Index nd = e.cols();

  Trajectory traj;
  const double guard = max_stable_step(net);
  if (cfg.dt > guard) {
    std::ostringstream os;
    os << "StepTooLarge: dt = " << cfg.dt << " exceeds 0.1/rho(A_o) = " << guard;
    traj.warnings.push_back(os.str());
  }

  Vector x = initial_state(net, cfg);
  bool forced = false;
  if (const auto* imp = std::get_if<ImpulseDisturbance>(&cfg.disturbance)) {
    if (imp->channel < 0 || imp->channel >= nd) {
      throw Error(Errc::InvalidArgument, "impulse channel out of range");
    }
    x += e.col(imp->channel);
  } else if (const auto* s = std::get_if<SampledDisturbance>(&cfg.disturbance)) {
    if (s->times.size() != s->values.size() ||
        !std::is_sorted(s->times.begin(), s->times.end())) {
      throw Error(Errc::InvalidArgument, "sampled disturbance needs sorted times and one value each");
    }
    for (const auto& v : s->values) {
      if (v.size() != nd) throw Error(Errc::DimensionMismatch, "disturbance sample has wrong length");
    }
    forced = !s->times.empty();
  }
  const auto* sampled = std::get_if<SampledDisturbance>(&cfg.disturbance);
  auto rhs = [&](double t, const Vector& state) -> Vector {
    if (!forced) return a * state;
    return a * state + e * sample_disturbance(*sampled, t, nd);
  };

  const auto steps = static_cast<std::size_t>(std::floor(cfg.t_final / cfg.dt * (1.0 + 1e-12)));
  traj.time.reserve(steps + 1);
  traj.state.reserve(steps + 1);
  const Matrix& c = net.C_o();
  const Matrix& cp = net.C_p();
  auto record = [&](double t, const Vector& state) {
    traj.time.push_back(t);
    traj.state.push_back(state);
    traj.z.push_back(c * state);
    traj.zeta.push_back(cp * state);
  };

  record(0.0, x);
  const double h = cfg.dt;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.norm() > kDivergenceNorm) {
      std::ostringstream os;
      os << "integration diverged at t = " << t + h << " (dt = " << h << ")";
      throw Error(Errc::StepTooLarge, os.str());
    }
    record(static_cast<double>(k + 1) * h, x);
  }
  return traj;
}

bool SyncMetrics::synchronized(double tol) const {
  if (z_gap.empty()) return false;
  return final_z_gap() < tol && final_v_disagreement() < tol && final_observer_error() < tol;
}

SyncMetrics sync_metrics(const Trajectory& traj, const ClosedLoopNetwork& net) {
  if (traj.size() == 0) throw Error(Errc::InvalidArgument, "empty trajectory");
  const int count = net.agent_count();
  const int p = net.output_dim();
  const int r = net.exo_dim();
  SyncMetrics m;
  m.z_gap.reserve(traj.size());
  m.v_disagreement.reserve(traj.size());
  m.observer_error.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vector& z = traj.z[k];
    const Vector& x = traj.state[k];
    double zg = 0.0;
    double vg = 0.0;
    double oe = 0.0;
    for (int i = 0; i < count; ++i) {
      for (int j = i + 1; j < count; ++j) {
        zg = std::max(zg, (z.segment(i * p, p) - z.segment(j * p, p)).cwiseAbs().maxCoeff());
        vg = std::max(vg, (x.segment(net.v_offset(i), r) - x.segment(net.v_offset(j), r))
                              .cwiseAbs()
                              .maxCoeff());
      }
      const Vector w = x.segment(net.w_offset(i), net.state_dim(i));
      const Vector v = x.segment(net.v_offset(i), r);
      oe = std::max(oe, (w - net.Pi()[static_cast<std::size_t>(i)] * v).cwiseAbs().maxCoeff());
    }
    m.z_gap.push_back(zg);
    m.v_disagreement.push_back(vg);
    m.observer_error.push_back(oe);
  }
  return m;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const SyncMetrics& metrics,
                          const ClosedLoopNetwork& net) {
  const int count = net.agent_count();
  const int p = net.output_dim();
  const int edges = net.graph().edge_count();
  os << "t";
  for (int i = 1; i <= count; ++i) {
    for (int k = 1; k <= p; ++k) os << ",z_" << i << "_" << k;
  }
  for (int e = 1; e <= edges; ++e) {
    for (int k = 1; k <= p; ++k) os << ",zeta_" << e << "_" << k;
  }
  os << ",metric_z_gap,metric_v_disagreement,metric_observer_error\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    os << format_double(traj.time[s]);
    for (Eigen::Index k = 0; k < traj.z[s].size(); ++k) os << ',' << format_double(traj.z[s](k));
    for (Eigen::Index k = 0; k < traj.zeta[s].size(); ++k) {
      os << ',' << format_double(traj.zeta[s](k));
    }
    os << ',' << format_double(metrics.z_gap[s]) << ',' << format_double(metrics.v_disagreement[s])
       << ',' << format_double(metrics.observer_error[s]) << '\n';
  }
}

}  // namespace hetsync
