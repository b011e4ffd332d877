#include "thermsynth/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "thermsynth/errors.hpp"

namespace thermsynth {

namespace {

constexpr double kGravity = 9.81;
constexpr double kDischargeCoefficient = 0.6;
constexpr double kKelvin = 273.15;

double edge_conductance(double resistance, Component c) {
  if (!(resistance > 0.0) || !std::isfinite(resistance)) {
    throw SimulationError("non-positive resistance segment in " + std::string(component_name(c)));
  }
  return 1.0 / resistance;
}

void check_finite(const StepInputs& in) {
  bool ok = std::isfinite(in.outdoor_temperature) && std::isfinite(in.internal_gains) &&
            std::isfinite(in.heat_command) && std::isfinite(in.cool_command) &&
            std::isfinite(in.window_open);
  for (double x : in.irradiance) ok = ok && std::isfinite(x);
  if (in.ach_override) ok = ok && std::isfinite(*in.ach_override);
  if (!ok) throw SimulationError("non-finite step input");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// Time-varying air↔outdoor conductances for the given air temperature.
struct AirExchange {
  double ventilation = 0.0;  // W/K
  double window = 0.0;       // W/K
  double window_flow = 0.0;  // m³/s
  double ach = 0.0;          // mechanical/infiltration rate, 1/h
};

AirExchange air_exchange(const ThermalNetwork& net, const StepInputs& in, double t_air) {
  AirExchange ex;
  ex.ach = std::max(0.0, in.ach_override.value_or(net.air_change_rate));
  ex.ventilation = ventilation_conductance(ex.ach, net.volume, net.heat_recovery_rate);
  const double open = clamp01(in.window_open);
  if (open > 0.0 && net.openable_window_area > 0.0) {
    ex.window_flow = window_airflow(t_air, in.outdoor_temperature, net.openable_window_area,
                                    net.openable_window_height, open);
    ex.window = kAirDensity * kAirHeatCapacity * ex.window_flow;
  }
  return ex;
}

/// Heat injected per node (W), excluding boundary-temperature terms.
struct Injection {
  double heat = 0.0;
  double cool = 0.0;
  double gains = 0.0;
  double solar_transmitted = 0.0;
  double solar_absorbed = 0.0;
};

Injection fill_sources(const ThermalNetwork& net, const StepInputs& in, Eigen::VectorXd& q) {
  Injection inj;
  inj.heat = clamp01(in.heat_command) * net.q_heat_max;
  inj.cool = clamp01(in.cool_command) * net.q_cool_max;
  inj.gains = in.internal_gains;
  for (std::size_t o = 0; o < 4; ++o) {
    inj.solar_transmitted += net.window_solar_aperture[o] * in.irradiance[o];
  }

  const double thermal = inj.heat - inj.cool;
  const double convective =
      net.heating_convective_fraction * thermal + net.gains_convective_fraction * inj.gains;
  const double radiative = (1.0 - net.heating_convective_fraction) * thermal +
                           (1.0 - net.gains_convective_fraction) * inj.gains +
                           inj.solar_transmitted;

  q.setZero();
  q[0] = convective;
  const double weight_sum =
      std::accumulate(net.radiative_weights.begin(), net.radiative_weights.end(), 0.0);
  if (weight_sum > 0.0) {
    for (std::size_t i = 0; i < net.node_count(); ++i) q[i] += radiative * net.radiative_weights[i];
  } else {
    q[0] += radiative;
  }

  for (const auto& link : net.boundary_links) {
    const double boundary_t =
        link.channel == BoundaryChannel::outdoor ? in.outdoor_temperature : net.ground_temperature;
    double solar = 0.0;
    if (link.surface >= 0) solar = link.solar_gain * in.irradiance[link.surface];
    inj.solar_absorbed += solar;
    q[link.node] += link.conductance * boundary_t + solar;
  }
  return inj;
}

double window_conductance_total(const ThermalNetwork& net) {
  return std::accumulate(net.window_conductance.begin(), net.window_conductance.end(), 0.0);
}

/// Conductance matrix K with fixed edges, boundary links and window transmission.
Eigen::MatrixXd fixed_conductance(const ThermalNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.node_count());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : net.edges) {
    const auto a = static_cast<Eigen::Index>(e.a);
    const auto b = static_cast<Eigen::Index>(e.b);
    k(a, a) += e.conductance;
    k(b, b) += e.conductance;
    k(a, b) -= e.conductance;
    k(b, a) -= e.conductance;
  }
  for (const auto& link : net.boundary_links) {
    const auto i = static_cast<Eigen::Index>(link.node);
    k(i, i) += link.conductance;
  }
  k(0, 0) += window_conductance_total(net);
  return k;
}

EnergyLedger boundary_ledger(const ThermalNetwork& net, const StepInputs& in,
                             const AirExchange& ex, const Injection& inj,
                             const Eigen::VectorXd& t_new, double dt) {
  EnergyLedger l;
  l.heating = inj.heat * dt;
  l.cooling = inj.cool * dt;
  l.internal_gains = inj.gains * dt;
  l.solar_transmitted = inj.solar_transmitted * dt;
  l.solar_absorbed_opaque = inj.solar_absorbed * dt;

  double envelope = 0.0;
  for (const auto& link : net.boundary_links) {
    const double boundary_t =
        link.channel == BoundaryChannel::outdoor ? in.outdoor_temperature : net.ground_temperature;
    envelope += link.conductance * (t_new[static_cast<Eigen::Index>(link.node)] - boundary_t);
  }
  const double air_delta = t_new[0] - in.outdoor_temperature;
  envelope += window_conductance_total(net) * air_delta;
  l.envelope_loss = envelope * dt;
  l.ventilation_loss = ex.ventilation * air_delta * dt;
  l.window_airflow_loss = ex.window * air_delta * dt;
  return l;
}

}  // namespace

double EnergyLedger::gross() const {
  return std::abs(heating) + std::abs(cooling) + std::abs(solar_transmitted) +
         std::abs(solar_absorbed_opaque) + std::abs(internal_gains) + std::abs(envelope_loss) +
         std::abs(ventilation_loss) + std::abs(window_airflow_loss) + std::abs(storage_change);
}

EnergyLedger& EnergyLedger::operator+=(const EnergyLedger& o) {
  heating += o.heating;
  cooling += o.cooling;
  solar_transmitted += o.solar_transmitted;
  solar_absorbed_opaque += o.solar_absorbed_opaque;
  internal_gains += o.internal_gains;
  envelope_loss += o.envelope_loss;
  ventilation_loss += o.ventilation_loss;
  window_airflow_loss += o.window_airflow_loss;
  storage_change += o.storage_change;
  return *this;
}

ThermalNetwork assemble_network(const ModelParams& p) {
  ThermalNetwork net;
  net.capacity.push_back(p.air_capacity);
  net.radiative_weights.push_back(0.0);

  for (std::size_t ci = 0; ci < kComponentCount; ++ci) {
    const RcChain& chain = p.chains[ci];
    if (chain.component == Component::internal_mass && !p.has_internal_mass) continue;
    const std::size_t first = net.capacity.size();
    for (double c : chain.capacities) {
      if (!(c > 0.0)) {
        throw SimulationError("non-positive node capacity in " +
                              std::string(component_name(chain.component)));
      }
      net.capacity.push_back(c);
      net.radiative_weights.push_back(0.0);
    }
    const auto& r = chain.segment_resistances;
    net.edges.push_back({0, first, edge_conductance(chain.inner_film + r[0], chain.component)});
    net.edges.push_back({first, first + 1, edge_conductance(r[1], chain.component)});
    net.edges.push_back({first + 1, first + 2, edge_conductance(r[2], chain.component)});
    const double outer = edge_conductance(r[3] + chain.outer_film, chain.component);

    switch (chain.boundary) {
      case Boundary::outdoor: {
        ThermalNetwork::BoundaryLink link;
        link.node = first + 2;
        link.channel = BoundaryChannel::outdoor;
        link.conductance = outer;
        link.surface = chain.component == Component::roof ? static_cast<int>(kRoofSurface)
                                                          : chain.orientation;
        // Sol-air: T_sa = T_out + α·I·R_se, with R_se per unit area.
        link.solar_gain = outer * p.solar_absorptance * kExteriorFilm;
        net.boundary_links.push_back(link);
        net.radiative_weights[first] += chain.surface_area;
        break;
      }
      case Boundary::ground: {
        ThermalNetwork::BoundaryLink link;
        link.node = first + 2;
        link.channel = BoundaryChannel::ground;
        link.conductance = outer;
        net.boundary_links.push_back(link);
        net.radiative_weights[first] += chain.surface_area;
        break;
      }
      case Boundary::zone_air:
        net.edges.push_back({first + 2, 0, outer});
        net.radiative_weights[first] += chain.surface_area / 2.0;
        net.radiative_weights[first + 2] += chain.surface_area / 2.0;
        break;
    }
  }

  const double total_area =
      std::accumulate(net.radiative_weights.begin(), net.radiative_weights.end(), 0.0);
  if (total_area > 0.0) {
    for (double& w : net.radiative_weights) w /= total_area;
  }

  net.window_conductance = p.window_conductance;
  net.window_solar_aperture = p.window_solar_aperture;
  net.ground_temperature = p.ground_temperature;
  net.volume = p.geometry.volume;
  net.air_change_rate = p.air_change_rate;
  net.heat_recovery_rate = p.heat_recovery_rate;
  net.q_heat_max = p.q_heat_max;
  net.q_cool_max = p.q_cool_max;
  net.heating_convective_fraction = p.heating_convective_fraction;
  net.gains_convective_fraction = p.gains_convective_fraction;
  net.openable_window_area = p.openable_window_area;
  net.openable_window_height = p.openable_window_height;
  return net;
}

double window_airflow(double t_in, double t_out, double window_area, double window_height,
                      double open_fraction) {
  const double delta = std::abs(t_in - t_out);
  const double open = clamp01(open_fraction);
  if (delta == 0.0 || open == 0.0) return 0.0;
  const double mean_kelvin = 0.5 * (t_in + t_out) + kKelvin;
  return open * (1.0 / 3.0) * kDischargeCoefficient * window_area *
         std::sqrt(kGravity * window_height * delta / mean_kelvin);
}

Integrator::Integrator(const ThermalNetwork& net, double dt)
    : net_(&net), dt_(dt), cached_conductance_(std::numeric_limits<double>::quiet_NaN()) {
  if (!(dt > 0.0)) throw SimulationError("time step must be positive");
  const auto n = static_cast<Eigen::Index>(net.node_count());
  if (n == 0) throw SimulationError("empty network");
  base_ = fixed_conductance(net);
  for (Eigen::Index i = 0; i < n; ++i) base_(i, i) += net.capacity[static_cast<std::size_t>(i)] / dt;
  rhs_.resize(n);
  sources_.resize(n);
}

void Integrator::refactor(double variable_conductance) {
  Eigen::MatrixXd a = base_;
  a(0, 0) += variable_conductance;
  lu_.compute(a);
  const auto& lu = lu_.matrixLU();
  for (Eigen::Index i = 0; i < lu.rows(); ++i) {
    if (!(std::abs(lu(i, i)) > 0.0) || !std::isfinite(lu(i, i))) {
      throw SimulationError("singular step system");
    }
  }
  cached_conductance_ = variable_conductance;
  factored_ = true;
}

StepResult Integrator::advance(const ZoneState& state, const StepInputs& inputs) {
  const ThermalNetwork& net = *net_;
  const std::size_t n = net.node_count();
  if (state.temperatures.size() != n) throw SimulationError("state size does not match network");
  check_finite(inputs);

  const AirExchange ex = air_exchange(net, inputs, state.air());
  const double variable = ex.ventilation + ex.window;
  if (!factored_ || variable != cached_conductance_) refactor(variable);

  const Injection inj = fill_sources(net, inputs, sources_);
  for (std::size_t i = 0; i < n; ++i) {
    rhs_[static_cast<Eigen::Index>(i)] =
        net.capacity[i] / dt_ * state.temperatures[i] + sources_[static_cast<Eigen::Index>(i)];
  }
  rhs_[0] += (window_conductance_total(net) + variable) * inputs.outdoor_temperature;

  const Eigen::VectorXd t_new = lu_.solve(rhs_);

  StepResult result;
  result.state.time = state.time + dt_;
  result.state.temperatures.resize(n);
  double storage = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_new[static_cast<Eigen::Index>(i)];
    if (!std::isfinite(t)) throw SimulationError("non-finite temperature after step");
    result.state.temperatures[i] = t;
    storage += net.capacity[i] * (t - state.temperatures[i]);
  }
  result.ledger = boundary_ledger(net, inputs, ex, inj, t_new, dt_);
  result.ledger.storage_change = storage;
  result.heat_power = inj.heat;
  result.cool_power = inj.cool;
  result.ach_effective =
      ex.ach + (net.volume > 0.0 ? ex.window_flow * 3600.0 / net.volume : 0.0);
  return result;
}

StepResult step(const ThermalNetwork& net, const ZoneState& state, const StepInputs& inputs,
                double dt) {
  Integrator integrator(net, dt);
  return integrator.advance(state, inputs);
}

namespace {

Eigen::VectorXd solve_steady(const ThermalNetwork& net, const StepInputs& inputs, double t_air) {
  const AirExchange ex = air_exchange(net, inputs, t_air);
  Eigen::MatrixXd k = fixed_conductance(net);
  k(0, 0) += ex.ventilation + ex.window;
  Eigen::VectorXd q(static_cast<Eigen::Index>(net.node_count()));
  fill_sources(net, inputs, q);
  q[0] += (window_conductance_total(net) + ex.ventilation + ex.window) * inputs.outdoor_temperature;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  if (!lu.isInvertible()) {
    throw SimulationError("singular network: no conductive path to a boundary");
  }
  return lu.solve(q);
}

}  // namespace

ZoneState steady_state(const ThermalNetwork& net, const StepInputs& inputs) {
  check_finite(inputs);
  double t_air = inputs.outdoor_temperature;
  Eigen::VectorXd t = solve_steady(net, inputs, t_air);
  if (clamp01(inputs.window_open) > 0.0) {
    for (int iter = 0; iter < 200; ++iter) {
      const double next_air = t[0];
      if (next_air == t_air) break;
      t_air = next_air;
      t = solve_steady(net, inputs, t_air);
    }
  }
  ZoneState state;
  state.temperatures.assign(t.data(), t.data() + t.size());
  return state;
}

ZoneState steady_state_pinned_air(const ThermalNetwork& net, const StepInputs& inputs,
                                  double air_temperature) {
  check_finite(inputs);
  const auto n = static_cast<Eigen::Index>(net.node_count());
  ZoneState state;
  state.temperatures.assign(net.node_count(), air_temperature);
  if (n == 1) return state;

  const AirExchange ex = air_exchange(net, inputs, air_temperature);
  Eigen::MatrixXd k = fixed_conductance(net);
  k(0, 0) += ex.ventilation + ex.window;
  Eigen::VectorXd q(n);
  fill_sources(net, inputs, q);

  const Eigen::Index m = n - 1;
  Eigen::MatrixXd reduced = k.bottomRightCorner(m, m);
  Eigen::VectorXd rhs = q.tail(m) - k.col(0).tail(m) * air_temperature;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
  if (!lu.isInvertible()) throw SimulationError("singular network: no conductive path to a boundary");
  const Eigen::VectorXd t = lu.solve(rhs);
  for (Eigen::Index i = 0; i < m; ++i) state.temperatures[static_cast<std::size_t>(i + 1)] = t[i];
  return state;
}

double percentile_nearest_rank(std::span<const double> values, double p) {
  if (values.empty()) throw SimulationError("percentile of an empty series");
  if (!(p > 0.0 && p <= 100.0)) throw SimulationError("percentile must lie in (0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto count = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * count - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

EnergySummary annual_energy(std::span<const EnergyLedger> ledgers,
                            std::span<const double> air_temperatures) {
  if (ledgers.empty() || air_temperatures.empty()) {
    throw SimulationError("annual_energy needs a non-empty ledger and temperature trace");
  }
  EnergyLedger total;
  for (const auto& l : ledgers) total += l;
  EnergySummary s;
  s.heating_kwh = total.heating / 3.6e6;
  s.cooling_kwh = total.cooling / 3.6e6;
  s.air_p10 = percentile_nearest_rank(air_temperatures, 10.0);
  s.air_p50 = percentile_nearest_rank(air_temperatures, 50.0);
  s.air_p90 = percentile_nearest_rank(air_temperatures, 90.0);
  s.air_mean = std::accumulate(air_temperatures.begin(), air_temperatures.end(), 0.0) /
               static_cast<double>(air_temperatures.size());
  return s;
}

}  // namespace thermsynth
