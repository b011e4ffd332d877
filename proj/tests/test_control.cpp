#include <gtest/gtest.h>

#include "thermsynth/control.hpp"
#include "thermsynth/errors.hpp"

using namespace thermsynth;

namespace {

ControllerConfig setback() {
  ControllerConfig c;
  c.day_setpoint = 22.0;
  c.night_setpoint = 18.0;
  return c;
}

class Scripted final : public Controller {
 public:
  explicit Scripted(double u) : u_(u) {}
  ControlCommand on_update(const Observation&) override {
    ControlCommand c;
    c.u_heat = u_;
    c.u_cool = -u_;
    c.window_open = 3.0;
    return c;
  }

 private:
  double u_;
};

}  // namespace

TEST(Setpoint, DayAndNight) {
  const ControllerConfig c = setback();
  EXPECT_EQ(setpoint_at(c, 12 * 3600.0), 22.0);
  EXPECT_EQ(setpoint_at(c, 23.5 * 3600.0), 18.0);
  EXPECT_EQ(setpoint_at(c, 6 * 3600.0), 22.0);
  EXPECT_EQ(setpoint_at(c, 22 * 3600.0), 18.0);
  EXPECT_EQ(setpoint_at(c, 86400.0 + 3 * 3600.0), 18.0);
  ControllerConfig flat = c;
  flat.night_setpoint = 22.0;
  for (int h = 0; h < 24; ++h) EXPECT_EQ(setpoint_at(flat, h * 3600.0), 22.0);
}

TEST(InternalP, ProportionalAndClamped) {
  const ControllerConfig c = setback();
  const double noon = 12 * 3600.0;
  EXPECT_DOUBLE_EQ(internal_p(c, 21.0, noon).u_heat, 0.5);
  EXPECT_EQ(internal_p(c, 22.0, noon).u_heat, 0.0);
  EXPECT_EQ(internal_p(c, 25.0, noon).u_heat, 0.0);
  EXPECT_EQ(internal_p(c, 20.0, noon).u_heat, 1.0);
  EXPECT_EQ(internal_p(c, 5.0, noon).u_heat, 1.0);
  EXPECT_EQ(internal_p(c, 5.0, noon).u_cool, 0.0);
}

TEST(TwoPoint, Hysteresis) {
  const ControllerConfig c = setback();
  const double noon = 12 * 3600.0;
  ControlCommand on;
  on.u_heat = 1.0;
  const ControlCommand off;
  EXPECT_EQ(two_point(c, 21.2, noon, off).u_heat, 1.0);
  EXPECT_EQ(two_point(c, 22.8, noon, on).u_heat, 0.0);
  EXPECT_EQ(two_point(c, 22.0, noon, on).u_heat, 1.0);
  EXPECT_EQ(two_point(c, 22.0, noon, off).u_heat, 0.0);
}

TEST(Hold, RecomputesEveryUpdateInterval) {
  HeldController held(make_controller(setback()), 900.0, 60.0);
  EXPECT_EQ(held.steps_per_update(), 15u);
  int calls = 0;
  for (std::size_t k = 0; k < 150; ++k) {
    held.command(k, [&] {
      ++calls;
      Observation o;
      o.t_air = 20.0;
      o.time = 12 * 3600.0;
      return o;
    });
  }
  EXPECT_EQ(calls, 10);
  EXPECT_EQ(held.updates(), 10u);
}

TEST(Hold, UpdateEqualToDtEveryStep) {
  HeldController held(make_controller(setback()), 60.0, 60.0);
  EXPECT_EQ(held.steps_per_update(), 1u);
}

TEST(Hold, IndivisibleIntervalIsConfigError) {
  EXPECT_THROW(HeldController(make_controller(setback()), 90.0, 60.0), ConfigError);
  EXPECT_THROW(HeldController(make_controller(setback()), 30.0, 60.0), ConfigError);
  ControllerConfig c = setback();
  c.update_interval = 100.0;
  EXPECT_THROW(validate(c, 60.0), ConfigError);
  c.update_interval = 120.0;
  c.proportional_band = 0.0;
  EXPECT_THROW(validate(c, 60.0), ConfigError);
}

TEST(Hold, ClampsExternalCommands) {
  HeldController held(std::make_unique<Scripted>(7.0), 60.0, 60.0);
  const ControlCommand& c = held.command(0, [] { return Observation{}; });
  EXPECT_EQ(c.u_heat, 1.0);
  EXPECT_EQ(c.u_cool, 0.0);
  ASSERT_TRUE(c.window_open.has_value());
  EXPECT_EQ(*c.window_open, 1.0);
  ControlCommand nan;
  nan.u_heat = std::nan("");
  EXPECT_EQ(clamp_command(nan).u_heat, 0.0);
}

TEST(Registry, BuiltinsAndPlugins) {
  const auto names = registered_controllers();
  for (const char* n : {"constant_off", "internal_p", "two_point", "window_hours"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
  register_controller("test_half", [](const ControllerConfig&) {
    return std::make_unique<Scripted>(0.5);
  });
  ControllerConfig c = setback();
  c.kind = ControllerKind::external;
  c.plugin = "test_half";
  EXPECT_EQ(make_controller(c)->on_update(Observation{}).u_heat, 0.5);
  c.plugin = "missing";
  EXPECT_THROW(make_controller(c), ConfigError);
}

TEST(Kinds, ParseAndName) {
  for (auto k : {ControllerKind::internal_p, ControllerKind::two_point, ControllerKind::external,
                 ControllerKind::none}) {
    EXPECT_EQ(parse_controller_kind(controller_kind_name(k)), k);
  }
  EXPECT_THROW(parse_controller_kind("pid"), ConfigError);
}
