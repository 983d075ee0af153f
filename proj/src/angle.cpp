#include "chshsim/angle.hpp"

#include <cmath>

#include "chshsim/errors.hpp"

namespace chshsim {

double normalize_radians(double raw) {
  if (!std::isfinite(raw)) {
    throw InvalidInput("angle must be finite, got " + std::to_string(raw));
  }
  double r = std::fmod(raw, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // -tiny + 2pi rounds up to 2pi.
  if (r >= kTwoPi) {
    r = 0.0;
  }
  return r;
}

double separation(Angle x, Angle y) {
  const double d = difference(x, y).radians();
  return d > std::numbers::pi ? kTwoPi - d : d;
}

Outcome Outcome::from_int(int value) {
  if (value == 1) return plus();
  if (value == -1) return minus();
  throw InvalidInput("outcome must be +1 or -1, got " + std::to_string(value));
}

Outcome sign_conv(double x) {
  if (!std::isfinite(x)) {
    throw InvalidInput("sign_conv: non-finite argument");
  }
  return x >= 0.0 ? Outcome::plus() : Outcome::minus();
}

SettingPair::SettingPair(int alice_index, int bob_index) : alice_(alice_index), bob_(bob_index) {
  auto ok = [](int i) { return i == 1 || i == 2; };
  if (!ok(alice_index) || !ok(bob_index)) {
    throw InvalidInput("setting indices must be 1 or 2");
  }
}

std::string SettingPair::label() const {
  return "A" + std::to_string(alice_) + "B" + std::to_string(bob_);
}

SettingPair SettingPair::from_ordinal(int ordinal) {
  if (ordinal < 0 || ordinal > 3) {
    throw InvalidInput("setting pair ordinal out of range");
  }
  return SettingPair(ordinal / 2 + 1, ordinal % 2 + 1);
}

std::array<SettingPair, 4> SettingPair::all() {
  return {SettingPair(1, 1), SettingPair(1, 2), SettingPair(2, 1), SettingPair(2, 2)};
}

Settings Settings::rotated(double radians) const {
  return Settings{Angle(a1.radians() + radians), Angle(a2.radians() + radians),
                  Angle(b1.radians() + radians), Angle(b2.radians() + radians)};
}

Settings Settings::chsh_optimal() {
  using std::numbers::pi;
  return Settings{Angle(0.0), Angle(pi / 2), Angle(pi / 4), Angle(3 * pi / 4)};
}

}  // namespace chshsim
