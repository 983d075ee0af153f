#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <numbers>
#include <string>

namespace chshsim {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce a finite radian value into [0, 2pi). Throws InvalidInput on NaN/inf.
double normalize_radians(double raw);

/// A point on the circle: a measurement setting or a hidden variable.
/// Always stored normalized into [0, 2pi).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double raw_radians) : value_(normalize_radians(raw_radians)) {}

  [[nodiscard]] constexpr double radians() const { return value_; }

  friend constexpr bool operator==(Angle, Angle) = default;
  friend constexpr auto operator<=>(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

inline Angle normalize(double raw) { return Angle(raw); }

/// Representative of (x - y) mod 2pi.
inline Angle difference(Angle x, Angle y) { return Angle(x.radians() - y.radians()); }

/// Shortest angular separation between x and y, in [0, pi].
double separation(Angle x, Angle y);

/// A single-wing measurement result, +1 or -1.
class Outcome {
 public:
  static constexpr Outcome plus() { return Outcome(1); }
  static constexpr Outcome minus() { return Outcome(-1); }
  /// Throws InvalidInput unless value is +1 or -1.
  static Outcome from_int(int value);

  [[nodiscard]] constexpr int value() const { return value_; }

  friend constexpr Outcome operator*(Outcome x, Outcome y) { return Outcome(x.value_ * y.value_); }
  friend constexpr Outcome operator-(Outcome x) { return Outcome(-x.value_); }
  friend constexpr bool operator==(Outcome, Outcome) = default;

 private:
  constexpr explicit Outcome(int v) : value_(static_cast<std::int8_t>(v)) {}
  std::int8_t value_ = 1;
};

/// sgn with the tie rule sgn(0) = +1. Throws InvalidInput on non-finite x.
Outcome sign_conv(double x);

/// Index pair (i, k) naming which of Alice's and Bob's two settings were used.
class SettingPair {
 public:
  /// Throws InvalidInput unless both indices are 1 or 2.
  SettingPair(int alice_index, int bob_index);

  [[nodiscard]] constexpr int alice_index() const { return alice_; }
  [[nodiscard]] constexpr int bob_index() const { return bob_; }
  /// Position in the canonical order (1,1), (1,2), (2,1), (2,2).
  [[nodiscard]] constexpr int ordinal() const { return 2 * (alice_ - 1) + (bob_ - 1); }
  /// Sign of this pair's term in S = E11 - E12 + E21 + E22.
  [[nodiscard]] constexpr int chsh_sign() const { return (alice_ == 1 && bob_ == 2) ? -1 : 1; }
  /// Column label in event tables, e.g. "A1B2".
  [[nodiscard]] std::string label() const;

  static SettingPair from_ordinal(int ordinal);
  static std::array<SettingPair, 4> all();

  friend constexpr bool operator==(SettingPair, SettingPair) = default;

 private:
  int alice_ = 1;
  int bob_ = 1;
};

/// The four measurement directions of a CHSH experiment.
struct Settings {
  Angle a1;
  Angle a2;
  Angle b1;
  Angle b2;

  [[nodiscard]] Angle alice(int index) const { return index == 1 ? a1 : a2; }
  [[nodiscard]] Angle bob(int index) const { return index == 1 ? b1 : b2; }
  [[nodiscard]] Settings rotated(double radians) const;

  /// (0, pi/2, pi/4, 3pi/4): maximizes |S| for the singlet correlation.
  static Settings chsh_optimal();
};

}  // namespace chshsim
