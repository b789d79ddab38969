#pragma once
#include <cmath>
#include <numbers>

namespace rfvlc {

inline constexpr double kPi = std::numbers::pi;

// <cmath> trig works in radians; all config angles are degrees.
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// exp(1)/(2*pi): SNR prefactor of the optical rate lower bound.
inline constexpr double kVlcSnrPrefactor = std::numbers::e / (2.0 * std::numbers::pi);

} // namespace rfvlc
