#pragma once

#include <cmath>

namespace uavnet {

/// 3D point. Ground devices sit at h = 0; UAVs carry a positive altitude.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;
};

inline double horizontal_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dh = a.h - b.h;
    return std::sqrt(dx * dx + dy * dy + dh * dh);
}

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace uavnet
