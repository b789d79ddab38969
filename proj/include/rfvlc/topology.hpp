#pragma once
#include <cmath>
#include <vector>

#include "rfvlc/config.hpp"

namespace rfvlc {

struct Vec2 {
    double x = 0, y = 0;
    bool operator==(const Vec2&) const = default;
};

struct Vec3 {
    double x = 0, y = 0, z = 0;
    bool operator==(const Vec3&) const = default;
};

inline double dist2d(const Vec2& a, const Vec2& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}
inline double dist2d(const Vec2& a, const Vec3& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}
inline double dist3d(const Vec3& a, const Vec3& b) {
    double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct Room {
    Vec2 origin;                          // lower-left corner of the square footprint
    std::vector<Vec3> vlc_ap_positions;   // absolute coordinates
    bool operator==(const Room&) const = default;
};

struct Topology {
    Vec2 macro_position;                  // disk center
    std::vector<Vec2> pico_positions;
    std::vector<Room> rooms;
    std::vector<Vec3> user_positions;     // at receiver height
    std::vector<int> user_room;           // room index, -1 when outdoor

    bool user_is_indoor(int j) const { return user_room[j] >= 0; }
    // Flattened VLC AP index -> (room, slot).
    int vlc_room_of(int v, int aps_per_room) const { return v / aps_per_room; }
    Vec3 vlc_ap_position(int v, int aps_per_room) const {
        return rooms[v / aps_per_room].vlc_ap_positions[v % aps_per_room];
    }

    bool operator==(const Topology&) const = default;
};

// Seed-driven; identical config gives an identical topology. Users, pico
// centers and room corners are uniform over the macro disk; LED arrays sit
// on the room mid-line at symmetric fractions of the side length.
Topology generate_topology(const ScenarioConfig& config);

} // namespace rfvlc
