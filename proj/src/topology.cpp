#include "rfvlc/topology.hpp"

#include <cmath>
#include <stdexcept>

#include "rfvlc/rng.hpp"
#include "rfvlc/units.hpp"

namespace rfvlc {

namespace {

// Uniform over a disk of radius r centered at the origin.
Vec2 draw_disk_point(Rng& rng, double r) {
    double radius = r * std::sqrt(rng.uniform());
    double theta = 2.0 * kPi * rng.uniform();
    return {radius * std::cos(theta), radius * std::sin(theta)};
}

bool inside_room(const Room& room, double side, double x, double y) {
    return x >= room.origin.x && x <= room.origin.x + side &&
           y >= room.origin.y && y <= room.origin.y + side;
}

} // namespace

Topology generate_topology(const ScenarioConfig& config) {
    config.validate();
    if (config.room_count > 0 && config.room_side > config.macro_radius)
        throw std::invalid_argument("generate_topology: room_side exceeds macro_radius");

    Rng rng = Rng::keyed(config.seed, kTagTopology);
    Topology topo;
    topo.macro_position = {0.0, 0.0};

    topo.pico_positions.reserve(config.pico_count);
    for (int k = 0; k < config.pico_count; ++k)
        topo.pico_positions.push_back(draw_disk_point(rng, config.macro_radius));

    topo.rooms.reserve(config.room_count);
    for (int r = 0; r < config.room_count; ++r) {
        Room room;
        room.origin = draw_disk_point(rng, config.macro_radius);
        // LED arrays on the mid-line, at (2i+1)/(2n) of the side: the two-AP
        // case lands on the quarter points with overlapping footprints.
        const int n = config.vlc_aps_per_room;
        room.vlc_ap_positions.reserve(n);
        for (int i = 0; i < n; ++i) {
            double fx = (2.0 * i + 1.0) / (2.0 * n);
            room.vlc_ap_positions.push_back({room.origin.x + fx * config.room_side,
                                             room.origin.y + 0.5 * config.room_side,
                                             config.vlc_ap_height});
        }
        topo.rooms.push_back(std::move(room));
    }

    topo.user_positions.reserve(config.user_count);
    topo.user_room.reserve(config.user_count);
    for (int j = 0; j < config.user_count; ++j) {
        Vec2 pt = draw_disk_point(rng, config.macro_radius);
        topo.user_positions.push_back({pt.x, pt.y, config.receiver_height});
        int room_idx = -1;
        for (int r = 0; r < static_cast<int>(topo.rooms.size()); ++r) {
            if (inside_room(topo.rooms[r], config.room_side, pt.x, pt.y)) {
                room_idx = r;
                break;
            }
        }
        topo.user_room.push_back(room_idx);
    }
    return topo;
}

} // namespace rfvlc
