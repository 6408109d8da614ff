#pragma once

#include "nsul/field.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nsul {

/// Binary field snapshot: magic "NSUL", version u32, n1/n2 u32,
/// l1/l2/t f64, field count u8, then per field an 8-byte space-padded
/// name tag; payload is row-major f64 per field. Little-endian throughout.
struct Snapshot {
    std::uint32_t version = 1;
    GridSpec grid{8, 8, 1.0, 1.0};
    double t = 0.0;
    std::vector<std::pair<std::string, ScalarField>> fields;
};

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace nsul
