#include "nsul/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace nsul {

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("snapshot truncated: " + path);
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& snap) {
    if (snap.fields.empty() || snap.fields.size() > 255)
        throw std::invalid_argument("write_snapshot: field count must be in [1,255]");
    for (const auto& [name, f] : snap.fields) {
        if (name.size() > 8)
            throw std::invalid_argument("write_snapshot: field name longer than 8 bytes");
        if (!f.grid().same_mesh(snap.grid))
            throw std::invalid_argument("write_snapshot: field grid mismatch");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
    out.write("NSUL", 4);
    put<std::uint32_t>(out, snap.version);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.grid.n1));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.grid.n2));
    put<double>(out, snap.grid.l1);
    put<double>(out, snap.grid.l2);
    put<double>(out, snap.t);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(snap.fields.size()));
    for (const auto& [name, f] : snap.fields) {
        char tag[8];
        std::memset(tag, ' ', 8);
        std::memcpy(tag, name.data(), name.size());
        out.write(tag, 8);
    }
    for (const auto& [name, f] : snap.fields)
        out.write(reinterpret_cast<const char*>(f.data()),
                  static_cast<std::streamsize>(sizeof(double) * f.grid().size()));
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "NSUL", 4) != 0)
        throw std::runtime_error("not a snapshot file (bad magic): " + path);
    Snapshot snap;
    snap.version = get<std::uint32_t>(in, path);
    if (snap.version != 1)
        throw std::runtime_error("unsupported snapshot version: " + path);
    std::uint32_t n1 = get<std::uint32_t>(in, path);
    std::uint32_t n2 = get<std::uint32_t>(in, path);
    double l1 = get<double>(in, path);
    double l2 = get<double>(in, path);
    snap.t = get<double>(in, path);
    snap.grid = GridSpec{static_cast<int>(n1), static_cast<int>(n2), l1, l2};
    snap.grid.validate();
    std::uint8_t count = get<std::uint8_t>(in, path);
    std::vector<std::string> names;
    for (int i = 0; i < count; ++i) {
        char tag[8];
        in.read(tag, 8);
        if (!in) throw std::runtime_error("snapshot truncated: " + path);
        std::string name(tag, 8);
        while (!name.empty() && name.back() == ' ') name.pop_back();
        names.push_back(name);
    }
    for (int i = 0; i < count; ++i) {
        ScalarField f(snap.grid);
        in.read(reinterpret_cast<char*>(f.data()),
                static_cast<std::streamsize>(sizeof(double) * snap.grid.size()));
        if (!in) throw std::runtime_error("snapshot truncated: " + path);
        snap.fields.emplace_back(names[i], std::move(f));
    }
    char extra;
    if (in.read(&extra, 1))
        throw std::runtime_error("snapshot has trailing bytes: " + path);
    return snap;
}

}  // namespace nsul
