#include "anisoflow/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace anisoflow {

namespace {

constexpr char kMagic[4] = {'A', 'F', 'L', 'W'};

class Writer {
public:
    void u8(std::uint8_t x) { bytes_.push_back(x); }
    void u32(std::uint32_t x) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    }
    void f64(double x) {
        const auto bits = std::bit_cast<std::uint64_t>(x);
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        return x;
    }
    double f64() {
        need(8);
        std::uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
        return std::bit_cast<double>(x);
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw std::runtime_error("checkpoint: truncated file");
    }
    std::vector<std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

/// Half-lattice index and conjugation flag of a full-lattice position.
std::pair<std::size_t, bool> locate(const SpectralGrid& g, int i1, int i2, int i3) {
    if (i3 <= g.n(2) / 2) return {g.spectral_index(i1, i2, i3), false};
    const int j1 = (g.n(0) - i1) % g.n(0);
    const int j2 = (g.n(1) - i2) % g.n(1);
    const int j3 = g.n(2) - i3;
    return {g.spectral_index(j1, j2, j3), true};
}

void write_block(Writer& w, const SpectralField& f) {
    const auto& g = *f.grid();
    for (int i1 = 0; i1 < g.n(0); ++i1) {
        for (int i2 = 0; i2 < g.n(1); ++i2) {
            for (int i3 = 0; i3 < g.n(2); ++i3) {
                const auto [m, conj] = locate(g, i1, i2, i3);
                const Complex c = conj ? std::conj(f[m]) : f[m];
                w.f64(c.real());
                w.f64(c.imag());
            }
        }
    }
}

void read_block(Reader& r, SpectralField& f) {
    const auto& g = *f.grid();
    std::vector<Complex> full(g.physical_size());
    for (auto& c : full) {
        const double re = r.f64();
        c = Complex{re, r.f64()};
    }
    std::size_t p = 0;
    for (int i1 = 0; i1 < g.n(0); ++i1) {
        for (int i2 = 0; i2 < g.n(1); ++i2) {
            for (int i3 = 0; i3 < g.n(2); ++i3, ++p) {
                const auto [m, conj] = locate(g, i1, i2, i3);
                if (!conj) f[m] = full[p];
            }
        }
    }
    p = 0;
    for (int i1 = 0; i1 < g.n(0); ++i1) {
        for (int i2 = 0; i2 < g.n(1); ++i2) {
            for (int i3 = 0; i3 < g.n(2); ++i3, ++p) {
                const auto [m, conj] = locate(g, i1, i2, i3);
                if (conj && std::conj(full[p]) != f[m]) {
                    throw std::runtime_error("checkpoint: lattice is not Hermitian");
                }
            }
        }
    }
}

}  // namespace

std::string checkpoint_name(std::size_t step) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "checkpoint_%08zu.aflw", step);
    return buf;
}

void write_checkpoint(const std::string& path, const FlowState& state, Scheme scheme) {
    const auto& g = *state.grid();
    Writer w;
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u32(kCheckpointVersion);
    for (int a = 0; a < 3; ++a) w.u32(static_cast<std::uint32_t>(g.n(a)));
    w.f64(g.box_length());
    w.f64(state.t);
    w.u8(static_cast<std::uint8_t>(scheme));
    write_block(w, state.psi);
    for (const auto& c : state.v) write_block(w, c);

    // Write to a sibling file and rename so a crash never leaves a torn checkpoint.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp);
        out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.bytes().size()));
        if (!out) throw std::runtime_error("checkpoint: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

namespace {

Checkpoint read_impl(const std::string& path, GridPtr grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(std::move(bytes));

    for (char c : kMagic) {
        if (r.u8() != static_cast<std::uint8_t>(c)) throw std::runtime_error("checkpoint: bad magic in " + path);
    }
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");
    std::array<int, 3> dims{};
    for (auto& d : dims) d = static_cast<int>(r.u32());
    const double box = r.f64();
    const double t = r.f64();
    const std::uint8_t tag = r.u8();
    if (tag != static_cast<std::uint8_t>(Scheme::IFRK2) && tag != static_cast<std::uint8_t>(Scheme::IFRK4)) {
        throw std::runtime_error("checkpoint: unknown scheme tag");
    }

    if (!grid) {
        grid = SpectralGrid::create(dims[0], dims[1], dims[2], box);
    } else if (grid->dims() != dims || grid->box_length() != box) {
        throw std::runtime_error("checkpoint: grid shape does not match " + path);
    }

    Checkpoint out{FlowState::zero(grid, t), static_cast<Scheme>(tag)};
    read_block(r, out.state.psi);
    for (auto& c : out.state.v) read_block(r, c);
    if (!r.exhausted()) throw std::runtime_error("checkpoint: trailing bytes in " + path);
    return out;
}

}  // namespace

Checkpoint read_checkpoint(const std::string& path) { return read_impl(path, nullptr); }

Checkpoint read_checkpoint(const std::string& path, const GridPtr& grid) {
    if (!grid) throw std::invalid_argument("read_checkpoint: null grid");
    return read_impl(path, grid);
}

CheckpointWriter::CheckpointWriter(std::string directory, std::size_t every, Scheme scheme)
    : directory_(std::move(directory)), every_(every), scheme_(scheme) {
    std::filesystem::create_directories(directory_);
}

void CheckpointWriter::on_step(const FlowState& state, std::size_t step) {
    latest_ = state;
    latest_step_ = step;
    if (every_ > 0 && step % every_ == 0) {
        last_path_ = (std::filesystem::path(directory_) / checkpoint_name(step)).string();
        write_checkpoint(last_path_, state, scheme_);
    }
}

void CheckpointWriter::on_finish(const RunReport&) {
    if (!latest_.psi.is_valid()) return;
    if (every_ > 0 && latest_step_ % every_ == 0) return;
    last_path_ = (std::filesystem::path(directory_) / checkpoint_name(latest_step_)).string();
    write_checkpoint(last_path_, latest_, scheme_);
}

}  // namespace anisoflow
