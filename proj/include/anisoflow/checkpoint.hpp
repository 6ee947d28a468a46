#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "anisoflow/integrator.hpp"
#include "anisoflow/state.hpp"

namespace anisoflow {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary snapshot layout, all little-endian:
///   "AFLW" | u32 version | u32 n1 n2 n3 | f64 box_length | f64 t | u8 scheme
/// followed by the blocks psi, v1, v2, v3. Each block holds the full
/// n1 x n2 x n3 lattice in FFT index order (i1 outermost, i3 fastest) as
/// (re, im) f64 pairs; the half not stored in memory is the conjugate image.
struct Checkpoint {
    FlowState state;
    Scheme scheme = Scheme::IFRK4;
};

void write_checkpoint(const std::string& path, const FlowState& state, Scheme scheme);

/// Builds a grid from the header. Throws std::runtime_error on a bad magic,
/// version, truncated file or a lattice that is not Hermitian.
Checkpoint read_checkpoint(const std::string& path);

/// Reads onto an existing grid; the header shape must match.
Checkpoint read_checkpoint(const std::string& path, const GridPtr& grid);

/// Writes `<dir>/checkpoint_<step>.aflw` every `every` steps and at the end of the run.
class CheckpointWriter : public RunObserver {
public:
    CheckpointWriter(std::string directory, std::size_t every, Scheme scheme);
    void on_step(const FlowState& state, std::size_t step) override;
    void on_finish(const RunReport& report) override;

    const std::string& last_path() const { return last_path_; }

private:
    std::string directory_;
    std::size_t every_;
    Scheme scheme_;
    FlowState latest_;
    std::size_t latest_step_ = 0;
    std::string last_path_;
};

std::string checkpoint_name(std::size_t step);

}  // namespace anisoflow
