// Copyright 2026 The QResNet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qres {

/// 3D scalar grid, C-order (z slowest), with its class label.
struct Volume {
    std::array<std::uint32_t, 3> dims{0, 0, 0}; // d, h, w
    std::vector<float> voxels;
    int label = 0;
    std::string subject_id;

    [[nodiscard]] std::size_t voxel_count() const noexcept {
        return std::size_t{dims[0]} * dims[1] * dims[2];
    }
    [[nodiscard]] float at(std::size_t z, std::size_t y, std::size_t x) const {
        return voxels[(z * dims[1] + y) * dims[2] + x];
    }
};

// QVOL file: "QVOL", u32 version (1), u32 d, h, w, then d*h*w f32 values;
// all little-endian. Label and subject id live in the manifest, not the file.
std::string encode_volume(const Volume &vol);
/// Throws FormatError (with byte offset) on bad magic, version or length.
Volume decode_volume(const std::string &bytes);
void write_volume(const Volume &vol, const std::filesystem::path &path);
Volume read_volume(const std::filesystem::path &path);

/// Corner-aligned trilinear resampling to a target_side^3 grid.
Volume resize_trilinear(const Volume &vol, std::size_t target_side);

/// Affine map of [min, max] onto [0, 1]; constant volumes map to all zeros.
Volume normalize_minmax(const Volume &vol);

/// resize_trilinear followed by normalize_minmax.
Volume preprocess(const Volume &vol, std::size_t target_side);

enum class Split { unassigned, train, val, test };

std::string to_string(Split split);
/// "train", "val", "test" or "-" (unassigned).
Split parse_split(const std::string &name);

struct ManifestEntry {
    std::string path; // relative to the manifest's directory unless absolute
    int label = 0;
    std::string subject_id;
    Split split = Split::unassigned;

    bool operator==(const ManifestEntry &) const = default;
};

struct Manifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir;

    [[nodiscard]] std::vector<ManifestEntry> in_split(Split split) const;
    [[nodiscard]] std::filesystem::path resolve(const ManifestEntry &e) const;
};

// Manifest text: one "path<TAB>label<TAB>subject_id<TAB>split" line per entry.
std::string format_manifest(const Manifest &m);
Manifest parse_manifest(const std::string &text,
                        const std::filesystem::path &base_dir = {});
void write_manifest(const Manifest &m, const std::filesystem::path &path);
Manifest read_manifest(const std::filesystem::path &path);

struct SplitFractions {
    double train = 0.65;
    double val = 0.15;
    double test = 0.20;
};

/**
 * @brief Per-class seeded split of subjects.
 *
 * Subjects of each class (in order of first appearance, class 0 first) are
 * shuffled with one Rng(seed) stream, then cut into contiguous runs of
 * floor(f * n) subjects for train, val and test; the remainder goes to
 * train. Every entry of a subject receives the subject's split.
 */
Manifest stratified_split(Manifest manifest, const SplitFractions &fractions,
                          std::uint64_t seed);

struct SyntheticOptions {
    std::size_t n_per_class = 100;
    std::size_t side = 16;
    std::uint64_t seed = 42;
    double difficulty = 0.2;
    SplitFractions fractions{};
};

/**
 * @brief One synthetic volume.
 *
 * Background: baseline 0.35 plus four random Gaussian bumps, re-centred so
 * the spatial mean is exactly the baseline. Label 1 adds 1-5 ellipsoidal
 * Gaussian blobs with per-axis radii of 5-15% of the side and peak boost
 * (1 - difficulty). Every voxel then gets N(0, 0.02) noise.
 */
Volume synthesize_volume(int label, std::size_t side, double difficulty,
                         std::uint64_t seed);

/// Writes n_per_class volumes of each class plus manifest.tsv into out_dir
/// and returns the (split) manifest.
Manifest generate_synthetic(const SyntheticOptions &opts,
                            const std::filesystem::path &out_dir);

} // namespace qres
