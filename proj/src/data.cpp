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
#include "qres/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "binary_io.hpp"
#include "qres/error.hpp"
#include "qres/rng.hpp"

namespace qres {

namespace {

constexpr char kVolumeMagic[] = "QVOL";
constexpr std::uint32_t kVolumeVersion = 1;
constexpr std::size_t kVolumeHeaderBytes = 20;

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("write to '" + path.string() + "' failed");
    }
}

void check_volume(const Volume &vol) {
    if (vol.voxels.size() != vol.voxel_count()) {
        throw ArgumentError("volume has " + std::to_string(vol.voxels.size()) +
                            " voxels but dims imply " +
                            std::to_string(vol.voxel_count()));
    }
}

} // namespace

std::string encode_volume(const Volume &vol) {
    check_volume(vol);
    binary::Writer w;
    w.bytes(std::string_view(kVolumeMagic, 4));
    w.u32(kVolumeVersion);
    for (std::uint32_t d : vol.dims) {
        w.u32(d);
    }
    for (float v : vol.voxels) {
        w.f32(v);
    }
    return w.buffer();
}

Volume decode_volume(const std::string &bytes) {
    binary::Reader r(bytes);
    if (r.bytes(4, "magic") != std::string_view(kVolumeMagic, 4)) {
        throw FormatError("bad volume magic, expected 'QVOL'", 0);
    }
    const std::size_t version_at = r.offset();
    if (const auto v = r.u32("version"); v != kVolumeVersion) {
        throw FormatError("unsupported volume version " + std::to_string(v),
                          version_at);
    }
    Volume vol;
    for (std::uint32_t &d : vol.dims) {
        const std::size_t at = r.offset();
        d = r.u32("dims");
        if (d == 0) {
            throw FormatError("volume dimension must be positive", at);
        }
    }
    const std::size_t n = vol.voxel_count();
    if (r.remaining() != n * sizeof(float)) {
        throw FormatError("volume payload holds " +
                              std::to_string(r.remaining()) + " bytes, header "
                              "implies " + std::to_string(n * sizeof(float)),
                          kVolumeHeaderBytes + std::min(r.remaining(),
                                                        n * sizeof(float)));
    }
    vol.voxels.resize(n);
    for (float &v : vol.voxels) {
        v = r.f32("voxels");
    }
    return vol;
}

void write_volume(const Volume &vol, const std::filesystem::path &path) {
    write_file(path, encode_volume(vol));
}

Volume read_volume(const std::filesystem::path &path) {
    return decode_volume(read_file(path));
}

Volume resize_trilinear(const Volume &vol, std::size_t target_side) {
    check_volume(vol);
    if (target_side < 2) {
        throw ArgumentError("resize target side must be >= 2, got " +
                            std::to_string(target_side));
    }
    for (std::uint32_t d : vol.dims) {
        if (d < 2) {
            throw ArgumentError("resize needs every source axis >= 2");
        }
    }
    // Sample positions and interpolation weights per axis.
    struct Tap {
        std::size_t i0;
        double frac;
    };
    std::array<std::vector<Tap>, 3> taps;
    for (std::size_t a = 0; a < 3; ++a) {
        const std::size_t src = vol.dims[a];
        taps[a].resize(target_side);
        for (std::size_t t = 0; t < target_side; ++t) {
            const double pos = static_cast<double>(t * (src - 1)) /
                               static_cast<double>(target_side - 1);
            const auto i0 = std::min(static_cast<std::size_t>(pos), src - 2);
            taps[a][t] = {i0, pos - static_cast<double>(i0)};
        }
    }
    const auto ts = static_cast<std::uint32_t>(target_side);
    Volume out;
    out.dims = {ts, ts, ts};
    out.label = vol.label;
    out.subject_id = vol.subject_id;
    out.voxels.resize(out.voxel_count());
    std::size_t o = 0;
    for (const Tap &z : taps[0]) {
        for (const Tap &y : taps[1]) {
            for (const Tap &x : taps[2]) {
                auto v = [&](std::size_t dz, std::size_t dy, std::size_t dx) {
                    return static_cast<double>(
                        vol.at(z.i0 + dz, y.i0 + dy, x.i0 + dx));
                };
                const double c00 = v(0, 0, 0) * (1 - x.frac) + v(0, 0, 1) * x.frac;
                const double c01 = v(0, 1, 0) * (1 - x.frac) + v(0, 1, 1) * x.frac;
                const double c10 = v(1, 0, 0) * (1 - x.frac) + v(1, 0, 1) * x.frac;
                const double c11 = v(1, 1, 0) * (1 - x.frac) + v(1, 1, 1) * x.frac;
                const double c0 = c00 * (1 - y.frac) + c01 * y.frac;
                const double c1 = c10 * (1 - y.frac) + c11 * y.frac;
                out.voxels[o++] = static_cast<float>(c0 * (1 - z.frac) + c1 * z.frac);
            }
        }
    }
    return out;
}

Volume normalize_minmax(const Volume &vol) {
    check_volume(vol);
    Volume out = vol;
    if (vol.voxels.empty()) {
        return out;
    }
    const auto [lo_it, hi_it] =
        std::minmax_element(vol.voxels.begin(), vol.voxels.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) {
        std::fill(out.voxels.begin(), out.voxels.end(), 0.0F);
        return out;
    }
    const double range = hi - lo;
    for (float &v : out.voxels) {
        v = static_cast<float>((static_cast<double>(v) - lo) / range);
    }
    return out;
}

Volume preprocess(const Volume &vol, std::size_t target_side) {
    return normalize_minmax(resize_trilinear(vol, target_side));
}

// ---------------------------------------------------------------------------

std::string to_string(Split split) {
    switch (split) {
    case Split::train:
        return "train";
    case Split::val:
        return "val";
    case Split::test:
        return "test";
    case Split::unassigned:
        break;
    }
    return "-";
}

Split parse_split(const std::string &name) {
    if (name == "train") {
        return Split::train;
    }
    if (name == "val") {
        return Split::val;
    }
    if (name == "test") {
        return Split::test;
    }
    if (name == "-") {
        return Split::unassigned;
    }
    throw ArgumentError("split must be train, val, test or '-', got '" + name +
                        "'");
}

std::vector<ManifestEntry> Manifest::in_split(Split split) const {
    std::vector<ManifestEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [split](const ManifestEntry &e) { return e.split == split; });
    return out;
}

std::filesystem::path Manifest::resolve(const ManifestEntry &e) const {
    const std::filesystem::path p(e.path);
    return p.is_absolute() ? p : base_dir / p;
}

std::string format_manifest(const Manifest &m) {
    std::string out;
    for (const ManifestEntry &e : m.entries) {
        out += e.path + '\t' + std::to_string(e.label) + '\t' + e.subject_id +
               '\t' + to_string(e.split) + '\n';
    }
    return out;
}

Manifest parse_manifest(const std::string &text,
                        const std::filesystem::path &base_dir) {
    Manifest m;
    m.base_dir = base_dir;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) {
                break;
            }
            start = tab + 1;
        }
        const std::string where = "manifest line " + std::to_string(lineno);
        if (fields.size() != 4) {
            throw FormatError(where + ": expected 4 tab-separated fields, got " +
                              std::to_string(fields.size()));
        }
        ManifestEntry e;
        e.path = fields[0];
        if (fields[1] != "0" && fields[1] != "1") {
            throw FormatError(where + ": label must be 0 or 1");
        }
        e.label = fields[1] == "1" ? 1 : 0;
        e.subject_id = fields[2];
        if (e.path.empty() || e.subject_id.empty()) {
            throw FormatError(where + ": empty path or subject id");
        }
        try {
            e.split = parse_split(fields[3]);
        } catch (const ArgumentError &err) {
            throw FormatError(where + ": " + err.what());
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

void write_manifest(const Manifest &m, const std::filesystem::path &path) {
    write_file(path, format_manifest(m));
}

Manifest read_manifest(const std::filesystem::path &path) {
    return parse_manifest(read_file(path), path.parent_path());
}

Manifest stratified_split(Manifest manifest, const SplitFractions &f,
                          std::uint64_t seed) {
    const double parts[3] = {f.train, f.val, f.test};
    for (double p : parts) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ArgumentError("split fractions must lie in [0, 1]");
        }
    }
    if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9) {
        throw ArgumentError("split fractions must sum to 1");
    }
    const std::size_t active =
        static_cast<std::size_t>(std::count_if(std::begin(parts), std::end(parts),
                                               [](double p) { return p > 0; }));

    std::map<std::string, int> subject_label;
    std::vector<std::string> by_class[2];
    for (const ManifestEntry &e : manifest.entries) {
        if (e.label != 0 && e.label != 1) {
            throw ArgumentError("labels must be 0 or 1");
        }
        const auto [it, inserted] = subject_label.emplace(e.subject_id, e.label);
        if (inserted) {
            by_class[e.label].push_back(e.subject_id);
        } else if (it->second != e.label) {
            throw ArgumentError("subject '" + e.subject_id +
                                "' appears with both labels");
        }
    }

    Rng rng(seed);
    std::map<std::string, Split> assignment;
    for (int label = 0; label < 2; ++label) {
        std::vector<std::string> &subjects = by_class[label];
        const std::size_t n = subjects.size();
        if (n < active) {
            throw ArgumentError("class " + std::to_string(label) + " has " +
                                std::to_string(n) + " subjects, fewer than the " +
                                std::to_string(active) + " requested splits");
        }
        rng.shuffle(std::span<std::string>(subjects));
        // Small slack absorbs products such as 0.15 * 20 landing just below 3.
        auto take = [n](double frac) {
            return static_cast<std::size_t>(
                std::floor(frac * static_cast<double>(n) + 1e-9));
        };
        const std::size_t n_val = take(f.val);
        const std::size_t n_test = take(f.test);
        const std::size_t n_train = n - n_val - n_test;
        for (std::size_t i = 0; i < n; ++i) {
            const Split s = i < n_train            ? Split::train
                            : i < n_train + n_val ? Split::val
                                                   : Split::test;
            assignment[subjects[i]] = s;
        }
    }
    for (ManifestEntry &e : manifest.entries) {
        e.split = assignment.at(e.subject_id);
    }
    return manifest;
}

// ---------------------------------------------------------------------------

Volume synthesize_volume(int label, std::size_t side, double difficulty,
                         std::uint64_t seed) {
    if (side < 8) {
        throw ArgumentError("synthetic volumes need side >= 8, got " +
                            std::to_string(side));
    }
    if (!(difficulty >= 0.0 && difficulty <= 1.0)) {
        throw ArgumentError("difficulty must lie in [0, 1]");
    }
    constexpr double kBaseline = 0.35;
    constexpr int kBumps = 4;
    constexpr double kNoise = 0.02;

    Rng rng(seed);
    const double s = static_cast<double>(side);
    const auto s32 = static_cast<std::uint32_t>(side);
    Volume vol;
    vol.dims = {s32, s32, s32};
    vol.label = label;
    std::vector<double> field(vol.voxel_count(), 0.0);

    auto add_gaussian = [&](const double c[3], const double r[3], double amp) {
        std::size_t i = 0;
        for (std::size_t z = 0; z < side; ++z) {
            for (std::size_t y = 0; y < side; ++y) {
                for (std::size_t x = 0; x < side; ++x) {
                    const double dz = (static_cast<double>(z) - c[0]) / r[0];
                    const double dy = (static_cast<double>(y) - c[1]) / r[1];
                    const double dx = (static_cast<double>(x) - c[2]) / r[2];
                    field[i++] += amp * std::exp(-(dz * dz + dy * dy + dx * dx));
                }
            }
        }
    };

    for (int b = 0; b < kBumps; ++b) {
        double c[3];
        for (double &v : c) {
            v = rng.uniform(0.0, s - 1.0);
        }
        const double sigma = rng.uniform(0.25, 0.5) * s;
        const double r[3] = {sigma * std::sqrt(2.0), sigma * std::sqrt(2.0),
                             sigma * std::sqrt(2.0)};
        add_gaussian(c, r, rng.uniform(-0.15, 0.15));
    }
    double mean = 0.0;
    for (double v : field) {
        mean += v;
    }
    mean /= static_cast<double>(field.size());
    for (double &v : field) {
        v += kBaseline - mean;
    }

    if (label == 1) {
        const double boost = 1.0 - difficulty;
        const auto blobs = 1 + rng.below(5);
        for (std::uint64_t b = 0; b < blobs; ++b) {
            double c[3];
            double r[3];
            for (double &v : c) {
                v = rng.uniform(0.2, 0.8) * (s - 1.0);
            }
            for (double &v : r) {
                v = rng.uniform(0.05, 0.15) * s;
            }
            add_gaussian(c, r, boost);
        }
    }

    vol.voxels.resize(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        vol.voxels[i] = static_cast<float>(field[i] + kNoise * rng.normal());
    }
    return vol;
}

Manifest generate_synthetic(const SyntheticOptions &opts,
                            const std::filesystem::path &out_dir) {
    if (opts.n_per_class < 1) {
        throw ArgumentError("n_per_class must be >= 1");
    }
    if (opts.side < 8) {
        throw ArgumentError("side must be >= 8, got " + std::to_string(opts.side));
    }
    if (!(opts.difficulty >= 0.0 && opts.difficulty <= 1.0)) {
        throw ArgumentError("difficulty must lie in [0, 1], got " +
                            std::to_string(opts.difficulty));
    }
    std::filesystem::create_directories(out_dir);
    Manifest m;
    m.base_dir = out_dir;
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < opts.n_per_class; ++i) {
        for (int label = 0; label < 2; ++label, ++index) {
            char id[32];
            std::snprintf(id, sizeof id, "sub-%04llu",
                          static_cast<unsigned long long>(index));
            Volume v = synthesize_volume(label, opts.side, opts.difficulty,
                                         derive_seed(opts.seed, index));
            v.subject_id = id;
            const std::string file = std::string(id) + ".qvol";
            write_volume(v, out_dir / file);
            m.entries.push_back({file, label, id, Split::unassigned});
        }
    }
    m = stratified_split(std::move(m), opts.fractions,
                         derive_seed(opts.seed, 0xC1A55ULL));
    write_manifest(m, out_dir / "manifest.tsv");
    return m;
}

} // namespace qres
