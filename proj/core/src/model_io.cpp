// SPDX-License-Identifier: Apache-2.0
#include "ttconv/model_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace ttconv {

namespace {

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; big-endian hosts need byte swaps");

constexpr char kMagic[4] = {'T', 'T', 'C', 'V'};
constexpr std::uint16_t kVersion = 1;

std::uint32_t checksum(std::span<const std::uint8_t> bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(0u, bytes.data(), static_cast<uInt>(bytes.size())));
}

// --- little-endian encode/decode -------------------------------------------

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::string label)
            : bytes_(bytes), label_(std::move(label)) {}

    std::uint16_t u16() { return static_cast<std::uint16_t>(u64_n(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(u64_n(4)); }
    std::uint64_t u64() { return u64_n(8); }
    float f32() {
        std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return out;
    }
    bool exhausted() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw CorruptionError("model file: section " + label_ + " is truncated");
        }
    }
    std::uint64_t u64_n(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::string label_;
    std::size_t pos_ = 0;
};

// --- section payload builders ----------------------------------------------

std::vector<std::uint8_t> build_layr(const CompressedModel& model) {
    std::vector<std::uint8_t> out;
    put_u32(out, static_cast<std::uint32_t>(model.layers.size()));
    put_u32(out, static_cast<std::uint32_t>(model.setting.uniform_rank));
    put_u32(out, model.setting.tolerance ? 1u : 0u);
    std::uint64_t tol_bits = 0;
    if (model.setting.tolerance) {
        std::memcpy(&tol_bits, &*model.setting.tolerance, 8);
    }
    put_u64(out, tol_bits);

    for (const CompressedLayer& layer : model.layers) {
        put_u32(out, static_cast<std::uint32_t>(layer.id.size()));
        out.insert(out.end(), layer.id.begin(), layer.id.end());
        out.push_back(layer.selected ? 1 : 0);
        out.push_back(layer.is_tt() ? 1 : 0);
        out.push_back(layer.spec().has_bias ? 1 : 0);
        out.push_back(0);
        if (layer.is_tt()) {
            const std::vector<Index> ranks = layer.tt().internal_ranks();
            put_u32(out, static_cast<std::uint32_t>(ranks.size()));
            for (Index r : ranks) put_u32(out, static_cast<std::uint32_t>(r));
        }
    }
    return out;
}

std::vector<std::uint8_t> build_core(const CompressedModel& model) {
    std::vector<std::uint8_t> out;
    for (const CompressedLayer& layer : model.layers) {
        if (layer.is_tt()) {
            for (double v : layer.tt().spatial_core().data) put_f32(out, static_cast<float>(v));
            for (const TtMatrixCore& core : layer.tt().channel_cores()) {
                for (double v : core.data) put_f32(out, static_cast<float>(v));
            }
        } else {
            for (double v : layer.dense().weights()) put_f32(out, static_cast<float>(v));
        }
    }
    return out;
}

std::vector<std::uint8_t> build_bias(const CompressedModel& model) {
    std::vector<std::uint8_t> out;
    for (const CompressedLayer& layer : model.layers) {
        std::span<const double> bias =
            layer.is_tt() ? layer.tt().bias() : layer.dense().bias();
        for (double v : bias) put_f32(out, static_cast<float>(v));
    }
    return out;
}

} // namespace

void save_model(const CompressedModel& model, const std::filesystem::path& path) {
    if (model.layers.size() != model.manifest.layers.size()) {
        throw ShapeError("model layer list does not match its manifest");
    }

    const std::string manifest_text = render_manifest(model.manifest);
    std::vector<std::uint8_t> mani(manifest_text.begin(), manifest_text.end());
    std::vector<std::uint8_t> layr = build_layr(model);
    std::vector<std::uint8_t> core = build_core(model);
    std::vector<std::uint8_t> bias = build_bias(model);

    struct Section {
        const char* tag;
        const std::vector<std::uint8_t>* payload;
    };
    const Section sections[] = {{"MANI", &mani}, {"LAYR", &layr}, {"CORE", &core}, {"BIAS", &bias}};

    std::vector<std::uint8_t> file;
    file.insert(file.end(), kMagic, kMagic + 4);
    put_u16(file, kVersion);
    put_u16(file, 0);
    put_u32(file, 4);

    std::uint64_t offset = 12 + 4 * 24; // header + table
    for (const Section& section : sections) {
        file.insert(file.end(), section.tag, section.tag + 4);
        put_u32(file, checksum(*section.payload));
        put_u64(file, offset);
        put_u64(file, section.payload->size());
        offset += section.payload->size();
    }
    for (const Section& section : sections) {
        file.insert(file.end(), section.payload->begin(), section.payload->end());
    }

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write model file '" + path.string() + "'");
        out.write(reinterpret_cast<const char*>(file.data()),
                  static_cast<std::streamsize>(file.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("failed writing model file '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move model file into place at '" + path.string() + "'");
    }
}

CompressedModel load_model(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary | std::ios::ate);
    if (!stream) throw IoError("cannot open model file '" + path.string() + "'");
    const std::streamsize size = stream.tellg();
    std::vector<std::uint8_t> file(static_cast<std::size_t>(size));
    stream.seekg(0);
    stream.read(reinterpret_cast<char*>(file.data()), size);
    if (!stream) throw IoError("failed reading model file '" + path.string() + "'");

    if (file.size() < 12 || std::memcmp(file.data(), kMagic, 4) != 0) {
        throw CorruptionError("model file: bad magic, not a TTCV container");
    }
    Reader header(std::span<const std::uint8_t>(file).subspan(4), "header");
    const std::uint16_t version = header.u16();
    header.u16(); // reserved
    if (version != kVersion) {
        throw VersionError("model file declares unsupported version " + std::to_string(version) +
                           " (this build reads version " + std::to_string(kVersion) + ")");
    }
    const std::uint32_t section_count = header.u32();
    if (file.size() < 12 + static_cast<std::size_t>(section_count) * 24) {
        throw CorruptionError("model file: section table is truncated");
    }

    struct SectionRef {
        std::string tag;
        std::span<const std::uint8_t> payload;
    };
    std::vector<SectionRef> sections;
    std::size_t table_pos = 12;
    for (std::uint32_t i = 0; i < section_count; ++i) {
        const char* entry = reinterpret_cast<const char*>(file.data() + table_pos);
        std::string tag(entry, 4);
        Reader fields(std::span<const std::uint8_t>(file).subspan(table_pos + 4, 20), tag);
        const std::uint32_t crc = fields.u32();
        const std::uint64_t offset = fields.u64();
        const std::uint64_t length = fields.u64();
        if (offset + length > file.size() || offset < 12 + section_count * 24ull) {
            throw CorruptionError("model file: section " + tag + " is out of bounds");
        }
        std::span<const std::uint8_t> payload =
            std::span<const std::uint8_t>(file).subspan(static_cast<std::size_t>(offset),
                                    static_cast<std::size_t>(length));
        if (checksum(payload) != crc) {
            throw CorruptionError("model file: section " + tag + " checksum mismatch");
        }
        sections.push_back(SectionRef{std::move(tag), payload});
        table_pos += 24;
    }

    auto section = [&](std::string_view tag) -> std::span<const std::uint8_t> {
        for (const SectionRef& s : sections) {
            if (s.tag == tag) return s.payload;
        }
        throw CorruptionError("model file: missing section " + std::string(tag));
    };

    // Manifest echo is the structural source of truth.
    std::span<const std::uint8_t> mani = section("MANI");
    NetworkManifest manifest = parse_manifest(
        std::string_view(reinterpret_cast<const char*>(mani.data()), mani.size()),
        path.string() + "#MANI");

    // LAYR: per-layer storage kind and ranks.
    Reader layr(section("LAYR"), "LAYR");
    CompressedModel model;
    const std::uint32_t layer_count = layr.u32();
    model.setting.uniform_rank = layr.u32();
    const bool has_tol = layr.u32() != 0;
    const std::uint64_t tol_bits = layr.u64();
    if (has_tol) {
        double tol;
        std::memcpy(&tol, &tol_bits, 8);
        model.setting.tolerance = tol;
    }
    if (layer_count != manifest.layers.size()) {
        throw CorruptionError("model file: LAYR lists " + std::to_string(layer_count) +
                              " layers, manifest has " + std::to_string(manifest.layers.size()));
    }

    Reader core(section("CORE"), "CORE");
    Reader bias_reader(section("BIAS"), "BIAS");

    auto read_floats = [&](Reader& reader, std::uint64_t count) {
        std::vector<double> values(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double v = static_cast<double>(reader.f32());
            if (!std::isfinite(v)) {
                throw CorruptionError("model file: non-finite value in float payload");
            }
            values[i] = v;
        }
        return values;
    };

    for (std::uint32_t i = 0; i < layer_count; ++i) {
        const ManifestLayer& layer = manifest.layers[i];
        const std::uint32_t id_len = layr.u32();
        const std::string id = layr.bytes(id_len);
        const std::string flags = layr.bytes(4);
        const bool selected = flags[0] != 0;
        const bool is_tt = flags[1] != 0;
        const bool has_bias = flags[2] != 0;
        if (id != layer.id || selected != layer.selected || has_bias != layer.spec.has_bias) {
            throw CorruptionError("model file: LAYR entry '" + id +
                                  "' disagrees with the manifest echo");
        }
        if (is_tt != layer.selected) {
            throw CorruptionError("model file: layer '" + id +
                                  "' storage kind disagrees with its selected flag");
        }

        std::vector<double> bias;
        if (layer.spec.has_bias) {
            bias = read_floats(bias_reader, static_cast<std::uint64_t>(layer.spec.out_channels));
        }
        if (is_tt) {
            const std::uint32_t order = layr.u32();
            if (order != static_cast<std::uint32_t>(layer.spec.tt_order())) {
                throw CorruptionError("model file: layer '" + id + "' rank list has order " +
                                      std::to_string(order) + ", plans have order " +
                                      std::to_string(layer.spec.tt_order()));
            }
            std::vector<Index> ranks(order);
            for (std::uint32_t r = 0; r < order; ++r) ranks[r] = layr.u32();

            const Index k2 = layer.spec.kernel_size * layer.spec.kernel_size;
            TtCore spatial(1, k2, ranks[0],
                           read_floats(core, static_cast<std::uint64_t>(k2 * ranks[0])));
            std::vector<TtMatrixCore> channel_cores;
            for (std::uint32_t f = 0; f < order; ++f) {
                const Index left = ranks[f];
                const Index right = f + 1 < order ? ranks[f + 1] : 1;
                const Index rows = layer.spec.in_plan.factors[f];
                const Index cols = layer.spec.out_plan.factors[f];
                channel_cores.emplace_back(
                    left, rows, cols, right,
                    read_floats(core, static_cast<std::uint64_t>(left * rows * cols * right)));
            }
            try {
                model.layers.push_back(CompressedLayer{
                    id, true,
                    TtConvKernel(layer.spec, std::move(spatial), std::move(channel_cores),
                                 std::move(bias))});
            } catch (const ShapeError& e) {
                throw CorruptionError("model file: layer '" + id + "': " + e.what());
            }
        } else {
            std::vector<double> weights = read_floats(core, layer.spec.dense_param_count());
            try {
                model.layers.push_back(CompressedLayer{
                    id, false, DenseConvKernel(layer.spec, std::move(weights), std::move(bias))});
            } catch (const Error& e) {
                throw CorruptionError("model file: layer '" + id + "': " + e.what());
            }
        }
    }
    if (!core.exhausted()) {
        throw CorruptionError("model file: CORE section has trailing bytes");
    }
    if (!bias_reader.exhausted()) {
        throw CorruptionError("model file: BIAS section has trailing bytes");
    }
    model.manifest = std::move(manifest);
    return model;
}

} // namespace ttconv
