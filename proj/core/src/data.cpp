#include "cnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <zlib.h>

#include "cnet/rng.hpp"

namespace cnet {

void LabeledDataset::validate(bool check_input_range) const {
    const std::size_t n = inputs.size();
    auto check_len = [&](std::size_t len, const char* what) {
        if (len != n) {
            throw ValidationError("dataset '" + name + "': " + what + " count " +
                                  std::to_string(len) + " != input count " + std::to_string(n));
        }
    };
    check_len(raw_targets.size(), "raw target");
    check_len(labels.size(), "label");
    if (!remapped_targets.empty()) check_len(remapped_targets.size(), "remapped target");
    if (!preimage_targets.empty()) check_len(preimage_targets.size(), "pre-image target");

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ones = 0;
        for (double v : raw_targets[i]) {
            if (v == 1.0) {
                ++ones;
            } else if (v != 0.0) {
                throw ValidationError("dataset '" + name + "': target " + std::to_string(i) +
                                          " is not one-hot",
                                      {i});
            }
        }
        if (ones != 1) {
            throw ValidationError("dataset '" + name + "': target " + std::to_string(i) +
                                      " has " + std::to_string(ones) + " ones",
                                  {i});
        }
        if (check_input_range) {
            for (double v : inputs[i]) {
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw ValidationError("dataset '" + name + "': input " + std::to_string(i) +
                                              " has component outside [0,1]",
                                          {i});
                }
            }
        }
    }
}

// --- idx ---------------------------------------------------------------------

std::size_t IdxHeader::payload_size() const {
    std::size_t n = 1;
    for (std::uint32_t d : dims) n *= d;
    return n;
}

namespace {

std::uint32_t read_be32(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

} // namespace

IdxHeader parse_idx_header(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic) {
    if (bytes.size() < 4) {
        throw IdxError(IdxError::Kind::Truncated, bytes.size(),
                       "idx: file ends inside the magic word (" + std::to_string(bytes.size()) +
                           " of 4 bytes)");
    }
    IdxHeader h;
    h.magic = read_be32(bytes.data());
    if (h.magic != expected_magic) {
        char want[16], got[16];
        std::snprintf(want, sizeof want, "0x%08x", expected_magic);
        std::snprintf(got, sizeof got, "0x%08x", h.magic);
        throw IdxError(IdxError::Kind::BadMagic, 0,
                       std::string("idx: bad magic at offset 0: expected ") + want + ", got " + got);
    }
    const std::size_t ndim = h.magic & 0xff;
    if (bytes.size() < 4 + 4 * ndim) {
        throw IdxError(IdxError::Kind::Truncated, bytes.size(),
                       "idx: file ends inside the dimension words (" +
                           std::to_string(bytes.size()) + " of " + std::to_string(4 + 4 * ndim) +
                           " header bytes)");
    }
    h.dims.resize(ndim);
    for (std::size_t i = 0; i < ndim; ++i) h.dims[i] = read_be32(bytes.data() + 4 + 4 * i);

    const std::size_t expected = h.header_size() + h.payload_size();
    if (bytes.size() != expected) {
        const auto kind = bytes.size() < expected ? IdxError::Kind::Truncated
                                                  : IdxError::Kind::DimMismatch;
        throw IdxError(kind, bytes.size(),
                       "idx: payload length mismatch: header promises " + std::to_string(expected) +
                           " bytes total, file has " + std::to_string(bytes.size()));
    }
    return h;
}

namespace {

std::vector<Vector> images_from_payload(const IdxHeader& h, const std::uint8_t* payload,
                                        Normalization norm) {
    const std::size_t count = h.dims[0];
    const std::size_t pixels = static_cast<std::size_t>(h.dims[1]) * h.dims[2];
    std::vector<Vector> images(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector& v = images[i];
        v.resize(pixels);
        const std::uint8_t* src = payload + i * pixels;
        switch (norm) {
        case Normalization::Scale01:
            for (std::size_t j = 0; j < pixels; ++j) v[j] = src[j] / 255.0;
            break;
        case Normalization::Raw:
            for (std::size_t j = 0; j < pixels; ++j) v[j] = src[j];
            break;
        case Normalization::Centered:
            for (std::size_t j = 0; j < pixels; ++j) v[j] = src[j] / 255.0 - 0.5;
            break;
        }
    }
    return images;
}

} // namespace

std::vector<Vector> parse_idx_images(std::span<const std::uint8_t> bytes) {
    IdxHeader h = parse_idx_header(bytes, kIdxImagesMagic);
    return images_from_payload(h, bytes.data() + h.header_size(), Normalization::Scale01);
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    IdxHeader h = parse_idx_header(bytes, kIdxLabelsMagic);
    const std::uint8_t* payload = bytes.data() + h.header_size();
    std::vector<int> labels(h.dims[0]);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (payload[i] > 9) {
            throw IdxError(IdxError::Kind::BadLabel, h.header_size() + i,
                           "idx: label byte " + std::to_string(payload[i]) + " at offset " +
                               std::to_string(h.header_size() + i) + " exceeds 9");
        }
        labels[i] = payload[i];
    }
    return labels;
}

std::vector<std::uint8_t> serialize_idx_images(const std::vector<Vector>& images,
                                               std::uint32_t rows, std::uint32_t cols) {
    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    std::vector<std::uint8_t> out;
    out.reserve(16 + images.size() * pixels);
    write_be32(out, kIdxImagesMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    write_be32(out, rows);
    write_be32(out, cols);
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].size() != pixels) {
            throw ValidationError("serialize_idx_images: image " + std::to_string(i) + " has " +
                                      std::to_string(images[i].size()) + " pixels, expected " +
                                      std::to_string(pixels),
                                  {i});
        }
        for (double v : images[i]) {
            const long b = std::lround(v * 255.0);
            out.push_back(static_cast<std::uint8_t>(std::clamp(b, 0L, 255L)));
        }
    }
    return out;
}

std::vector<std::uint8_t> serialize_idx_labels(const std::vector<int>& labels) {
    std::vector<std::uint8_t> out;
    out.reserve(8 + labels.size());
    write_be32(out, kIdxLabelsMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] > 9) {
            throw ValidationError("serialize_idx_labels: label " + std::to_string(labels[i]) +
                                      " at index " + std::to_string(i) + " out of range 0..9",
                                  {i});
        }
        out.push_back(static_cast<std::uint8_t>(labels[i]));
    }
    return out;
}

// --- gzip --------------------------------------------------------------------

namespace {

std::vector<std::uint8_t> gzip_inflate(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) {
        throw IoError("gzip: inflateInit failed");
    }
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buf(1 << 16);
    zs.next_in = const_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        zs.next_out = buf.data();
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw IoError("gzip: corrupt stream (zlib rc " + std::to_string(rc) + ")");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

} // namespace

std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK) {
        throw IoError("gzip: deflateInit failed");
    }
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> buf(1 << 16);
    zs.next_in = const_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        zs.next_out = buf.data();
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = deflate(&zs, Z_FINISH);
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
    } while (rc == Z_OK);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw IoError("gzip: deflate failed");
    return out;
}

std::vector<std::uint8_t> read_file_maybe_gzip(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) {
        return gzip_inflate(bytes);
    }
    return bytes;
}

// --- dataset assembly ----------------------------------------------------------

Vector one_hot(int label, int classes) {
    if (label < 0 || label >= classes) {
        throw ValidationError("one_hot: label " + std::to_string(label) + " out of range 0.." +
                              std::to_string(classes - 1));
    }
    Vector v(classes, 0.0);
    v[label] = 1.0;
    return v;
}

LabeledDataset load_idx_dataset(const std::filesystem::path& images_path,
                                const std::filesystem::path& labels_path, Normalization norm,
                                std::string name) {
    const auto img_bytes = read_file_maybe_gzip(images_path);
    const auto lab_bytes = read_file_maybe_gzip(labels_path);
    IdxHeader h = parse_idx_header(img_bytes, kIdxImagesMagic);
    std::vector<int> labels = parse_idx_labels(lab_bytes);
    if (h.dims[0] != labels.size()) {
        throw ValidationError("image file has " + std::to_string(h.dims[0]) +
                              " items but label file has " + std::to_string(labels.size()));
    }
    LabeledDataset ds;
    ds.name = name.empty() ? images_path.filename().string() : std::move(name);
    ds.inputs = images_from_payload(h, img_bytes.data() + h.header_size(), norm);
    ds.labels = std::move(labels);
    ds.raw_targets.reserve(ds.labels.size());
    for (int lab : ds.labels) ds.raw_targets.push_back(one_hot(lab));
    return ds;
}

// --- subsetting ----------------------------------------------------------------

namespace {

// Proportional quotas by largest remainder; every class ends within +-1 of
// its exact share and the quotas sum to count.
std::vector<std::size_t> class_quotas(const std::vector<std::size_t>& pool_sizes,
                                      std::size_t count, std::size_t total) {
    const std::size_t k = pool_sizes.size();
    std::vector<std::size_t> quota(k);
    std::vector<std::pair<double, std::size_t>> remainders(k);
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const double exact = static_cast<double>(count) * pool_sizes[c] / total;
        quota[c] = static_cast<std::size_t>(exact);
        remainders[c] = {exact - static_cast<double>(quota[c]), c};
        assigned += quota[c];
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < count; ++i) {
        const std::size_t c = remainders[i % k].second;
        if (quota[c] < pool_sizes[c]) {
            ++quota[c];
            ++assigned;
        }
    }
    return quota;
}

// First `take` entries of a seeded Fisher-Yates shuffle of `indices`.
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> indices,
                                                    std::size_t take, SplitMix64& rng) {
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + rng.below(indices.size() - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(take);
    return indices;
}

std::vector<std::size_t> pick_indices(const LabeledDataset& data,
                                      const std::vector<std::size_t>& from, std::size_t count,
                                      std::uint64_t seed, bool stratified) {
    SplitMix64 rng(seed);
    std::vector<std::size_t> picked;
    if (!stratified) {
        picked = sample_without_replacement(from, count, rng);
    } else {
        int max_label = 0;
        for (std::size_t i : from) max_label = std::max(max_label, data.labels[i]);
        std::vector<std::vector<std::size_t>> by_class(max_label + 1);
        for (std::size_t i : from) by_class[data.labels[i]].push_back(i);
        std::vector<std::size_t> pool_sizes(by_class.size());
        for (std::size_t c = 0; c < by_class.size(); ++c) pool_sizes[c] = by_class[c].size();
        const auto quota = class_quotas(pool_sizes, count, from.size());
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            SplitMix64 class_rng = rng.split();
            auto sel = sample_without_replacement(std::move(by_class[c]), quota[c], class_rng);
            picked.insert(picked.end(), sel.begin(), sel.end());
        }
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

LabeledDataset gather(const LabeledDataset& data, const std::vector<std::size_t>& idx,
                      std::string name) {
    LabeledDataset out;
    out.name = std::move(name);
    out.inputs.reserve(idx.size());
    out.raw_targets.reserve(idx.size());
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
        out.inputs.push_back(data.inputs[i]);
        out.raw_targets.push_back(data.raw_targets[i]);
        out.labels.push_back(data.labels[i]);
        if (!data.remapped_targets.empty()) out.remapped_targets.push_back(data.remapped_targets[i]);
        if (!data.preimage_targets.empty()) out.preimage_targets.push_back(data.preimage_targets[i]);
    }
    return out;
}

} // namespace

LabeledDataset subset(const LabeledDataset& data, std::size_t count, std::uint64_t seed,
                      bool stratified) {
    if (count > data.size()) {
        throw ValidationError("subset: requested " + std::to_string(count) + " of " +
                              std::to_string(data.size()) + " samples");
    }
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto idx = pick_indices(data, all, count, seed, stratified);
    return gather(data, idx, data.name + "/subset" + std::to_string(count));
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& pool,
                                                           std::size_t train_count,
                                                           std::size_t test_count,
                                                           std::uint64_t seed) {
    if (train_count + test_count > pool.size()) {
        throw ValidationError("stratified_split: " + std::to_string(train_count) + "+" +
                              std::to_string(test_count) + " samples requested from pool of " +
                              std::to_string(pool.size()));
    }
    std::vector<std::size_t> all(pool.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto train_idx = pick_indices(pool, all, train_count, seed, true);

    std::vector<bool> taken(pool.size(), false);
    for (std::size_t i : train_idx) taken[i] = true;
    std::vector<std::size_t> rest;
    rest.reserve(pool.size() - train_idx.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!taken[i]) rest.push_back(i);
    }
    const auto test_idx = pick_indices(pool, rest, test_count, seed ^ 0x9e3779b97f4a7c15ULL, true);
    return {gather(pool, train_idx, pool.name + "/train"),
            gather(pool, test_idx, pool.name + "/test")};
}

LabeledDataset synthetic_blobs(int classes, int per_class, std::size_t dim, double separation,
                               std::uint64_t seed) {
    if (classes < 2) throw ValidationError("synthetic_blobs: need at least 2 classes");
    LabeledDataset ds;
    ds.name = "blobs-c" + std::to_string(classes) + "-n" + std::to_string(per_class);
    if (per_class == 0) return ds; // degenerate: empty dataset

    SplitMix64 rng(seed);
    std::vector<Vector> centers(classes, Vector(dim));
    for (auto& c : centers) {
        for (double& v : c) v = rng.uniform(0.2, 0.8);
    }
    double min_dist_sq = std::numeric_limits<double>::infinity();
    for (int a = 0; a < classes; ++a) {
        for (int b = a + 1; b < classes; ++b) {
            min_dist_sq = std::min(min_dist_sq, sq_dist(centers[a], centers[b]));
        }
    }
    // Sigma derived from the realized center spacing so the requested
    // separation (in sigmas) holds exactly for the closest pair.
    const double sigma = std::sqrt(min_dist_sq) / std::max(separation, 1e-9);

    for (int c = 0; c < classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            Vector x(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] = std::clamp(centers[c][j] + sigma * rng.next_gaussian(), 0.0, 1.0);
            }
            ds.inputs.push_back(std::move(x));
            ds.raw_targets.push_back(one_hot(c, classes));
            ds.labels.push_back(c);
        }
    }
    return ds;
}

} // namespace cnet
