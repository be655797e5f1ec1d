#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cnet/linalg.hpp"

namespace cnet {

/// How raw pixel bytes become network inputs.
enum class Normalization {
    Scale01,  // v / 255 (default)
    Raw,      // v as-is, 0..255
    Centered, // v / 255 - 0.5
};

/// Inputs with their targets in the three forms the training methods need:
/// raw one-hot, remapped into the activation codomain, and pre-images of the
/// remapped targets. The latter two are filled once by preprocessing and are
/// then constants of the optimization.
struct LabeledDataset {
    std::string name;
    std::vector<Vector> inputs;
    std::vector<Vector> raw_targets; // exactly one-hot
    std::vector<Vector> remapped_targets;
    std::vector<Vector> preimage_targets;
    std::vector<int> labels; // argmax of raw_targets, kept for eval/subsetting

    std::size_t size() const { return inputs.size(); }
    std::size_t input_dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
    std::size_t target_dim() const { return raw_targets.empty() ? 0 : raw_targets.front().size(); }
    bool preprocessed() const { return !preimage_targets.empty(); }

    /// Internal consistency: equal list lengths, one-hot targets, inputs in [0,1]
    /// (input range checked only when `check_input_range`).
    void validate(bool check_input_range = true) const;
};

/// IDX container header: big-endian magic then one big-endian u32 per
/// dimension. 0x00000803 marks images (3 dims), 0x00000801 labels (1 dim).
struct IdxHeader {
    std::uint32_t magic = 0;
    std::vector<std::uint32_t> dims;

    std::size_t payload_size() const;
    std::size_t header_size() const { return 4 + 4 * dims.size(); }
};

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Parses just the header; throws IdxError with the failing byte offset.
IdxHeader parse_idx_header(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic);

/// One vector per image, row-major pixels scaled by 1/255.
std::vector<Vector> parse_idx_images(std::span<const std::uint8_t> bytes);

/// One label per item, each validated to be <= 9.
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

/// Inverse of parse_idx_images: quantizes each component back to a byte.
/// serialize(parse(bytes)) == bytes for any well-formed input.
std::vector<std::uint8_t> serialize_idx_images(const std::vector<Vector>& images,
                                               std::uint32_t rows, std::uint32_t cols);
std::vector<std::uint8_t> serialize_idx_labels(const std::vector<int>& labels);

/// Whole file contents; gzip is detected by the 1f 8b prefix and inflated
/// transparently.
std::vector<std::uint8_t> read_file_maybe_gzip(const std::filesystem::path& path);

/// Gzip-compress (used by tests and the fetch verifier).
std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> bytes);

Vector one_hot(int label, int classes = 10);

/// Builds a dataset from parallel image/label IDX files. Counts must agree.
LabeledDataset load_idx_dataset(const std::filesystem::path& images_path,
                                const std::filesystem::path& labels_path,
                                Normalization norm = Normalization::Scale01,
                                std::string name = "");

/// Deterministic subset of `count` samples. Stratified mode keeps every
/// class within +-1 of its proportional share. Original sample order is
/// preserved (count == size gives back the identical dataset).
LabeledDataset subset(const LabeledDataset& data, std::size_t count, std::uint64_t seed,
                      bool stratified);

/// Two disjoint stratified subsets drawn from one pool (train first, then
/// test from the remainder).
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& pool,
                                                           std::size_t train_count,
                                                           std::size_t test_count,
                                                           std::uint64_t seed);

/// Gaussian class clusters at deterministic centers, inputs clipped to [0,1].
/// Centers are placed at least `separation` cluster-sigmas apart, so large
/// separations make the classes trivially separable.
LabeledDataset synthetic_blobs(int classes, int per_class, std::size_t dim, double separation,
                               std::uint64_t seed);

} // namespace cnet
