#include "cfota/idx.hpp"

#include "cfota/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>

namespace cfota {

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char>& bytes, std::size_t at, const std::string& path) {
    if (bytes.size() < at + 4) throw TruncatedFile("header of '" + path + "' is truncated");
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
           (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

}  // namespace

LabelFilter emnist_a_to_j() { return {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}; }

Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path,
                         const std::optional<LabelFilter>& filter, int classes) {
    const auto images = read_file(images_path);
    const auto labels = read_file(labels_path);

    if (be32(images, 0, images_path) != 0x00000803) throw BadMagic("'" + images_path + "' is not an IDX image file");
    if (be32(labels, 0, labels_path) != 0x00000801) throw BadMagic("'" + labels_path + "' is not an IDX label file");

    const std::size_t count = be32(images, 4, images_path);
    const std::size_t rows = be32(images, 8, images_path);
    const std::size_t cols = be32(images, 12, images_path);
    const std::size_t label_count = be32(labels, 4, labels_path);
    const std::size_t pixels = rows * cols;
    if (images.size() < 16 + count * pixels) throw TruncatedFile("'" + images_path + "' is truncated");
    if (labels.size() < 8 + label_count) throw TruncatedFile("'" + labels_path + "' is truncated");
    if (label_count != count) throw LabelOutOfRange("image and label counts differ");

    std::vector<std::size_t> kept;
    std::vector<int> mapped;
    for (std::size_t i = 0; i < count; ++i) {
        const int raw = labels[8 + i];
        if (filter) {
            const auto it = std::find(filter->keep.begin(), filter->keep.end(), raw);
            if (it == filter->keep.end()) continue;
            kept.push_back(i);
            mapped.push_back(static_cast<int>(it - filter->keep.begin()));
        } else {
            if (raw >= classes) {
                throw LabelOutOfRange("label " + std::to_string(raw) + " at sample " + std::to_string(i));
            }
            kept.push_back(i);
            mapped.push_back(raw);
        }
    }
    if (filter && static_cast<int>(filter->keep.size()) > classes) {
        throw LabelOutOfRange("filter keeps more labels than classes");
    }

    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(pixels));
    for (std::size_t r = 0; r < kept.size(); ++r) {
        const unsigned char* src = images.data() + 16 + kept[r] * pixels;
        for (std::size_t p = 0; p < pixels; ++p) {
            out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) = src[p] / 255.0;
        }
    }
    out.labels = std::move(mapped);
    return out;
}

}  // namespace cfota
