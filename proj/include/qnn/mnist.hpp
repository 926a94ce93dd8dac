#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qnn {

struct Dataset {
  int n = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> images;          // n * rows * cols, brightness in [0,1]
  std::vector<std::uint8_t> labels;   // n entries, 0..9

  int pixels() const { return rows * cols; }
  const float* image(int i) const { return images.data() + size_t(i) * pixels(); }
};

// IDX pair (big-endian magic 0x803 images / 0x801 labels), plain or gzipped.
Dataset load_mnist(const std::string& images_path, const std::string& labels_path);

}  // namespace qnn
