#include "qnn/mnist.hpp"

#include <zlib.h>

#include <stdexcept>

namespace qnn {

namespace {

// gzread passes uncompressed files through untouched.
std::vector<unsigned char> read_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("idx: cannot open " + path);
  std::vector<unsigned char> bytes;
  unsigned char buf[1 << 16];
  int got;
  while ((got = gzread(f, buf, sizeof buf)) > 0)
    bytes.insert(bytes.end(), buf, buf + got);
  bool bad = got < 0;
  gzclose(f);
  if (bad) throw std::runtime_error("idx: read error in " + path);
  return bytes;
}

std::uint32_t be32(const std::vector<unsigned char>& b, size_t off) {
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
         (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

}  // namespace

Dataset load_mnist(const std::string& images_path, const std::string& labels_path) {
  std::vector<unsigned char> img = read_file(images_path);
  if (img.size() < 16)
    throw std::runtime_error("idx: truncated header in " + images_path);
  if (be32(img, 0) != 0x00000803u)
    throw std::runtime_error("idx: bad magic number in " + images_path +
                             " (want 0x00000803)");
  Dataset d;
  d.n = static_cast<int>(be32(img, 4));
  d.rows = static_cast<int>(be32(img, 8));
  d.cols = static_cast<int>(be32(img, 12));
  size_t want = 16 + size_t(d.n) * d.rows * d.cols;
  if (img.size() < want)
    throw std::runtime_error("idx: truncated payload in " + images_path);

  std::vector<unsigned char> lab = read_file(labels_path);
  if (lab.size() < 8)
    throw std::runtime_error("idx: truncated header in " + labels_path);
  if (be32(lab, 0) != 0x00000801u)
    throw std::runtime_error("idx: bad magic number in " + labels_path +
                             " (want 0x00000801)");
  int n_labels = static_cast<int>(be32(lab, 4));
  if (n_labels != d.n)
    throw std::runtime_error("idx: count mismatch: " + std::to_string(d.n) +
                             " images vs " + std::to_string(n_labels) + " labels");
  if (lab.size() < 8 + size_t(n_labels))
    throw std::runtime_error("idx: truncated payload in " + labels_path);

  d.images.resize(size_t(d.n) * d.rows * d.cols);
  for (size_t i = 0; i < d.images.size(); ++i)
    d.images[i] = img[16 + i] / 255.0f;
  d.labels.assign(lab.begin() + 8, lab.begin() + 8 + n_labels);
  return d;
}

}  // namespace qnn
