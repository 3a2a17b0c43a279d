/*
 * Copyright 2026 The AgroSense Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "agrosense/image.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "agrosense/error.hpp"

namespace agro {

namespace {

class PpmReader {
 public:
  PpmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) raise(ErrorCode::kCorruptFile, "PPM truncated");
    if (!std::isdigit(bytes_[pos_])) raise(ErrorCode::kCorruptFile, "PPM expected a number");
    std::size_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_++] - '0');
      if (v > (1u << 24)) raise(ErrorCode::kCorruptFile, "PPM number too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t read_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

SoilImage decode_ppm(std::span<const std::uint8_t> bytes, bool binary) {
  PpmReader reader(bytes);
  reader.advance(2);
  SoilImage img;
  img.width = reader.next_uint();
  img.height = reader.next_uint();
  const std::size_t maxval = reader.next_uint();
  if (maxval != 255) raise(ErrorCode::kFormat, "PPM maxval " + std::to_string(maxval) + " unsupported (need 255)");
  if (img.width == 0 || img.height == 0) raise(ErrorCode::kCorruptFile, "PPM has zero size");
  const std::size_t plane = img.width * img.height;
  img.data.assign(3 * plane, 0.0);
  if (binary) {
    reader.advance(1);  // single whitespace byte after maxval
    if (reader.pos() + 3 * plane > bytes.size()) raise(ErrorCode::kCorruptFile, "PPM payload truncated");
    const std::uint8_t* px = bytes.data() + reader.pos();
    for (std::size_t i = 0; i < plane; ++i) {
      for (std::size_t c = 0; c < 3; ++c) img.data[c * plane + i] = px[3 * i + c] / 255.0;
    }
  } else {
    for (std::size_t i = 0; i < plane; ++i) {
      for (std::size_t c = 0; c < 3; ++c) {
        const std::size_t v = reader.next_uint();
        if (v > 255) raise(ErrorCode::kCorruptFile, "PPM sample exceeds maxval");
        img.data[c * plane + i] = static_cast<double>(v) / 255.0;
      }
    }
  }
  return img;
}

SoilImage decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) raise(ErrorCode::kCorruptFile, "raw tensor header truncated");
  SoilImage img;
  img.height = read_u32le(bytes.data() + 4);
  img.width = read_u32le(bytes.data() + 8);
  img.channels = read_u32le(bytes.data() + 12);
  const std::size_t n = img.height * img.width * img.channels;
  if (n == 0) raise(ErrorCode::kCorruptFile, "raw tensor has zero size");
  if (bytes.size() < 16 + 4 * n) raise(ErrorCode::kCorruptFile, "raw tensor payload truncated");
  img.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bits = read_u32le(bytes.data() + 16 + 4 * i);
    const double v = std::bit_cast<float>(bits);
    if (!(v >= 0.0 && v <= 1.0)) raise(ErrorCode::kCorruptFile, "raw tensor value outside [0,1]");
    img.data[i] = v;
  }
  return img;
}

double sample_clamped(const double* plane, std::size_t h, std::size_t w, double sy, double sx) {
  sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
  sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
  const auto y0 = static_cast<std::size_t>(std::floor(sy));
  const auto x0 = static_cast<std::size_t>(std::floor(sx));
  const std::size_t y1 = std::min(y0 + 1, h - 1);
  const std::size_t x1 = std::min(x0 + 1, w - 1);
  const double fy = sy - static_cast<double>(y0);
  const double fx = sx - static_cast<double>(x0);
  const double top = (1.0 - fx) * plane[y0 * w + x0] + fx * plane[y0 * w + x1];
  const double bottom = (1.0 - fx) * plane[y1 * w + x0] + fx * plane[y1 * w + x1];
  return (1.0 - fy) * top + fy * bottom;
}

// out(y, x) = in(map(y, x)) for every channel, with bilinear sampling.
template <typename Map>
Tensor resample(const Tensor& in, Map map) {
  Tensor out(in.shape);
  const std::size_t c_n = in.shape[0], h = in.shape[1], w = in.shape[2];
  for (std::size_t c = 0; c < c_n; ++c) {
    const double* src = in.data.data() + c * h * w;
    double* dst = out.data.data() + c * h * w;
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const auto [sy, sx] = map(static_cast<double>(y), static_cast<double>(x));
        dst[y * w + x] = sample_clamped(src, h, w, sy, sx);
      }
    }
  }
  return out;
}

}  // namespace

SoilImage decode_image_bytes(std::span<const std::uint8_t> bytes, std::string provenance) {
  if (bytes.size() < 2) raise(ErrorCode::kFormat, "image too short to carry a magic number");
  SoilImage img;
  if (bytes[0] == 'P' && bytes[1] == '6') {
    img = decode_ppm(bytes, true);
  } else if (bytes[0] == 'P' && bytes[1] == '3') {
    img = decode_ppm(bytes, false);
  } else if (bytes.size() >= 4 && std::memcmp(bytes.data(), "AGRT", 4) == 0) {
    img = decode_raw(bytes);
  } else {
    raise(ErrorCode::kFormat, "unsupported image magic '" + std::string(bytes.begin(), bytes.begin() + 2) + "'");
  }
  img.provenance = std::move(provenance);
  return img;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kFilesystem, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kFilesystem, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::kFilesystem, "write failed for '" + path.string() + "'");
}

SoilImage decode_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return decode_image_bytes(bytes, path.string());
}

std::vector<std::uint8_t> encode_ppm(const SoilImage& image, bool binary) {
  if (image.channels != 3) raise(ErrorCode::kShape, "PPM needs 3 channels");
  const std::string header =
      std::string(binary ? "P6" : "P3") + "\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t plane = image.width * image.height;
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const auto q = static_cast<unsigned>(std::lround(std::clamp(image.data[c * plane + i], 0.0, 1.0) * 255.0));
      if (binary) {
        out.push_back(static_cast<std::uint8_t>(q));
      } else {
        const auto s = std::to_string(q) + (c == 2 ? "\n" : " ");
        out.insert(out.end(), s.begin(), s.end());
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_raw_tensor(const SoilImage& image) {
  std::vector<std::uint8_t> out{'A', 'G', 'R', 'T'};
  append_u32le(out, static_cast<std::uint32_t>(image.height));
  append_u32le(out, static_cast<std::uint32_t>(image.width));
  append_u32le(out, static_cast<std::uint32_t>(image.channels));
  for (double v : image.data) append_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

Tensor preprocess_image(const SoilImage& image, const ImagePreprocessConfig& config) {
  if (image.channels != 3) {
    raise(ErrorCode::kShape, "expected 3 channels, got " + std::to_string(image.channels));
  }
  if (image.height == 0 || image.width == 0 || image.data.size() != 3 * image.height * image.width) {
    raise(ErrorCode::kShape, "image data does not match its dimensions");
  }
  if (config.height < 8 || config.width < 8) raise(ErrorCode::kContract, "target size must be at least 8x8");
  Tensor out(Shape{3, config.height, config.width});
  const double scale_y = static_cast<double>(image.height) / static_cast<double>(config.height);
  const double scale_x = static_cast<double>(image.width) / static_cast<double>(config.width);
  for (std::size_t c = 0; c < 3; ++c) {
    const double* src = image.data.data() + c * image.height * image.width;
    double* dst = out.data.data() + c * config.height * config.width;
    for (std::size_t y = 0; y < config.height; ++y) {
      const double sy = (static_cast<double>(y) + 0.5) * scale_y - 0.5;
      for (std::size_t x = 0; x < config.width; ++x) {
        const double sx = (static_cast<double>(x) + 0.5) * scale_x - 0.5;
        dst[y * config.width + x] = std::clamp(sample_clamped(src, image.height, image.width, sy, sx), 0.0, 1.0);
      }
    }
  }
  return out;
}

AugmentParams sample_augment_params(const AugmentPolicy& policy, Rng& rng) {
  AugmentParams p;
  p.flip = rng.bernoulli(policy.flip_probability);
  p.rotation_deg = rng.uniform(-policy.max_rotation_deg, policy.max_rotation_deg);
  p.zoom = rng.uniform(policy.zoom_min, policy.zoom_max);
  p.brightness = rng.uniform(policy.brightness_min, policy.brightness_max);
  return p;
}

Tensor apply_augmentation(const Tensor& image, const AugmentParams& params) {
  if (image.shape.size() != 3) raise(ErrorCode::kShape, "augmentation expects a CxHxW tensor");
  Tensor t = image;
  const std::size_t h = t.shape[1], w = t.shape[2];
  const double cy = (static_cast<double>(h) - 1.0) / 2.0;
  const double cx = (static_cast<double>(w) - 1.0) / 2.0;
  if (params.flip) {
    for (std::size_t c = 0; c < t.shape[0]; ++c) {
      for (std::size_t y = 0; y < h; ++y) {
        double* row = t.data.data() + (c * h + y) * w;
        std::reverse(row, row + w);
      }
    }
  }
  if (params.rotation_deg != 0.0) {
    const double rad = params.rotation_deg * std::numbers::pi / 180.0;
    const double cs = std::cos(rad), sn = std::sin(rad);
    // Inverse rotation maps each output pixel back into the source.
    t = resample(t, [&](double y, double x) {
      const double dy = y - cy, dx = x - cx;
      return std::pair{cy + sn * dx + cs * dy, cx + cs * dx - sn * dy};
    });
  }
  if (params.zoom != 1.0) {
    const double inv = 1.0 / params.zoom;
    t = resample(t, [&](double y, double x) { return std::pair{cy + (y - cy) * inv, cx + (x - cx) * inv}; });
  }
  for (double& v : t.data) v = std::clamp(v * params.brightness, 0.0, 1.0);
  return t;
}

Tensor augment(const Tensor& image, const AugmentPolicy& policy, Rng& rng) {
  return apply_augmentation(image, sample_augment_params(policy, rng));
}

}  // namespace agro
