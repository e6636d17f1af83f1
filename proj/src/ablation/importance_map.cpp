/*
 * Copyright 2026 The Artic Authors.
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

#include "artic/ablation/importance_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include <png.h>

#include "artic/errors.hpp"

namespace artic::ablation {

using nlohmann::json;

json ReferenceFrame::to_json() const {
  json points = json::array();
  for (std::size_t i = 0; i < point_indices.size(); ++i) {
    const auto row = static_cast<Index>(i);
    points.push_back({{"point", point_indices[i]}, {"x", positions(row, 0)}, {"y", positions(row, 1)}});
  }
  return {{"points", points}};
}

ReferenceFrame ReferenceFrame::from_json(const json& doc) {
  ReferenceFrame frame;
  try {
    const auto& points = doc.at("points");
    frame.positions.resize(static_cast<Index>(points.size()), 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
      frame.point_indices.push_back(points[i].at("point").get<int>());
      frame.positions(static_cast<Index>(i), 0) = points[i].at("x").get<double>();
      frame.positions(static_cast<Index>(i), 1) = points[i].at("y").get<double>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad reference frame: ") + e.what());
  }
  return frame;
}

void write_importance_csv(const FeatureImportanceReport& report, const std::vector<FeatureColumn>& map,
                          const std::filesystem::path& path) {
  if (map.size() != report.scores.size()) throw ShapeError("feature map and report sizes differ");
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << "point,axis,score,rank\n";
  out.precision(10);
  for (std::size_t f = 0; f < map.size(); ++f) {
    out << map[f].point_index << ',' << (map[f].axis == 0 ? 'x' : 'y') << ',';
    if (std::isfinite(report.scores[f])) {
      out << report.scores[f];
    } else {
      out << "inf";
    }
    out << ',' << report.ranks[f] << '\n';
  }
}

std::vector<double> point_shades(const FeatureImportanceReport& report, const std::vector<FeatureColumn>& map,
                                 const ReferenceFrame& frame) {
  if (map.size() != report.scores.size()) throw ShapeError("feature map and report sizes differ");
  const std::vector<double> ranks = fractional_ranks(report.scores);
  const double worst = static_cast<double>(std::max<std::size_t>(ranks.size(), 2));
  std::vector<double> shades;
  for (int point : frame.point_indices) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < map.size(); ++f) {
      if (map[f].point_index == point) best = std::min(best, ranks[f]);
    }
    shades.push_back(std::isfinite(best) ? (best - 1.0) / (worst - 1.0) : 1.0);
  }
  return shades;
}

namespace {

struct Rgb {
  unsigned char r, g, b;
};

// 0 -> dark green, 1 -> pale green.
Rgb shade_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto mix = [t](double dark, double light) { return static_cast<unsigned char>(std::lround(dark + t * (light - dark))); };
  return {mix(0, 229), mix(68, 245), mix(27, 224)};
}

void write_png(const std::filesystem::path& path, int width, int height, const std::vector<unsigned char>& rgb) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw LoadError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void render_importance_map(const FeatureImportanceReport& report, const std::vector<FeatureColumn>& map,
                           const ReferenceFrame& frame, const std::filesystem::path& png_path,
                           const ImportanceMapOptions& options) {
  const std::vector<double> shades = point_shades(report, map, frame);
  const int size = kGridSize * options.scale;
  std::vector<unsigned char> rgb(static_cast<std::size_t>(size) * size * 3, 255);
  for (std::size_t i = 0; i < shades.size(); ++i) {
    const Rgb color = shade_color(shades[i]);
    const double cx = frame.positions(static_cast<Index>(i), 0) * options.scale;
    const double cy = frame.positions(static_cast<Index>(i), 1) * options.scale;
    const int r = options.radius;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy > r * r) continue;
        const auto x = static_cast<int>(std::lround(cx)) + dx;
        const auto y = static_cast<int>(std::lround(cy)) + dy;
        if (x < 0 || y < 0 || x >= size || y >= size) continue;
        const std::size_t at = (static_cast<std::size_t>(y) * size + x) * 3;
        rgb[at] = color.r;
        rgb[at + 1] = color.g;
        rgb[at + 2] = color.b;
      }
    }
  }
  write_png(png_path, size, size, rgb);
}

}  // namespace artic::ablation
