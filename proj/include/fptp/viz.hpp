#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fptp/harness.hpp"

namespace fptp {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

struct Palette {
  std::map<PlanId, Rgb> colors;
  Rgb unvisited{128, 128, 128};

  // IXSCAN_A orange, IXSCAN_B green, COLLSCAN yellow, IXSCAN_AB blue.
  static Palette defaults();
  // Throws Error for plans without a color.
  Rgb color_of(const PlanId& plan) const;
};

// Ratio 1 is white, ratios >= r_max are full red (200,0,0), linear between.
struct HeatmapScale {
  double r_max = 4.0;

  Rgb color_for(double ratio) const;
};

class Image {
 public:
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y * width_ + x)]; }
  const Rgb& at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y * width_ + x)];
  }
  const std::vector<Rgb>& pixels() const { return pixels_; }

 private:
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

enum class DiagramField { kChosen, kOptimal };

// Cell (i, j) is drawn at pixel (i, D-1-j): e_A grows rightwards, e_B upwards.
// Unvisited cells (and cells with no optimal plan yet) are gray.
Image plan_diagram(const ExperimentGrid& grid, DiagramField field, const Palette& palette);
Image impact_heatmap(const ExperimentGrid& grid, const HeatmapScale& scale);

// Binary PPM: "P6 <w> <h> 255\n" followed by RGB triples.
std::string encode_ppm(const Image& image);
// SVG 1.1, one rect per pixel.
std::string encode_svg(const Image& image, int cell_size = 10);

// i,j,e_A,e_B,chosen,optimal,ratio,t_COLLSCAN,t_IXSCAN_A,t_IXSCAN_B,t_IXSCAN_AB
std::string results_csv(const ExperimentGrid& grid);

nlohmann::json provenance_to_json(const Provenance& provenance);
Provenance provenance_from_json(const nlohmann::json& j);

// {provenance, accuracy, impact_pct, per_plan_cell_counts}
nlohmann::json summary_json(const ExperimentGrid& grid, const SummaryMetrics& metrics);
// "summary_accuracy=34.00_impact=170.00.json"
std::string summary_filename(const SummaryMetrics& metrics);

struct ReportOptions {
  Palette palette = Palette::defaults();
  HeatmapScale scale;
  bool svg = false;
};

struct ReportFiles {
  std::filesystem::path chosen_ppm;
  std::filesystem::path optimal_ppm;
  std::filesystem::path impact_ppm;
  std::filesystem::path results_csv;
  std::filesystem::path summary_json;
  std::vector<std::filesystem::path> extra;  // SVGs when requested
};

// Creates `dir` if needed. Throws IoError naming the failing path.
ReportFiles write_report(const ExperimentGrid& grid, const SummaryMetrics& metrics,
                         const std::filesystem::path& dir, const ReportOptions& options = {});

void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fptp
