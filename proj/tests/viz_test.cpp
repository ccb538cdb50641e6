#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fptp/errors.hpp"
#include "fptp/viz.hpp"

namespace fptp {
namespace {

const Rgb kOrange{230, 126, 34};
const Rgb kGreen{39, 174, 96};
const Rgb kYellow{241, 196, 15};
const Rgb kBlue{41, 128, 185};
const Rgb kGray{128, 128, 128};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentGrid filled_grid(int dim, const PlanId& chosen, double chosen_mean) {
  ExperimentGrid grid(dim);
  for (auto& cell : grid.cells()) {
    cell.visited = true;
    cell.chosen = chosen;
    cell.per_plan[chosen].mean = chosen_mean;
    cell.per_plan[PlanId::collscan()].mean = 1.0;
  }
  return grid;
}

TEST(Palette, Defaults) {
  auto p = Palette::defaults();
  EXPECT_EQ(p.color_of(PlanId::index_scan("A_1")), kOrange);
  EXPECT_EQ(p.color_of(PlanId::index_scan("B_1")), kGreen);
  EXPECT_EQ(p.color_of(PlanId::collscan()), kYellow);
  EXPECT_EQ(p.color_of(PlanId::covered_scan("A_1_B_1")), kBlue);
  EXPECT_EQ(p.unvisited, kGray);
  EXPECT_THROW(p.color_of(PlanId::index_scan("C_1")), Error);
}

TEST(HeatmapScale, EndpointsAndInterpolation) {
  HeatmapScale s;
  EXPECT_EQ(s.color_for(1.0), (Rgb{255, 255, 255}));
  EXPECT_EQ(s.color_for(4.0), (Rgb{200, 0, 0}));
  EXPECT_EQ(s.color_for(40.0), (Rgb{200, 0, 0}));
  EXPECT_EQ(s.color_for(0.5), (Rgb{255, 255, 255}));
  EXPECT_EQ(s.color_for(2.5), (Rgb{228, 128, 128}));  // halfway, rounded
}

TEST(PlanDiagram, OrientationAndUnvisited) {
  ExperimentGrid grid(3);
  grid.cell(0, 0).visited = true;
  grid.cell(0, 0).chosen = PlanId::index_scan("A_1");
  grid.cell(2, 2).visited = true;
  grid.cell(2, 2).chosen = PlanId::index_scan("B_1");
  auto img = plan_diagram(grid, DiagramField::kChosen, Palette::defaults());
  EXPECT_EQ(img.at(0, 2), kOrange);  // e_A low, e_B low: bottom left
  EXPECT_EQ(img.at(2, 0), kGreen);   // top right
  int gray = 0;
  for (const auto& px : img.pixels()) gray += px == kGray ? 1 : 0;
  EXPECT_EQ(gray, 7);
}

TEST(PlanDiagram, OneUnvisitedCellIsOneGrayPixel) {
  auto grid = filled_grid(4, PlanId::index_scan("A_1"), 1.0);
  grid.cell(1, 2).visited = false;
  auto img = plan_diagram(grid, DiagramField::kChosen, Palette::defaults());
  int gray = 0;
  for (const auto& px : img.pixels()) gray += px == kGray ? 1 : 0;
  EXPECT_EQ(gray, 1);
  EXPECT_EQ(img.at(1, 1), kGray);
}

TEST(PlanDiagram, MissingPaletteEntryIsAnError) {
  auto grid = filled_grid(2, PlanId::index_scan("Z_1"), 1.0);
  EXPECT_THROW(plan_diagram(grid, DiagramField::kChosen, Palette::defaults()), Error);
}

TEST(ImpactHeatmap, PerfectGridIsWhite) {
  auto grid = filled_grid(5, PlanId::index_scan("A_1"), 1.0);
  finalize(grid);
  auto img = impact_heatmap(grid, HeatmapScale{});
  for (const auto& px : img.pixels()) EXPECT_EQ(px, (Rgb{255, 255, 255}));
}

TEST(ImpactHeatmap, SaturatesAtRmax) {
  auto grid = filled_grid(2, PlanId::index_scan("A_1"), 5.0);
  finalize(grid);
  auto img = impact_heatmap(grid, HeatmapScale{});
  for (const auto& px : img.pixels()) EXPECT_EQ(px, (Rgb{200, 0, 0}));
}

TEST(Ppm, HeaderAndPayload) {
  Image img(50, 50, kBlue);
  auto bytes = encode_ppm(img);
  const std::string header = "P6 50 50 255\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  EXPECT_EQ(bytes.size(), header.size() + 50 * 50 * 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[header.size()]), 41);
}

TEST(Svg, OneRectPerPixel) {
  auto svg = encode_svg(Image(3, 2, kGreen), 5);
  std::size_t rects = 0;
  for (auto pos = svg.find("<rect"); pos != std::string::npos; pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  EXPECT_EQ(rects, 6u);
  EXPECT_NE(svg.find("rgb(39,174,96)"), std::string::npos);
}

TEST(SummaryFilename, PercentFormatting) {
  EXPECT_EQ(summary_filename({0.34, 170.0}), "summary_accuracy=34.00_impact=170.00.json");
  EXPECT_EQ(summary_filename({0.5196, 26.234}), "summary_accuracy=51.96_impact=26.23.json");
}

TEST(ResultsCsv, HeaderAndRows) {
  auto grid = filled_grid(2, PlanId::index_scan("A_1"), 3.0);
  grid.cell(1, 1).visited = false;
  finalize(grid);
  auto csv = results_csv(grid);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i,j,e_A,e_B,chosen,optimal,ratio,t_COLLSCAN,t_IXSCAN_A,t_IXSCAN_B,t_IXSCAN_AB");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0,0,IXSCAN_A,COLLSCAN,3,1,3,,");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Provenance, JsonRoundTrip) {
  Provenance p;
  p.scenario = Scenario::kCovering;
  p.variant = OptimizerVariant::kMod;
  p.n = 12345;
  p.dataset_fingerprint = 0xfedcba9876543210ULL;
  p.dim = 17;
  p.seed = 99;
  p.cost = {2.0, 0.5, 8.0};
  p.knobs.evaluation_works = 500;
  p.knobs.coll_fraction = 0.25;
  p.knobs.max_results = 50;
  p.reps = 7;
  p.timing = TimingMode::kWallClock;
  p.noise = {0.1, 0.2, 30.0, 4};
  p.cache_primed = PlanId::covered_scan("A_1_B_1");
  p.cache_mode = CacheMode::kOn;
  EXPECT_EQ(provenance_from_json(provenance_to_json(p)), p);
  Provenance plain;
  EXPECT_EQ(provenance_from_json(provenance_to_json(plain)), plain);
}

TEST(WriteReport, FiveFilesDeterministic) {
  auto coll = generate_dataset(3000, Distribution::kUniformDistinct, 5);
  auto setup = make_scenario(coll, Scenario::kBothIndexed);
  SweepOptions sweep_opts;
  sweep_opts.dim = 6;
  sweep_opts.seed = 1;
  auto dir = std::filesystem::temp_directory_path() / "fptp_report_test";
  std::filesystem::remove_all(dir);

  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    auto r = run_experiment(coll, setup, OptimizerVariant::kVanilla, sweep_opts, MeasureOptions{});
    auto files = write_report(r.grid, r.metrics, dir / std::to_string(run));
    std::vector<std::string> contents;
    for (const auto& p : {files.chosen_ppm, files.optimal_ppm, files.impact_ppm, files.results_csv,
                          files.summary_json}) {
      ASSERT_TRUE(std::filesystem::exists(p)) << p;
      contents.push_back(read_file(p));
    }
    EXPECT_EQ(contents[0].substr(0, 11), "P6 6 6 255\n");
    EXPECT_EQ(files.summary_json.filename().string(), summary_filename(r.metrics));
    auto summary = nlohmann::json::parse(contents[4]);
    EXPECT_EQ(summary.at("visited_cells").get<int>(), 36);
    EXPECT_DOUBLE_EQ(summary.at("accuracy").get<double>(), r.metrics.accuracy);
    EXPECT_EQ(provenance_from_json(summary.at("provenance")), r.grid.provenance);
    if (run == 0) {
      first = contents;
    } else {
      EXPECT_EQ(contents, first);
    }
    EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir / std::to_string(run)),
                            std::filesystem::directory_iterator{}),
              5);
  }
  std::filesystem::remove_all(dir);
}

TEST(WriteReport, UnwritableDirectory) {
  ExperimentGrid grid(1);
  EXPECT_THROW(write_report(grid, {}, "/proc/fptp_cannot_write_here"), IoError);
}

}  // namespace
}  // namespace fptp
