#include "fptp/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fptp/errors.hpp"

namespace fptp {

Palette Palette::defaults() {
  Palette p;
  p.colors[PlanId::index_scan("A_1")] = {230, 126, 34};
  p.colors[PlanId::index_scan("B_1")] = {39, 174, 96};
  p.colors[PlanId::collscan()] = {241, 196, 15};
  p.colors[PlanId::covered_scan("A_1_B_1")] = {41, 128, 185};
  return p;
}

Rgb Palette::color_of(const PlanId& plan) const {
  auto it = colors.find(plan);
  if (it == colors.end()) throw Error("no palette color for plan " + plan.to_string());
  return it->second;
}

Rgb HeatmapScale::color_for(double ratio) const {
  const double span = r_max - 1.0;
  double t = span > 0.0 ? (ratio - 1.0) / span : (ratio > 1.0 ? 1.0 : 0.0);
  if (std::isnan(t)) t = 1.0;
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](double from, double to) {
    return static_cast<std::uint8_t>(std::lround(from + t * (to - from)));
  };
  return {lerp(255, 200), lerp(255, 0), lerp(255, 0)};
}

Image::Image(int width, int height, Rgb fill)
    : width_(width),
      height_(height),
      pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

Image plan_diagram(const ExperimentGrid& grid, DiagramField field, const Palette& palette) {
  const int d = grid.dim();
  Image image(d, d, palette.unvisited);
  for (const auto& cell : grid.cells()) {
    if (!cell.visited) continue;
    if (field == DiagramField::kChosen) {
      image.at(cell.i, d - 1 - cell.j) = palette.color_of(cell.chosen);
    } else if (cell.optimal) {
      image.at(cell.i, d - 1 - cell.j) = palette.color_of(*cell.optimal);
    }
  }
  return image;
}

Image impact_heatmap(const ExperimentGrid& grid, const HeatmapScale& scale) {
  const int d = grid.dim();
  Image image(d, d, Palette{}.unvisited);
  for (const auto& cell : grid.cells()) {
    if (!cell.visited || !cell.optimal) continue;
    image.at(cell.i, d - 1 - cell.j) = scale.color_for(cell.ratio);
  }
  return image;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6 " + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + " 255\n";
  out.reserve(out.size() + image.pixels().size() * 3);
  for (const Rgb& px : image.pixels()) {
    out += static_cast<char>(px.r);
    out += static_cast<char>(px.g);
    out += static_cast<char>(px.b);
  }
  return out;
}

std::string encode_svg(const Image& image, int cell_size) {
  const int w = image.width() * cell_size;
  const int h = image.height() * cell_size;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) + "\">\n";
  char buf[160];
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const Rgb& px = image.at(x, y);
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>\n",
                    x * cell_size, y * cell_size, cell_size, cell_size, px.r, px.g, px.b);
      out += buf;
    }
  }
  out += "</svg>\n";
  return out;
}

namespace {

const char* const kCsvPlans[] = {"COLLSCAN", "IXSCAN_A", "IXSCAN_B", "IXSCAN_AB"};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string results_csv(const ExperimentGrid& grid) {
  std::string out = "i,j,e_A,e_B,chosen,optimal,ratio";
  for (const char* p : kCsvPlans) out += std::string(",t_") + p;
  out += '\n';
  for (int i = 0; i < grid.dim(); ++i) {
    for (int j = 0; j < grid.dim(); ++j) {
      const GridCell& cell = grid.cell(i, j);
      if (!cell.visited) continue;
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(cell.e_a) +
             ',' + format_double(cell.e_b) + ',' + cell.chosen.to_string() + ',' +
             (cell.optimal ? cell.optimal->to_string() : std::string()) + ',' +
             (cell.optimal ? format_double(cell.ratio) : std::string());
      for (const char* name : kCsvPlans) {
        out += ',';
        auto it = cell.per_plan.find(parse_plan_hint(name));
        if (it != cell.per_plan.end()) out += format_double(it->second.mean);
      }
      out += '\n';
    }
  }
  return out;
}

nlohmann::json provenance_to_json(const Provenance& p) {
  nlohmann::json j;
  j["scenario"] = std::string(to_string(p.scenario));
  j["variant"] = std::string(to_string(p.variant));
  j["n"] = p.n;
  j["dataset_fingerprint"] = p.dataset_fingerprint;
  j["dim"] = p.dim;
  j["seed"] = p.seed;
  j["cost"] = {{"c_seq", p.cost.seq_scan}, {"c_idx", p.cost.index_entry},
               {"c_fetch", p.cost.fetch}};
  j["knobs"] = {{"evaluation_works", p.knobs.evaluation_works},
                {"coll_fraction", p.knobs.coll_fraction},
                {"max_results", p.knobs.max_results}};
  j["reps"] = p.reps;
  j["timing"] = std::string(to_string(p.timing));
  j["noise"] = {{"jitter", p.noise.jitter},
                {"spike_probability", p.noise.spike_probability},
                {"spike_factor", p.noise.spike_factor},
                {"seed", p.noise.seed}};
  j["cache_primed"] =
      p.cache_primed ? nlohmann::json(p.cache_primed->to_string()) : nlohmann::json(nullptr);
  j["cache_mode"] = std::string(to_string(p.cache_mode));
  return j;
}

Provenance provenance_from_json(const nlohmann::json& j) {
  Provenance p;
  p.scenario = parse_scenario(j.at("scenario").get<std::string>());
  p.variant = parse_variant(j.at("variant").get<std::string>());
  p.n = j.at("n").get<std::size_t>();
  p.dataset_fingerprint = j.at("dataset_fingerprint").get<std::uint64_t>();
  p.dim = j.at("dim").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  const auto& cost = j.at("cost");
  p.cost = {cost.at("c_seq").get<double>(), cost.at("c_idx").get<double>(),
            cost.at("c_fetch").get<double>()};
  const auto& knobs = j.at("knobs");
  p.knobs.evaluation_works = knobs.at("evaluation_works").get<std::uint64_t>();
  p.knobs.coll_fraction = knobs.at("coll_fraction").get<double>();
  p.knobs.max_results = knobs.at("max_results").get<std::uint64_t>();
  p.reps = j.at("reps").get<int>();
  p.timing = parse_timing_mode(j.at("timing").get<std::string>());
  const auto& noise = j.at("noise");
  p.noise.jitter = noise.at("jitter").get<double>();
  p.noise.spike_probability = noise.at("spike_probability").get<double>();
  p.noise.spike_factor = noise.at("spike_factor").get<double>();
  p.noise.seed = noise.at("seed").get<std::uint64_t>();
  if (!j.at("cache_primed").is_null()) {
    p.cache_primed = parse_plan_hint(j.at("cache_primed").get<std::string>());
  }
  p.cache_mode = parse_cache_mode(j.at("cache_mode").get<std::string>());
  return p;
}

nlohmann::json summary_json(const ExperimentGrid& grid, const SummaryMetrics& metrics) {
  std::map<std::string, std::size_t> chosen;
  std::map<std::string, std::size_t> optimal;
  for (const auto& cell : grid.cells()) {
    if (!cell.visited) continue;
    ++chosen[cell.chosen.to_string()];
    if (cell.optimal) ++optimal[cell.optimal->to_string()];
  }
  nlohmann::json j;
  j["provenance"] = provenance_to_json(grid.provenance);
  j["accuracy"] = metrics.accuracy;
  j["impact_pct"] = metrics.impact_pct;
  j["visited_cells"] = grid.visited_count();
  j["per_plan_cell_counts"] = {{"chosen", chosen}, {"optimal", optimal}};
  return j;
}

std::string summary_filename(const SummaryMetrics& metrics) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "summary_accuracy=%.2f_impact=%.2f.json",
                metrics.accuracy * 100.0, metrics.impact_pct);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ReportFiles write_report(const ExperimentGrid& grid, const SummaryMetrics& metrics,
                         const std::filesystem::path& dir, const ReportOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  const Image chosen = plan_diagram(grid, DiagramField::kChosen, options.palette);
  const Image optimal = plan_diagram(grid, DiagramField::kOptimal, options.palette);
  const Image impact = impact_heatmap(grid, options.scale);

  ReportFiles files;
  files.chosen_ppm = dir / "chosen.ppm";
  files.optimal_ppm = dir / "optimal.ppm";
  files.impact_ppm = dir / "impact.ppm";
  files.results_csv = dir / "results.csv";
  files.summary_json = dir / summary_filename(metrics);

  write_file(files.chosen_ppm, encode_ppm(chosen));
  write_file(files.optimal_ppm, encode_ppm(optimal));
  write_file(files.impact_ppm, encode_ppm(impact));
  write_file(files.results_csv, results_csv(grid));
  write_file(files.summary_json, summary_json(grid, metrics).dump(2) + "\n");

  if (options.svg) {
    for (const auto& [name, image] : {std::pair{"chosen.svg", &chosen},
                                      std::pair{"optimal.svg", &optimal},
                                      std::pair{"impact.svg", &impact}}) {
      files.extra.push_back(dir / name);
      write_file(files.extra.back(), encode_svg(*image));
    }
  }
  return files;
}

}  // namespace fptp
