#include "test_support.h"

#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

#include "chartnav/spec_model.h"
#include "json.hpp"

namespace chartnav_test {

using namespace chartnav;

std::string GalleryDir() { return CHARTNAV_GALLERY_DIR; }

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<GalleryEntry> LoadManifest() {
  auto manifest = nlohmann::json::parse(ReadFile(GalleryDir() + "/manifest.json"));
  std::vector<GalleryEntry> out;
  for (const auto& e : manifest) {
    GalleryEntry entry;
    entry.name = e.at("name");
    entry.spec_path = GalleryDir() + "/" + e.at("spec").get<std::string>();
    entry.data_path = GalleryDir() + "/" + e.at("data").get<std::string>();
    entry.variant = e.at("variant");
    entry.golden_path = GalleryDir() + "/" + e.at("golden").get<std::string>();
    if (e.contains("drill")) entry.drill = e.at("drill").get<std::vector<std::vector<std::string>>>();
    out.push_back(std::move(entry));
  }
  return out;
}

const GalleryEntry& Entry(std::string_view name) {
  static const std::vector<GalleryEntry> entries = LoadManifest();
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw std::runtime_error("no gallery entry " + std::string(name));
}

StructureConfig ConfigFor(const GalleryEntry& entry) {
  StructureConfig config;
  config.variant = *VariantFromString(entry.variant);
  config.drill_orders = entry.drill;
  return config;
}

std::shared_ptr<const AccessStructure> BuildEntry(const GalleryEntry& entry) {
  return BuildFromText(ReadFile(entry.spec_path), ReadFile(entry.data_path), ConfigFor(entry));
}

std::shared_ptr<const AccessStructure> BuildFromText(std::string_view spec_json,
                                                     std::string_view csv,
                                                     const StructureConfig& config) {
  auto spec = std::make_shared<const ChartSpec>(ParseChartSpec(spec_json));
  LoadOptions options;
  options.allow_empty = true;
  auto table = std::make_shared<const DataTable>(LoadData(csv, DataFormat::kDelimited, options));
  return BuildStructure(spec, table, config);
}

std::string RandomCsv(std::uint64_t seed, std::size_t rows) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> a(-50, 150);
  std::uniform_int_distribution<int> b(0, 40);
  std::uniform_int_distribution<int> c(0, 5);
  std::uniform_int_distribution<int> day(1, 28);
  std::uniform_int_distribution<int> month(1, 12);
  std::bernoulli_distribution null(0.05);
  const char* cats[] = {"red", "green", "blue", "cyan", "gold", "plum"};
  std::ostringstream out;
  out << "a,b,c,d\n";
  for (std::size_t i = 0; i < rows; ++i) {
    if (null(rng)) out << "";
    else out << static_cast<double>(static_cast<long>(a(rng) * 100)) / 100;
    out << "," << b(rng) << ",";
    if (null(rng)) out << "NA";
    else out << cats[c(rng)];
    char date[16];
    std::snprintf(date, sizeof(date), "2021-%02d-%02d", month(rng), day(rng));
    out << "," << date << "\n";
  }
  return out.str();
}

std::string RandomScatterSpec() {
  return R"({
    "mark": "point",
    "encoding": {
      "x": {"field": "a", "type": "quantitative"},
      "y": {"field": "b", "type": "quantitative"},
      "color": {"field": "c", "type": "nominal"}
    }
  })";
}

std::vector<NodeIndex> InnerNodes(const AccessStructure& s) {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < s.size(); ++i) {
    if (!s.node(i).children.empty()) out.push_back(i);
  }
  return out;
}

std::vector<NodeIndex> NodesOfKind(const AccessStructure& s, NodeKind kind) {
  std::vector<NodeIndex> out;
  for (NodeIndex i = 0; i < s.size(); ++i) {
    if (s.node(i).kind == kind) out.push_back(i);
  }
  return out;
}

}  // namespace chartnav_test
