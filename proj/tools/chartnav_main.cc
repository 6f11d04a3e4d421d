// chartnav command line: build a structure, navigate it from the terminal, or
// run the session service.

#include <termios.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "chartnav/data_table.h"
#include "chartnav/description.h"
#include "chartnav/errors.h"
#include "chartnav/navigation.h"
#include "chartnav/session_service.h"
#include "chartnav/spec_model.h"
#include "chartnav/structure.h"
#include "chartnav/terminal_navigator.h"

namespace {

using namespace chartnav;

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kUnreadable = 2,
  kConfig = 3,
  kValidation = 4,
  kParse = 5,
};

struct ChartOptions {
  std::string spec_path;
  std::string data_path;
  std::string variant = "encodingTree";
  std::string composition = "contextFirst";
  std::string verbosity = "high";
  std::string templates_path;
  std::vector<std::string> drill;
  std::vector<std::string> branch_order;
  int leaf_size = 1;
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kUnreadable, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

struct Loaded {
  std::shared_ptr<const AccessStructure> structure;
  DescriptionConfig description;
  Templates templates = Templates::Default();
};

Loaded Load(const ChartOptions& opts) {
  const std::string spec_text = ReadFile(opts.spec_path);
  const std::string data_text = ReadFile(opts.data_path);
  std::string templates_text;
  if (!opts.templates_path.empty()) templates_text = ReadFile(opts.templates_path);

  Loaded loaded;
  auto composition = CompositionFromString(opts.composition);
  auto verbosity = VerbosityFromString(opts.verbosity);
  auto variant = VariantFromString(opts.variant);
  if (!composition) throw CliError(kUsage, "unknown composition " + opts.composition);
  if (!verbosity) throw CliError(kUsage, "unknown verbosity " + opts.verbosity);
  if (!variant) throw CliError(kUsage, "unknown variant " + opts.variant);
  loaded.description.composition = *composition;
  loaded.description.verbosity = *verbosity;

  StructureConfig config;
  config.variant = *variant;
  config.binary_leaf_size = opts.leaf_size;
  config.branch_order = opts.branch_order;
  for (const auto& path : opts.drill) config.drill_orders.push_back(SplitCommas(path));

  const DataFormat format = opts.data_path.ends_with(".json") ? DataFormat::kStructured
                                                              : DataFormat::kDelimited;
  try {
    if (!templates_text.empty()) loaded.templates = Templates::Parse(templates_text);
    auto spec = std::make_shared<const ChartSpec>(ParseChartSpec(spec_text));
    LoadOptions load_options;
    load_options.allow_empty = true;
    auto data = std::make_shared<const DataTable>(LoadData(data_text, format, load_options));
    const auto issues = ValidateSpec(*spec, *data);
    if (const auto* issue = FirstError(issues)) {
      throw CliError(kValidation, issue->path + ": " + issue->message);
    }
    loaded.structure = BuildStructure(spec, data, config);
  } catch (const ConfigError& e) {
    throw CliError(kConfig, std::string("config error: ") + e.what());
  } catch (const SyntaxError& e) {
    throw CliError(kParse, std::string("syntax error: ") + e.what());
  } catch (const SchemaError& e) {
    throw CliError(kParse, std::string("schema error: ") + e.what());
  } catch (const ParseError& e) {
    throw CliError(kParse, std::string("data error: ") + e.what());
  }
  return loaded;
}

void AddChartOptions(CLI::App* cmd, ChartOptions& opts) {
  cmd->add_option("--spec", opts.spec_path, "Chart spec (JSON)")->required();
  cmd->add_option("--data", opts.data_path, "Data file (.csv or .json)")->required();
  cmd->add_option("--variant", opts.variant, "Structure variant")->capture_default_str();
  cmd->add_option("--composition", opts.composition, "contextFirst or dataFirst")
      ->capture_default_str();
  cmd->add_option("--verbosity", opts.verbosity, "high, medium or low")->capture_default_str();
  cmd->add_option("--templates", opts.templates_path, "Description templates (JSON)");
  cmd->add_option("--drill", opts.drill,
                  "Comma separated field path; repeat for several paths");
  cmd->add_option("--branch-order", opts.branch_order, "Top-level branch order")->delimiter(',');
  cmd->add_option("--leaf-size", opts.leaf_size, "Binary tree leaf size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

int RunBuild(const ChartOptions& opts, const std::string& dump_format, const std::string& out_path) {
  auto format = DumpFormatFromString(dump_format);
  if (!format) throw CliError(kUsage, "unknown dump format " + dump_format);
  Loaded loaded = Load(opts);
  const std::string dump = DumpStructure(*loaded.structure, *format);
  const std::string summary =
      DescribeStructureSummary(*loaded.structure, loaded.description, loaded.templates).text;
  if (out_path.empty()) {
    std::cout << dump << summary << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CliError(kUnreadable, "cannot write " + out_path);
    out << dump;
    std::cout << summary << "\n";
  }
  return kOk;
}

// Puts a terminal in raw mode for the lifetime of the object.
class RawTerminal {
 public:
  RawTerminal() {
    if (tcgetattr(STDIN_FILENO, &saved_) != 0) return;
    termios raw = saved_;
    raw.c_lflag &= ~static_cast<tcflag_t>(ICANON | ECHO);
    raw.c_cc[VMIN] = 1;
    raw.c_cc[VTIME] = 0;
    active_ = tcsetattr(STDIN_FILENO, TCSANOW, &raw) == 0;
  }
  ~RawTerminal() {
    if (active_) tcsetattr(STDIN_FILENO, TCSANOW, &saved_);
  }

 private:
  termios saved_{};
  bool active_ = false;
};

int RunNavigate(const ChartOptions& opts) {
  Loaded loaded = Load(opts);
  SessionState state = CreateSession(loaded.structure);

  if (!isatty(STDIN_FILENO)) {
    std::string input{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    bool consumed = false;
    auto next = [&]() -> std::optional<std::string> {
      if (consumed) return std::nullopt;
      consumed = true;
      return input;
    };
    return RunNavigator(state, next, std::cout, loaded.description, loaded.templates);
  }

  RawTerminal raw;
  std::cout << "Press ? for help, q to quit.\n";
  auto next = []() -> std::optional<std::string> {
    char buffer[64];
    ssize_t n = read(STDIN_FILENO, buffer, sizeof(buffer));
    if (n <= 0) return std::nullopt;
    return std::string(buffer, static_cast<std::size_t>(n));
  };
  return RunNavigator(state, next, std::cout, loaded.description, loaded.templates);
}

int RunServe(ServerOptions options, int idle_minutes) {
  SessionManager sessions{std::chrono::minutes(idle_minutes)};
  HttpServer server(sessions, options);
  int port = server.Bind();
  if (port < 0) {
    std::cerr << "cannot bind " << options.host << ":" << options.port << "\n";
    return kUnreadable;
  }
  std::cout << "Listening on http://" << options.host << ":" << port << "/" << std::endl;
  return server.Run() ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and navigate accessible chart structures"};
  app.require_subcommand(1);

  ChartOptions build_opts;
  std::string dump_format = "json";
  std::string out_path;
  auto* build = app.add_subcommand("build", "Print the structure dump and chart summary");
  AddChartOptions(build, build_opts);
  build->add_option("--dump-format", dump_format, "json or text")->capture_default_str();
  build->add_option("--out", out_path, "Write the dump here and print only the summary");

  ChartOptions nav_opts;
  auto* navigate = app.add_subcommand("navigate", "Navigate a chart from the terminal");
  AddChartOptions(navigate, nav_opts);

  ServerOptions server_options;
  int idle_minutes = 30;
  auto* serve = app.add_subcommand("serve", "Run the session service");
  serve->add_option("--port", server_options.port, "Port, 0 for any free port")
      ->capture_default_str();
  serve->add_option("--host", server_options.host, "Bind address")->capture_default_str();
  serve->add_option("--corpus", server_options.corpus_dir, "Directory served under /corpus/");
  serve->add_option("--static", server_options.static_dir, "Frontend bundle served under /");
  serve->add_option("--idle-minutes", idle_minutes, "Idle session eviction")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return RunBuild(build_opts, dump_format, out_path);
    if (*navigate) return RunNavigate(nav_opts);
    return RunServe(server_options, idle_minutes);
  } catch (const CliError& e) {
    std::cerr << "chartnav: " << e.what() << "\n";
    return e.code();
  } catch (const chartnav::Error& e) {
    std::cerr << "chartnav: " << e.what() << "\n";
    return kUsage;
  }
}
