#include "cfjlas/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cfjlas::sim {

using nlohmann::json;

UserState TruthDistribution::sample(std::mt19937_64& rng, double c) const {
  std::uniform_real_distribution<double> beta_draw(beta_low_s, beta_high_s);
  std::uniform_real_distribution<double> omega_draw(omega_low_ppm,
                                                    omega_high_ppm);
  const auto [beta_m, omega_mps] =
      to_meter_units(beta_draw(rng), omega_draw(rng), c);
  UserState state;
  state.p = position;
  state.v = velocity;
  state.beta = beta_m;
  state.omega = omega_mps;
  return state;
}

Scenario ScenarioSpec::build() const {
  Scenario scenario;
  scenario.K = K;
  scenario.c = c;
  scenario.anchors.reserve(anchors.size());
  for (const AnchorSpec& spec : anchors) {
    AnchorNode node;
    node.id = spec.id;
    node.position = spec.start_position + spec.velocity * spec.slot_time_s;
    node.clock_offset = spec.clock_offset_s * c;
    node.slot_time = spec.slot_time_s;
    scenario.anchors.push_back(std::move(node));
  }
  return validate_scenario(std::move(scenario));
}

bool operator==(const AnchorSpec& a, const AnchorSpec& b) {
  return a.id == b.id && a.start_position == b.start_position &&
         a.velocity == b.velocity && a.clock_offset_s == b.clock_offset_s &&
         a.slot_time_s == b.slot_time_s;
}

bool operator==(const TruthDistribution& a, const TruthDistribution& b) {
  return a.position == b.position && a.velocity == b.velocity &&
         a.beta_low_s == b.beta_low_s && a.beta_high_s == b.beta_high_s &&
         a.omega_low_ppm == b.omega_low_ppm &&
         a.omega_high_ppm == b.omega_high_ppm;
}

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) {
  return a.K == b.K && a.c == b.c && a.anchors == b.anchors &&
         a.truth == b.truth;
}

ScenarioSpec default_scenario() {
  ScenarioSpec spec;
  spec.K = 2;
  spec.c = kSpeedOfLight;

  // Three anchors at the back, five forming a triangle at the front, the
  // user node near the center. Anchors drift at 2 m/s along +x, slots are
  // 5 ms apart in id order. The formation extent is what makes 200 m
  // initial-position errors recoverable for the Gauss-Newton baseline about
  // 87% of the time; shrinking it tightens that basin proportionally.
  const double anchor_coords[8][2] = {{-400.0, 160.0}, {-400.0, -160.0},
                                      {240.0, 240.0},  {240.0, -240.0},
                                      {480.0, 0.0},    {360.0, 120.0},
                                      {360.0, -120.0}, {-400.0, 0.0}};
  for (int i = 0; i < 8; ++i) {
    AnchorSpec anchor;
    anchor.id = i + 1;
    anchor.start_position =
        Eigen::Vector2d(anchor_coords[i][0], anchor_coords[i][1]);
    anchor.velocity = Eigen::Vector2d(2.0, 0.0);
    anchor.clock_offset_s = 0.0;
    anchor.slot_time_s = 0.005 * i;
    spec.anchors.push_back(std::move(anchor));
  }

  spec.truth.position = Eigen::Vector2d(0.0, 0.0);
  spec.truth.velocity = Eigen::Vector2d(5.0, 0.0);
  spec.truth.beta_low_s = -1e-5;
  spec.truth.beta_high_s = 1e-5;
  spec.truth.omega_low_ppm = -20.0;
  spec.truth.omega_high_ppm = 20.0;
  return spec;
}

namespace {

[[noreturn]] void missing_field(const std::string& context,
                                const std::string& field) {
  throw ParseError("scenario file: missing field " + context + field);
}

void reject_unknown_keys(const json& obj, const std::string& context,
                         std::initializer_list<const char*> known) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ParseError("scenario file: unknown key " + context + item.key());
    }
  }
}

double get_number(const json& obj, const std::string& context,
                  const std::string& field) {
  if (!obj.contains(field)) missing_field(context, field);
  const json& v = obj.at(field);
  if (!v.is_number()) {
    throw ParseError("scenario file: field " + context + field +
                     " must be a number");
  }
  return v.get<double>();
}

int get_int(const json& obj, const std::string& context,
            const std::string& field) {
  if (!obj.contains(field)) missing_field(context, field);
  const json& v = obj.at(field);
  if (!v.is_number_integer()) {
    throw ParseError("scenario file: field " + context + field +
                     " must be an integer");
  }
  return v.get<int>();
}

Eigen::VectorXd get_vector(const json& obj, const std::string& context,
                           const std::string& field, int expected_size) {
  if (!obj.contains(field)) missing_field(context, field);
  const json& v = obj.at(field);
  if (!v.is_array() || static_cast<int>(v.size()) != expected_size) {
    std::ostringstream msg;
    msg << "scenario file: field " << context << field << " must be an array of "
        << expected_size << " numbers";
    throw ParseError(msg.str());
  }
  Eigen::VectorXd out(expected_size);
  for (int i = 0; i < expected_size; ++i) {
    if (!v[i].is_number()) {
      std::ostringstream msg;
      msg << "scenario file: entry " << i << " of " << context << field
          << " must be a number";
      throw ParseError(msg.str());
    }
    out(i) = v[i].get<double>();
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number for the diagnostic.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    std::ostringstream msg;
    msg << "scenario file " << path << ": line " << line << ": " << e.what();
    throw ParseError(msg.str());
  }

  if (!root.is_object()) {
    throw ParseError("scenario file: top level must be an object");
  }
  reject_unknown_keys(root, "", {"K", "c", "anchors", "truth"});

  ScenarioSpec spec;
  spec.K = get_int(root, "", "K");
  spec.c = get_number(root, "", "c");

  if (!root.contains("anchors")) missing_field("", "anchors");
  const json& anchors = root.at("anchors");
  if (!anchors.is_array()) {
    throw ParseError("scenario file: anchors must be an array");
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    std::ostringstream ctx;
    ctx << "anchors[" << i << "].";
    const json& a = anchors[i];
    if (!a.is_object()) {
      throw ParseError("scenario file: anchors[" + std::to_string(i) +
                       "] must be an object");
    }
    reject_unknown_keys(a, ctx.str(),
                        {"id", "start_position", "velocity", "clock_offset_s",
                         "slot_time_s"});
    AnchorSpec anchor;
    anchor.id = get_int(a, ctx.str(), "id");
    anchor.start_position = get_vector(a, ctx.str(), "start_position", spec.K);
    anchor.velocity = get_vector(a, ctx.str(), "velocity", spec.K);
    anchor.clock_offset_s = get_number(a, ctx.str(), "clock_offset_s");
    anchor.slot_time_s = get_number(a, ctx.str(), "slot_time_s");
    spec.anchors.push_back(std::move(anchor));
  }

  if (!root.contains("truth")) missing_field("", "truth");
  const json& truth = root.at("truth");
  if (!truth.is_object()) {
    throw ParseError("scenario file: truth must be an object");
  }
  reject_unknown_keys(truth, "truth.",
                      {"position", "velocity", "beta_bounds_s",
                       "omega_bounds_ppm"});
  spec.truth.position = get_vector(truth, "truth.", "position", spec.K);
  spec.truth.velocity = get_vector(truth, "truth.", "velocity", spec.K);
  const Eigen::VectorXd beta_bounds =
      get_vector(truth, "truth.", "beta_bounds_s", 2);
  const Eigen::VectorXd omega_bounds =
      get_vector(truth, "truth.", "omega_bounds_ppm", 2);
  spec.truth.beta_low_s = beta_bounds(0);
  spec.truth.beta_high_s = beta_bounds(1);
  spec.truth.omega_low_ppm = omega_bounds(0);
  spec.truth.omega_high_ppm = omega_bounds(1);
  if (spec.truth.beta_low_s > spec.truth.beta_high_s ||
      spec.truth.omega_low_ppm > spec.truth.omega_high_ppm) {
    throw ParseError("scenario file: truth bounds must be ordered low, high");
  }

  spec.build();  // run full validation before returning
  return spec;
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  json root;
  root["K"] = spec.K;
  root["c"] = spec.c;
  json anchors = json::array();
  for (const AnchorSpec& a : spec.anchors) {
    json anchor;
    anchor["id"] = a.id;
    anchor["start_position"] = vector_to_json(a.start_position);
    anchor["velocity"] = vector_to_json(a.velocity);
    anchor["clock_offset_s"] = a.clock_offset_s;
    anchor["slot_time_s"] = a.slot_time_s;
    anchors.push_back(std::move(anchor));
  }
  root["anchors"] = std::move(anchors);
  json truth;
  truth["position"] = vector_to_json(spec.truth.position);
  truth["velocity"] = vector_to_json(spec.truth.velocity);
  truth["beta_bounds_s"] = {spec.truth.beta_low_s, spec.truth.beta_high_s};
  truth["omega_bounds_ppm"] = {spec.truth.omega_low_ppm,
                               spec.truth.omega_high_ppm};
  root["truth"] = std::move(truth);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write scenario file: " + path);
  out << root.dump(2) << "\n";
  if (!out) throw IoError("error while writing scenario file: " + path);
}

}  // namespace cfjlas::sim
